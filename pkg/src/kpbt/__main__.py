import sys

from kpbt.cli import main

sys.exit(main())
