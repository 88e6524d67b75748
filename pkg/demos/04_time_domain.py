"""Time responses of the full and reduced benchmark models.

Integrates the full 600-state cascade and the two 50-state reductions (BT
and real data-driven BT) for u(t) = t cos t and u(t) = sin(t/2) exp(-t/2)
on [0, 10] with RK4 at dt = 1e-3, prints the relative L2 errors and writes
the curves to ``time_domain_<input>.csv`` next to this script.  Runs in
about ten seconds.
"""
from pathlib import Path

from kpbt import (batch_sample, build_grid, build_paper_example, bt_reduce, dd_reduce_real,
                  integrate, relative_error, required_tuples)
from kpbt.io import write_columns

here = Path(__file__).resolve().parent
full = build_paper_example(300)
bt, _ = bt_reduce(full, (25, 25))
grid = build_grid([40, 40])
dd = dd_reduce_real(batch_sample(full, required_tuples(grid)), grid, (25, 25))

for name in ("tcos", "sindecay"):
    ref = integrate(full, name)
    cols, names = [ref.t, ref.y], ["t", "y_full"]
    for label, model in (("bt", bt), ("dkbbt", dd)):
        tr = integrate(model, name)
        rep = relative_error(ref, tr)
        print(f"u={name:8s} {label:6s} L2 error {rep.l2:.2e}, max pointwise {rep.max:.2e}")
        cols += [tr.y, rep.pointwise]
        names += [f"y_{label}", f"e_{label}"]
    write_columns(here / f"time_domain_{name}.csv", names, cols)
