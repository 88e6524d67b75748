import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from kpbt import build_paper_example, build_random_stable, scalar_example  # noqa: E402

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""
    lines = request.config.stash[_ACCEPTANCE]

    def _report(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {label}" + (f" ({detail})" if detail else "")
        lines.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def fix_scalar():
    return scalar_example()


@pytest.fixture(scope="session")
def tridiag_bench():
    return build_paper_example(300)


@pytest.fixture(params=[(2, (4, 3), 0), (3, (3, 4, 2), 1), (2, (6, 5), 2)],
                ids=["k2", "k3", "k2b"])
def random_sys(request):
    k, dims, seed = request.param
    return build_random_stable(k, dims, seed=seed)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
