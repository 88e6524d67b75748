"""Time-domain simulation of K-power systems in coupled (cascade) form."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from kpbt.errors import DimensionError, DivergenceError
from kpbt.sysmodel import KPowerSystem

__all__ = ["InputSpec", "Trajectory", "ErrorReport", "builtin_input", "integrate",
           "relative_error"]


@dataclass(frozen=True)
class InputSpec:
    name: str
    fn: Callable[[float], float]

    def __call__(self, t):
        return self.fn(t)


_EXPR_NAMES = {name: getattr(math, name) for name in
               ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "pi", "e")}


def builtin_input(name: str) -> InputSpec:
    """Named input signal.

    ``tcos`` is ``t cos t``, ``sindecay`` is ``sin(t/2) exp(-t/2)``, ``step``
    is 1 and ``zero`` is 0.  Anything else is read as an expression in ``t``
    (an optional ``expr:`` prefix is stripped) over the usual math functions.
    """
    builtins = {
        "tcos": lambda t: t * math.cos(t),
        "sindecay": lambda t: math.sin(0.5 * t) * math.exp(-0.5 * t),
        "step": lambda t: 1.0,
        "zero": lambda t: 0.0,
    }
    if name in builtins:
        return InputSpec(name, builtins[name])
    expr = name[5:] if name.startswith("expr:") else name
    try:
        code = compile(expr, "<input>", "eval")
    except SyntaxError as exc:
        raise ValueError(f"unknown input {name!r}") from exc
    unknown = set(code.co_names) - set(_EXPR_NAMES) - {"t"}
    if unknown:
        raise ValueError(f"unknown input {name!r} (unrecognised names {sorted(unknown)})")
    namespace = {"__builtins__": {}, **_EXPR_NAMES}
    return InputSpec(name, lambda t: float(eval(code, namespace, {"t": t})))


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    y: np.ndarray

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0]) if self.t.size > 1 else 0.0


def _rhs(sys, xs, u):
    out = [sys.A[0] @ xs[0] + sys.B1 * u]
    for j in range(1, sys.k):
        out.append(sys.A[j] @ xs[j] + (sys.N[j - 1] @ xs[j - 1]) * u)
    return out


def integrate(sys: KPowerSystem, u, t_final=10.0, dt=1e-3) -> Trajectory:
    """Classical RK4 on the cascade from the zero state.

    ``u`` is a callable (or a builtin input name) evaluated at each stage
    time.  Complex reduced models are integrated in complex arithmetic.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if isinstance(u, str):
        u = builtin_input(u)
    steps = int(round(t_final / dt))
    t = np.arange(steps + 1) * dt
    dtype = np.result_type(*sys.A, *sys.N, sys.B1, sys.Ck, float)
    xs = [np.zeros(n, dtype=dtype) for n in sys.dims]
    y = np.zeros(steps + 1, dtype=dtype)
    half = dt / 2
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(steps):
            tm = t[m]
            u0, uh, u1 = u(tm), u(tm + half), u(tm + dt)
            k1 = _rhs(sys, xs, u0)
            k2 = _rhs(sys, [x + half * d for x, d in zip(xs, k1)], uh)
            k3 = _rhs(sys, [x + half * d for x, d in zip(xs, k2)], uh)
            k4 = _rhs(sys, [x + dt * d for x, d in zip(xs, k3)], u1)
            xs = [x + (dt / 6) * (a + 2 * b + 2 * c + d)
                  for x, a, b, c, d in zip(xs, k1, k2, k3, k4)]
            y[m + 1] = sys.Ck @ xs[-1]
            if not (np.isfinite(y[m + 1]) and all(np.isfinite(x).all() for x in xs)):
                raise DivergenceError(float(t[m + 1]))
    return Trajectory(t, y)


@dataclass(frozen=True, eq=False)
class ErrorReport:
    pointwise: np.ndarray
    max: float
    l2: float


def relative_error(ref: Trajectory, test: Trajectory) -> ErrorReport:
    """Pointwise and L2 relative output errors on a shared time grid.

    The pointwise denominator is floored at ``1e-12 * max|y_ref|`` so zero
    crossings of the reference do not blow up.
    """
    if ref.t.shape != test.t.shape or not np.allclose(ref.t, test.t, rtol=0, atol=1e-12):
        raise DimensionError("trajectories are on different time grids")
    diff = np.abs(ref.y - test.y)
    peak = np.abs(ref.y).max(initial=0.0)
    floor = max(1e-12 * peak, np.finfo(float).tiny)
    pw = diff / np.maximum(np.abs(ref.y), floor)
    norm = np.linalg.norm(ref.y)
    l2 = float(np.linalg.norm(ref.y - test.y) / norm) if norm > 0 else float(np.linalg.norm(diff))
    return ErrorReport(pw, float(pw.max(initial=0.0)), l2)
