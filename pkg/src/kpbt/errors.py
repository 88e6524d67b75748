"""Exception types raised by kpbt."""


class KPowerError(Exception):
    """Base class for all kpbt errors."""


class DimensionError(KPowerError, ValueError):
    pass


class InstabilityError(KPowerError, ValueError):
    pass


class NumericError(KPowerError, ArithmeticError):
    pass


class SingularShiftError(NumericError):
    """A frequency coincides (numerically) with an eigenvalue of some A_j."""

    def __init__(self, level, s):
        self.level = level
        self.s = s
        super().__init__(f"shift s={s!r} is singular for subsystem {level}")


class IndefiniteError(NumericError):
    pass


class RankError(KPowerError, ValueError):
    def __init__(self, msg, rank=None, sigma=None):
        self.rank = rank
        self.sigma = sigma
        super().__init__(msg)


class GridError(KPowerError, ValueError):
    pass


class SymmetryError(GridError):
    pass


class MissingSampleError(KPowerError, KeyError):
    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join(str(t) for t in self.missing[:5])
        more = "" if len(self.missing) <= 5 else f" (+{len(self.missing) - 5} more)"
        super().__init__(f"{len(self.missing)} sample(s) missing: {shown}{more}")

    def __str__(self):
        return self.args[0]


class DivergenceError(NumericError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"trajectory became non-finite at t={t:g}")
