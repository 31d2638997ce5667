"""Exception hierarchy shared by every module of the package."""


class PWError(Exception):
    """Base class for all errors raised by pwlattice."""


class PoleError(PWError, ArithmeticError):
    """A frequency within tolerance of +-pi/2, where the discrete exponential blows up."""


class OutOfWindow(PWError, IndexError):
    pass


class LengthMismatch(PWError, ValueError):
    pass


class DegenerateContour(PWError, ValueError):
    pass


class BandLeakage(PWError, ValueError):
    """Out-of-band spectral mass above the leakage tolerance."""

    def __init__(self, message, leakage=None):
        super().__init__(message)
        self.leakage = leakage


class GridTooCoarse(PWError, ValueError):
    pass


class BadEpsilon(PWError, ValueError):
    pass


class SlowDecay(PWError, ValueError):
    pass


class EmptyParity(PWError, ValueError):
    pass


class BoundaryGap(PWError, ValueError):
    pass


class CoverageGap(PWError, ValueError):
    pass


class WindowTooSmall(PWError, ValueError):
    pass


class BadEndpoints(PWError, ValueError):
    pass


class NoConvergence(PWError, ArithmeticError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(PWError, ValueError):
    """Invalid experiment configuration; ``field`` is the dotted path of the offending key."""

    def __init__(self, message, field=None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)
