"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numerical failures with 3.  Everything derives from ``TwistedEmissionError``
so callers can catch the whole family at once.
"""


class TwistedEmissionError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(TwistedEmissionError):
    """Invalid run configuration (bad flag value, malformed config file)."""


class DomainError(TwistedEmissionError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularGeometryError(TwistedEmissionError):
    """Degenerate momentum triangle, or evaluation pinned on its boundary."""


class SingularKinematicsError(TwistedEmissionError):
    """Vanishing energy denominator: the final state carries no energy."""


class NoEmissionPeakError(TwistedEmissionError):
    """The emission-peak condition has no solution in [0, pi]."""


class DegenerateBeamError(TwistedEmissionError):
    """Twisted-beam operation with zero transverse momentum (kappa_a = 0)."""


class EmptyChannelError(TwistedEmissionError):
    """A scan evaluated to zero everywhere; nothing to normalize."""


class ConvergenceError(TwistedEmissionError):
    """An extrapolation sequence moved away from a limit instead of toward it."""


class AccuracyError(TwistedEmissionError):
    """Adaptive integration hit its subdivision budget before the tolerance.

    Carries the best available estimate so callers can decide whether the
    partial answer is still useful.
    """

    def __init__(self, message: str, best: float, err_est: float):
        super().__init__(message)
        self.best = best
        self.err_est = err_est
