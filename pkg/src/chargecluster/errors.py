"""Exception hierarchy shared by every module of the package."""


class ClusterSimError(Exception):
    """Base class for all package errors."""


class NotHermitian(ClusterSimError, ValueError):
    pass


class NegativeSpectrum(ClusterSimError, ValueError):
    pass


class DimensionMismatch(ClusterSimError, ValueError):
    pass


class FluxOutOfRange(ClusterSimError, ValueError):
    pass


class NoBracket(ClusterSimError, ValueError):
    pass


class InconsistentTuning(ClusterSimError, ValueError):
    pass


class SiteOutOfRange(ClusterSimError, IndexError):
    pass


class NotAtDegeneracy(ClusterSimError, ValueError):
    pass


class NotProportionalToIdentity(ClusterSimError, ValueError):
    pass


class UnphysicalRates(ClusterSimError, ValueError):
    pass


class NumericalFailure(ClusterSimError, ArithmeticError):
    """Integrator output violated a density-matrix invariant."""


class StepTooLarge(NumericalFailure):
    pass


class NoPeaks(ClusterSimError, ValueError):
    pass


class TargetUnreachable(ClusterSimError, ValueError):
    pass


class ConfigError(ClusterSimError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownKey(ConfigError):
    pass


class MalformedValue(ConfigError):
    pass
