"""Exception hierarchy shared by the library and the CLI."""


class NMSplitError(Exception):
    """Base class for all errors raised by nmsplit."""


class ParameterError(NMSplitError, ValueError):
    """An input parameter or config entry is invalid.

    ``key`` names the offending parameter (config key when known).
    """

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class OperatingPointError(NMSplitError):
    """The requested steady state does not exist (parametric oscillation divergence)."""


class RootFindingError(NMSplitError):
    """A polynomial root iteration failed to converge."""


class EstimateInvalid(NMSplitError):
    """An analytic splitting estimate is outside its regime of validity."""


class UnstableOperatingPoint(NMSplitError):
    """A stationary spectrum was requested at an unstable operating point."""
