"""Exception types raised by the solver."""


class MPFCError(Exception):
    """Base class for solver errors."""


class ContractViolation(MPFCError, ValueError):
    """Arrays do not conform to the grid they are used with."""


class DegenerateEnergy(MPFCError):
    """The nonlinear energy is too small for the SAV quotient 1/sqrt(E1)."""


class MeanZeroViolation(MPFCError, ValueError):
    """A field that must lie in the mean-zero subspace does not."""

    def __init__(self, mean, tolerance):
        self.mean = mean
        self.tolerance = tolerance
        super().__init__(
            f"field is not mean-zero: (f, 1)_m = {mean:.6e} exceeds tolerance {tolerance:.3e}"
        )


class SolvabilityViolation(MPFCError):
    """Rank-one correction denominator is not positive."""


class ConfigError(ValueError):
    """Invalid configuration text or value."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SnapshotError(MPFCError, ValueError):
    """Malformed or truncated snapshot file."""
