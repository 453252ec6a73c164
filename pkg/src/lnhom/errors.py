"""Exception types raised across the toolkit."""


class InvalidGeometryError(ValueError):
    """Waveguide geometry violates a structural invariant."""


class ResolutionError(ValueError):
    """Grid pitch too coarse to resolve the requested geometry."""


class ConvergenceError(RuntimeError):
    """Iterative solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message, residual_norm=None):
        super().__init__(message)
        self.residual_norm = residual_norm


class DecoupledWaveguidesError(RuntimeError):
    """Supermodes degenerate within tolerance: coupling length is infinite."""


class UnreachableTargetError(ValueError):
    """No non-negative interaction length realises the requested ratio on this branch."""


class TruncationError(ValueError):
    """Mean pair number too large for the two-pair truncation to be valid."""


class UnidentifiableDataError(ValueError):
    """Data carry no information about one or more fit parameters."""


class ConfigError(ValueError):
    """Scenario configuration failed schema validation."""

    def __init__(self, message, line=None, key=None):
        super().__init__(message)
        self.line = line
        self.key = key


class NegativeLossWarning(UserWarning):
    """Fringe contrast implies gain (extracted facet reflectivity above Fresnel value)."""
