"""Exception types shared across the package."""


class MobiusFlatError(Exception):
    """Base class for all package errors."""


class ChartDomainError(MobiusFlatError):
    """A chart point (or a finite-difference stencil point) left the chart domain."""


class DegenerateGeometryError(MobiusFlatError):
    """Rank-deficient tangent space, indefinite metric, or similar degeneracy."""


class UmbilicPointError(MobiusFlatError):
    """The conformal density vanishes; Moebius invariants are undefined here."""


class InputError(MobiusFlatError):
    """Operand violates a structural precondition (asymmetry, wrong shape, ...)."""


class ConfigError(MobiusFlatError):
    """Run configuration failed validation."""
