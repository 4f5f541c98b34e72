"""Exception types shared across the workbench."""


class SpecinvError(Exception):
    """Base class for all workbench errors."""


class SingularMatrix(SpecinvError):
    """A pivot underflowed the singularity threshold during elimination."""


class NotHermitian(SpecinvError):
    """Operator fails the Hermitian symmetry precondition."""


class NonConvergence(SpecinvError):
    """Iteration cap reached; likely a degenerate leading singular pair."""


class Overflow(SpecinvError):
    """Operator powers left the floating range; rescale the element."""


class ContourTooClose(SpecinvError):
    """Spectrum too close to the quadrature contour (resolvent blow-up)."""


class NoSpectralGap(SpecinvError):
    """Zero is not numerically isolated in the spectrum of a*a."""


class NotInAlgebra(SpecinvError):
    """Element fails membership in the subalgebra at tolerance."""


class DomainError(SpecinvError):
    """Argument outside the domain of a coordinate map."""


class RelationViolated(SpecinvError):
    """Arrow coordinates fail the groupoid defining relation."""


class NotComposable(SpecinvError):
    """Source/range mismatch beyond the unit-grid snap tolerance."""


class WindowOverflow(SpecinvError):
    """Kernel supports would leave the fiber truncation window."""


class BadModel(SpecinvError):
    """Ideal-transfer model violates its structural preconditions."""


class ConfigError(SpecinvError):
    """Malformed suite configuration."""


class UnknownSeries(SpecinvError):
    """Requested series name is not present in the report."""
