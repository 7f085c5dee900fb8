"""Exception types shared across the package.

DomainError subclasses map to CLI exit code 2 (validation / physics domain);
plain OS-level errors, including MissingDirectionError, map to exit code 1.
"""


class DomainError(ValueError):
    """Invalid physical or configuration input."""


class SingularPostselectionError(DomainError):
    """Pre/postselection overlap too small for the weak value to be defined."""


class StrengthOutOfRangeError(DomainError):
    """Coupling strength alpha outside the invertible range (alpha_min, pi]."""


class NormalizationVanishesError(DomainError):
    """The normalizing intensity I_x+ is zero or negative."""


class ContrastTooLowError(DomainError):
    """Fitted interferometer contrast too small for a stable correction."""


class DegenerateDesignError(DomainError):
    """Fringe scan cannot constrain the sinusoid (too few points or span)."""


class AllZeroCountsError(DomainError):
    """Fringe scan contains no counts at all."""


class DegenerateStateError(DomainError):
    """Both projector weak values vanish; no state can be reconstructed."""


class GridMismatchError(DomainError):
    """Two campaigns do not share the same phase grid."""


class ConfigError(DomainError):
    """Experiment configuration violates one or more field constraints."""


class MissingDirectionError(FileNotFoundError):
    """A stored campaign lacks scans for one or more analysis directions."""
