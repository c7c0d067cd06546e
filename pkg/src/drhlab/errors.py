"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, CeilingError -> 3,
ValidationError -> 4.
"""


class DrhLabError(Exception):
    """Base class for all package errors."""


class ConfigError(DrhLabError):
    """Malformed configuration, flags, or input files."""


class CeilingError(DrhLabError):
    """A documented resource ceiling was exceeded."""


class RangeTooLargeError(CeilingError):
    """Sieve bound above the configured ceiling."""


class InvalidRangeError(ConfigError):
    """Sieve range with lo > hi or lo < 2."""


class TauCeilingError(CeilingError):
    """Tau table order beyond the exactness ceiling."""


class TransformLengthError(DrhLabError):
    """Padded convolution size exceeds the modulus' transform order."""


class InsufficientModuliError(DrhLabError):
    """CRT modulus product too small for the coefficient bound."""


class CrtInconsistencyError(DrhLabError):
    """A verification modulus disagrees with the reconstructed value."""


class TableTooSmallError(DrhLabError):
    """A prime or index beyond the tabulated range was requested."""


class DeligneViolationError(DrhLabError):
    """|lambda(p)/2| > 1 beyond rounding slack; signals a tau bug."""


class SingularFactorError(DrhLabError):
    """Local Euler factor determinant vanished to machine precision."""


class ValidationError(DrhLabError):
    """A dual-route numerical check disagreed beyond tolerance."""


class NonConvergenceError(ValidationError):
    """Two acceleration depths of a series evaluation disagree."""


class CutoffSensitivityError(ValidationError):
    """Doubling a smoothing cutoff moved an L-value beyond tolerance."""


class NormalizerValidationError(ValidationError):
    """Closed-form normalizer disagrees with the quadrature oracle."""


class CacheCorruptError(DrhLabError):
    """On-disk cache failed its checksum or header validation."""


class DensityDomainError(DrhLabError):
    """Density query outside the series domain."""


class GridError(ConfigError):
    """Evaluation grid violates a documented precondition."""
