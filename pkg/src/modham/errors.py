"""Exception types raised by the library.

Every error derives from :class:`ModhamError` so callers (the CLI in
particular) can separate library failures from programming errors.
"""


class ModhamError(Exception):
    """Base class for all library errors."""


class RankDeficient(ModhamError):
    """A real basis does not span a standard subspace (H and iH intersect)."""


class NearDegenerate(ModhamError):
    """The modular operator has an eigenvalue too close to 1."""


class NotFactorial(ModhamError):
    """1 lies in the spectrum of the modular operator (H meets H')."""


class NotInvariant(ModhamError):
    """A one-parameter group does not preserve the subspace."""


class MasslessInfrared(ModhamError):
    """A negative Sobolev power at zero mass sees a non-negligible DC mode."""


class GridMismatch(ModhamError):
    """Two fields live on different grids or carry different masses."""


class BallOutsideGrid(ModhamError):
    """A ball does not fit inside the computational domain."""


class SupportOverflow(ModhamError):
    """A rescaled field would leave the computational domain."""


class PoleHit(ModhamError):
    """The conformal flow map was evaluated at (or next to) its pole."""


class SupportViolation(ModhamError):
    """Data expected to live inside a ball has mass outside it."""


class UnsupportedMode(ModhamError):
    """The operation is not available for this grid mode."""


class DomainError(ModhamError):
    """An argument lies outside the mathematical domain of a function."""


class IllConditioned(ModhamError):
    """A Gram matrix is too ill-conditioned to be trusted."""


class ProjectionResidualTooLarge(ModhamError):
    """A fixture is not well represented by the truncated basis."""


class ConfigError(ModhamError):
    """Invalid user configuration (schema or value error)."""


class ComputeError(ModhamError):
    """A computation failed; wraps the underlying library error."""
