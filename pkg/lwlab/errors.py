"""Exception hierarchy shared by every lwlab module."""

from typing import Optional


class LwlabError(Exception):
    """Base class for all lwlab failures."""


class DegenerateInput(LwlabError, ValueError):
    """Points do not span the ambient space (affine hull too small)."""


class SingularMap(LwlabError, ValueError):
    """An affine map required to be invertible is (numerically) singular."""


class EmptySection(LwlabError):
    """A subspace or affine slice misses the interior of the body."""


class NotNormalized(LwlabError, ValueError):
    """The body is not centered with volume one."""


class IllConditioned(LwlabError):
    """The covariance matrix is too badly conditioned to invert safely."""


class Unconverged(LwlabError):
    """A sampled volume did not stabilize before the sample cap."""


class SearchFailed(LwlabError):
    """A frame search produced no frame satisfying its certificate."""


class NotAUniformCover(LwlabError, ValueError):
    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class ConfigError(LwlabError, ValueError):
    """Invalid suite or CLI configuration."""


class BodySpecError(LwlabError, ValueError):
    """A body specification cannot be resolved to a polytope."""
