"""Second moments, isotropic position and the Hensley product."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .constants import (
    EIGEN_TIE_GAP,
    HENSLEY_LOWER,
    ILL_CONDITIONED,
    ISOTROPIC_RESIDUAL,
    REL_TOL,
)
from .errors import IllConditioned, NotNormalized
from .polytope import (
    AffineMap,
    Subspace,
    VPolytope,
    apply_map,
    is_normalized,
    normalize,
    section,
    volume,
)

logger = logging.getLogger(__name__)


def unit_ball_volume(n: int) -> float:
    """|B_2^n|; the 0-dimensional ball has measure 1."""
    return float(math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n + 1.0)))


def second_moment(body: VPolytope) -> np.ndarray:
    """∫_K x xᵀ dx summed over the simplicial decomposition."""
    dec = body.decomposition
    n = body.dim
    sums = dec.simplices.sum(axis=1)
    outer = np.einsum("svi,svj->sij", dec.simplices, dec.simplices)
    outer += np.einsum("si,sj->sij", sums, sums)
    weights = dec.volumes / ((n + 1) * (n + 2))
    moment = np.einsum("s,sij->ij", weights, outer)
    return 0.5 * (moment + moment.T)


def covariance(body: VPolytope, tol: float = REL_TOL) -> np.ndarray:
    if not is_normalized(body, tol):
        raise NotNormalized("covariance needs a centered body of volume 1; call normalize first")
    return second_moment(body)


def isotropic_constant(body: VPolytope) -> float:
    normalized, _ = normalize(body)
    n = body.dim
    return float(np.linalg.det(covariance(normalized)) ** (1.0 / (2 * n)))


@dataclass(frozen=True, eq=False)
class IsotropicData:
    transform: AffineMap
    L: float
    body: VPolytope
    covariance: np.ndarray
    residual: float


def _symmetric_power(matrix: np.ndarray, power: float) -> np.ndarray:
    evals, evecs = np.linalg.eigh(matrix)
    return (evecs * evals**power) @ evecs.T


def isotropic_transform(body: VPolytope) -> IsotropicData:
    """Affine map to isotropic position: T = det(M)^{1/(2n)} M^{-1/2} after normalize."""
    n = body.dim
    normalized, base = normalize(body)
    cov = covariance(normalized)
    evals = np.linalg.eigvalsh(cov)
    if evals[0] <= 0.0 or evals[-1] / evals[0] > ILL_CONDITIONED:
        raise IllConditioned(f"covariance condition number {evals[-1] / max(evals[0], 1e-300):.3e}")
    L = float(np.prod(evals) ** (1.0 / (2 * n)))
    linear = AffineMap.from_linear(L * _symmetric_power(cov, -0.5))
    image = apply_map(normalized, linear)
    residual = float(np.max(np.abs(second_moment(image) - L**2 * np.eye(n))))
    if residual > ISOTROPIC_RESIDUAL:
        logger.warning(f"isotropic residual {residual:.3e} exceeds {ISOTROPIC_RESIDUAL:g}")
    return IsotropicData(linear.compose(base), L, image, cov, residual)


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """{x : xᵀ M⁻¹ x ≤ 1}, with support function sqrt(yᵀ M y)."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def support(self, y) -> float:
        y = np.asarray(y, dtype=float)
        return float(np.sqrt(max(y @ self.matrix @ y, 0.0)))

    def supports(self, directions) -> np.ndarray:
        dirs = np.asarray(directions, dtype=float)
        return np.sqrt(np.clip(np.einsum("ki,ij,kj->k", dirs, self.matrix, dirs), 0.0, None))

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.dim) * math.sqrt(max(np.linalg.det(self.matrix), 0.0))


def z2_ellipsoid(body: VPolytope) -> Ellipsoid:
    return Ellipsoid(covariance(body))


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(np.abs(vec) > 1e-12)
    if nonzero.size and vec[nonzero[0]] < 0:
        return -vec
    return vec


def _tie_groups(evals: np.ndarray):
    groups = [[0]]
    for i in range(1, len(evals)):
        prev = evals[groups[-1][-1]]
        if prev - evals[i] <= EIGEN_TIE_GAP * max(abs(prev), 1e-300):
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def principal_axes(ellipsoid) -> np.ndarray:
    """Orthonormal eigenbasis (columns) by descending eigenvalue.

    Eigenspaces of tied eigenvalues get the Gram-Schmidt image of the coordinate
    axes in index order; each column has its first nonzero coordinate positive.
    """
    matrix = ellipsoid.matrix if isinstance(ellipsoid, Ellipsoid) else np.asarray(ellipsoid)
    n = matrix.shape[0]
    evals, evecs = np.linalg.eigh(0.5 * (matrix + matrix.T))
    order = np.argsort(-evals, kind="stable")
    evals, evecs = evals[order], evecs[:, order]
    columns = []
    for group in _tie_groups(evals):
        if len(group) == 1:
            columns.append(_canonical_sign(evecs[:, group[0]]))
            continue
        space = evecs[:, group]
        projector = space @ space.T
        picked = []
        for k in range(n):
            vec = projector[:, k].copy()
            for prev in picked:
                vec -= (prev @ vec) * prev
            norm = np.linalg.norm(vec)
            if norm > 1e-8:
                picked.append(vec / norm)
            if len(picked) == len(group):
                break
        columns.extend(_canonical_sign(v) for v in picked)
    return np.column_stack(columns)


def hensley_upper(n: int) -> float:
    return n / math.sqrt(2.0 * (n + 1) * (n + 2))


def hensley_product(body: VPolytope, theta, cov: np.ndarray = None) -> float:
    """h_{Z_2(K)}(θ) · |K ∩ θ⊥| for a centered body of volume 1."""
    theta = np.asarray(theta, dtype=float)
    if abs(np.linalg.norm(theta) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    cov = covariance(body) if cov is None else cov
    h = math.sqrt(float(theta @ cov @ theta))
    return h * volume(section(body, Subspace.hyperplane(theta)))


def hensley_bounds(n: int):
    return HENSLEY_LOWER, hensley_upper(n)


def ball_isotropic_constant(n: int) -> float:
    """L of the Euclidean ball: radius ω_n^{-1/n} over sqrt(n + 2)."""
    radius = unit_ball_volume(n) ** (-1.0 / n)
    return radius / math.sqrt(n + 2.0)


def mc_covariance(body: VPolytope, samples: int = 10**6, seed: int = 0, batch: int = 10**6):
    """Monte-Carlo estimate of ∫_K x xᵀ dx from uniform points in the bounding box."""
    rng = np.random.default_rng(seed)
    lo, hi = body.vertices.min(axis=0), body.vertices.max(axis=0)
    normals, offsets = body.hull.normals, body.hull.offsets
    acc = np.zeros((body.dim, body.dim))
    remaining = samples
    while remaining > 0:
        size = min(batch, remaining)
        pts = rng.uniform(lo, hi, size=(size, body.dim))
        inside = pts[np.all(pts @ normals.T <= offsets, axis=1)]
        acc += inside.T @ inside
        remaining -= size
    return acc * float(np.prod(hi - lo)) / samples
