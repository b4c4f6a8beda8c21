"""Exact geometry on V-polytopes.

Bodies are stored by their extreme points. Facet data comes from Qhull, volumes and
integrals come from a fan triangulation, and sections are computed in the facet
description restricted to the subspace (vertex enumeration of the reduced H-polytope).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from .constants import COPLANAR_TOL, MAX_DIM, ORTHO_TOL, REL_TOL, SINGULAR_DET
from .errors import DegenerateInput, EmptySection, SingularMap

logger = logging.getLogger(__name__)


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2:
        raise DegenerateInput(f"expected a list of points, got array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DegenerateInput("points contain non-finite coordinates")
    return arr


def _scale(points: np.ndarray) -> float:
    if points.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(points))))


def _lexsorted(points: np.ndarray) -> np.ndarray:
    order = np.lexsort(points.T[::-1])
    return points[order]


def _affine_frame(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Origin and orthonormal basis (columns) of the affine hull of ``points``."""
    origin = points.mean(axis=0)
    centered = points - origin
    if len(points) < 2:
        return origin, np.zeros((points.shape[1], 0))
    _, sing, vt = np.linalg.svd(centered, full_matrices=False)
    if sing.size == 0 or sing[0] <= 0.0:
        return origin, np.zeros((points.shape[1], 0))
    rank = int(np.sum(sing > COPLANAR_TOL * sing[0]))
    return origin, vt[:rank].T


def affine_dimension(points) -> int:
    pts = _as_points(points)
    return _affine_frame(pts)[1].shape[1]


@dataclass(frozen=True, eq=False)
class Hull:
    """Facet description of a full-dimensional hull.

    Every vertex satisfies ``normals @ v <= offsets + tol``. ``simplices`` holds the
    triangulated boundary (indices into ``vertices``) with one equation per simplex.
    """

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    incidence: Tuple[Tuple[int, ...], ...]
    simplices: np.ndarray
    simplex_normals: np.ndarray
    simplex_offsets: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def n_facets(self) -> int:
        return int(len(self.offsets))


def _interval_hull(points: np.ndarray) -> Hull:
    lo, hi = float(points.min()), float(points.max())
    vertices = np.array([[lo], [hi]])
    normals = np.array([[-1.0], [1.0]])
    offsets = np.array([-lo, hi])
    simplices = np.array([[0], [1]])
    return Hull(vertices, normals, offsets, ((0,), (1,)), simplices, normals, offsets)


def _merge_planes(normals: np.ndarray, offsets: np.ndarray, scale: float):
    key = np.round(np.hstack([normals, (offsets / scale)[:, None]]), 8)
    _, first = np.unique(key, axis=0, return_index=True)
    first = np.sort(first)
    return normals[first], offsets[first]


def convex_hull(points, merge_coplanar: bool = True) -> Hull:
    """Facets and canonical vertex set (extreme points, lexicographic order) of ``points``."""
    pts = _as_points(points)
    m, n = pts.shape
    if n > MAX_DIM:
        raise DegenerateInput(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    if m < n + 1:
        raise DegenerateInput(f"need at least {n + 1} points in dimension {n}, got {m}")
    rank = _affine_frame(pts)[1].shape[1]
    if rank < n:
        raise DegenerateInput(f"affine hull has dimension {rank} < {n}")
    if n == 1:
        return _interval_hull(pts)

    try:
        qhull = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(f"Qhull rejected the input: {exc}") from exc

    vertex_ids = qhull.vertices[np.lexsort(pts[qhull.vertices].T[::-1])]
    vertices = pts[vertex_ids]
    remap = np.full(m, -1, dtype=int)
    remap[vertex_ids] = np.arange(len(vertex_ids))
    simplices = remap[qhull.simplices]
    if np.any(simplices < 0):
        raise DegenerateInput("triangulated facets reference non-extreme points")

    simplex_normals = qhull.equations[:, :-1]
    simplex_offsets = -qhull.equations[:, -1]
    scale = _scale(vertices)
    if merge_coplanar:
        normals, offsets = _merge_planes(simplex_normals, simplex_offsets, scale)
        tol = COPLANAR_TOL * scale * 10.0
        incidence = tuple(
            tuple(int(i) for i in np.flatnonzero(np.abs(vertices @ nrm - off) <= tol))
            for nrm, off in zip(normals, offsets)
        )
    else:
        normals, offsets = simplex_normals, simplex_offsets
        incidence = tuple(tuple(int(i) for i in row) for row in simplices)
    return Hull(vertices, normals, offsets, incidence, simplices, simplex_normals, simplex_offsets)


@dataclass(frozen=True, eq=False)
class SimplicialDecomposition:
    """Simplices of shape ``(s, n + 1, n)`` partitioning a body, with their volumes."""

    simplices: np.ndarray
    volumes: np.ndarray

    def __len__(self) -> int:
        return int(len(self.volumes))

    @property
    def total_volume(self) -> float:
        return float(self.volumes.sum())

    @property
    def centroids(self) -> np.ndarray:
        return self.simplices.mean(axis=1)


def simplex_volumes(simplices: np.ndarray) -> np.ndarray:
    n = simplices.shape[2]
    edges = simplices[:, 1:, :] - simplices[:, :1, :]
    return np.abs(np.linalg.det(edges)) / math.factorial(n)


def triangulate(hull: Hull) -> SimplicialDecomposition:
    """Fan triangulation from the first canonical vertex.

    The apex is joined to every triangulated boundary facet that does not contain it,
    so a unit square gives 2 triangles and a simplex gives itself.
    """
    vertices = hull.vertices
    n = hull.dim
    if n == 1:
        simplices = vertices[None, :, :]
    else:
        apex = vertices[0]
        gap = hull.simplex_offsets - hull.simplex_normals @ apex
        far = hull.simplices[gap > COPLANAR_TOL * _scale(vertices) * 10.0]
        if len(far) == 0:
            raise DegenerateInput("hull has no facet away from the apex")
        simplices = np.concatenate(
            [np.broadcast_to(apex, (len(far), 1, n)), vertices[far]], axis=1
        )
    volumes = simplex_volumes(simplices)
    keep = volumes > 0.0
    if not np.any(keep):
        raise DegenerateInput("triangulation has no simplex of positive volume")
    return SimplicialDecomposition(np.ascontiguousarray(simplices[keep]), volumes[keep])


@dataclass(frozen=True, eq=False)
class VPolytope:
    """Convex body given by its extreme points.

    ``intrinsic_dim`` is the dimension of the affine hull; ``embedding`` (ambient
    n x d, orthonormal columns) maps intrinsic coordinates of a section or projection
    back into the space it was cut from, for display.
    """

    vertices: np.ndarray
    intrinsic_dim: int
    embedding: Optional[np.ndarray] = None

    @classmethod
    def from_points(
        cls, points, allow_lower: bool = False, embedding: Optional[np.ndarray] = None
    ) -> "VPolytope":
        pts = _as_points(points)
        m, n = pts.shape
        if m == 0:
            raise DegenerateInput("empty point set")
        if n == 0:
            return cls(np.zeros((1, 0)), 0, embedding)
        origin, basis = _affine_frame(pts)
        k = basis.shape[1]
        if k == n:
            hull = convex_hull(pts)
            body = cls(hull.vertices, n, embedding)
            body.__dict__["hull"] = hull
            return body
        if not allow_lower:
            raise DegenerateInput(f"affine hull has dimension {k} < {n}")
        if k == 0:
            return cls(origin[None, :], 0, embedding)
        local = convex_hull((pts - origin) @ basis)
        return cls(_lexsorted(origin + local.vertices @ basis.T), k, embedding)

    @classmethod
    def point(cls, dim: int = 0) -> "VPolytope":
        return cls(np.zeros((1, dim)), 0)

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def n_vertices(self) -> int:
        return int(len(self.vertices))

    @property
    def is_full_dimensional(self) -> bool:
        return self.intrinsic_dim == self.dim

    @cached_property
    def hull(self) -> Hull:
        if not self.is_full_dimensional:
            raise DegenerateInput(
                f"body has intrinsic dimension {self.intrinsic_dim} in R^{self.dim}"
            )
        return convex_hull(self.vertices)

    @cached_property
    def decomposition(self) -> SimplicialDecomposition:
        return triangulate(self.hull)

    @cached_property
    def boundary(self) -> Tuple[np.ndarray, np.ndarray]:
        """Unit normals and (n-1)-volumes of the triangulated boundary facets."""
        hull = self.hull
        n = self.dim
        if n == 1:
            return hull.simplex_normals, np.ones(2)
        pts = hull.vertices[hull.simplices]
        edges = pts[:, 1:, :] - pts[:, :1, :]
        gram = np.einsum("fik,fjk->fij", edges, edges)
        areas = np.sqrt(np.clip(np.linalg.det(gram), 0.0, None)) / math.factorial(n - 1)
        return hull.simplex_normals, areas

    @property
    def scale(self) -> float:
        return _scale(self.vertices)

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": self.vertices.tolist()}


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of R^n given by an n x d matrix with orthonormal columns."""

    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.ndim != 2:
            raise ValueError(f"basis must be an n x d matrix, got shape {basis.shape}")
        gram = basis.T @ basis
        if gram.size and np.max(np.abs(gram - np.eye(basis.shape[1]))) > ORTHO_TOL * 10:
            raise ValueError("subspace basis columns are not orthonormal")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def span(cls, vectors, ambient_dim: Optional[int] = None) -> "Subspace":
        vecs = np.asarray(vectors, dtype=float)
        if vecs.size == 0:
            if ambient_dim is None:
                raise ValueError("ambient dimension required for the zero subspace")
            return cls(np.zeros((ambient_dim, 0)))
        if vecs.ndim == 1:
            vecs = vecs[None, :]
        q, r = np.linalg.qr(vecs.T)
        diag = np.diag(r)
        if np.any(np.abs(diag) <= SINGULAR_DET * max(1.0, float(np.abs(vecs).max()))):
            raise DegenerateInput("spanning vectors are linearly dependent")
        # Column signs follow the spanning vectors.
        return cls(q * np.where(diag < 0, -1.0, 1.0))

    @classmethod
    def hyperplane(cls, normal) -> "Subspace":
        vec = np.asarray(normal, dtype=float).ravel()
        if np.linalg.norm(vec) == 0.0:
            raise DegenerateInput("hyperplane normal is the zero vector")
        return cls(null_space(vec[None, :]))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    @classmethod
    def coordinate(cls, indices: Sequence[int], n: int) -> "Subspace":
        return cls(np.eye(n)[:, list(indices)])

    @property
    def ambient_dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    def complement(self) -> "Subspace":
        n, d = self.basis.shape
        if d == 0:
            return Subspace.full(n)
        if d == n:
            return Subspace(np.zeros((n, 0)))
        return Subspace(null_space(self.basis.T))

    def direct_sum(self, other: "Subspace") -> "Subspace":
        return Subspace.span(np.hstack([self.basis, other.basis]).T, self.ambient_dim)

    def coordinates(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.basis

    def embed(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=float) @ self.basis.T


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> linear @ x + translation."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "linear", np.asarray(self.linear, dtype=float))
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float))

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(np.eye(n), np.zeros(n))

    @classmethod
    def from_linear(cls, matrix) -> "AffineMap":
        mat = np.asarray(matrix, dtype=float)
        return cls(mat, np.zeros(mat.shape[0]))

    @property
    def dim(self) -> int:
        return int(self.linear.shape[0])

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))

    @property
    def is_invertible(self) -> bool:
        return abs(self.det) > SINGULAR_DET

    def __call__(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.linear.T + self.translation

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self after inner."""
        return AffineMap(self.linear @ inner.linear, self.linear @ inner.translation + self.translation)

    def inverse(self) -> "AffineMap":
        if not self.is_invertible:
            raise SingularMap(f"map with determinant {self.det:.3e} is not invertible")
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.translation)


def volume(body: VPolytope) -> float:
    """Intrinsic-dimensional volume; a point has measure 1."""
    if body.intrinsic_dim == 0:
        return 1.0
    if body.is_full_dimensional:
        return body.decomposition.total_volume
    origin, basis = _affine_frame(body.vertices)
    return volume(VPolytope.from_points((body.vertices - origin) @ basis))


def barycenter(body: VPolytope) -> np.ndarray:
    dec = body.decomposition
    return (dec.volumes @ dec.centroids) / dec.total_volume


def support(body: VPolytope, y) -> float:
    return float(np.max(body.vertices @ np.asarray(y, dtype=float)))


def apply_map(body: VPolytope, amap: AffineMap) -> VPolytope:
    if not amap.is_invertible:
        raise SingularMap(f"map with determinant {amap.det:.3e} is not invertible")
    return VPolytope.from_points(amap(body.vertices), allow_lower=not body.is_full_dimensional)


def normalize(body: VPolytope) -> Tuple[VPolytope, AffineMap]:
    """Centered, volume-one copy s(K - bar(K)) and the map that produces it."""
    n = body.dim
    s = volume(body) ** (-1.0 / n)
    amap = AffineMap(s * np.eye(n), -s * barycenter(body))
    return apply_map(body, amap), amap


def is_centered(body: VPolytope, tol: float = REL_TOL) -> bool:
    return bool(np.max(np.abs(barycenter(body))) <= tol * body.scale)


def is_normalized(body: VPolytope, tol: float = REL_TOL) -> bool:
    return abs(volume(body) - 1.0) <= tol and is_centered(body, tol)


def is_symmetric(body: VPolytope, tol: float = REL_TOL) -> bool:
    verts = _lexsorted(body.vertices)
    mirrored = _lexsorted(-body.vertices)
    return verts.shape == mirrored.shape and np.allclose(verts, mirrored, atol=tol * body.scale)


def _reduced_halfspaces(body: VPolytope, basis: np.ndarray, point: Optional[np.ndarray] = None):
    """Constraints on y for x = point + basis @ y, rows normalized to unit length."""
    normals, offsets = body.hull.normals, body.hull.offsets
    rhs = offsets if point is None else offsets - normals @ point
    reduced = normals @ basis
    norms = np.linalg.norm(reduced, axis=1)
    keep = norms > 1e-12
    tol = REL_TOL * body.scale
    if np.any(rhs[~keep] < -tol):
        raise EmptySection("subspace lies outside a facet that is parallel to it")
    return reduced[keep] / norms[keep, None], rhs[keep] / norms[keep]


def _interior_point(normals: np.ndarray, offsets: np.ndarray, tol: float, hint=None) -> np.ndarray:
    d = normals.shape[1]
    if hint is not None and np.all(normals @ hint < offsets - tol):
        return np.asarray(hint, dtype=float)
    res = linprog(
        c=np.r_[np.zeros(d), -1.0],
        A_ub=np.hstack([normals, np.ones((len(normals), 1))]),
        b_ub=offsets,
        bounds=[(None, None)] * d + [(0.0, None)],
        method="highs",
    )
    if not res.success or res.x[-1] <= tol:
        raise EmptySection("subspace misses the interior of the body")
    return res.x[:d]


def _enumerate_vertices(normals, offsets, tol: float, hint=None, embedding=None) -> VPolytope:
    d = normals.shape[1]
    if d == 1:
        col = normals[:, 0]
        upper = offsets[col > 0] / col[col > 0]
        lower = offsets[col < 0] / col[col < 0]
        hi, lo = float(upper.min()), float(lower.max())
        if hi - lo <= tol:
            raise EmptySection("subspace misses the interior of the body")
        return VPolytope(np.array([[lo], [hi]]), 1, embedding)
    center = _interior_point(normals, offsets, tol, hint)
    try:
        hs = HalfspaceIntersection(np.hstack([normals, -offsets[:, None]]), center)
    except QhullError as exc:
        raise EmptySection(f"halfspace intersection failed: {exc}") from exc
    return VPolytope.from_points(hs.intersections, embedding=embedding)


def section(body: VPolytope, subspace: Subspace) -> VPolytope:
    """K ∩ span(H) in the orthonormal coordinates of H."""
    basis = subspace.basis
    d = subspace.dim
    if d == body.dim:
        return VPolytope.from_points(body.vertices @ basis, embedding=basis)
    if d == 0:
        if np.any(body.hull.offsets < -REL_TOL * body.scale):
            raise EmptySection("origin lies outside the body")
        return VPolytope(np.zeros((1, 0)), 0, basis)
    normals, offsets = _reduced_halfspaces(body, basis)
    return _enumerate_vertices(
        normals, offsets, REL_TOL * body.scale, hint=np.zeros(d), embedding=basis
    )


def slice_body(body: VPolytope, direction, t: float, hint=None, basis=None) -> VPolytope:
    """K ∩ (θ⊥ + tθ) in orthonormal coordinates of θ⊥; ``hint`` is an interior point of K."""
    theta = np.asarray(direction, dtype=float)
    theta = theta / np.linalg.norm(theta)
    if basis is None:
        basis = null_space(theta[None, :])
    if body.dim == 1:
        lo, hi = body.vertices[0, 0] * theta[0], body.vertices[1, 0] * theta[0]
        if not min(lo, hi) < t < max(lo, hi):
            raise EmptySection(f"slice at t={t} misses the interior")
        return VPolytope(np.zeros((1, 0)), 0, basis)
    point = t * theta
    normals, offsets = _reduced_halfspaces(body, basis, point)
    local_hint = None if hint is None else basis.T @ (np.asarray(hint) - point)
    return _enumerate_vertices(
        normals, offsets, REL_TOL * body.scale, hint=local_hint, embedding=basis
    )


def slice_volume(body: VPolytope, direction, t: float) -> float:
    theta = np.asarray(direction, dtype=float)
    theta = theta / np.linalg.norm(theta)
    heights = body.vertices @ theta
    if not heights.min() < t < heights.max():
        return 0.0
    return volume(slice_body(body, theta, t, hint=interior_hint(body, theta, t)))


def interior_hint(body: VPolytope, theta: np.ndarray, t: float) -> np.ndarray:
    """Point of int(K) at height t on a segment from the vertex mean to an extreme vertex."""
    center = body.vertices.mean(axis=0)
    heights = body.vertices @ theta
    c = float(center @ theta)
    vertex = body.vertices[np.argmax(heights)] if t >= c else body.vertices[np.argmin(heights)]
    h = float(vertex @ theta)
    s = 0.0 if h == c else (t - c) / (h - c)
    return center + s * (vertex - center)


def project(body: VPolytope, subspace: Subspace) -> VPolytope:
    """P_H K in the orthonormal coordinates of H."""
    if subspace.dim == 0:
        return VPolytope(np.zeros((1, 0)), 0, subspace.basis)
    return VPolytope.from_points(
        body.vertices @ subspace.basis, allow_lower=True, embedding=subspace.basis
    )


def mc_volume(body: VPolytope, samples: int = 10**6, seed: int = 0, batch: int = 10**6) -> float:
    """Hit-ratio Monte-Carlo estimate of |K| in its bounding box."""
    rng = np.random.default_rng(seed)
    lo, hi = body.vertices.min(axis=0), body.vertices.max(axis=0)
    normals, offsets = body.hull.normals, body.hull.offsets
    hits = 0
    remaining = samples
    while remaining > 0:
        size = min(batch, remaining)
        pts = rng.uniform(lo, hi, size=(size, body.dim))
        hits += int(np.count_nonzero(np.all(pts @ normals.T <= offsets, axis=1)))
        remaining -= size
    return float(np.prod(hi - lo)) * hits / samples
