"""Reverse dual Loomis-Whitney ratios and searches over orthonormal bases."""

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .centroid import SupportSampledBody, projected_zp_body
from .constants import (
    COVER_TOL,
    DEFAULT_RESTARTS,
    PLANAR_REFINE_TOL,
    PLANAR_SCAN_RESOLUTION,
)
from .errors import NotAUniformCover
from .frames import search_frames
from .moments import principal_axes, z2_ellipsoid
from .polytope import Subspace, VPolytope, is_normalized, normalize, section, volume
from .projection_bodies import shadows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UniformCover:
    """Sets S_j ⊆ {0, ..., n-1} with weights p_j; JSON uses 1-based indices."""

    n: int
    sets: Tuple[Tuple[int, ...], ...]
    weights: Tuple[float, ...]

    @classmethod
    def singletons(cls, n: int) -> "UniformCover":
        return cls(n, tuple((i,) for i in range(n)), (1.0,) * n)

    @classmethod
    def trivial(cls, n: int) -> "UniformCover":
        return cls(n, (tuple(range(n)),), (1.0,))

    @classmethod
    def from_json(cls, data: Dict[str, Any], n: int) -> "UniformCover":
        sets = tuple(tuple(sorted(int(i) - 1 for i in s)) for s in data["sets"])
        weights = tuple(float(w) for w in data["weights"])
        if len(sets) != len(weights):
            raise NotAUniformCover(f"{len(sets)} sets but {len(weights)} weights")
        return cls(n, sets, weights)

    @classmethod
    def load(cls, path, n: int) -> "UniformCover":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f), n)

    def to_json(self) -> Dict[str, Any]:
        return {"sets": [[i + 1 for i in s] for s in self.sets], "weights": list(self.weights)}

    @property
    def p(self) -> float:
        return float(sum(self.weights))

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(len(s) for s in self.sets)


@dataclass(frozen=True)
class CoverCheck:
    p: float
    weighted_dims: float
    coverage: Tuple[float, ...]


def validate_cover(cover: UniformCover) -> CoverCheck:
    """Σ_j p_j χ_{S_j}(i) = 1 for every i; errors carry the 1-based index."""
    for j, (members, weight) in enumerate(zip(cover.sets, cover.weights)):
        if not weight > 0:
            raise NotAUniformCover(f"weight of set {j + 1} must be positive, got {weight}")
        for i in members:
            if not 0 <= i < cover.n:
                raise NotAUniformCover(f"set {j + 1} contains index {i + 1} outside 1..{cover.n}", i + 1)
    coverage = [0.0] * cover.n
    for members, weight in zip(cover.sets, cover.weights):
        for i in members:
            coverage[i] += weight
    for i, total in enumerate(coverage):
        if abs(total - 1.0) > COVER_TOL:
            raise NotAUniformCover(f"index {i + 1} is covered with total weight {total:g}", i + 1)
    weighted = sum(w * d for w, d in zip(cover.weights, cover.dims))
    return CoverCheck(cover.p, weighted, tuple(coverage))


@dataclass
class LambdaResult:
    value: float
    witness: np.ndarray
    certificate: float
    method: str
    sense: str = "min"
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def _cover_ratio(body: VPolytope, cover: UniformCover, frame: np.ndarray) -> float:
    """|K|^{p-1} / ∏_j |K ∩ H_j⊥|^{p_j} with H_j⊥ spanned by the columns outside S_j."""
    n = body.dim
    denominator = 1.0
    for members, weight in zip(cover.sets, cover.weights):
        keep = [k for k in range(n) if k not in members]
        perp = Subspace(frame[:, keep]) if keep else Subspace(np.zeros((n, 0)))
        denominator *= volume(section(body, perp)) ** weight
    return volume(body) ** (cover.p - 1.0) / denominator


def lambda_ratio(body: VPolytope, frame) -> float:
    """|K|^{n-1} / ∏ |K ∩ w_i⊥|."""
    return _cover_ratio(body, UniformCover.singletons(body.dim), np.asarray(frame, dtype=float))


def lambda_cover_ratio(body: VPolytope, cover: UniformCover, frame) -> float:
    validate_cover(cover)
    return _cover_ratio(body, cover, np.asarray(frame, dtype=float))


def certificate_basis(body: VPolytope) -> np.ndarray:
    """Principal axes of Z_2(K) for a centered body of volume 1."""
    return principal_axes(z2_ellipsoid(body))


def lambda_cover_search(
    body: VPolytope,
    cover: UniformCover,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    threads: int = 1,
) -> LambdaResult:
    validate_cover(cover)
    n = body.dim
    cert_basis = certificate_basis(body)

    def objective(frame):
        return _cover_ratio(body, cover, frame)

    certificate = objective(cert_basis)
    result = search_frames(
        objective, n, seeds=[cert_basis, np.eye(n)], restarts=restarts, sense="min", seed=seed,
        threads=threads,
    )
    value, witness = result.value, result.frame
    if certificate < value:
        value, witness = certificate, cert_basis
    return LambdaResult(value, witness, certificate, "search", "min", result.diagnostics())


def lambda_tilde(body: VPolytope, restarts: int = DEFAULT_RESTARTS, seed: int = 0, threads: int = 1):
    return lambda_cover_search(body, UniformCover.singletons(body.dim), restarts, seed, threads)


def _radial(normals: np.ndarray, offsets: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Radial function of {x : normals x ≤ offsets} (0 interior) along unit rows."""
    proj = directions @ normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(proj > 1e-15, offsets[None, :] / proj, np.inf)
    return ratios.min(axis=1)


def _chords(body: VPolytope, angles: np.ndarray) -> np.ndarray:
    """Length of the chord through 0 in direction (cos a, sin a)."""
    normals, offsets = body.hull.normals, body.hull.offsets
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    return _radial(normals, offsets, dirs) + _radial(normals, offsets, -dirs)


def _min_vertex_gap(body: VPolytope) -> float:
    angles = np.sort(np.mod(np.arctan2(body.vertices[:, 1], body.vertices[:, 0]), np.pi))
    gaps = np.diff(np.concatenate([angles, [angles[0] + np.pi]]))
    gaps = gaps[gaps > 0]
    return float(gaps.min()) if gaps.size else math.pi


def _planar_frame(phi: float, chord_w1: float, chord_w2: float) -> np.ndarray:
    w1 = np.array([math.cos(phi), math.sin(phi)])
    w2 = np.array([-w1[1], w1[0]])
    # K ∩ w2⊥ is the chord along w1; the longer chord goes first.
    if chord_w2 > chord_w1:
        w1, w2 = w2, w1
    if w1[0] < 0 or (w1[0] == 0 and w1[1] < 0):
        w1 = -w1
    return np.column_stack([w1, np.array([-w1[1], w1[0]])])


def lambda_tilde_planar(body: VPolytope, resolution: float = PLANAR_SCAN_RESOLUTION) -> LambdaResult:
    """Angle scan over [0, π/2) followed by bounded refinement of the best bracket."""
    if body.dim != 2:
        raise ValueError(f"planar scan needs a planar body, got dimension {body.dim}")
    area = volume(body)
    steps = int(math.ceil((math.pi / 2) / resolution))
    phis = np.arange(steps) * resolution

    def ratio(phi):
        phi = np.atleast_1d(phi)
        return area / (_chords(body, phi) * _chords(body, phi + math.pi / 2))

    values = ratio(phis)
    k = int(np.argmin(values))
    refined = minimize_scalar(
        lambda t: float(ratio(t)[0]),
        bounds=(phis[k] - resolution, phis[k] + resolution),
        method="bounded",
        options={"xatol": PLANAR_REFINE_TOL},
    )
    phi, value = float(phis[k]), float(values[k])
    if refined.fun < value:
        phi, value = float(refined.x), float(refined.fun)
    gap = _min_vertex_gap(body)
    if resolution > gap:
        logger.warning(f"planar scan step {resolution:.3e} exceeds the minimal vertex angular gap {gap:.3e}")
    c1 = float(_chords(body, np.array([phi]))[0])
    c2 = float(_chords(body, np.array([phi + math.pi / 2]))[0])
    witness = _planar_frame(phi, c1, c2)
    certificate = math.nan
    if is_normalized(body):
        cert_basis = certificate_basis(body)
        certificate = lambda_ratio(body, cert_basis)
        if certificate < value:
            value, witness = certificate, cert_basis
    return LambdaResult(
        value,
        witness,
        certificate,
        "scan",
        "min",
        {"scan_steps": steps, "resolution": resolution, "min_vertex_gap": gap, "angle": phi},
    )


def _orient_ccw(points: List[Tuple[Fraction, Fraction]]) -> List[Tuple[Fraction, Fraction]]:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(float(p[1] - cy), float(p[0] - cx)))


def _exact_chord(edges, ux: Fraction, uy: Fraction) -> Fraction:
    """Length parameter t+ - t- of {t u} ∩ K, exact for rational data."""
    upper, lower = None, None
    for (px, py), (qx, qy) in edges:
        nx, ny = qy - py, -(qx - px)
        c = nx * px + ny * py
        g = nx * ux + ny * uy
        if g > 0:
            upper = c / g if upper is None else min(upper, c / g)
        elif g < 0:
            lower = c / g if lower is None else max(lower, c / g)
    return upper - lower


def exact_planar_ratio(vertices: Sequence[Sequence], direction: Sequence) -> Fraction:
    """|K| / (|K ∩ w1⊥| |K ∩ w2⊥|) in rational arithmetic.

    ``vertices`` are the rational vertices of a convex polygon containing 0 in its
    interior, ``direction`` a rational (unnormalized) vector along w1.
    """
    pts = _orient_ccw([(Fraction(x), Fraction(y)) for x, y in vertices])
    edges = list(zip(pts, pts[1:] + pts[:1]))
    area = sum(p[0] * q[1] - q[0] * p[1] for p, q in edges) / 2
    a, b = Fraction(direction[0]), Fraction(direction[1])
    # |K ∩ w1⊥| = chord along (-b, a); |K ∩ w2⊥| = chord along (a, b); both scale by |w|.
    along_w2 = _exact_chord(edges, -b, a)
    along_w1 = _exact_chord(edges, a, b)
    return abs(area) / (along_w1 * along_w2 * (a * a + b * b))


def lambda_lw_search(
    body: VPolytope, restarts: int = DEFAULT_RESTARTS, seed: int = 0, threads: int = 1
) -> LambdaResult:
    """Maximize |K|^{n-1} / ∏|P_{w_i⊥}K| over frames; the value bounds Λ(K) from below."""
    n = body.dim
    scale = volume(body) ** (n - 1)

    def objective(frame):
        return scale / float(np.prod(shadows(body, frame.T)))

    cert_basis = certificate_basis(normalize(body)[0])
    certificate = objective(cert_basis)
    result = search_frames(
        objective, n, seeds=[cert_basis, np.eye(n)], restarts=restarts, sense="max", seed=seed,
        threads=threads,
    )
    value, witness = result.value, result.frame
    if certificate > value:
        value, witness = certificate, cert_basis
    return LambdaResult(value, witness, certificate, "search", "max", result.diagnostics())


@dataclass
class Theorem4Report:
    frame: np.ndarray
    section_perp: float
    factors: List[float]
    c_emp: float
    implied_constant: float
    zp_body: SupportSampledBody
    lw: LambdaResult


def theorem4_ratio(body: VPolytope, subspace: Subspace, frame: np.ndarray):
    """(|K ∩ H⊥|, [|K ∩ (H⊥ ⊕ ⟨w_j⟩)|], C_emp) for ambient frame columns w_j in H."""
    d = subspace.dim
    perp = subspace.complement()
    section_perp = volume(section(body, perp))
    factors = [
        volume(section(body, Subspace.span(np.hstack([perp.basis, frame[:, [j]]]).T, body.dim)))
        for j in range(d)
    ]
    c_emp = volume(body) * section_perp ** (d - 1) / float(np.prod(factors))
    return section_perp, factors, c_emp


def theorem4_frame(
    body: VPolytope, subspace: Subspace, restarts: int = DEFAULT_RESTARTS, seed: int = 0
) -> Tuple[np.ndarray, Theorem4Report]:
    """Reverse Loomis-Whitney frame of P_H Z_d(K), lifted to H, with the empirical constant."""
    d = subspace.dim
    zp_body = projected_zp_body(body, d, subspace)
    lw = lambda_lw_search(zp_body.body, restarts=restarts, seed=seed)
    frame = subspace.basis @ lw.witness
    section_perp, factors, c_emp = theorem4_ratio(body, subspace, frame)
    # |K||K∩H⊥|^{d-1} ≤ C^{d(d-1)} d^{d/2} ∏ factors gives this estimate of C.
    implied = (c_emp / d ** (d / 2)) ** (1.0 / (d * (d - 1)))
    return frame, Theorem4Report(frame, section_perp, factors, c_emp, implied, zp_body, lw)


def restricted_lw_constant(n: int, d: int) -> float:
    """C(n-1, n-d)^d / C(n, d)^{d-1}."""
    return math.comb(n - 1, n - d) ** d / math.comb(n, d) ** (d - 1)


def meyer_constant(n: int) -> float:
    """(n!)^{1/(n-1)} / n^{n/(n-1)}."""
    return math.factorial(n) ** (1.0 / (n - 1)) / n ** (n / (n - 1))
