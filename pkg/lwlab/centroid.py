"""L_p centroid bodies Z_p(K) through one-dimensional marginals.

t -> |K ∩ (θ⊥ + tθ)| is a polynomial of degree n - 1 between consecutive vertex
heights, so each piece is recovered exactly from n Gauss-Legendre samples.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.linalg import null_space
from scipy.spatial import HalfspaceIntersection
from scipy.special import roots_jacobi

from .constants import MARGINAL_MERGE_TOL, SAMPLE_CAP_FACTOR, SUPPORT_SAMPLES, ZP_NODES, ZP_STABILITY
from .errors import Unconverged
from .frames import coarse_subset, sphere_directions
from .moments import covariance
from .parallel import ordered_map
from .polytope import Subspace, VPolytope, interior_hint, section, slice_body, volume

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MarginalDensity:
    """Piecewise polynomial f(t) = |K ∩ (θ⊥ + tθ)| on ``breakpoints``.

    ``pieces[i]`` holds Legendre coefficients on [breakpoints[i], breakpoints[i + 1]]
    mapped to [-1, 1].
    """

    direction: np.ndarray
    breakpoints: np.ndarray
    pieces: Tuple[np.ndarray, ...]

    @property
    def support(self) -> Tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        for (a, b), coef in zip(self.intervals(), self.pieces):
            mask = (t >= a) & (t <= b)
            if np.any(mask):
                out[mask] = npleg.legval(_to_unit(t[mask], a, b), coef)
        return np.clip(out, 0.0, None)

    def intervals(self):
        return list(zip(self.breakpoints[:-1], self.breakpoints[1:]))

    def piece_value(self, index: int, t) -> np.ndarray:
        a, b = self.breakpoints[index], self.breakpoints[index + 1]
        return npleg.legval(_to_unit(np.asarray(t, dtype=float), a, b), self.pieces[index])

    def integrate(self) -> float:
        """∫ f(t) dt; the Legendre integral over [-1, 1] is 2 c_0."""
        return float(sum((b - a) * coef[0] for (a, b), coef in zip(self.intervals(), self.pieces)))

    def split_at(self, t0: float) -> "MarginalDensity":
        """Same density with an extra breakpoint at ``t0`` (if inside the support)."""
        lo, hi = self.support
        if not lo < t0 < hi or np.any(np.abs(self.breakpoints - t0) <= MARGINAL_MERGE_TOL):
            return self
        idx = int(np.searchsorted(self.breakpoints, t0))
        a, b = self.breakpoints[idx - 1], self.breakpoints[idx]
        degree = len(self.pieces[idx - 1]) - 1
        new_pieces = []
        for left, right in ((a, t0), (t0, b)):
            nodes, _ = npleg.leggauss(degree + 1)
            ts = 0.5 * (right - left) * nodes + 0.5 * (right + left)
            values = self.piece_value(idx - 1, ts)
            new_pieces.append(npleg.legfit(nodes, values, degree))
        pieces = self.pieces[: idx - 1] + tuple(new_pieces) + self.pieces[idx:]
        breakpoints = np.insert(self.breakpoints, idx, t0)
        return MarginalDensity(self.direction, breakpoints, pieces)


def _to_unit(t, a, b):
    return (2.0 * t - (a + b)) / (b - a)


def _merged_heights(heights: np.ndarray, scale: float) -> np.ndarray:
    heights = np.sort(heights)
    keep = [heights[0]]
    for h in heights[1:]:
        if h - keep[-1] > MARGINAL_MERGE_TOL * scale:
            keep.append(h)
    return np.asarray(keep)


def marginal(body: VPolytope, theta) -> MarginalDensity:
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    n = body.dim
    breakpoints = _merged_heights(body.vertices @ theta, body.scale)
    basis = null_space(theta[None, :])
    nodes, _ = npleg.leggauss(n)
    pieces = []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        ts = 0.5 * (b - a) * nodes + 0.5 * (b + a)
        values = np.array(
            [
                volume(slice_body(body, theta, t, hint=interior_hint(body, theta, t), basis=basis))
                for t in ts
            ]
        )
        pieces.append(npleg.legfit(nodes, values, n - 1))
    return MarginalDensity(theta, breakpoints, tuple(pieces))


def _abs_moment_piece(density: MarginalDensity, index: int, p: float) -> float:
    """∫ |t|^p f(t) over one piece that does not straddle 0."""
    a, b = density.breakpoints[index], density.breakpoints[index + 1]
    degree = len(density.pieces[index]) - 1
    if a == 0.0 or b == 0.0:
        # Gauss-Jacobi with weight (1 + x)^p absorbs |t|^p at the endpoint touching 0.
        far = b if a == 0.0 else a
        q = max(degree // 2 + 2, 4)
        x, w = roots_jacobi(q, 0.0, p)
        t = far * 0.5 * (1.0 + x)
        half = abs(far) * 0.5
        return float(half ** (p + 1.0) * np.sum(w * density.piece_value(index, t)))
    x, w = npleg.leggauss(ZP_NODES)
    t = 0.5 * (b - a) * x + 0.5 * (b + a)
    return float(0.5 * (b - a) * np.sum(w * np.abs(t) ** p * density.piece_value(index, t)))


def zp_moment(density: MarginalDensity, p: float) -> float:
    """∫ |t|^p f(t) dt."""
    split = density.split_at(0.0)
    return sum(_abs_moment_piece(split, i, p) for i in range(len(split.pieces)))


def zp_support(body: VPolytope, p: float, y, cov: Optional[np.ndarray] = None) -> float:
    """h_{Z_p(K)}(y) = (∫_K |⟨x, y⟩|^p dx)^{1/p} for a centered body of volume 1."""
    if p < 1:
        raise ValueError(f"centroid bodies need p >= 1, got {p}")
    y = np.asarray(y, dtype=float)
    r = float(np.linalg.norm(y))
    if r == 0.0:
        return 0.0
    if p == 2:
        cov = covariance(body) if cov is None else cov
        return math.sqrt(max(float(y @ cov @ y), 0.0))
    return r * zp_moment(marginal(body, y / r), p) ** (1.0 / p)


@dataclass(frozen=True, eq=False)
class SupportSampledBody:
    """Outer polytope {u : ⟨u, v_k⟩ ≤ h(v_k)} from sampled support values in H coordinates."""

    dim: int
    directions: np.ndarray
    values: np.ndarray
    body: VPolytope
    volume: float
    stability: float

    @property
    def samples(self) -> int:
        return int(len(self.directions))

    @property
    def uncertainty(self) -> float:
        return self.stability * self.volume


def outer_body(directions: np.ndarray, values: np.ndarray) -> VPolytope:
    halfspaces = np.hstack([directions, -values[:, None]])
    hs = HalfspaceIntersection(halfspaces, np.zeros(directions.shape[1]))
    return VPolytope.from_points(hs.intersections)


def projected_zp_body(
    body: VPolytope, p: float, subspace: Subspace, samples: Optional[int] = None, threads: int = 1
) -> SupportSampledBody:
    """Outer approximation of P_H Z_p(K); h_{P_H Z_p}(u) = h_{Z_p}(u) for u in H.

    Samples double until the N versus N/2 volume change is within tolerance.
    """
    d = subspace.dim
    if d not in SUPPORT_SAMPLES:
        raise ValueError(f"projected centroid bodies need dim H in {sorted(SUPPORT_SAMPLES)}, got {d}")
    count = samples or SUPPORT_SAMPLES[d]
    cap = SUPPORT_SAMPLES[d] * SAMPLE_CAP_FACTOR
    tol = ZP_STABILITY[d]
    cov = covariance(body) if p == 2 else None
    while True:
        dirs = sphere_directions(d, count)
        half = len(dirs) // 2
        ambient = dirs[:half] @ subspace.basis.T
        upper = np.array(ordered_map(lambda y: zp_support(body, p, y, cov), ambient, threads))
        values = np.concatenate([upper, upper])
        fine = outer_body(dirs, values)
        coarse_idx = coarse_subset(dirs)
        coarse = outer_body(dirs[coarse_idx], values[coarse_idx])
        v_fine, v_coarse = volume(fine), volume(coarse)
        stability = abs(v_coarse - v_fine) / v_fine
        logger.debug(f"Z_{p:g} projection d={d} N={len(dirs)}: volume {v_fine:.10g}, change {stability:.2e}")
        if stability <= tol:
            return SupportSampledBody(d, dirs, values, fine, v_fine, stability)
        if count * 2 > cap:
            raise Unconverged(
                f"P_H Z_{p:g}(K) volume change {stability:.2e} above {tol:g} at {len(dirs)} samples"
            )
        count *= 2


def paouris_product(
    body: VPolytope, subspace: Subspace, d: Optional[int] = None, zp_body: Optional[SupportSampledBody] = None
) -> float:
    """|K ∩ H⊥|^{1/d} · |P_H Z_d(K)|^{1/d}."""
    d = subspace.dim if d is None else d
    if d != subspace.dim:
        raise ValueError(f"d={d} does not match dim H={subspace.dim}")
    zp_body = zp_body or projected_zp_body(body, d, subspace)
    perp = volume(section(body, subspace.complement()))
    return perp ** (1.0 / d) * zp_body.volume ** (1.0 / d)
