"""Polar projection bodies Π*K and the inequalities built on them.

Shadows come from Cauchy's projection formula over the triangulated boundary,
|P_{θ⊥}K| = ½ Σ_F |⟨ν_F, θ⟩| |F|, which is exact and vectorizes over directions.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .constants import (
    CROSS_POLYTOPE_RESTARTS,
    PISTAR_STABILITY,
    RADIAL_SAMPLES,
    REL_TOL,
    SAMPLE_CAP_FACTOR,
)
from .errors import SearchFailed, Unconverged
from .frames import coarse_subset, search_frames, sphere_directions
from .moments import unit_ball_volume
from .polytope import Subspace, VPolytope, project, volume
from .report import InequalityReport

logger = logging.getLogger(__name__)


def shadows(body: VPolytope, directions) -> np.ndarray:
    """|P_{θ⊥}K| for each unit row θ of ``directions``."""
    normals, areas = body.boundary
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    return 0.5 * np.abs(dirs @ normals.T) @ areas


def shadow(body: VPolytope, theta) -> float:
    theta = np.asarray(theta, dtype=float)
    if abs(np.linalg.norm(theta) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    return float(shadows(body, theta[None, :])[0])


def shadow_by_projection(body: VPolytope, theta) -> float:
    """Same quantity as ``shadow`` through an explicit projected hull."""
    return volume(project(body, Subspace.hyperplane(theta)))


def pistar_radial(body: VPolytope, theta) -> float:
    """ρ_{Π*K}(θ) = 1 / |P_{θ⊥}K|."""
    return 1.0 / shadow(body, theta)


def pistar_norm(body: VPolytope, x) -> float:
    """‖x‖_{Π*K} = |x| |P_{x⊥}K|."""
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0.0:
        return 0.0
    return r * float(shadows(body, (x / r)[None, :])[0])


@dataclass(frozen=True, eq=False)
class RadialSampledBody:
    """Inner polytope conv{ρ(u) u} of Π*K ∩ H in H coordinates."""

    dim: int
    directions: np.ndarray
    radii: np.ndarray
    body: VPolytope
    volume: float
    uncertainty: float

    @property
    def samples(self) -> int:
        return int(len(self.directions))

    @property
    def relative_uncertainty(self) -> float:
        return self.uncertainty / self.volume


def radial_section_body(
    body: VPolytope, subspace: Optional[Subspace] = None, samples: Optional[int] = None
) -> RadialSampledBody:
    """Π*K ∩ H from radial samples; samples double until the N versus N/2 change is in tolerance."""
    subspace = subspace or Subspace.full(body.dim)
    d = subspace.dim
    if d not in RADIAL_SAMPLES:
        raise ValueError(f"polar projection sections need dim H in {sorted(RADIAL_SAMPLES)}, got {d}")
    count = samples or RADIAL_SAMPLES[d]
    cap = RADIAL_SAMPLES[d] * SAMPLE_CAP_FACTOR
    tol = PISTAR_STABILITY[d]
    while True:
        dirs = sphere_directions(d, count)
        radii = 1.0 / shadows(body, dirs @ subspace.basis.T)
        points = dirs * radii[:, None]
        fine = VPolytope.from_points(points)
        coarse = VPolytope.from_points(points[coarse_subset(dirs)])
        v_fine, v_coarse = volume(fine), volume(coarse)
        uncertainty = abs(v_fine - v_coarse)
        logger.debug(f"Π*K section d={d} N={len(dirs)}: volume {v_fine:.10g}, change {uncertainty:.2e}")
        if uncertainty <= tol * v_fine:
            return RadialSampledBody(d, dirs, radii, fine, v_fine, uncertainty)
        if count * 2 > cap:
            raise Unconverged(
                f"Π*K ∩ H volume change {uncertainty / v_fine:.2e} above {tol:g} at {len(dirs)} samples"
            )
        count *= 2


def pistar_section_volume(body: VPolytope, subspace: Optional[Subspace] = None, samples=None) -> float:
    return radial_section_body(body, subspace, samples).volume


def pistar_volume(body: VPolytope, samples=None) -> float:
    return pistar_section_volume(body, Subspace.full(body.dim), samples)


@dataclass(frozen=True, eq=False)
class CrossPolytopeWitness:
    """conv{±ρ(w_i) w_i} inside Π*K ∩ H; ``frame`` columns are ambient, ``local_frame`` in H."""

    frame: np.ndarray
    local_frame: np.ndarray
    radii: np.ndarray
    volume: float
    section_volume: float
    section_uncertainty: float

    @property
    def dim(self) -> int:
        return int(len(self.radii))

    @property
    def certificate_ratio(self) -> float:
        """|Π*K ∩ H| / (d! |C|), at most 1 when the witness is good."""
        return self.section_volume / (math.factorial(self.dim) * self.volume)


def cross_polytope_volume(radii) -> float:
    d = len(radii)
    return 2.0**d / math.factorial(d) * float(np.prod(radii))


def inscribed_cross_polytope(
    body: VPolytope,
    subspace: Subspace,
    restarts: int = CROSS_POLYTOPE_RESTARTS,
    radial: Optional[RadialSampledBody] = None,
    seed: int = 0,
) -> CrossPolytopeWitness:
    """Frame of H maximizing ∏ ρ_{Π*K}(w_i), certified by d!|C| ≥ |Π*K ∩ H|."""
    d = subspace.dim
    basis = subspace.basis
    radial = radial or radial_section_body(body, subspace)

    def log_radii(frame):
        return -float(np.sum(np.log(shadows(body, (basis @ frame).T))))

    result = search_frames(log_radii, d, seeds=[np.eye(d)], restarts=restarts, sense="max", seed=seed)
    frame = basis @ result.frame
    radii = 1.0 / shadows(body, frame.T)
    witness = CrossPolytopeWitness(
        frame=frame,
        local_frame=result.frame,
        radii=radii,
        volume=cross_polytope_volume(radii),
        section_volume=radial.volume,
        section_uncertainty=radial.uncertainty,
    )
    tol = radial.relative_uncertainty + REL_TOL
    if math.factorial(d) * witness.volume < radial.volume * (1.0 - tol):
        raise SearchFailed(
            f"best frame gives d!|C| = {math.factorial(d) * witness.volume:.6g} "
            f"below |Π*K ∩ H| = {radial.volume:.6g}"
        )
    logger.debug(f"cross-polytope witness d={d}: ratio {witness.certificate_ratio:.6f}")
    return witness


def petty_zhang_bounds(n: int):
    lower = math.comb(2 * n, n) / n**n
    upper = (unit_ball_volume(n) / unit_ball_volume(n - 1)) ** n
    return lower, upper


def petty_zhang_check(body: VPolytope, body_id: str = "body", samples=None) -> List[InequalityReport]:
    """C(2n,n)/nⁿ ≤ |K|^{n-1}|Π*K| ≤ (|B_2^n|/|B_2^{n-1}|)ⁿ as two rows."""
    n = body.dim
    if n not in RADIAL_SAMPLES:
        raise ValueError(f"Petty-Zhang checks support n in {sorted(RADIAL_SAMPLES)}, got {n}")
    radial = radial_section_body(body, Subspace.full(n), samples)
    scale = volume(body) ** (n - 1)
    product = scale * radial.volume
    uncertainty = scale * radial.uncertainty
    lower, upper = petty_zhang_bounds(n)
    witness = {"samples": radial.samples, "pistar_volume": radial.volume}
    return [
        InequalityReport.inequality("petty-zhang.lower", body_id, n, lower, product, lower,
                                    uncertainty, witness=witness),
        InequalityReport.inequality("petty-zhang.upper", body_id, n, product, upper, upper,
                                    uncertainty, witness=witness),
    ]


def agj_constant(n: int, d: int) -> float:
    return math.comb(n + d, n) / n**d


def agj_section_check(
    body: VPolytope, subspace: Subspace, body_id: str = "body", radial: Optional[RadialSampledBody] = None
) -> InequalityReport:
    """|K|^{d-1}|Π*K ∩ H| ≥ C(n+d,n) / (n^d |P_{H⊥}K|)."""
    n, d = body.dim, subspace.dim
    radial = radial or radial_section_body(body, subspace)
    shadow_perp = volume(project(body, subspace.complement()))
    scale = volume(body) ** (d - 1)
    constant = agj_constant(n, d)
    return InequalityReport.inequality(
        "agj",
        body_id,
        n,
        constant / shadow_perp,
        scale * radial.volume,
        constant,
        scale * radial.uncertainty,
        witness={"subspace": subspace.basis, "samples": radial.samples},
    )


def theorem3_constant(n: int, d: int) -> float:
    return math.comb(n + d, n) / (2 * n) ** d


def theorem3_check(
    body: VPolytope,
    subspace: Subspace,
    body_id: str = "body",
    restarts: int = CROSS_POLYTOPE_RESTARTS,
    seed: int = 0,
    radial: Optional[RadialSampledBody] = None,
) -> InequalityReport:
    """|P_{H⊥}K||K|^{d-1} ≥ C(n+d,n)/(2n)^d ∏|P_{w_i⊥}K| at the cross-polytope frame."""
    n, d = body.dim, subspace.dim
    witness = inscribed_cross_polytope(body, subspace, restarts=restarts, radial=radial, seed=seed)
    constant = theorem3_constant(n, d)
    lhs = constant * float(np.prod(1.0 / witness.radii))
    rhs = volume(project(body, subspace.complement())) * volume(body) ** (d - 1)
    return InequalityReport.inequality(
        "thm3",
        body_id,
        n,
        lhs,
        rhs,
        constant,
        lhs * (witness.section_uncertainty / witness.section_volume),
        witness={"frame": witness.frame, "certificate_ratio": witness.certificate_ratio},
    )
