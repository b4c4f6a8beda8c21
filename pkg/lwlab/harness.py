"""Suite execution: each inequality becomes a list of reproducible report rows.

Every suite expands into independent trials. Trials run through ``ordered_map`` so
the assembled report keeps (suite, dimension, trial) order for any thread count, and
an exception inside a trial becomes an ``error`` row instead of aborting the run.
"""

import logging
import math
import os
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bodies import (
    box2d,
    cross_polytope,
    cube,
    default_point_count,
    gen_random_body,
    ngon,
    parallelogram_fhl,
    random_body_id,
    simplex,
    trial_seed,
)
from .centroid import paouris_product, projected_zp_body
from .constants import (
    BALL_FLOOR_TOL,
    BRUNN_GRID,
    BRUNN_TOL,
    CROSS_POLYTOPE_RESTARTS,
    DEFAULT_DIMS,
    DEFAULT_LOG_DIR,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_THREADS,
    DEFAULT_TRIALS,
    DIAGONAL_ANGLE_TOL,
    ENV_SEED,
    GOLDEN_EXACT_TOL,
    HENSLEY_DIRECTIONS,
    HENSLEY_LOWER,
    PLANAR_GOLDEN_TOL,
    POLYGON_L_TOL,
    PROP41_CONSTANT,
    PROP41_TRIALS,
    REL_TOL,
    SAMPLED_GOLDEN_REL_TOL,
    SUPPORTED_DIMS,
)
from .errors import ConfigError
from .lambda_search import (
    UniformCover,
    exact_planar_ratio,
    lambda_cover_ratio,
    lambda_cover_search,
    lambda_tilde,
    lambda_tilde_planar,
    meyer_constant,
    restricted_lw_constant,
    theorem4_frame,
    theorem4_ratio,
    validate_cover,
)
from .logging_util import SuiteLogger
from .moments import (
    ball_isotropic_constant,
    covariance,
    hensley_bounds,
    hensley_product,
    isotropic_constant,
    isotropic_transform,
)
from .parallel import ordered_map, threads_from_env
from .polytope import Subspace, VPolytope, normalize, project, section, slice_volume, volume
from .projection_bodies import (
    agj_constant,
    agj_section_check,
    petty_zhang_check,
    radial_section_body,
    shadows,
    theorem3_check,
)
from .report import (
    InequalityReport,
    categorize_reports,
    compare_snapshot,
    emit_report,
    load_report,
)

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{ENV_SEED} must be an integer, got {raw!r}") from exc


@dataclass
class SuiteConfig:
    dims: Tuple[int, ...] = DEFAULT_DIMS
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    threads: int = DEFAULT_THREADS
    restarts: int = DEFAULT_RESTARTS
    tolerances: Dict[str, float] = field(default_factory=dict)
    out: Optional[Path] = None
    json_out: Optional[Path] = None
    log_dir: Path = Path(DEFAULT_LOG_DIR)
    snapshot: Optional[Path] = None
    write_snapshot: Optional[Path] = None
    show_success: bool = False

    def __post_init__(self):
        self.dims = tuple(int(n) for n in self.dims)
        if not self.dims:
            raise ConfigError("at least one dimension is required")
        unsupported = [n for n in self.dims if n not in SUPPORTED_DIMS]
        if unsupported:
            raise ConfigError(f"dimensions {unsupported} not in supported set {list(SUPPORTED_DIMS)}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.restarts < 1:
            raise ConfigError(f"restarts must be >= 1, got {self.restarts}")
        for check_id, tol in self.tolerances.items():
            if not tol >= 0:
                raise ConfigError(f"tolerance for {check_id} must be non-negative, got {tol}")

    @classmethod
    def from_env(cls, **overrides) -> "SuiteConfig":
        """Defaults, then LWLAB_SEED / LWLAB_THREADS, then explicit (non-None) overrides."""
        values = {"seed": seed_from_env(), "threads": threads_from_env()}
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def tolerance(self, check_id: str, default: float = REL_TOL) -> float:
        return self.tolerances.get(check_id, default)

    def dims_between(self, lo: int, hi: int) -> List[int]:
        return [n for n in self.dims if lo <= n <= hi]


@dataclass(frozen=True)
class Trial:
    check_id: str
    body_id: str
    dim: int
    run: Callable[[], List[InequalityReport]]


def _guard(trial: Trial) -> List[InequalityReport]:
    try:
        return list(trial.run())
    except Exception as e:
        logger.debug(f"{trial.check_id} on {trial.body_id} raised {type(e).__name__}: {e}")
        return [InequalityReport.from_error(trial.check_id, trial.body_id, trial.dim, e)]


@dataclass(frozen=True)
class RandomBody:
    body_id: str
    n: int
    m: int
    symmetric: bool
    seed: int

    def make(self) -> VPolytope:
        return gen_random_body(self.n, self.m, self.symmetric, self.seed)


def _random_body(cfg: SuiteConfig, stream: str, n: int, index: int, symmetric: bool = False) -> RandomBody:
    seed = trial_seed(cfg.seed, f"{stream}:{n}", index)
    m = default_point_count(n) // 2 if symmetric else default_point_count(n)
    return RandomBody(random_body_id(n, m, symmetric, seed), n, m, symmetric, seed)


def _unit_vectors(seed: int, n: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    vectors = rng.standard_normal((count, n))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def _random_subspace(seed: int, n: int, d: int) -> Subspace:
    rng = np.random.default_rng(seed)
    return Subspace.span(rng.standard_normal((d, n)), n)


def _random_trials(cfg, stream, dims, rows_for, symmetric=False, count=None) -> List[Trial]:
    trials = []
    for n in dims:
        for index in range(cfg.trials if count is None else count):
            spec = _random_body(cfg, stream, n, index, symmetric)
            trials.append(Trial(stream, spec.body_id, n, partial(rows_for, cfg, spec, index)))
    return trials


def _fixed(check_id: str, body_id: str, dim: int, func, *args) -> Trial:
    return Trial(check_id, body_id, dim, partial(func, *args))


# Classical Loomis-Whitney and Meyer


def _lw_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    shadow_product = float(np.prod(shadows(body, np.eye(n))))
    return [
        InequalityReport.inequality(
            "lw", spec.body_id, n, volume(body), shadow_product ** (1.0 / (n - 1)), 1.0,
            tol=cfg.tolerance("lw"),
        )
    ]


def _lw_equality_rows(cfg, n) -> List[InequalityReport]:
    body = cube(n)
    shadow_product = float(np.prod(shadows(body, np.eye(n))))
    return [
        InequalityReport.golden("lw.equality", f"cube:{n}", n, shadow_product ** (1.0 / (n - 1)),
                                volume(body), cfg.tolerance("lw.equality", GOLDEN_EXACT_TOL))
    ]


def _coordinate_sections(body: VPolytope) -> List[float]:
    return [volume(section(body, Subspace.hyperplane(e))) for e in np.eye(body.dim)]


def _meyer_lhs(body: VPolytope) -> float:
    n = body.dim
    return meyer_constant(n) * float(np.prod(_coordinate_sections(body))) ** (1.0 / (n - 1))


def _meyer_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    return [
        InequalityReport.inequality("meyer", spec.body_id, n, _meyer_lhs(body), volume(body),
                                    meyer_constant(n), tol=cfg.tolerance("meyer"))
    ]


def _meyer_equality_rows(cfg, n) -> List[InequalityReport]:
    body = cross_polytope(n)
    rows = [
        InequalityReport.golden("meyer.equality", f"cross-polytope:{n}", n, _meyer_lhs(body), volume(body),
                                cfg.tolerance("meyer.equality", GOLDEN_EXACT_TOL))
    ]
    if n == 2:
        rows.append(InequalityReport.golden("meyer.constant", "constant", 2, meyer_constant(2), 0.5,
                                            cfg.tolerance("meyer.constant", 1e-15)))
    return rows


def _suite_lw(cfg: SuiteConfig) -> List[Trial]:
    trials = [_fixed("lw.equality", f"cube:{n}", n, _lw_equality_rows, cfg, n) for n in cfg.dims]
    return trials + _random_trials(cfg, "lw", cfg.dims, _lw_rows)


def _suite_meyer(cfg: SuiteConfig) -> List[Trial]:
    trials = [
        _fixed("meyer.equality", f"cross-polytope:{n}", n, _meyer_equality_rows, cfg, n) for n in cfg.dims
    ]
    return trials + _random_trials(cfg, "meyer", cfg.dims, _meyer_rows)


# Hensley


def _hensley_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    cov = covariance(body)
    lower, upper = hensley_bounds(n)
    directions = _unit_vectors(trial_seed(cfg.seed, f"hensley-directions:{n}", index), n, HENSLEY_DIRECTIONS)
    tol = cfg.tolerance("hensley")
    rows = []
    for theta in directions:
        value = hensley_product(body, theta, cov)
        witness = {"direction": theta}
        rows.append(InequalityReport.inequality("hensley.lower", spec.body_id, n, lower, value, lower,
                                                tol=tol, witness=witness))
        rows.append(InequalityReport.inequality("hensley.upper", spec.body_id, n, value, upper, upper,
                                                tol=tol, witness=witness))
    return rows


def _hensley_equality_rows(cfg, n) -> List[InequalityReport]:
    e1 = np.eye(n)[0]
    witness = {"direction": e1}
    rows = [
        InequalityReport.golden(
            "hensley.cube", f"cube:{n}", n, hensley_product(cube(n), e1), HENSLEY_LOWER,
            cfg.tolerance("hensley.cube", 1e-12), witness=witness,
        )
    ]
    if n == 2:
        l1_ball, _ = normalize(cross_polytope(2))
        rows.append(
            InequalityReport.golden(
                "hensley.double-cone", "cross-polytope:2", 2, hensley_product(l1_ball, e1),
                hensley_bounds(2)[1], cfg.tolerance("hensley.double-cone", GOLDEN_EXACT_TOL),
                witness=witness,
            )
        )
    return rows


def _suite_hensley(cfg: SuiteConfig) -> List[Trial]:
    trials = [_fixed("hensley.cube", f"cube:{n}", n, _hensley_equality_rows, cfg, n) for n in cfg.dims]
    return trials + _random_trials(cfg, "hensley", cfg.dims, _hensley_rows)


# Reverse dual Loomis-Whitney bound and isotropic constants


def _isotropic_golden_rows(cfg) -> List[InequalityReport]:
    tol = cfg.tolerance("lk", GOLDEN_EXACT_TOL)
    disk = 1.0 / (2.0 * math.sqrt(math.pi))
    return [
        InequalityReport.golden("lk.square", "cube:2", 2, isotropic_constant(cube(2)),
                                1.0 / math.sqrt(12.0), tol),
        InequalityReport.golden("lk.triangle", "simplex:2", 2, isotropic_constant(simplex(2)),
                                1.0 / (math.sqrt(6.0) * 3.0**0.25), tol),
        InequalityReport.golden("lk.disk", "ngon:64", 2, isotropic_constant(ngon(64)), disk,
                                cfg.tolerance("lk.disk", POLYGON_L_TOL)),
    ]


def _thm1_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    L = isotropic_constant(body)
    search_seed = trial_seed(cfg.seed, f"thm1-search:{n}", index)
    upper = lambda_tilde(body, restarts=cfg.restarts, seed=search_seed)
    iso = isotropic_transform(body).body
    lower = lambda_tilde(iso, restarts=cfg.restarts, seed=search_seed)
    tol = cfg.tolerance("thm1")
    return [
        InequalityReport.inequality("thm1.upper", spec.body_id, n, upper.value, (2.0 * SQRT3 * L) ** n,
                                    2.0 * SQRT3, tol=tol, witness={"frame": upper.witness, "L": L}),
        InequalityReport.inequality("thm1.certificate", spec.body_id, n, upper.value, upper.certificate,
                                    tol=tol, witness=upper.diagnostics),
        InequalityReport.inequality("thm1.lower", spec.body_id, n, (math.sqrt(2.0) * L) ** n, lower.value,
                                    math.sqrt(2.0), tol=tol, witness={"frame": lower.witness, "L": L}),
        InequalityReport.inequality("thm1.ball-floor", spec.body_id, n, ball_isotropic_constant(n), L,
                                    tol=cfg.tolerance("thm1.ball-floor", BALL_FLOOR_TOL)),
    ]


def _suite_thm1(cfg: SuiteConfig) -> List[Trial]:
    trials = [_fixed("lk", "planar-goldens", 2, _isotropic_golden_rows, cfg)]
    return trials + _random_trials(cfg, "thm1", cfg.dims, _thm1_rows)


# Uniform covers


def _covers(n: int) -> List[Tuple[str, UniformCover]]:
    covers = [("singletons", UniformCover.singletons(n))]
    if n >= 3:
        sets = tuple(tuple(sorted((i, (i + 1) % n))) for i in range(n))
        covers.append(("cyclic-pairs", UniformCover(n, sets, (0.5,) * n)))
    return covers


def _ball_floor(cover: UniformCover, L: float) -> float:
    """L_Kⁿ / ∏_j L_{B_2^{d_j}}^{p_j d_j}."""
    denominator = 1.0
    for weight, d in zip(cover.weights, cover.dims):
        denominator *= ball_isotropic_constant(d) ** (weight * d)
    return L ** cover.n / denominator


def _thm2_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    L = isotropic_constant(body)
    rows = [
        InequalityReport.golden("thm2.trivial", spec.body_id, n,
                                lambda_cover_ratio(body, UniformCover.trivial(n), np.eye(n)), 1.0,
                                cfg.tolerance("thm2.trivial", 1e-12))
    ]
    for name, cover in _covers(n):
        check = validate_cover(cover)
        search_seed = trial_seed(cfg.seed, f"thm2-search:{name}:{n}", index)
        result = lambda_cover_search(body, cover, restarts=cfg.restarts, seed=search_seed)
        value, certificate = result.value, result.certificate
        rows.append(
            InequalityReport.inequality(
                "thm2.chain", spec.body_id, n, value, certificate, tol=cfg.tolerance("thm2.chain"),
                witness={"cover": name, "p": check.p, "frame": result.witness},
            )
        )
        rows.append(
            InequalityReport.report_only(
                "thm2.scaled", spec.body_id, n, value ** (1.0 / n) / L, certificate ** (1.0 / n) / L,
                witness={"cover": name},
            )
        )
        rows.append(
            InequalityReport.report_only(
                "thm2.lower", spec.body_id, n, _ball_floor(cover, L), value,
                witness={"cover": name, "L": L},
            )
        )
    return rows


def _cube_pairs_rows(cfg) -> List[InequalityReport]:
    cover = UniformCover(4, ((0, 1), (2, 3), (0, 2), (1, 3)), (0.5,) * 4)
    result = lambda_cover_search(cube(4), cover, restarts=cfg.restarts, seed=cfg.seed)
    return [
        InequalityReport.inequality("thm2.cube-pairs", "cube:4", 4, result.value, 1.0,
                                    tol=cfg.tolerance("thm2.cube-pairs"), witness={"frame": result.witness})
    ]


def _suite_thm2(cfg: SuiteConfig) -> List[Trial]:
    trials = _random_trials(cfg, "thm2", cfg.dims, _thm2_rows)
    if 4 in cfg.dims:
        trials.append(_fixed("thm2.cube-pairs", "cube:4", 4, _cube_pairs_rows, cfg))
    return trials


# Cross-polytope frames, AGJ and restricted Loomis-Whitney


def _section_dims(n: int) -> List[int]:
    return [d for d in (2, 3) if d <= n - 1]


def _subspace_for(cfg, stream, n, d, index) -> Subspace:
    return _random_subspace(trial_seed(cfg.seed, f"{stream}-subspace:{n}:{d}", index), n, d)


def _thm3_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    rows = []
    for d in _section_dims(n):
        subspace = _subspace_for(cfg, "thm3", n, d, index)
        radial = radial_section_body(body, subspace)
        rows.append(agj_section_check(body, subspace, spec.body_id, radial))
        rows.append(
            theorem3_check(body, subspace, spec.body_id, restarts=min(cfg.restarts, CROSS_POLYTOPE_RESTARTS),
                           seed=trial_seed(cfg.seed, f"thm3-search:{n}:{d}", index), radial=radial)
        )
    return rows


def _suite_thm3(cfg: SuiteConfig) -> List[Trial]:
    return _random_trials(cfg, "thm3", cfg.dims_between(3, 4), _thm3_rows)


def _agj_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    return [
        agj_section_check(body, _subspace_for(cfg, "agj", n, d, index), spec.body_id)
        for d in _section_dims(n)
    ]


def _agj_constant_rows(cfg) -> List[InequalityReport]:
    return [InequalityReport.golden("agj.constant", "constant", 3, agj_constant(3, 2), 10.0 / 9.0, 1e-15)]


def _suite_agj(cfg: SuiteConfig) -> List[Trial]:
    trials = [_fixed("agj.constant", "constant", 3, _agj_constant_rows, cfg)] if 3 in cfg.dims else []
    return trials + _random_trials(cfg, "agj", cfg.dims_between(3, 4), _agj_rows)


def _restricted_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    rows = []
    for d in range(2, n):
        subspace = _subspace_for(cfg, "restricted-lw", n, d, index)
        constant = restricted_lw_constant(n, d)
        lhs = volume(project(body, subspace.complement())) * volume(body) ** (d - 1)
        rhs = constant * float(np.prod(shadows(body, subspace.basis.T)))
        rows.append(InequalityReport.inequality("restricted-lw", spec.body_id, n, lhs, rhs, constant,
                                                tol=cfg.tolerance("restricted-lw"),
                                                witness={"subspace": subspace.basis}))
    return rows


def _restricted_constant_rows(cfg) -> List[InequalityReport]:
    return [
        InequalityReport.golden("restricted-lw.constant", "constant", 3, restricted_lw_constant(3, 2),
                                4.0 / 3.0, 1e-15)
    ]


def _suite_restricted_lw(cfg: SuiteConfig) -> List[Trial]:
    trials = []
    if 3 in cfg.dims:
        trials.append(_fixed("restricted-lw.constant", "constant", 3, _restricted_constant_rows, cfg))
    return trials + _random_trials(cfg, "restricted-lw", cfg.dims_between(3, 5), _restricted_rows)


# Restricted frames in a subspace and the Paouris sandwich (report only)


def _thm4_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    d = 2
    subspace = _subspace_for(cfg, "thm4", n, d, index)
    frame, report = theorem4_frame(body, subspace, restarts=cfg.restarts,
                                   seed=trial_seed(cfg.seed, f"thm4-search:{n}", index))
    return [
        InequalityReport.report_only(
            "thm4", spec.body_id, n, report.c_emp, report.implied_constant, d ** (d / 2),
            uncertainty=report.zp_body.uncertainty,
            witness={
                "frame": frame,
                "section_perp": report.section_perp,
                "factors": report.factors,
                "samples": report.zp_body.samples,
            },
        )
    ]


def _thm4_cube_rows(cfg) -> List[InequalityReport]:
    _, _, c_emp = theorem4_ratio(cube(3), Subspace.coordinate([0, 1], 3), np.eye(3)[:, :2])
    tol = cfg.tolerance("thm4.cube", GOLDEN_EXACT_TOL)
    return [InequalityReport.golden("thm4.cube", "cube:3", 3, c_emp, 1.0, tol)]


def _suite_thm4(cfg: SuiteConfig) -> List[Trial]:
    trials = [_fixed("thm4.cube", "cube:3", 3, _thm4_cube_rows, cfg)] if 3 in cfg.dims else []
    return trials + _random_trials(cfg, "thm4", cfg.dims_between(3, 4), _thm4_rows)


def _paouris_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    subspace = _subspace_for(cfg, "paouris", n, 2, index)
    zp_body = projected_zp_body(body, 2, subspace)
    product = paouris_product(body, subspace, zp_body=zp_body)
    return [
        InequalityReport.report_only(
            "paouris", spec.body_id, n, product, 1.0, uncertainty=product * zp_body.stability / 2.0,
            witness={"subspace": subspace.basis, "zp_volume": zp_body.volume, "samples": zp_body.samples},
        )
    ]


def _paouris_cube_rows(cfg) -> List[InequalityReport]:
    expected = math.sqrt(math.pi / 12.0)
    product = paouris_product(cube(3), Subspace.coordinate([0, 1], 3))
    return [
        InequalityReport.golden("paouris.cube", "cube:3", 3, product, expected,
                                cfg.tolerance("paouris.cube", SAMPLED_GOLDEN_REL_TOL * expected))
    ]


def _suite_paouris(cfg: SuiteConfig) -> List[Trial]:
    trials = [_fixed("paouris.cube", "cube:3", 3, _paouris_cube_rows, cfg)] if 3 in cfg.dims else []
    return trials + _random_trials(cfg, "paouris", cfg.dims_between(3, 4), _paouris_rows)


# Petty-Zhang


def _petty_zhang_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    return petty_zhang_check(spec.make(), spec.body_id)


def _petty_zhang_golden_rows(cfg, body_id, body, expected) -> List[InequalityReport]:
    rows = petty_zhang_check(body, body_id)
    product = rows[0].rhs
    rows.append(
        InequalityReport.golden("petty-zhang.extremal", body_id, body.dim, product, expected,
                                cfg.tolerance("petty-zhang.extremal", SAMPLED_GOLDEN_REL_TOL * expected))
    )
    return rows


def _suite_petty_zhang(cfg: SuiteConfig) -> List[Trial]:
    goldens = [
        ("simplex:2", simplex(2), 1.5),
        ("ngon:64", ngon(64), (math.pi / 2.0) ** 2),
        ("cube:2", cube(2), 2.0),
    ]
    trials = [
        _fixed("petty-zhang.extremal", body_id, 2, _petty_zhang_golden_rows, cfg, body_id, body, expected)
        for body_id, body, expected in goldens
    ]
    return trials + _random_trials(cfg, "petty-zhang", cfg.dims_between(2, 3), _petty_zhang_rows)


# Planar: box formula, parallelogram counterexample, symmetric chain


def _diagonal_angle(w1: np.ndarray, l: float) -> float:
    hx, hy = 1.0 / (2.0 * l), l / 2.0
    angles = []
    for diagonal in (np.array([hx, hy]), np.array([hx, -hy])):
        diagonal = diagonal / np.linalg.norm(diagonal)
        cross = w1[0] * diagonal[1] - w1[1] * diagonal[0]
        angles.append(math.atan2(abs(cross), abs(float(w1 @ diagonal))))
    return min(angles)


def _box_rows(cfg, l: float) -> List[InequalityReport]:
    body_id = f"box2d:{l:g}"
    result = lambda_tilde_planar(box2d(l))
    angle = _diagonal_angle(result.witness[:, 0], l)
    witness = {"frame": result.witness, "angle": result.diagnostics["angle"]}
    return [
        InequalityReport.golden("planar.box", body_id, 2, result.value, l**4 / (l**4 + 1.0),
                                cfg.tolerance("planar.box", PLANAR_GOLDEN_TOL), witness=witness),
        InequalityReport.golden("planar.diagonal", body_id, 2, angle, 0.0,
                                cfg.tolerance("planar.diagonal", DIAGONAL_ANGLE_TOL), witness=witness),
    ]


def _fhl_rows(cfg) -> List[InequalityReport]:
    body = parallelogram_fhl()
    exact = exact_planar_ratio(body.vertices.tolist(), (2, 1))
    scan = lambda_tilde_planar(body)
    return [
        InequalityReport.golden("planar.fhl", "parallelogram-fhl", 2, float(exact), 0.6,
                                cfg.tolerance("planar.fhl", 1e-12), witness={"exact": str(exact)}),
        InequalityReport.inequality("planar.fhl-scan", "parallelogram-fhl", 2, scan.value, 0.6,
                                    tol=cfg.tolerance("planar.fhl-scan"), witness={"frame": scan.witness}),
    ]


def _prop41_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    result = lambda_tilde_planar(body)
    bound = PROP41_CONSTANT * isotropic_constant(body) ** 2
    tol = cfg.tolerance("prop41")
    return [
        InequalityReport.inequality("prop41.value", spec.body_id, 2, result.value, result.certificate,
                                    tol=tol, witness={"frame": result.witness}),
        InequalityReport.inequality("prop41.certificate", spec.body_id, 2, result.certificate, bound,
                                    PROP41_CONSTANT, tol=tol),
        InequalityReport.inequality("prop41.bound", spec.body_id, 2, bound, 1.0, PROP41_CONSTANT, tol=tol),
    ]


def _suite_planar(cfg: SuiteConfig) -> List[Trial]:
    trials = [_fixed("planar.box", f"box2d:{l:g}", 2, _box_rows, cfg, l) for l in (1.0, math.sqrt(2.0), 2.0)]
    trials.append(_fixed("planar.fhl", "parallelogram-fhl", 2, _fhl_rows, cfg))
    return trials + _random_trials(
        cfg, "prop41", [2], _prop41_rows, symmetric=True, count=max(cfg.trials, PROP41_TRIALS)
    )


# Brunn concavity of marginals


def _brunn_rows(cfg, spec: RandomBody, index) -> List[InequalityReport]:
    body = spec.make()
    n = body.dim
    theta = _unit_vectors(trial_seed(cfg.seed, f"brunn-direction:{n}", index), n, 1)[0]
    heights = body.vertices @ theta
    lo, hi = float(heights.min()), float(heights.max())
    ts = lo + (hi - lo) * np.arange(1, BRUNN_GRID + 1) / (BRUNN_GRID + 1)
    g = np.array([slice_volume(body, theta, t) for t in ts]) ** (1.0 / (n - 1))
    second = g[:-2] + g[2:] - 2.0 * g[1:-1]
    return [
        InequalityReport.inequality("brunn", spec.body_id, n, float(second.max()), 0.0,
                                    tol=cfg.tolerance("brunn", BRUNN_TOL), witness={"direction": theta})
    ]


def _suite_brunn(cfg: SuiteConfig) -> List[Trial]:
    return _random_trials(cfg, "brunn", cfg.dims, _brunn_rows)


SUITES: Dict[str, Callable[[SuiteConfig], List[Trial]]] = {
    "lw": _suite_lw,
    "meyer": _suite_meyer,
    "hensley": _suite_hensley,
    "thm1": _suite_thm1,
    "thm2": _suite_thm2,
    "thm3": _suite_thm3,
    "thm4": _suite_thm4,
    "restricted-lw": _suite_restricted_lw,
    "petty-zhang": _suite_petty_zhang,
    "agj": _suite_agj,
    "paouris": _suite_paouris,
    "planar": _suite_planar,
    "brunn": _suite_brunn,
}


def suite_names(name: str) -> List[str]:
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; expected one of {sorted(SUITES)} or all")
    return [name]


def run_suite(name: str, cfg: SuiteConfig) -> List[InequalityReport]:
    """Rows of one suite (or every suite for ``all``) in a fixed order."""
    rows = []
    for suite in suite_names(name):
        trials = SUITES[suite](cfg)
        logger.debug(f"suite {suite}: {len(trials)} trials on {cfg.threads} threads")
        for result in ordered_map(_guard, trials, cfg.threads):
            rows.extend(result)
    return rows


def verify(
    name: str, cfg: SuiteConfig, suite_logger: Optional[SuiteLogger] = None
) -> Tuple[List[InequalityReport], Dict]:
    """Run, compare against the snapshot if one exists, log and write the configured reports."""
    suites = suite_names(name)
    suite_logger = suite_logger or SuiteLogger(cfg.log_dir, suite=name, show_success=cfg.show_success)
    suite_logger.log_session_start(suites, cfg)
    rows = run_suite(name, cfg)
    if cfg.write_snapshot is not None:
        emit_report(rows, cfg.write_snapshot)
    if cfg.snapshot is not None and Path(cfg.snapshot).is_file():
        rows = compare_snapshot(rows, load_report(cfg.snapshot))
    for index, row in enumerate(rows):
        suite_logger.log_row(index, row)
    summary = categorize_reports(rows)
    suite_logger.log_session_end(summary)
    if cfg.out is not None:
        emit_report(rows, cfg.out, "csv")
    if cfg.json_out is not None:
        emit_report(rows, cfg.json_out, "json")
    return rows, summary


def parse_dims(values: Sequence) -> Tuple[int, ...]:
    """Accepts ``[3]``, ``["2,3"]`` or ``["2", "4"]``."""
    dims = []
    for value in values:
        for token in str(value).split(","):
            token = token.strip()
            if not token:
                continue
            try:
                dims.append(int(token))
            except ValueError as exc:
                raise ConfigError(f"dimension must be an integer, got {token!r}") from exc
    return tuple(dims)
