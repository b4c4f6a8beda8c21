"""Orthonormal frames: Givens-angle charts, sphere directions and a multistart frame search.

The search is shared by the Λ-type basis searches and the inscribed cross-polytope
witness. Restarts are independent; the best value wins with ties going to the lowest
restart index.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.stats import qmc, special_ortho_group

from .constants import (
    DEFAULT_RESTARTS,
    ORTHO_TOL,
    SEARCH_FTOL,
    SEARCH_INITIAL_STEP,
    SEARCH_MAX_SWEEPS,
    SEARCH_MIN_STEP,
)
from .parallel import ordered_map

logger = logging.getLogger(__name__)


def givens_pairs(d: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(d) for j in range(i + 1, d)]


def givens_rotation(d: int, i: int, j: int, angle: float) -> np.ndarray:
    rot = np.eye(d)
    c, s = math.cos(angle), math.sin(angle)
    rot[i, i] = c
    rot[j, j] = c
    rot[i, j] = -s
    rot[j, i] = s
    return rot


def frame_from_angles(angles: Sequence[float], start: np.ndarray) -> np.ndarray:
    """start · ∏ G_ij(angle) over the pairs i < j in lexicographic order."""
    frame = np.array(start, dtype=float)
    d = frame.shape[1]
    for (i, j), angle in zip(givens_pairs(d), angles):
        if angle == 0.0:
            continue
        c, s = math.cos(angle), math.sin(angle)
        col_i, col_j = frame[:, i].copy(), frame[:, j].copy()
        frame[:, i] = c * col_i + s * col_j
        frame[:, j] = -s * col_i + c * col_j
    return frame


def is_orthonormal(frame: np.ndarray, tol: float = ORTHO_TOL) -> bool:
    d = frame.shape[1]
    return bool(np.max(np.abs(frame.T @ frame - np.eye(d))) <= tol)


def reorthonormalize(frame: np.ndarray) -> np.ndarray:
    """Nearest orthonormal columns with the same orientation of each column."""
    q, r = np.linalg.qr(frame)
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def haar_frames(d: int, count: int, seed: int) -> List[np.ndarray]:
    if count <= 0:
        return []
    draws = special_ortho_group.rvs(dim=d, size=count, random_state=seed)
    return list(np.asarray(draws).reshape(count, d, d))


def _sobol_prefix(dims: int, half: int) -> np.ndarray:
    # unscrambled: the same sequence on every call
    return qmc.Sobol(d=dims, scramble=False).random_base2(int(math.log2(half)))


def sphere_directions(d: int, count: int) -> np.ndarray:
    """Centrally symmetric set U ∪ -U of unit directions in R^d.

    U is a prefix of an unscrambled Sobol sequence, so the set for ``count`` is
    contained in the set for ``2 * count``. ``count`` is rounded up to a power of
    two. d = 2 maps the sequence to angles in [0, π), which gives the equally
    spaced angles πj/|U|; d = 3 maps it area-uniformly onto the upper hemisphere.
    """
    half = 1 << max(math.ceil(math.log2(max(count // 2, 1))), 0)
    if d == 1:
        upper = np.ones((1, 1))
    elif d == 2:
        angles = np.pi * _sobol_prefix(1, half)[:, 0]
        upper = np.column_stack([np.cos(angles), np.sin(angles)])
    elif d == 3:
        u = _sobol_prefix(2, half)
        z = u[:, 0]
        r = np.sqrt(1.0 - z**2)
        phi = 2.0 * np.pi * u[:, 1]
        upper = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        raise ValueError(f"direction sampling supports d in (1, 2, 3), got {d}")
    return np.vstack([upper, -upper])


def coarse_subset(directions: np.ndarray) -> np.ndarray:
    """Rows of ``sphere_directions(d, count // 2)`` inside ``sphere_directions(d, count)``."""
    half = len(directions) // 2
    idx = np.arange(max(half // 2, 1))
    return np.concatenate([idx, idx + half])


@dataclass
class RestartOutcome:
    index: int
    start_value: float
    value: float
    frame: np.ndarray
    evaluations: int
    converged: bool


@dataclass
class FrameSearchResult:
    value: float
    frame: np.ndarray
    best_restart: int
    outcomes: List[RestartOutcome] = field(default_factory=list)

    @property
    def evaluations(self) -> int:
        return sum(o.evaluations for o in self.outcomes)

    def diagnostics(self) -> dict:
        return {
            "restarts": len(self.outcomes),
            "best_restart": self.best_restart,
            "evaluations": self.evaluations,
            "converged": sum(o.converged for o in self.outcomes),
        }


def _local_search(signed: Callable[[np.ndarray], float], start: np.ndarray, index: int, ftol: float):
    d = start.shape[1]
    m = d * (d - 1) // 2
    counter = [0]

    def f(angles):
        counter[0] += 1
        return signed(frame_from_angles(angles, start))

    angles = np.zeros(m)
    start_value = f(angles)
    best = start_value
    step = SEARCH_INITIAL_STEP
    sweeps = 0
    while step > SEARCH_MIN_STEP and sweeps < SEARCH_MAX_SWEEPS:
        sweeps += 1
        improved = False
        for k in range(m):
            for delta in (step, -step):
                trial = angles.copy()
                trial[k] += delta
                value = f(trial)
                if value < best - ftol * max(1.0, abs(best)):
                    best, angles, improved = value, trial, True
                    break
        if not improved:
            step *= 0.5
    converged = step <= SEARCH_MIN_STEP

    polish = minimize(
        f,
        angles,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": ftol, "maxiter": 100 * max(m, 1)},
    )
    if polish.fun < best:
        best, angles = float(polish.fun), np.asarray(polish.x)
    logger.debug(f"restart {index}: {start_value:.12g} -> {best:.12g} in {counter[0]} evaluations")
    return RestartOutcome(
        index=index,
        start_value=start_value,
        value=best,
        frame=reorthonormalize(frame_from_angles(angles, start)),
        evaluations=counter[0],
        converged=converged,
    )


def _coordinate_polish(signed, outcome: RestartOutcome) -> RestartOutcome:
    """Bounded one-dimensional refinement along each Givens angle around the winner."""
    frame, best = outcome.frame, outcome.value
    d = frame.shape[1]
    evaluations = outcome.evaluations
    for k in range(d * (d - 1) // 2):
        basis_angles = np.zeros(d * (d - 1) // 2)

        def along(t, k=k, frame=frame):
            angles = basis_angles.copy()
            angles[k] = t
            return signed(frame_from_angles(angles, frame))

        res = minimize_scalar(along, bounds=(-1e-3, 1e-3), method="bounded", options={"xatol": 1e-12})
        evaluations += int(res.nfev)
        if res.fun < best:
            best = float(res.fun)
            frame = reorthonormalize(frame_from_angles(np.eye(1, len(basis_angles), k)[0] * res.x, frame))
    return RestartOutcome(outcome.index, outcome.start_value, best, frame, evaluations, outcome.converged)


def search_frames(
    objective: Callable[[np.ndarray], float],
    d: int,
    seeds: Sequence[np.ndarray] = (),
    restarts: int = DEFAULT_RESTARTS,
    sense: str = "min",
    seed: int = 0,
    threads: int = 1,
    ftol: float = SEARCH_FTOL,
) -> FrameSearchResult:
    """Multistart derivative-free search over d x d orthogonal frames.

    ``seeds`` fill the first restarts in order; the rest are Haar draws from ``seed``.
    Returned values are in the objective's own sign.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    sign = 1.0 if sense == "min" else -1.0

    def signed(frame):
        return sign * float(objective(frame))

    restarts = max(int(restarts), 1)
    starts = [np.asarray(s, dtype=float) for s in seeds][:restarts]
    starts += haar_frames(d, restarts - len(starts), seed)
    if d == 1:
        value = signed(starts[0])
        outcome = RestartOutcome(0, value, value, starts[0], 1, True)
        return FrameSearchResult(sign * value, starts[0], 0, [outcome])

    outcomes = ordered_map(
        lambda item: _local_search(signed, item[1], item[0], ftol), list(enumerate(starts)), threads
    )
    winner = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.value < winner.value:
            winner = outcome
    polished = _coordinate_polish(signed, winner)
    outcomes[winner.index] = polished
    return FrameSearchResult(sign * polished.value, polished.frame, polished.index, outcomes)
