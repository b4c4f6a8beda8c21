"""Named bodies, JSON body files and seeded random bodies."""

import itertools
import json
import logging
import math
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .constants import RANDOM_BODY_RETRIES
from .errors import BodySpecError, DegenerateInput
from .polytope import VPolytope, normalize

logger = logging.getLogger(__name__)


def cube(n: int, side: float = 1.0) -> VPolytope:
    """[-side/2, side/2]^n."""
    half = side / 2.0
    return VPolytope.from_points(list(itertools.product([-half, half], repeat=int(n))))


def simplex(n: int) -> VPolytope:
    """conv{0, e_1, ..., e_n}."""
    n = int(n)
    return VPolytope.from_points(np.vstack([np.zeros(n), np.eye(n)]))


def cross_polytope(n: int) -> VPolytope:
    """conv{±e_i}, the unit l1 ball."""
    n = int(n)
    return VPolytope.from_points(np.vstack([np.eye(n), -np.eye(n)]))


def box2d(l: float) -> VPolytope:
    """Centered box with sides 1/l and l (area 1)."""
    l = float(l)
    if l <= 0:
        raise BodySpecError(f"box2d side parameter must be positive, got {l}")
    hx, hy = 1.0 / (2.0 * l), l / 2.0
    return VPolytope.from_points([[-hx, -hy], [hx, -hy], [hx, hy], [-hx, hy]])


def parallelogram_fhl() -> VPolytope:
    """Centrally symmetric parallelogram of area 1 with 3/5 ratio along (2, 1)."""
    return VPolytope.from_points([[0.0, 0.5], [1.0, 0.5], [0.0, -0.5], [-1.0, -0.5]])


def ngon(k: int, radius: float = 1.0) -> VPolytope:
    """Regular k-gon with circumradius ``radius`` and a vertex on the positive x axis."""
    k = int(k)
    if k < 3:
        raise BodySpecError(f"ngon needs at least 3 vertices, got {k}")
    angles = 2.0 * np.pi * np.arange(k) / k
    return VPolytope.from_points(radius * np.column_stack([np.cos(angles), np.sin(angles)]))


NAMED_BODIES: Dict[str, Callable[..., VPolytope]] = {
    "cube": cube,
    "simplex": simplex,
    "cross-polytope": cross_polytope,
    "box2d": box2d,
    "parallelogram-fhl": parallelogram_fhl,
    "ngon": ngon,
}


def body_from_json(data: dict) -> VPolytope:
    try:
        dim = int(data["dim"])
        vertices = np.asarray(data["vertices"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise BodySpecError(f"malformed body JSON: {exc}") from exc
    if vertices.ndim != 2 or vertices.shape[1] != dim:
        raise BodySpecError(f"vertices do not have dimension {dim}")
    return VPolytope.from_points(vertices)


def load_body(path) -> VPolytope:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise BodySpecError(f"{path}: {exc}") from exc
    return body_from_json(data)


def save_body(body: VPolytope, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(body.to_json(), indent=2) + "\n", encoding="utf-8")
    return path


@dataclass(frozen=True)
class BodySpec:
    """A named body with parameters, a JSON file, or a seeded random body.

    Text forms: ``cube:3``, ``box2d:1.4142135623730951``, ``parallelogram-fhl``,
    ``random:3,20,seed=7``, ``random:2,8,sym,seed=42`` or a path to a JSON file.
    """

    name: str
    params: Tuple[float, ...] = ()
    path: Optional[str] = None
    symmetric: bool = False
    seed: int = 0

    @classmethod
    def parse(cls, text: str) -> "BodySpec":
        text = text.strip()
        if text.endswith(".json") or Path(text).is_file():
            return cls(name="file", path=text)
        name, _, rest = text.partition(":")
        params = []
        symmetric = False
        seed = 0
        for token in filter(None, (t.strip() for t in rest.split(","))):
            if token == "sym":
                symmetric = True
            elif token.startswith("seed="):
                seed = _parse_number(token[5:], text, integer=True)
            else:
                params.append(_parse_number(token, text))
        if name != "random" and name not in NAMED_BODIES:
            raise BodySpecError(
                f"unknown body {name!r}; expected one of {sorted(NAMED_BODIES)} or random"
            )
        return cls(name=name, params=tuple(params), symmetric=symmetric, seed=int(seed))

    @property
    def body_id(self) -> str:
        if self.path is not None:
            return Path(self.path).stem
        args = ",".join(f"{p:g}" for p in self.params)
        if self.name == "random":
            sym = ",sym" if self.symmetric else ""
            return f"random:{args}{sym},seed={self.seed}"
        return f"{self.name}:{args}" if args else self.name

    def resolve(self) -> VPolytope:
        if self.path is not None:
            return load_body(self.path)
        if self.name == "random":
            if len(self.params) != 2:
                raise BodySpecError("random bodies need dimension and point count: random:n,m")
            n, m = (int(p) for p in self.params)
            return gen_random_body(n, m, self.symmetric, self.seed)
        try:
            return NAMED_BODIES[self.name](*self.params)
        except TypeError as exc:
            raise BodySpecError(f"bad parameters for {self.name}: {exc}") from exc


def _parse_number(token: str, text: str, integer: bool = False):
    try:
        return int(token) if integer else float(token)
    except ValueError as exc:
        raise BodySpecError(f"cannot parse {token!r} in body spec {text!r}") from exc


def resolve_body(text: str) -> VPolytope:
    return BodySpec.parse(text).resolve()


def trial_seed(master: int, stream: str, index: int) -> int:
    """Per-trial seed from the master seed, a stream label and the trial counter."""
    seq = np.random.SeedSequence([int(master), zlib.crc32(stream.encode("utf-8")), int(index)])
    return int(seq.generate_state(1)[0])


def gen_random_body(n: int, m: int, symmetric: bool = False, seed: int = 0) -> VPolytope:
    """Hull of m uniform points on S^{n-1} (reflected through 0 when symmetric), normalized."""
    if symmetric and m < 2:
        raise DegenerateInput(f"symmetric bodies need at least 2 generators, got {m}")
    if not symmetric and m < n + 1:
        raise DegenerateInput(f"need at least {n + 1} points in dimension {n}, got {m}")
    last_error = None
    for attempt in range(RANDOM_BODY_RETRIES):
        rng = np.random.default_rng([int(seed), attempt])
        points = rng.standard_normal((m, n))
        points /= np.linalg.norm(points, axis=1, keepdims=True)
        if symmetric:
            points = np.vstack([points, -points])
        try:
            body, _ = normalize(VPolytope.from_points(points))
            return body
        except DegenerateInput as exc:
            logger.debug(f"random body n={n} m={m} seed={seed} attempt {attempt} degenerate: {exc}")
            last_error = exc
    raise DegenerateInput(
        f"no full-dimensional body after {RANDOM_BODY_RETRIES} attempts (n={n}, m={m}, seed={seed})"
    ) from last_error


def random_body_id(n: int, m: int, symmetric: bool, seed: int) -> str:
    return BodySpec(name="random", params=(n, m), symmetric=symmetric, seed=seed).body_id


def default_point_count(n: int) -> int:
    """Generator count for harness bodies: enough points for a well-rounded hull."""
    return max(n + 1, 4 * n + int(math.ceil(2 ** n)))
