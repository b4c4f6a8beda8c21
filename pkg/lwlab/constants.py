"""Constants module for lwlab.

Centralizes tolerances, sampling resolutions, search defaults and environment names.
"""

import math

# Exact pipelines (hulls, volumes, moments)
REL_TOL = 1e-9
COPLANAR_TOL = 1e-10
ORTHO_TOL = 1e-12
SINGULAR_DET = 1e-12
ILL_CONDITIONED = 1e12
EIGEN_TIE_GAP = 1e-10
ISOTROPIC_RESIDUAL = 1e-8
COVER_TOL = 1e-12

# Marginals and centroid bodies
ZP_NODES = 32
MARGINAL_MERGE_TOL = 1e-12

# Sampled bodies: default directions per intrinsic dimension, doubling cap and stability
RADIAL_SAMPLES = {2: 512, 3: 2048}
SUPPORT_SAMPLES = {2: 512, 3: 2048}
SAMPLE_CAP_FACTOR = 16
ZP_STABILITY = {2: 1e-3, 3: 1e-3}
PISTAR_STABILITY = {2: 1e-3, 3: 1e-3}

# Frame search
DEFAULT_RESTARTS = 32
CROSS_POLYTOPE_RESTARTS = 16
SEARCH_FTOL = 1e-10
SEARCH_INITIAL_STEP = 0.25
SEARCH_MIN_STEP = 1e-7
SEARCH_MAX_SWEEPS = 200

# Planar scan
PLANAR_SCAN_RESOLUTION = (math.pi / 2) * 1e-4
PLANAR_REFINE_TOL = 1e-10

# Random bodies
RANDOM_BODY_RETRIES = 8

# Inequality constants
HENSLEY_LOWER = 1.0 / (2.0 * math.sqrt(3.0))
PROP41_CONSTANT = 12.0

# Reports
DRIFT_THRESHOLD = 0.05
FLOAT_FORMAT = ".17g"
CSV_COLUMNS = [
    "check_id",
    "body_id",
    "dim",
    "lhs",
    "rhs",
    "constant",
    "margin",
    "uncertainty",
    "status",
    "witness",
]

# Environment and defaults
ENV_SEED = "LWLAB_SEED"
ENV_THREADS = "LWLAB_THREADS"
DEFAULT_SEED = 42
DEFAULT_THREADS = 1
DEFAULT_TRIALS = 20
DEFAULT_DIMS = (2, 3, 4)
SUPPORTED_DIMS = (2, 3, 4, 5)
MAX_DIM = 6
DEFAULT_LOG_DIR = "artifacts/logs"

# Suites
HENSLEY_DIRECTIONS = 20
PROP41_TRIALS = 200
BRUNN_GRID = 17
BRUNN_TOL = 1e-6
BALL_FLOOR_TOL = 1e-6
GOLDEN_EXACT_TOL = 1e-9
PLANAR_GOLDEN_TOL = 1e-6
DIAGONAL_ANGLE_TOL = 1e-4
SAMPLED_GOLDEN_REL_TOL = 1e-2
POLYGON_L_TOL = 1e-3
