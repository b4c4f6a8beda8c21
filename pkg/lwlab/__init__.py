"""
lwlab - Loomis-Whitney type inequalities on polytopes

Exact sections, projections and isotropic positions of polytopes, sampled centroid
and polar projection bodies, searches over orthonormal bases for reverse dual
Loomis-Whitney constants, and a harness that checks each inequality numerically.
"""

__version__ = "0.1.0"

from .harness import SuiteConfig, run_suite
from .lambda_search import lambda_ratio, lambda_tilde, lambda_tilde_planar
from .polytope import Subspace, VPolytope, section, volume
from .report import InequalityReport, emit_report

__all__ = [
    "InequalityReport",
    "Subspace",
    "SuiteConfig",
    "VPolytope",
    "emit_report",
    "lambda_ratio",
    "lambda_tilde",
    "lambda_tilde_planar",
    "run_suite",
    "section",
    "volume",
]
