"""Uniform zero-count bounds for lacunary polynomials restricted to plane curves."""

from .bautin import assemble_matrix, matrix_stats
from .bounds import BoundReport, NormalizedCurve, normalize_curve, zero_bound_report
from .errors import LacunaryError
from .kernels import BACKEND
from .lacunarity import LacunarityDiagram, align_diagram, geometric_diagram, resolve_condition
from .poly import ExactComplex, ParamCurve, UniPoly
from .rational import rational_bautin_rows, rational_bound_report
from .verifier import multiplicity_witness, roots_in_disc, verify_run

__all__ = [
    "BACKEND", "BoundReport", "ExactComplex", "LacunarityDiagram", "LacunaryError",
    "NormalizedCurve", "ParamCurve", "UniPoly", "align_diagram", "assemble_matrix",
    "geometric_diagram", "matrix_stats", "multiplicity_witness", "normalize_curve",
    "rational_bautin_rows", "rational_bound_report", "resolve_condition",
    "roots_in_disc", "verify_run", "zero_bound_report",
]
