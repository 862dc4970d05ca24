"""Exact and numeric tools for PT-symmetric tridiagonal chain Hamiltonians.

The subpackages split along the workflow: ``exactpoly`` (rational and
polynomial arithmetic), ``chain`` (matrices and secular polynomials),
``domain`` (reality domain), ``eep`` (extreme exceptional points),
``metric`` (biorthogonal bases and metric operators) and ``cli``.
"""

__version__ = "0.1.0"

from .chain import ChainSpec, Family, build_chain, char_poly, secular_in_s, symbolic_secular_coeffs
from .domain import Verdict, classify_point, closed_form_check, trace_boundary
from .eep import circumscribed_bound_check, eep_closed_form, eliminate_eep_system, verify_eep
from .errors import ConsistencyError, ConvergenceError, NotDiagonalizableError, UsageError
from .metric import biorthogonal_decomposition, build_metric, eigen_numeric

__all__ = [
    "__version__",
    "ChainSpec",
    "Family",
    "build_chain",
    "char_poly",
    "secular_in_s",
    "symbolic_secular_coeffs",
    "Verdict",
    "classify_point",
    "closed_form_check",
    "trace_boundary",
    "eep_closed_form",
    "verify_eep",
    "circumscribed_bound_check",
    "eliminate_eep_system",
    "biorthogonal_decomposition",
    "build_metric",
    "eigen_numeric",
    "UsageError",
    "ConsistencyError",
    "ConvergenceError",
    "NotDiagonalizableError",
]
