"""Numeric eigenpairs, biorthogonal bases and quasi-Hermitian metrics.

All matrices are real, so left eigenvectors are simply the eigenvectors of
the transpose; complex conjugation never enters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, TridiagonalMatrix, dense_matrix
from .domain import MembershipVerdict, Verdict, classify_matrix, classify_point
from .errors import ConvergenceError, NotDiagonalizableError, UsageError

__all__ = [
    "BiorthogonalBasis",
    "MetricResult",
    "eigen_numeric",
    "biorthogonal_decomposition",
    "build_metric",
    "MAX_DIMENSION",
]

MAX_DIMENSION = 64
MIN_OVERLAP = 1e-12
NUMERIC_IMAG_TOL = 1e-8


def _sorted(vals: np.ndarray, vecs: np.ndarray | None = None):
    order = np.lexsort((vals.imag, vals.real))
    return vals[order], (None if vecs is None else vecs[:, order])


def eigen_numeric(T, vectors: bool = False):
    """All eigenvalues of a real matrix, sorted by real then imaginary part.

    ``T`` may be a ChainSpec, a TridiagonalMatrix or a dense array.  LAPACK's
    Hessenberg-QR driver does the work.  With ``vectors=True`` also return the
    right eigenvectors as columns.
    """
    H = dense_matrix(T)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {H.shape}")
    if H.shape[0] > MAX_DIMENSION:
        raise UsageError(f"eigen_numeric is limited to N <= {MAX_DIMENSION}")
    try:
        vals, vecs = np.linalg.eig(H)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            "eigenvalue iteration did not converge",
            {"N": H.shape[0], "norm": float(np.abs(H).max()), "error": str(exc)},
        ) from exc
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("non-finite eigenvalues", {"N": H.shape[0]})
    vals = vals.astype(complex)
    vals, vecs = _sorted(vals, vecs.astype(complex))
    return (vals, vecs) if vectors else vals


@dataclass(frozen=True)
class BiorthogonalBasis:
    """Right eigenvectors ``|n>`` and left eigenvectors ``|n>>`` with ``<<m|n> = delta``.

    ``condition`` holds ``|<<n|n>|`` for unit-normalised vectors before the
    rescaling; values near zero mean the point is close to an exceptional
    point.
    """

    matrix: np.ndarray
    energies: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition: np.ndarray

    def overlaps(self) -> np.ndarray:
        return self.left.T @ self.right


def _verdict_for(T) -> MembershipVerdict | None:
    if isinstance(T, ChainSpec):
        return classify_point(T)
    if isinstance(T, TridiagonalMatrix):
        return classify_matrix(T)
    return None


def biorthogonal_decomposition(T) -> BiorthogonalBasis:
    """Biorthonormal eigenbasis of a matrix with real, simple spectrum.

    Exact inputs (ChainSpec, TridiagonalMatrix) are screened by the exact
    classifier first; dense arrays by their numeric spectrum.  Degenerate or
    complex points are refused; there is no regularised fallback.
    """
    verdict = _verdict_for(T)
    if verdict is not None and verdict.verdict is not Verdict.REAL_SIMPLE:
        raise NotDiagonalizableError(
            f"spectrum is {verdict.verdict.value}; a biorthogonal basis needs a real simple spectrum",
            verdict,
        )
    H = dense_matrix(T)
    e_r, R = eigen_numeric(H, vectors=True)
    e_l, L = eigen_numeric(H.T, vectors=True)
    if verdict is None:
        scale = max(1.0, float(np.abs(H).max()))
        if np.abs(e_r.imag).max() > NUMERIC_IMAG_TOL * scale:
            raise NotDiagonalizableError("numeric spectrum is not real")
    energies = e_r.real.copy()
    R = R.real.copy()
    L = L.real.copy()
    R /= np.linalg.norm(R, axis=0)
    L /= np.linalg.norm(L, axis=0)
    overlap = np.einsum("ij,ij->j", L, R)
    condition = np.abs(overlap)
    if condition.min() < MIN_OVERLAP:
        raise NotDiagonalizableError(
            f"near-defective: smallest left/right overlap {condition.min():.3e}", verdict
        )
    L = L / overlap
    return BiorthogonalBasis(H, energies, R, L, condition)


@dataclass(frozen=True)
class MetricResult:
    """Metric ``theta = sum_n s_n |n>><<n|`` and its quality figures.

    ``residual`` is ``max |H^T theta - theta H|``.  ``weights_convention``
    records whether the (arbitrary) weights were the unit default.
    """

    theta: np.ndarray
    weights: np.ndarray
    residual: float
    min_eigenvalue: float
    weights_convention: str

    @property
    def theta_norm(self) -> float:
        return float(np.abs(self.theta).max())

    @property
    def symmetric(self) -> bool:
        return bool(np.array_equal(self.theta, self.theta.T))


def build_metric(basis: BiorthogonalBasis, weights=None) -> MetricResult:
    """Assemble the metric from the left eigenvectors and positive weights."""
    n = basis.left.shape[1]
    if weights is None:
        w = np.ones(n)
        convention = "unit-default"
    else:
        w = np.asarray(weights, dtype=float)
        convention = "user"
        if w.shape != (n,):
            raise UsageError(f"need {n} weights, got {w.shape}")
    if not np.all(w > 0):
        raise UsageError("metric weights must all be positive")
    theta = np.zeros((n, n))
    for k in range(n):
        l = basis.left[:, k]
        # (l_i * l_j) * s is symmetric in i, j bit for bit
        theta += np.outer(l, l) * w[k]
    H = basis.matrix
    residual = float(np.abs(H.T @ theta - theta @ H).max())
    min_eig = float(np.linalg.eigvalsh(theta).min())
    return MetricResult(theta, w, residual, min_eig, convention)
