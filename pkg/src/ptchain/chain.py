"""PT-symmetric tridiagonal chain Hamiltonians and their secular polynomials.

Three model families are supported:

``GeneralPT``
    diagonal ``1, 3, ..., 2N-1`` with ``sub[k] = -super[k] = -a_k``.
``Symmetrized``
    the up-down symmetric subset: couplings mirror around the centre
    (``a_j = a_{N-2-j}``) and the diagonal is shifted by ``N`` to
    ``N-1, N-3, ..., 1-N``.  Only ``N // 2`` couplings are free.  They are
    stored outermost first, while reports use the central-first letters
    ``A, B, C, ...`` for the squared couplings (``A`` is the central one).
``GeneralTridiagonal``
    arbitrary rational diagonal, super- and sub-diagonal.

Characteristic polynomials come from the three-term recurrence, run over
exact rationals or over :class:`MultiPoly` coefficients (symbolic squared
couplings) through the same code.
"""

from __future__ import annotations

import enum
import math
import string
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, UsageError
from .exactpoly import MultiPoly, UniPoly, as_rational

__all__ = [
    "Family",
    "ChainSpec",
    "TridiagonalMatrix",
    "SecularForm",
    "coupling_names",
    "build_chain",
    "char_poly",
    "secular_in_s",
    "secular_from_squares",
    "symbolic_secular_coeffs",
    "dense_matrix",
]


class Family(str, enum.Enum):
    GENERAL_PT = "GeneralPT"
    SYMMETRIZED = "Symmetrized"
    GENERAL_TRIDIAGONAL = "GeneralTridiagonal"


def coupling_names(count: int) -> tuple[str, ...]:
    """Central-first names of the squared couplings: ``A, B, C, ...``."""
    if count <= 26:
        return tuple(string.ascii_uppercase[:count])
    return tuple(f"A{j}" for j in range(count))


def _free_count(N: int) -> int:
    return N // 2


def _storage_index(position: int, N: int) -> int:
    """Matrix coupling position (row ``position`` to ``position+1``) -> storage slot."""
    return min(position, N - 2 - position)


def _exact_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: tuple
    super: tuple
    sub: tuple

    def __post_init__(self):
        n = len(self.diag)
        if n < 1 or len(self.super) != n - 1 or len(self.sub) != n - 1:
            raise UsageError(
                f"inconsistent tridiagonal lengths: diag {n}, super {len(self.super)}, sub {len(self.sub)}"
            )

    @classmethod
    def from_lists(cls, diag, super, sub) -> "TridiagonalMatrix":
        return cls(
            tuple(as_rational(x) for x in diag),
            tuple(as_rational(x) for x in super),
            tuple(as_rational(x) for x in sub),
        )

    @property
    def N(self) -> int:
        return len(self.diag)

    @property
    def is_pt(self) -> bool:
        return all(b == -a for a, b in zip(self.super, self.sub))

    def products(self) -> tuple:
        """``sub[k] * super[k]``, the only off-diagonal data the determinant sees."""
        return tuple(a * b for a, b in zip(self.super, self.sub))

    def to_rows(self) -> list[list[Fraction]]:
        n = self.N
        rows = [[Fraction(0)] * n for _ in range(n)]
        for k in range(n):
            rows[k][k] = self.diag[k]
        for k in range(n - 1):
            rows[k][k + 1] = self.super[k]
            rows[k + 1][k] = self.sub[k]
        return rows

    def to_dense(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.to_rows()])


@dataclass(frozen=True)
class ChainSpec:
    """Model family, dimension and couplings of one chain Hamiltonian.

    For ``GeneralPT`` ``couplings`` are ``a_0 .. a_{N-2}``; for ``Symmetrized``
    they are the ``N // 2`` free couplings, outermost (``z = a_0``) first and
    central last.  With ``squared=True`` the entries are the squares of the
    couplings instead; only squares enter the spectrum, so this loses nothing
    except the ability to write the matrix down exactly.
    """

    family: Family
    N: int
    couplings: tuple = ()
    squared: bool = False
    diag: tuple = ()
    super: tuple = ()
    sub: tuple = ()

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if not isinstance(self.N, int) or self.N < 2:
            raise UsageError(f"dimension N must be an integer >= 2, got {self.N!r}")
        conv = lambda xs: tuple(as_rational(x) for x in xs)
        object.__setattr__(self, "couplings", conv(self.couplings))
        object.__setattr__(self, "diag", conv(self.diag))
        object.__setattr__(self, "super", conv(self.super))
        object.__setattr__(self, "sub", conv(self.sub))
        N = self.N
        if family is Family.GENERAL_TRIDIAGONAL:
            if len(self.diag) != N or len(self.super) != N - 1 or len(self.sub) != N - 1:
                raise UsageError(
                    f"GeneralTridiagonal N={N} needs diag of length {N} and "
                    f"super/sub of length {N - 1}"
                )
            if self.couplings or self.squared:
                raise UsageError("GeneralTridiagonal takes diag/super/sub, not couplings")
            return
        if self.diag or self.super or self.sub:
            raise UsageError(f"{family.value} fixes the diagonal; pass couplings only")
        expected = N - 1 if family is Family.GENERAL_PT else _free_count(N)
        if len(self.couplings) != expected:
            raise UsageError(
                f"{family.value} N={N} needs {expected} couplings, got {len(self.couplings)}"
            )
        if self.squared and any(c < 0 for c in self.couplings):
            raise UsageError("squared couplings must be nonnegative")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def symmetrized(cls, N: int, couplings: Sequence, squared: bool = False) -> "ChainSpec":
        """Couplings outermost first (storage order)."""
        return cls(Family.SYMMETRIZED, N, tuple(couplings), squared)

    @classmethod
    def from_squares(cls, N: int, squares: Sequence) -> "ChainSpec":
        """Symmetrized model from central-first squared couplings ``(A, B, ...)``."""
        return cls(Family.SYMMETRIZED, N, tuple(reversed(tuple(squares))), True)

    @classmethod
    def general_pt(cls, couplings: Sequence, squared: bool = False) -> "ChainSpec":
        return cls(Family.GENERAL_PT, len(couplings) + 1, tuple(couplings), squared)

    @classmethod
    def general_tridiagonal(cls, diag: Sequence, super: Sequence, sub: Sequence) -> "ChainSpec":
        return cls(Family.GENERAL_TRIDIAGONAL, len(diag), (), False, tuple(diag), tuple(super), tuple(sub))

    # -- derived data -----------------------------------------------------------

    @property
    def half_dim(self) -> int:
        return self.N // 2

    def diagonal(self) -> tuple:
        N = self.N
        if self.family is Family.GENERAL_PT:
            return tuple(Fraction(2 * k + 1) for k in range(N))
        if self.family is Family.SYMMETRIZED:
            return tuple(Fraction(N - 1 - 2 * k) for k in range(N))
        return self.diag

    def squares(self) -> tuple:
        """Squared couplings in storage order."""
        if self.family is Family.GENERAL_TRIDIAGONAL:
            raise UsageError("GeneralTridiagonal has no PT coupling list")
        return self.couplings if self.squared else tuple(c * c for c in self.couplings)

    def central_first_squares(self) -> tuple:
        """``(A, B, C, ...)`` for the Symmetrized family."""
        if self.family is not Family.SYMMETRIZED:
            raise UsageError("central-first naming applies to the Symmetrized family only")
        return tuple(reversed(self.squares()))

    def position_squares(self) -> tuple:
        """Squared coupling at each matrix position ``0 .. N-2``."""
        sq = self.squares()
        if self.family is Family.GENERAL_PT:
            return sq
        return tuple(sq[_storage_index(j, self.N)] for j in range(self.N - 1))

    def products(self) -> tuple:
        """``sub[k] * super[k]`` per matrix position; ``-a_k**2`` for PT families."""
        if self.family is Family.GENERAL_TRIDIAGONAL:
            return tuple(a * b for a, b in zip(self.super, self.sub))
        return tuple(-x for x in self.position_squares())

    def norm(self) -> Fraction:
        """Sum of squared couplings over all ``N-1`` matrix positions."""
        return sum(self.position_squares(), Fraction(0))

    def with_squares(self, squares_central_first: Sequence) -> "ChainSpec":
        return ChainSpec.from_squares(self.N, squares_central_first)


@dataclass(frozen=True)
class SecularForm:
    """Characteristic polynomial and its reduction to ``s = E**2``.

    ``char_poly_E`` is ``det(H - E)``; ``s_poly`` is monic of degree
    ``s_degree`` (``K`` for ``N = 2K``, ``M`` for ``N = 2M+1``).  For odd
    ``N`` the factor ``E`` is stripped before substituting.
    """

    char_poly_E: UniPoly
    parity: str  # "Even" or "OddTimesE"
    s_poly: UniPoly
    s_degree: int


# ---------------------------------------------------------------------------


def build_chain(spec: ChainSpec) -> TridiagonalMatrix:
    """Exact matrix of ``spec``.

    Squared-coupling specs are only buildable when every square is a perfect
    rational square; use :func:`dense_matrix` for a floating matrix otherwise.
    """
    if spec.family is Family.GENERAL_TRIDIAGONAL:
        return TridiagonalMatrix(spec.diag, spec.super, spec.sub)
    if spec.squared:
        roots = [_exact_sqrt(q) for q in spec.couplings]
        if any(r is None for r in roots):
            raise UsageError("squared couplings are not exact squares; use dense_matrix()")
        values = tuple(roots)
    else:
        values = spec.couplings
    if spec.family is Family.GENERAL_PT:
        sup = values
    else:
        sup = tuple(values[_storage_index(j, spec.N)] for j in range(spec.N - 1))
    return TridiagonalMatrix(spec.diagonal(), sup, tuple(-x for x in sup))


def dense_matrix(obj) -> np.ndarray:
    """Floating matrix for a ChainSpec, TridiagonalMatrix or array-like."""
    if isinstance(obj, TridiagonalMatrix):
        return obj.to_dense()
    if isinstance(obj, ChainSpec):
        if obj.family is Family.GENERAL_TRIDIAGONAL or not obj.squared:
            return build_chain(obj).to_dense()
        N = obj.N
        a = np.sqrt(np.array([float(x) for x in obj.position_squares()]))
        H = np.diag([float(d) for d in obj.diagonal()])
        H[np.arange(N - 1), np.arange(1, N)] = a
        H[np.arange(1, N), np.arange(N - 1)] = -a
        return H
    return np.asarray(obj, dtype=float)


def _charpoly_coeffs(diag: Sequence, products: Sequence, zero, one) -> list:
    """Coefficients (ascending in E) of ``det(T - E)`` via the three-term recurrence.

    D_0 = 1, D_1 = d_1 - E, D_k = (d_k - E) D_{k-1} - p_{k-1} D_{k-2}, where
    ``p_k = sub[k] * super[k]``.  Works for any coefficient ring supporting
    ``+``, ``-`` and ``*`` with the diagonal entries.
    """
    prev2 = [one]
    prev = [zero + diag[0], zero - one]
    for k in range(1, len(diag)):
        d = diag[k]
        p = products[k - 1]
        new = [zero] * (len(prev) + 1)
        for i, c in enumerate(prev):
            if d:
                new[i] = new[i] + c * d
            new[i + 1] = new[i + 1] - c
        if p:
            for i, c in enumerate(prev2):
                new[i] = new[i] - c * p
        prev2, prev = prev, new
    return prev


def char_poly(T: TridiagonalMatrix) -> UniPoly:
    """``det(T - E I)`` as an exact polynomial in ``E``."""
    if T.N == 1:
        return UniPoly([T.diag[0], -1], "E")
    coeffs = _charpoly_coeffs(T.diag, T.products(), Fraction(0), Fraction(1))
    return UniPoly(coeffs, "E")


def _reduce_to_s(coeffs: list, N: int):
    """Split E-coefficients by parity and return monic s-coefficients (ascending)."""
    if N % 2 == 0:
        parity, stray, kept = "Even", coeffs[1::2], coeffs[0::2]
    else:
        parity, stray, kept = "OddTimesE", coeffs[0::2], coeffs[1::2]
    if any(c for c in stray):
        raise ConsistencyError(f"characteristic polynomial of N={N} violates {parity} parity")
    lead = kept[-1]
    if lead == 1:
        return parity, kept
    if lead == -1:
        return parity, [-c for c in kept]
    raise ConsistencyError(f"unexpected leading coefficient {lead!r}")


def _secular_from_products(N: int, diag, products) -> SecularForm:
    coeffs = _charpoly_coeffs(diag, products, Fraction(0), Fraction(1))
    parity, s_coeffs = _reduce_to_s(coeffs, N)
    s_poly = UniPoly(s_coeffs, "s")
    return SecularForm(UniPoly(coeffs, "E"), parity, s_poly, s_poly.degree)


def secular_in_s(spec: ChainSpec) -> SecularForm:
    """Reduce the characteristic polynomial of a Symmetrized chain to ``s = E**2``."""
    if spec.family is not Family.SYMMETRIZED:
        raise UsageError("secular_in_s requires the Symmetrized family")
    return _secular_from_products(spec.N, spec.diagonal(), spec.products())


def secular_from_squares(N: int, squares_central_first: Sequence) -> UniPoly:
    """Monic s-polynomial of the Symmetrized model at central-first squares."""
    return secular_in_s(ChainSpec.from_squares(N, squares_central_first)).s_poly


@lru_cache(maxsize=None)
def _symbolic_coeffs(N: int) -> tuple:
    h = _free_count(N)
    names = coupling_names(h)
    zero = MultiPoly.constant(0, names)
    one = MultiPoly.constant(1, names)
    # central-first variable index for each matrix position
    var = [MultiPoly.variable(names[h - 1 - _storage_index(j, N)], names) for j in range(N - 1)]
    diag = [N - 1 - 2 * k for k in range(N)]
    coeffs = _charpoly_coeffs(diag, [-v for v in var], zero, one)
    _, s_coeffs = _reduce_to_s(coeffs, N)
    return tuple(reversed(s_coeffs[:-1]))


def symbolic_secular_coeffs(N: int) -> list[MultiPoly]:
    """``[P_{d-1}, ..., P_0]`` of the monic secular polynomial, symbolic in ``A, B, ...``.

    Cost grows roughly sixfold per four extra dimensions (about 8e4 terms
    at N=24), so large-N callers should evaluate numerically instead.
    """
    if not isinstance(N, int) or N < 2:
        raise UsageError(f"N must be an integer >= 2, got {N!r}")
    return list(_symbolic_coeffs(N))
