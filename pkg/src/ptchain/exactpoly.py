"""Exact polynomial arithmetic over the rationals.

Two polynomial types live here:

* :class:`UniPoly` -- dense univariate polynomial with :class:`fractions.Fraction`
  coefficients (lowest degree first).
* :class:`MultiPoly` -- sparse multivariate polynomial with integer
  coefficients, keyed by exponent tuples.

On top of them sit the root-counting and elimination tools used by the rest of
the package: squarefree parts, Sturm chains, real-root isolation and
Sylvester resultants.  Nothing in this module rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

from .errors import UsageError

Rational = Fraction

__all__ = [
    "Rational",
    "UniPoly",
    "MultiPoly",
    "SturmChain",
    "RealRoot",
    "as_rational",
    "symbols",
    "ring_eval",
    "squarefree_part",
    "sturm_chain",
    "sturm_count",
    "real_roots",
    "resultant",
    "discriminant",
    "bareiss_det",
]


def as_rational(x) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: they are accepted only through explicit inexact
    conversion at the CLI boundary.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise UsageError(f"not a rational number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse {x!r} as an exact rational") from exc
    raise UsageError(f"not an exact rational: {x!r} ({type(x).__name__})")


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial with rational coefficients.

    ``coeffs[i]`` multiplies ``var**i``.  Trailing zeros are stripped so the
    leading coefficient is nonzero unless the polynomial is identically zero.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = [c if isinstance(c, Fraction) else as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = "x") -> "UniPoly":
        p = cls([1], var)
        for r in roots:
            p = p * cls([-as_rational(r), 1], var)
        return p

    @classmethod
    def monomial(cls, degree: int, coeff=1, var: str = "x") -> "UniPoly":
        return cls([0] * degree + [coeff], var)

    # -- basic properties ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]}, var={self.var!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if other.var != self.var and other.degree > 0 and self.degree > 0:
                raise UsageError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        return UniPoly([other], self.var)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UniPoly([1], self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = c / lead
            quot[k - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= f * b
        return UniPoly(quot, self.var), UniPoly(rem[:dq] if dq > 0 else [], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- derived polynomials ------------------------------------------------

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lead = self.lead
        return UniPoly([c / lead for c in self.coeffs], self.var)

    def content(self) -> Fraction:
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        if not self.coeffs:
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = 0
        for c in self.coeffs:
            num = math.gcd(num, c.numerator * (den // c.denominator))
        return Fraction(num, den)

    def primitive(self) -> "UniPoly":
        """Integer-coefficient multiple with unit content; positive scaling only."""
        if not self.coeffs:
            return self
        c = self.content()
        return UniPoly([x / c for x in self.coeffs], self.var)

    def integer_coeffs(self) -> list[int]:
        p = self.primitive()
        return [int(c) for c in p.coeffs]

    def with_var(self, var: str) -> "UniPoly":
        return UniPoly(self.coeffs, var)

    def compose_square(self) -> "UniPoly":
        """Return ``p(x**2)``."""
        out = []
        for c in self.coeffs:
            out.extend([c, Fraction(0)])
        return UniPoly(out[:-1] if out else [], self.var)


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd (zero if both inputs are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, (a % b).primitive()
    return a.monic()


# ---------------------------------------------------------------------------
# Multivariate polynomials
# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse polynomial with integer coefficients in an ordered variable list.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero ints.
    Operands of binary operations must share the same variable tuple.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, int] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise UsageError(f"exponent {e} does not match variables {self.variables}")
            if not isinstance(c, int) or isinstance(c, bool):
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = c.numerator
                else:
                    raise UsageError(f"MultiPoly coefficients must be integers, got {c!r}")
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, c: int, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        return cls._raw(variables, {(0,) * len(variables): int(c)} if c else {})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise UsageError(f"unknown variable {name!r}")
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls._raw(variables, {tuple(e): 1})

    # -- properties ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> int:
        return self.terms.get((0,) * len(self.variables), 0)

    def degree_in(self, var: str) -> int:
        """Degree in ``var``; -1 for the zero polynomial."""
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def free_of(self, var: str) -> bool:
        i = self._index(var)
        return all(e[i] == 0 for e in self.terms)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms))

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UsageError(f"{var!r} is not one of {self.variables}") from None

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == MultiPoly.constant(other, self.variables).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {str(self)!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            mono = "*".join(factors)
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise UsageError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, Fraction) and other.denominator == 1:
            other = other.numerator
        if isinstance(other, int) and not isinstance(other, bool):
            return MultiPoly.constant(other, self.variables)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: int) -> "MultiPoly":
        if not k:
            return MultiPoly._raw(self.variables, {})
        return MultiPoly._raw(self.variables, {e: c * k for e, c in self.terms.items()})

    def shift(self, exponent: tuple, k: int = 1) -> "MultiPoly":
        """Multiply by the monomial ``k * vars**exponent``."""
        if not k:
            return MultiPoly._raw(self.variables, {})
        return MultiPoly._raw(
            self.variables,
            {tuple(a + b for a, b in zip(e, exponent)): c * k for e, c in self.terms.items()},
        )

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not self.terms or not other.terms:
            return MultiPoly._raw(self.variables, {})
        # monomial operands are the common case in the chain recurrence
        if len(other.terms) == 1:
            (e, c), = other.terms.items()
            return self.scale(c) if not any(e) else self.shift(e, c)
        if len(self.terms) == 1:
            return other * self
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly._raw(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "MultiPoly":
        """Divide out the (positive) integer content."""
        g = self.content()
        if g <= 1:
            return self
        return MultiPoly._raw(self.variables, {e: c // g for e, c in self.terms.items()})

    def leading_term(self) -> tuple[tuple, int]:
        """Lexicographically largest term, with variables in declaration order."""
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("MultiPoly division by zero")
        if len(other.terms) == 1:
            (e_d, c_d), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                q, r = divmod(c, c_d)
                d = tuple(a - b for a, b in zip(e, e_d))
                if r or min(d, default=0) < 0:
                    raise ArithmeticError("inexact monomial division")
                out[d] = q
            return MultiPoly._raw(self.variables, out)
        e_d, c_d = other.leading_term()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e_r = max(rem)
            c_r = rem[e_r]
            d = tuple(a - b for a, b in zip(e_r, e_d))
            q, r = divmod(c_r, c_d)
            if r or min(d) < 0:
                raise ArithmeticError("inexact multivariate division")
            quot[d] = q
            for e, c in other.terms.items():
                t = tuple(a + b for a, b in zip(e, d))
                v = rem.get(t, 0) - q * c
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return MultiPoly._raw(self.variables, quot)

    # -- views --------------------------------------------------------------

    def coeffs_in(self, var: str) -> list["MultiPoly"]:
        """Coefficients of ``var**k`` for k = 0..deg, as polynomials free of ``var``."""
        i = self._index(var)
        deg = self.degree_in(var)
        buckets: list[dict] = [dict() for _ in range(deg + 1)]
        for e, c in self.terms.items():
            k = e[i]
            buckets[k][e[:i] + (0,) + e[i + 1:]] = c
        return [MultiPoly._raw(self.variables, b) for b in buckets]

    def to_unipoly(self, var: str, assignment: Mapping[str, object] | None = None) -> UniPoly:
        """Substitute rationals for every variable except ``var``."""
        assignment = dict(assignment or {})
        assignment.pop(var, None)
        return UniPoly(
            [ring_eval(c, assignment, ignore=(var,)) for c in self.coeffs_in(var)], var
        )

    def subs(self, assignment: Mapping[str, int]) -> "MultiPoly":
        """Substitute integers for some variables, keeping the variable tuple."""
        idx = [(self._index(v), int(as_rational(x))) for v, x in assignment.items()]
        out: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, x in idx:
                c *= x ** e2[i]
                e2[i] = 0
            if c:
                t = tuple(e2)
                v = out.get(t, 0) + c
                if v:
                    out[t] = v
                else:
                    del out[t]
        return MultiPoly._raw(self.variables, out)


def symbols(names: str | Sequence[str]) -> tuple[MultiPoly, ...]:
    """``A, B = symbols("A B")`` -- variables over a shared variable tuple."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    names = tuple(names)
    return tuple(MultiPoly.variable(n, names) for n in names)


def ring_eval(p, point: Mapping[str, object], ignore: Iterable[str] = ()):
    """Evaluate ``p`` exactly at ``point``.

    ``point`` maps variable names to rationals.  Every variable of ``p``
    must be covered; variables listed in ``ignore`` are allowed to be missing
    provided ``p`` is free of them.
    """
    if isinstance(p, UniPoly):
        if p.var not in point:
            if p.degree <= 0:
                return p.coeffs[0] if p.coeffs else Fraction(0)
            raise UsageError(f"assignment does not cover variable {p.var!r}")
        return p(_exact(point[p.var]))
    if isinstance(p, (int, Fraction)):
        return Fraction(p)
    if not isinstance(p, MultiPoly):
        raise UsageError(f"cannot evaluate {type(p).__name__}")
    skip = set(ignore)
    values = []
    for v in p.variables:
        if v in point:
            values.append(_exact(point[v]))
        elif v in skip or p.free_of(v):
            values.append(None)
        else:
            raise UsageError(f"assignment does not cover variable {v!r}")
    cache: dict = {}
    total = Fraction(0)
    for e, c in p.terms.items():
        term = Fraction(c)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                pw = cache.get(key)
                if pw is None:
                    pw = cache[key] = values[i] ** k
                term *= pw
        total += term
    return total


def _exact(x):
    if isinstance(x, float) or isinstance(x, complex):
        return x
    return as_rational(x)


# ---------------------------------------------------------------------------
# Squarefree part and Sturm sequences
# ---------------------------------------------------------------------------


# Integer-coefficient kernels.  Polynomials are plain lists of ints, lowest
# degree first, with no trailing zeros.  Every rescaling is by a positive
# factor so that sign sequences (and hence Sturm counts) are preserved.


def _istrip(f: list) -> list:
    while f and f[-1] == 0:
        f.pop()
    return f


def iprimitive(f: list) -> list:
    g = 0
    for c in f:
        g = math.gcd(g, c)
        if g == 1:
            return f
    return [c // g for c in f] if g > 1 else f


def _ideriv(f: list) -> list:
    return [i * c for i, c in enumerate(f)][1:]


def _idivide(f: list, g: list):
    """Pseudo-division ``lc(g)**m * f = q*g + r`` with ``lc(g)**m > 0``.

    Returns ``(q, r)``; both are positive multiples of the true quotient and
    remainder over the rationals.
    """
    r = list(f)
    dg = len(g) - 1
    lc = g[-1]
    n = len(r) - 1
    q = [0] * max(n - dg + 1, 0)
    m = 0
    for k in range(n, dg - 1, -1):
        c = r[k]
        if c:
            r = [x * lc for x in r]
            q = [x * lc for x in q]
            m += 1
            off = k - dg
            q[off] += c
            for j, b in enumerate(g):
                r[off + j] -= c * b
        r.pop()
    if lc < 0 and m % 2:
        r = [-x for x in r]
        q = [-x for x in q]
    return _istrip(q), _istrip(r)


def int_sturm_sequence(f: list) -> list:
    """Sturm sequence of an integer polynomial, each element made primitive."""
    seq = [iprimitive(_istrip(list(f)))]
    d = iprimitive(_ideriv(seq[0]))
    if not d:
        return seq
    seq.append(d)
    while True:
        _, r = _idivide(seq[-2], seq[-1])
        if not r:
            return seq
        seq.append(iprimitive([-x for x in r]))


def int_squarefree(f: list, seq: list | None = None) -> list:
    """Primitive squarefree part (positive lead) of an integer polynomial."""
    seq = seq if seq is not None else int_sturm_sequence(f)
    g = seq[-1]
    f = seq[0]
    if len(g) > 1:
        f, r = _idivide(f, g)
        if r:
            raise ArithmeticError("gcd does not divide polynomial")
        f = iprimitive(f)
    return [-x for x in f] if f[-1] < 0 else f


def int_variations(seq: list, x) -> int:
    """Sign changes of an integer Sturm sequence at ``x`` (rational or +/-inf)."""
    last = 0
    changes = 0
    for f in seq:
        if x == math.inf:
            s = _sign(f[-1])
        elif x == -math.inf:
            s = _sign(f[-1]) * (-1 if (len(f) - 1) % 2 else 1)
        elif x == 0:
            s = _sign(f[0])
        else:
            acc = 0
            for c in reversed(f):
                acc = acc * x + c
            s = _sign(acc)
        if s:
            if last and s != last:
                changes += 1
            last = s
    return changes


def _to_int_coeffs(p: UniPoly) -> list:
    return [int(c) for c in p.primitive().coeffs]


def squarefree_part(p: UniPoly) -> UniPoly:
    """``p / gcd(p, p')`` as a primitive integer polynomial with positive lead."""
    if p.is_zero():
        raise UsageError("squarefree_part of the zero polynomial")
    return UniPoly(int_squarefree(_to_int_coeffs(p)), p.var)


@dataclass(frozen=True)
class SturmChain:
    """Sturm sequence ``p, p', -rem(p, p'), ...`` with positive rescaling per step."""

    sequence: tuple[UniPoly, ...]

    @property
    def squarefree(self) -> bool:
        return self.sequence[-1].degree == 0

    def variations(self, x) -> int:
        """Sign changes at ``x``; ``x`` may be a rational or +/- infinity."""
        return int_variations([list(map(int, q.coeffs)) for q in self.sequence], x)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_chain(p: UniPoly) -> SturmChain:
    if p.is_zero():
        raise UsageError("Sturm chain of the zero polynomial")
    seq = int_sturm_sequence(_to_int_coeffs(p))
    return SturmChain(tuple(UniPoly(f, p.var) for f in seq))


def _bound(x, default):
    if x is None:
        return default
    if isinstance(x, float) and math.isinf(x):
        return x
    return as_rational(x)


def sturm_count(p: UniPoly | SturmChain, lo=None, hi=None) -> int:
    """Number of distinct real roots of a squarefree ``p`` in ``(lo, hi]``.

    ``None`` or ``float('-inf')``/``float('inf')`` select unbounded ends.
    Passing a prebuilt :class:`SturmChain` skips rebuilding it.
    """
    chain = p if isinstance(p, SturmChain) else sturm_chain(p)
    if not chain.squarefree:
        raise UsageError("sturm_count needs a squarefree polynomial; apply squarefree_part first")
    a = _bound(lo, -math.inf)
    b = _bound(hi, math.inf)
    if a >= b:
        return 0
    return chain.variations(a) - chain.variations(b)


def cauchy_bound(p: UniPoly) -> Fraction:
    """Every real root lies strictly inside ``(-bound, bound)``."""
    lead = abs(p.lead)
    m = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    return 1 + m / lead


@dataclass(frozen=True)
class RealRoot:
    """An isolated real root: the only root of ``poly`` in ``(lo, hi]``.

    ``exact`` holds the root when it is rational.
    """

    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None

    @property
    def approx(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def real_roots(p: UniPoly, lo=None, hi=None, tol=Fraction(1, 2**60)) -> list[RealRoot]:
    """Isolate and refine the distinct real roots of ``p`` in ``(lo, hi]``.

    Isolation uses Sturm counts on bisected intervals; refinement uses sign
    bisection.  Rational roots are detected exactly: after clearing
    denominators any rational root ``r`` of a primitive integer polynomial with
    leading coefficient ``L`` satisfies ``L*r in Z``, so once the bracket is
    narrower than ``1/L`` there is at most one candidate to test.
    """
    sf = squarefree_part(p)
    if sf.degree <= 0:
        return []
    chain = sturm_chain(sf)
    bound = cauchy_bound(sf)
    a = max(_bound(lo, -bound), -bound) if lo is not None else -bound
    b = min(_bound(hi, bound), bound) if hi is not None else bound
    if a >= b:
        return []
    tol = as_rational(tol)
    lead = abs(int(sf.lead))
    found = []
    stack = [(a, b, sturm_count(chain, a, b))]
    while stack:
        x, y, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            found.append(_refine(sf, x, y, tol, lead))
            continue
        m = (x + y) / 2
        stack.append((m, y, sturm_count(chain, m, y)))
        stack.append((x, m, sturm_count(chain, x, m)))
    found.sort(key=lambda r: r.lo)
    return found


def _refine(sf: UniPoly, lo: Fraction, hi: Fraction, tol: Fraction, lead: int) -> RealRoot:
    if sf(hi) == 0:
        return RealRoot(hi, hi, hi)
    s_hi = _sign(sf(hi))
    # root lies in the open interval (lo, hi): sf(lo) may be zero only if lo is
    # an endpoint excluded from the bracket, so nudge by sign tests.
    target = min(tol, Fraction(1, 2 * lead))
    while hi - lo > target:
        m = (lo + hi) / 2
        v = _sign(sf(m))
        if v == 0:
            return RealRoot(m, m, m)
        if v == s_hi:
            hi = m
        else:
            lo = m
    k = math.floor(hi * lead)
    if k > lo * lead:
        cand = Fraction(k, lead)
        if sf(cand) == 0:
            return RealRoot(cand, cand, cand)
    while hi - lo > tol:
        m = (lo + hi) / 2
        if _sign(sf(m)) == s_hi:
            hi = m
        else:
            lo = m
    return RealRoot(lo, hi, None)


# ---------------------------------------------------------------------------
# Determinants and resultants
# ---------------------------------------------------------------------------


def bareiss_det(matrix: Sequence[Sequence], exact_div=None, zero=0):
    """Fraction-free determinant (Bareiss) over any ring with exact division.

    ``exact_div(a, b)`` must return ``a / b`` when the division is exact; the
    default uses ``MultiPoly.exact_div`` for polynomials and ``/`` otherwise.
    """
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    if exact_div is None:
        def exact_div(a, b):
            if isinstance(a, MultiPoly):
                return a.exact_div(b)
            if isinstance(a, int) and isinstance(b, int):
                q, r = divmod(a, b)
                if r:
                    raise ArithmeticError("inexact integer division")
                return q
            return a / b
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return zero
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[i][j] * piv - m[i][k] * m[k][j]
                m[i][j] = v if prev is None else exact_div(v, prev)
        prev = piv
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def _sylvester(f: list, g: list, zero):
    """Sylvester matrix from coefficient lists given highest degree first."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g) + [zero] * (size - n - 1 - i))
    return rows


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``var``.

    The result keeps the variable tuple (its ``var`` exponent is zero) and has
    its integer content removed.
    """
    if not isinstance(p, MultiPoly) or not isinstance(q, MultiPoly):
        raise UsageError("resultant expects MultiPoly operands")
    if p.variables != q.variables:
        raise UsageError("resultant operands must share variables")
    dp, dq = p.degree_in(var), q.degree_in(var)
    if dp <= 0 and dq <= 0:
        raise UsageError(f"neither polynomial involves {var!r}")
    zero = MultiPoly.constant(0, p.variables)
    if p.is_zero() or q.is_zero():
        return zero
    fp = list(reversed(p.coeffs_in(var)))
    fq = list(reversed(q.coeffs_in(var)))
    det = bareiss_det(_sylvester(fp, fq, zero), zero=zero)
    return det.primitive()


def discriminant(p: UniPoly) -> Fraction:
    """Discriminant ``(-1)^(n(n-1)/2) res(p, p') / lead(p)``."""
    n = p.degree
    if n < 1:
        raise UsageError("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    f = list(reversed(p.coeffs))
    g = list(reversed(p.derivative().coeffs))
    res = bareiss_det(_sylvester(f, g, Fraction(0)), exact_div=lambda a, b: a / b, zero=Fraction(0))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res / p.lead
