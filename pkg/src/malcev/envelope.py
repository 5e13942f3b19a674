"""Truncated universal enveloping algebras of graded nilpotent Lie algebras.

Series are stored in the PBW basis: non-decreasing tuples of Lie basis
indices. Products are normalised by straightening ``xy -> yx + [x,y]``.
Coefficients are either exact Fractions or Python complex numbers; the two
modes share one code path.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import factorial
from typing import Iterator, Mapping

import numpy as np

from .exactla import format_rational
from .free_lie import GradedNilpotentLie

__all__ = [
    "Envelope",
    "TruncatedSeries",
    "CoproductValue",
    "multiply",
    "exp",
    "log",
    "coproduct",
    "is_grouplike",
]

Monomial = tuple[int, ...]
RATIONAL = "rational"
COMPLEX = "complex"


def _acc(target: dict, key, value) -> None:
    s = target.get(key, 0) + value
    if s:
        target[key] = s
    else:
        target.pop(key, None)


class Envelope:
    """The degree-<=N truncation of U(g) for a graded nilpotent Lie algebra g."""

    def __init__(self, lie: GradedNilpotentLie, truncation: int | None = None):
        self.lie = lie
        self.truncation = lie.truncation if truncation is None else truncation
        if self.truncation < 0:
            raise ValueError("truncation must be nonnegative")
        self._straighten_cache: dict[Monomial, dict[Monomial, Fraction]] = {}

    def __repr__(self):
        return f"Envelope({self.lie!r}, N={self.truncation})"

    def degree(self, mono: Monomial) -> int:
        return sum(self.lie.degrees[i] for i in mono)

    @cached_property
    def basis(self) -> tuple[Monomial, ...]:
        """All PBW monomials of degree <= N, ordered by (degree, monomial)."""
        out: list[Monomial] = [()]
        degs = self.lie.degrees
        N = self.truncation

        def extend(prefix: Monomial, start: int, deg: int):
            for i in range(start, self.lie.dim):
                d = deg + degs[i]
                if d > N:
                    # basis is sorted by degree, later letters are no lighter
                    break
                mono = prefix + (i,)
                out.append(mono)
                extend(mono, i, d)

        extend((), 0, 0)
        return tuple(sorted(out, key=lambda m: (self.degree(m), m)))

    @cached_property
    def index(self) -> dict[Monomial, int]:
        return {m: k for k, m in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dims_by_degree(self) -> tuple[int, ...]:
        counts = [0] * (self.truncation + 1)
        for m in self.basis:
            counts[self.degree(m)] += 1
        return tuple(counts)

    # -- straightening ----------------------------------------------------

    def straighten(self, word: Monomial) -> dict[Monomial, Fraction]:
        """PBW normal form of an arbitrary word in the Lie basis letters."""
        if self.degree(word) > self.truncation:
            return {}
        hit = self._straighten_cache.get(word)
        if hit is not None:
            return hit
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                break
        else:
            out = {word: Fraction(1)}
            self._straighten_cache[word] = out
            return out
        a, b = word[i], word[i + 1]
        out: dict[Monomial, Fraction] = {}
        for m, c in self.straighten(word[:i] + (b, a) + word[i + 2 :]).items():
            _acc(out, m, c)
        for k, c in self.lie.bracket_basis(a, b).items():
            for m, e in self.straighten(word[:i] + (k,) + word[i + 2 :]).items():
                _acc(out, m, c * e)
        self._straighten_cache[word] = out
        return out

    # -- constructors -----------------------------------------------------

    def one(self, field: str = RATIONAL) -> "TruncatedSeries":
        return TruncatedSeries(self, {(): _unit(field)}, field)

    def zero(self, field: str = RATIONAL) -> "TruncatedSeries":
        return TruncatedSeries(self, {}, field)

    def from_lie(self, vec: Mapping[int, object], field: str = RATIONAL) -> "TruncatedSeries":
        """A Lie algebra element as a (primitive) series."""
        return TruncatedSeries(self, {(i,): c for i, c in vec.items()}, field)

    def from_vector(self, arr, field: str = COMPLEX) -> "TruncatedSeries":
        conv = complex if field == COMPLEX else Fraction
        return TruncatedSeries(
            self, {m: conv(arr[k]) for k, m in enumerate(self.basis) if arr[k] != 0}, field
        )

    # -- dense operators used by the transport integrator -------------------

    def right_multiplication_matrix(self, vec: Mapping[int, object]) -> np.ndarray:
        """Matrix R with ``to_vector(s * x) == to_vector(s) @ R`` for Lie element x."""
        R = np.zeros((self.dim, self.dim), dtype=complex)
        for k, m in enumerate(self.basis):
            for i, c in vec.items():
                for mono, e in self.straighten(m + (i,)).items():
                    R[k, self.index[mono]] += complex(c) * float(e)
        return R


def _unit(field: str):
    return Fraction(1) if field == RATIONAL else complex(1.0)


def _coerce(value, field: str):
    if field == RATIONAL:
        if isinstance(value, complex) or isinstance(value, float):
            raise TypeError("floating coefficient in a rational series")
        return Fraction(value)
    return complex(value)


class TruncatedSeries:
    """Immutable element of a truncated enveloping algebra."""

    __slots__ = ("algebra", "terms", "field")

    def __init__(self, algebra: Envelope, terms: Mapping[Monomial, object], field: str = RATIONAL):
        if field not in (RATIONAL, COMPLEX):
            raise ValueError(f"unknown coefficient field {field!r}")
        self.algebra = algebra
        self.field = field
        out = {}
        for m, c in terms.items():
            m = tuple(m)
            if list(m) != sorted(m):
                raise ValueError(f"{m} is not a PBW monomial")
            if algebra.degree(m) > algebra.truncation:
                continue
            c = _coerce(c, field)
            if c:
                out[m] = c
        self.terms = out

    # -- basic accessors --------------------------------------------------

    @property
    def constant(self):
        return self.terms.get((), 0)

    def coefficient(self, mono: Monomial):
        return self.terms.get(tuple(mono), 0)

    def to_vector(self) -> np.ndarray:
        out = np.zeros(self.algebra.dim, dtype=complex)
        for m, c in self.terms.items():
            out[self.algebra.index[m]] = complex(c)
        return out

    def as_complex(self) -> "TruncatedSeries":
        return TruncatedSeries(self.algebra, {m: complex(c) for m, c in self.terms.items()}, COMPLEX)

    def homogeneous_part(self, degree: int) -> "TruncatedSeries":
        deg = self.algebra.degree
        return TruncatedSeries(
            self.algebra, {m: c for m, c in self.terms.items() if deg(m) == degree}, self.field
        )

    def lie_part(self) -> dict[int, object]:
        """Coefficients of the length-one PBW monomials."""
        return {m[0]: c for m, c in self.terms.items() if len(m) == 1}

    def max_abs(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> str:
        if self.algebra is not other.algebra:
            raise ValueError("series live in different enveloping algebras")
        return COMPLEX if COMPLEX in (self.field, other.field) else RATIONAL

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + self.algebra.one(self.field) * other
        field = self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return TruncatedSeries(self.algebra, out, field)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.algebra, {m: -c for m, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        field = COMPLEX if isinstance(other, (complex, float)) else self.field
        return TruncatedSeries(self.algebra, {m: c * other for m, c in self.terms.items()}, field)

    def __rmul__(self, scalar):
        return self * scalar

    def __truediv__(self, scalar):
        if self.field == RATIONAL and not isinstance(scalar, (complex, float)):
            return self * (1 / Fraction(scalar))
        return self * (1 / scalar)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("use inverse() for negative powers")
        out = self.algebra.one(self.field)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda t: t[0])))

    def distance(self, other: "TruncatedSeries") -> float:
        """Coefficient-wise sup distance."""
        return (self - other).max_abs()

    def inverse(self) -> "TruncatedSeries":
        """Geometric series inverse; constant term must be nonzero."""
        c0 = self.constant
        if not c0:
            raise ValueError("series with zero constant term is not invertible")
        unit = self / c0
        nil = self.algebra.one(self.field) - unit
        out = self.algebra.one(self.field)
        power = self.algebra.one(self.field)
        for _ in range(self.algebra.truncation):
            power = power * nil
            out = out + power
        return out / c0

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        deg = self.algebra.degree
        return sorted(self.terms.items(), key=lambda t: (deg(t[0]), t[0]))

    def format(self, digits: int = 12) -> list[str]:
        labels = self.algebra.lie.labels
        lines = []
        for m, c in self.sorted_terms():
            word = "*".join(labels[i] for i in m) or "1"
            lines.append(f"{word}: {_format_number(c, digits)}")
        return lines

    def __repr__(self):
        if not self.terms:
            return "0"
        labels = self.algebra.lie.labels
        parts = []
        for m, c in self.sorted_terms():
            word = "*".join(labels[i] for i in m) or "1"
            parts.append(f"({_format_number(c, 6)})*{word}")
        return " + ".join(parts)


def _format_number(c, digits: int) -> str:
    if isinstance(c, Fraction):
        return format_rational(c)
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:.{digits}g}"
    return f"{c.real:.{digits}g}{c.imag:+.{digits}g}j"


def multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    field = a._check(b)
    alg = a.algebra
    N = alg.truncation
    out: dict[Monomial, object] = {}
    for m1, c1 in a.terms.items():
        d1 = alg.degree(m1)
        for m2, c2 in b.terms.items():
            if d1 + alg.degree(m2) > N:
                continue
            for m, e in alg.straighten(m1 + m2).items():
                _acc(out, m, c1 * c2 * e)
    return TruncatedSeries(alg, out, field)


def exp(v: TruncatedSeries) -> TruncatedSeries:
    if v.constant:
        raise ValueError("exp needs a series with zero constant term")
    alg = v.algebra
    out = alg.one(v.field)
    power = alg.one(v.field)
    for k in range(1, alg.truncation + 1):
        power = power * v
        if not power.terms:
            break
        out = out + power / factorial(k)
    return out


def log(g: TruncatedSeries) -> TruncatedSeries:
    """Logarithm of a series with constant term exactly 1 (rational) or
    numerically 1 (complex, within 1e-9)."""
    c0 = g.constant
    if g.field == RATIONAL:
        if c0 != 1:
            raise ValueError("log needs constant term 1")
    elif abs(complex(c0) - 1) > 1e-9:
        raise ValueError(f"log needs constant term 1, got {c0}")
    alg = g.algebra
    nil = g - alg.one(g.field) * c0
    out = alg.zero(g.field)
    power = alg.one(g.field)
    for k in range(1, alg.truncation + 1):
        power = power * nil
        if not power.terms:
            break
        term = power / k
        out = out + term if k % 2 else out - term
    return out


class CoproductValue:
    """Element of the truncated tensor square, keyed by monomial pairs."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Envelope, terms: Mapping[tuple[Monomial, Monomial], object]):
        self.algebra = algebra
        self.terms = {k: c for k, c in terms.items() if c}

    @classmethod
    def tensor(cls, a: TruncatedSeries, b: TruncatedSeries) -> "CoproductValue":
        alg = a.algebra
        out = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                if alg.degree(m1) + alg.degree(m2) <= alg.truncation:
                    out[m1, m2] = c1 * c2
        return cls(alg, out)

    def __sub__(self, other: "CoproductValue") -> "CoproductValue":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, -c)
        return CoproductValue(self.algebra, out)

    def __mul__(self, other: "CoproductValue") -> "CoproductValue":
        alg = self.algebra
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                if alg.degree(a1 + a2 + b1 + b2) > alg.truncation:
                    continue
                left = alg.straighten(a1 + a2)
                right = alg.straighten(b1 + b2)
                for m, e in left.items():
                    for n, f in right.items():
                        _acc(out, (m, n), c1 * c2 * e * f)
        return CoproductValue(alg, out)

    def __eq__(self, other):
        return isinstance(other, CoproductValue) and self.terms == other.terms

    def max_abs(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)


def _splits(mono: Monomial) -> Iterator[tuple[Monomial, Monomial]]:
    n = len(mono)
    for k in range(n + 1):
        for left in combinations(range(n), k):
            chosen = set(left)
            yield (
                tuple(mono[i] for i in left),
                tuple(mono[i] for i in range(n) if i not in chosen),
            )


def coproduct(a: TruncatedSeries) -> CoproductValue:
    """Coproduct with every Lie basis letter primitive.

    Subsequences of a non-decreasing word are non-decreasing, so the
    expansion of the product of ``x (x) 1 + 1 (x) x`` needs no straightening.
    """
    out: dict = {}
    for m, c in a.terms.items():
        for left, right in _splits(m):
            _acc(out, (left, right), c)
    return CoproductValue(a.algebra, out)


def is_grouplike(g: TruncatedSeries, tol: float) -> bool:
    if abs(complex(g.constant) - 1) > tol:
        return False
    diff = coproduct(g) - CoproductValue.tensor(g, g)
    return diff.max_abs() <= tol
