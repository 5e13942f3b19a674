"""Reduced bar constructions on finite connected commutative DGA models.

A bar word ``m[a1|...|ar]n`` is stored as the key ``(m, (a1, ..., ar), n)``
of basis labels. Because the models are connected (degree zero is spanned
by the unit), every interior letter has positive degree and the quotient
relations involving degree-zero letters are vacuous.

Sign conventions: ``J v = (-1)^deg(v) v`` and the end-term sign of ``d_C``
is ``(-1)^(r+1)`` with r the word length; the suite checks ``d o d = 0``
against these choices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Mapping, Sequence

from .exactla import CoordinateSolver, EchelonBasis, RatMatrix, format_rational, kernel_basis, quotient_basis, rational
from .free_lie import GradedNilpotentLie
from .groups import FiniteGroup

__all__ = [
    "DGAModel",
    "ModelError",
    "CoefficientCoalgebra",
    "BarModule",
    "ground_module",
    "coefficient_module",
    "regular_module",
    "BarComplex",
    "BarElement",
    "H0Result",
    "BarFiltrationReport",
    "CoLieData",
    "validate",
    "bar_differential",
    "shuffle_product",
    "h0",
    "cohomology_dims",
    "em_e1_dims",
    "coproduct_h0",
    "indecomposables_and_cobracket",
    "random_bar_element",
]

Vec = dict  # label -> Fraction


def _acc(target: dict, key, value) -> None:
    s = target.get(key, 0) + value
    if s:
        target[key] = s
    else:
        target.pop(key, None)


class ModelError(ValueError):
    """Raised when a DGA model or coefficient datum violates the axioms."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems) or "invalid model")


class DGAModel:
    """Finite-dimensional connected commutative DGA over Q.

    ``product`` needs one of the two orders for each pair of non-unit basis
    elements; missing pairs multiply to zero and the other order follows
    from graded commutativity.
    """

    def __init__(
        self,
        basis: Sequence[tuple[str, int]],
        unit: str,
        differential: Mapping[str, Mapping[str, object]] | None = None,
        product: Mapping[tuple[str, str], Mapping[str, object]] | None = None,
        name: str = "",
    ):
        self.basis = tuple((str(l), int(d)) for l, d in basis)
        self.labels = tuple(l for l, _ in self.basis)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")
        self.degree = {l: d for l, d in self.basis}
        self.unit = unit
        self.name = name
        self._d = {
            l: {k: rational(c) for k, c in vec.items() if rational(c)}
            for l, vec in (differential or {}).items()
        }
        self._prod = {
            (a, b): {k: rational(c) for k, c in vec.items() if rational(c)}
            for (a, b), vec in (product or {}).items()
        }

    def __repr__(self):
        return f"DGAModel({self.name or self.labels})"

    @cached_property
    def positive(self) -> tuple[str, ...]:
        return tuple(l for l, d in self.basis if d > 0)

    def in_degree(self, k: int) -> list[str]:
        return [l for l, d in self.basis if d == k]

    @cached_property
    def top_degree(self) -> int:
        return max(d for _, d in self.basis)

    def d(self, label: str) -> Vec:
        return self._d.get(label, {})

    def mul(self, a: str, b: str) -> Vec:
        if a == self.unit:
            return {b: Fraction(1)}
        if b == self.unit:
            return {a: Fraction(1)}
        if (a, b) in self._prod:
            return self._prod[a, b]
        if (b, a) in self._prod:
            sign = -1 if self.degree[a] * self.degree[b] % 2 else 1
            return {k: sign * c for k, c in self._prod[b, a].items()}
        return {}

    def d_vec(self, vec: Mapping[str, Fraction]) -> Vec:
        out: Vec = {}
        for l, c in vec.items():
            for k, e in self.d(l).items():
                _acc(out, k, c * e)
        return out

    def mul_vec(self, u: Mapping[str, Fraction], v: Mapping[str, Fraction]) -> Vec:
        out: Vec = {}
        for a, c in u.items():
            for b, e in v.items():
                for k, f in self.mul(a, b).items():
                    _acc(out, k, c * e * f)
        return out

    def validate(self) -> list[str]:
        """All axiom violations (empty list means the model is valid)."""
        problems = []
        labels = set(self.labels)
        if self.unit not in labels:
            problems.append(f"unit {self.unit!r} is not a basis element")
            return problems
        if self.degree[self.unit] != 0:
            problems.append("unit must have degree 0")
        if any(d < 0 for _, d in self.basis):
            problems.append("negative degrees are not allowed")
        deg0 = self.in_degree(0)
        if deg0 != [self.unit]:
            problems.append(f"not connected: degree-0 part is spanned by {deg0}")
        for (a, b), vec in self._prod.items():
            for x in (a, b):
                if x not in labels:
                    problems.append(f"product mentions unknown label {x!r}")
            if (b, a) in self._prod and a != b:
                sign = -1 if self.degree.get(a, 0) * self.degree.get(b, 0) % 2 else 1
                if self._prod[b, a] != {k: sign * c for k, c in vec.items()}:
                    problems.append(f"graded commutativity fails on ({a},{b})")
        for l, vec in self._d.items():
            if l not in labels:
                problems.append(f"differential of unknown label {l!r}")
                continue
            for k in vec:
                if k not in labels:
                    problems.append(f"d({l}) mentions unknown label {k!r}")
                elif self.degree[k] != self.degree[l] + 1:
                    problems.append(f"d({l}) has a term {k!r} not in degree {self.degree[l] + 1}")
        for (a, b), vec in self._prod.items():
            for k in vec:
                if k in labels and a in labels and b in labels and self.degree[k] != self.degree[a] + self.degree[b]:
                    problems.append(f"{a}*{b} has a term {k!r} in the wrong degree")
        if problems:
            return problems
        for l in self.labels:
            if self.d_vec(self.d(l)):
                problems.append(f"d^2({l}) != 0")
        if self.d(self.unit):
            problems.append("d(unit) != 0")
        for a in self.labels:
            for b in self.labels:
                if self.mul(a, b) != _signed(self.mul(b, a), self.degree[a] * self.degree[b]):
                    problems.append(f"graded commutativity fails on ({a},{b})")
                lhs = self.d_vec(self.mul(a, b))
                rhs = self.mul_vec(self.d(a), {b: 1})
                sign = -1 if self.degree[a] % 2 else 1
                for k, c in self.mul_vec({a: 1}, self.d(b)).items():
                    _acc(rhs, k, sign * c)
                if lhs != rhs:
                    problems.append(f"Leibniz rule fails on ({a},{b})")
        for a, b, c in product(self.positive, repeat=3):
            if self.degree[a] + self.degree[b] + self.degree[c] > self.top_degree:
                continue
            if self.mul_vec(self.mul(a, b), {c: 1}) != self.mul_vec({a: 1}, self.mul(b, c)):
                problems.append(f"associativity fails on ({a},{b},{c})")
        return problems

    def require_valid(self) -> "DGAModel":
        problems = self.validate()
        if problems:
            raise ModelError(problems)
        return self


def _signed(vec: Mapping, exponent: int) -> dict:
    if exponent % 2 == 0:
        return dict(vec)
    return {k: -c for k, c in vec.items()}


def validate(model: DGAModel) -> dict:
    problems = model.validate()
    return {"valid": not problems, "violations": problems}


class CoefficientCoalgebra:
    """Functions on a finite group S together with an S action on a model.

    ``action[g]`` is the left action of g on the model's basis; the coaction
    ``A -> O(S) (x) A`` is ``w -> sum_s e_s (x) g^{-1} w`` so that
    repeated splitting of bar words is coassociative.
    """

    def __init__(self, group: FiniteGroup, action: Mapping | None = None):
        self.group = group
        self.action = {}
        for g in group.elements:
            table = (action or {}).get(g)
            if table is None:
                continue
            self.action[g] = {
                l: {k: rational(c) for k, c in vec.items() if rational(c)} for l, vec in table.items()
            }

    @property
    def basis(self) -> tuple:
        return self.group.elements

    def act(self, g, label: str) -> Vec:
        table = self.action.get(g)
        if table is None or label not in table:
            return {label: Fraction(1)}
        return table[label]

    def act_vec(self, g, vec: Mapping[str, Fraction]) -> Vec:
        out: Vec = {}
        for l, c in vec.items():
            for k, e in self.act(g, l).items():
                _acc(out, k, c * e)
        return out

    def right_act(self, label: str, g) -> Vec:
        return self.act(self.group.inv(g), label)

    def coproduct(self, g) -> list[tuple]:
        """Delta_S(e_g) = sum over h k = g of e_h (x) e_k."""
        G = self.group
        return [(h, G.mul(G.inv(h), g)) for h in G.elements]

    def antipode(self, g):
        return self.group.inv(g)

    def counit(self, g) -> int:
        return 1 if g == self.group.identity else 0

    def validate(self, model: DGAModel) -> list[str]:
        problems = [f"group: {p}" for p in self.group.validate()]
        G = self.group
        for g in G.elements:
            for l in model.labels:
                img = self.act(g, l)
                if any(model.degree.get(k) != model.degree[l] for k in img):
                    problems.append(f"action of {g!r} does not preserve the degree of {l}")
            if self.act(g, model.unit) != {model.unit: 1}:
                problems.append(f"action of {g!r} moves the unit")
            for l in model.labels:
                if self.act_vec(g, model.d(l)) != model.d_vec(self.act(g, l)):
                    problems.append(f"action of {g!r} does not commute with d on {l}")
            for a in model.labels:
                for b in model.labels:
                    lhs = self.act_vec(g, model.mul(a, b))
                    rhs = model.mul_vec(self.act(g, a), self.act(g, b))
                    if lhs != rhs:
                        problems.append(f"action of {g!r} is not multiplicative on ({a},{b})")
        for g in G.elements:
            for h in G.elements:
                for l in model.labels:
                    if self.act(G.mul(g, h), l) != self.act_vec(g, self.act(h, l)):
                        problems.append(f"not a left action at ({g!r},{h!r}) on {l}")
        return problems

    def __repr__(self):
        return f"CoefficientCoalgebra({self.group!r})"


@dataclass(frozen=True)
class BarModule:
    """A DG module over the model used at one end of the bar construction.

    ``kind`` is ``"ground"`` (Q through the augmentation), ``"coefficients"``
    (O(S) through the augmentation to O(S)) or ``"regular"`` (the model
    itself).
    """

    kind: str
    model: DGAModel
    coalgebra: CoefficientCoalgebra | None = None

    @property
    def basis(self) -> tuple[tuple, ...]:
        if self.kind == "ground":
            return (("1", 0),)
        if self.kind == "coefficients":
            return tuple((g, 0) for g in self.coalgebra.basis)
        return self.model.basis

    def degree(self, label) -> int:
        if self.kind == "regular":
            return self.model.degree[label]
        return 0

    def d(self, label) -> dict:
        if self.kind == "regular":
            return self.model.d(label)
        return {}

    def act(self, a: str, label) -> dict:
        """Action of a model element (either side; the algebras are graded commutative)."""
        if self.kind == "regular":
            return self.model.mul(label, a)
        # both augmentations kill positive degrees in a connected model
        return {label: Fraction(1)} if a == self.model.unit else {}

    def act_left(self, a: str, label) -> dict:
        if self.kind == "regular":
            return self.model.mul(a, label)
        return self.act(a, label)

    def mul(self, x, y) -> dict:
        if self.kind == "ground":
            return {"1": Fraction(1)}
        if self.kind == "coefficients":
            return {x: Fraction(1)} if x == y else {}
        return self.model.mul(x, y)

    @property
    def unit(self) -> dict:
        if self.kind == "ground":
            return {"1": Fraction(1)}
        if self.kind == "coefficients":
            return {g: Fraction(1) for g in self.coalgebra.basis}
        return {self.model.unit: Fraction(1)}


def ground_module(model: DGAModel) -> BarModule:
    return BarModule("ground", model)


def coefficient_module(model: DGAModel, coalgebra: CoefficientCoalgebra) -> BarModule:
    return BarModule("coefficients", model, coalgebra)


def regular_module(model: DGAModel) -> BarModule:
    return BarModule("regular", model)


BarKey = tuple  # (m, letters, n)


class BarComplex:
    """B(M, A, N) for a connected model A."""

    def __init__(self, model: DGAModel, left: BarModule | None = None, right: BarModule | None = None):
        model.require_valid()
        self.model = model
        self.left = left or ground_module(model)
        self.right = right or ground_module(model)

    def __repr__(self):
        return f"BarComplex({self.left.kind}, {self.model!r}, {self.right.kind})"

    def degree(self, key: BarKey) -> int:
        m, letters, n = key
        A = self.model
        return self.left.degree(m) + self.right.degree(n) + sum(A.degree[a] - 1 for a in letters)

    def element(self, terms: Mapping[BarKey, object]) -> "BarElement":
        return BarElement(self, terms)

    def word(self, *letters: str, m=None, n=None, coeff=1) -> "BarElement":
        m = "1" if m is None and self.left.kind == "ground" else m
        n = "1" if n is None and self.right.kind == "ground" else n
        return BarElement(self, {(m, tuple(letters), n): coeff})

    def unit(self) -> "BarElement":
        terms = {}
        for m, c in self.left.unit.items():
            for n, e in self.right.unit.items():
                terms[m, (), n] = c * e
        return BarElement(self, terms)

    def words(self, total_degree: int, max_length: int) -> list[BarKey]:
        """All basis words of the given total degree with length <= max_length."""
        A = self.model
        letters_by_shift: dict[int, list[str]] = {}
        for a in A.positive:
            letters_by_shift.setdefault(A.degree[a] - 1, []).append(a)
        out = []
        for m, dm in self.left.basis:
            for n, dn in self.right.basis:
                need = total_degree - dm - dn
                if need < 0:
                    continue
                for r in range(max_length + 1):
                    for shifts in _compositions(need, r, letters_by_shift):
                        for letters in product(*(letters_by_shift[s] for s in shifts)):
                            out.append((m, letters, n))
        return sorted(out, key=lambda k: (len(k[1]), _sort_key(k)))

    # -- differential -----------------------------------------------------

    def differential_key(self, key: BarKey) -> dict:
        A = self.model
        m, letters, n = key
        r = len(letters)
        dm_sign = -1 if self.left.degree(m) % 2 else 1
        word_deg = sum(A.degree[a] - 1 for a in letters)
        out: dict = {}
        for mm, c in self.left.d(m).items():
            _acc(out, (mm, letters, n), c)
        for new_letters, c in _d_b(A, letters):
            _acc(out, (m, new_letters, n), dm_sign * c)
        sign = dm_sign * (-1 if word_deg % 2 else 1)
        for nn, c in self.right.d(n).items():
            _acc(out, (m, letters, nn), sign * c)
        if r >= 1:
            j_sign = 1
            for a in letters[:-1]:
                if A.degree[a] % 2:
                    j_sign = -j_sign
            end_sign = (-1) ** (r + 1) * dm_sign * j_sign
            for nn, c in self.right.act_left(letters[-1], n).items():
                _acc(out, (m, letters[:-1], nn), end_sign * c)
            for mm, c in self.left.act(letters[0], m).items():
                _acc(out, (mm, letters[1:], n), -dm_sign * c)
        return out


def _sort_key(key: BarKey):
    m, letters, n = key
    return (str(m), letters, str(n))


def _compositions(total: int, parts: int, allowed: Mapping[int, list]):
    """Ordered tuples of ``parts`` allowed shifts summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for s in sorted(allowed):
        if s > total:
            break
        for rest in _compositions(total - s, parts - 1, allowed):
            yield (s,) + rest


def _d_b(A: DGAModel, letters: tuple) -> list[tuple[tuple, Fraction]]:
    r = len(letters)
    out: list = []
    j_sign = 1  # product of (-1)^deg over the letters before position i
    for i in range(r):
        a = letters[i]
        sign = (-1) ** (i + 1) * j_sign
        for k, c in A.d(a).items():
            out.append((letters[:i] + (k,) + letters[i + 1 :], sign * c))
        if i + 1 < r:
            merge_sign = (-1) ** (i + 2) * j_sign * (-1 if A.degree[a] % 2 else 1)
            for k, c in A.mul(a, letters[i + 1]).items():
                out.append((letters[:i] + (k,) + letters[i + 2 :], merge_sign * c))
        if A.degree[a] % 2:
            j_sign = -j_sign
    return out


class BarElement:
    """Rational combination of bar words in a fixed complex (immutable)."""

    __slots__ = ("complex", "terms")

    def __init__(self, complex_: BarComplex, terms: Mapping[BarKey, object]):
        self.complex = complex_
        out = {}
        for (m, letters, n), c in terms.items():
            q = rational(c)
            if q:
                out[m, tuple(letters), n] = q
        self.terms = out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, BarElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda t: _sort_key(t[0]))))

    def __add__(self, other: "BarElement") -> "BarElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return BarElement(self.complex, out)

    def __neg__(self):
        return BarElement(self.complex, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BarElement):
            return shuffle_product(self, other)
        s = rational(other)
        return BarElement(self.complex, {k: c * s for k, c in self.terms.items()})

    def __rmul__(self, scalar):
        s = rational(scalar)
        return BarElement(self.complex, {k: c * s for k, c in self.terms.items()})

    def degrees(self) -> set[int]:
        return {self.complex.degree(k) for k in self.terms}

    def length(self) -> int:
        return max((len(k[1]) for k in self.terms), default=0)

    def constant_part(self) -> "BarElement":
        return BarElement(self.complex, {k: c for k, c in self.terms.items() if not k[1]})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, letters, n), c in sorted(self.terms.items(), key=lambda t: (len(t[0][1]), _sort_key(t[0]))):
            mm = "" if m == "1" else str(m)
            nn = "" if n == "1" else str(n)
            parts.append(f"{format_rational(c)}*{mm}[{'|'.join(letters)}]{nn}")
        return " + ".join(parts)


def bar_differential(x: BarElement, model: DGAModel | None = None) -> BarElement:
    B = x.complex
    if model is not None and model is not B.model:
        raise ValueError("element belongs to a bar complex over a different model")
    out: dict = {}
    for key, c in x.terms.items():
        for k, e in B.differential_key(key).items():
            _acc(out, k, c * e)
    return BarElement(B, out)


def _koszul_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Sign of moving symbols of the given degrees into ``order``."""
    sign = 1
    pos = {src: k for k, src in enumerate(order)}
    n = len(degrees)
    for i in range(n):
        if degrees[i] % 2 == 0:
            continue
        for j in range(i + 1, n):
            if degrees[j] % 2 and pos[i] > pos[j]:
                sign = -sign
    return sign


def shuffle_product(x: BarElement, y: BarElement) -> BarElement:
    """Shuffle product with Koszul signs, letters carrying degree ``deg - 1``."""
    B = x.complex
    if y.complex is not B:
        raise ValueError("shuffle product needs elements of the same complex")
    A = B.model
    out: dict = {}
    for (m1, a, n1), c1 in x.terms.items():
        for (m2, b, n2), c2 in y.terms.items():
            p, q = len(a), len(b)
            # source order: m1, a_1..a_p, n1, m2, b_1..b_q, n2
            degs = (
                [B.left.degree(m1)]
                + [A.degree[t] - 1 for t in a]
                + [B.right.degree(n1), B.left.degree(m2)]
                + [A.degree[t] - 1 for t in b]
                + [B.right.degree(n2)]
            )
            i_m1, i_n1, i_m2, i_n2 = 0, p + 1, p + 2, p + q + 3
            a_idx = list(range(1, p + 1))
            b_idx = list(range(p + 3, p + q + 3))
            mprod = B.left.mul(m1, m2)
            nprod = B.right.mul(n1, n2)
            if not mprod or not nprod:
                continue
            for slots in combinations(range(p + q), p):
                slot_set = set(slots)
                merged, letters = [], []
                ai = bi = 0
                for s in range(p + q):
                    if s in slot_set:
                        merged.append(a_idx[ai])
                        letters.append(a[ai])
                        ai += 1
                    else:
                        merged.append(b_idx[bi])
                        letters.append(b[bi])
                        bi += 1
                order = [i_m1, i_m2] + merged + [i_n1, i_n2]
                sign = _koszul_sign(degs, order)
                for mm, cm in mprod.items():
                    for nn, cn in nprod.items():
                        _acc(out, (mm, tuple(letters), nn), sign * c1 * c2 * cm * cn)
    return BarElement(B, out)


def random_bar_element(B: BarComplex, rng, max_length: int = 4, terms: int = 5, max_degree: int = 3) -> BarElement:
    """A pseudo-random element built from ``rng`` (a ``random.Random``)."""
    A = B.model
    out: dict = {}
    for _ in range(terms):
        r = rng.randint(0, max_length)
        letters = tuple(rng.choice(A.positive) for _ in range(r))
        m = rng.choice(B.left.basis)[0]
        n = rng.choice(B.right.basis)[0]
        if B.degree((m, letters, n)) > max_degree + max_length:
            continue
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        _acc(out, (m, letters, n), c)
    return BarElement(B, out)


# -- H^0 ------------------------------------------------------------------


@dataclass
class BarFiltrationReport:
    """Dimensions of H^0 intersected with the bar filtration."""

    cap: int
    new_dims: tuple[int, ...]
    cumulative: tuple[int, ...]

    def query(self, s: int) -> int:
        if s > self.cap:
            raise ValueError(f"bar degree {s} exceeds the computed cap {self.cap}; rerun with a larger cap")
        return self.cumulative[s]


@dataclass
class H0Result:
    complex: BarComplex
    report: BarFiltrationReport
    cocycles: list  # list of (BarElement, filtration level)
    trivial_report: BarFiltrationReport | None = None
    tensor_decomposition_ok: bool | None = None

    @property
    def basis(self) -> list[BarElement]:
        return [z for z, _ in self.cocycles]

    @property
    def levels(self) -> list[int]:
        return [s for _, s in self.cocycles]


def _h0_of_complex(B: BarComplex, cap: int) -> tuple[BarFiltrationReport, list]:
    words0 = B.words(0, cap)
    images = [B.differential_key(k) for k in words0]
    row_index: dict = {}
    entries: dict = {}
    for j, img in enumerate(images):
        for k, c in img.items():
            i = row_index.setdefault(k, len(row_index))
            entries[i, j] = c
    echelon = EchelonBasis()
    cocycles = []
    cumulative = []
    for s in range(cap + 1):
        cols = [j for j, k in enumerate(words0) if len(k[1]) <= s]
        pos = {j: t for t, j in enumerate(cols)}
        sub_entries = {(i, pos[j]): c for (i, j), c in entries.items() if j in pos}
        M = RatMatrix(max(len(row_index), 1), len(cols), sub_entries)
        for vec in kernel_basis(M):
            full = {cols[t]: c for t, c in vec.items()}
            if echelon.add(full):
                cocycles.append((BarElement(B, {words0[j]: c for j, c in full.items()}), s))
        cumulative.append(len(echelon))
    new = [cumulative[0]] + [cumulative[s] - cumulative[s - 1] for s in range(1, cap + 1)]
    return BarFiltrationReport(cap, tuple(new), tuple(cumulative)), cocycles


def h0(model: DGAModel, coefficients: CoefficientCoalgebra | None = None, bar_degree_cap: int = 6) -> H0Result:
    """Degree-zero bar cohomology within bar degrees <= cap.

    The differential never lengthens words, so every dimension up to the
    cap is exact. With coefficients the complex is B(Q, A, O(S)) and the
    decomposition H^0(B(Q,A,O(S))) = H^0(B(Q,A,Q)) (x) O(S) is checked
    on dimensions.
    """
    if bar_degree_cap < 0:
        raise ValueError("cap must be nonnegative")
    model.require_valid()
    if coefficients is None:
        B = BarComplex(model)
        report, cocycles = _h0_of_complex(B, bar_degree_cap)
        return H0Result(B, report, cocycles)
    problems = coefficients.validate(model)
    if problems:
        raise ModelError(problems)
    B = BarComplex(model, ground_module(model), coefficient_module(model, coefficients))
    report, cocycles = _h0_of_complex(B, bar_degree_cap)
    trivial, _ = _h0_of_complex(BarComplex(model), bar_degree_cap)
    order = coefficients.group.order
    ok = all(a == order * b for a, b in zip(report.cumulative, trivial.cumulative))
    return H0Result(B, report, cocycles, trivial, ok)


# -- cohomology of the model and the E1 page --------------------------------


def cohomology_dims(model: DGAModel) -> dict[int, int]:
    """dim H^k(A) for every degree k present in the model."""
    model.require_valid()
    out = {}
    for k in range(model.top_degree + 1):
        src = model.in_degree(k)
        tgt = model.in_degree(k + 1)
        prev = model.in_degree(k - 1)
        ti = {l: i for i, l in enumerate(tgt)}
        si = {l: i for i, l in enumerate(src)}
        dk = RatMatrix(len(tgt), len(src), {(ti[t], j): c for j, l in enumerate(src) for t, c in model.d(l).items()})
        dprev = RatMatrix(len(src), len(prev), {(si[t], j): c for j, l in enumerate(prev) for t, c in model.d(l).items()})
        kernel = len(src) - _rank(dk)
        image = _rank(dprev)
        out[k] = kernel - image
    return out


def _rank(m: RatMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return m.cols - len(kernel_basis(m))


def _module_dims(module: BarModule) -> dict[int, int]:
    out: dict[int, int] = {}
    for label, deg in module.basis:
        out[deg] = out.get(deg, 0) + 1
    return out


def _poly_mul(p: Mapping[int, int], q: Mapping[int, int], cap: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, a in p.items():
        for j, b in q.items():
            if i + j <= cap:
                out[i + j] = out.get(i + j, 0) + a * b
    return out


def em_e1_dims(
    model: DGAModel,
    left: BarModule | None = None,
    right: BarModule | None = None,
    s_max: int = 4,
    t_max: int | None = None,
) -> dict[tuple[int, int], int]:
    """Dimensions of E1^{-s,t} = [M (x) H^+(A)^{(x)s} (x) N]^t."""
    left = left or ground_module(model)
    right = right or ground_module(model)
    H = cohomology_dims(model)
    hplus = {k: v for k, v in H.items() if k > 0 and v}
    if t_max is None:
        t_max = s_max * max(hplus, default=1) + max(_module_dims(left)) + max(_module_dims(right))
    ends = _poly_mul(_module_dims(left), _module_dims(right), t_max)
    table = {}
    power = {0: 1}
    for s in range(s_max + 1):
        row = _poly_mul(ends, power, t_max)
        for t in range(t_max + 1):
            table[s, t] = row.get(t, 0)
        power = _poly_mul(power, hplus, t_max)
    return table


# -- Hopf structure ---------------------------------------------------------


def coproduct_h0(x: BarElement, coefficients: CoefficientCoalgebra | None = None) -> dict:
    """Deconcatenation coproduct twisted by the coefficient coaction.

    Returns ``{(key_left, key_right): coefficient}``. For ``[w1|...|wr] e_g``
    the terms are ``[w1|...|wi] e_h (x) [w_{i+1} h|...|w_r h] e_k`` over
    ``h k = g``, where ``w h`` is the right action of h.
    """
    B = x.complex
    if B.left.kind != "ground":
        raise ValueError("coproduct is defined on B(Q, A, N)")
    out: dict = {}
    if B.right.kind == "ground":
        for (m, letters, n), c in x.terms.items():
            for i in range(len(letters) + 1):
                _acc(out, (("1", letters[:i], "1"), ("1", letters[i:], "1")), c)
        return out
    coal = coefficients or B.right.coalgebra
    for (m, letters, g), c in x.terms.items():
        for h, k in coal.coproduct(g):
            for i in range(len(letters) + 1):
                moved = letters[i:]
                for new_letters, e in _act_word(coal, moved, h):
                    _acc(out, (("1", letters[:i], h), ("1", new_letters, k)), c * e)
    return out


def _act_word(coal: CoefficientCoalgebra, letters: tuple, h) -> list[tuple[tuple, Fraction]]:
    expansions = [list(coal.right_act(a, h).items()) for a in letters]
    out = []
    for choice in product(*expansions):
        coeff = Fraction(1)
        word = []
        for label, c in choice:
            coeff *= c
            word.append(label)
        out.append((tuple(word), coeff))
    return out


def counit(x: BarElement) -> Fraction:
    B = x.complex
    total = Fraction(0)
    for (m, letters, n), c in x.terms.items():
        if letters:
            continue
        if B.right.kind == "coefficients":
            total += c * B.right.coalgebra.counit(n)
        else:
            total += c
    return total


def act_on_bar(coal: CoefficientCoalgebra, g, x: BarElement) -> BarElement:
    """Left action of g on B(Q, A, Q) letter by letter."""
    out: dict = {}
    for (m, letters, n), c in x.terms.items():
        expansions = [list(coal.act(g, a).items()) for a in letters]
        for choice in product(*expansions):
            coeff = c
            for _, e in choice:
                coeff *= e
            _acc(out, (m, tuple(l for l, _ in choice), n), coeff)
    return BarElement(x.complex, out)


@dataclass
class CoLieData:
    """Indecomposables Q = m/m^2 of H^0 with the cobracket.

    ``representatives[i]`` is a cocycle whose class is the i-th basis vector
    of Q; ``levels[i]`` its bar-filtration level. ``cobracket[i]`` maps pairs
    ``(j, k)`` to the coefficient of ``q_j (x) q_k`` in the cobracket of q_i.
    """

    h0: H0Result
    representatives: list
    levels: list
    cobracket: list
    to_q: object  # callable: cocycle -> Q coordinates

    def graded_dims(self) -> tuple[int, ...]:
        cap = self.h0.report.cap
        return tuple(self.levels.count(s) for s in range(1, cap + 1))

    def dual_lie(self) -> GradedNilpotentLie:
        """Associated graded of the dual Lie algebra of (Q, cobracket)."""
        order = sorted(range(len(self.levels)), key=lambda i: (self.levels[i], i))
        new = {old: k for k, old in enumerate(order)}
        structure: dict = {}
        for k_old, co in enumerate(self.cobracket):
            for (i_old, j_old), c in co.items():
                if self.levels[i_old] + self.levels[j_old] != self.levels[k_old]:
                    continue
                i, j, k = new[i_old], new[j_old], new[k_old]
                if i < j:
                    _acc(structure.setdefault((i, j), {}), k, c)
        labels = [_short_label(self.representatives[old]) for old in order]
        degrees = [self.levels[old] for old in order]
        return GradedNilpotentLie(labels, degrees, structure, self.h0.report.cap)


def _short_label(z: BarElement) -> str:
    key = max(z.terms, key=lambda k: (len(k[1]), tuple(reversed(_sort_key(k)))))
    return f"[{'|'.join(key[1])}]*"


def indecomposables_and_cobracket(result: H0Result, cap: int | None = None) -> CoLieData:
    """Q = m/m^2 filtered by bar degree, with cobracket Delta-bar - tau Delta-bar.

    ``m^2`` within the cap is spanned by products of cocycles whose levels
    add up to at most the cap.
    """
    B = result.complex
    if B.left.kind != "ground" or B.right.kind != "ground":
        raise ValueError("indecomposables are computed on H^0(B(Q, A, Q))")
    cap = result.report.cap if cap is None else cap
    if cap > result.report.cap:
        raise ValueError(f"cap {cap} exceeds the computed bar degree {result.report.cap}")
    unit = B.unit()
    unit_key = next(iter(unit.terms))
    aug = []
    for z, s in result.cocycles:
        if s == 0 or s > cap:
            continue
        c0 = z.terms.get(unit_key, 0)
        aug.append((z - unit * c0 if c0 else z, s))
    # highest filtration first so that echelon pivots discard top-level vectors
    aug.sort(key=lambda t: -t[1])
    gens = [z for z, _ in aug]
    levels = [s for _, s in aug]
    words = sorted({k for z in gens for k in z.terms}, key=lambda k: (len(k[1]), _sort_key(k)))
    widx = {k: i for i, k in enumerate(words)}
    columns = [{widx[k]: c for k, c in z.terms.items()} for z in gens]
    solver = CoordinateSolver(columns, len(words))

    def m_coords(x: BarElement) -> dict[int, Fraction]:
        for k in x.terms:
            if k not in widx:
                raise ValueError("element is not in the span of the computed cocycles")
        coords = solver.solve({widx[k]: c for k, c in x.terms.items()})
        if coords is None:
            raise ValueError("element is not in the span of the computed cocycles")
        return coords

    squares = []
    for i, zi in enumerate(gens):
        for j in range(i, len(gens)):
            if levels[i] + levels[j] > cap:
                continue
            squares.append(m_coords(shuffle_product(zi, gens[j])))
    reps, proj = quotient_basis(len(gens), squares)

    def to_q(x: BarElement) -> dict[int, Fraction]:
        return proj.apply(m_coords(x))

    representatives = [gens[r] for r in reps]
    q_levels = [levels[r] for r in reps]
    cobracket = []
    for q in representatives:
        reduced = coproduct_h0(q)
        for key, c in q.terms.items():
            _acc(reduced, (unit_key, key), -c)
            _acc(reduced, (key, unit_key), -c)
        K = _tensor_coordinates(reduced, solver, widx)
        qq: dict = {}
        for (a, b), c in K.items():
            for i, ca in proj.apply({a: Fraction(1)}).items():
                for j, cb in proj.apply({b: Fraction(1)}).items():
                    _acc(qq, (i, j), c * ca * cb)
        co: dict = {}
        for (i, j), c in qq.items():
            _acc(co, (i, j), c)
            _acc(co, (j, i), -c)
        cobracket.append(co)
    return CoLieData(result, representatives, q_levels, cobracket, to_q)


def _tensor_coordinates(tensor: Mapping, solver: CoordinateSolver, widx: Mapping) -> dict:
    """Coordinates K_ab with tensor = sum K_ab z_a (x) z_b."""
    by_right: dict = {}
    for (u, v), c in tensor.items():
        if u not in widx or v not in widx:
            raise ValueError("reduced coproduct leaves the span of the cocycles")
        by_right.setdefault(widx[v], {})[widx[u]] = c
    partial: dict = {}  # a -> {v: coefficient}
    for v, col in by_right.items():
        coords = solver.solve(col)
        if coords is None:
            raise ValueError("left tensor factor is not a cocycle combination")
        for a, c in coords.items():
            partial.setdefault(a, {})[v] = c
    out = {}
    for a, row in partial.items():
        coords = solver.solve(row)
        if coords is None:
            raise ValueError("right tensor factor is not a cocycle combination")
        for b, c in coords.items():
            if c:
                out[a, b] = c
    return out
