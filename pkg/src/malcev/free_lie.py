"""Free graded Lie algebras, Lyndon (Hall) bases and nilpotent quotients.

Elements of the free Lie algebra are stored in the Lyndon basis. Brackets
are computed by expanding into the free associative algebra, where the
bracketing of a Lyndon word ``w`` is ``w`` plus lexicographically larger
words, and reading the result back off triangularly.

Weighted generators are allowed; the grading of a word is the sum of the
degrees of its letters and everything above the truncation degree is
dropped.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exactla import EchelonBasis, format_rational, quotient_basis, rational

__all__ = [
    "FreeLieAlgebra",
    "GradedLieElement",
    "LiePresentation",
    "GradedNilpotentLie",
    "PresentedLie",
    "GeneratorAction",
    "hall_basis",
    "bracket",
    "nilpotent_quotient",
    "act",
    "witt_dimension",
    "is_lyndon",
    "ideal_closure_violations",
]

Word = tuple[int, ...]


def is_lyndon(word: Sequence[int]) -> bool:
    """Strictly smaller than each of its proper rotations."""
    w = tuple(word)
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def _lyndon_words(k: int, max_len: int) -> list[Word]:
    # Duval's generation, lexicographic order.
    out = []
    if k <= 0 or max_len <= 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def _standard_factorization(w: Word) -> tuple[Word, Word]:
    # right factor is the longest proper Lyndon suffix
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def _mobius(n: int) -> int:
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def witt_dimension(num_generators: int, degree: int) -> int:
    """Dimension of the degree-``degree`` part of the free Lie algebra on
    ``num_generators`` degree-one generators."""
    if degree < 1:
        raise ValueError("degree must be positive")
    total = sum(_mobius(degree // e) * num_generators**e for e in range(1, degree + 1) if degree % e == 0)
    return total // degree


class FreeLieAlgebra:
    """Free Lie algebra on weighted generators, truncated above degree N."""

    def __init__(self, generators: Sequence[tuple[str, int]], truncation: int):
        if truncation < 1:
            raise ValueError("truncation must be at least 1")
        names = [g[0] for g in generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        degrees = [int(g[1]) for g in generators]
        if any(d < 1 for d in degrees):
            raise ValueError("generator degrees must be positive")
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.truncation = truncation
        self._index = {n: i for i, n in enumerate(names)}
        self._expansion_cache: dict[Word, dict[Word, Fraction]] = {}
        self._bracket_cache: dict[tuple[Word, Word], dict[Word, Fraction]] = {}

    def __repr__(self):
        return f"FreeLieAlgebra({list(zip(self.names, self.degrees))}, N={self.truncation})"

    def word_degree(self, word: Iterable[int]) -> int:
        return sum(self.degrees[i] for i in word)

    def generator_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    @cached_property
    def basis(self) -> tuple[Word, ...]:
        """Lyndon words of degree <= N ordered by (degree, lexicographic)."""
        words = [
            w
            for w in _lyndon_words(len(self.names), self.truncation)
            if self.word_degree(w) <= self.truncation
        ]
        return tuple(sorted(words, key=lambda w: (self.word_degree(w), w)))

    @cached_property
    def basis_by_degree(self) -> dict[int, tuple[Word, ...]]:
        out: dict[int, list[Word]] = {d: [] for d in range(1, self.truncation + 1)}
        for w in self.basis:
            out[self.word_degree(w)].append(w)
        return {d: tuple(ws) for d, ws in out.items()}

    def dims(self) -> tuple[int, ...]:
        return tuple(len(self.basis_by_degree[d]) for d in range(1, self.truncation + 1))

    def label(self, word: Word) -> str:
        if len(word) == 1:
            return self.names[word[0]]
        u, v = _standard_factorization(word)
        return f"[{self.label(u)},{self.label(v)}]"

    # -- associative expansions -------------------------------------------

    def expansion(self, word: Word) -> dict[Word, Fraction]:
        """The bracketing of a Lyndon word as a noncommutative polynomial."""
        cached = self._expansion_cache.get(word)
        if cached is not None:
            return cached
        if len(word) == 1:
            out = {word: Fraction(1)}
        else:
            u, v = _standard_factorization(word)
            out = _commutator(self.expansion(u), self.expansion(v))
        self._expansion_cache[word] = out
        return out

    def to_tensor(self, elem: "GradedLieElement") -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        for w, c in elem.terms.items():
            for v, d in self.expansion(w).items():
                _accumulate(out, v, c * d)
        return out

    def from_tensor(self, poly: Mapping[Word, Fraction]) -> "GradedLieElement":
        """Read a Lie polynomial off in the Lyndon basis.

        Raises ValueError if ``poly`` is not a Lie element.
        """
        rest = {w: rational(c) for w, c in poly.items() if c}
        rest = {w: c for w, c in rest.items() if self.word_degree(w) <= self.truncation}
        terms: dict[Word, Fraction] = {}
        while rest:
            w = min(rest)
            if not is_lyndon(w):
                raise ValueError(f"not a Lie polynomial (leading word {w} is not Lyndon)")
            c = rest[w]
            terms[w] = c
            for v, d in self.expansion(w).items():
                _accumulate(rest, v, -c * d)
        return GradedLieElement(self, terms)

    # -- elements ---------------------------------------------------------

    def zero(self) -> "GradedLieElement":
        return GradedLieElement(self, {})

    def generator(self, name: str) -> "GradedLieElement":
        i = self.generator_index(name)
        if self.degrees[i] > self.truncation:
            return self.zero()
        return GradedLieElement(self, {(i,): Fraction(1)})

    def basis_element(self, word: Word) -> "GradedLieElement":
        if word not in self._basis_set:
            raise ValueError(f"{word} is not a basis word of degree <= N")
        return GradedLieElement(self, {word: Fraction(1)})

    @cached_property
    def _basis_set(self) -> frozenset:
        return frozenset(self.basis)

    def from_expression(self, expr) -> "GradedLieElement":
        """Nested 2-lists of generator names, e.g. ``["X12", ["X13", "X23"]]``."""
        if isinstance(expr, str):
            return self.generator(expr)
        if isinstance(expr, (list, tuple)) and len(expr) == 2:
            return self.bracket(self.from_expression(expr[0]), self.from_expression(expr[1]))
        raise ValueError(f"malformed bracket expression {expr!r}")

    def bracket(self, a: "GradedLieElement", b: "GradedLieElement") -> "GradedLieElement":
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements belong to a different algebra")
        out: dict[Word, Fraction] = {}
        for u, c in a.terms.items():
            for v, d in b.terms.items():
                for w, e in self._basis_bracket(u, v).items():
                    _accumulate(out, w, c * d * e)
        return GradedLieElement(self, out)

    def _basis_bracket(self, u: Word, v: Word) -> dict[Word, Fraction]:
        key = (u, v)
        hit = self._bracket_cache.get(key)
        if hit is not None:
            return hit
        if u == v or self.word_degree(u) + self.word_degree(v) > self.truncation:
            out = {}
        elif (v, u) in self._bracket_cache:
            out = {w: -c for w, c in self._bracket_cache[v, u].items()}
        else:
            poly = _commutator(self.expansion(u), self.expansion(v))
            out = self.from_tensor(poly).terms
        self._bracket_cache[key] = out
        return out


def _accumulate(target: dict, key, value) -> None:
    s = target.get(key, 0) + value
    if s:
        target[key] = s
    else:
        target.pop(key, None)


def _commutator(p: Mapping[Word, Fraction], q: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
    out: dict[Word, Fraction] = {}
    for u, c in p.items():
        for v, d in q.items():
            _accumulate(out, u + v, c * d)
            _accumulate(out, v + u, -c * d)
    return out


class GradedLieElement:
    """Element of a free Lie algebra in Lyndon coordinates (immutable)."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: FreeLieAlgebra, terms: Mapping[Word, Fraction]):
        self.algebra = algebra
        self.terms = {
            tuple(w): rational(c)
            for w, c in terms.items()
            if c and algebra.word_degree(w) <= algebra.truncation
        }

    def degrees(self) -> set[int]:
        return {self.algebra.word_degree(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, degree: int) -> "GradedLieElement":
        return GradedLieElement(
            self.algebra, {w: c for w, c in self.terms.items() if self.algebra.word_degree(w) == degree}
        )

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, GradedLieElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other: "GradedLieElement") -> "GradedLieElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(out, w, c)
        return GradedLieElement(self.algebra, out)

    def __neg__(self):
        return GradedLieElement(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        s = rational(scalar)
        return GradedLieElement(self.algebra, {w: c * s for w, c in self.terms.items()})

    __rmul__ = __mul__

    def sorted_terms(self) -> list[tuple[Word, Fraction]]:
        deg = self.algebra.word_degree
        return sorted(self.terms.items(), key=lambda t: (deg(t[0]), t[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"{format_rational(c)}*{self.algebra.label(w)}" for w, c in self.sorted_terms()
        )


def hall_basis(generators: Sequence[tuple[str, int]], degree_cap: int) -> dict[int, list[str]]:
    """Per-degree bracket labels of the Lyndon basis up to ``degree_cap``."""
    alg = FreeLieAlgebra(generators, degree_cap)
    return {d: [alg.label(w) for w in ws] for d, ws in alg.basis_by_degree.items()}


def bracket(a, b):
    """Bracket in whichever algebra ``a`` and ``b`` live in."""
    if isinstance(a, GradedLieElement):
        return a.algebra.bracket(a, b)
    raise TypeError("use GradedNilpotentLie.bracket for quotient coordinates")


@dataclass(frozen=True)
class LiePresentation:
    generators: tuple[tuple[str, int], ...]
    relations: tuple = ()
    truncation: int = 4

    def free_algebra(self) -> FreeLieAlgebra:
        return FreeLieAlgebra(self.generators, self.truncation)


class GradedNilpotentLie:
    """Finite-dimensional graded Lie algebra, truncated above degree N.

    Basis elements are indexed 0..dim-1, ordered by degree. Elements are
    sparse dicts ``{index: coefficient}``; coefficients may be Fractions or
    any other number type closed under the ring operations.
    """

    def __init__(
        self,
        labels: Sequence[str],
        degrees: Sequence[int],
        structure: Mapping[tuple[int, int], Mapping[int, Fraction]],
        truncation: int,
    ):
        if len(labels) != len(degrees):
            raise ValueError("labels and degrees differ in length")
        if list(degrees) != sorted(degrees):
            raise ValueError("basis must be ordered by degree")
        self.labels = tuple(labels)
        self.degrees = tuple(degrees)
        self.truncation = truncation
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), vec in structure.items():
            vec = {k: c for k, c in vec.items() if c}
            if not vec:
                continue
            table[i, j] = vec
        self.structure = table
        self._label_index = {l: i for i, l in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def dims(self) -> tuple[int, ...]:
        return tuple(self.degrees.count(d) for d in range(1, self.truncation + 1))

    def basis_by_degree(self) -> dict[int, list[int]]:
        out = {d: [] for d in range(1, self.truncation + 1)}
        for i, d in enumerate(self.degrees):
            out[d].append(i)
        return out

    def index(self, label: str) -> int:
        return self._label_index[label]

    def basis_vector(self, label_or_index) -> dict[int, Fraction]:
        i = label_or_index if isinstance(label_or_index, int) else self.index(label_or_index)
        return {i: Fraction(1)}

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if (i, j) in self.structure:
            return self.structure[i, j]
        if (j, i) in self.structure:
            return {k: -c for k, c in self.structure[j, i].items()}
        return {}

    def bracket(self, u: Mapping[int, object], v: Mapping[int, object]) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket_basis(i, j).items():
                    _accumulate(out, k, a * b * c)
        return out

    def validate(self) -> list[str]:
        """Exact check of antisymmetry, grading and Jacobi on basis triples."""
        problems = []
        n = self.dim
        for (i, j), vec in self.structure.items():
            target = self.degrees[i] + self.degrees[j]
            for k in vec:
                if self.degrees[k] != target:
                    problems.append(f"[{self.labels[i]},{self.labels[j]}] leaves degree {target}")
            if (j, i) in self.structure:
                back = self.structure[j, i]
                if i == j or any(back.get(k, 0) != -c for k, c in vec.items()) or set(back) != set(vec):
                    problems.append(f"antisymmetry fails on ({self.labels[i]},{self.labels[j]})")
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if self.degrees[i] + self.degrees[j] + self.degrees[k] > self.truncation:
                        continue
                    ei, ej, ek = {i: 1}, {j: 1}, {k: 1}
                    total: dict = {}
                    for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
                        for idx, val in self.bracket(a, self.bracket(b, c)).items():
                            _accumulate(total, idx, val)
                    if total:
                        problems.append(
                            f"Jacobi fails on ({self.labels[i]},{self.labels[j]},{self.labels[k]})"
                        )
        return problems

    def format_vector(self, vec: Mapping[int, Fraction]) -> str:
        if not vec:
            return "0"
        return " + ".join(f"{format_rational(vec[k])}*{self.labels[k]}" for k in sorted(vec))

    def __repr__(self):
        return f"{type(self).__name__}(dims={self.dims()})"


class PresentedLie(GradedNilpotentLie):
    """Quotient of a truncated free Lie algebra by a homogeneous ideal.

    Keeps the free algebra, the Lyndon lift of each quotient basis element
    and the per-degree projections so that free elements can be reduced.
    """

    def __init__(self, presentation: LiePresentation, free: FreeLieAlgebra, ideal, projections, reps):
        self.presentation = presentation
        self.free = free
        self.ideal = ideal  # degree -> EchelonBasis in local coordinates
        self._projections = projections  # degree -> RatMatrix (quotient x free)
        labels, degrees, lifts = [], [], []
        for d in range(1, free.truncation + 1):
            words = free.basis_by_degree[d]
            for r in reps[d]:
                lifts.append(words[r])
                labels.append(free.label(words[r]))
                degrees.append(d)
        self.lifts = tuple(lifts)
        self._offset = {}
        off = 0
        for d in range(1, free.truncation + 1):
            self._offset[d] = off
            off += len(reps[d])
        self._local = {d: {w: k for k, w in enumerate(free.basis_by_degree[d])} for d in self._offset}
        structure = {}
        for i in range(len(lifts)):
            for j in range(i + 1, len(lifts)):
                if degrees[i] + degrees[j] > free.truncation:
                    continue
                br = free.bracket(free.basis_element(lifts[i]), free.basis_element(lifts[j]))
                vec = self.reduce(br)
                if vec:
                    structure[i, j] = vec
        super().__init__(labels, degrees, structure, free.truncation)

    def reduce(self, elem: GradedLieElement) -> dict[int, Fraction]:
        """Image of a free Lie element in quotient coordinates."""
        if elem.algebra is not self.free:
            raise ValueError("element is not in this presentation's free algebra")
        by_degree: dict[int, dict[int, Fraction]] = {}
        for w, c in elem.terms.items():
            d = self.free.word_degree(w)
            by_degree.setdefault(d, {})[self._local[d][w]] = c
        out: dict[int, Fraction] = {}
        for d, vec in by_degree.items():
            for k, c in self._projections[d].apply(vec).items():
                out[self._offset[d] + k] = c
        return out

    def in_ideal(self, elem: GradedLieElement) -> bool:
        return not self.reduce(elem)

    def lift(self, vec: Mapping[int, Fraction]) -> GradedLieElement:
        return GradedLieElement(self.free, {self.lifts[i]: c for i, c in vec.items()})

    def element(self, expr) -> dict[int, Fraction]:
        """Quotient coordinates of a nested bracket expression."""
        return self.reduce(self.free.from_expression(expr))

    def ideal_dims(self) -> tuple[int, ...]:
        return tuple(len(self.ideal[d]) for d in range(1, self.truncation + 1))


def nilpotent_quotient(p: LiePresentation) -> PresentedLie:
    """Truncated quotient of the free Lie algebra by the ideal of ``p.relations``.

    The ideal is closed degree by degree: its degree-d part is spanned by the
    degree-d relations and brackets of generators with lower ideal parts.
    """
    free = p.free_algebra()
    N = free.truncation
    local = {d: {w: k for k, w in enumerate(free.basis_by_degree[d])} for d in range(1, N + 1)}
    rels_by_degree: dict[int, list[GradedLieElement]] = {}
    for rel in p.relations:
        if rel.algebra is not free:
            rel = _transport_element(rel, free)
        if not rel:
            continue
        if not rel.is_homogeneous():
            raise ValueError(f"relation {rel!r} is not homogeneous")
        (d,) = rel.degrees()
        rels_by_degree.setdefault(d, []).append(rel)

    def coords(elem: GradedLieElement, d: int) -> dict[int, Fraction]:
        return {local[d][w]: c for w, c in elem.terms.items()}

    ideal: dict[int, EchelonBasis] = {}
    for d in range(1, N + 1):
        basis = EchelonBasis()
        for rel in rels_by_degree.get(d, []):
            basis.add(coords(rel, d))
        for g, gdeg in enumerate(free.degrees):
            lower = d - gdeg
            if lower < 1 or lower not in ideal:
                continue
            gen = GradedLieElement(free, {(g,): Fraction(1)})
            lower_words = free.basis_by_degree[lower]
            for row in ideal[lower].rows.values():
                elem = GradedLieElement(free, {lower_words[k]: c for k, c in row.items()})
                basis.add(coords(free.bracket(gen, elem), d))
        ideal[d] = basis

    projections, reps = {}, {}
    for d in range(1, N + 1):
        dim = len(free.basis_by_degree[d])
        reps[d], projections[d] = quotient_basis(dim, ideal[d].rows.values())
    return PresentedLie(p, free, ideal, projections, reps)


def _transport_element(elem: GradedLieElement, free: FreeLieAlgebra) -> GradedLieElement:
    # Same generators, possibly a different truncation.
    if elem.algebra.names != free.names or elem.algebra.degrees != free.degrees:
        raise ValueError("relation lives in a free algebra on different generators")
    return GradedLieElement(free, elem.terms)


@dataclass(frozen=True)
class GeneratorAction:
    """A group element acting by a signed permutation of the generators.

    ``images[i] = (j, sign)`` sends generator i to ``sign`` times generator j.
    """

    label: str
    images: tuple[tuple[int, int], ...]

    @classmethod
    def from_permutation(cls, label: str, perm: Sequence[int], signs: Sequence[int] | None = None):
        signs = signs or [1] * len(perm)
        return cls(label, tuple((int(j), int(s)) for j, s in zip(perm, signs)))

    def check(self, degrees: Sequence[int]) -> None:
        if len(self.images) != len(degrees):
            raise ValueError("action has the wrong number of generators")
        targets = [j for j, _ in self.images]
        if sorted(targets) != list(range(len(degrees))):
            raise ValueError("action is not a permutation of the generators")
        for i, (j, s) in enumerate(self.images):
            if s not in (1, -1):
                raise ValueError("signs must be +1 or -1")
            if degrees[i] != degrees[j]:
                raise ValueError("action does not preserve generator degrees")


def _act_free(sigma: GeneratorAction, elem: GradedLieElement) -> GradedLieElement:
    free = elem.algebra
    sigma.check(free.degrees)
    poly: dict[Word, Fraction] = {}
    for w, c in elem.terms.items():
        for v, d in free.expansion(w).items():
            sign = 1
            letters = []
            for letter in v:
                j, s = sigma.images[letter]
                letters.append(j)
                sign *= s
            _accumulate(poly, tuple(letters), c * d * sign)
    return free.from_tensor(poly)


def act(sigma: GeneratorAction, v, algebra: PresentedLie | None = None):
    """Apply a generator permutation as a Lie algebra automorphism.

    ``v`` is a free ``GradedLieElement`` or, when ``algebra`` is given, a
    quotient coordinate dict of that presented algebra.
    """
    if isinstance(v, GradedLieElement):
        return _act_free(sigma, v)
    if algebra is None:
        raise TypeError("quotient coordinates need the presented algebra")
    return algebra.reduce(_act_free(sigma, algebra.lift(v)))


def ideal_closure_violations(q: PresentedLie) -> list[str]:
    """Brackets of free basis elements with the ideal that escape the ideal."""
    free = q.free
    problems = []
    for d, basis in q.ideal.items():
        words = free.basis_by_degree[d]
        for row in basis.rows.values():
            elem = GradedLieElement(free, {words[k]: c for k, c in row.items()})
            for w in free.basis:
                if free.word_degree(w) + d > free.truncation:
                    continue
                br = free.bracket(free.basis_element(w), elem)
                if br and not q.in_ideal(br):
                    problems.append(f"[{free.label(w)}, ideal degree {d}] leaves the ideal")
    return problems
