"""Braid groups acting through the KZ connection on the Drinfeld-Kohno algebra.

Particles sit at ``1, ..., n`` on the real line. The lift of a braid word to
ordered configuration space is built from generator arcs; coordinate k is
always the position of particle k, so the lift ends at the basepoint
permuted by the word's image in the symmetric group.

The form carries no ``1/(2 pi i)`` normalization, so holonomy logarithms
have ``2 pi i`` factors.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np

from .envelope import log
from .free_lie import GeneratorAction, LiePresentation, PresentedLie, nilpotent_quotient
from .groups import FiniteGroup, compose, symmetric_group
from .relcomp import LieAutomorphism, SemidirectElement, equivariance_certificate, relative_rep
from .transport import (
    ArcMove,
    ArcSegment,
    CoordinateMap,
    CoveringSpace,
    DlogForm,
    IntegrabilityResult,
    LieValuedOneForm,
    PiecewisePath,
    PolynomialSegment,
    check_integrability,
    DEFAULT_TOL,
)

__all__ = [
    "BraidWord",
    "KZSystem",
    "drinfeld_kohno",
    "kz_system",
    "generator_path",
    "word_path",
    "braid_holonomy",
    "check_equivariance",
    "linking_numbers",
    "pair_label",
    "pure_braid_degree_one",
    "basepoint",
]


def pair_label(i: int, j: int, n: int) -> str:
    """Generator name for the unordered pair {i, j} (1-based)."""
    i, j = min(i, j), max(i, j)
    return f"X{i}{j}" if n < 10 else f"X{i}_{j}"


def _relations(n: int, free) -> list:
    X = lambda a, b: free.generator(pair_label(a, b, n))
    rels = []
    pairs = list(combinations(range(1, n + 1), 2))
    for (i, j) in pairs:
        for k in range(1, n + 1):
            if k in (i, j):
                continue
            rels.append(free.bracket(X(i, j), X(i, k) + X(j, k)))
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            if not set(pairs[a]) & set(pairs[b]):
                rels.append(free.bracket(X(*pairs[a]), X(*pairs[b])))
    return rels


def drinfeld_kohno(n: int, N: int) -> PresentedLie:
    """The degree-<=N quotient of the free Lie algebra on X_ij by the
    infinitesimal braid relations."""
    if n < 2 or N < 1:
        raise ValueError("need n >= 2 and N >= 1")
    gens = tuple((pair_label(i, j, n), 1) for i, j in combinations(range(1, n + 1), 2))
    free = LiePresentation(gens, (), N).free_algebra()
    pres = LiePresentation(gens, tuple(_relations(n, free)), N)
    return nilpotent_quotient(pres)


def _free_lie(n: int, N: int) -> PresentedLie:
    gens = tuple((pair_label(i, j, n), 1) for i, j in combinations(range(1, n + 1), 2))
    return nilpotent_quotient(LiePresentation(gens, (), N))


_WORD_TOKEN = re.compile(r"^s(\d+)(\^(-?\d+))?$")


@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators; ``letters`` holds (index, +-1), 1-based."""

    n: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for i, e in self.letters:
            if not 1 <= i < self.n:
                raise ValueError(f"generator s{i} out of range for {self.n} strands")
            if e not in (1, -1):
                raise ValueError("exponents must be +1 or -1")

    @classmethod
    def parse(cls, n: int, text: str) -> "BraidWord":
        """Parse ``"s1 s2 s1^-1"``; ``s2^3`` expands to three letters."""
        letters = []
        for tok in text.replace(",", " ").split():
            m = _WORD_TOKEN.match(tok)
            if not m:
                raise ValueError(f"cannot parse braid letter {tok!r}")
            i = int(m.group(1))
            power = int(m.group(3)) if m.group(3) else 1
            if power == 0:
                continue
            letters.extend([(i, 1 if power > 0 else -1)] * abs(power))
        return cls(n, tuple(letters))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.n != self.n:
            raise ValueError("different strand counts")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple((i, -e) for i, e in reversed(self.letters)))

    def permutation(self) -> tuple[int, ...]:
        """Image in the symmetric group on range(n), composed left to right."""
        p = tuple(range(self.n))
        for i, _ in self.letters:
            t = list(range(self.n))
            t[i - 1], t[i] = t[i], t[i - 1]
            p = compose(p, tuple(t))
        return p

    def __str__(self):
        return " ".join(f"s{i}" if e == 1 else f"s{i}^-1" for i, e in self.letters) or "(empty)"


def basepoint(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=complex)


def generator_path(i: int, n: int, geometry: str = "arc") -> PiecewisePath:
    """Lift of sigma_i from the basepoint: particles at positions i, i+1 swap
    counterclockwise about their midpoint.

    ``geometry="box"`` realizes the same braid with straight segments
    through the points at height +-1/2.
    """
    if not 1 <= i < n:
        raise ValueError(f"generator index {i} out of range")
    p = basepoint(n)
    a, b = i - 1, i  # 0-based coordinates at positions i, i+1
    mid = (p[a] + p[b]) / 2
    if geometry == "arc":
        moves = [ArcMove(b, mid, 0.5, 0.0, np.pi), ArcMove(a, mid, 0.5, np.pi, 2 * np.pi)]
        return PiecewisePath([ArcSegment(p, moves)])
    if geometry == "box":
        up, down = 0.5j, -0.5j
        corners_b = [p[b], p[b] + up, p[a] + up, p[a]]
        corners_a = [p[a], p[a] + down, p[b] + down, p[b]]
        segments = []
        for k in range(3):
            start = p.copy()
            end = p.copy()
            start[a], start[b] = corners_a[k], corners_b[k]
            end[a], end[b] = corners_a[k + 1], corners_b[k + 1]
            segments.append(PolynomialSegment.line(start, end))
        return PiecewisePath(segments)
    raise ValueError(f"unknown geometry {geometry!r}")


class KZSystem:
    """The KZ form on the Drinfeld-Kohno algebra with its symmetric-group data."""

    def __init__(self, n: int, N: int, free: bool = False):
        self.n = n
        self.N = N
        self.lie = _free_lie(n, N) if free else drinfeld_kohno(n, N)
        self.group: FiniteGroup = symmetric_group(n)
        self.pairs = list(combinations(range(1, n + 1), 2))
        terms = []
        for i, j in self.pairs:
            grad = np.zeros(n, dtype=complex)
            grad[i - 1], grad[j - 1] = 1, -1
            terms.append((DlogForm(0, grad), self.lie.basis_vector(pair_label(i, j, n))))
        self.omega = LieValuedOneForm(self.lie, terms, N)
        deck = {g: CoordinateMap(tuple(g)) for g in self.group.elements}
        self.cover = CoveringSpace(self.group, deck, basepoint(n))

    @cached_property
    def actions(self) -> dict:
        """Ad(sigma) X_ij = X_sigma(i) sigma(j) on the quotient basis."""
        gens = [pair_label(i, j, self.n) for i, j in self.pairs]
        index = {name: k for k, name in enumerate(gens)}
        out = {}
        for g in self.group.elements:
            images = []
            for i, j in self.pairs:
                images.append((index[pair_label(g[i - 1] + 1, g[j - 1] + 1, self.n)], 1))
            sigma = GeneratorAction(str(g), tuple(images))
            out[g] = LieAutomorphism.from_generator_action(self.lie, sigma)
        return out

    def word_path(self, word: BraidWord, geometry: str = "arc") -> PiecewisePath:
        return word_path(self, word, geometry)

    def integrability(self) -> IntegrabilityResult:
        return check_integrability(self.omega)


_SYSTEMS: dict = {}


def kz_system(n: int, N: int, free: bool = False) -> KZSystem:
    key = (n, N, free)
    if key not in _SYSTEMS:
        _SYSTEMS[key] = KZSystem(n, N, free)
    return _SYSTEMS[key]


def word_path(system: KZSystem, word: BraidWord, geometry: str = "arc") -> PiecewisePath:
    """Lift of a braid word to ordered configuration space from the basepoint."""
    if word.n != system.n:
        raise ValueError("word and system have different strand counts")
    cover = system.cover
    if not word.letters:
        return PiecewisePath([PolynomialSegment.constant(basepoint(system.n))])
    path = None
    for i, e in word.letters:
        piece = generator_path(i, system.n, geometry)
        if e == -1:
            piece = cover.inverse(piece)
        path = piece if path is None else cover.concat(path, piece)
    return path


def braid_holonomy(word: BraidWord, N: int, tol: float = DEFAULT_TOL, geometry: str = "arc") -> SemidirectElement:
    """Image of a braid in the semidirect product of the symmetric group with
    the truncated pure-braid envelope."""
    system = kz_system(word.n, N)
    path = word_path(system, word, geometry)
    element = relative_rep(path, system.omega, system.cover, system.actions, tol, check=False)
    expected = word.permutation()
    if element.s != expected:
        raise AssertionError(f"lift ends over {element.s}, expected {expected}")
    return element


def check_equivariance(n: int) -> tuple[bool, dict]:
    """Exhaustive check of ``sigma^* omega = Ad(sigma) omega`` over the symmetric group."""
    system = kz_system(n, 2)
    bad = equivariance_certificate(system.omega, system.cover, system.actions)
    return not bad, bad


def linking_numbers(word: BraidWord) -> dict[tuple[int, int], Fraction]:
    """Half-twist count per strand pair (1-based), by tracking strands combinatorially."""
    at = list(range(1, word.n + 1))  # strand at each position
    lk: dict = {}
    for i, e in word.letters:
        a, b = at[i - 1], at[i]
        key = (min(a, b), max(a, b))
        lk[key] = lk.get(key, 0) + Fraction(e, 2)
        at[i - 1], at[i] = b, a
    return {k: v for k, v in lk.items() if v}


def pure_braid_degree_one(element: SemidirectElement) -> dict[int, complex]:
    """Degree-1 part of log of the unipotent component."""
    L = log(element.u)
    lie = element.u.algebra.lie
    return {mono[0]: c for mono, c in L.terms.items() if len(mono) == 1 and lie.degrees[mono[0]] == 1}
