"""Seeded verification suites shared by the command line and the tests."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from . import corpus
from .bar import BarComplex, bar_differential, ground_module, random_bar_element, regular_module
from .braid_kz import BraidWord, braid_holonomy, check_equivariance
from .envelope import is_grouplike
from .free_lie import FreeLieAlgebra, witt_dimension
from .groups import symmetric_group
from .relcomp import peter_weyl_check, young_irreps
from .transport import (
    CoordinateMap,
    CoveringSpace,
    PolyForm,
    iterated_integral,
    iterated_integral_with_coeff,
    prefix_integrals,
    random_polynomial_path,
)

__all__ = ["CaseResult", "SUITES", "run_suite", "ChenInstance", "chen_instance", "shuffle_error", "inverse_error", "composition_error", "swap_cover"]


@dataclass
class CaseResult:
    suite: str
    case: str
    passed: bool
    value: float | str

    def line(self) -> str:
        v = f"{self.value:.12g}" if isinstance(self.value, float) else str(self.value)
        return f"{self.suite:16s} {self.case:40s} {'PASS' if self.passed else 'FAIL'} {v}"


# -- Chen identities --------------------------------------------------------


def swap_cover() -> CoveringSpace:
    """C^2 covering its quotient by the coordinate swap, based at (0, 1)."""
    S2 = symmetric_group(2)
    return CoveringSpace(S2, {g: CoordinateMap(g) for g in S2.elements}, [0.0, 1.0])


@dataclass
class ChenInstance:
    cover: CoveringSpace
    gamma: object
    mu: object
    forms: list
    phi: dict
    psi: dict


def _random_form(rng: np.random.Generator, degree: int = 2) -> PolyForm:
    coeffs = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            coeffs[a, b] = complex(rng.standard_normal(), rng.standard_normal()) / (1 + a + b)
    return PolyForm(2, int(rng.integers(0, 2)), coeffs)


def chen_instance(rng: np.random.Generator, letters: int = 3) -> ChenInstance:
    cover = swap_cover()
    G = cover.group
    ends = [cover.deck[g].apply(cover.basepoint) for g in G.elements]
    gamma = random_polynomial_path(rng, cover.basepoint, ends[int(rng.integers(0, 2))], 3, 0.4)
    mu = random_polynomial_path(rng, cover.basepoint, ends[int(rng.integers(0, 2))], 3, 0.4)
    forms = [_random_form(rng) for _ in range(letters)]
    phi = {g: complex(1 + rng.random(), rng.random()) for g in G.elements}
    psi = {g: complex(1 + rng.random(), rng.random()) for g in G.elements}
    return ChenInstance(cover, gamma, mu, forms, phi, psi)


def _residual(terms: list[complex]) -> float:
    """Normwise relative residual of an identity written as ``sum(terms) == 0``.

    Dividing by the summed magnitudes keeps the measure meaningful when the
    terms cancel, as they do for nearly closed loops.
    """
    scale = sum(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale > 0 else 0.0


def shuffle_error(inst: ChenInstance, p: int = 2, tol: float = 1e-10) -> float:
    cover, gamma, w = inst.cover, inst.gamma, inst.forms
    lhs = iterated_integral_with_coeff(gamma, w[:p], inst.phi, cover, tol) * iterated_integral_with_coeff(
        gamma, w[p:], inst.psi, cover, tol
    )
    prod = {g: inst.phi[g] * inst.psi[g] for g in cover.group.elements}
    r = len(w)
    terms = [lhs]
    for slots in combinations(range(r), p):
        left, right = iter(w[:p]), iter(w[p:])
        word = [next(left) if s in slots else next(right) for s in range(r)]
        terms.append(-iterated_integral_with_coeff(gamma, word, prod, cover, tol))
    return _residual(terms)


def inverse_error(inst: ChenInstance, tol: float = 1e-10) -> float:
    cover, gamma, w = inst.cover, inst.gamma, inst.forms
    G = cover.group
    lhs = iterated_integral_with_coeff(cover.inverse(gamma), w, inst.phi, cover, tol)
    g = cover.monodromy_of(gamma)
    translated = cover.translate(G.inv(g), list(reversed(w)))
    antipode = {h: inst.phi[G.inv(h)] for h in G.elements}
    rhs = (-1) ** len(w) * iterated_integral_with_coeff(gamma, translated, antipode, cover, tol)
    return _residual([lhs, -rhs])


def composition_error(inst: ChenInstance, tol: float = 1e-10) -> float:
    cover, gamma, mu, w = inst.cover, inst.gamma, inst.mu, inst.forms
    G = cover.group
    lhs = iterated_integral_with_coeff(cover.concat(gamma, mu), w, inst.phi, cover, tol)
    g = cover.monodromy_of(gamma)
    m = cover.monodromy_of(mu)
    heads = prefix_integrals(gamma, w, tol)
    terms = [lhs]
    for i in range(len(w) + 1):
        tail = iterated_integral(mu, cover.translate(g, w[i:]), tol)
        # Delta_S(phi) = sum over h k = target of phi(target) e_h (x) e_k
        for target, value in inst.phi.items():
            for h in G.elements:
                k = G.mul(G.inv(h), target)
                if h == g and k == m:
                    terms.append(-value * heads[i] * tail)
    return _residual(terms)


# -- suites -----------------------------------------------------------------


def _suite_d2(seed: int) -> list[CaseResult]:
    out = []
    rng = random.Random(seed)
    for model in [corpus.circle(), corpus.wedge(2), corpus.circle_with_cell(), corpus.heisenberg()]:
        for left, right in [("ground", "ground"), ("regular", "regular")]:
            B = BarComplex(
                model,
                ground_module(model) if left == "ground" else regular_module(model),
                ground_module(model) if right == "ground" else regular_module(model),
            )
            bad = sum(1 for _ in range(100) if bar_differential(bar_differential(random_bar_element(B, rng))))
            out.append(CaseResult("d2", f"{model.name} {left}/{right}", bad == 0, f"{bad} nonzero of 100"))
    return out


def _chen_suite(name: str, check: Callable, seed: int, count: int = 10, threshold: float = 1e-8) -> list[CaseResult]:
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        err = check(chen_instance(rng))
        out.append(CaseResult(name, f"instance {k}", err <= threshold, float(err)))
    return out


def _suite_grouplike(seed: int) -> list[CaseResult]:
    rng = random.Random(seed)
    out = []
    for k in range(5):
        n = rng.choice([2, 3])
        word = BraidWord(n, tuple((rng.randint(1, n - 1), rng.choice([1, -1])) for _ in range(rng.randint(1, 4))))
        el = braid_holonomy(word, 3)
        ok = is_grouplike(el.u, 1e-8)
        out.append(CaseResult("grouplike", f"B{n} {word}", ok, "grouplike" if ok else "not grouplike"))
    return out


def _suite_equivariance(seed: int) -> list[CaseResult]:
    out = []
    for n in (2, 3, 4):
        ok, bad = check_equivariance(n)
        out.append(CaseResult("equivariance", f"n={n}", ok, f"{len(bad)} failing permutations"))
    return out


def _suite_braid(seed: int) -> list[CaseResult]:
    out = []
    pairs = [(3, "s1 s2 s1", "s2 s1 s2", 4), (4, "s1 s3", "s3 s1", 3), (4, "s2 s3 s2", "s3 s2 s3", 3)]
    for n, a, b, N in pairs:
        d = braid_holonomy(BraidWord.parse(n, a), N).distance(braid_holonomy(BraidWord.parse(n, b), N))
        out.append(CaseResult("braid-relations", f"B{n} {a} = {b}", d <= 1e-7, float(d)))
    return out


def _suite_peter_weyl(seed: int) -> list[CaseResult]:
    out = []
    for n in (2, 3, 4):
        irreps = young_irreps(n)
        rep = peter_weyl_check(irreps[0].group, irreps)
        out.append(CaseResult("peter-weyl", f"S{n}", rep.ok, f"sum of squares {rep.sum_of_squares}, rank {rep.entry_rank}"))
    return out


def _suite_witt(seed: int) -> list[CaseResult]:
    out = []
    for k, N in [(2, 5), (3, 4)]:
        L = FreeLieAlgebra([(f"x{i}", 1) for i in range(k)], N)
        expected = tuple(witt_dimension(k, d) for d in range(1, N + 1))
        out.append(CaseResult("witt", f"{k} generators to degree {N}", L.dims() == expected, str(L.dims())))
    return out


SUITES: dict[str, Callable[[int], list[CaseResult]]] = {
    "d2": _suite_d2,
    "shuffle": lambda seed: _chen_suite("shuffle", shuffle_error, seed),
    "inverse": lambda seed: _chen_suite("inverse", inverse_error, seed),
    "composition": lambda seed: _chen_suite("composition", composition_error, seed),
    "grouplike": _suite_grouplike,
    "equivariance": _suite_equivariance,
    "braid-relations": _suite_braid,
    "peter-weyl": _suite_peter_weyl,
    "witt": _suite_witt,
}


def run_suite(name: str, seed: int = 0) -> list[CaseResult]:
    if name == "all":
        return [r for key in SUITES for r in SUITES[key](seed)]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return SUITES[name](seed)
