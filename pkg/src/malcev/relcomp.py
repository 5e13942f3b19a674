"""The finite reductive layer: irreps, Peter-Weyl, semidirect products."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .bar import CoefficientCoalgebra, DGAModel, H0Result, act_on_bar, h0, indecomposables_and_cobracket
from .envelope import COMPLEX, RATIONAL, Envelope, TruncatedSeries, is_grouplike
from .exactla import CoordinateSolver, RatMatrix, kernel_basis, quotient_basis, rank
from .free_lie import GeneratorAction, GradedNilpotentLie, PresentedLie, act
from .groups import FiniteGroup, symmetric_group
from .transport import CoveringSpace, LieValuedOneForm, PiecewisePath, transport, DEFAULT_TOL, DlogForm

__all__ = [
    "Irrep",
    "young_irreps",
    "cyclic_irreps",
    "partitions",
    "peter_weyl_check",
    "LieAutomorphism",
    "SemidirectElement",
    "semidirect_multiply",
    "adjoint",
    "equivariance_certificate",
    "relative_rep",
    "lie_from_coordinate_ring",
    "q1_representation",
    "isotypic_dims_h1",
    "invariant_cohomology_dim",
    "character_multiplicity",
]

Matrix = list  # list of rows


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0) if isinstance(a[0][0], Fraction) else 0) for j in range(p)] for i in range(n)]


def _identity(n: int, exact: bool = True) -> Matrix:
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0 + 0j, 0j)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


class Irrep:
    """A representation of a finite group by matrices acting on columns."""

    def __init__(self, group: FiniteGroup, matrices: Mapping, label: str = ""):
        self.group = group
        self.matrices = {g: [list(row) for row in matrices[g]] for g in group.elements}
        self.dim = len(self.matrices[group.identity])
        self.label = label or f"dim{self.dim}"
        self.exact = all(isinstance(x, (int, Fraction)) for m in self.matrices.values() for row in m for x in row)
        if self.exact:
            self.matrices = {g: [[Fraction(x) for x in row] for row in m] for g, m in self.matrices.items()}

    def __repr__(self):
        return f"Irrep({self.label}, dim={self.dim})"

    def character(self, g) -> complex | Fraction:
        m = self.matrices[g]
        return sum((m[i][i] for i in range(self.dim)), Fraction(0) if self.exact else 0j)

    def is_homomorphism(self, tol: float = 1e-10) -> bool:
        G = self.group
        for g in G.elements:
            for h in G.elements:
                lhs = self.matrices[G.mul(g, h)]
                rhs = _matmul(self.matrices[g], self.matrices[h])
                if self.exact:
                    if lhs != rhs:
                        return False
                elif np.max(np.abs(np.array(lhs, complex) - np.array(rhs, complex))) > tol:
                    return False
        return True

    def character_norm(self):
        return character_inner(self, self)


def character_inner(a: Irrep, b: Irrep):
    G = a.group
    total = sum(complex(a.character(g)) * np.conj(complex(b.character(g))) for g in G.elements) / G.order
    if a.exact and b.exact:
        exact = sum((a.character(g) * b.character(g) for g in G.elements), Fraction(0)) / G.order
        return exact  # rational characters are real
    return total


def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return out


def _standard_tableaux(shape: Sequence[int]) -> list[dict[int, tuple[int, int]]]:
    """Standard tableaux as maps value -> (row, col), values 0..n-1."""
    n = sum(shape)
    out = []

    def fill(k: int, rows: list[int], pos: dict):
        if k == n:
            out.append(dict(pos))
            return
        for r in range(len(shape)):
            c = rows[r]
            if c < shape[r] and (r == 0 or rows[r - 1] > c):
                rows[r] += 1
                pos[k] = (r, c)
                fill(k + 1, rows, pos)
                rows[r] -= 1
                del pos[k]

    fill(0, [0] * len(shape), {})
    return out


def young_irreps(n: int) -> list[Irrep]:
    """All irreps of the symmetric group on ``range(n)`` in Young's seminormal form."""
    G = symmetric_group(n)
    out = []
    for shape in partitions(n):
        tabs = _standard_tableaux(shape)
        key = {tuple(sorted(t.items())): i for i, t in enumerate(tabs)}
        d = len(tabs)
        gens = {}
        for k in range(n - 1):
            m = [[Fraction(0)] * d for _ in range(d)]
            for i, t in enumerate(tabs):
                (r1, c1), (r2, c2) = t[k], t[k + 1]
                if r1 == r2:
                    m[i][i] = Fraction(1)
                elif c1 == c2:
                    m[i][i] = Fraction(-1)
                else:
                    # axial distance; the pair (T, s_k T) spans a 2x2 block
                    axial = Fraction((c2 - r2) - (c1 - r1))
                    swapped = dict(t)
                    swapped[k], swapped[k + 1] = t[k + 1], t[k]
                    j = key[tuple(sorted(swapped.items()))]
                    m[i][i] = 1 / axial
                    m[j][i] = 1 - 1 / axial**2 if axial > 0 else Fraction(1)
            perm = list(range(n))
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            gens[tuple(perm)] = m
        mats = {G.identity: _identity(d)}
        frontier = [G.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for s, m in gens.items():
                    gs = G.mul(g, s)
                    if gs not in mats:
                        mats[gs] = _matmul(mats[g], m)
                        nxt.append(gs)
            frontier = nxt
        out.append(Irrep(G, mats, label="(" + ",".join(map(str, shape)) + ")"))
    return out


def cyclic_irreps(group: FiniteGroup) -> list[Irrep]:
    """Characters of a cyclic group on ``range(n)`` (as built by ``cyclic_group``)."""
    n = group.order
    out = []
    for k in range(n):
        mats = {g: [[np.exp(2j * np.pi * k * g / n)]] for g in group.elements}
        if k == 0:
            mats = {g: [[Fraction(1)]] for g in group.elements}
        out.append(Irrep(group, mats, label=f"chi{k}"))
    return out


@dataclass
class PeterWeylReport:
    order: int
    dims: tuple[int, ...]
    sum_of_squares: int
    entry_rank: int
    irreducible: bool
    pairwise_distinct: bool
    homomorphisms: bool

    @property
    def ok(self) -> bool:
        return (
            self.sum_of_squares == self.order
            and self.entry_rank == self.order
            and self.irreducible
            and self.pairwise_distinct
            and self.homomorphisms
        )

    @property
    def deficit(self) -> int:
        return self.order - self.sum_of_squares


def peter_weyl_check(group: FiniteGroup, irreps: Sequence[Irrep]) -> PeterWeylReport:
    """Check that the matrix entries of ``irreps`` form a basis of functions on the group."""
    homs = all(r.is_homomorphism() for r in irreps)
    irreducible = all(abs(complex(r.character_norm()) - 1) < 1e-9 for r in irreps)
    distinct = all(
        abs(complex(character_inner(irreps[a], irreps[b]))) < 1e-9
        for a in range(len(irreps))
        for b in range(a + 1, len(irreps))
    )
    rows = []
    for r in irreps:
        for i in range(r.dim):
            for j in range(r.dim):
                rows.append([r.matrices[g][i][j] for g in group.elements])
    if all(r.exact for r in irreps):
        entry_rank = rank(RatMatrix.from_rows(rows, group.order)) if rows else 0
    else:
        entry_rank = int(np.linalg.matrix_rank(np.array(rows, dtype=complex), tol=1e-9)) if rows else 0
    dims = tuple(r.dim for r in irreps)
    return PeterWeylReport(group.order, dims, sum(d * d for d in dims), entry_rank, irreducible, distinct, homs)


# -- automorphisms and the semidirect product -------------------------------


class LieAutomorphism:
    """A graded automorphism of a Lie algebra given on basis vectors."""

    def __init__(self, lie: GradedNilpotentLie, images: Mapping[int, Mapping[int, Fraction]], label: str = ""):
        self.lie = lie
        self.images = {i: dict(images.get(i, {})) for i in range(lie.dim)}
        self.label = label

    @classmethod
    def from_generator_action(cls, lie: PresentedLie, sigma: GeneratorAction) -> "LieAutomorphism":
        return cls(lie, {i: act(sigma, {i: Fraction(1)}, lie) for i in range(lie.dim)}, sigma.label)

    def apply(self, vec: Mapping[int, object]) -> dict:
        out: dict = {}
        for i, c in vec.items():
            for j, e in self.images[i].items():
                s = out.get(j, 0) + c * e
                if s:
                    out[j] = s
                else:
                    out.pop(j, None)
        return out

    def check(self) -> list[str]:
        problems = []
        L = self.lie
        for i in range(L.dim):
            for j in self.images[i]:
                if L.degrees[j] != L.degrees[i]:
                    problems.append(f"image of {L.labels[i]} is not homogeneous of the same degree")
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                lhs = self.apply(L.bracket_basis(i, j))
                rhs = L.bracket(self.images[i], self.images[j])
                if lhs != rhs:
                    problems.append(f"bracket of {L.labels[i]}, {L.labels[j]} is not preserved")
        return problems


class _AdjointCache:
    def __init__(self, env: Envelope, auto: LieAutomorphism):
        self.env = env
        self.auto = auto
        self.monomials: dict = {}

    def image(self, mono: tuple) -> TruncatedSeries:
        got = self.monomials.get(mono)
        if got is None:
            env = self.env
            got = env.one(RATIONAL)
            for i in mono:
                got = got * env.from_lie(self.auto.images[i], RATIONAL)
            self.monomials[mono] = got
        return got


_ADJ: dict = {}


def adjoint(auto: LieAutomorphism, series: TruncatedSeries) -> TruncatedSeries:
    """Extend a Lie automorphism multiplicatively to the truncated envelope."""
    env = series.algebra
    key = (id(env), id(auto))
    cache = _ADJ.get(key)
    if cache is None or cache.env is not env or cache.auto is not auto:
        cache = _ADJ[key] = _AdjointCache(env, auto)
    out: dict = {}
    for mono, c in series.terms.items():
        for m, e in cache.image(mono).terms.items():
            out[m] = out.get(m, 0) + c * e
    return TruncatedSeries(env, out, series.field)


@dataclass
class SemidirectElement:
    """``(s, u)`` in S x| U, multiplied as ``(s1 s2, Ad(s2^-1) u1 . u2)``."""

    s: object
    u: TruncatedSeries
    group: FiniteGroup
    actions: Mapping  # group element -> LieAutomorphism
    tol: float = 1e-8

    def __post_init__(self):
        if self.s not in self.group:
            raise ValueError(f"{self.s!r} is not a group element")
        if not is_grouplike(self.u, self.tol):
            raise ValueError("series is not grouplike within tolerance")

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        return semidirect_multiply(self, other)

    def inverse(self) -> "SemidirectElement":
        G = self.group
        s_inv = G.inv(self.s)
        # (s, u)^-1 = (s^-1, Ad(s) u^-1)
        u_inv = adjoint(self.actions[self.s], self.u.inverse())
        return SemidirectElement(s_inv, u_inv, G, self.actions, self.tol)

    def distance(self, other: "SemidirectElement") -> float:
        if self.s != other.s:
            return float("inf")
        return self.u.distance(other.u)

    @classmethod
    def identity(cls, group: FiniteGroup, env: Envelope, actions: Mapping, field: str = COMPLEX):
        return cls(group.identity, env.one(field), group, actions)


def semidirect_multiply(a: SemidirectElement, b: SemidirectElement) -> SemidirectElement:
    if a.group is not b.group or a.u.algebra is not b.u.algebra:
        raise ValueError("elements of different semidirect products")
    G = a.group
    u = adjoint(a.actions[G.inv(b.s)], a.u) * b.u
    return SemidirectElement(G.mul(a.s, b.s), u, G, a.actions, max(a.tol, b.tol))


# -- relative completion representation --------------------------------------


def _form_table(omega: LieValuedOneForm) -> dict:
    table: dict = {}
    for w, vec in omega.terms:
        if not isinstance(w, DlogForm):
            raise TypeError("equivariance is checked for dlog letters")
        bucket = table.setdefault(w.key(), {})
        for i, c in vec.items():
            s = bucket.get(i, 0) + c
            if s:
                bucket[i] = s
            else:
                bucket.pop(i)
    return {k: v for k, v in table.items() if v}


def equivariance_certificate(omega: LieValuedOneForm, cover: CoveringSpace, actions: Mapping) -> dict:
    """Group elements where ``deck(g)^* omega != Ad(g) omega`` with the differing letters."""
    failures = {}
    for g in cover.group.elements:
        lhs = _form_table(omega.pullback(cover.deck[g]))
        rhs = _form_table(LieValuedOneForm(omega.lie, [(w, actions[g].apply(v)) for w, v in omega.terms], omega.truncation))
        if lhs != rhs:
            keys = sorted(set(lhs) ^ set(rhs) | {k for k in set(lhs) & set(rhs) if lhs[k] != rhs[k]}, key=str)
            failures[g] = keys
    return failures


def relative_rep(
    lift: PiecewisePath,
    omega: LieValuedOneForm,
    cover: CoveringSpace,
    actions: Mapping,
    tol: float = DEFAULT_TOL,
    check: bool = True,
) -> SemidirectElement:
    """``gamma -> (rho(gamma), Ad(rho(gamma)^-1) T)`` for the lift of a loop."""
    if check:
        bad = equivariance_certificate(omega, cover, actions)
        if bad:
            raise ValueError(f"form is not equivariant: {bad}")
    g = cover.monodromy_of(lift)
    T = transport(lift, omega, tol).series
    return SemidirectElement(g, adjoint(actions[cover.group.inv(g)], T), cover.group, actions)


# -- Lie algebras from coordinate rings -------------------------------------


def lie_from_coordinate_ring(result: H0Result, cap: int | None = None) -> GradedNilpotentLie:
    """Associated graded dual Lie algebra of the indecomposables of H^0."""
    return indecomposables_and_cobracket(result, cap).dual_lie()


def q1_representation(model: DGAModel, coalgebra: CoefficientCoalgebra, cap: int = 2) -> Irrep:
    """The group action on the bar-degree-1 indecomposables Q_1 (not nec. irreducible)."""
    result = h0(model, None, cap)
    data = indecomposables_and_cobracket(result)
    level1 = [k for k, s in enumerate(data.levels) if s == 1]
    pos = {k: a for a, k in enumerate(level1)}
    G = coalgebra.group
    mats = {}
    for g in G.elements:
        m = [[Fraction(0)] * len(level1) for _ in level1]
        for a, k in enumerate(level1):
            image = act_on_bar(coalgebra, g, data.representatives[k])
            for b, c in data.to_q(image).items():
                if b not in pos:
                    raise ValueError("action does not preserve the bar filtration")
                m[pos[b]][a] = c
        mats[g] = m
    return Irrep(G, mats, label="Q1")


def character_multiplicity(rep: Irrep, irrep: Irrep, dual: bool = False):
    """Multiplicity of ``irrep`` in ``rep`` (or in its contragredient)."""
    G = rep.group
    total = 0
    for g in G.elements:
        chi = rep.character(G.inv(g) if dual else g)
        total += complex(chi) * np.conj(complex(irrep.character(g)))
    m = total / G.order
    if abs(m.imag) > 1e-9 or abs(m.real - round(m.real)) > 1e-9:
        raise ValueError(f"non-integral multiplicity {m}")
    return int(round(m.real))


def isotypic_dims_h1(model: DGAModel, coalgebra: CoefficientCoalgebra, irreps: Sequence[Irrep]) -> dict[str, int]:
    """Isotypic dimensions of Gr H_1(U), the dual of Q_1."""
    q1 = q1_representation(model, coalgebra)
    return {v.label: character_multiplicity(q1, v, dual=True) * v.dim for v in irreps}


def _cohomology_rep(model: DGAModel, coalgebra: CoefficientCoalgebra, k: int) -> Irrep:
    """The group action on H^k of the model, on a basis of chosen representatives."""
    src = model.in_degree(k)
    tgt = model.in_degree(k + 1)
    prev = model.in_degree(k - 1)
    si = {l: i for i, l in enumerate(src)}
    ti = {l: i for i, l in enumerate(tgt)}
    dk = RatMatrix(len(tgt), len(src), {(ti[t], j): c for j, l in enumerate(src) for t, c in model.d(l).items()})
    cycles = kernel_basis(dk) if src else []
    boundaries = [{si[t]: c for t, c in model.d(l).items()} for l in prev]
    solver = CoordinateSolver(cycles, len(src)) if cycles else None
    bcoords = [solver.solve(b) for b in boundaries] if solver else []
    reps, proj = quotient_basis(len(cycles), [b for b in bcoords if b])
    G = coalgebra.group
    mats = {}
    for g in G.elements:
        m = [[Fraction(0)] * len(reps) for _ in reps]
        for a, r in enumerate(reps):
            vec = {}
            for j, c in cycles[r].items():
                for t, e in coalgebra.act(g, src[j]).items():
                    vec[si[t]] = vec.get(si[t], 0) + c * e
            coords = solver.solve({j: c for j, c in vec.items() if c})
            for b, c in proj.apply(coords).items():
                m[b][a] = c
        mats[g] = m
    return Irrep(G, mats, label=f"H{k}")


def invariant_cohomology_dim(model: DGAModel, coalgebra: CoefficientCoalgebra, irrep: Irrep, k: int) -> int:
    """dim H^k of the invariant complex ``(A (x) V)^S``: cohomology with local coefficients."""

    def invariants(deg: int) -> tuple[list, np.ndarray]:
        labels = model.in_degree(deg)
        basis = [(l, i) for l in labels for i in range(irrep.dim)]
        idx = {b: n for n, b in enumerate(basis)}
        if not basis:
            return basis, np.zeros((0, 0), dtype=complex)
        blocks = []
        for g in coalgebra.group.elements:
            M = np.zeros((len(basis), len(basis)), dtype=complex)
            R = np.array(irrep.matrices[g], dtype=complex)
            for (l, i), col in idx.items():
                for t, e in coalgebra.act(g, l).items():
                    for j in range(irrep.dim):
                        M[idx[t, j], col] += float(e) * R[j, i]
            blocks.append(M - np.eye(len(basis)))
        stacked = np.vstack(blocks)
        _, sv, vh = np.linalg.svd(stacked)
        null = vh[np.sum(sv > 1e-9):].conj().T
        return basis, null

    def d_matrix(deg: int) -> np.ndarray:
        src = [(l, i) for l in model.in_degree(deg) for i in range(irrep.dim)]
        tgt = [(l, i) for l in model.in_degree(deg + 1) for i in range(irrep.dim)]
        ti = {b: n for n, b in enumerate(tgt)}
        D = np.zeros((len(tgt), len(src)), dtype=complex)
        for col, (l, i) in enumerate(src):
            for t, c in model.d(l).items():
                D[ti[t, i], col] += float(c)
        return D

    def mrank(m: np.ndarray) -> int:
        return int(np.linalg.matrix_rank(m, tol=1e-9)) if m.size else 0

    _, Wk = invariants(k)
    _, Wprev = invariants(k - 1)
    dim_w = Wk.shape[1] if Wk.size else 0
    z = dim_w - (mrank(d_matrix(k) @ Wk) if dim_w else 0)
    b = mrank(d_matrix(k - 1) @ Wprev) if Wprev.size else 0
    return z - b
