from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcev import corpus
from malcev.bar import h0
from malcev.braid_kz import kz_system
from malcev.envelope import COMPLEX, exp
from malcev.groups import cyclic_group, symmetric_group
from malcev.relcomp import (
    Irrep,
    LieAutomorphism,
    SemidirectElement,
    character_inner,
    character_multiplicity,
    cyclic_irreps,
    invariant_cohomology_dim,
    isotypic_dims_h1,
    lie_from_coordinate_ring,
    partitions,
    peter_weyl_check,
    q1_representation,
    relative_rep,
    young_irreps,
)
from malcev.transport import PiecewisePath, PolynomialSegment, envelope_for


def burnside_characters(G):
    """Character table by Burnside's class-algebra eigenvectors, from the multiplication table alone."""
    classes = G.conjugacy_classes()
    where = {g: i for i, c in enumerate(classes) for g in c}
    k = len(classes)
    # a[j][i][l] = #{(x, y) in C_i x C_j : x y = z} for a fixed z in C_l
    a = np.zeros((k, k, k))
    for j, cj in enumerate(classes):
        for i, ci in enumerate(classes):
            for x in ci:
                for y in cj:
                    z = G.mul(x, y)
                    if z == classes[where[z]][0]:
                        a[j, i, where[z]] += 1
    rng = np.random.default_rng(0)
    M = sum(rng.standard_normal() * a[j] for j in range(k))
    _, vecs = np.linalg.eig(M)
    sizes = np.array([len(c) for c in classes])
    table = []
    for v in vecs.T:
        omega = v / v[0]  # central character, equal to 1 on the identity class
        d = np.sqrt(G.order / np.sum(np.abs(omega) ** 2 / sizes))
        table.append(np.round((d * omega / sizes).real, 8))
    return classes, sorted(tuple(row) for row in table)


@pytest.mark.parametrize("n,order", [(2, 2), (3, 6), (4, 24)])
def test_peter_weyl(n, order):
    irreps = young_irreps(n)
    rep = peter_weyl_check(irreps[0].group, irreps)
    assert rep.sum_of_squares == order
    assert rep.entry_rank == order
    assert rep.ok and rep.deficit == 0


@pytest.mark.parametrize("n,dims", [(2, (1, 1)), (3, (1, 1, 2)), (4, (1, 1, 2, 3, 3))])
def test_irrep_dims_and_characters_match_burnside(n, dims):
    irreps = young_irreps(n)
    assert tuple(sorted(r.dim for r in irreps)) == dims
    G = irreps[0].group
    classes, oracle = burnside_characters(G)
    ours = sorted(tuple(np.round(float(r.character(c[0])), 8) for c in classes) for r in irreps)
    assert ours == oracle


def test_partitions():
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_missing_irrep_is_detected():
    irreps = young_irreps(3)[:-1]
    rep = peter_weyl_check(irreps[0].group, irreps)
    assert not rep.ok and rep.deficit == 1


def test_cyclic_group_characters():
    G = cyclic_group(5)
    irreps = cyclic_irreps(G)
    assert peter_weyl_check(G, irreps).ok
    assert abs(complex(character_inner(irreps[1], irreps[2]))) < 1e-12


def test_non_homomorphism_is_detected():
    G = symmetric_group(2)
    bad = Irrep(G, {G.elements[0]: [[1]], G.elements[1]: [[2]]})
    assert not bad.is_homomorphism()


# -- semidirect product ---------------------------------------------------------


def kz3():
    S = kz_system(3, 3)
    return S, envelope_for(S.lie, 3)


def grouplike(env, rng):
    vec = {i: complex(rng.standard_normal(), rng.standard_normal()) * 0.5 for i in range(env.lie.dim)}
    return exp(env.from_lie(vec, COMPLEX))


def test_automorphisms_preserve_brackets():
    S, _ = kz3()
    for g, auto in S.actions.items():
        assert auto.check() == [], g


def test_non_automorphism_is_flagged():
    S, _ = kz3()
    L = S.lie
    scaled = LieAutomorphism(L, {i: {i: Fraction(2)} for i in range(L.dim)})
    assert scaled.check()


def test_semidirect_identity_and_inverse():
    S, env = kz3()
    G = S.group
    rng = np.random.default_rng(5)
    e = SemidirectElement.identity(G, env, S.actions)
    for s in G.elements:
        x = SemidirectElement(s, grouplike(env, rng), G, S.actions)
        assert (e * x).distance(x) < 1e-12
        assert (x * x.inverse()).distance(e) < 1e-9
        one = SemidirectElement(s, env.one(COMPLEX), G, S.actions)
        back = SemidirectElement(G.inv(s), env.one(COMPLEX), G, S.actions)
        assert (one * back).distance(e) == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_semidirect_associativity(seed):
    S, env = kz3()
    G = S.group
    rng = np.random.default_rng(seed)
    a, b, c = (SemidirectElement(G.elements[rng.integers(0, 6)], grouplike(env, rng), G, S.actions) for _ in range(3))
    assert ((a * b) * c).distance(a * (b * c)) < 1e-8


def test_non_grouplike_rejected():
    S, env = kz3()
    x = env.from_lie({0: 1.0}, COMPLEX)
    with pytest.raises(ValueError):
        SemidirectElement(S.group.identity, env.one(COMPLEX) + x, S.group, S.actions)


def test_relative_rep_of_trivial_loops():
    S, env = kz3()
    e = SemidirectElement.identity(S.group, env, S.actions)
    const = PiecewisePath([PolynomialSegment.constant(S.cover.basepoint)])
    assert relative_rep(const, S.omega, S.cover, S.actions).distance(e) < 1e-12
    from malcev.braid_kz import BraidWord

    w = BraidWord.parse(3, "s1 s2^-1")
    there = S.word_path(w)
    loop = S.cover.concat(there, S.cover.inverse(there))
    assert relative_rep(loop, S.omega, S.cover, S.actions).distance(e) < 1e-8


# -- relative completion toy ----------------------------------------------------


def test_circle_with_sigma2_coefficients():
    model, coal = corpus.circle_sigma2()
    irreps = young_irreps(2)
    trivial, sign = irreps
    dims = isotypic_dims_h1(model, coal, irreps)
    assert dims[trivial.label] == 1 and dims[sign.label] == 0
    assert q1_representation(model, coal).dim == 1


@pytest.mark.parametrize("which", ["circle_sigma2", "wedge_swap"])
def test_isotypic_law_against_local_coefficients(which):
    model, coal = getattr(corpus, which)()
    irreps = young_irreps(2)
    dims = isotypic_dims_h1(model, coal, irreps)
    for v in irreps:
        # H^1 with coefficients in V equals Hom_S(H_1, V)
        assert dims[v.label] // v.dim == invariant_cohomology_dim(model, coal, v, 1)
    q1 = q1_representation(model, coal)
    assert sum(character_multiplicity(q1, v) * v.dim for v in irreps) == q1.dim


def test_lie_from_coordinate_ring_examples():
    assert lie_from_coordinate_ring(h0(corpus.circle(), bar_degree_cap=3)).dims() == (1, 0, 0)
    assert lie_from_coordinate_ring(h0(corpus.wedge(2), bar_degree_cap=3)).dims() == (2, 1, 2)
