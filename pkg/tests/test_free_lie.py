from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcev.braid_kz import drinfeld_kohno, pair_label
from malcev.free_lie import (
    FreeLieAlgebra,
    GeneratorAction,
    LiePresentation,
    act,
    ideal_closure_violations,
    is_lyndon,
    nilpotent_quotient,
    witt_dimension,
)


from oracles import necklace_count


@pytest.mark.parametrize("k,d", [(2, 1), (2, 4), (2, 6), (3, 3), (3, 4)])
def test_witt_formula_against_necklaces(k, d):
    assert witt_dimension(k, d) == necklace_count(k, d)


def test_free_dims_two_generators():
    L = FreeLieAlgebra([("x", 1), ("y", 1)], 4)
    assert L.dims() == (2, 1, 2, 3)
    assert all(is_lyndon(w) for w in L.basis)


def test_weighted_generators():
    L = FreeLieAlgebra([("x", 1), ("y", 2)], 4)
    # degree 3: [x,y]; degree 4: [x,[x,y]]
    assert L.dims() == (1, 1, 1, 1)


def random_element(L, draw):
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(L.basis), max_size=len(L.basis)))
    out = L.zero()
    for w, c in zip(L.basis, coeffs):
        if c:
            out = out + L.basis_element(w) * c
    return out


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_jacobi_and_antisymmetry(data):
    L = FreeLieAlgebra([("x", 1), ("y", 1), ("z", 1)], 4)
    x, y, z = (random_element(L, data.draw) for _ in range(3))
    br = L.bracket
    assert br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y)) == L.zero()
    assert br(x, y) + br(y, x) == L.zero()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_tensor_round_trip(data):
    L = FreeLieAlgebra([("x", 1), ("y", 1)], 5)
    x = random_element(L, data.draw)
    assert L.from_tensor(L.to_tensor(x)) == x


def test_non_lie_polynomial_rejected():
    L = FreeLieAlgebra([("x", 1), ("y", 1)], 3)
    with pytest.raises(ValueError):
        L.from_tensor({(0, 1): Fraction(1)})


def _p3_oracle_dims(N):
    # p_3 splits as a free Lie algebra on two generators plus a central line
    return tuple(necklace_count(2, d) + (1 if d == 1 else 0) for d in range(1, N + 1))


def test_p3_dims_against_splitting_oracle():
    q = drinfeld_kohno(3, 4)
    assert q.dims() == _p3_oracle_dims(4) == (3, 1, 2, 3)


def test_p3_ideal_lies_in_kernel_of_splitting_map():
    q = drinfeld_kohno(3, 4)
    free = q.free
    # X12 -> a, X13 -> b, X23 -> -a - b kills both relations
    image = {free.generator_index("X12"): {(0,): 1}, free.generator_index("X13"): {(1,): 1}, free.generator_index("X23"): {(0,): -1, (1,): -1}}
    for d, basis in q.ideal.items():
        words = free.basis_by_degree[d]
        for row in basis.rows.values():
            poly = {}
            for k, c in row.items():
                for w, e in free.expansion(words[k]).items():
                    for choice in product(*(image[letter].items() for letter in w)):
                        key = tuple(x[0][0] for x in choice)
                        coef = c * e
                        for _, s in choice:
                            coef *= s
                        poly[key] = poly.get(key, 0) + coef
            assert not any(poly.values())


def test_p3_infinitesimal_braid_relations_vanish():
    q = drinfeld_kohno(3, 3)
    for i, j, k in [(1, 2, 3), (1, 3, 2), (2, 3, 1)]:
        X = lambda a, b: pair_label(a, b, 3)
        assert q.element([X(i, j), X(i, k)]) == {k_: -v for k_, v in q.element([X(i, j), X(j, k)]).items()}


def test_p4_degree_two_by_elimination():
    q = drinfeld_kohno(4, 2)
    assert q.dims()[0] == 6
    free_dim = q.free.dims()[1]
    assert free_dim == 15
    assert q.dims()[1] == free_dim - q.ideal_dims()[1]
    # iterated semidirect splitting: sum over j < 4 of free Lie on j generators in degree 2
    assert q.dims()[1] == sum(necklace_count(j, 2) for j in range(1, 4)) == 4


def test_quotient_structure_is_a_lie_algebra():
    q = drinfeld_kohno(3, 4)
    assert q.validate() == []
    assert ideal_closure_violations(q) == []


def test_no_relations_gives_free():
    q = nilpotent_quotient(LiePresentation((("x", 1), ("y", 1)), (), 4))
    assert q.dims() == (2, 1, 2, 3)


def test_killing_a_generator():
    free = FreeLieAlgebra([("x", 1), ("y", 1), ("z", 1)], 3)
    q = nilpotent_quotient(LiePresentation((("x", 1), ("y", 1), ("z", 1)), (free.generator("x"),), 3))
    assert q.dims() == FreeLieAlgebra([("y", 1), ("z", 1)], 3).dims()


def test_inhomogeneous_relation_rejected():
    free = FreeLieAlgebra([("x", 1), ("y", 1)], 3)
    rel = free.generator("x") + free.bracket(free.generator("x"), free.generator("y"))
    with pytest.raises(ValueError):
        nilpotent_quotient(LiePresentation((("x", 1), ("y", 1)), (rel,), 3))


def test_identity_action_fixes_elements():
    q = drinfeld_kohno(3, 3)
    ident = GeneratorAction.from_permutation("e", [0, 1, 2])
    v = q.element(["X12", ["X12", "X13"]])
    assert act(ident, v, q) == v


def test_action_is_a_homomorphism():
    q = drinfeld_kohno(3, 3)
    free = q.free
    names = free.names
    # sigma = (1 2 3) on strand labels
    sigma = {1: 2, 2: 3, 3: 1}
    images = []
    for name in names:
        i, j = int(name[1]), int(name[2])
        images.append(names.index(pair_label(sigma[i], sigma[j], 3)))
    g = GeneratorAction.from_permutation("c", images)
    lhs = act(g, q.element(["X12", "X13"]), q)
    rhs = q.element([pair_label(sigma[1], sigma[2], 3), pair_label(sigma[1], sigma[3], 3)])
    assert lhs == rhs


def test_action_must_preserve_degrees():
    free = FreeLieAlgebra([("x", 1), ("y", 2)], 3)
    with pytest.raises(ValueError):
        act(GeneratorAction.from_permutation("bad", [1, 0]), free.generator("x"))
