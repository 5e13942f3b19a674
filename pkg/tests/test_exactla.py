import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcev.exactla import (
    CoordinateSolver,
    EchelonBasis,
    RatMatrix,
    format_rational,
    kernel_basis,
    quotient_basis,
    rank,
    rational,
    rref,
    solve_coordinates,
)


def bareiss_rank(rows):
    """Fraction-free elimination on integer matrices, independent of the library."""
    a = [list(r) for r in rows]
    n, m = len(a), len(a[0]) if a else 0
    r, prev = 0, 1
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, n):
            for j in range(c + 1, m):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
    return r


def scaled(rows):
    # clear denominators row by row so Bareiss sees integers
    out = []
    for row in rows:
        den = math.lcm(*(Fraction(x).denominator for x in row))
        out.append([int(Fraction(x) * den) for x in row])
    return out


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def matrices(max_rows=6, max_cols=7):
    return st.integers(1, max_rows).flatmap(
        lambda n: st.integers(1, max_cols).flatmap(
            lambda m: st.lists(st.lists(st.one_of(st.just(Fraction(0)), rationals), min_size=m, max_size=m), min_size=n, max_size=n)
        )
    )


def test_rational_parsing():
    assert rational("3/6") == Fraction(1, 2)
    assert rational(4) == Fraction(4)
    assert format_rational(Fraction(-2, 4)) == "-1/2"
    assert format_rational(Fraction(6, 3)) == "2"
    with pytest.raises(TypeError):
        rational(0.5)


def test_random_5x7_rank_matches_bareiss(rng):
    for _ in range(20):
        rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < 0.7 else Fraction(0) for _ in range(7)] for _ in range(5)]
        assert rank(RatMatrix.from_rows(rows)) == bareiss_rank(scaled(rows))


def test_rank_deficient_example():
    m = RatMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2


def test_kernel_of_identity_and_zero():
    assert kernel_basis(RatMatrix.identity(3)) == []
    ker = kernel_basis(RatMatrix(3, 3))
    assert sorted(tuple(sorted(v.items())) for v in ker) == [((0, 1),), ((1, 1),), ((2, 1),)]


def test_quotient_basis_examples():
    reps, proj = quotient_basis(2, [{0: Fraction(1)}])
    assert reps == [1]
    assert proj.apply({0: Fraction(1)}) == {}
    reps, _ = quotient_basis(3, [])
    assert reps == [0, 1, 2]


def test_quotient_basis_random_subspace(rng):
    for _ in range(20):
        n = rng.randint(1, 7)
        vecs = [{j: Fraction(rng.randint(-3, 3)) for j in range(n) if rng.random() < 0.6} for _ in range(rng.randint(0, n))]
        k = bareiss_rank(scaled([[v.get(j, 0) for j in range(n)] for v in vecs])) if vecs else 0
        reps, proj = quotient_basis(n, vecs)
        assert len(reps) == n - k
        for v in vecs:
            assert proj.apply(v) == {}


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_annihilated_and_rank_nullity(rows):
    m = RatMatrix.from_rows(rows)
    ker = kernel_basis(m)
    assert len(ker) + rank(m) == m.cols
    for v in ker:
        assert m.apply(v) == {}


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_pivots_are_normalised(rows):
    reduced, pivots = rref(RatMatrix.from_rows(rows))
    assert pivots == sorted(pivots)
    for r, p in enumerate(pivots):
        assert reduced.entry(r, p) == 1
        for other in range(len(pivots)):
            if other != r:
                assert reduced.entry(other, p) == 0


def test_solve_coordinates_round_trip(rng):
    cols = [{0: Fraction(1), 2: Fraction(1)}, {1: Fraction(2)}, {0: Fraction(1), 1: Fraction(1), 3: Fraction(-1)}]
    solver = CoordinateSolver(cols)
    for _ in range(10):
        coeffs = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in cols]
        target = {}
        for c, col in zip(coeffs, cols):
            for j, x in col.items():
                target[j] = target.get(j, 0) + c * x
        target = {j: x for j, x in target.items() if x}
        got = solver.solve(target)
        assert {k: v for k, v in enumerate(coeffs) if v} == got
    assert solve_coordinates(cols, {0: Fraction(1)}) is None


def test_dependent_columns_rejected():
    with pytest.raises(ValueError):
        CoordinateSolver([{0: Fraction(1)}, {0: Fraction(2)}])


def test_echelon_basis_membership():
    b = EchelonBasis()
    assert b.add({0: 1, 1: 1})
    assert not b.add({0: 2, 1: 2})
    assert b.contains({0: Fraction(-3), 1: Fraction(-3)})
    assert not b.contains({1: 1})


def test_matmul_and_transpose():
    a = RatMatrix.from_rows([[1, 2], [0, 1]])
    b = RatMatrix.from_rows([[Fraction(1, 2), 0], [1, 1]])
    assert (a @ b).to_dense() == [[Fraction(5, 2), 2], [1, 1]]
    assert a.transpose().transpose() == a
