import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcev.braid_kz import _free_lie, drinfeld_kohno, kz_system
from malcev.envelope import COMPLEX, exp, is_grouplike
from malcev.free_lie import LiePresentation, nilpotent_quotient
from malcev.groups import symmetric_group
from malcev.transport import (
    ArcSegment,
    CoordinateMap,
    CoveringSpace,
    DlogForm,
    LieValuedOneForm,
    PiecewisePath,
    PolyForm,
    PolynomialSegment,
    SingularityError,
    check_integrability,
    iterated_integral,
    iterated_integral_with_coeff,
    monodromy,
    random_polynomial_path,
    transport,
)
from malcev.verify import chen_instance, composition_error, inverse_error, shuffle_error

UNIT = PiecewisePath([PolynomialSegment.line([0.0], [1.0])])
DX = PolyForm(1, 0, {(0,): 1})
XDX = PolyForm(1, 0, {(1,): 1})


def simplex_quadrature(f1, f2, n=800):
    """Midpoint rule over 0 < t1 < t2 < 1 for the path t -> t."""
    t = (np.arange(n) + 0.5) / n
    inner = np.concatenate([[0.0], np.cumsum(f1(t))[:-1]]) / n + f1(t) / (2 * n)
    return float(np.sum(inner * f2(t)) / n)


def test_unit_interval_integrals_against_quadrature():
    one, ident = (lambda t: np.ones_like(t)), (lambda t: t)
    assert abs(simplex_quadrature(one, ident) - 1 / 3) < 1e-5
    assert abs(simplex_quadrature(ident, one) - 1 / 6) < 1e-5
    assert abs(iterated_integral(UNIT, [DX, XDX]) - 1 / 3) < 1e-10
    assert abs(iterated_integral(UNIT, [XDX, DX]) - 1 / 6) < 1e-10
    assert abs(iterated_integral(UNIT, [DX]) - 1) < 1e-12
    assert abs(iterated_integral(UNIT, [XDX]) - 1 / 2) < 1e-12
    # shuffle: (1)(1/2) = 1/3 + 1/6
    lhs = iterated_integral(UNIT, [DX]) * iterated_integral(UNIT, [XDX])
    assert abs(lhs - iterated_integral(UNIT, [DX, XDX]) - iterated_integral(UNIT, [XDX, DX])) < 1e-10


def test_constant_path():
    const = PiecewisePath([PolynomialSegment.constant([0.3 + 0.1j, 2.0])])
    w = PolyForm(2, 1, {(1, 0): 1, (0, 2): 1j})
    assert iterated_integral(const, []) == 1
    assert abs(iterated_integral(const, [w])) < 1e-15
    assert abs(iterated_integral(const, [w, w])) < 1e-15


def test_residue_of_dlog_on_unit_circle():
    loop = PiecewisePath([ArcSegment.single([1.0], 0, 0.0, 1.0, 0.0, 2 * math.pi)])
    assert abs(iterated_integral(loop, [DlogForm(0, [1])]) - 2j * math.pi) < 1e-10


def test_singularity_guard():
    through_zero = PiecewisePath([PolynomialSegment.line([-1.0], [1.0])])
    with pytest.raises(SingularityError):
        iterated_integral(through_zero, [DlogForm(0, [1])])


def test_segments_must_meet():
    with pytest.raises(ValueError):
        PiecewisePath([PolynomialSegment.line([0.0], [1.0]), PolynomialSegment.line([2.0], [3.0])])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_reparametrization_invariance(seed):
    rng = np.random.default_rng(seed)
    path = random_polynomial_path(rng, [0.0, 1.0], [1.0, 0.5j], 3, 0.3)
    forms = [PolyForm(2, int(rng.integers(0, 2)), {(1, 0): complex(rng.standard_normal()), (0, 1): 1.0}) for _ in range(3)]
    slow = PiecewisePath([path.segments[0].reparametrized([0.0, 0.5, 0.5])])
    a, b = iterated_integral(path, forms), iterated_integral(slow, forms)
    assert abs(a - b) <= 1e-8 * max(1.0, abs(a))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_chen_identities_property(seed):
    inst = chen_instance(np.random.default_rng(seed))
    assert shuffle_error(inst) <= 1e-8
    assert inverse_error(inst) <= 1e-8
    assert composition_error(inst) <= 1e-8


# -- transport ------------------------------------------------------------------


def kz2(N=3):
    S = kz_system(2, N)
    return S


def test_transport_of_constant_path_is_one():
    S = kz2()
    const = PiecewisePath([PolynomialSegment.constant([1.0, 2.0])])
    res = transport(const, S.omega)
    assert res.series.distance(res.series.algebra.one(COMPLEX)) < 1e-14


def test_full_twist_closed_form():
    S = kz2()
    loop = PiecewisePath([ArcSegment.single([1.0, 2.0], 1, 1.0, 1.0, 0.0, 2 * math.pi)])
    T = transport(loop, S.omega).series
    env = T.algebra
    x = env.from_lie({0: 2j * math.pi}, COMPLEX)
    assert T.distance(exp(x)) < 1e-8
    coeffs = [T.coefficient((0,) * k) for k in range(4)]
    assert all(abs(c - (2j * math.pi) ** k / math.factorial(k)) < 1e-8 for k, c in enumerate(coeffs))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_transport_inverse_and_grouplike(seed):
    rng = np.random.default_rng(seed)
    S = kz_system(3, 3)
    start = np.array([0.0, 1.0, 2.5])
    path = random_polynomial_path(rng, start, start + rng.standard_normal(3) * 0.2, 3, 0.05)
    T = transport(path, S.omega).series
    Ti = transport(path.inverse(), S.omega).series
    assert (T * Ti).distance(T.algebra.one(COMPLEX)) < 1e-8
    assert is_grouplike(T, 1e-8)


def test_homotopic_loops_have_equal_transport():
    S = kz_system(3, 3)
    a = transport(S.word_path(S_word("s1 s1"), "arc"), S.omega).series
    b = transport(S.word_path(S_word("s1 s1"), "box"), S.omega).series
    assert a.distance(b) < 1e-8


def S_word(text):
    from malcev.braid_kz import BraidWord

    return BraidWord.parse(3, text)


# -- integrability --------------------------------------------------------------


def test_kz_is_integrable_in_p3_and_not_in_free():
    assert kz_system(3, 3).integrability().integrable
    res = kz_system(3, 3, free=True).integrability()
    assert not res.integrable and res.certificate


def test_single_closed_term_is_integrable():
    q = nilpotent_quotient(LiePresentation((("x", 1),), (), 2))
    omega = LieValuedOneForm(q, [(PolyForm(2, 0, {(0, 1): 3}), {0: Fraction(1)})])
    # y dx is not closed, but with abelian coefficients w ^ w vanishes only if d w = 0
    assert not check_integrability(omega).integrable
    closed = LieValuedOneForm(q, [(DlogForm(1, [1, 2]), {0: Fraction(1)})])
    assert check_integrability(closed).integrable


def test_kz_integrability_does_not_depend_on_truncation():
    for N in (2, 3):
        assert kz_system(3, N).integrability().integrable


# -- covers -----------------------------------------------------------------


def double_cover():
    """C* -> C*, u -> u^2, with deck transformation u -> -u."""
    S2 = symmetric_group(2)
    e, t = S2.elements
    deck = {e: CoordinateMap((0,)), t: CoordinateMap((0,), (-1,))}
    return CoveringSpace(S2, deck, [1.0]), e, t


def test_two_sheet_lift_oracle():
    cover, e, t = double_cover()
    # the generator loop of the base lifts to u = exp(pi i s)
    lift = PiecewisePath([ArcSegment.single([1.0], 0, 0.0, 1.0, 0.0, math.pi)])
    assert cover.monodromy_of(lift) == t
    w = DlogForm(0, [1])
    c = iterated_integral(lift, [w])
    assert abs(c - 1j * math.pi) < 1e-10
    assert abs(iterated_integral_with_coeff(lift, [w], t, cover) - c) < 1e-12
    assert iterated_integral_with_coeff(lift, [w], e, cover) == 0
    # r = 0 returns phi(rho(gamma))
    assert iterated_integral_with_coeff(lift, [], {t: 2.5, e: 7}, cover) == 2.5
    # going around twice closes up on the cover with twice the integral
    twice = cover.concat(lift, lift)
    assert cover.monodromy_of(twice) == e
    assert abs(iterated_integral(twice, [w]) - 2j * math.pi) < 1e-10


def test_trivial_group_reduces_to_plain_integral():
    from malcev.groups import cyclic_group

    G = cyclic_group(1)
    cover = CoveringSpace(G, {0: CoordinateMap((0, 1))}, [0.0, 1.0])
    path = random_polynomial_path(np.random.default_rng(1), [0.0, 1.0], [0.0, 1.0], 3, 0.3)
    forms = [PolyForm(2, 0, {(0, 1): 1}), PolyForm(2, 1, {(1, 0): 1j})]
    assert iterated_integral_with_coeff(path, forms, 0, cover) == iterated_integral(path, forms)


def test_monodromy_examples():
    cover, e, t = double_cover()
    lift = PiecewisePath([ArcSegment.single([1.0], 0, 0.0, 1.0, 0.0, math.pi)])
    q = nilpotent_quotient(LiePresentation((("x", 1),), (), 2))
    zero = LieValuedOneForm(q, [(DlogForm(0, [1]), {})])
    g, res = monodromy(lift, zero, cover)
    assert g == t and res.series.distance(res.series.algebra.one(COMPLEX)) < 1e-14
    g, res = monodromy(lift, LieValuedOneForm(q, [(DlogForm(0, [1]), {0: Fraction(1)})]), None)
    assert g is None
    assert abs(res.series.coefficient((0,)) - 1j * math.pi) < 1e-10


def test_deck_maps_must_form_an_action():
    S2 = symmetric_group(2)
    e, t = S2.elements
    with pytest.raises(ValueError):
        CoveringSpace(S2, {e: CoordinateMap((0,)), t: CoordinateMap((0,), (2,))}, [1.0])


def test_dlog_pullback_under_swap():
    w = DlogForm(0, [1, -1])
    swapped = w.pullback(CoordinateMap((1, 0)))
    x = np.array([0.3, 1.7 + 0.2j])
    v = np.array([0.5, -0.25j])
    assert cmath.isclose(swapped.evaluate(x, v), w.evaluate(x[::-1], v[::-1]))


def test_drinfeld_kohno_n2_is_abelian():
    assert drinfeld_kohno(2, 4).dims() == (1, 0, 0, 0)
    assert _free_lie(2, 3).dims() == (1, 0, 0)
