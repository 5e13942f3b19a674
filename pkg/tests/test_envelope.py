from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcev.envelope import COMPLEX, CoproductValue, Envelope, coproduct, exp, is_grouplike, log
from malcev.free_lie import FreeLieAlgebra, LiePresentation, nilpotent_quotient


def free_quotient(N=3, k=2):
    return nilpotent_quotient(LiePresentation(tuple((f"x{i}", 1) for i in range(k)), (), N))


# -- brute-force tensor algebra, used as an oracle ------------------------------


def t_mul(a, b, N):
    out = {}
    for u, c in a.items():
        for v, d in b.items():
            if len(u) + len(v) <= N:
                out[u + v] = out.get(u + v, 0) + c * d
    return {w: c for w, c in out.items() if c}


def t_exp(a, N):
    out, power = {(): Fraction(1)}, {(): Fraction(1)}
    for k in range(1, N + 1):
        power = t_mul(power, a, N)
        for w, c in power.items():
            out[w] = out.get(w, 0) + c / factorial(k)
    return out


def t_log(g, N):
    nil = {w: c for w, c in g.items() if w}
    out, power = {}, {(): Fraction(1)}
    for k in range(1, N + 1):
        power = t_mul(power, nil, N)
        for w, c in power.items():
            out[w] = out.get(w, 0) + (1 if k % 2 else -1) * c / k
    return {w: c for w, c in out.items() if c}


def test_bch_degree_three_brute_force():
    N = 3
    free = FreeLieAlgebra([("x", 1), ("y", 1)], N)
    x, y = free.generator("x"), free.generator("y")
    br = free.bracket
    bch = x + y + br(x, y) * Fraction(1, 2) + br(x, br(x, y)) * Fraction(1, 12) + br(y, br(y, x)) * Fraction(1, 12)
    brute = t_log(t_mul(t_exp({(0,): Fraction(1)}, N), t_exp({(1,): Fraction(1)}, N), N), N)
    assert free.from_tensor(brute) == bch

    q = free_quotient(N)
    env = Envelope(q)
    X, Y = env.from_lie(q.element("x0")), env.from_lie(q.element("x1"))
    got = log(exp(X) * exp(Y))
    lie = q.element("x0")
    for expr, c in [("x1", 1), (["x0", "x1"], Fraction(1, 2)), (["x0", ["x0", "x1"]], Fraction(1, 12)), (["x1", ["x1", "x0"]], Fraction(1, 12))]:
        for i, v in q.element(expr).items():
            lie[i] = lie.get(i, 0) + c * v
    assert got == env.from_lie(lie)


def test_commutator_is_bracket():
    q = free_quotient(3)
    env = Envelope(q)
    x, y = env.from_lie(q.element("x0")), env.from_lie(q.element("x1"))
    assert x * y - y * x == env.from_lie(q.element(["x0", "x1"]))


def test_exp_examples():
    q = free_quotient(3)
    env = Envelope(q)
    assert exp(env.zero()) == env.one()
    x = env.from_lie(q.element("x0"))
    assert exp(x) == env.one() + x + x * x / 2 + x * x * x / 6


def random_series(env, draw, field=COMPLEX):
    vals = draw(st.lists(st.floats(-2, 2), min_size=2 * env.dim, max_size=2 * env.dim))
    arr = np.array(vals[: env.dim]) + 1j * np.array(vals[env.dim :])
    return env.from_vector(arr, field)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_associativity(data):
    q = free_quotient(3)
    env = Envelope(q)
    a, b, c = (random_series(env, data.draw) for _ in range(3))
    assert ((a * b) * c).distance(a * (b * c)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_exp_log_inverse(data):
    q = free_quotient(4)
    env = Envelope(q)
    v = random_series(env, data.draw)
    v = v - env.one(COMPLEX) * v.constant
    assert log(exp(v)).distance(v) < 1e-8
    g = exp(v)
    assert (g * g.inverse()).distance(env.one(COMPLEX)) < 1e-8


def test_coproduct_examples():
    q = free_quotient(4)
    env = Envelope(q)
    assert coproduct(env.one()).terms == {((), ()): 1}
    i = q.index("x0")
    assert coproduct(env.from_lie({i: Fraction(1)})).terms == {((i,), ()): 1, ((), (i,)): 1}


def test_coproduct_of_exponential_expanded_to_degree_four():
    q = free_quotient(4)
    env = Envelope(q)
    x = env.from_lie(q.element("x0")) + env.from_lie(q.element(["x0", "x1"])) * Fraction(1, 3)
    g = exp(x)
    assert coproduct(g) == CoproductValue.tensor(g, g)
    assert is_grouplike(g, 0)


def test_grouplike_examples():
    q = free_quotient(3)
    env = Envelope(q)
    assert is_grouplike(env.one(), 0)
    x = env.from_lie(q.element("x0"))
    assert not is_grouplike(env.one() + x + x * x, 1e-12)


def test_pbw_dimensions():
    # U of the free Lie algebra on two generators is the tensor algebra
    q = free_quotient(4)
    assert Envelope(q).dims_by_degree() == (1, 2, 4, 8, 16)


def test_log_requires_unit_constant():
    q = free_quotient(2)
    env = Envelope(q)
    with pytest.raises(ValueError):
        log(env.one() * 2)
