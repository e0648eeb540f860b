import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kleinjet.series import (TruncPoly, compose_maps, poly_compose_trunc, poly_derivative,
                             poly_mul_trunc, series_invert_diffeo)

import _rand


def x(n=1, d=3, i=0):
    return TruncPoly.var(n, d, i)


def test_mul_truncates():
    one = TruncPoly.const(1, 2, 1)
    assert poly_mul_trunc(one + x(1, 2), one - x(1, 2), 2) == one - x(1, 2).mul(x(1, 2), 2)


def test_compose_square_with_sum():
    X, Y = TruncPoly.var(2, 2, 0), TruncPoly.var(2, 2, 1)
    p = X.mul(X, 2)
    out = poly_compose_trunc(p, [X + Y, Y], 2)
    assert out == TruncPoly(2, 2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})


def test_compose_rejects_constant_term():
    X = x(1, 2)
    with pytest.raises(ValueError):
        poly_compose_trunc(X, [X + TruncPoly.const(1, 2, 1)], 2)


def test_derivative_lowers_degree():
    p = TruncPoly(2, 3, {(2, 1): 1})
    dp = poly_derivative(p, 0)
    assert dp == TruncPoly(2, 2, {(1, 1): 2})


def test_inverse_examples():
    assert series_invert_diffeo([x(1, 3).scale(2)], 3) == [x(1, 3).scale(Fraction(1, 2))]
    f = x(1, 3) + TruncPoly(1, 3, {(2,): 1})
    assert series_invert_diffeo([f], 3) == [TruncPoly(1, 3, {(1,): 1, (2,): -1, (3,): 2})]
    ident = [TruncPoly.var(2, 4, i) for i in range(2)]
    assert series_invert_diffeo(ident, 4) == ident


def test_inverse_singular_raises():
    with pytest.raises(ValueError):
        series_invert_diffeo([TruncPoly(1, 3, {(2,): 1})], 3)


def test_shift_recentres():
    p = TruncPoly(1, 2, {(2,): 1})        # z^2 at z = 1 + t
    assert p.shift((1,)) == TruncPoly(1, 2, {(0,): 1, (1,): 2, (2,): 1})


def _rmap(rng, n, d):
    return [_rand.poly(rng, n, d, lo=1) for _ in range(n)]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 4))
def test_composition_associative(seed, n, d):
    rng = random.Random(seed)
    p = _rand.poly(rng, n, d)
    q, r = _rmap(rng, n, d), _rmap(rng, n, d)
    left = poly_compose_trunc(p, compose_maps(q, r, d), d)
    right = poly_compose_trunc(poly_compose_trunc(p, q, d), r, d)
    assert left == right


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 5))
def test_inverse_two_sided(seed, n, d):
    rng = random.Random(seed)
    f = _rand.diffeo(rng, n, d).components
    g = series_invert_diffeo(list(f), d)
    ident = [TruncPoly.var(n, d, i) for i in range(n)]
    assert compose_maps(list(f), g, d) == ident
    assert compose_maps(g, list(f), d) == ident


def test_evaluate_matches_sympy():
    import sympy as sp
    rng = random.Random(3)
    p = _rand.poly(rng, 2, 3)
    a, b = sp.symbols("a b")
    expr = _rand.sympy_fields([p], (a, b))[0]
    pt = (Fraction(2, 3), Fraction(-1, 2))
    assert sp.Rational(str(p.evaluate(pt))) == expr.subs({a: sp.Rational(2, 3), b: sp.Rational(-1, 2)})
