import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from kleinjet.jets import (JetDiffeo, JetField, JetOrderError, fixing_jets, flat_rep,
                           graded_decompose, is_isotropic, is_transitive, isotropy_bracket,
                           jet_bracket, project, pushforward, stabilizer_is_trivial)
from kleinjet.series import TruncPoly

import _rand


def j1(k, terms):
    return JetField(1, k, (TruncPoly(1, k, terms),))


def test_bracket_examples():
    assert jet_bracket(j1(1, {(1,): 1}), j1(1, {(0,): 1})) == j1(0, {(0,): -1})
    assert jet_bracket(j1(2, {(2,): 1}), j1(2, {(0,): 1})) == j1(1, {(1,): -2})
    a = j1(3, {(0,): 2, (2,): 5})
    assert jet_bracket(a, a).is_zero()


def test_bracket_rejects_zero_jets():
    with pytest.raises(JetOrderError):
        jet_bracket(j1(0, {(0,): 1}), j1(0, {(0,): 1}))


def test_project_examples():
    assert project(j1(2, {(2,): 1}), 1).is_zero()
    a = j1(2, {(0,): 1, (1,): 1, (2,): 1})
    assert project(a, 2) == a
    assert project(a, 0) == j1(0, {(0,): 1})
    with pytest.raises(JetOrderError):
        project(a, 3)


def test_isotropy_and_decomposition():
    assert is_isotropic(j1(1, {(1,): 1})) and not is_isotropic(j1(1, {(0,): 1}))
    pieces = graded_decompose(j1(2, {(0,): 1, (1,): 1, (2,): 1}))
    assert sorted(pieces) == [-1, 0, 1]
    assert pieces[-1] == j1(2, {(0,): 1}) and pieces[1] == j1(2, {(2,): 1})


def test_pushforward_examples():
    x = j1(0, {(0,): 1})
    assert pushforward(JetDiffeo.identity(1, 1), x) == x
    f = JetDiffeo(1, 1, (TruncPoly(1, 1, {(1,): 2}),))
    assert pushforward(f, x) == j1(0, {(0,): 2})
    with pytest.raises(JetOrderError):
        pushforward(JetDiffeo.identity(1, 3), x)


def test_diffeo_rejects_singular_and_translated():
    with pytest.raises(ValueError):
        JetDiffeo(1, 2, (TruncPoly(1, 2, {(2,): 1}),))
    with pytest.raises(ValueError):
        JetDiffeo(1, 2, (TruncPoly(1, 2, {(0,): 1, (1,): 1}),))


def test_flat_rep_examples():
    xi, eta = j1(2, {(1,): 1}), j1(1, {(0,): 1})
    assert flat_rep(xi, eta) == jet_bracket(xi, JetField(1, 2, eta.components))
    assert flat_rep(j1(2, {}), eta).is_zero()
    with pytest.raises(ValueError):
        flat_rep(j1(2, {(0,): 1}), eta)


def _syms(n):
    return sp.symbols("z0:%d" % n)


def _true_bracket(X, Y, z):
    n = len(z)
    return [sum(X[a] * sp.diff(Y[i], z[a]) - Y[a] * sp.diff(X[i], z[a]) for a in range(n))
            for i in range(n)]


def _params(seed):
    rng = random.Random(seed)
    return rng, rng.randint(1, 2), rng.randint(1, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_bracket_is_truncated_true_bracket(seed):
    rng, n, k = _params(seed)
    z = _syms(n)
    X = [_rand.poly(rng, n, 3) for _ in range(n)]
    Y = [_rand.poly(rng, n, 3) for _ in range(n)]
    true = _rand.from_sympy(_true_bracket(_rand.sympy_fields(X, z), _rand.sympy_fields(Y, z), z),
                            z, k - 1)
    got = jet_bracket(JetField(n, k, tuple(p.truncate(k) for p in X)),
                      JetField(n, k, tuple(p.truncate(k) for p in Y)))
    assert got == JetField(n, k - 1, tuple(true))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pushforward_satisfies_chain_rule(seed):
    # Y o f = Df . X through degree k, checked by sympy substitution
    rng, n, k = _params(seed)
    z = _syms(n)
    f = _rand.diffeo(rng, n, k + 1)
    X = _rand.field(rng, n, k)
    Y = pushforward(f, X)
    fs = _rand.sympy_fields(f.components, z)
    Xs = _rand.sympy_fields(X.components, z)
    Ys = _rand.sympy_fields(Y.components, z)
    sub = dict(zip(z, fs))
    lhs = [sp.expand(y.subs(sub, simultaneous=True)) for y in Ys]
    rhs = [sp.expand(sum(sp.diff(fs[i], z[a]) * Xs[a] for a in range(n))) for i in range(n)]
    assert _rand.from_sympy(lhs, z, k) == _rand.from_sympy(rhs, z, k)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_flat_rep_is_flow_derivative(seed):
    # phi_t = id - t xi + O(t^2), phi_t^{-1} = id + t xi + O(t^2)
    rng, n, k = _params(seed)
    z = _syms(n)
    t = sp.Symbol("t")
    xi = _rand.field(rng, n, k + 1, isotropic=True)
    eta = _rand.field(rng, n, k)
    xs = _rand.sympy_fields(xi.components, z)
    es = _rand.sympy_fields(eta.components, z)
    phi = [zi - t * x for zi, x in zip(z, xs)]
    inv = dict(zip(z, [zi + t * x for zi, x in zip(z, xs)]))
    push = [sum(sp.diff(phi[i], z[a]) * es[a] for a in range(n)).subs(inv, simultaneous=True)
            for i in range(n)]
    deriv = [sp.expand(sp.diff(p, t).subs(t, 0)) for p in push]
    assert flat_rep(xi, eta) == JetField(n, k, tuple(_rand.from_sympy(deriv, z, k)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pushforward_functorial(seed):
    rng, n, k = _params(seed)
    f, g = _rand.diffeo(rng, n, k + 1), _rand.diffeo(rng, n, k + 1)
    X = _rand.field(rng, n, k)
    assert pushforward(f.compose(g), X) == pushforward(f, pushforward(g, X))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_projection_intertwines_brackets(seed):
    rng, n, k = _params(seed)
    k += 1
    j = rng.randint(1, k)
    a, b = _rand.field(rng, n, k), _rand.field(rng, n, k)
    assert project(jet_bracket(a, b), j - 1) == jet_bracket(project(a, j), project(b, j))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_jacobi_on_isotropy_algebra(seed):
    rng, n, k = _params(seed)
    a, b, c = (_rand.field(rng, n, k, isotropic=True) for _ in range(3))
    br = isotropy_bracket
    total = br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))
    assert total.is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_grading_containments(seed):
    rng, n, k = _params(seed)
    k += 1
    pa = graded_decompose(_rand.field(rng, n, k))
    pb = graded_decompose(_rand.field(rng, n, k))
    for i in range(-1, k):
        for j in range(-1, k):
            if i == j == -1:
                continue
            br = jet_bracket(pa[i], pb[j])
            target = i + j
            for c in br.components:
                assert all(sum(e) == target + 1 for e in c.terms)


def test_transitivity_and_stabilizer():
    fam = [j1(2, {(0,): 1}), j1(2, {(1,): 1}), j1(2, {(2,): 1})]
    assert is_transitive(fam)
    assert stabilizer_is_trivial(fam, JetDiffeo.identity(1, 3))
    f = JetDiffeo(1, 3, (TruncPoly(1, 3, {(1,): 1, (2,): 1}),))
    assert not stabilizer_is_trivial(fam, f)
    with pytest.raises(ValueError):
        stabilizer_is_trivial(fam[1:], f)


def test_fixing_jets_mobius_family():
    fam = [j1(2, {(0,): 1}), j1(2, {(1,): 1}), j1(2, {(2,): 1})]
    sol, dims = fixing_jets(fam, 3)
    assert sol.is_identity() and dims == [0, 0, 0]


def test_fixing_jets_projective_plane_family():
    from kleinjet.klein import builtin, theta_k
    r = builtin("projective_plane")
    fam = [theta_k(r, r.algebra.basis(i), 2) for i in range(r.algebra.dim)]
    sol, dims = fixing_jets(fam, 3)
    assert sol.is_identity() and all(d == 0 for d in dims)


def test_fixing_jets_translations_pin_every_order():
    # constant fields already force Df = I, then each higher layer in turn
    e = [JetField(2, 2, (TruncPoly(2, 2, {(0, 0): 1}), TruncPoly.zero(2, 2))),
         JetField(2, 2, (TruncPoly.zero(2, 2), TruncPoly(2, 2, {(0, 0): 1})))]
    sol, dims = fixing_jets(e, 3)
    assert sol.is_identity() and dims == [0, 0, 0]
