import random
from fractions import Fraction

import pytest

from kleinjet.finitetype import (SCHWARZIAN, NoRelationFound, OdeRelation, action_jet,
                                 builtin_action, derivatives, derive_ode_linear,
                                 minimal_ode_order, sample_jet, schwarzian_spot_checks,
                                 solve_params_mobius, verify_group_law, verify_lie_first_theorem,
                                 verify_ode, verify_schwarzian_symbolic)
from kleinjet.klein import ChartError, builtin, geometric_order
from kleinjet.series import TruncPoly


@pytest.fixture(scope="module")
def mob():
    return builtin_action("mobius")


def test_mobius_expansions(mob):
    jet = action_jet(mob, (1, 1, 0, 1), (0,), 3)[0]
    assert jet == TruncPoly(1, 3, {(0,): 1, (1,): 1})
    jet = action_jet(mob, (1, 0, 1, 1), (0,), 3)[0]
    assert derivatives(jet, 3) == (0, 1, -2, 6)
    with pytest.raises(ChartError):
        action_jet(mob, (1, 0, 1, 1), (-1,), 2)


def test_affine_expansion():
    jet = action_jet(builtin_action("affine_line"), (3, 5), (2,), 2)[0]
    assert derivatives(jet, 2) == (11, 3, 0)


def _same_up_to_sign(p, q):
    return tuple(p) == tuple(q) or tuple(p) == tuple(-x for x in q)


def test_solve_params_examples():
    assert _same_up_to_sign(solve_params_mobius(0, 1, 0), (1, 0, 0, 1))
    assert _same_up_to_sign(solve_params_mobius(0, 1, -2), (1, 0, 1, 1))
    with pytest.raises(ValueError):
        solve_params_mobius(0, 0, 1)


def test_solve_params_round_trip(mob):
    rng = random.Random(11)
    for _ in range(50):
        params, y0, jet = sample_jet(mob, rng, 2)
        w = derivatives(jet[0], 2)
        got = solve_params_mobius(w[0], w[1], w[2], y0[0])
        assert _same_up_to_sign(got, params)
        assert derivatives(action_jet(mob, got, y0, 2)[0], 2) == w


def test_schwarzian_symbolic_and_numeric():
    rep = verify_schwarzian_symbolic()
    assert rep["pass"] and set(rep["charts"]) == {"a!=0", "c!=0"}
    assert verify_schwarzian_symbolic(Fraction(2, 3))["pass"]
    assert schwarzian_spot_checks(50, seed=4)["pass"]
    assert SCHWARZIAN.evaluate(0, (0, 1, -2, 6)) == 0


def test_verify_ode_examples(mob):
    aff = builtin_action("affine_line")
    w2 = OdeRelation(2, {(0, 0, 0, 1): 1})
    assert verify_ode(aff, w2)["pass"]
    assert verify_ode(mob, SCHWARZIAN)["pass"]
    wrong = OdeRelation(3, {(0, 0, 1, 0, 1): 1, (0, 0, 0, 2, 0): -1})
    rep = verify_ode(mob, wrong)
    assert not rep["pass"] and rep["counterexamples"]


def test_lie_first_theorem():
    for name in ("translations1d", "translations2d", "affine_group"):
        assert verify_lie_first_theorem(builtin_action(name), 25, seed=3)["pass"]
    with pytest.raises(ValueError):
        verify_lie_first_theorem(builtin_action("mobius"))


def test_group_law(mob):
    assert verify_group_law(mob, 25, seed=1)["pass"]


def test_derive_affine():
    rel = derive_ode_linear(builtin_action("affine_line"), 2, cap=1)
    assert rel.describe() == "w'' = 0"
    assert isinstance(derive_ode_linear(builtin_action("affine_line"), 1, cap=2), NoRelationFound)


def test_derive_mobius(mob):
    details = {}
    rel = derive_ode_linear(mob, 3, cap=2, details=details)
    assert rel == SCHWARZIAN
    assert rel.describe() == "w'*w''' - 3/2*w''^2 = 0"
    assert details["nullspace_dims"] == {1: 0, 2: 0, 3: 0, 4: 1}
    assert isinstance(derive_ode_linear(mob, 2, cap=2), NoRelationFound)


def test_derive_translation_gives_constant_derivative():
    rel = derive_ode_linear(builtin_action("translations1d"), 1, cap=1)
    assert rel.describe() == "w' - 1 = 0"


@pytest.mark.parametrize("action,realization", [("affine_line", "affine_line"), ("mobius", "mobius")])
def test_minimal_order_is_M_plus_one(action, realization):
    M = geometric_order(builtin(realization))["M"]
    order, _ = minimal_ode_order(builtin_action(action))
    assert order == M + 1


def test_relation_validation():
    with pytest.raises(ValueError):
        OdeRelation(2, {})
    with pytest.raises(ValueError):
        OdeRelation(2, {(0, 1): 1})


def test_unknown_action():
    with pytest.raises(KeyError):
        builtin_action("nope")
