import random
from fractions import Fraction

import pytest

from kleinjet.exact import Matrix, Subspace, unit
from kleinjet.jets import JetDiffeo
from kleinjet.klein import (BUILTINS, RealizationError, KleinRealization, adk_group,
                            action_target, builtin, push_ad_crosscheck, geometric_order,
                            group_jet, in_G_level, theta_k, theta_kernel, verify_diagrams,
                            verify_theta_kernels, verify_splitting, verify_theta_m_isomorphism)
from kleinjet.liealg import LieAlgebra
from kleinjet.series import TruncPoly


@pytest.fixture(scope="module")
def mob():
    return builtin("mobius")


def test_builtin_orders():
    expected = {"translations1d": 0, "translations2d": 0, "translations3d": 0,
                "affine_line": 1, "euclidean_plane": 1, "mobius": 2, "projective_plane": 2}
    assert {n: builtin(n).m for n in BUILTINS} == expected


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin("torus")


def test_theta_reads_taylor_data(mob):
    h, f = mob.algebra.basis(1), mob.algebra.basis(2)
    assert theta_k(mob, h, 0).is_zero() and not theta_k(mob, h, 1).is_zero()
    assert theta_k(mob, f, 1).is_zero() and not theta_k(mob, f, 2).is_zero()
    assert theta_k(mob, (0, 0, 0), 3).is_zero()


def test_theta_kernel_mobius_members(mob):
    assert theta_kernel(mob, 0) == Subspace(3, [unit(3, 1), unit(3, 2)])
    assert theta_kernel(mob, 1) == Subspace(3, [unit(3, 2)])
    assert theta_kernel(mob, 2).dim == 0


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_theta_kernel_all_builtins(name):
    assert verify_theta_kernels(builtin(name))["pass"]


def test_theta_kernel_projective_plane_quadratic_fields():
    r = builtin("projective_plane")
    g = r.algebra
    quad = Subspace(g.dim, [unit(g.dim, g.labels.index("E31")), unit(g.dim, g.labels.index("E32"))])
    assert theta_kernel(r, 1) == quad == r.filtration.member(1)


@pytest.mark.parametrize("name", ["mobius", "projective_plane", "euclidean_plane", "affine_line"])
def test_diagrams_commute(name):
    r = builtin(name)
    for k in range(r.m + 1):
        assert verify_diagrams(r, k)["pass"]


@pytest.mark.parametrize("name", ["mobius", "projective_plane", "euclidean_plane"])
def test_theta_m_is_an_isomorphism(name):
    assert verify_theta_m_isomorphism(builtin(name))["pass"]


def test_homomorphism_check_rejects_bad_generators():
    aff = LieAlgebra(2, {(0, 1): {0: -1}})
    gens = [[TruncPoly(1, 2, {(0,): 1})], [TruncPoly(1, 2, {(2,): 1})]]
    with pytest.raises(RealizationError):
        KleinRealization("bad", aff, Subspace(2, [unit(2, 1)]), gens, 1)


def test_group_jet_examples(mob):
    assert group_jet(mob, Matrix.identity(2), 3).is_identity()
    g = Matrix([[2, 0], [0, Fraction(1, 2)]])
    assert group_jet(mob, g, 2) == JetDiffeo(1, 2, (TruncPoly(1, 2, {(1,): 4}),))
    u = Matrix([[1, 1], [0, 1]])
    assert action_target(mob, u) == (1,)
    assert group_jet(mob, u, 3).is_identity()


def test_adk_group_examples(mob):
    assert adk_group(mob, Matrix.identity(2), 1) == Matrix.identity(2)
    g = Matrix([[2, 0], [0, Fraction(1, 2)]])
    assert [mob.group.ad_coords(g, mob.algebra.basis(i)) for i in range(3)] == \
        [(4, 0, 0), (0, 1, 0), (0, 0, Fraction(1, 4))]
    for k in range(3):
        adk_group(mob, g, k)
    with pytest.raises(ValueError):
        adk_group(mob, Matrix([[1, 1], [0, 1]]), 1)


@pytest.mark.parametrize("name", sorted(set(BUILTINS) - {"translations3d"}))
def test_push_ad_crosscheck_samples(name):
    r = builtin(name)
    rng = random.Random(5)
    for _ in range(5):
        g = r.group.sample_G(rng)
        for k in range(r.m + 1):
            assert push_ad_crosscheck(r, g, k)["pass"]


@pytest.mark.parametrize("name,m,M", [("mobius", 2, 2), ("affine_line", 1, 1),
                                      ("translations2d", 0, 0), ("euclidean_plane", 1, 1),
                                      ("projective_plane", 2, 2)])
def test_geometric_order(name, m, M):
    res = geometric_order(builtin(name))
    assert (res["m"], res["M"]) == (m, M)


def test_geometric_order_rejects_non_isotropy_candidate(mob):
    with pytest.raises(ValueError):
        geometric_order(mob, [Matrix([[1, 1], [0, 1]])])


def test_minus_identity_is_skipped(mob):
    minus = Matrix([[-1, 0], [0, -1]])
    assert mob.group.chart.acts_trivially(minus)
    assert in_G_level(mob, minus, 2)
    assert geometric_order(mob, [minus])["M"] == 2


@pytest.mark.parametrize("name", ["mobius", "affine_line", "projective_plane"])
def test_splitting(name):
    r = builtin(name)
    M = geometric_order(r)["M"]
    rep = verify_splitting(r, r.group.sample_G0(random.Random(1)), M, 1, trials=10, seed=2)
    assert rep["pass"] and rep["pairs_tested"] > 0


@pytest.mark.parametrize("name", ["mobius", "affine_line", "euclidean_plane"])
def test_adk_faithful_on_isotropy_group(name):
    r = builtin(name)
    M = geometric_order(r)["M"]
    rng = random.Random(9)
    q = r.algebra.dim - r.filtration.member(M - 1).dim
    for _ in range(10):
        g = r.group.sample_G0(rng)
        if r.group.chart.acts_trivially(g):
            continue
        assert adk_group(r, g, M - 1) != Matrix.identity(q)
