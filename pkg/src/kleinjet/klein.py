"""
Klein geometries realized by infinitesimal generators at a base point o.

A KleinRealization pairs a Lie algebra g and isotropy subalgebra g_0 with
polynomial vector fields near o = 0 such that x -> generator(x) is a Lie
algebra homomorphism into vector fields with the ordinary bracket.  The
built-in realizations come from matrix groups acting by linear fractional
maps on an affine chart, which also gives closed-form group-level data.

Generator convention: for a matrix A the field is -(d/dt) exp(tA).z at t=0;
the minus sign is what makes A -> field a homomorphism rather than an
anti-homomorphism for a left action.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Matrix, Subspace, Q, kernel, lincomb, solve, unit, vsub
from .jets import (JetDiffeo, JetField, field_bracket, flat_rep, jet_bracket,
                   project, pushforward)
from .liealg import (LieAlgebra, ad_k, descending_filtration, quotient_basis)
from .series import TruncPoly


class RealizationError(ValueError):
    pass


class ChartError(ValueError):
    pass


def small_rational(rng, height=5, nonzero=False, positive=False):
    while True:
        num = rng.randint(-height, height)
        den = rng.randint(1, height)
        x = Fraction(num, den)
        if positive and x <= 0:
            continue
        if nonzero and x == 0:
            continue
        return x


class ChartGroup:
    """(N+1)x(N+1) matrices acting on Q^N by z -> (A z + b) / (c.z + delta)."""

    def __init__(self, chart_dim, projective):
        self.N = chart_dim
        self.projective = projective

    def act_point(self, M, z):
        N = self.N
        den = sum((M[N, j] * z[j] for j in range(N)), M[N, N])
        if den == 0:
            raise ChartError("point leaves the chart")
        return tuple((sum((M[i, j] * z[j] for j in range(N)), M[i, N])) / den
                     for i in range(N))

    def expansion(self, M, k, at=None):
        """Taylor polynomials of L_M at the point `at` (default o), through degree k."""
        N = self.N
        at = tuple(Q(a) for a in (at or (0,) * N))
        zs = [TruncPoly(N, k, {(0,) * N: at[j], tuple(int(i == j) for i in range(N)): 1})
              for j in range(N)]
        num = [sum((zs[j].scale(M[i, j]) for j in range(N)), TruncPoly.const(N, k, M[i, N]))
               for i in range(N)]
        den = sum((zs[j].scale(M[N, j]) for j in range(N)), TruncPoly.const(N, k, M[N, N]))
        d0 = den.constant()
        if d0 == 0:
            raise ChartError("base point is sent out of the chart")
        u = (den - TruncPoly.const(N, k, d0)).scale(-1 / d0)
        inv = TruncPoly.const(N, k, 1)
        power = TruncPoly.const(N, k, 1)
        for _ in range(k):
            power = power.mul(u, k)
            inv = inv + power
        inv = inv.scale(1 / d0)
        return [p.mul(inv, k) for p in num]

    def generator(self, A):
        """-(d/dt) exp(tA).z at t = 0 as exact polynomials of degree <= 2."""
        N = self.N
        out = []
        for i in range(N):
            terms = {}
            terms[(0,) * N] = terms.get((0,) * N, 0) + A[i, N]
            for j in range(N):
                e = tuple(int(t == j) for t in range(N))
                terms[e] = terms.get(e, 0) + A[i, j] - (A[N, N] if i == j else 0)
                e2 = [0] * N
                e2[i] += 1
                e2[j] += 1
                terms[tuple(e2)] = terms.get(tuple(e2), 0) - A[N, j]
            out.append(TruncPoly(N, 2, terms).scale(-1))
        return out

    def acts_trivially(self, M):
        n = self.N + 1
        c = M[0, 0]
        return c != 0 and M == Matrix.identity(n).scale(c)

    def fixes_origin(self, M):
        return all(M[i, self.N] == 0 for i in range(self.N)) and M[self.N, self.N] != 0


@dataclass
class BuiltinGroup:
    chart: ChartGroup
    basis_matrices: tuple
    sample_G: object        # rng -> matrix
    sample_G0: object       # rng -> matrix fixing o
    candidates: tuple       # elements of G_0 used to decide the geometric order
    note: str = ""

    def ad_coords(self, M, x):
        """Coordinates of Ad(M) x in the algebra basis."""
        A = sum((b.scale(c) for b, c in zip(self.basis_matrices, x) if c),
                Matrix.zeros(*self.basis_matrices[0].shape))
        conj = M @ A @ M.inverse()
        cols = Matrix.from_columns([b.flatten() for b in self.basis_matrices],
                                   len(self.basis_matrices[0].flatten()))
        c = solve(cols, conj.flatten())
        if c is None:
            raise RealizationError("Ad(g) left the algebra; g is not in the group")
        return c


@dataclass
class KleinRealization:
    """Lie algebra, isotropy subalgebra and generator fields at o = 0.

    `generators[i]` holds the components of the field of basis element i.
    With `data_order=None` these are exact polynomials; otherwise they are
    Taylor data known only through that order.
    """
    name: str
    algebra: LieAlgebra
    g0: Subspace
    generators: tuple
    n: int
    data_order: object = None
    group: object = None
    check: bool = True
    _filt: object = field(default=None, repr=False)

    def __post_init__(self):
        self.generators = tuple(tuple(g) for g in self.generators)
        if len(self.generators) != self.algebra.dim:
            raise RealizationError("need one generator per basis element")
        if self.n != self.algebra.dim - self.g0.dim:
            raise RealizationError("chart dimension must equal dim g - dim g_0")
        if self.check:
            self.validate()

    @property
    def filtration(self):
        if self._filt is None:
            self._filt = descending_filtration(self.algebra, self.g0)
        return self._filt

    @property
    def m(self):
        return self.filtration.order

    def _polys(self, x, k):
        x = tuple(Q(c) for c in x)
        if self.data_order is not None and k > self.data_order:
            raise RealizationError("generators known only through order %d" % self.data_order)
        n = self.n
        out = []
        for i in range(n):
            terms = {}
            for c, gen in zip(x, self.generators):
                if c:
                    for e, v in gen[i].terms.items():
                        terms[e] = terms.get(e, 0) + c * v
            out.append(TruncPoly(n, k, terms))
        return out

    def field(self, x, degree=None):
        if degree is None:
            degree = self.data_order if self.data_order is not None else max(
                [p.max_degree for gen in self.generators for p in gen] + [0])
        return self._polys(x, degree)

    def validate(self):
        g = self.algebra
        d = self.data_order
        for b in self.g0.basis:
            if any(p.constant() for p in self._polys(b, 0)):
                raise RealizationError("generator of an isotropy element does not vanish at o")
        values = Subspace(self.n, [[p.constant() for p in self._polys(g.basis(i), 0)]
                                   for i in range(g.dim)])
        if values.dim != self.n:
            raise RealizationError("generators are not transitive at o")
        deg = max([p.max_degree for gen in self.generators for p in gen] + [1])
        work = (d - 1) if d is not None else 2 * deg
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = self._polys(g.basis_bracket(i, j), work)
                rhs = field_bracket(self._polys(g.basis(i), work + 1),
                                    self._polys(g.basis(j), work + 1), work)
                if lhs != rhs:
                    raise RealizationError("generator map is not a homomorphism on (%s, %s)"
                                           % (g.labels[i], g.labels[j]))


def theta_k(r, x, k):
    """k-jet at o of the generator of x."""
    return JetField(r.n, k, tuple(r._polys(x, k)))


def theta_matrix(r, k):
    """Matrix of theta_k from g to the flat jet coefficient space."""
    cols = [theta_k(r, r.algebra.basis(i), k).coefficients() for i in range(r.algebra.dim)]
    return Matrix.from_columns(cols, len(cols[0]))


def theta_kernel(r, k):
    return kernel(theta_matrix(r, k))


def verify_theta_kernels(r, k_max=None):
    filt = r.filtration
    if k_max is None:
        k_max = (r.m if r.m is not None else filt.stabilized_at) + 1
    checks = []
    for k in range(k_max + 1):
        ker = theta_kernel(r, k)
        gk = filt.member(k)
        checks.append({"k": k, "kernel_dim": ker.dim, "filtration_dim": gk.dim,
                       "pass": ker == gk})
    return {"realization": r.name, "m": r.m, "checks": checks,
            "pass": all(c["pass"] for c in checks)}


def verify_diagrams(r, k):
    """Projection, bracket and ad/flat squares for theta at level k."""
    g = r.algebra
    basis = [g.basis(i) for i in range(g.dim)]
    proj_fail = []
    for j in range(k):
        for i, x in enumerate(basis):
            if project(theta_k(r, x, k), j) != theta_k(r, x, j):
                proj_fail.append({"j": j, "x": g.labels[i]})
    br_fail = []
    for i in range(g.dim):
        for j in range(g.dim):
            lhs = theta_k(r, g.bracket(basis[i], basis[j]), k)
            rhs = jet_bracket(theta_k(r, basis[i], k + 1), theta_k(r, basis[j], k + 1))
            if lhs != rhs:
                br_fail.append({"a": g.labels[i], "b": g.labels[j]})
    filt = r.filtration
    gk = filt.member(k)
    qb = quotient_basis(g, gk)
    ad_fail = []
    for x in filt.member(0).basis:
        mat = ad_k(g, filt, k, x)
        for col, y in enumerate(qb):
            img = lincomb(mat.col(col), qb, g.dim)
            lhs = theta_k(r, img, k)
            rhs = flat_rep(theta_k(r, x, k + 1), theta_k(r, y, k))
            if lhs != rhs:
                ad_fail.append({"x": list(map(str, x)), "y": list(map(str, y))})
    return {"realization": r.name, "k": k,
            "projection": {"pass": not proj_fail, "failures": proj_fail},
            "bracket": {"pass": not br_fail, "failures": br_fail},
            "ad_flat": {"pass": not ad_fail, "failures": ad_fail},
            "pass": not (proj_fail or br_fail or ad_fail)}


def verify_theta_m_isomorphism(r):
    """theta_m is injective and carries [,] to { , }_{m+1}."""
    m = r.m
    if m is None:
        raise RealizationError("realization is not almost effective")
    injective = theta_kernel(r, m).dim == 0
    return {"m": m, "injective": injective,
            "bracket": verify_diagrams(r, m)["bracket"]["pass"],
            "pass": injective and verify_diagrams(r, m)["bracket"]["pass"]}


def _require_group(r):
    if r.group is None:
        raise RealizationError("realization %r has no group-level data" % r.name)
    return r.group


def group_jet(r, g, k):
    """Jet of L_g at o through order k, recentred so that its target is the origin."""
    grp = _require_group(r)
    comps = grp.chart.expansion(g, k)
    target = tuple(c.constant() for c in comps)
    comps = [c - TruncPoly.const(r.n, k, t) for c, t in zip(comps, target)]
    return JetDiffeo(r.n, k, tuple(comps))


def action_target(r, g):
    return _require_group(r).chart.act_point(g, (0,) * r.n)


def push_ad_crosscheck(r, g, k):
    """Pushforward of theta_k(x) by L_g equals the jet of the generator of Ad(g)x.

    For g outside G_0 the right side is taken at the target point L_g(o).
    """
    grp = _require_group(r)
    f = group_jet(r, g, k + 1)
    q = action_target(r, g)
    failures = []
    g_alg = r.algebra
    for i in range(g_alg.dim):
        x = g_alg.basis(i)
        lhs = pushforward(f, theta_k(r, x, k))
        y = grp.ad_coords(g, x)
        polys = [p.shift(q).truncate(k) for p in r._polys(y, max(k, 2))]
        rhs = JetField(r.n, k, tuple(polys))
        if lhs != rhs:
            failures.append(g_alg.labels[i])
    return {"pass": not failures, "failures": failures}


class AdRouteMismatch(AssertionError):
    pass


def adk_group(r, g, k):
    """Matrix of Ad_k(g) on g/g_k, computed by Ad and by jet pushforward."""
    grp = _require_group(r)
    if not grp.chart.fixes_origin(g):
        raise ValueError("group element does not fix the base point")
    alg = r.algebra
    gk = r.filtration.member(k)
    qb = quotient_basis(alg, gk)
    q = alg.dim - gk.dim
    via_ad = [gk.quotient_coords(grp.ad_coords(g, y)) for y in qb]
    f = group_jet(r, g, k + 1)
    T = theta_matrix(r, k)
    via_jets = []
    for y in qb:
        img = pushforward(f, theta_k(r, y, k)).coefficients()
        pre = solve(T, img)
        if pre is None:
            raise AdRouteMismatch("pushforward left J_k(g)_o")
        via_jets.append(gk.quotient_coords(pre))
    if via_ad != via_jets:
        raise AdRouteMismatch("Ad route and pushforward route disagree")
    if not q:
        return Matrix.zeros(0, 0)
    return Matrix.from_columns(via_ad, q)


def in_G_level(r, g, level):
    """g in G_level: fixes o and Ad(g)x - x in g_{level-1} for every x."""
    grp = _require_group(r)
    if not grp.chart.fixes_origin(g):
        return False
    if level == 0:
        return True
    sub = r.filtration.member(level - 1)
    alg = r.algebra
    return all(sub.contains(vsub(grp.ad_coords(g, alg.basis(i)), alg.basis(i)))
               for i in range(alg.dim))


def geometric_order(r, candidates=None):
    grp = _require_group(r)
    m = r.m
    if m is None:
        raise RealizationError("realization is not almost effective")
    cands = list(grp.candidates if candidates is None else candidates)
    for c in cands:
        if not grp.chart.fixes_origin(c):
            raise ValueError("candidate %r is not in G_0" % (c,))
    for c in cands:
        if grp.chart.acts_trivially(c):
            continue
        if in_G_level(r, c, m):
            return {"m": m, "M": m + 1, "witness": c}
    return {"m": m, "M": m, "witness": None}


def verify_splitting(r, g, M, k=1, trials=10, seed=0):
    grp = _require_group(r)
    proj_ok = group_jet(r, g, M + k).project(M) == group_jet(r, g, M)
    rng = random.Random(seed)
    distinct = []
    tested = 0
    for _ in range(trials):
        h = grp.sample_G0(rng)
        if grp.chart.acts_trivially(h):
            continue
        a = grp.sample_G(rng)
        b = a @ h
        try:
            qa, qb = action_target(r, a), action_target(r, b)
            ja, jb = group_jet(r, a, M), group_jet(r, b, M)
        except ChartError:
            continue
        assert qa == qb
        tested += 1
        if ja == jb:
            distinct.append({"a": _mstr(a), "b": _mstr(b)})
    return {"projection": proj_ok, "pairs_tested": tested,
            "equal_jet_counterexamples": distinct,
            "pass": proj_ok and not distinct}


def _mstr(M):
    from .exact import qstr
    return [[qstr(x) for x in row] for row in M.rows]


# ---------------------------------------------------------------- built-ins

def _E(n, i, j):
    rows = [[0] * n for _ in range(n)]
    rows[i][j] = 1
    return Matrix(rows, n)


def _from_group(name, chart, mats, labels, g0_idx, sample_G, sample_G0, candidates, note=""):
    alg = LieAlgebra.from_matrices(mats, labels)
    g0 = Subspace.coordinate(alg.dim, g0_idx)
    gens = [chart.generator(A) for A in mats]
    grp = BuiltinGroup(chart, tuple(mats), sample_G, sample_G0, tuple(candidates), note)
    return KleinRealization(name, alg, g0, gens, chart.N, None, grp)


def _affine_matrix(A, b):
    N = A.nrows
    rows = [list(A.row(i)) + [b[i]] for i in range(N)]
    rows.append([0] * N + [1])
    return Matrix(rows, N + 1)


def translations(N):
    chart = ChartGroup(N, projective=False)
    mats = [_E(N + 1, i, N) for i in range(N)]

    def sample_G(rng):
        return _affine_matrix(Matrix.identity(N), [small_rational(rng) for _ in range(N)])

    def sample_G0(rng):
        return Matrix.identity(N + 1)

    return _from_group("translations%dd" % N, chart, mats,
                       ["d%d" % (i + 1) for i in range(N)], [], sample_G, sample_G0,
                       [Matrix.identity(N + 1)], "G_0 trivial")


def affine_line():
    chart = ChartGroup(1, projective=False)
    mats = [_E(2, 0, 1), _E(2, 0, 0)]

    def sample_G(rng):
        return Matrix([[small_rational(rng, positive=True), small_rational(rng)], [0, 1]])

    def sample_G0(rng):
        return Matrix([[small_rational(rng, positive=True), 0], [0, 1]])

    cands = [Matrix([[a, 0], [0, 1]]) for a in (Fraction(2), Fraction(1, 3), Fraction(5, 2))]
    return _from_group("affine_line", chart, mats, ["d", "zd"], [1], sample_G, sample_G0,
                       cands, "z -> a z + b, a > 0; G_0 = positive scalings")


def rational_rotation(t):
    t = Q(t)
    c, s = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
    return Matrix([[c, -s], [s, c]])


def euclidean_plane():
    chart = ChartGroup(2, projective=False)
    mats = [_E(3, 0, 2), _E(3, 1, 2), _E(3, 1, 0) - _E(3, 0, 1)]

    def sample_G(rng):
        return _affine_matrix(rational_rotation(small_rational(rng)),
                              [small_rational(rng), small_rational(rng)])

    def sample_G0(rng):
        return _affine_matrix(rational_rotation(small_rational(rng)), [0, 0])

    cands = [_affine_matrix(rational_rotation(t), [0, 0])
             for t in (Fraction(1), Fraction(1, 2), Fraction(2, 3))]
    cands.append(_affine_matrix(Matrix([[-1, 0], [0, -1]]), [0, 0]))
    return _from_group("euclidean_plane", chart, mats, ["d1", "d2", "rot"], [2],
                       sample_G, sample_G0, cands,
                       "rotations with rational cosine and sine")


def _random_sl(n, rng):
    M = Matrix.identity(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        M = M @ (Matrix.identity(n) + _E(n, i, j).scale(small_rational(rng)))
    a = small_rational(rng, nonzero=True)
    D = [[0] * n for _ in range(n)]
    for i in range(n):
        D[i][i] = 1
    i = rng.randrange(n - 1)
    D[i][i] = a
    D[i + 1][i + 1] = 1 / a
    return M @ Matrix(D, n)


def mobius():
    chart = ChartGroup(1, projective=True)
    e, f = _E(2, 0, 1), _E(2, 1, 0)
    h = _E(2, 0, 0) - _E(2, 1, 1)
    mats = [e, h, f]

    def sample_G(rng):
        while True:
            M = _random_sl(2, rng)
            if M[1, 1] != 0:
                return M

    def sample_G0(rng):
        a = small_rational(rng, nonzero=True)
        return Matrix([[a, 0], [small_rational(rng), 1 / a]])

    cands = [Matrix([[-1, 0], [0, -1]]), Matrix([[2, 0], [0, Fraction(1, 2)]]),
             Matrix([[1, 0], [1, 1]]), Matrix([[-1, 0], [3, -1]])]
    return _from_group("mobius", chart, mats, ["e", "h", "f"], [1, 2], sample_G, sample_G0,
                       cands, "w = (a z + b)/(c z + d); G_0 = lower triangular (fixes 0)")


def projective_plane():
    from .parabolic import build_graded_sl
    chart = ChartGroup(2, projective=True)
    gs = build_graded_sl(3)
    mats = list(gs.matrices)
    labels = list(gs.algebra.labels)
    # o = [0:0:1]; the stabilizer kills the entries (1,3) and (2,3)
    g0_idx = [i for i, A in enumerate(mats) if A[0, 2] == 0 and A[1, 2] == 0]

    def sample_G(rng):
        while True:
            M = _random_sl(3, rng)
            if M[2, 2] != 0:
                return M

    def sample_G0(rng):
        while True:
            A = _random_sl(2, rng)
            lam = 1 / A.det()
            M = Matrix([[A[0, 0], A[0, 1], 0], [A[1, 0], A[1, 1], 0],
                        [small_rational(rng), small_rational(rng), lam]], 3)
            if M.det() == 1:
                return M

    cands = [Matrix([[2, 0, 0], [0, 1, 0], [0, 0, Fraction(1, 2)]]),
             Matrix([[1, 0, 0], [0, 1, 0], [1, 0, 1]]),
             Matrix([[0, -1, 0], [1, 0, 0], [0, 0, 1]]),
             Matrix([[-1, 0, 0], [0, -1, 0], [0, 0, 1]])]
    return _from_group("projective_plane", chart, mats, labels, g0_idx, sample_G, sample_G0,
                       cands, "chart [z1:z2:1], o = [0:0:1]")


BUILTINS = {
    "translations1d": lambda: translations(1),
    "translations2d": lambda: translations(2),
    "translations3d": lambda: translations(3),
    "affine_line": affine_line,
    "euclidean_plane": euclidean_plane,
    "mobius": mobius,
    "projective_plane": projective_plane,
}


def builtin(name):
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError("unknown built-in realization %r; choose from %s"
                       % (name, ", ".join(sorted(BUILTINS)))) from None
