"""
Jets of vector fields and of origin-fixing diffeomorphisms at the origin of
Q^n, stored as Taylor polynomials (coefficient = derivative / factorial).
"""

from dataclasses import dataclass
from fractions import Fraction

from .exact import Matrix, Subspace
from .series import (TruncPoly, compose_maps, linear_matrix, poly_compose_trunc,
                     series_invert_diffeo)


class JetOrderError(ValueError):
    pass


@dataclass(frozen=True)
class JetField:
    n: int
    k: int
    components: tuple

    def __post_init__(self):
        comps = tuple(c.truncate(self.k) for c in self.components)
        if len(comps) != self.n:
            raise ValueError("need %d components" % self.n)
        for c in comps:
            if c.num_vars != self.n:
                raise ValueError("component in the wrong number of variables")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_polys(cls, polys, k):
        polys = list(polys)
        for p in polys:
            if p.max_degree < k:
                raise JetOrderError("data known only through degree %d, need %d"
                                    % (p.max_degree, k))
        return cls(len(polys), k, tuple(polys))

    @classmethod
    def zero(cls, n, k):
        return cls(n, k, tuple(TruncPoly.zero(n, k) for _ in range(n)))

    def __add__(self, other):
        _match(self, other)
        return JetField(self.n, self.k, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        _match(self, other)
        return JetField(self.n, self.k, tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, c):
        return JetField(self.n, self.k, tuple(a.scale(c) for a in self.components))

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def value(self):
        return tuple(c.constant() for c in self.components)

    def coefficients(self):
        """Flat coordinate vector over all components and monomials through degree k."""
        from .series import monomials_upto
        monos = monomials_upto(self.n, self.k)
        return tuple(c.coef(e) for c in self.components for e in monos)


def _match(a, b):
    if a.n != b.n:
        raise ValueError("jets in different dimensions")
    if a.k != b.k:
        raise JetOrderError("jet orders differ: %d vs %d" % (a.k, b.k))


def field_bracket(X, Y, d):
    """Components of [X, Y]^i = X^a d_a Y^i - Y^a d_a X^i through degree d."""
    n = len(X)
    out = []
    for i in range(n):
        acc = TruncPoly.zero(n, d)
        for a in range(n):
            acc = acc + X[a].mul(Y[i].derivative(a), d) - Y[a].mul(X[i].derivative(a), d)
        out.append(acc)
    return out


def jet_bracket(a, b):
    """{a, b}_k: two k-jets give the (k-1)-jet of the bracket of any representatives."""
    _match(a, b)
    if a.k < 1:
        raise JetOrderError("the bracket of two 0-jets is undefined")
    comps = field_bracket(a.components, b.components, a.k - 1)
    return JetField(a.n, a.k - 1, tuple(comps))


def isotropy_bracket(a, b):
    """Bracket on J_{k,0}: for jets vanishing at 0 the k-jet of [X, Y] is determined."""
    _match(a, b)
    if not (is_isotropic(a) and is_isotropic(b)):
        raise ValueError("both jets must vanish at the base point")
    return JetField(a.n, a.k, tuple(field_bracket(a.components, b.components, a.k)))


def project(a, j):
    if j > a.k:
        raise JetOrderError("cannot project a %d-jet to order %d" % (a.k, j))
    if j < 0:
        raise JetOrderError("negative order")
    return JetField(a.n, j, a.components)


def is_isotropic(a):
    return all(c.constant() == 0 for c in a.components)


isotropy_part = is_isotropic


def graded_decompose(a):
    """Pieces -1..k-1; piece i holds the homogeneous Taylor terms of degree i+1."""
    return {i: JetField(a.n, a.k, tuple(c.homogeneous(i + 1) for c in a.components))
            for i in range(-1, a.k)}


def jet_degree_piece(a, i):
    return graded_decompose(a)[i]


@dataclass(frozen=True)
class JetDiffeo:
    n: int
    k: int
    components: tuple

    def __post_init__(self):
        comps = tuple(c.truncate(self.k) for c in self.components)
        if len(comps) != self.n:
            raise ValueError("need %d components" % self.n)
        if any(c.constant() != 0 for c in comps):
            raise ValueError("jet of a diffeomorphism must fix the origin")
        if self.k >= 1 and linear_matrix(comps).det() == 0:
            raise ValueError("singular linear part")
        object.__setattr__(self, "components", comps)

    @classmethod
    def identity(cls, n, k):
        return cls(n, k, tuple(TruncPoly.var(n, k, i) for i in range(n)))

    def compose(self, other):
        """self o other."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        k = min(self.k, other.k)
        return JetDiffeo(self.n, k, tuple(compose_maps(
            [c.truncate(k) for c in self.components],
            [c.truncate(k) for c in other.components], k)))

    def inverse(self):
        return JetDiffeo(self.n, self.k, tuple(series_invert_diffeo(list(self.components), self.k)))

    def project(self, j):
        if j > self.k:
            raise JetOrderError("cannot project a %d-jet to order %d" % (self.k, j))
        return JetDiffeo(self.n, j, self.components)

    def is_identity(self):
        return self == JetDiffeo.identity(self.n, self.k)

    def linear_part(self):
        return linear_matrix(self.components)


def pushforward(f, x):
    """(Df . X) o f^{-1} through order k, for f a (k+1)-jet and X a k-jet."""
    if f.n != x.n:
        raise ValueError("dimension mismatch")
    if f.k != x.k + 1:
        raise JetOrderError("need a %d-jet of diffeomorphism, got order %d" % (x.k + 1, f.k))
    n, k = x.n, x.k
    DfX = []
    for i in range(n):
        acc = TruncPoly.zero(n, k)
        for a in range(n):
            acc = acc + f.components[i].derivative(a).mul(x.components[a], k)
        DfX.append(acc)
    finv = series_invert_diffeo([c.truncate(k) for c in f.components], k) if k else None
    if k == 0:
        return JetField(n, 0, tuple(DfX))
    return JetField(n, k, tuple(poly_compose_trunc(c, finv, k) for c in DfX))


def flat_rep(xi, eta):
    """Infinitesimal action of an isotropic (k+1)-jet xi on k-jets: {xi, eta}_{k+1}.

    Only the k-jet of eta enters because xi vanishes at the origin.  With the
    ordinary bracket of vector fields this equals d/dt of the pushforward by
    the flow of -xi at t = 0.
    """
    if not is_isotropic(xi):
        raise ValueError("xi must vanish at the base point")
    if xi.n != eta.n:
        raise ValueError("dimension mismatch")
    if xi.k != eta.k + 1:
        raise JetOrderError("need xi of order %d" % (eta.k + 1))
    comps = field_bracket(list(xi.components),
                          [c.truncate(eta.k) for c in eta.components], eta.k)
    return JetField(eta.n, eta.k, tuple(comps))


def is_transitive(family):
    family = list(family)
    if not family:
        return False
    n = family[0].n
    return Subspace(n, [a.value() for a in family]).dim == n


def stabilizer_is_trivial(family, f):
    """Whether pushforward by f fixes every jet of a transitive family."""
    family = list(family)
    if not is_transitive(family):
        raise ValueError("family is not transitive")
    return all(pushforward(f, y) == y for y in family)


def fixing_jets(family, order):
    """Solve pushforward(f, Y) = Y for all Y, for f an (order)-jet, degree by degree.

    The condition is Df . Y = Y o f through degree order-1.  The new unknown
    homogeneous part f_{r+1} enters the degree-r equation linearly, through
    Df_{r+1} . Y(0), once lower parts are fixed.  Returns (solution, dims)
    where dims[r] is the dimension of the solution set for f_{r+1}; the
    solution is unique iff every entry is 0.
    """
    from .exact import Matrix, solve, kernel
    from .series import monomials

    family = list(family)
    if not is_transitive(family):
        raise ValueError("family is not transitive")
    n = family[0].n
    k = order - 1
    if any(y.k < k for y in family):
        raise JetOrderError("family jets must have order >= %d" % k)
    fam = [project(y, k) for y in family]
    f = [TruncPoly.zero(n, order) for _ in range(n)]
    dims = []

    def residual(fc):
        out = []
        for y in fam:
            for i in range(n):
                lhs = TruncPoly.zero(n, k)
                for a in range(n):
                    lhs = lhs + fc[i].derivative(a).mul(y.components[a], k)
                rhs = _compose_any(y.components[i], fc, k)
                out.append(lhs - rhs)
        return out

    for r in range(order):
        monos = monomials(n, r + 1)
        unknowns = [(i, e) for i in range(n) for e in monos]

        def eq_vector(fc):
            return [p.coef(e) for p in residual(fc) for e in monomials(n, r)]

        base = eq_vector(f)
        cols = []
        for (i, e) in unknowns:
            g = list(f)
            g[i] = g[i] + TruncPoly(n, order, {e: 1})
            cols.append([a - b for a, b in zip(eq_vector(g), base)])
        A = Matrix.from_columns(cols, len(base))
        sol = solve(A, [-b for b in base])
        if sol is None:
            return None, dims
        dims.append(kernel(A).dim)
        f = list(f)
        for (i, e), c in zip(unknowns, sol):
            if c:
                f[i] = f[i] + TruncPoly(n, order, {e: c})
    return JetDiffeo(n, order, tuple(f)), dims


def _compose_any(p, subst, d):
    # f has zero constant term, so truncated composition is well defined
    from .series import _compose
    return _compose(p, [s.truncate(d) for s in subst], d)
