"""
Multivariate polynomials over Q truncated at a total degree.

A TruncPoly with max_degree d stands for a power series known through
degree d.  Products and compositions drop every term above the target
degree.
"""

from fractions import Fraction
from itertools import combinations_with_replacement

from .exact import Q, Matrix


def monomials(num_vars, degree):
    """Exponent tuples of exactly the given total degree, graded-lex order."""
    out = []
    for combo in combinations_with_replacement(range(num_vars), degree):
        e = [0] * num_vars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def monomials_upto(num_vars, degree):
    return [e for d in range(degree + 1) for e in monomials(num_vars, d)]


def _glex(e):
    return (sum(e), tuple(-x for x in e))


class TruncPoly:

    __slots__ = ("num_vars", "max_degree", "terms")

    def __init__(self, num_vars, max_degree, terms=None):
        if max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        self.num_vars = num_vars
        self.max_degree = max_degree
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != num_vars or any(x < 0 for x in e):
                raise ValueError("bad exponent %r" % (e,))
            if sum(e) > max_degree:
                continue
            c = Q(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def zero(cls, n, d):
        return cls(n, d)

    @classmethod
    def const(cls, n, d, c):
        return cls(n, d, {(0,) * n: c})

    @classmethod
    def var(cls, n, d, i):
        e = [0] * n
        e[i] = 1
        return cls(n, d, {tuple(e): 1})

    def _same(self, other):
        if self.num_vars != other.num_vars:
            raise ValueError("variable count mismatch")

    def __eq__(self, other):
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return (self.num_vars == other.num_vars and self.max_degree == other.max_degree
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.num_vars, self.max_degree, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "TruncPoly(0; d=%d)" % self.max_degree
        parts = []
        for e in self.sorted_exponents():
            c = self.terms[e]
            mono = "*".join("x%d^%d" % (i, p) if p > 1 else "x%d" % i
                            for i, p in enumerate(e) if p)
            parts.append("%s%s" % (c, "*" + mono if mono else ""))
        return "TruncPoly(%s; d=%d)" % (" + ".join(parts), self.max_degree)

    def sorted_exponents(self):
        return sorted(self.terms, key=_glex)

    def coef(self, e):
        return self.terms.get(tuple(e), Fraction(0))

    def is_zero(self):
        return not self.terms

    def constant(self):
        return self.coef((0,) * self.num_vars)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def truncate(self, d):
        return TruncPoly(self.num_vars, d, self.terms)

    def homogeneous(self, d):
        return TruncPoly(self.num_vars, self.max_degree,
                         {e: c for e, c in self.terms.items() if sum(e) == d})

    def __add__(self, other):
        self._same(other)
        d = min(self.max_degree, other.max_degree)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return TruncPoly(self.num_vars, d, t)

    def __neg__(self):
        return TruncPoly(self.num_vars, self.max_degree,
                         {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Q(c)
        return TruncPoly(self.num_vars, self.max_degree,
                         {e: c * v for e, v in self.terms.items()})

    def mul(self, other, d=None):
        self._same(other)
        if d is None:
            d = min(self.max_degree, other.max_degree)
        t = {}
        for e1, c1 in self.terms.items():
            s1 = sum(e1)
            if s1 > d:
                continue
            for e2, c2 in other.terms.items():
                if s1 + sum(e2) > d:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return TruncPoly(self.num_vars, d, t)

    def __mul__(self, other):
        if isinstance(other, TruncPoly):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def derivative(self, var):
        t = {}
        for e, c in self.terms.items():
            if e[var]:
                f = list(e)
                f[var] -= 1
                t[tuple(f)] = c * e[var]
        return TruncPoly(self.num_vars, max(self.max_degree - 1, 0), t)

    def evaluate(self, point):
        point = [Q(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, p in zip(point, e):
                if p:
                    term *= x ** p
            total += term
        return total

    def linear_part(self):
        return tuple(self.coef(tuple(int(j == i) for j in range(self.num_vars)))
                     for i in range(self.num_vars))

    def shift(self, point):
        """Re-expand p(point + x); exact, valid when p is a genuine polynomial."""
        n = self.num_vars
        d = self.max_degree
        subst = [TruncPoly(n, d, {(0,) * n: Q(a), tuple(int(j == i) for j in range(n)): 1})
                 for i, a in enumerate(point)]
        return _compose(self, subst, d)


def poly_mul_trunc(p, q, d):
    return p.mul(q, d)


def poly_derivative(p, var):
    return p.derivative(var)


def _compose(p, subst, d):
    n = subst[0].num_vars if subst else p.num_vars
    if len(subst) != p.num_vars:
        raise ValueError("need one substitution per variable of p")
    powers = [[TruncPoly.const(n, d, 1)] for _ in subst]
    out = TruncPoly.zero(n, d)
    for e, c in p.terms.items():
        term = TruncPoly.const(n, d, c)
        for i, k in enumerate(e):
            while len(powers[i]) <= k:
                powers[i].append(powers[i][-1].mul(subst[i], d))
            if k:
                term = term.mul(powers[i][k], d)
        out = out + term
    return out


def poly_compose_trunc(p, subst, d):
    """p(subst_1, ..., subst_n) through total degree d.

    Every substituted series must have zero constant term: p is only known
    through its max_degree, so a shifted argument would mix in unknown
    higher-order coefficients.
    """
    for s in subst:
        if s.constant() != 0:
            raise ValueError("substituted series must have zero constant term")
    if d > min([p.max_degree] + [s.max_degree for s in subst]):
        raise ValueError("target degree exceeds the known degree of the inputs")
    return _compose(p, subst, d)


def linear_matrix(f):
    """Jacobian at the origin of a map given by component series."""
    return Matrix([comp.linear_part() for comp in f], len(f))


def series_invert_diffeo(f, d):
    """Compositional inverse g of a map f with f(0) = 0, through degree d."""
    n = len(f)
    for comp in f:
        if comp.num_vars != n:
            raise ValueError("map must be square")
        if comp.constant() != 0:
            raise ValueError("map must fix the origin")
    lin = linear_matrix(f)
    try:
        inv = lin.inverse()
    except ZeroDivisionError:
        raise ValueError("singular linear part") from None
    f = [c.truncate(d) for c in f]
    nonlin = [c - TruncPoly(n, d, {e: v for e, v in c.terms.items() if sum(e) == 1})
              for c in f]
    ident = [TruncPoly.var(n, d, i) for i in range(n)]

    def apply_inv(vs):
        return [sum((v.scale(inv[i, j]) for j, v in enumerate(vs)), TruncPoly.zero(n, d))
                for i in range(n)]

    g = apply_inv(ident)
    for _ in range(d):
        ng = [_compose(c, g, d) for c in nonlin]
        g = apply_inv([a - b for a, b in zip(ident, ng)])
    return g


def compose_maps(f, g, d):
    """The map f o g through degree d (both fix the origin)."""
    return [poly_compose_trunc(c, g, d) for c in f]
