"""Seeded random exact objects shared by the test modules."""

from fractions import Fraction

from kleinjet.exact import Matrix
from kleinjet.jets import JetDiffeo, JetField
from kleinjet.series import TruncPoly, monomials_upto


def rat(rng, height=4):
    return Fraction(rng.randint(-height, height), rng.randint(1, 3))


def matrix(rng, r, c, density=0.7):
    return Matrix([[rat(rng) if rng.random() < density else 0 for _ in range(c)]
                   for _ in range(r)], c)


def poly(rng, n, d, lo=0, density=0.6):
    terms = {e: rat(rng) for e in monomials_upto(n, d)
             if sum(e) >= lo and rng.random() < density}
    return TruncPoly(n, d, terms)


def field(rng, n, k, isotropic=False):
    return JetField(n, k, tuple(poly(rng, n, k, lo=1 if isotropic else 0) for _ in range(n)))


def diffeo(rng, n, k):
    while True:
        comps = tuple(poly(rng, n, k, lo=1) for _ in range(n))
        try:
            return JetDiffeo(n, k, comps)
        except ValueError:
            continue


def sympy_fields(polys, syms):
    import sympy as sp
    out = []
    for p in polys:
        expr = sp.Integer(0)
        for e, c in p.terms.items():
            t = sp.Rational(c.numerator, c.denominator)
            for s, a in zip(syms, e):
                t *= s ** a
            expr += t
        out.append(expr)
    return out


def from_sympy(exprs, syms, d):
    import sympy as sp
    out = []
    for ex in exprs:
        P = sp.Poly(sp.expand(ex), *syms)
        terms = {}
        for e, c in P.terms():
            if sum(e) <= d:
                terms[tuple(e)] = Fraction(int(c.p), int(c.q))
        out.append(TruncPoly(len(syms), d, terms))
    return out
