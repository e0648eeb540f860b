"""
Differential equations of finite type induced by group actions z = f(x, y).

Parameters x are group coordinates, y and z points of the homogeneous space.
Expansions of y -> f(x, y) around a base point y0 give the derivative tuples
on which candidate relations are evaluated; relations are derived by exact
interpolation (an unknown-coefficient nullspace) rather than by symbolic
elimination.
"""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .exact import Matrix, Q, kernel, qstr
from .klein import ChartError, ChartGroup, small_rational
from .series import TruncPoly


class SampleDegeneracyError(RuntimeError):
    pass


@dataclass
class ParametricAction:
    """z = f(params, y) on an n-dimensional space with r group parameters.

    `expand(params, y0, k)` returns n TruncPolys in the shift t = y - y0.
    `generators(z)` and `maurer_cartan(y)` are only given for groups acting
    on themselves: they return the matrices xi[i][a] and omega[a][j].
    """
    name: str
    n: int
    r: int
    expand: object
    sample_params: object
    sample_point: object
    compose: object = None
    generators: object = None
    maurer_cartan: object = None
    geometric_order: int = None


def action_jet(action, params, y0, k):
    params = tuple(Q(p) for p in params)
    y0 = tuple(Q(v) for v in y0)
    if len(params) != action.r:
        raise ValueError("%s takes %d parameters" % (action.name, action.r))
    if len(y0) != action.n:
        raise ValueError("%s acts on points of dimension %d" % (action.name, action.n))
    return action.expand(params, y0, k)


def derivatives(poly, order):
    """(w, w', ..., w^(order)) at the base point from a univariate expansion."""
    return tuple(poly.coef((j,)) * math.factorial(j) for j in range(order + 1))


# ------------------------------------------------------------ built-in actions

def _mobius_matrix(params):
    a, b, c, d = params
    if a * d - b * c != 1:
        raise ValueError("Mobius parameters must satisfy ad - bc = 1")
    return Matrix([[a, b], [c, d]])


def _mobius_expand(params, y0, k):
    M = _mobius_matrix(params)
    return ChartGroup(1, True).expansion(M, k, at=y0)


def _mobius_params(rng):
    a = small_rational(rng, nonzero=True)
    b, c = small_rational(rng), small_rational(rng)
    return (a, b, c, (1 + b * c) / a)


def _mobius_point(rng):
    return (small_rational(rng),)


def mobius_action():
    def expand(params, y0, k):
        try:
            return _mobius_expand(params, y0, k)
        except ChartError:
            raise ChartError("c*y0 + d = 0: base point is the pole") from None

    return ParametricAction("mobius", 1, 4, expand, _mobius_params, _mobius_point,
                            compose=_mobius_compose, geometric_order=2)


def _mobius_compose(p, q):
    M = _mobius_matrix(p) @ _mobius_matrix(q)
    return (M[0, 0], M[0, 1], M[1, 0], M[1, 1])


def affine_line_action():
    def expand(params, y0, k):
        a, b = params
        if a == 0:
            raise ValueError("a must be nonzero")
        (y,) = y0
        return [TruncPoly(1, k, {(0,): a * y + b, (1,): a})]

    def sample_params(rng):
        return (small_rational(rng, nonzero=True), small_rational(rng))

    def compose(p, q):
        return (p[0] * q[0], p[0] * q[1] + p[1])

    return ParametricAction("affine_line", 1, 2, expand, sample_params, _mobius_point,
                            compose=compose, geometric_order=1)


def translation_action(n=1):
    def expand(params, y0, k):
        out = []
        for i in range(n):
            e = tuple(int(j == i) for j in range(n))
            out.append(TruncPoly(n, k, {(0,) * n: y0[i] + params[i], e: 1}))
        return out

    def sample(rng):
        return tuple(small_rational(rng) for _ in range(n))

    def ident(_):
        return Matrix.identity(n)

    return ParametricAction("translations%dd" % n, n, n, expand, sample, sample,
                            compose=lambda p, q: tuple(a + b for a, b in zip(p, q)),
                            generators=ident, maurer_cartan=ident, geometric_order=0)


def affine_group_action():
    """The group {y -> a y + b} acting on itself: (a, b).(y1, y2) = (a y1, a y2 + b)."""

    def expand(params, y0, k):
        a, b = params
        y1, y2 = y0
        if a == 0 or y1 == 0:
            raise ValueError("group coordinates need a nonzero first entry")
        return [TruncPoly(2, k, {(0, 0): a * y1, (1, 0): a}),
                TruncPoly(2, k, {(0, 0): a * y2 + b, (0, 1): a})]

    def sample(rng):
        return (small_rational(rng, nonzero=True), small_rational(rng))

    def compose(p, q):
        return (p[0] * q[0], p[0] * q[1] + p[1])

    def xi(z):
        # left-invariant fields at z: z1 * d_1, z1 * d_2
        return Matrix([[z[0], 0], [0, z[0]]])

    def omega(y):
        # left Maurer-Cartan form y^{-1} dy
        return Matrix([[1 / y[0], 0], [0, 1 / y[0]]])

    return ParametricAction("affine_group", 2, 2, expand, sample, sample, compose=compose,
                            generators=xi, maurer_cartan=omega, geometric_order=0)


ACTIONS = {
    "mobius": mobius_action,
    "affine_line": affine_line_action,
    "translations1d": lambda: translation_action(1),
    "translations2d": lambda: translation_action(2),
    "translations3d": lambda: translation_action(3),
    "affine_group": affine_group_action,
}


def builtin_action(name):
    try:
        return ACTIONS[name]()
    except KeyError:
        raise KeyError("unknown built-in action %r; choose from %s"
                       % (name, ", ".join(sorted(ACTIONS)))) from None


def sample_jet(action, rng, k):
    """Random (params, y0, expansion) avoiding chart singularities."""
    for _ in range(1000):
        params = action.sample_params(rng)
        y0 = action.sample_point(rng)
        try:
            return params, y0, action_jet(action, params, y0, k)
        except (ChartError, ValueError):
            continue
    raise SampleDegeneracyError("could not sample a regular point")


# ------------------------------------------------------------------ Mobius

def rational_sqrt(x):
    x = Q(x)
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p != x.numerator or q * q != x.denominator:
        return None
    return Fraction(p, q)


def solve_params_mobius(w0, w1, w2, y0=0):
    """(a, b, c, d) with ad - bc = 1 whose action has the given 2-jet at y0.

    Unique up to an overall sign; the sign with c*y0 + d > 0 is returned.
    """
    w0, w1, w2, y0 = Q(w0), Q(w1), Q(w2), Q(y0)
    if w1 == 0:
        raise ValueError("w'(y0) = 0 is not the jet of a Mobius map")
    root = rational_sqrt(w1)
    if root is None:
        raise ValueError("w'(y0) = %s is not the square of a rational" % qstr(w1))
    D = 1 / root                 # c*y0 + d, since w' = 1/(c y0 + d)^2
    c = -w2 * D ** 3 / 2         # w'' = -2c/(c y0 + d)^3
    d = D - c * y0
    # a*y0 + b = w0*D and a*d - b*c = 1 give a*D = 1 + w0*D*c
    a = (1 + w0 * D * c) / D
    b = w0 * D - a * y0
    return (a, b, c, d)


def schwarzian_residual(w1, w2, w3):
    return w3 * w1 - Fraction(3, 2) * w2 * w2


def verify_schwarzian_symbolic(y0=0):
    """w'''w' - 3/2 (w'')^2 = 0 over Q(a, b, c) on both charts of SL(2)."""
    import sympy as sp

    a, b, c, d, y = sp.symbols("a b c d y")
    charts = {"a!=0": {d: (1 + b * c) / a}, "c!=0": {b: (a * d - 1) / c}}
    out = {}
    for name, sub in charts.items():
        w = ((a * y + b) / (c * y + d)).subs(sub)
        ders = [sp.diff(w, y, j).subs(y, sp.Rational(y0)) for j in (1, 2, 3)]
        res = sp.together(ders[2] * ders[0] - sp.Rational(3, 2) * ders[1] ** 2)
        num, _ = sp.fraction(res)
        num = sp.expand(num)
        out[name] = {"residual_numerator": str(num), "pass": num == 0}
    return {"y0": qstr(y0), "charts": out, "pass": all(v["pass"] for v in out.values())}


def schwarzian_spot_checks(trials=50, seed=0):
    rng = random.Random(seed)
    act = mobius_action()
    bad = []
    for _ in range(trials):
        params, y0, jet = sample_jet(act, rng, 3)
        w = derivatives(jet[0], 3)
        if schwarzian_residual(w[1], w[2], w[3]) != 0:
            bad.append({"params": [qstr(p) for p in params], "y0": qstr(y0[0])})
    return {"trials": trials, "seed": seed, "counterexamples": bad, "pass": not bad}


# ------------------------------------------------------------------ ODEs

@dataclass(frozen=True)
class OdeRelation:
    """Polynomial relation in (y, w, w', ..., w^(order)) read as relation = 0.

    `terms` maps an exponent tuple over (y, w, w', ..., w^(order)) to its
    coefficient.
    """
    order: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(e): Q(c) for e, c in self.terms.items() if Q(c) != 0}
        for e in clean:
            if len(e) != self.order + 2:
                raise ValueError("exponent tuples must have length order + 2")
        if not clean:
            raise ValueError("relation is identically zero")
        object.__setattr__(self, "terms", clean)

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    def evaluate(self, y, derivs):
        vals = (Q(y),) + tuple(Q(v) for v in derivs[:self.order + 1])
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, p in zip(vals, e):
                if p:
                    t *= v ** p
            total += t
        return total

    @classmethod
    def from_derivative_powers(cls, order, monos):
        """monos: list of ({derivative order: power}, coef); key 'y' for y."""
        terms = {}
        for powers, coef in monos:
            e = [0] * (order + 2)
            for key, p in powers.items():
                if key == "y":
                    e[0] += p
                else:
                    e[int(key) + 1] += p
            terms[tuple(e)] = terms.get(tuple(e), 0) + Q(coef)
        return cls(order, terms)

    def describe(self):
        names = ["y", "w"] + ["w" + "'" * j if j <= 3 else "w^(%d)" % j
                              for j in range(1, self.order + 1)]
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-_top(t[0]), t[0])):
            mono = "*".join(n if p == 1 else "%s^%d" % (n, p) for n, p in zip(names, e) if p)
            if not mono:
                parts.append(qstr(c))
            elif c in (1, -1):
                parts.append(("-" if c < 0 else "") + mono)
            else:
                parts.append("%s*%s" % (qstr(c), mono))
        return " + ".join(parts).replace("+ -", "- ") + " = 0"


def _top(e):
    return max((i for i, p in enumerate(e) if p), default=-1)


SCHWARZIAN = OdeRelation(3, {(0, 0, 1, 0, 1): 1, (0, 0, 0, 2, 0): Fraction(-3, 2)})


def verify_ode(action, rel, trials=50, seed=0):
    if action.n != 1:
        raise ValueError("verify_ode evaluates scalar ODE relations (n = 1)")
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        params, y0, jet = sample_jet(action, rng, rel.order)
        val = rel.evaluate(y0[0], derivatives(jet[0], rel.order))
        if val != 0:
            bad.append({"params": [qstr(p) for p in params], "y0": qstr(y0[0]),
                        "value": qstr(val)})
    return {"action": action.name, "relation": rel.describe(), "trials": trials,
            "seed": seed, "counterexamples": bad, "pass": not bad}


def verify_group_law(action, trials=25, seed=0):
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        p, q = action.sample_params(rng), action.sample_params(rng)
        y = action.sample_point(rng)
        try:
            inner = [c.constant() for c in action_jet(action, q, y, 0)]
            lhs = [c.constant() for c in action_jet(action, p, inner, 0)]
            rhs = [c.constant() for c in action_jet(action, action.compose(p, q), y, 0)]
        except (ChartError, ValueError):
            continue
        bad += lhs != rhs
    return {"trials": trials, "failures": bad, "pass": bad == 0}


def verify_lie_first_theorem(action, trials=25, seed=0):
    """dz^i/dy^j = xi_a^i(z) omega^a_j(y) at sampled (x, y)."""
    if action.generators is None or action.maurer_cartan is None:
        raise ValueError("%s is not a group acting on itself" % action.name)
    rng = random.Random(seed)
    n = action.n
    bad = []
    done = 0
    while done < trials:
        x = action.sample_params(rng)
        y = action.sample_point(rng)
        try:
            jet = action_jet(action, x, y, 1)
        except ValueError:
            continue
        done += 1
        z = tuple(c.constant() for c in jet)
        jac = Matrix([[jet[i].coef(tuple(int(t == j) for t in range(n))) for j in range(n)]
                      for i in range(n)], n)
        rhs = action.generators(z) @ action.maurer_cartan(y)
        if jac != rhs:
            bad.append({"x": [qstr(v) for v in x], "y": [qstr(v) for v in y]})
    law = verify_group_law(action, trials, seed)
    return {"action": action.name, "trials": trials, "seed": seed, "counterexamples": bad,
            "group_law": law, "pass": not bad and law["pass"]}


@dataclass(frozen=True)
class NoRelationFound:
    order: int
    cap: int


@dataclass(frozen=True)
class AmbiguousRelation:
    order: int
    weight: int
    nullspace_dim: int
    basis: tuple


def _candidate_monomials(order, cap):
    """Monomials in w', ..., w^(order) of degree 1..cap, grouped by weight."""
    groups = {}
    for deg in range(1, cap + 1):
        for combo in combinations_with_replacement(range(1, order + 1), deg):
            e = [0] * (order + 2)
            for j in combo:
                e[j + 1] += 1
            groups.setdefault(sum(combo), []).append(tuple(e))
    const = tuple([0] * (order + 2))
    for w in groups:
        groups[w] = sorted(groups[w], key=lambda e: (-_top(e), sum(e), e)) + [const]
    return groups


def _evaluate_monomial(e, vals):
    t = Fraction(1)
    for v, p in zip(vals, e):
        if p:
            t *= v ** p
    return t


def derive_ode_linear(action, order, cap=2, samples=None, seed=0, details=None):
    """Find the polynomial relation among w', ..., w^(order) satisfied by the action.

    Candidates are grouped by weight (w^(j) has weight j) with the constant
    monomial admitted in every group; the first weight whose evaluation
    matrix has a nullspace decides the outcome.
    """
    if action.n != 1:
        raise ValueError("ODE derivation is implemented for one-dimensional actions")
    rng = random.Random(seed)
    groups = _candidate_monomials(order, cap)
    largest = max(len(g) for g in groups.values())
    nsamp = samples if samples is not None else max(3 * largest, 20)
    pts = []
    for _ in range(nsamp):
        params, y0, jet = sample_jet(action, rng, order)
        pts.append((y0[0],) + derivatives(jet[0], order))
    if details is not None:
        details["samples"] = nsamp
        details["nullspace_dims"] = {}
    for w in sorted(groups):
        monos = groups[w]
        A = Matrix([[_evaluate_monomial(e, v) for e in monos] for v in pts], len(monos))
        K = kernel(A)
        if details is not None:
            details["nullspace_dims"][w] = K.dim
        if K.dim == 0:
            continue
        if K.dim > 1:
            rels = tuple(OdeRelation(order, dict(zip(monos, v))) for v in K.basis)
            return AmbiguousRelation(order, w, K.dim, rels)
        coeffs = K.basis[0]
        lead = next(c for c in coeffs if c != 0)
        rel = OdeRelation(order, {e: c / lead for e, c in zip(monos, coeffs)})
        check = verify_ode(action, rel, trials=max(10, nsamp // 2), seed=seed + 7919)
        if not check["pass"]:
            raise SampleDegeneracyError(
                "relation from seed %d fails on fresh samples; re-seed" % seed)
        return rel
    return NoRelationFound(order, cap)


def minimal_ode_order(action, cap=2, max_order=5, seed=0):
    """Smallest order at which derive_ode_linear returns a single relation."""
    for order in range(1, max_order + 1):
        res = derive_ode_linear(action, order, cap, seed=seed)
        if isinstance(res, OdeRelation):
            return order, res
    return None, None
