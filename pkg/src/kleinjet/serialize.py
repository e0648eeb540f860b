"""
JSON encodings.  Rationals are strings "p/q" (or "p"), matrices row-major
lists of such strings, polynomials lists of {"exp": [...], "coef": "p/q"}
in graded-lex order.
"""

from .exact import Matrix, Q, Subspace, qstr
from .finitetype import OdeRelation
from .jets import JetDiffeo, JetField
from .klein import KleinRealization
from .liealg import LieAlgebra
from .series import TruncPoly


class FormatError(ValueError):
    pass


def _q(x):
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        try:
            return Q(x)
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError("bad rational %r" % (x,)) from e
    raise FormatError("rationals are encoded as strings or integers, got %r" % (x,))


def matrix_to_json(m):
    return [[qstr(x) for x in r] for r in m.rows]


def matrix_from_json(data, ncols=None):
    if not isinstance(data, list):
        raise FormatError("matrix must be a list of rows")
    rows = [[_q(x) for x in r] for r in data]
    if not rows:
        if ncols is None:
            raise FormatError("empty matrix needs a known column count")
        return Matrix([], ncols)
    return Matrix(rows)


def subspace_to_json(s):
    return [[qstr(x) for x in b] for b in s.basis]


def subspace_from_json(data, ambient_dim):
    if not isinstance(data, list):
        raise FormatError("subspace must be a list of basis rows")
    rows = [[_q(x) for x in r] for r in data]
    for r in rows:
        if len(r) != ambient_dim:
            raise FormatError("basis row of length %d, expected %d" % (len(r), ambient_dim))
    return Subspace(ambient_dim, rows)


def poly_to_json(p):
    return [{"exp": list(e), "coef": qstr(p.terms[e])} for e in p.sorted_exponents()]


def poly_from_json(data, num_vars, max_degree):
    if not isinstance(data, list):
        raise FormatError("polynomial must be a list of terms")
    terms = {}
    for t in data:
        try:
            e = tuple(int(x) for x in t["exp"])
            c = _q(t["coef"])
        except (KeyError, TypeError) as err:
            raise FormatError("bad polynomial term %r" % (t,)) from err
        if len(e) != num_vars:
            raise FormatError("exponent %r has wrong length" % (e,))
        terms[e] = terms.get(e, 0) + c
    return TruncPoly(num_vars, max_degree, terms)


def jet_to_json(j):
    return {"n": j.n, "k": j.k, "components": [poly_to_json(c) for c in j.components]}


def jet_from_json(data, diffeo=False):
    n, k = int(data["n"]), int(data["k"])
    comps = tuple(poly_from_json(c, n, k) for c in data["components"])
    return (JetDiffeo if diffeo else JetField)(n, k, comps)


def algebra_to_json(g):
    return {
        "dim": g.dim,
        "labels": list(g.labels),
        "brackets": [{"i": i, "j": j, "coeffs": {str(k): qstr(c) for k, c in sorted(cs.items())}}
                     for (i, j), cs in sorted(g.brackets().items())],
    }


def algebra_from_json(data):
    try:
        dim = int(data["dim"])
        labels = data.get("labels")
        brackets = {}
        for b in data.get("brackets", []):
            i, j = int(b["i"]), int(b["j"])
            brackets[(i, j)] = {int(k): _q(v) for k, v in b["coeffs"].items()}
    except (KeyError, TypeError, AttributeError) as e:
        raise FormatError("malformed Lie algebra JSON: %s" % e) from e
    return LieAlgebra(dim, brackets, labels)


def realization_to_json(r):
    out = algebra_to_json(r.algebra)
    deg = r.data_order if r.data_order is not None else max(
        p.max_degree for gen in r.generators for p in gen)
    out.update({
        "name": r.name,
        "n": r.n,
        "g0_basis": subspace_to_json(r.g0),
        "generators": [[poly_to_json(p) for p in gen] for gen in r.generators],
        "data_order": r.data_order,
        "degree": deg,
    })
    return out


def realization_from_json(data):
    g = algebra_from_json(data)
    try:
        n = int(data["n"])
        g0 = subspace_from_json(data.get("g0_basis", []), g.dim)
        order = data.get("data_order")
        deg = int(data.get("degree", order if order is not None else 2))
        gens = [[poly_from_json(p, n, deg) for p in gen] for gen in data["generators"]]
    except (KeyError, TypeError) as e:
        raise FormatError("malformed realization JSON: %s" % e) from e
    return KleinRealization(data.get("name", "custom"), g, g0, gens, n,
                            None if order is None else int(order))


def ode_to_json(rel):
    names = ["y"] + [str(j) for j in range(rel.order + 1)]
    monos = []
    for e, c in sorted(rel.terms.items()):
        monos.append({"powers": {names[i]: p for i, p in enumerate(e) if p}, "coef": qstr(c)})
    return {"order": rel.order, "monomials": monos}


def ode_from_json(data):
    try:
        order = int(data["order"])
        monos = [(m["powers"], _q(m["coef"])) for m in data["monomials"]]
    except (KeyError, TypeError) as e:
        raise FormatError("malformed ODE relation JSON: %s" % e) from e
    return OdeRelation.from_derivative_powers(order, monos)
