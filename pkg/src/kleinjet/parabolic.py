"""
sl(n) over Q with the grading by superdiagonal index coming from the Borel
subalgebra, the subalgebra h = a_{-1} + p built from an abelian piece of
degree -1, and checks of the filtrations these pairs induce.
"""

from dataclasses import dataclass

from .exact import Matrix, Subspace
from .liealg import LieAlgebra, NotSubalgebraError, descending_filtration


def elementary(n, i, j):
    """E_ij with 1-based indices."""
    rows = [[0] * n for _ in range(n)]
    rows[i - 1][j - 1] = 1
    return Matrix(rows, n)


@dataclass(frozen=True)
class GradedSL:
    n: int
    algebra: LieAlgebra
    matrices: tuple
    heights: tuple        # height of each basis element
    grading: dict         # height -> Subspace
    p: Subspace

    def piece(self, h):
        if h in self.grading:
            return self.grading[h]
        return Subspace(self.algebra.dim)

    def sum_of(self, lo, hi):
        s = Subspace(self.algebra.dim)
        for h in range(lo, hi + 1):
            s = s + self.piece(h)
        return s

    def index(self, label):
        return self.algebra.labels.index(label)


def build_graded_sl(n):
    """sl(n) with basis E_ij (i != j) then H_i = E_ii - E_{i+1,i+1}."""
    if n < 2:
        raise ValueError("need n >= 2")
    mats, labels, heights = [], [], []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                mats.append(elementary(n, i, j))
                labels.append("E%d%d" % (i, j) if n < 10 else "E%d,%d" % (i, j))
                heights.append(j - i)
    for i in range(1, n):
        mats.append(elementary(n, i, i) - elementary(n, i + 1, i + 1))
        labels.append("H%d" % i)
        heights.append(0)
    g = LieAlgebra.from_matrices(mats, labels)
    dim = g.dim
    grading = {}
    for h in range(-(n - 1), n):
        grading[h] = Subspace.coordinate(dim, [k for k, t in enumerate(heights) if t == h])
    p = Subspace.coordinate(dim, [k for k, t in enumerate(heights) if t >= 0])
    return GradedSL(n, g, tuple(mats), tuple(heights), grading, p)


def default_a_minus1(n, d):
    """span{E_21, E_43, ..., E_{2d,2d-1}} inside sl(n)."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= d <= n // 2:
        raise ValueError("dim a_-1 must lie in 1..%d for n = %d, got %d" % (n // 2, n, d))
    gs = build_graded_sl(n)
    lab = "E%d%d" if n < 10 else "E%d,%d"
    idx = [gs.index(lab % (2 * t, 2 * t - 1)) for t in range(1, d + 1)]
    a = Subspace.coordinate(gs.algebra.dim, idx)
    g = gs.algebra
    assert a <= gs.piece(-1)
    assert all(g.bracket(u, v) == tuple([0] * g.dim) for u in a.basis for v in a.basis)
    return a


class ClosureError(NotSubalgebraError):
    def __init__(self, witness, labels=None):
        self.witness = witness
        super().__init__("a + p is not closed under the bracket; witness pair %r" % (witness,))


@dataclass(frozen=True)
class ParabolicGeometry:
    base: GradedSL
    a_minus1: Subspace
    h: Subspace
    h_algebra: LieAlgebra

    def to_h(self, s):
        """Re-express a subspace of sl(n) inside h's own coordinates."""
        return Subspace(self.h.dim, [self.h.coords(v) for v in s.basis])

    @property
    def p_in_h(self):
        return self.to_h(self.base.p)


def build_h(gs, a):
    g = gs.algebra
    if not a <= gs.piece(-1):
        raise ValueError("a_-1 must lie in the degree -1 piece")
    for u in a.basis:
        for v in a.basis:
            if any(g.bracket(u, v)):
                raise ValueError("a_-1 must be abelian")
    h = a + gs.p
    w = g.closure_witness(h)
    if w is not None:
        raise ClosureError(w)
    return ParabolicGeometry(gs, a, h, g.subalgebra(h))


def check_closure(gs, a):
    """None if a + p is a subalgebra, else a witness pair of vectors."""
    return gs.algebra.closure_witness(a + gs.p)


def _compare(members, expected):
    for k in range(max(len(members), len(expected))):
        got = members[min(k, len(members) - 1)]
        want = expected[min(k, len(expected) - 1)]
        if got != want:
            return {"index": k, "expected_dim": want.dim, "actual_dim": got.dim}
    return None


def verify_h_filtration(pg, d=None):
    """Compare the filtration of (h, p) with p, s_1+..+s_{n-1}, ..., s_{n-1}, 0."""
    gs = pg.base
    n = gs.n
    filt = descending_filtration(pg.h_algebra, pg.p_in_h)
    expected = [pg.p_in_h] + [pg.to_h(gs.sum_of(k, n - 1)) for k in range(1, n)]
    expected.append(Subspace(pg.h.dim))
    mismatch = _compare(list(filt.members), expected)
    return {
        "n": n,
        "d": d if d is not None else pg.a_minus1.dim,
        "filtration_dims": filt.dims(),
        "expected_dims": [s.dim for s in expected],
        "order": filt.order,
        "stable_dim": filt.stabilized_value_dim,
        "pass": mismatch is None,
        "mismatch": mismatch,
    }


def verify_borel_filtration(gs):
    """Compare the filtration of (sl(n), p) with p, s_{n-1}, 0."""
    filt = descending_filtration(gs.algebra, gs.p)
    expected = [gs.p, gs.piece(gs.n - 1), Subspace(gs.algebra.dim)]
    mismatch = _compare(list(filt.members), expected)
    return {
        "n": gs.n,
        "filtration_dims": filt.dims(),
        "expected_dims": [s.dim for s in expected],
        "order": filt.order,
        "pass": mismatch is None,
        "mismatch": mismatch,
    }


def parabolic_report(n, d):
    gs = build_graded_sl(n)
    a = default_a_minus1(n, d)
    pg = build_h(gs, a)
    rep = verify_h_filtration(pg, d)
    rep["grading_dims"] = {str(h): gs.piece(h).dim for h in range(-(n - 1), n)}
    rep["borel_filtration"] = verify_borel_filtration(gs)
    return rep
