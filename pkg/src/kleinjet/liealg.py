"""
Finite-dimensional Lie algebras over Q given by structure constants, their
descending filtrations, the induced quotient brackets and adjoint maps, and
Cartan prolongations of matrix algebras.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exact import (Matrix, Subspace, Q, kernel, lincomb, unit, vec, vsub,
                    is_zero, solve)


class JacobiError(ValueError):
    pass


class NotSubalgebraError(ValueError):
    pass


class LieAlgebra:
    """Lie algebra with basis x_0..x_{dim-1} and [x_i, x_j] = sum_k c[i][j][k] x_k.

    `brackets` maps (i, j) with i < j to {k: coefficient}; the remaining
    constants follow from antisymmetry.  The Jacobi identity is checked on
    every basis triple at construction.
    """

    def __init__(self, dim, brackets=None, labels=None, check=True):
        self.dim = dim
        self.labels = tuple(labels) if labels is not None else tuple(
            "x%d" % i for i in range(dim))
        if len(self.labels) != dim:
            raise ValueError("need %d labels" % dim)
        table = [[{} for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError("bracket index out of range: (%d, %d)" % (i, j))
            if i >= j:
                raise ValueError("store brackets with i < j only, got (%d, %d)" % (i, j))
            clean = {int(k): Q(c) for k, c in coeffs.items() if Q(c) != 0}
            table[i][j] = clean
            table[j][i] = {k: -c for k, c in clean.items()}
        self._table = table
        if check:
            bad = self.jacobi_violation()
            if bad is not None:
                raise JacobiError("Jacobi identity fails on basis triple %r" % (bad,))

    @classmethod
    def from_matrices(cls, mats, labels=None):
        """Structure constants of the span of linearly independent matrices."""
        mats = list(mats)
        n = mats[0].nrows
        flat = [m.flatten() for m in mats]
        A = Matrix.from_columns(flat, n * n)
        if A.rank() != len(mats):
            raise ValueError("matrices are linearly dependent")
        brackets = {}
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                c = solve(A, mats[i].commutator(mats[j]).flatten())
                if c is None:
                    raise NotSubalgebraError(
                        "span not closed: [%s, %s]" % (
                            labels[i] if labels else i, labels[j] if labels else j))
                brackets[(i, j)] = {k: v for k, v in enumerate(c) if v}
        return cls(len(mats), brackets, labels)

    def brackets(self):
        return {(i, j): dict(self._table[i][j])
                for i in range(self.dim) for j in range(i + 1, self.dim)
                if self._table[i][j]}

    def constant(self, i, j, k):
        return self._table[i][j].get(k, Fraction(0))

    def basis_bracket(self, i, j):
        out = [Fraction(0)] * self.dim
        for k, c in self._table[i][j].items():
            out[k] = c
        return tuple(out)

    def bracket(self, x, y):
        x, y = vec(x), vec(y)
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("vectors must have length %d" % self.dim)
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in self._table[i][j].items():
                    out[k] += a * b * c
        return tuple(out)

    def basis(self, i):
        return unit(self.dim, i)

    def ad(self, x):
        """Matrix of y -> [x, y]; column j is [x, x_j]."""
        return Matrix.from_columns([self.bracket(x, self.basis(j)) for j in range(self.dim)],
                                   self.dim)

    def jacobi_violation(self):
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    xi, xj, xk = self.basis(i), self.basis(j), self.basis(k)
                    s = lincomb(
                        (1, 1, 1),
                        (self.bracket(self.basis_bracket(i, j), xk),
                         self.bracket(self.basis_bracket(j, k), xi),
                         self.bracket(self.basis_bracket(k, i), xj)),
                        self.dim)
                    if not is_zero(s):
                        return (i, j, k)
        return None

    def bracket_space(self, a, b):
        """Span of [a, b] for subspaces a, b."""
        return Subspace(self.dim, [self.bracket(u, v) for u in a.basis for v in b.basis])

    def is_subalgebra(self, s):
        return all(s.contains(self.bracket(u, v))
                   for i, u in enumerate(s.basis) for v in s.basis[i + 1:])

    def closure_witness(self, s):
        for i, u in enumerate(s.basis):
            for v in s.basis[i + 1:]:
                if not s.contains(self.bracket(u, v)):
                    return (u, v)
        return None

    def is_ideal(self, s, of=None):
        of = of if of is not None else Subspace.full(self.dim)
        return all(s.contains(self.bracket(u, v)) for u in of.basis for v in s.basis)

    def subalgebra(self, s, labels=None):
        """The subalgebra s as a LieAlgebra in its echelon basis."""
        if not self.is_subalgebra(s):
            raise NotSubalgebraError("subspace is not closed under the bracket")
        brackets = {}
        for i in range(s.dim):
            for j in range(i + 1, s.dim):
                c = s.coords(self.bracket(s.basis[i], s.basis[j]))
                brackets[(i, j)] = {k: v for k, v in enumerate(c) if v}
        if labels is None:
            labels = [self._label_of(b) for b in s.basis]
        return LieAlgebra(s.dim, brackets, labels, check=False)

    def _label_of(self, v):
        nz = [i for i, a in enumerate(v) if a]
        if len(nz) == 1 and v[nz[0]] == 1:
            return self.labels[nz[0]]
        return "+".join("%s*%s" % (v[i], self.labels[i]) for i in nz)

    def __repr__(self):
        return "LieAlgebra(dim=%d)" % self.dim


@dataclass(frozen=True)
class NotAlmostEffective:
    """The filtration stabilized at a nonzero ideal of this dimension."""
    stable_dim: int


@dataclass(frozen=True)
class Filtration:
    """g_0 > g_1 > ... computed until two consecutive members agree.

    members[k] is g_k; members past `stabilized_at` all equal the last one.
    """
    algebra: LieAlgebra
    members: tuple
    stabilized_at: int

    @property
    def stabilized_value_dim(self):
        return self.members[-1].dim

    @property
    def almost_effective(self):
        return self.members[-1].dim == 0

    @property
    def order(self):
        """Index of the first zero member, or None if never reached."""
        if not self.almost_effective:
            return None
        return self.stabilized_at

    def member(self, k):
        if k < 0:
            raise IndexError("filtration index starts at 0")
        return self.members[min(k, len(self.members) - 1)]

    def dims(self):
        return [m.dim for m in self.members]


def _next_member(g, gk):
    # x = sum c_i b_i with [x, x_j] in g_k for every basis x_j
    if gk.dim == 0:
        return gk
    rows = []
    for j in range(g.dim):
        imgs = [gk.reduce(g.bracket(b, g.basis(j))) for b in gk.basis]
        for r in range(g.dim):
            rows.append([img[r] for img in imgs])
    K = kernel(Matrix(rows, gk.dim))
    return Subspace(g.dim, [lincomb(c, gk.basis, g.dim) for c in K.basis])


def descending_filtration(g, g0):
    if g0.ambient_dim != g.dim:
        raise ValueError("isotropy subspace lives in the wrong ambient space")
    if not g.is_subalgebra(g0):
        raise NotSubalgebraError("g0 is not a subalgebra")
    members = [g0]
    while True:
        nxt = _next_member(g, members[-1])
        if nxt == members[-1]:
            break
        members.append(nxt)
    return Filtration(g, tuple(members), len(members) - 1)


def infinitesimal_order(g, g0):
    filt = descending_filtration(g, g0)
    if filt.almost_effective:
        return filt.order
    return NotAlmostEffective(filt.stabilized_value_dim)


def _check_level(filt, k, top):
    m = filt.stabilized_at
    if not 0 <= k <= max(m, top):
        raise IndexError("filtration level %d out of range 0..%d" % (k, m))


def quotient_bracket(g, filt, k, a, b):
    """[a + g_{k+1}, b + g_{k+1}] = [a, b] + g_k, as a canonical representative."""
    _check_level(filt, k, filt.stabilized_at)
    return filt.member(k).reduce(g.bracket(a, b))


def quotient_basis(g, sub):
    """Unit vectors spanning a complement of `sub`; the fixed basis of g/sub."""
    return [g.basis(i) for i in sub.complement_indices()]


def ad_k(g, filt, k, x):
    """Matrix of y + g_k -> [x, y] + g_k in the basis quotient_basis(g, g_k)."""
    if k < 0:
        raise IndexError("k must be non-negative")
    if not filt.member(0).contains(x):
        raise ValueError("x is not in the isotropy subalgebra g_0")
    gk = filt.member(k)
    cols = [gk.quotient_coords(g.bracket(x, y)) for y in quotient_basis(g, gk)]
    return Matrix.from_columns(cols, g.dim - gk.dim) if cols else Matrix.zeros(0, 0)


def ad_k_kernel(g, filt, k):
    """Kernel of x -> ad_k(x) on g_0, as a subspace of g."""
    g0 = filt.member(0)
    gk = filt.member(k)
    rows = []
    imgs = []
    for b in g0.basis:
        imgs.append([c for y in quotient_basis(g, gk)
                     for c in gk.quotient_coords(g.bracket(b, y))])
    if not imgs or not imgs[0]:
        return g0
    for r in range(len(imgs[0])):
        rows.append([img[r] for img in imgs])
    K = kernel(Matrix(rows, g0.dim))
    return Subspace(g.dim, [lincomb(c, g0.basis, g.dim) for c in K.basis])


@dataclass(frozen=True)
class MatrixAlgebraRep:
    """A matrix Lie algebra inside gl(Q^n) spanned by `generators`."""
    n: int
    generators: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for m in self.generators:
            if m.shape != (self.n, self.n):
                raise ValueError("generator of shape %r in gl(%d)" % (m.shape, self.n))

    def span(self):
        return Subspace(self.n * self.n, [m.flatten() for m in self.generators])

    def is_closed(self):
        s = self.span()
        return all(s.contains(a.commutator(b).flatten())
                   for a in self.generators for b in self.generators)


@dataclass(frozen=True)
class ProlongationResult:
    dims: tuple
    order: object  # int, or None when pr_cap is still nonzero
    cap: int

    @property
    def order_label(self):
        return self.order if self.order is not None else ">%d" % self.cap


def prolongation(rep, k=6):
    """Dimensions of pr_0 .. pr_k of a matrix algebra.

    pr_j elements are arrays T[a_1..a_j][r][b] meaning T(e_a1)...(e_aj) is the
    matrix with entry (r, b); pr_j is cut out of Hom(V, pr_{j-1}) by the
    symmetry condition S(v)w = S(w)v.
    """
    if not rep.is_closed():
        raise NotSubalgebraError("generators are not closed under the commutator")
    n = rep.n
    nn = n * n
    # elements of pr_j as flat tuples, index (a_1..a_j, r, b) row-major
    basis = list(rep.span().basis)
    dims = [len(basis)]
    order = 0 if not basis else None
    j = 0
    while j < k and basis:
        j += 1
        tail = n ** (j - 1) * nn     # length of one pr_{j-1} element
        nb = len(basis)
        # unknowns s[a][c]: S(e_a) = sum_c s[a][c] basis[c]
        rows = []
        for a in range(n):
            for b in range(a + 1, n):
                if j == 1:
                    # S(e_a) e_b = S(e_b) e_a : column b of S(e_a) vs column a of S(e_b)
                    for r in range(n):
                        row = [Fraction(0)] * (n * nb)
                        for c, P in enumerate(basis):
                            row[a * nb + c] += P[r * n + b]
                            row[b * nb + c] -= P[r * n + a]
                        rows.append(row)
                else:
                    sub = tail // n
                    for t in range(sub):
                        row = [Fraction(0)] * (n * nb)
                        for c, P in enumerate(basis):
                            row[a * nb + c] += P[b * sub + t]
                            row[b * nb + c] -= P[a * sub + t]
                        rows.append(row)
        if rows:
            K = kernel(Matrix(rows, n * nb))
            sols = K.basis
        else:
            sols = [unit(n * nb, i) for i in range(n * nb)]
        new = []
        for s in sols:
            flat = []
            for a in range(n):
                flat.extend(lincomb(s[a * nb:(a + 1) * nb], basis, tail))
            new.append(tuple(flat))
        basis = list(Subspace(n * tail, new).basis) if new else []
        dims.append(len(basis))
        if not basis:
            order = j
    return ProlongationResult(tuple(dims), order, k)


def first_order_isotropy(g, g0):
    """ad_0(g_0/g_1) inside gl(g/g_0), as a matrix algebra."""
    filt = descending_filtration(g, g0)
    if not filt.almost_effective:
        raise ValueError("Klein pair is not almost effective")
    n = g.dim - g0.dim
    mats = [ad_k(g, filt, 0, x) for x in g0.basis]
    span = Subspace(n * n, [m.flatten() for m in mats])
    gens = tuple(Matrix([b[i * n:(i + 1) * n] for i in range(n)], n) for b in span.basis)
    return MatrixAlgebraRep(n, gens)


def check_prolongation_inequality(g, g0, cap=6):
    m = infinitesimal_order(g, g0)
    if isinstance(m, NotAlmostEffective):
        raise ValueError("Klein pair is not almost effective")
    pr = prolongation(first_order_isotropy(g, g0), cap)
    holds = True if pr.order is None else m <= pr.order
    return {"m": m, "m_tilde": pr.order_label, "prolongation_dims": list(pr.dims),
            "cap": cap, "holds": holds}
