"""
Exact rational linear algebra: matrices over Q, row reduction, kernels and
subspaces kept in reduced row-echelon form.
"""

from fractions import Fraction
from numbers import Rational


def Q(x):
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("refusing to coerce bool to a rational")
    if isinstance(x, (int, Rational, str)):
        return Fraction(x)
    raise TypeError("cannot coerce %r to an exact rational" % (x,))


def qstr(x):
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def vec(values):
    return tuple(Q(v) for v in values)


def unit(n, i):
    return tuple(Fraction(int(j == i)) for j in range(n))


def zero_vec(n):
    return (Fraction(0),) * n


def is_zero(v):
    return all(x == 0 for x in v)


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def lincomb(coeffs, vectors, n):
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                if a:
                    out[i] += c * a
    return tuple(out)


class Matrix:
    """Dense immutable matrix of Fractions, row-major."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(Q(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n):
        return cls([unit(n, i) for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols, nrows):
        cols = list(cols)
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    @property
    def T(self):
        return Matrix([self.col(j) for j in range(self.ncols)], self.nrows)

    def flatten(self):
        return tuple(x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(qstr(x) for x in r) + "]" for r in self.rows)
        return "Matrix([%s])" % body

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([vadd(a, b) for a, b in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([vsub(a, b) for a, b in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = Q(c)
        return Matrix([vscale(c, r) for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch in product")
            cols = [other.col(j) for j in range(other.ncols)]
            return Matrix(
                [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols]
                 for r in self.rows],
                other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("shape mismatch in matrix-vector product")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0))
                     for r in self.rows)

    def commutator(self, other):
        return self @ other - other @ self

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    def trace(self):
        return sum((self.rows[i][i] for i in range(min(self.shape))), Fraction(0))

    def rank(self):
        return len(pivots(self))

    def inverse(self):
        n = self.nrows
        if n != self.ncols:
            raise ValueError("only square matrices are invertible")
        aug = Matrix([r + unit(n, i) for i, r in enumerate(self.rows)], 2 * n)
        red = rref(aug)
        if any(red[i, i] != 1 for i in range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix([r[n:] for r in red.rows], n)

    def det(self):
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of non-square matrix")
        m = [list(r) for r in self.rows]
        d = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            d *= m[c][c]
            for r in range(c + 1, n):
                f = m[r][c] / m[c][c]
                if f:
                    for k in range(c, n):
                        m[r][k] -= f * m[c][k]
        return d


def _rref_rows(rows, ncols):
    m = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    return m, piv


def rref(m):
    """Reduced row-echelon form; zero rows are kept at the bottom."""
    rows, _ = _rref_rows(m.rows, m.ncols)
    return Matrix(rows, m.ncols)


def pivots(m):
    return _rref_rows(m.rows, m.ncols)[1]


def kernel(m):
    """Null space {v : m v = 0} as a Subspace of Q^ncols."""
    rows, piv = _rref_rows(m.rows, m.ncols)
    free = [c for c in range(m.ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for r, c in enumerate(piv):
            v[c] = -rows[r][f]
        basis.append(v)
    return Subspace(m.ncols, basis)


def solve(m, b):
    """One solution x of m x = b, or None when inconsistent."""
    aug = Matrix([r + (Q(bi),) for r, bi in zip(m.rows, b)], m.ncols + 1)
    rows, piv = _rref_rows(aug.rows, aug.ncols)
    if m.ncols in piv:
        return None
    x = [Fraction(0)] * m.ncols
    for r, c in enumerate(piv):
        x[c] = rows[r][-1]
    return tuple(x)


class Subspace:
    """Subspace of Q^ambient_dim held by its reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim, vectors=()):
        vectors = [vec(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise ValueError("vector of length %d in ambient dimension %d"
                                 % (len(v), ambient_dim))
        rows, piv = _rref_rows(vectors, ambient_dim)
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(r) for r in rows[:len(piv)])
        self.pivots = tuple(piv)

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def full(cls, n):
        return cls(n, [unit(n, i) for i in range(n)])

    @classmethod
    def coordinate(cls, n, indices):
        return cls(n, [unit(n, i) for i in indices])

    @property
    def dim(self):
        return len(self.basis)

    def basis_matrix(self):
        return Matrix(self.basis, self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "Subspace(%d, dim=%d)" % (self.ambient_dim, self.dim)

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch: %d vs %d"
                             % (self.ambient_dim, other.ambient_dim))

    def reduce(self, v):
        """Canonical representative of v + self (zero at every pivot column)."""
        v = list(vec(v))
        if len(v) != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                for i, a in enumerate(row):
                    if a:
                        v[i] -= f * a
        return tuple(v)

    def contains(self, v):
        return is_zero(self.reduce(v))

    def __contains__(self, v):
        return self.contains(v)

    def coords(self, v):
        """Coordinates of v in the echelon basis; v must lie in the subspace."""
        v = vec(v)
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return tuple(v[c] for c in self.pivots)

    def __add__(self, other):
        self._check(other)
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def __and__(self, other):
        self._check(other)
        if not self.dim or not other.dim:
            return Subspace(self.ambient_dim)
        cols = list(self.basis) + [vscale(-1, b) for b in other.basis]
        k = kernel(Matrix.from_columns(cols, self.ambient_dim))
        p = self.dim
        return Subspace(self.ambient_dim,
                        [lincomb(v[:p], self.basis, self.ambient_dim) for v in k.basis])

    def issubset(self, other):
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other):
        return self.issubset(other)

    def complement_indices(self):
        """Coordinate indices whose unit vectors span a complement."""
        return tuple(i for i in range(self.ambient_dim) if i not in self.pivots)

    def quotient_coords(self, v):
        """Coordinates of v + self in the basis {e_i : i in complement_indices()}."""
        r = self.reduce(v)
        return tuple(r[i] for i in self.complement_indices())


def subspace_sum(a, b):
    return a + b


def subspace_intersect(a, b):
    return a & b


def subspace_contains(a, v):
    return a.contains(v)
