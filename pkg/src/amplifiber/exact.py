"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`. Matrices are immutable
:class:`RatMatrix` objects. Plain Python indexing (``M[i, j]``, ``M.row(i)``)
is 0-based. Every function that takes an *index set* uses 1-based labels,
so ``pluecker(M, (1, 2))`` is the minor on the first two columns.
"""

from fractions import Fraction
from itertools import combinations
from math import lcm
import numbers

Rational = Fraction
IndexSet = tuple

__all__ = [
    "Rational", "IndexSet", "RatMatrix", "to_rational", "rational_str",
    "index_set", "subsets", "complement", "det", "rank", "rref",
    "orth_complement", "pluecker", "levi_civita", "solve_cramer", "solve",
    "inverse", "dot", "interpolate_coefficients",
]


def to_rational(x):
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"refusing implicit conversion of {type(x).__name__} to a rational")


def rational_str(x):
    x = to_rational(x)
    return f"{x.numerator}/{x.denominator}"


def index_set(items, n=None):
    """Validate and sort a collection of 1-based indices."""
    out = tuple(sorted(int(i) for i in items))
    if len(set(out)) != len(out):
        raise ValueError(f"repeated index in {out}")
    if out and out[0] < 1:
        raise ValueError(f"indices are 1-based, got {out}")
    if n is not None and out and out[-1] > n:
        raise ValueError(f"index {out[-1]} exceeds {n}")
    return out


def subsets(n, k):
    return list(combinations(range(1, n + 1), k))


def complement(I, n):
    s = set(I)
    return tuple(i for i in range(1, n + 1) if i not in s)


class RatMatrix:
    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, data, ncols=None):
        rows = tuple(tuple(to_rational(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        else:
            width = 0 if ncols is None else ncols
        if ncols is not None and width != ncols:
            raise ValueError("column count mismatch")
        self._rows = rows
        self.nrows = len(rows)
        self.ncols = width

    @classmethod
    def _raw(cls, rows, ncols):
        obj = cls.__new__(cls)
        obj._rows = rows
        obj.nrows = len(rows)
        obj.ncols = ncols
        return obj

    @classmethod
    def identity(cls, n):
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n))
                              for i in range(n)), n)

    @classmethod
    def zeros(cls, r, c):
        return cls._raw(tuple((Fraction(0),) * c for _ in range(r)), c)

    @classmethod
    def from_columns(cls, cols):
        cols = [tuple(to_rational(x) for x in c) for c in cols]
        if not cols:
            raise ValueError("no columns")
        return cls._raw(tuple(zip(*cols)), len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        i, j = key
        return self._rows[i][j]

    def row(self, i):
        return self._rows[i]

    def col(self, j):
        return tuple(r[j] for r in self._rows)

    def rows(self):
        return self._rows

    def tolist(self):
        return [list(r) for r in self._rows]

    @property
    def T(self):
        return RatMatrix._raw(tuple(zip(*self._rows)) if self.nrows else (),
                              self.nrows)

    def columns(self, I):
        """Column submatrix on 1-based labels, in the order given."""
        idx = [i - 1 for i in I]
        if any(i < 0 or i >= self.ncols for i in idx):
            raise IndexError(f"column labels {tuple(I)} out of range 1..{self.ncols}")
        return RatMatrix._raw(tuple(tuple(r[i] for i in idx) for r in self._rows), len(idx))

    def select_rows(self, I):
        idx = [i - 1 for i in I]
        return RatMatrix._raw(tuple(self._rows[i] for i in idx), self.ncols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("vstack column mismatch")
        return RatMatrix._raw(self._rows + other._rows, self.ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("hstack row mismatch")
        return RatMatrix._raw(tuple(a + b for a, b in zip(self._rows, other._rows)),
                              self.ncols + other.ncols)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T._rows
        return RatMatrix._raw(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                                    for r in self._rows), other.ncols)

    def scale(self, c):
        c = to_rational(c)
        return RatMatrix._raw(tuple(tuple(c * x for x in r) for r in self._rows), self.ncols)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                    for r, s in zip(self._rows, other._rows)), self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"RatMatrix({self.nrows}x{self.ncols}: [{body}])"

    def is_zero(self):
        return all(x == 0 for r in self._rows for x in r)

    def to_json(self):
        return [[rational_str(x) for x in r] for r in self._rows]

    @classmethod
    def from_json(cls, data):
        return cls(data)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _bareiss_int(a):
    """Fraction-free elimination on a list of int rows (mutated)."""
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det(M):
    """Determinant by Bareiss elimination after clearing row denominators."""
    if M.nrows != M.ncols:
        from .errors import DimensionError
        raise DimensionError(f"det of non-square {M.shape} matrix")
    n = M.nrows
    if n == 0:
        return Fraction(1)
    if n == 1:
        return M[0, 0]
    if n == 2:
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    rows, scale = [], 1
    for r in M.rows():
        d = lcm(*(x.denominator for x in r))
        scale *= d
        rows.append([x.numerator * (d // x.denominator) for x in r])
    return Fraction(_bareiss_int(rows), scale)


def rref(M):
    """Reduced row echelon form and the 0-based pivot columns."""
    a = [list(r) for r in M.rows()]
    pivots = []
    r = 0
    for c in range(M.ncols):
        p = next((i for i in range(r, M.nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(M.nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == M.nrows:
            break
    return RatMatrix._raw(tuple(tuple(row) for row in a), M.ncols), tuple(pivots)


def rank(M):
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return len(rref(M)[1])


def orth_complement(M):
    """Rows spanning the kernel of a full-row-rank M, in reduced echelon form."""
    from .errors import RankError
    R, pivots = rref(M)
    if len(pivots) != M.nrows:
        raise RankError(f"orth_complement needs full row rank, got rank {len(pivots)} < {M.nrows}")
    free = [c for c in range(M.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(v)
    if not basis:
        return RatMatrix._raw((), M.ncols)
    return rref(RatMatrix(basis))[0]


def pluecker(M, I):
    """Maximal minor of M on the (ordered) 1-based column labels I."""
    if len(I) != M.nrows:
        from .errors import DimensionError
        raise DimensionError(f"Plücker index of size {len(I)} for a {M.nrows}-row matrix")
    return det(M.columns(I))


def levi_civita(I, complement_order=()):
    """Sign of the permutation that sorts the concatenation; 0 on repeats."""
    seq = list(I) + list(complement_order)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


def solve_cramer(M, b):
    """Unique solution of M x = b by Cramer's rule."""
    from .errors import DimensionError, SingularMatrixError
    if M.nrows != M.ncols or len(b) != M.nrows:
        raise DimensionError("solve_cramer needs a square system")
    d = det(M)
    if d == 0:
        raise SingularMatrixError("singular matrix in solve_cramer")
    b = [to_rational(x) for x in b]
    cols = [M.col(j) for j in range(M.ncols)]
    out = []
    for j in range(M.ncols):
        cj = cols[:j] + [b] + cols[j + 1:]
        out.append(det(RatMatrix.from_columns(cj)) / d)
    return tuple(out)


def solve(M, b):
    """Solve M x = b for rectangular M with independent columns; None if inconsistent."""
    from .errors import RankError
    aug = M.hstack(RatMatrix([[to_rational(x)] for x in b]))
    R, pivots = rref(aug)
    if M.ncols in pivots:
        return None
    if len(pivots) != M.ncols:
        raise RankError("columns are linearly dependent")
    return tuple(R[i, M.ncols] for i in range(M.ncols))


def inverse(M):
    from .errors import SingularMatrixError
    n = M.nrows
    R, pivots = rref(M.hstack(RatMatrix.identity(n)))
    if pivots[:n] != tuple(range(n)):
        raise SingularMatrixError("matrix is singular")
    return RatMatrix._raw(tuple(r[n:] for r in R.rows()), n)


def interpolate_coefficients(ts, values):
    """Exact coefficients c_0..c_d of the polynomial through (t_i, v_i), d = len(ts) - 1."""
    if len(ts) != len(values) or len(set(ts)) != len(ts):
        raise ValueError("need distinct nodes, one value each")
    V = RatMatrix([[to_rational(t) ** p for p in range(len(ts))] for t in ts])
    return solve(V, values)
