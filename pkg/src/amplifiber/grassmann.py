"""Totally positive data, the amplituhedron map and fiber frames."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
import random

from .errors import DegeneracyError, PositivityError, RankError, ValidationError
from .exact import RatMatrix, det, inverse, pluecker, rank, solve, to_rational

MAX_CERTIFIED_N = 12


class Chart(str, Enum):
    POLYTOPE = "PolytopeChart"
    CONJUGATE = "ConjugateChart"
    GENERAL = "GeneralChart"


def vandermonde(rows, nodes):
    return RatMatrix([[t ** p for t in nodes] for p in range(rows)])


def is_totally_positive(M):
    if M.nrows > M.ncols:
        return False
    return all(pluecker(M, I) > 0 for I in combinations(range(1, M.ncols + 1), M.nrows))


def _check_nodes(nodes, n):
    nodes = tuple(to_rational(t) for t in nodes)
    if len(nodes) != n:
        raise ValidationError(f"expected {n} nodes, got {len(nodes)}")
    if any(t <= 0 for t in nodes):
        raise ValidationError("nodes must be positive")
    if any(a >= b for a, b in zip(nodes, nodes[1:])):
        raise ValidationError("nodes must be strictly increasing")
    return nodes


@dataclass(frozen=True)
class AmplituhedronInstance:
    n: int
    k: int
    m: int
    Z: RatMatrix
    Zperp: RatMatrix
    nodes: tuple = None
    certified: bool = field(default=True, compare=False)

    @property
    def ell(self):
        return self.n - self.m - self.k

    @property
    def is_polytope(self):
        return self.k == 1

    @property
    def is_conjugate(self):
        return self.k == self.n - self.m - 1

    @property
    def chart(self):
        if self.is_polytope:
            return Chart.POLYTOPE
        if self.is_conjugate:
            return Chart.CONJUGATE
        return Chart.GENERAL

    def to_json(self):
        return {
            "n": self.n, "k": self.k, "m": self.m,
            "nodes": None if self.nodes is None else [f"{t.numerator}/{t.denominator}" for t in self.nodes],
            "Z": self.Z.to_json(), "Zperp": self.Zperp.to_json(),
        }


def _check_sizes(n, m, k):
    if min(n, m, k) < 1:
        raise ValidationError("n, k, m must be positive")
    if k + m > n:
        raise ValidationError(f"need k + m <= n, got k={k}, m={m}, n={n}")
    if n > MAX_CERTIFIED_N:
        raise ValidationError(f"exhaustive positivity certificates are limited to n <= {MAX_CERTIFIED_N}")


def instance_from_Z(Z, k, nodes=None):
    """Normalize a totally positive Z to identity left block and attach Zperp."""
    d, n = Z.shape
    m = d - k
    _check_sizes(n, m, k)
    if not is_totally_positive(Z):
        raise PositivityError("Z is not totally positive")
    Zn = inverse(Z.columns(range(1, d + 1))) @ Z
    z = Zn.columns(range(d + 1, n + 1))
    ell = n - d
    Zperp = (-z.T).hstack(RatMatrix.identity(ell)) if ell else RatMatrix.zeros(0, n)
    return AmplituhedronInstance(n, k, m, Zn, Zperp, nodes)


def build_Z_moment_curve(n, m, k, nodes=None):
    """Moment-curve Z on the given nodes (default 1..n), normalized to [I | z]."""
    _check_sizes(n, m, k)
    nodes = _check_nodes(range(1, n + 1) if nodes is None else nodes, n)
    return instance_from_Z(vandermonde(m + k, nodes), k, nodes)


def positive_vandermonde(k, nodes, weights=None):
    C = vandermonde(k, nodes)
    if weights is None:
        return C
    return RatMatrix([[x * w for x, w in zip(r, weights)] for r in C.rows()])


def sample_positive_C(k, n, seed):
    """Seeded point of the positive Grassmannian.

    A k-row Vandermonde on random increasing nodes, with columns rescaled by
    random positive weights so that k = 1 is not a constant row.
    """
    if k > n:
        raise ValidationError("k must not exceed n")
    rng = random.Random(seed)
    den = rng.randint(1, 7)
    nodes = [Fraction(t, den) for t in sorted(rng.sample(range(1, 12 * n), n))]
    weights = [Fraction(rng.randint(1, 40), rng.randint(1, 9)) for _ in range(n)]
    C = positive_vandermonde(k, nodes, weights)
    assert is_totally_positive(C), "positive Vandermonde failed its certificate"
    return C


def amplituhedron_map(C, instance):
    """Y = C Z^T: rows of Y are the images of the rows of C."""
    if C.shape != (instance.k, instance.n):
        raise ValidationError(f"C must be {instance.k}x{instance.n}")
    Y = C @ instance.Z.T
    if rank(Y) != instance.k:
        raise DegeneracyError("amplituhedron map collapsed rank")
    return Y


@dataclass(frozen=True)
class FiberFrame:
    instance: AmplituhedronInstance
    Y: RatMatrix
    A: RatMatrix
    J: tuple
    chart: Chart
    C: RatMatrix = None

    def column(self, i):
        return self.A.columns((i,))

    def to_json(self):
        return {"Y": self.Y.to_json(), "A": self.A.to_json(), "J": list(self.J),
                "chart": self.chart.value}


def fiber_frame(instance, Y, C=None):
    """Assemble A = [Zperp ; Y | 0]; C, when given, is a positive preimage of Y."""
    n, k, m, ell = instance.n, instance.k, instance.m, instance.ell
    if Y.shape != (k, m + k):
        raise ValidationError(f"Y must be {k}x{m + k}, got {Y.shape}")
    bottom = Y.hstack(RatMatrix.zeros(k, ell)) if ell else Y
    A = instance.Zperp.vstack(bottom) if ell else bottom
    if rank(A) != n - m:
        raise RankError("fiber frame has deficient rank")
    if C is not None and C @ instance.Z.T != Y:
        raise ValidationError("C does not map to Y")
    J = tuple(range(ell + 1, n - m + 1))
    return FiberFrame(instance, Y, A, J, instance.chart, C)


def sample_frame(instance, seed):
    C = sample_positive_C(instance.k, instance.n, seed)
    return fiber_frame(instance, amplituhedron_map(C, instance), C)


def fiber_point(lam, frame):
    if rank(lam) != lam.nrows:
        raise DegeneracyError("lambda is rank deficient")
    return lam @ frame.A


def lambda_from_point(V, frame):
    """The unique lambda with lambda A = V (rows of V must lie in the row span of A)."""
    out = []
    for r in V.rows():
        x = solve(frame.A.T, r)
        if x is None:
            raise ValidationError("point does not lie in the fiber")
        out.append(x)
    return RatMatrix(out)


def reference_lambda(frame):
    """Lambda of the positive preimage C, or None when no preimage is known."""
    if frame.C is None:
        return None
    return lambda_from_point(frame.C, frame)
