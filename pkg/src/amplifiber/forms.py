"""Boundary hyperplanes of positive fibers and fiber form evaluation."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DegeneracyError, PoleError, UnsupportedError
from .exact import RatMatrix, complement, det, dot, levi_civita, orth_complement, pluecker
from .grassmann import Chart, reference_lambda


def cyclic_interval(j, k, n):
    return tuple(sorted(((j - 1 + t) % n) + 1 for t in range(k)))


def boundary_normal(frame, j):
    """Basis B of the complement of the columns A^{I_j}, scaled so that
    det([lam; B]) = p_{I_j}(lam A) for every lam."""
    inst = frame.instance
    I = cyclic_interval(j, inst.k, inst.n)
    AI = frame.A.columns(I)
    try:
        B = orth_complement(AI.T)
    except DegeneracyError as exc:
        raise DegeneracyError(f"A^I for I={I} is rank deficient (non-generic Y)") from exc
    N = AI.nrows
    for S in combinations(range(1, N + 1), inst.k):
        pS = det(AI.select_rows(S))
        if pS != 0:
            Sbar = complement(S, N)
            target = levi_civita(S, Sbar) * pS
            t = target / pluecker(B, Sbar)
            break
    rows = [tuple(t * x for x in B.row(0))] + [B.row(i) for i in range(1, B.nrows)]
    return RatMatrix(rows)


def fiber_denominator(lam, frame, j):
    return det(lam.vstack(boundary_normal(frame, j)))


@dataclass(frozen=True)
class AffineHyperplane:
    """D_i(x) = constant + normal . x in chart coordinates (sign-normalized)."""

    i: int
    constant: Fraction
    normal: tuple
    flipped: bool = False

    def __call__(self, x):
        return self.constant + dot(self.normal, x)

    @property
    def W0(self):
        return -self.constant

    @property
    def W(self):
        return tuple(-c for c in self.normal)


@dataclass(frozen=True)
class FiberForm:
    frame: object
    chart: Chart
    r: int
    hyperplanes: tuple
    rays: tuple
    prefactor_exponent: int

    @property
    def n(self):
        return len(self.hyperplanes)

    def D(self, i, x):
        return self.hyperplanes[i - 1](x)

    def evaluate(self, x):
        """1 / prod_i D_i(x) at a chart point x."""
        vals = [h(x) for h in self.hyperplanes]
        zero = [h.i for h, v in zip(self.hyperplanes, vals) if v == 0]
        if zero:
            raise PoleError(f"x lies on hyperplanes {zero}", zero)
        out = Fraction(1)
        for v in vals:
            out /= v
        return out

    def sign_flips(self):
        return [h.i for h in self.hyperplanes if h.flipped]

    def to_json(self):
        from .exact import rational_str
        return {
            "chart": self.chart.value,
            "r": self.r,
            "forms": [{"i": h.i, "constant": rational_str(h.constant),
                       "normal": [rational_str(c) for c in h.normal]} for h in self.hyperplanes],
            "signFlips": self.sign_flips(),
        }


def _chart_point(frame, lam):
    """Chart coordinates of lam and the scalar by which D_i differs from p_{I_i}(lam A)."""
    inst = frame.instance
    if frame.chart is Chart.POLYTOPE:
        last = lam[0, lam.ncols - 1]
        return tuple(x / last for x in lam.row(0)[:-1]), last
    k = inst.k
    # dual coordinates: det([lam; b]) = sum_s lbar_s b_s
    lbar = [(-1) ** (k + 1 + s) * pluecker(lam, complement((s,), k + 1)) for s in range(1, k + 2)]
    return tuple(x / lbar[0] for x in lbar[1:]), lbar[0]


def chart_point(frame, lam):
    return _chart_point(frame, lam)[0]


def affine_forms(frame):
    """Sign-normalized affine forms D_1..D_n on the linear chart of the fiber."""
    inst = frame.instance
    n = inst.n
    if frame.chart is Chart.GENERAL:
        raise UnsupportedError("affine forms need k = 1 or k = n - m - 1")
    raw = []
    if frame.chart is Chart.POLYTOPE:
        N = frame.A.nrows
        for i in range(1, n + 1):
            col = frame.A.col(i - 1)
            raw.append((col[N - 1], tuple(col[:N - 1])))
    else:
        for i in range(1, n + 1):
            b = boundary_normal(frame, i).row(0)
            raw.append((b[0], tuple(b[1:])))
    lam = reference_lambda(frame)
    if lam is not None:
        x, scale = _chart_point(frame, lam)
        signs = []
        for c, v in raw:
            val = c + dot(v, x)
            if val == 0:
                raise DegeneracyError("reference point lies on a boundary hyperplane")
            signs.append(val > 0)
    else:
        # Y oriented as C Z^T with det g > 0: the chart scalar has sign (-1)^k
        positive = frame.chart is Chart.POLYTOPE or inst.k % 2 == 0
        signs = [positive] * n
    planes = []
    for i, ((c, v), s) in enumerate(zip(raw, signs), start=1):
        if s:
            planes.append(AffineHyperplane(i, c, v, False))
        else:
            planes.append(AffineHyperplane(i, -c, tuple(-a for a in v), True))
    if frame.chart is Chart.POLYTOPE:
        rays = tuple(inst.Zperp.col(i) for i in range(n))
    else:
        rays = tuple(h.W for h in planes)
    for idx, ray in enumerate(rays, start=1):
        if all(a == 0 for a in ray):
            raise DegeneracyError(f"ray {idx} vanishes")
    return FiberForm(frame, frame.chart, inst.n - inst.m - 1, tuple(planes), rays, inst.k)


def general_fiber_form_value(lam, frame):
    """p_J(lam)^{-k} / prod_i det(lam | B_i) for any (n, k, m)."""
    inst = frame.instance
    pJ = pluecker(lam, frame.J)
    factors = [fiber_denominator(lam, frame, i) for i in range(1, inst.n + 1)]
    zero = [i for i, f in enumerate(factors, start=1) if f == 0]
    if pJ == 0:
        zero = ["J"] + zero
    if zero:
        raise PoleError(f"pole: vanishing factors {zero}", zero)
    out = Fraction(1) / pJ ** inst.k
    for f in factors:
        out /= f
    return out
