"""Brackets, JK residues, canonical functions, triangulations and the
positivity checker for conjugate-to-polytope amplituhedra."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import (DegeneracyError, DimensionError, GenericityError, PoleError,
                     SingularMatrixError, UnsupportedError, ValidationError)
from .exact import (RatMatrix, complement, det, dot, levi_civita, pluecker, rank,
                    rational_str, solve_cramer, to_rational)
from .fans import (Containment, _ConeTable, closed_cone_contains, cone_contains,
                   enumerate_chambers, ray_system)
from .forms import affine_forms, boundary_normal, cyclic_interval
from .grassmann import Chart, amplituhedron_map, fiber_frame, sample_positive_C

SIGN_RULES = ("corrected", "literal")


# brackets

def _yp(Y, Z, rows, P):
    """<Y_rows P>: determinant of the chosen Y rows and Z columns P as columns."""
    cols = [Y.row(a) for a in rows] + [Z.col(p - 1) for p in P]
    return det(RatMatrix.from_columns(cols))


def intersection_vector(Y, P, Z):
    """Coordinates v^beta of the vector v_P = sum_beta v^beta Y_beta spanning Y cap P."""
    k = Y.nrows
    return tuple((-1) ** b * _yp(Y, Z, [a for a in range(k) if a != b], P) for b in range(k))


def _check_bracket_args(Y, Ps, Z):
    k, d = Y.shape
    m = d - k
    if Z.nrows != d:
        raise DimensionError("Z and Y disagree on m + k")
    if len(Ps) != k or any(len(P) != m + 1 for P in Ps):
        raise DimensionError(f"need {k} index sets of size {m + 1}")


def bracket(Y, Ps, Z):
    """<Y P_1 cap ... cap P_k> as the determinant of the intersection-vector coordinates."""
    _check_bracket_args(Y, Ps, Z)
    return det(RatMatrix([intersection_vector(Y, P, Z) for P in Ps]))


def yperp_entry(Y, alpha, P, Z):
    """<Y^perp_alpha P> by its Levi-Civita sum (alpha is 1-based)."""
    k = Y.nrows
    total = Fraction(0)
    for rest in combinations(range(1, k + 1), k - 1):
        eps = levi_civita((alpha,), rest)
        if eps:
            total += eps * _yp(Y, Z, [a - 1 for a in rest], P)
    return total


def bracket_levi_civita(Y, Ps, Z):
    _check_bracket_args(Y, Ps, Z)
    k = Y.nrows
    return det(RatMatrix([[yperp_entry(Y, a, P, Z) for P in Ps] for a in range(1, k + 1)]))


def complement_interval(j, k, n):
    return complement(cyclic_interval(j, k, n), n)


# sign data

def sign_exponent(j, k, n, rule="corrected"):
    if rule not in SIGN_RULES:
        raise ValidationError(f"unknown sign rule {rule!r}")
    if n not in cyclic_interval(j, k, n):
        return k * j
    return j - 1 if rule == "literal" else j


def xi_exponent(J, k, n, rule="corrected"):
    return sum(sign_exponent(j, k, n, rule) for j in J)


@dataclass(frozen=True)
class SignData:
    J: tuple
    s: tuple
    xi: int


def sign_data(J, k, n, rule="corrected"):
    s = tuple(sign_exponent(j, k, n, rule) for j in J)
    return SignData(tuple(J), s, sum(s))


def _require_conjugate(frame):
    if frame.chart is not Chart.CONJUGATE:
        raise UnsupportedError("this operation needs k = n - m - 1")


def geomchar_identity(frame, J, rule="corrected"):
    """(-1)^{xi_J} det(W^{I_j})_{j in J} against <Y Ibar_{j_1} cap ... cap Ibar_{j_k}>."""
    _require_conjugate(frame)
    inst = frame.instance
    rays = affine_forms(frame).rays
    lhs = (-1) ** xi_exponent(J, inst.k, inst.n, rule) * det(RatMatrix([rays[j - 1] for j in J]))
    rhs = bracket(frame.Y, [complement_interval(j, inst.k, inst.n) for j in J], inst.Z)
    return lhs, rhs, lhs == rhs


def ray_entry_identity(frame, j, rule="corrected"):
    """Entrywise W^{I_j}_alpha = (-1)^{s_{I_j}} <Y^perp_alpha Ibar_j>; returns (lhs, rhs, equal)."""
    _require_conjugate(frame)
    inst = frame.instance
    lhs = tuple(affine_forms(frame).rays[j - 1])
    sgn = (-1) ** sign_exponent(j, inst.k, inst.n, rule)
    P = complement_interval(j, inst.k, inst.n)
    rhs = tuple(sgn * yperp_entry(frame.Y, a, P, inst.Z) for a in range(1, inst.k + 1))
    return lhs, rhs, lhs == rhs


# residues

def _cone_point(form, I):
    normals = RatMatrix([form.hyperplanes[i - 1].normal for i in I])
    d = det(normals)
    if d == 0:
        raise DegeneracyError(f"hyperplanes {tuple(I)} are not independent")
    q = solve_cramer(normals, [-form.hyperplanes[i - 1].constant for i in I])
    return q, d


def residue_at_cone(form, I):
    """1/|det beta_I| * 1/prod_{j not in I} D_j(q_I)."""
    if len(I) != form.r:
        raise DimensionError(f"cone needs {form.r} generators")
    q, d = _cone_point(form, I)
    out = Fraction(1) / abs(d)
    bad = []
    for h in form.hyperplanes:
        if h.i in I:
            continue
        v = h(q)
        if v == 0:
            bad.append(h.i)
        else:
            out /= v
    if bad:
        raise PoleError(f"secondary pole at q_{tuple(I)}: D_{bad} vanish", bad)
    return out


def cone_point_values(form, I):
    """All D_i at the vertex q_I of the hyperplanes indexed by I."""
    q, _ = _cone_point(form, I)
    return {h.i: h(q) for h in form.hyperplanes}


def jk_residue(form, xi):
    """Sum of residues over the cones whose interior contains xi."""
    rs = ray_system(form)
    xi = tuple(to_rational(x) for x in xi)
    if len(xi) != form.r:
        raise DimensionError("xi has the wrong dimension")
    cones = []
    for I in rs.cones():
        c = cone_contains(rs, I, xi)
        if c is Containment.BOUNDARY:
            from .fans import cone_coefficients
            coeffs = cone_coefficients(rs, I, xi)
            wall = tuple(i for i, x in zip(I, coeffs) if x != 0)
            raise GenericityError(f"xi lies on the wall spanned by rays {wall} (cone {I})", wall=wall)
        if c is Containment.INTERIOR:
            cones.append(I)
    total = sum((residue_at_cone(form, I) for I in cones), Fraction(0))
    return total, tuple(cones)


def triangle_canonical(frame, J, normalized=True):
    """det(W_J)^m / prod_{i not in J} det(b_i, b_{j_1}, ..., b_{j_k}) with sign-normalized b.

    The raw formula carries the orientation sign of the normals indexed by J;
    ``normalized`` removes it so the value is positive exactly when the
    vertex q_J sees every other D_i positive.
    """
    _require_conjugate(frame)
    inst = frame.instance
    form = affine_forms(frame)
    b = {h.i: (h.constant,) + tuple(h.normal) for h in form.hyperplanes}
    num = det(RatMatrix([form.rays[j - 1] for j in J])) ** inst.m
    out = num
    for i in range(1, inst.n + 1):
        if i in J:
            continue
        d = det(RatMatrix.from_columns([b[i]] + [b[j] for j in J]))
        if d == 0:
            raise PoleError(f"factor {i} vanishes for J={tuple(J)}", [i])
        out /= d
    if normalized and det(RatMatrix([form.hyperplanes[j - 1].normal for j in J])) < 0:
        out = -out
    return out


def simplex_canonical(Y, vertices, Z):
    """Canonical function of the simplex conv{Z_v} in P^m at the point Y (k = 1)."""
    cols = [Z.col(v - 1) for v in vertices]
    y = Y.row(0)
    full = det(RatMatrix.from_columns(cols))
    out = full ** (len(cols) - 1)
    for a in range(len(cols)):
        out /= det(RatMatrix.from_columns(cols[:a] + [y] + cols[a + 1:]))
    return out


def in_simplex(Y, vertices, Z):
    cols = [Z.col(v - 1) for v in vertices]
    c = solve_cramer(RatMatrix.from_columns(cols), Y.row(0))
    return all(x > 0 for x in c) or all(x < 0 for x in c)


# triangulations

@dataclass(frozen=True)
class Triangulation:
    n: int
    k: int
    m: int
    cells: frozenset
    source: tuple = field(default=None, compare=False)

    @property
    def is_polytope(self):
        return self.k == 1

    def simplices(self):
        """Vertex sets of the simplices (k = 1 only)."""
        if self.k != 1:
            raise ValidationError("simplices are only defined for k = 1")
        return frozenset(complement(I, self.n) for I in self.cells)

    def sorted_cells(self):
        return sorted(self.cells)


def triangulation_from_chamber(fan, chamber, instance):
    return Triangulation(instance.n, instance.k, instance.m, frozenset(chamber.cones), chamber.witness)


def parity_dual(T):
    if T.m % 2:
        raise UnsupportedError("parity duality needs even m")
    return Triangulation(T.n, T.n - T.m - T.k, T.m, T.cells, T.source)


def dissection_from_cone(fan, witness):
    """Minimal index sets J (by inclusion) whose closed cone contains the witness."""
    rs = fan.ray_system
    xi = tuple(to_rational(x) for x in witness)
    found = []
    for size in range(1, rs.dim + 1):
        for J in combinations(range(1, rs.n + 1), size):
            if rank(rs.matrix(J)) != size:
                continue
            if any(set(F) <= set(J) for F in found):
                continue
            if closed_cone_contains(rs, J, xi):
                found.append(J)
    return frozenset(found)


@dataclass(frozen=True)
class CanonicalValue:
    value: Fraction
    cells: tuple
    xi: tuple
    frame: object = field(default=None, compare=False, repr=False)


def _check_canonical_case(frame):
    inst = frame.instance
    if frame.chart is Chart.GENERAL:
        raise UnsupportedError("canonical functions need k = 1 or k = n - m - 1")
    if frame.chart is Chart.CONJUGATE and inst.m % 2:
        raise UnsupportedError("conjugate canonical functions need even m")


def canonical_function(frame, xi, form=None):
    _check_canonical_case(frame)
    form = form or affine_forms(frame)
    value, cones = jk_residue(form, xi)
    return CanonicalValue(value, cones, tuple(to_rational(x) for x in xi), frame)


@dataclass(frozen=True)
class ChamberSweep:
    fan: object
    values: tuple

    @property
    def agree(self):
        return len({v.value for v in self.values}) == 1


def canonical_all_chambers(frame):
    _check_canonical_case(frame)
    form = affine_forms(frame)
    fan = enumerate_chambers(ray_system(form))
    values = tuple(canonical_function(frame, c.witness, form) for c in fan.chambers)
    return ChamberSweep(fan, values)


# conjecture checker

def orientation_sign(k):
    return -1 if (k * (k + 1) // 2) % 2 else 1


def sample_seed(seed, i):
    return f"{seed}:{i}"


def _bracket_table(Y, Z, n, k):
    Pbar = [complement_interval(j, k, n) for j in range(1, n + 1)]
    return [[(-1) ** (a - 1) * _yp(Y, Z, [b for b in range(k) if b != a - 1], P) for P in Pbar]
            for a in range(1, k + 1)]


def positivity_values(instance, Y, rule="corrected"):
    """q_J = o_k eps_{J Jbar} (-1)^{xi_J} <Y Ibar_{j_1} cap ... cap Ibar_{j_k}> for all J."""
    n, k = instance.n, instance.k
    table = _bracket_table(Y, instance.Z, n, k)
    o = orientation_sign(k) if rule == "corrected" else 1
    out = {}
    for J in combinations(range(1, n + 1), k):
        b = det(RatMatrix([[table[a][j - 1] for j in J] for a in range(k)]))
        out[J] = o * levi_civita(J, complement(J, n)) * (-1) ** xi_exponent(J, k, n, rule) * b
    return out


def _check_one(args):
    instance, seed, i, rule = args
    s = sample_seed(seed, i)
    C = sample_positive_C(instance.k, instance.n, s)
    Y = amplituhedron_map(C, instance)
    vals = positivity_values(instance, Y, rule)
    bad = [(J, v) for J, v in vals.items() if v <= 0]
    return i, s, C, min(vals.values()), bad, len({v > 0 for v in vals.values()}) == 1


def conjecture_check(instance, samples, seed, rule="corrected", workers=None):
    """Randomized positivity check over positive C; violations are reported, not raised."""
    if not instance.is_conjugate:
        raise UnsupportedError("the positivity checker needs k = n - m - 1")
    if instance.m % 2:
        raise UnsupportedError("the positivity checker needs even m")
    jobs = [(instance, seed, i, rule) for i in range(samples)]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_check_one, jobs, chunksize=max(1, samples // (4 * workers))))
    else:
        results = [_check_one(j) for j in jobs]
    violations = []
    min_value = None
    sign_definite = True
    for i, s, C, mv, bad, definite in results:
        min_value = mv if min_value is None else min(min_value, mv)
        sign_definite &= definite
        for J, v in bad:
            violations.append({"sample": i, "seed": s, "C": C.to_json(), "J": list(J),
                               "value": rational_str(v)})
    return {
        "instance": {"n": instance.n, "k": instance.k, "m": instance.m},
        "samples": samples,
        "seed": seed,
        "rule": rule,
        "orientation": orientation_sign(instance.k) if rule == "corrected" else 1,
        "minValue": None if min_value is None else rational_str(min_value),
        "signDefinite": sign_definite,
        "violations": violations,
    }
