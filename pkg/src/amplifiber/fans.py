"""Ray systems, simplicial cone containment, chamber fans and Gale duality."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import gcd

import numpy as np

from .errors import DegeneracyError, DimensionError, SingularMatrixError, UnsupportedError, ValidationError
from .exact import RatMatrix, det, dot, inverse, rank, rational_str, solve, to_rational


class Provenance(str, Enum):
    FROM_FRAME = "FromFrame"
    FROM_GALE = "FromGale"
    EXPLICIT = "Explicit"


class Containment(str, Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class RaySystem:
    dim: int
    rays: tuple
    provenance: Provenance = Provenance.EXPLICIT

    def __post_init__(self):
        rays = tuple(tuple(to_rational(x) for x in ray) for ray in self.rays)
        if any(len(ray) != self.dim for ray in rays):
            raise DimensionError("ray length does not match dim")
        object.__setattr__(self, "rays", rays)

    @property
    def n(self):
        return len(self.rays)

    def ray(self, j):
        return self.rays[j - 1]

    def matrix(self, I):
        """Rays indexed by I as columns."""
        return RatMatrix.from_columns([self.rays[i - 1] for i in I])

    def cones(self):
        return list(combinations(range(1, self.n + 1), self.dim))


def cone_coefficients(rs, I, xi):
    """Coefficients c with xi = sum c_i ray_i, None if xi is outside the span.

    Raises DegeneracyError when the generators are dependent.
    """
    xi = tuple(to_rational(x) for x in xi)
    if len(I) == rs.dim:
        from .exact import solve_cramer
        try:
            return solve_cramer(rs.matrix(I), xi)
        except SingularMatrixError as exc:
            raise DegeneracyError(f"rays {I} are dependent") from exc
    return solve(rs.matrix(I), xi)


def cone_contains(rs, I, xi):
    try:
        c = cone_coefficients(rs, I, xi)
    except DegeneracyError:
        return Containment.DEGENERATE
    if c is None or any(x < 0 for x in c):
        return Containment.OUTSIDE
    if all(x > 0 for x in c):
        return Containment.INTERIOR
    return Containment.BOUNDARY


def closed_cone_contains(rs, I, xi):
    return cone_contains(rs, I, xi) in (Containment.INTERIOR, Containment.BOUNDARY)


def _pos_int(v):
    """Primitive integer vector on the same open ray as v."""
    v = [to_rational(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _idot(u, v):
    return sum(a * b for a, b in zip(u, v))


class _ConeTable:
    """Integer adjugates of every nondegenerate r-subset of rays.

    Containment only depends on signs of cone coordinates, which are preserved
    by positive rescaling of rays and directions, so everything runs on ints.
    """

    def __init__(self, rs):
        self.rs = rs
        self.int_rays = [_pos_int(ray) for ray in rs.rays]
        self.cones, self.adjugates, self.dets, self.degenerate = [], [], [], []
        for I in rs.cones():
            M = RatMatrix.from_columns([self.int_rays[i - 1] for i in I])
            d = det(M)
            if d == 0:
                self.degenerate.append(I)
                continue
            adj = tuple(tuple(int(x * d) for x in row) for row in inverse(M).rows())
            self.cones.append(I)
            self.adjugates.append(adj)
            self.dets.append(int(d))

    def coefficient_signs(self, idx, xi_int):
        s = 1 if self.dets[idx] > 0 else -1
        out = []
        for row in self.adjugates[idx]:
            v = _idot(row, xi_int) * s
            out.append((v > 0) - (v < 0))
        return out

    def float_inverses(self):
        return np.array([[[x / d for x in row] for row in adj]
                         for adj, d in zip(self.adjugates, self.dets)], dtype=np.float64)

    def signature(self, xi, strict=True):
        """Cones whose interior contains xi; raises if xi sits on a cone wall."""
        xi_int = _pos_int(xi)
        out = []
        for idx, I in enumerate(self.cones):
            c = self.coefficient_signs(idx, xi_int)
            if min(c) < 0:
                continue
            if min(c) > 0:
                out.append(I)
            elif strict:
                from .errors import GenericityError
                wall = tuple(i for i, x in zip(I, c) if x != 0)
                raise GenericityError(f"direction lies on the wall spanned by rays {wall} of cone {I}",
                                      wall=wall)
        return frozenset(out)


@dataclass(frozen=True)
class Chamber:
    witness: tuple
    cones: frozenset

    def sorted_cones(self):
        return sorted(self.cones)


@dataclass(frozen=True)
class ChamberFan:
    ray_system: RaySystem
    chambers: tuple
    degenerate: tuple = field(default=())

    @property
    def r(self):
        return self.ray_system.dim

    def signatures(self):
        return {c.cones for c in self.chambers}

    def chamber_of(self, xi):
        sig = _ConeTable(self.ray_system).signature(tuple(to_rational(x) for x in xi))
        for c in self.chambers:
            if c.cones == sig:
                return c
        return None

    def to_json(self):
        return {
            "r": self.r,
            "rays": [[rational_str(x) for x in ray] for ray in self.ray_system.rays],
            "chambers": [{"witness": [rational_str(x) for x in c.witness],
                          "cones": [list(I) for I in c.sorted_cones()]} for c in self.chambers],
        }


def _l1(v):
    s = sum(abs(x) for x in v)
    return tuple(x / s for x in v)


def _primitive(v):
    """Integer primitive representative of the line through v, sign fixed."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _angle_cmp(u, v):
    hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
    hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def _sectors_2d(lines):
    """Integer bisector directions of the sectors cut by lines through 0 in R^2."""
    dirs = {}
    for d in lines:
        p = _primitive(d)
        dirs[p] = True
        dirs[tuple(-x for x in p)] = True
    dirs = list(dirs)
    if len(dirs) == 2:
        d = dirs[0]
        return [(-d[1], d[0]), (d[1], -d[0])]
    dirs.sort(key=cmp_to_key(_angle_cmp))
    out = []
    for a, b in zip(dirs, dirs[1:] + dirs[:1]):
        na, nb = abs(a[0]) + abs(a[1]), abs(b[0]) + abs(b[1])
        out.append(_pos_int((a[0] * nb + b[0] * na, a[1] * nb + b[1] * na)))
    return out


def _regions_r1():
    return [(1,), (-1,)]


def _regions_r2(rs):
    lines = [_pos_int(ray) for ray in rs.rays if any(x != 0 for x in ray)]
    if not lines:
        raise DegeneracyError("all rays vanish")
    return _sectors_2d(lines)


def _plane_normals(rs):
    rays = [_pos_int(ray) for ray in rs.rays]
    normals = {}
    for a, b in combinations(rays, 2):
        h = _cross(a, b)
        if any(x != 0 for x in h):
            normals[_primitive(h)] = True
    return list(normals)


def _regions_r3_vertex(normals):
    """One witness per region of a central plane arrangement in R^3, found by
    sweeping around every vertex line of the arrangement."""
    if len(normals) == 1:
        h = normals[0]
        return [h, tuple(-x for x in h)]
    vertices = {}
    for h, g in combinations(normals, 2):
        v = _cross(h, g)
        if any(x != 0 for x in v):
            p = _primitive(v)
            vertices[p] = True
            vertices[tuple(-x for x in p)] = True
    witnesses = []
    for v in vertices:
        through = [h for h in normals if _idot(h, v) == 0]
        others = [h for h in normals if _idot(h, v) != 0]
        # tangent-plane coordinates around v
        tangents = [_cross(v, h) for h in through]
        e1 = tangents[0]
        e2 = _cross(v, e1)
        coords = [(_idot(t, e1), _idot(t, e2)) for t in tangents]
        for s in _sectors_2d(coords):
            d = tuple(s[0] * a + s[1] * b for a, b in zip(e1, e2))
            eps = Fraction(1)
            for h in others:
                hd = _idot(h, d)
                if hd != 0:
                    eps = min(eps, Fraction(abs(_idot(h, v)), 2 * abs(hd)))
            witnesses.append(_pos_int(tuple(a + eps * b for a, b in zip(v, d))))
    return witnesses


def strict_feasible(rows, dim):
    """Exact Fourier-Motzkin test of {x : a . x > 0 for all a in rows}.

    Returns a rational witness or None.
    """
    rows = [tuple(to_rational(x) for x in a) for a in rows]
    if dim == 0:
        return () if not rows else None
    last = dim - 1
    pos = [a for a in rows if a[last] > 0]
    neg = [a for a in rows if a[last] < 0]
    zero = [a[:last] for a in rows if a[last] == 0]
    reduced = {}
    for a in zero:
        if any(x != 0 for x in a):
            reduced[_normalize_row(a)] = True
        else:
            return None
    for p in pos:
        for q in neg:
            c = tuple(-q[last] * x + p[last] * y for x, y in zip(p[:last], q[:last]))
            if all(x == 0 for x in c):
                return None
            reduced[_normalize_row(c)] = True
    sub = strict_feasible(list(reduced), last)
    if sub is None:
        return None
    # back-substitute: a[:last].sub + a[last] t > 0
    lo = [-dot(a[:last], sub) / a[last] for a in pos]
    hi = [-dot(a[:last], sub) / a[last] for a in neg]
    if lo and hi:
        t = (max(lo) + min(hi)) / 2
    elif lo:
        t = max(lo) + 1
    elif hi:
        t = min(hi) - 1
    else:
        t = Fraction(0)
    return tuple(sub) + (t,)


def _normalize_row(a):
    s = max(abs(x) for x in a)
    return tuple(x / s for x in a)


def _regions_fm(rs, normals):
    """Incremental arrangement splitting with Fourier-Motzkin certificates."""
    start = tuple(Fraction(1, i + 2) for i in range(rs.dim))
    regions = [([], start)]
    for h in normals:
        nxt = []
        for cons, w in regions:
            for sgn in (1, -1):
                hh = tuple(sgn * x for x in h)
                if dot(hh, w) > 0:
                    nxt.append((cons + [hh], w))
                else:
                    x = strict_feasible(cons + [hh], rs.dim)
                    if x is not None:
                        nxt.append((cons + [hh], x))
        regions = nxt
    return [w for _, w in regions]


def arrangement_normals(rs):
    """Normals of the hyperplanes spanned by (r-1)-subsets of rays."""
    r = rs.dim
    if r == 1:
        return [(1,)]
    if r == 2:
        return [_primitive((-ray[1], ray[0])) for ray in rs.rays if any(x != 0 for x in ray)]
    if r == 3:
        return _plane_normals(rs)
    raise UnsupportedError(f"chamber enumeration supports r <= 3, got r={r}")


def enumerate_chambers(rs, method="vertex"):
    """All full-dimensional chambers inside the support of the simplicial cones."""
    r = rs.dim
    if r == 1:
        witnesses = _regions_r1()
    elif r == 2:
        witnesses = _regions_r2(rs) if method != "fm" else \
            _regions_fm(rs, arrangement_normals(rs))
    elif r == 3:
        normals = arrangement_normals(rs)
        witnesses = _regions_fm(rs, normals) if method == "fm" else _regions_r3_vertex(normals)
    else:
        raise UnsupportedError(f"chamber enumeration supports r <= 3, got r={r}")
    table = _ConeTable(rs)
    if r >= 2:
        normals = arrangement_normals(rs)
        by_sign = {}
        for w in witnesses:
            w = _pos_int(w)
            by_sign.setdefault(tuple(_idot(h, w) > 0 for h in normals), w)
        witnesses = list(by_sign.values())
    seen = {}
    for w in witnesses:
        sig = table.signature(w)
        if sig and sig not in seen:
            seen[sig] = tuple(Fraction(x) for x in _pos_int(w))
    chambers = sorted((Chamber(w, sig) for sig, w in seen.items()),
                      key=lambda c: c.sorted_cones())
    return ChamberFan(rs, tuple(chambers), tuple(table.degenerate))


def secondary_fan_polytope(instance):
    if instance.k != 1:
        raise ValidationError("secondary_fan_polytope needs k = 1")
    Zp = instance.Zperp
    return RaySystem(Zp.nrows, tuple(Zp.col(j) for j in range(instance.n)), Provenance.FROM_GALE)


def rays_from_frame(frame):
    from .forms import affine_forms
    from .grassmann import Chart
    if frame.chart is not Chart.CONJUGATE:
        raise ValidationError("rays_from_frame needs the conjugate chart (k = n - m - 1)")
    form = affine_forms(frame)
    return RaySystem(form.r, form.rays, Provenance.FROM_FRAME)


def ray_system(form):
    """Rays used by the JK residue of a fiber form."""
    from .grassmann import Chart
    prov = Provenance.FROM_GALE if form.chart is Chart.POLYTOPE else Provenance.FROM_FRAME
    return RaySystem(form.r, form.rays, prov)


@dataclass(frozen=True)
class GalePair:
    M: RatMatrix
    Mperp: RatMatrix

    def dual_points(self):
        return [self.Mperp.row(i) for i in range(self.Mperp.nrows)]


def gale_transform(M):
    """Gale dual of the n columns of an m x n matrix M.

    M is first normalized to [I_m | X]; then Mperp = [-X ; I_{n-m}] and M Mperp = 0.
    """
    m, n = M.shape
    try:
        Minv = inverse(M.columns(range(1, m + 1)))
    except SingularMatrixError as exc:
        raise ValidationError("left block of M is singular; reorder points first") from exc
    Mn = Minv @ M
    X = Mn.columns(range(m + 1, n + 1))
    Mperp = (-X).vstack(RatMatrix.identity(n - m))
    return GalePair(Mn, Mperp)


def random_directions(r, samples, seed, bound=10 ** 6):
    rng = np.random.default_rng(seed)
    return rng.integers(-bound, bound + 1, size=(samples, r), dtype=np.int64)


@dataclass(frozen=True)
class MonteCarloReport:
    samples: int
    missing: tuple
    hits: int
    outside: int
    on_walls: int
    rechecked: int

    @property
    def complete(self):
        return not self.missing


def monte_carlo_completeness(fan, samples=10_000, seed=0):
    """Classify random integer directions by containment signature and report
    any nonempty signature absent from the enumerated chambers."""
    from ._kernels import containment_codes
    table = _ConeTable(fan.ray_system)
    dirs = random_directions(fan.r, samples, seed)
    if not table.cones:
        return MonteCarloReport(samples, (), 0, samples, 0, 0)
    inv = table.float_inverses()
    scale = np.abs(inv).max(axis=(1, 2)) * float(np.abs(dirs).max()) * fan.r
    codes = containment_codes(inv, dirs.astype(np.float64), 1e-9 * scale)
    known = fan.signatures()
    missing, hits, outside, walls, rechecked = {}, 0, 0, 0, 0
    for s in range(samples):
        row = codes[s]
        if (row == -1).any():
            rechecked += 1
            xi = tuple(Fraction(int(x)) for x in dirs[s])
            try:
                sig = table.signature(xi)
            except DegeneracyError:
                walls += 1
                continue
        else:
            sig = frozenset(I for I, c in zip(table.cones, row) if c == 1)
        if not sig:
            outside += 1
        elif sig in known:
            hits += 1
        else:
            missing.setdefault(sig, tuple(int(x) for x in dirs[s]))
    return MonteCarloReport(samples, tuple(sorted((sorted(k), v) for k, v in missing.items())),
                            hits, outside, walls, rechecked)
