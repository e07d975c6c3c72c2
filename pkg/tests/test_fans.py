from fractions import Fraction
from itertools import combinations

import pytest

from amplifiber.errors import GenericityError, UnsupportedError, ValidationError
from amplifiber.exact import RatMatrix, complement, det, dot, levi_civita, orth_complement
from amplifiber.fans import (Containment, Provenance, RaySystem, _ConeTable, arrangement_normals,
                             cone_contains, enumerate_chambers, gale_transform,
                             monte_carlo_completeness, ray_system, rays_from_frame,
                             secondary_fan_polytope, strict_feasible)
from amplifiber.forms import affine_forms
from amplifiber.grassmann import build_Z_moment_curve, fiber_frame, sample_frame
from conftest import instance


def fan_of(n, k, m, seed, method="vertex"):
    return enumerate_chambers(ray_system(affine_forms(sample_frame(instance(n, k, m), seed))), method)


def test_cone_contains_cases():
    rs = RaySystem(2, [(1, 0), (1, 1), (0, 1)])
    assert cone_contains(rs, (1, 2), (1, 0)) is Containment.BOUNDARY
    assert cone_contains(rs, (1, 2), (2, 1)) is Containment.INTERIOR
    assert cone_contains(rs, (1, 2), (-2, -1)) is Containment.OUTSIDE
    deg = RaySystem(2, [(1, 1), (2, 2)])
    assert cone_contains(deg, (1, 2), (1, 1)) is Containment.DEGENERATE


def test_two_rays_single_chamber():
    fan = enumerate_chambers(RaySystem(2, [(1, 0), (0, 1)]))
    assert len(fan.chambers) == 1
    assert fan.chambers[0].cones == frozenset({(1, 2)})


@pytest.mark.parametrize("n,k,m,count", [(5, 1, 2, 5), (5, 2, 2, 5), (6, 1, 2, 14),
                                         (6, 3, 2, 14), (6, 1, 4, 2), (7, 1, 4, 7)])
def test_chamber_counts(n, k, m, count):
    for seed in range(2):
        assert len(fan_of(n, k, m, seed).chambers) == count


def test_secondary_fan_is_zperp_columns():
    inst = instance(5, 1, 2)
    rs = secondary_fan_polytope(inst)
    assert rs.provenance is Provenance.FROM_GALE
    assert rs.rays == tuple(inst.Zperp.col(j) for j in range(5))
    assert len(enumerate_chambers(rs).chambers) == 5
    with pytest.raises(ValidationError):
        secondary_fan_polytope(instance(5, 2, 2))


@pytest.mark.parametrize("n,k,m", [(5, 1, 2), (5, 2, 2), (6, 1, 2), (6, 3, 2), (7, 1, 4)])
def test_fourier_motzkin_route_agrees(n, k, m):
    for seed in range(2):
        assert fan_of(n, k, m, seed).signatures() == fan_of(n, k, m, seed, "fm").signatures()


def test_strict_feasible():
    assert strict_feasible([(1, 0), (0, 1)], 2) is not None
    assert strict_feasible([(1, 0), (-1, 0)], 2) is None
    rows = [(1, 1, 0), (-1, 2, 1), (0, -1, 3), (2, -3, -1)]
    x = strict_feasible(rows, 3)
    if x is not None:
        assert all(dot(r, x) > 0 for r in rows)
    assert strict_feasible([(1, 2, 3), (-1, -2, -3)], 3) is None


@pytest.mark.parametrize("n,k,m", [(5, 1, 2), (6, 3, 2), (7, 1, 4)])
def test_fan_invariants(n, k, m):
    fan = fan_of(n, k, m, 4)
    table = _ConeTable(fan.ray_system)
    normals = arrangement_normals(fan.ray_system)
    sigs = [c.cones for c in fan.chambers]
    assert len(set(sigs)) == len(sigs)
    for c in fan.chambers:
        assert all(dot(h, c.witness) != 0 for h in normals)
        assert table.signature(c.witness) == c.cones
        assert fan.chamber_of(c.witness) == c


def test_chamber_well_defined_under_perturbation():
    fan = fan_of(6, 1, 2, 2)
    normals = arrangement_normals(fan.ray_system)
    table = _ConeTable(fan.ray_system)
    for c in fan.chambers:
        w = c.witness
        signs = [dot(h, w) > 0 for h in normals]
        for delta in [(1, 0, 0), (0, -1, 0), (0, 0, 1), (1, 1, -1)]:
            eps = Fraction(1, 2)
            while True:
                p = tuple(a + eps * b for a, b in zip(w, delta))
                if [dot(h, p) > 0 for h in normals] == signs and all(dot(h, p) != 0 for h in normals):
                    break
                eps /= 2
            assert table.signature(p) == c.cones


def test_wall_point_rejected():
    fan = fan_of(5, 1, 2, 0)
    with pytest.raises(GenericityError):
        fan.chamber_of(fan.ray_system.ray(2))


def test_unsupported_dimension():
    with pytest.raises(UnsupportedError):
        fan_of(7, 1, 2, 0)


def test_rays_from_frame_conjugate_pentagon():
    fr = sample_frame(instance(5, 2, 2), 8)
    rs = rays_from_frame(fr)
    Y = fr.Y
    assert rs.ray(4) == (-Y[1, 3], Y[0, 3])
    assert rs.ray(5) == (-Y[1, 0], Y[0, 0])
    with pytest.raises(ValidationError):
        rays_from_frame(sample_frame(instance(5, 1, 2), 0))


def test_rays_are_hyperplane_normals():
    fr = sample_frame(instance(6, 3, 2), 8)
    form = affine_forms(fr)
    for h, ray in zip(form.hyperplanes, rays_from_frame(fr).rays):
        for v in orth_complement(RatMatrix([h.normal])).rows():
            assert dot(ray, v) == 0


def test_projectively_equivalent_points_same_fan():
    inst = instance(6, 3, 2)
    fr = sample_frame(inst, 3)
    g = RatMatrix([[2, 1, 0], [0, 1, 0], [1, 0, 3]])
    assert det(g) > 0
    fr2 = fiber_frame(inst, g @ fr.Y, g @ fr.C)
    a = enumerate_chambers(rays_from_frame(fr)).signatures()
    b = enumerate_chambers(rays_from_frame(fr2)).signatures()
    assert a == b


def test_gale_pairs():
    for n, k, m in [(5, 1, 2), (6, 3, 2), (8, 3, 4)]:
        inst = instance(n, k, m)
        pair = gale_transform(inst.Z)
        assert (pair.M @ pair.Mperp).is_zero()
        assert pair.Mperp.T == inst.Zperp
    simplex = gale_transform(RatMatrix([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]]))
    assert [tuple(p) for p in simplex.dual_points()] == [(-1,), (-1,), (-1,), (1,)]
    with pytest.raises(ValidationError):
        gale_transform(RatMatrix([[0, 1, 1], [0, 1, 2]]))


def test_pentagon_gale_dual_pairwise_non_parallel():
    pts = gale_transform(instance(5, 1, 2).Z).dual_points()
    assert len(pts) == 5 and all(len(p) == 2 for p in pts)
    for a, b in combinations(pts, 2):
        assert a[0] * b[1] - a[1] * b[0] != 0


@pytest.mark.parametrize("n,m", [(5, 2), (6, 2), (7, 4), (6, 3)])
def test_gale_determinant_duality(n, m):
    inst = instance(n, 1, m)
    rs = secondary_fan_polytope(inst)
    sign = (-1) ** (rs.dim * (m + 1))
    for I in combinations(range(1, n + 1), rs.dim):
        Ib = complement(I, n)
        assert det(rs.matrix(I)) == sign * levi_civita(I, Ib) * det(inst.Z.columns(Ib))


def test_monte_carlo_completeness_small():
    fan = fan_of(6, 3, 2, 1)
    rep = monte_carlo_completeness(fan, samples=2000, seed=5)
    assert rep.complete and rep.hits + rep.outside + rep.on_walls == 2000


def test_monte_carlo_detects_missing_chamber():
    fan = fan_of(5, 1, 2, 1)
    from amplifiber.fans import ChamberFan
    crippled = ChamberFan(fan.ray_system, fan.chambers[1:])
    rep = monte_carlo_completeness(crippled, samples=2000, seed=5)
    assert not rep.complete
    assert sorted(fan.chambers[0].cones) in [m[0] for m in rep.missing]


def test_z_independence_of_combinatorics():
    a = build_Z_moment_curve(6, 2, 1)
    b = build_Z_moment_curve(6, 2, 1, [Fraction(1, 3), 1, 2, Fraction(7, 2), 5, 11])
    for seed in range(2):
        fa = enumerate_chambers(ray_system(affine_forms(sample_frame(a, seed))))
        fb = enumerate_chambers(ray_system(affine_forms(sample_frame(b, seed))))
        assert fa.signatures() == fb.signatures()


def test_fan_json_shape():
    data = fan_of(5, 2, 2, 0).to_json()
    assert data["r"] == 2 and len(data["rays"]) == 5 and len(data["chambers"]) == 5
    assert all("/" in x for c in data["chambers"] for x in c["witness"])
