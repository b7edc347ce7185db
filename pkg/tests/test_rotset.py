from fractions import Fraction as F

import pytest

from torusrot import rotset as rs
from torusrot import skeleton as sk
from torusrot.errors import WindowError
from torusrot.geometry import (body_contains, convex_hull, hausdorff, lambda_set, omega_set)
from torusrot.numeric import PlanarRational, admissible_indices


@pytest.fixture(scope="module")
def clouds(model):
    return {N: rs.certified_cloud(model, N) for N in (1, 4, 6)}


def test_free_certificate(model, small_model):
    assert rs.free_certificate(model)
    assert rs.free_certificate(small_model)


def test_certified_cloud_n1(model, clouds):
    r = model.rho
    assert set(clouds[1]) == {PlanarRational(F(1, 3), F(1, 3)), PlanarRational(F(0), r),
                              PlanarRational(r, F(0))}


def test_certified_cloud_first_quadrant(clouds):
    for c in clouds.values():
        assert all(p.x >= 0 and p.y >= 0 for p in c)


def test_certified_hull_monotone(clouds):
    assert body_contains(convex_hull(clouds[6]), convex_hull(clouds[4]))


def test_certified_hull_is_omega(model, clouds):
    for N, c in clouds.items():
        assert convex_hull(c).vertices == omega_set(model.param, N, closure=True).vertices


def test_origin_gives_lambda(model, clouds):
    o = PlanarRational(F(0), F(0))
    for N, c in clouds.items():
        assert convex_hull(c + [o]).vertices == lambda_set(model.param, N, closure=True).vertices


def test_certified_window(model):
    with pytest.raises(WindowError):
        rs.certified_cloud(model, model.K + 1)
    with pytest.raises(WindowError):
        rs.certified_cloud(model, 0)


def test_halton_deterministic():
    a, b = rs.halton_starts(10, seed=3), rs.halton_starts(10, seed=3)
    assert a == b
    assert [s.base.axis for s in a[:4]] == ["h", "v", "h", "v"]
    assert rs.halton_starts(0) == []
    assert rs.halton_starts(10, seed=4) != a


def test_empty_starts(model):
    assert rs.empirical_cloud(model, [], 100) == []
    assert rs.empirical_cloud(model, rs.SampleSpec(count=0), 100) == []


def test_empirical_window(model):
    with pytest.raises(WindowError):
        rs.empirical_cloud(model, [], model.horizon_limit + 1)
    with pytest.raises(WindowError):
        rs.empirical_cloud(model, [], 0)


def test_markov_sample_periodicity(model):
    for k in (10, 333):
        s = rs.periodic_sample(model, 1, 1, 3 * k)
        a = s.avg_displacement
        assert abs(a.x - F(1, 3)) <= F(1, 3 * k) and abs(a.y - F(1, 3)) <= F(1, 3 * k)
        assert s.classification.kind == sk.INTERACTING


def test_markov_sample_matches_direct_orbit(model):
    # the period shortcut agrees with following the orbit directly; the branch
    # expands, so the direct orbit is only trusted for a couple of periods
    s = rs.periodic_sample(model, 1, 3, 13)
    end, _ = sk.orbit_with_events(model, s.start, 13, bits=rs.PERIODIC_BITS)
    dx, dy = sk.displacement(s.start, end)
    assert abs(dx / 13 - s.avg_displacement.x) < F(1, 10 ** 20)
    assert abs(dy / 13 - s.avg_displacement.y) < F(1, 10 ** 20)


def test_free_cantor_sample(model):
    x = rs.cantor_point(model, 0.5 + 0.5 / model.q, "h")
    s = rs.empirical_cloud(model, [sk.SkeletonPoint("h", x)], 2000)[0]
    assert s.classification.kind == sk.FREE_H
    B = model.transport_bound
    a = s.avg_displacement
    assert a.y == 0 and abs(a.x - model.rho) <= 2 * B / 2000


def test_cantor_points_free_both_axes(model):
    for axis in ("h", "v"):
        for j in range(0, model.q, 997):
            t = (F(j) + F(1, 2)) / model.q
            x = rs.cantor_point(model, t, axis)
            c = sk.classify_orbit(model, sk.SkeletonPoint(axis, x), 300)
            assert c.fold_events == () and c.kind == (sk.FREE_H if axis == "h" else sk.FREE_V)


def test_sample_spec_deterministic(small_model):
    spec = rs.SampleSpec(count=12, seed=5, markov_upto=1)
    a = rs.empirical_cloud(small_model, spec, 150)
    b = rs.empirical_cloud(small_model, spec, 150)
    assert [s.avg_displacement for s in a] == [s.avg_displacement for s in b]
    assert len(a) == 13 and a[-1].source == "markov(1,1)"


def test_compare_certified_only(model, clouds):
    c = rs.compare_to_analytic(model, 4, [], 100, certified=clouds[4])
    assert c["hausdorff_bound"] == 0 and c["containment_violations"] == []
    assert c.slack == 2 * model.transport_bound / 100


def test_analytic_growth(model):
    assert hausdorff(omega_set(model.param, 8, closure=True), omega_set(model.param, 2, closure=True)) > 0


def test_compare_flags_outsider(model, clouds):
    fake = rs.RotationSample(sk.LiftedSkeletonPoint(sk.SkeletonPoint("h", F(0))), 100,
                             PlanarRational(F(1, 2), F(1, 2)),
                             sk.OrbitClassification(sk.INTERACTING, (), 100))
    c = rs.compare_to_analytic(model, 4, [fake], 100, certified=clouds[4])
    assert len(c.containment_violations) == 1 and c.hausdorff_bound > 0
    j = c.to_json()
    assert j["containment_violations"][0]["index"] == 0


def test_small_run_and_cores(model):
    samples = rs.empirical_cloud(model, rs.SampleSpec(count=40, seed=0), 1000)
    assert len(samples) == 40
    for s in samples:
        assert s.steps == 1000
        d = rs.core_decomposition(model, s, 8)
        assert d.ok, (s.start, d)


def test_core_of_markov_sample(model):
    s = rs.periodic_sample(model, 1, 1, 300)
    d = rs.core_decomposition(model, s, 8)
    assert d.ok and d.distance == 0 and d.core == PlanarRational(F(1, 3), F(1, 3))


def test_cloud_rows(model):
    s = rs.periodic_sample(model, 1, 1, 30)
    rows = rs.cloud_rows([s], [PlanarRational(F(1, 3), F(1, 3))])
    assert rows[0][2] == "Certified" and rows[1][3] == "markov(1,1)"
    assert all(len(r) == len(rs.CLOUD_CSV_HEADER) for r in rows)
