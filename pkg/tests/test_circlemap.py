import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from torusrot import circlemap as cm
from torusrot import plmap
from torusrot.errors import ConstructionError, WindowError
from torusrot.numeric import golden

unit = st.fractions(0, 1, max_denominator=10 ** 6).filter(lambda x: x < 1)


def test_I_and_wandering_arc(model):
    a, b = model.wandering_arc
    assert model.I == (F(17, 18) * a, F(17, 18) * b)
    assert model.gap(0) == model.wandering_arc
    assert b - a == F(1, 50)


def test_plateaus(model):
    w = model.halfwidth
    assert model.phi.plateaus == [(1 - w, 1 + w)]
    assert model.p.plateaus == [(1 - w, 1 + w)]
    assert model.psi.is_homeomorphism() and model.psi.plateaus == []
    for x in (-w, -w / 3, F(0), w / 2, w):
        assert model.phi.apply(x) == model.tau
        assert cm.apply(model.p, x) == 0


def test_tau_is_psi_of_zero(model):
    assert cm.apply(model.psi, F(0)) == model.tau
    assert model.tau == model.psi.lift(F(0))


def test_phi_is_psi_after_p(model):
    for b in model.phi.breakpoints:
        assert model.phi.lift(b) == model.psi.lift(model.p.lift(b))
    rng = random.Random(7)
    for _ in range(1000):
        x = F(rng.randrange(10 ** 9), 10 ** 9)
        assert model.phi.lift(x) == model.psi.lift(model.p.lift(x))


def test_gap_orbit(model):
    for n in range(-model.K, model.K):
        if n == 0:
            continue
        a, b = model.gap(n)
        c, d = model.gap(n + 1)
        ia, ib = model.phi.apply(a), model.phi.lift(b) - model.phi.lift(a)
        assert ia == c % 1 and ib == d - c
    # phi(gap_0) is gap_1 as an arc
    a, b = model.wandering_arc
    c, d = model.gap(1)
    assert model.phi.apply(a) == c and model.phi.lift(b) - model.phi.lift(a) == d - c


def test_gaps_disjoint_and_mass(model):
    arcs = sorted((model.gap_left[j], model.gap_left[j] + model.gap_len[j]) for j in range(model.q))
    for (a, b), (c, d) in zip(arcs, arcs[1:]):
        assert b < c
    assert sum(model.gap_len) == model.gap_mass
    for n in range(-model.K, model.K + 1):
        a, b = model.gap(n)
        assert b - a == F(4, 50) / (n * n + 4)


def test_apply_lift_degree_one(model):
    rng = random.Random(1)
    for _ in range(50):
        x = F(rng.randrange(-10 ** 6, 10 ** 6), 10 ** 5)
        assert cm.apply_lift(model.p, x + 1) == cm.apply_lift(model.p, x) + 1


def test_rotation_number_estimates(model):
    lo, hi = cm.rotation_number_estimate(plmap.rotation(F(1, 4)), F(0), 100)
    assert lo <= F(1, 4) <= hi
    lo, hi = cm.rotation_number_estimate(model.phi, F(1, 3), 10 ** 4)
    assert lo <= model.rho <= hi
    lo2, hi2 = cm.rotation_number_estimate(model.phi, F(1, 7), 10 ** 4)
    assert lo2 <= hi and lo <= hi2
    with pytest.raises(ValueError):
        cm.rotation_number_estimate(model.phi, F(0), 0)


def test_semiconjugacy_basics(model):
    assert cm.semiconj_h(model, F(0)) == 0
    a, b = model.wandering_arc
    for x in (a, a / 2, b / 3, b):
        assert cm.semiconj_h(model, x) == 0
    # the gap with label n is sent to n p/q
    for n in (-5, 1, 2, 17):
        a, b = model.gap(n)
        assert cm.semiconj_h(model, (a + b) / 2) == (n * model.rho) % 1


def test_semiconjugacy_window(model):
    # a tail gap (label beyond K) is rejected when a window is requested
    j = next(j for j, n in enumerate(model.gap_label) if abs(n) > model.K)
    x = model.gap_left[j] + model.gap_len[j] / 2
    with pytest.raises(WindowError):
        cm.semiconj_h(model, x, window=model.K)
    assert cm.semiconj_h(model, x) == (model.gap_label[j] * model.rho) % 1


@settings(max_examples=100, deadline=None)
@given(unit)
def test_semiconjugacy_identity(model, x):
    h = model.semiconj.h
    assert (h.lift(model.phi.lift(x)) - h.lift(x) - model.rho) == 0


@settings(max_examples=100, deadline=None)
@given(unit, unit)
def test_h_monotone(model, x, y):
    h = model.semiconj.h
    if x <= y:
        assert h.lift(x) <= h.lift(y)


def test_transport_bound(model):
    B = model.transport_bound
    assert 0 < B < F(1, 50)
    rng = random.Random(3)
    for _ in range(200):
        x = F(rng.randrange(10 ** 6), 10 ** 6)
        assert abs(model.semiconj.h.lift(x) - x) <= B
        assert abs(model.g_map.lift(x) - x) <= B
    # g = h o p^-1 off the collapsed point
    for x in (F(1, 3), F(2, 5), F(9, 10)):
        assert model.g_map.lift(model.p.lift(x)) == model.semiconj.h.lift(x)


def test_wandering(model):
    assert cm.wandering_check(model, 30)
    assert cm.wandering_check(model, 0)
    assert cm.wandering_check(model, model.K - 1)
    with pytest.raises(WindowError):
        cm.wandering_check(model, model.horizon_limit + 1)


def test_wandering_negative_control():
    # rigid rotation by 3/5 with an arc longer than 1/5 comes back at the denominator
    rot = plmap.rotation(F(3, 5))
    assert not cm.wandering_check(None, 5, f=rot, arc=(F(-1, 8), F(1, 8)))
    assert cm.wandering_check(None, 4, f=rot, arc=(F(-1, 12), F(1, 12)))


def test_construction_errors():
    g = golden(12)
    with pytest.raises(ConstructionError):
        cm.build_denjoy(g, gap_mass=F(1, 100))
    with pytest.raises(ConstructionError):
        cm.build_denjoy(g, K=200)
    with pytest.raises(ConstructionError):
        cm.build_denjoy(g, i_halfwidth_fraction=F(1))


def test_small_model_invariants(small_model):
    m = small_model
    assert m.q == 233 and m.horizon_limit == 232
    assert cm.wandering_check(m, m.K - 1)
    for b in m.phi.breakpoints:
        assert m.semiconj.h.lift(m.phi.lift(b)) == m.semiconj.h.lift(b) + m.rho


def test_to_json(small_model):
    d = small_model.to_json()
    assert d["rho"] == "144/233" and d["I_halfwidth"] == "17/1800"
    assert len(d["window_gaps"]) == 2 * small_model.K + 1
