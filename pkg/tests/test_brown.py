from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from torusrot import brown as br
from torusrot import skeleton as sk
from torusrot.errors import ConsistencyError, ThinningError
from torusrot.plmap import identity, rotation, squeeze, uniform_distance

GRID8 = br.CompactModel(grid_bits=8)


@pytest.fixture(scope="module")
def fam(model):
    return br.build_collapse_family(model, 200)


def test_distances(model, fam):
    w = model.halfwidth
    for n in range(1, 11):
        assert fam.distance(n) == w / n
        assert uniform_distance(fam.member(n), fam.f) == w / n
    assert fam.member(1).lift(F(1, 7)) == F(1, 7)
    assert all(fam.member(n).is_homeomorphism() for n in range(1, 201))


def test_distances_nonincreasing(fam):
    ds = [fam.distance(n) for n in range(1, 201)]
    assert all(a >= b for a, b in zip(ds, ds[1:]))


def test_compose_order(model):
    w = model.halfwidth
    seq = br.ApproxSequence(model.p, [squeeze(w, w / 2), squeeze(w, w / 3)])
    # f_2(w/2) = w/6, then f_1(w/6) = w/12
    assert br.compose_chain(seq, "forward", 2).lift(w / 2) == w / 12
    assert uniform_distance(br.compose_chain(seq, "forward", 0), identity()) == 0
    with pytest.raises(IndexError):
        br.compose_chain(seq, "forward", 3)
    with pytest.raises(ValueError):
        br.compose_chain(seq, "sideways", 1)


def test_fhat_expansion(model):
    w = model.halfwidth
    seq = br.ApproxSequence(model.p, [squeeze(w, w / 2), squeeze(w, w / 3), squeeze(w, w / 5)])
    f1, f2 = seq.member(1), seq.member(2)
    fh = br.fhat(seq, 1)
    for x in (F(0), w / 4, F(1, 3), F(5, 7), 1 - w / 3):
        assert fh.lift(x) == f1.lift(f2.lift(f1.inverse().lift(x)))


def test_inverse_pairing(fam):
    for n in (1, 5, 12):
        fwd, inv = fam.forward(n), fam.inverse(n)
        for k in range(100):
            x = F(k, 100)
            assert inv.lift(fwd.lift(x)) == x


def test_non_homeomorphism_rejected(model):
    with pytest.raises(ValueError):
        br.ApproxSequence(model.p, [model.p])
    with pytest.raises(ValueError):
        br.ApproxSequence(model.p, [])


def test_identities(fam):
    rep = br.identity_check(fam, 10, GRID8)
    assert rep.ok and rep.grid_points == 256


def test_identities_subsequence(fam):
    sub = fam.subsequence([1, 3, 7, 20, 50, 120])
    assert br.identity_check(sub, 5, GRID8).ok


def test_ledger_identity(fam):
    led = br.build_ledger(fam, 6, GRID8)
    for e in led.entries:
        assert e.epsilon == 3 * (e.alpha + e.beta + e.gamma)
        assert e.grid_alpha <= e.alpha
    assert led.prefix_sums[-1] == sum(e.epsilon for e in led.entries)
    assert all(len(r) == len(br.LEDGER_CSV_HEADER) for r in led.rows())


def test_eps3_finite_positive(fam):
    e = br.moduli(fam, 3)
    assert 0 < e.epsilon < 1


def test_moduli_range(fam):
    with pytest.raises(IndexError):
        br.moduli(fam, len(fam))
    with pytest.raises(IndexError):
        br.moduli(fam, 0)


def test_rigid_rotation_family():
    r = rotation(F(2, 7))
    seq = br.ApproxSequence(r, [r] * 6)
    led = br.build_ledger(seq, 5)
    assert all(e.epsilon == 0 for e in led.entries)
    assert all(e.alpha_branch == "empty" for e in led.entries)


@pytest.fixture(scope="module")
def thinned(fam):
    return br.thin_subsequence(fam, br.geometric_target, stages=8)


def test_thinning(fam, thinned):
    assert len(thinned) == 9
    assert all(a < b for a, b in zip(thinned, thinned[1:]))
    sub = fam.subsequence(thinned)
    led = br.build_ledger(sub, 8)
    for k, e in enumerate(led.entries, start=1):
        assert e.epsilon <= br.geometric_target(k)
    assert led.prefix_sums[-1] < 2
    assert sub.labels == tuple(thinned)


def test_thinning_zero_target(fam):
    with pytest.raises(ThinningError) as ei:
        br.thin_subsequence(fam, lambda k: F(0), stages=3)
    assert ei.value.stage == 1


def test_thinning_exhausted(fam):
    with pytest.raises(ThinningError):
        br.thin_subsequence(fam, br.geometric_target, stages=12)


def test_subsequence_checks(fam):
    with pytest.raises(ValueError):
        fam.subsequence([3, 2])


def test_cauchy_thinned(fam, thinned):
    rep = br.cauchy_verify(fam, thinned, GRID8)
    assert rep.ok and rep.stages == 8
    for name in ("fhat", "ghat", "h"):
        assert len(rep.exact_sup[name]) == 8
        assert rep.max_usage[name] <= 1


def test_cauchy_single_index(fam):
    rep = br.cauchy_verify(fam, [5], GRID8)
    assert rep.ok and rep.stages == 0


def test_cauchy_negative_control(fam):
    sub = fam.subsequence(list(range(1, 9)))
    led = br.build_ledger(sub, 7)
    # eps/2 still bounds every step: the estimates are far from tight
    assert br.cauchy_verify(sub, grid=GRID8, ledger=led.halved()).ok
    rep = br.cauchy_verify(sub, grid=GRID8, ledger=led.scaled(F(1, 64)), strict=False)
    assert rep.violations
    with pytest.raises(ConsistencyError):
        br.cauchy_verify(sub, grid=GRID8, ledger=led.scaled(F(1, 64)))


def test_telescoping(fam, thinned):
    sub = fam.subsequence(thinned)
    led = br.build_ledger(sub, 8)
    hats = [br.fhat(sub, n) for n in range(0, 9)]
    for a in range(0, 8):
        for b in range(a + 1, 9):
            bound = sum(led.epsilon(k) for k in range(a + 1, b + 1))
            assert uniform_distance(hats[a], hats[b]) <= bound


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=2, max_size=5, unique=True))
def test_identities_any_subsequence(fam, idx):
    sub = fam.subsequence(sorted(idx))
    grid = br.CompactModel(grid_bits=5)
    assert br.identity_check(sub, len(idx) - 1, grid).ok


def test_fact1_identity(model):
    starts = [sk.SkeletonPoint("h", F(1, 3)), sk.SkeletonPoint("v", F(2, 9))]
    rep = br.fact1_rotation_check(model, "identity", 300, starts)
    assert rep.max_difference == 0 and rep.ok


def test_fact1_h(model):
    starts = [sk.SkeletonPoint("h", F(k, 13)) for k in range(1, 6)]
    rep = br.fact1_rotation_check(model, "H", 300, starts, markov=[(1, 1), (1, 3)])
    assert rep.ok
    assert rep.bound == 2 * model.semiconj.h.max_displacement() / 300
    assert rep.periodic_exact == {(1, 1): True, (1, 3): True}
    with pytest.raises(ValueError):
        br.fact1_rotation_check(model, "R", 10)
