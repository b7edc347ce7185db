"""Rotation-vector clouds of the bouquet map and their comparison with Omega."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from scipy.stats import qmc

from . import skeleton as sk
from .circlemap import DenjoyModel
from .errors import ConsistencyError, WindowError
from .geometry import (HullPolygon, convex_hull, dist2_to_body, hausdorff, omega_set, sqrt_upper)
from .numeric import PlanarRational, admissible_indices

# precision used to follow periodic Markov orbits through one period
PERIODIC_TOL = Fraction(1, 10 ** 40)
PERIODIC_BITS = 320


@dataclass(frozen=True)
class RotationSample:
    start: sk.LiftedSkeletonPoint
    steps: int
    avg_displacement: PlanarRational
    classification: sk.OrbitClassification
    source: str = "halton"


@dataclass(frozen=True)
class SampleSpec:
    """Low-discrepancy starts, split evenly between the two circles, plus Markov fixed points."""
    count: int = 200
    seed: int = 0
    markov_upto: int = 0


@lru_cache(maxsize=8)
def free_certificate(model: DenjoyModel) -> bool:
    """Exact check of h o phi = h + p/q.

    Both sides are PL, so agreement at the breakpoints of h o phi and of h
    is agreement everywhere.  Free orbits then advance h by exactly p/q per step.
    """
    h = model.semiconj.h
    lhs = h.compose(model.phi)
    r = model.rho
    pts = set(lhs.breakpoints) | set(h.breakpoints)
    return all(lhs.lift(b) == h.lift(b) + r for b in pts)


def certified_cloud(model: DenjoyModel, N: int) -> list[PlanarRational]:
    if N < 1 or N > model.K:
        raise WindowError(f"truncation {N} outside the gap window 1..{model.K}")
    if not free_certificate(model):
        raise ConsistencyError("semiconjugacy identity h o phi = h + p/q fails")
    idx = admissible_indices(model.param, N)
    out = []
    for m in idx:
        for n in idx:
            v = sk.rotation_vector_exact(model, m, n)
            if v not in out:
                out.append(v)
    r = model.rho
    for v in (PlanarRational(Fraction(0), r), PlanarRational(r, Fraction(0))):
        if v not in out:
            out.append(v)
    return out


def halton_starts(count: int, seed: int = 0) -> list[sk.LiftedSkeletonPoint]:
    if count <= 0:
        return []
    pts = qmc.Halton(d=1, scramble=True, seed=seed).random(count)[:, 0]
    out = []
    for k, u in enumerate(pts):
        axis = sk.H if k % 2 == 0 else sk.V
        out.append(sk.LiftedSkeletonPoint(sk.SkeletonPoint(axis, float(u))))
    return out


def cantor_point(model: DenjoyModel, t, axis: str = sk.V):
    """Start on ``axis`` whose H-transport advances from t by p/q per step.

    F^(h) acts first, so on S^(v) the integer-time orbit follows phi and the start is
    h^-1(t); on S^(h) it follows p o psi and the start is (h o p^-1)^-1(t).  For t
    off (1/q)Z the orbit never meets I and is free.  Exact for Fraction t.
    """
    conj = model.semiconj.h if axis == sk.V else model.g_map
    return conj.inverse_lift(t) % 1


def _average(start: sk.LiftedSkeletonPoint, end: sk.LiftedSkeletonPoint, n: int) -> PlanarRational:
    dx, dy = sk.displacement(start, end)
    return PlanarRational(Fraction(dx) / n, Fraction(dy) / n)


def orbit_sample(model: DenjoyModel, start: sk.LiftedSkeletonPoint, horizon: int,
                 source: str = "given") -> RotationSample:
    cls, end = _classified_orbit(model, start, horizon)
    return RotationSample(start, horizon, _average(start, end, horizon), cls, source)


def _classified_orbit(model: DenjoyModel, start: sk.LiftedSkeletonPoint, horizon: int):
    if horizon > model.horizon_limit:
        raise WindowError(f"horizon {horizon} outside the certified window 0..{model.horizon_limit}")
    end, events = sk.orbit_with_events(model, start, horizon)
    segs = sk.segments_from_events(events)
    late = [e for e in events if e[1] >= Fraction(horizon, 2)]
    kind = sk.INTERACTING if late else (sk.FREE_H if end.base.axis == sk.H else sk.FREE_V)
    return sk.OrbitClassification(kind, tuple(segs), horizon, tuple(events)), end


def periodic_sample(model: DenjoyModel, m: int, n: int, horizon: int) -> RotationSample:
    """Sample started at the Markov fixed point of K_{m,n}.

    The fixed point is pinned to 1e-40 and followed through one period at 320 bits;
    since F~^P(x~) = x~ + D for the true periodic point, F~^horizon(x~) is obtained from
    the period displacement D and the first (horizon mod P) steps.
    """
    P = m + n + 1
    x = sk.fixed_point_in_K(model, m, n, tol=float(PERIODIC_TOL))
    start = sk.LiftedSkeletonPoint(x)
    one, _ = sk.orbit_with_events(model, start, P, bits=PERIODIC_BITS)
    D = sk.displacement(start, one)
    D = (round(D[0]), round(D[1]))
    k, r = divmod(horizon, P)
    part, _ = sk.orbit_with_events(model, start, r, bits=PERIODIC_BITS)
    dr = sk.displacement(start, part)
    avg = PlanarRational(Fraction(k * D[0] + dr[0]) / horizon, Fraction(k * D[1] + dr[1]) / horizon)
    segs = tuple([(m, n)] * max(k - 1, 0))
    cls = sk.OrbitClassification(sk.INTERACTING, segs, horizon)
    return RotationSample(start, horizon, avg, cls, f"markov({m},{n})")


Starts = Union[SampleSpec, Sequence]


def empirical_cloud(model: DenjoyModel, starts: Starts, horizon: int) -> list[RotationSample]:
    if horizon < 1 or horizon > model.horizon_limit:
        raise WindowError(f"horizon {horizon} outside the certified window 1..{model.horizon_limit}")
    out = []
    if isinstance(starts, SampleSpec):
        for s in halton_starts(starts.count, starts.seed):
            out.append(orbit_sample(model, s, horizon, "halton"))
        if starts.markov_upto:
            idx = admissible_indices(model.param, starts.markov_upto)
            for m in idx:
                for n in idx:
                    out.append(periodic_sample(model, m, n, horizon))
        return out
    for s in starts:
        if isinstance(s, sk.SkeletonPoint):
            s = sk.LiftedSkeletonPoint(s)
        out.append(orbit_sample(model, s, horizon))
    return out


@dataclass
class Comparison:
    hausdorff_bound: Fraction
    containment_violations: list = field(default_factory=list)
    slack: Fraction = Fraction(0)
    max_excess: Fraction = Fraction(0)

    def __getitem__(self, key):
        return getattr(self, key)

    def to_json(self) -> dict:
        return {
            "hausdorff_bound": str(self.hausdorff_bound),
            "hausdorff_bound_float": float(self.hausdorff_bound),
            "slack": str(self.slack),
            "slack_float": float(self.slack),
            "max_excess_float": float(self.max_excess),
            "containment_violations": [
                {"index": i, "x": float(p.x), "y": float(p.y), "distance": float(d)}
                for i, p, d in self.containment_violations],
        }


def compare_to_analytic(model: DenjoyModel, N: int, samples: Sequence[RotationSample], horizon: int,
                        certified: Optional[list] = None) -> Comparison:
    """Hausdorff distance of hull(samples + certified) to the closed Omega at truncation N,
    plus the samples lying farther than 2B/horizon from it."""
    if horizon < 1 or horizon > model.horizon_limit:
        raise WindowError(f"horizon {horizon} outside the certified window 1..{model.horizon_limit}")
    target = omega_set(model.param, N, closure=True)
    cert = certified if certified is not None else certified_cloud(model, N)
    pts = list(cert) + [s.avg_displacement for s in samples]
    hull = convex_hull(pts)
    slack = 2 * model.transport_bound / horizon
    viol = []
    worst = Fraction(0)
    for k, s in enumerate(samples):
        d = sqrt_upper(dist2_to_body(target, s.avg_displacement))
        worst = max(worst, d)
        if d > slack:
            viol.append((k, s.avg_displacement, d))
    return Comparison(hausdorff(hull, target), viol, slack, worst)


CLOUD_CSV_HEADER = ["x", "y", "classification", "source"]


def cloud_rows(samples: Sequence[RotationSample], certified: Sequence[PlanarRational] = ()) -> list[list]:
    rows = [[f"{float(p.x):.12f}", f"{float(p.y):.12f}", "Certified", "certified"] for p in certified]
    for s in samples:
        a = s.avg_displacement
        rows.append([f"{float(a.x):.12f}", f"{float(a.y):.12f}", s.classification.kind, s.source])
    return rows


# -- boundary-term diagnostic ------------------------------------------------

@dataclass(frozen=True)
class CoreDecomposition:
    """An orbit average with its boundary pieces removed.

    ``core`` is the average over complete return segments (first to last visit of
    I^(v)) or, for orbits with fewer than two visits, over the free tail after the
    last fold.  ``distance`` is measured to hull(Omega_N closure + visited segment
    vectors), which is inside the full Omega; ``slack`` is 2B over the core length.
    """
    core: PlanarRational
    steps: int
    distance: Fraction
    slack: Fraction
    segment_vectors: tuple

    @property
    def ok(self) -> bool:
        return self.distance <= self.slack


def _positions_at_events(model: DenjoyModel, start: sk.LiftedSkeletonPoint, horizon: int):
    """Fold events (axis, 2*time) and lifted positions keyed by 2*time."""
    s = sk._lift_tuple(start)
    pos = {0: sk._from_tuple(s).position}
    events = []
    for k in range(2 * horizon):
        r = sk._half(model, sk.H if k % 2 == 0 else sk.V, *s)
        if r[4]:
            events.append((sk.V if k % 2 == 0 else sk.H, k))
        s = r[:4]
        pos[k + 1] = sk._from_tuple(s).position
    return events, pos


def core_decomposition(model: DenjoyModel, sample: RotationSample, N: int) -> CoreDecomposition:
    from .numeric import rho_vec
    B = model.transport_bound
    base = omega_set(model.param, N, closure=True)
    if sample.source.startswith("markov("):
        m, n = (int(v) for v in sample.source[7:-1].split(","))
        v = rho_vec(model.param, m, n)
        return CoreDecomposition(v, m + n + 1, Fraction(0), 2 * B / (m + n + 1), (v,))
    horizon = sample.steps
    events, pos = _positions_at_events(model, sample.start, horizon)
    vs = [k for e, k in events if e == sk.V]
    if len(vs) >= 2:
        a, b = vs[0], vs[-1]
        segs = sk.segments_from_events([(e, Fraction(k, 2)) for e, k in events])
        vecs = tuple(sorted(set(rho_vec(model.param, m, n) for m, n in segs)))
        ref = convex_hull(list(base.vertices) + list(vecs))
    else:
        # free tail from the first integer time after the last fold
        a = events[-1][1] + 1 if events else 0
        a += a % 2
        b = 2 * horizon
        vecs = ()
        ref = base
    steps = (b - a) // 2
    if steps <= 0:
        return CoreDecomposition(sample.avg_displacement, 0, Fraction(0), Fraction(1), vecs)
    pa, pb = pos[a], pos[b]
    core = PlanarRational(Fraction(pb[0] - pa[0]) / steps, Fraction(pb[1] - pa[1]) / steps)
    d = sqrt_upper(dist2_to_body(ref, core))
    return CoreDecomposition(core, steps, d, 2 * B / steps, vecs)
