"""The bouquet map F = F^(v) o F^(h) on the horizontal and vertical circles.

Points are ``(axis, coord)`` with ``coord`` in ``[0, 1)``; lifted points carry the
integer lattice cell ``(i, j)`` so the lifted position is ``(i + coord, j)`` on a
horizontal line or ``(i, j + coord)`` on a vertical one.  The common point of the
two circles is always stored on the horizontal axis.

Lift normalization for F^(h) (F^(v) is the mirror image):

* horizontal point ``(i + c, j)``     ->  ``(i + psi~(c), j)``, ``psi~(0) = tau``;
* vertical point ``(i, j + u)``, ``u`` the signed coordinate in ``[-1/2, 1/2)``:
  ``u`` in ``I``  ->  ``(i + eta~(u), j)``, ``eta~(u) = tau * (1 - (u/w)^2)``;
  otherwise     ->  ``(i, j + p~(u))`` with ``p~`` the odd collapse fixing ``+-1/2``.

All of this is generic in the coordinate type, so the same code runs exactly on
``Fraction``/``Surd`` and fast on ``float``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .circlemap import DenjoyModel
from .errors import ConsistencyError, WindowError
from .numeric import PlanarRational, ceil_mul, is_admissible, rho_vec
from . import surd

H, V = "h", "v"
HALF = Fraction(1, 2)


def hat(sigma: str) -> str:
    return V if sigma == H else H


@dataclass(frozen=True)
class SkeletonPoint:
    axis: str
    coord: object

    def __post_init__(self):
        if self.axis not in (H, V):
            raise ValueError(f"axis must be 'h' or 'v', got {self.axis!r}")
        if self.coord == 0 and self.axis == V:
            object.__setattr__(self, "axis", H)


@dataclass(frozen=True)
class LiftedSkeletonPoint:
    base: SkeletonPoint
    translate: tuple[int, int] = (0, 0)

    @property
    def position(self) -> tuple:
        i, j = self.translate
        if self.base.axis == H:
            return (i + self.base.coord, j)
        return (i, j + self.base.coord)

    def shifted(self, di: int, dj: int) -> "LiftedSkeletonPoint":
        return LiftedSkeletonPoint(self.base, (self.translate[0] + di, self.translate[1] + dj))

    @staticmethod
    def at(axis: str, along, other: int = 0) -> "LiftedSkeletonPoint":
        """Lifted point on an axis line; ``along`` is the lifted coordinate along it."""
        axis, c, i, j = _normalize(axis, along, other)
        return LiftedSkeletonPoint(SkeletonPoint(axis, c), (i, j))


def _normalize(axis, along, other):
    k = math.floor(along)
    c = along - k
    if axis == H:
        i, j = k, other
    else:
        i, j = other, k
    if c == 0:
        axis = H
    return axis, c, i, j


def signed(c):
    """Signed representative in [-1/2, 1/2) of a circle coordinate in [0, 1)."""
    return c if c < HALF else c - 1


def in_I(model: DenjoyModel, u) -> bool:
    w = model.floats["w"] if isinstance(u, float) else model.halfwidth
    return -w <= u <= w


def _half(model: DenjoyModel, sigma, axis, c, i, j):
    """One application of F^(sigma) to a lifted point; returns (axis, c, i, j, folded)."""
    if axis == sigma or c == 0:
        if sigma == H:
            a, cc, ii, jj = _normalize(H, i + model.psi.lift(c), j)
        else:
            a, cc, ii, jj = _normalize(V, j + model.psi.lift(c), i)
        return a, cc, ii, jj, False
    # point on the other circle
    if c < HALF:
        u, base_shift = c, 0
    else:
        u, base_shift = c - 1, 1
    if sigma == H:
        base = j + base_shift           # point is on a vertical line: (i, j + c)
        if in_I(model, u):
            a, cc, ii, jj = _normalize(H, i + model.fold(u), base)
            return a, cc, ii, jj, True
        a, cc, ii, jj = _normalize(V, base + model.p.lift(u), i)
        return a, cc, ii, jj, False
    base = i + base_shift               # point is on a horizontal line: (i + c, j)
    if in_I(model, u):
        a, cc, ii, jj = _normalize(V, j + model.fold(u), base)
        return a, cc, ii, jj, True
    a, cc, ii, jj = _normalize(H, base + model.p.lift(u), j)
    return a, cc, ii, jj, False


def _lift_tuple(lpt: LiftedSkeletonPoint):
    return (lpt.base.axis, lpt.base.coord, lpt.translate[0], lpt.translate[1])


def _from_tuple(t) -> LiftedSkeletonPoint:
    return LiftedSkeletonPoint(SkeletonPoint(t[0], t[1]), (t[2], t[3]))


def lifted_sigma(model: DenjoyModel, sigma: str, lpt: LiftedSkeletonPoint) -> LiftedSkeletonPoint:
    return _from_tuple(_half(model, sigma, *_lift_tuple(lpt))[:4])


def lifted_step(model: DenjoyModel, lpt: LiftedSkeletonPoint) -> LiftedSkeletonPoint:
    s = _half(model, H, *_lift_tuple(lpt))
    return _from_tuple(_half(model, V, *s[:4])[:4])


def f_sigma(model: DenjoyModel, sigma: str, pt: SkeletonPoint) -> SkeletonPoint:
    return lifted_sigma(model, sigma, LiftedSkeletonPoint(pt)).base


def f_apply(model: DenjoyModel, pt: SkeletonPoint) -> SkeletonPoint:
    return lifted_step(model, LiftedSkeletonPoint(pt)).base


def iterate(model: DenjoyModel, lpt: LiftedSkeletonPoint, steps: int) -> LiftedSkeletonPoint:
    s = _lift_tuple(lpt)
    for _ in range(steps):
        s = _half(model, H, *s)[:4]
        s = _half(model, V, *s)[:4]
    return _from_tuple(s)


def displacement(a: LiftedSkeletonPoint, b: LiftedSkeletonPoint) -> tuple:
    pa, pb = a.position, b.position
    return (pb[0] - pa[0], pb[1] - pa[1])


# -- transport by the semiconjugacy ----------------------------------------

def h_transport(model: DenjoyModel, pt: SkeletonPoint) -> SkeletonPoint:
    """H(x^(sigma)) = h(x)^(sigma)."""
    return SkeletonPoint(pt.axis, model.semiconj.h.apply(pt.coord))


def h_transport_lift(model: DenjoyModel, lpt: LiftedSkeletonPoint) -> tuple:
    """Position of H~(x~), the lift fixing the origin."""
    i, j = lpt.translate
    hv = model.semiconj.h.lift(lpt.base.coord)
    if lpt.base.axis == H:
        return (i + hv, j)
    return (i, j + hv)


# -- orbit classification --------------------------------------------------

FREE_H, FREE_V, INTERACTING = "FreeH", "FreeV", "Interacting"


@dataclass(frozen=True)
class OrbitClassification:
    kind: str
    segments: tuple[tuple[int, int], ...]
    horizon_used: int
    fold_events: tuple[tuple[str, Fraction], ...] = field(default=(), repr=False)


def _check_horizon(model: DenjoyModel, horizon: int) -> None:
    if horizon < 0 or horizon > model.horizon_limit:
        raise WindowError(f"horizon {horizon} outside the certified window 0..{model.horizon_limit}")


def _rounder(bits: Optional[int]):
    if bits is None:
        return lambda r: r
    scale = 1 << bits

    def rnd(r):
        c = r[1]
        if isinstance(c, Fraction):
            c = Fraction(round(c * scale), scale)
            if c == 1:
                return _normalize(r[0], c + (r[2] if r[0] == H else r[3]), r[3] if r[0] == H else r[2]) + r[4:]
        return (r[0], c) + tuple(r[2:])
    return rnd


def orbit_with_events(model: DenjoyModel, lpt: LiftedSkeletonPoint, horizon: int,
                      bits: Optional[int] = None):
    """Iterate ``horizon`` full steps; returns (final point, fold events).

    A v-fold at integer time t means x_t in I^(v) was folded by F^(h); an h-fold at
    time t + 1/2 means x_{t+1/2} in I^(h) was folded by F^(v).  With ``bits`` set,
    Fraction coordinates are rounded to the 2**-bits grid after every half step.
    """
    rnd = _rounder(bits)
    s = _lift_tuple(lpt)
    events = []
    for t in range(horizon):
        r = rnd(_half(model, H, *s))
        if r[4]:
            events.append((V, Fraction(t)))
        r2 = rnd(_half(model, V, *r[:4]))
        if r2[4]:
            events.append((H, Fraction(2 * t + 1, 2)))
        s = r2[:4]
    return _from_tuple(s), events


def segments_from_events(events) -> list[tuple[int, int]]:
    for (a, _), (b, _) in zip(events, events[1:]):
        if a == b:
            raise ConsistencyError("returns to I^(h) and I^(v) do not alternate")
    segs = []
    vs = [k for k, e in enumerate(events) if e[0] == V]
    for k0, k1 in zip(vs, vs[1:]):
        t0, th, t1 = events[k0][1], events[k0 + 1][1], events[k1][1]
        m = int(th - t0 - HALF)
        n = int(t1 - t0) - m - 1
        segs.append((m, n))
    return segs


def classify_orbit(model: DenjoyModel, pt, horizon: int, bits: Optional[int] = None) -> OrbitClassification:
    _check_horizon(model, horizon)
    lpt = pt if isinstance(pt, LiftedSkeletonPoint) else LiftedSkeletonPoint(pt)
    final, events = orbit_with_events(model, lpt, horizon, bits)
    segs = segments_from_events(events)
    late = [e for e in events if e[1] >= Fraction(horizon, 2)]
    if late:
        kind = INTERACTING
    else:
        kind = FREE_H if final.base.axis == H else FREE_V
    return OrbitClassification(kind, tuple(segs), horizon, tuple(events))


# -- Markov arcs -----------------------------------------------------------

@dataclass(frozen=True)
class MarkovArc:
    arc: tuple            # (lo, hi) signed coordinates in I, exact (Fraction or Surd)
    label: tuple[int, int, int]

    def float_arc(self) -> tuple[float, float]:
        return float(self.arc[0]), float(self.arc[1])


def _phi_inverse_chain(model: DenjoyModel, lo, hi, k: int):
    for _ in range(k):
        lo, hi = model.phi.inverse_lift(lo), model.phi.inverse_lift(hi)
    s = math.floor(lo)
    return lo - s, hi - s


def _fold_preimages(model: DenjoyModel, lo, hi):
    """Both arcs of I folded by eta_tau onto [lo, hi] with 0 < lo < hi < tau."""
    w, tau = model.halfwidth, model.tau
    r_small, r_big = 1 - hi / tau, 1 - lo / tau
    a, b = w * surd.sqrt(r_small), w * surd.sqrt(r_big)
    return [(-b, -a), (a, b)]


def _preimage_in_window(model: DenjoyModel, k: int):
    """phi^{-k}(I) normalized into [0, 1); None if it falls beyond tau (inadmissible)."""
    lo, hi = _phi_inverse_chain(model, -model.halfwidth, model.halfwidth, k)
    if hi < model.tau:
        return lo, hi
    if lo > model.tau:
        return None
    raise ConsistencyError(f"phi^-{k}(I) straddles tau")


def _check_window(model: DenjoyModel, m: int, n: int) -> None:
    if not (1 <= m <= model.K and 1 <= n <= model.K):
        raise WindowError(f"({m}, {n}) outside gap window 1..{model.K}")


def _mp_key(x):
    with mpmath.workdps(60):
        return surd.to_mpf(x)


def markov_arcs(model: DenjoyModel, m: int, n: int, verify: bool = True) -> list[MarkovArc]:
    _check_window(model, m, n)
    if _preimage_in_window(model, m) is None:
        return []
    An = _preimage_in_window(model, n)
    if An is None:
        return []
    Ls = _fold_preimages(model, *An)
    raw = []
    for L in Ls:
        B = _phi_inverse_chain(model, L[0], L[1], m)
        if not (0 < B[0] and B[1] < model.tau and _mp_key(B[0]) < _mp_key(B[1])):
            raise ConsistencyError(f"phi^-{m}(L) not inside (0, tau)")
        raw.extend(_fold_preimages(model, *B))
    raw.sort(key=lambda a: _mp_key(a[0]))
    with mpmath.workdps(60):
        ends = [(surd.to_mpf(a), surd.to_mpf(b)) for a, b in raw]
        for (a0, a1), (b0, b1) in zip(ends, ends[1:]):
            if not a1 < b0 - mpmath.mpf(10) ** -40:
                raise ConsistencyError(f"Markov arcs for ({m}, {n}) are not disjoint")
    arcs = [MarkovArc(a, (m, n, k + 1)) for k, a in enumerate(raw)]
    if verify:
        for arc in arcs:
            verify_branch(model, arc)
    return arcs


def _start(model: DenjoyModel, u) -> LiftedSkeletonPoint:
    return LiftedSkeletonPoint.at(V, u)


def branch_image(model: DenjoyModel, m: int, n: int, u):
    """Run F^{m+n+1} from u^(v) (signed u in I); returns (final lifted point, events)."""
    return orbit_with_events(model, _start(model, u), m + n + 1)


def verify_branch(model: DenjoyModel, arc: MarkovArc) -> None:
    """Exact check that both endpoints follow the (m, n) itinerary and land on opposite ends of I."""
    m, n, _ = arc.label
    w = model.halfwidth
    images = []
    for e in arc.arc:
        final, events = branch_image(model, m, n, e)
        expect = [(V, Fraction(0)), (H, Fraction(2 * m + 1, 2)), (V, Fraction(m + n + 1))]
        # the terminal fold happens on the next step; check position instead
        if [ev for ev in events] != expect[:2]:
            raise ConsistencyError(f"itinerary of arc endpoint for ({m}, {n}) is {events}")
        if final.base.axis != V:
            raise ConsistencyError("branch does not return to the vertical circle")
        u = signed(final.base.coord)
        if not (u == w or u == -w):
            raise ConsistencyError(f"endpoint image {float(u)} is not an endpoint of I")
        i, j = final.translate
        jj = j + (1 if final.base.coord >= HALF else 0)
        images.append((u, i, jj))
    if images[0][0] == images[1][0]:
        raise ConsistencyError("branch endpoints map to the same end of I")


def _branch_residual(model: DenjoyModel, m: int, n: int, u):
    final, _ = branch_image(model, m, n, u)
    return signed(final.base.coord) - u


def fixed_point_in_K(model: DenjoyModel, m: int, n: int, tol: float = 1e-12,
                     arcs: Optional[list] = None) -> SkeletonPoint:
    """Bisection on the first branch arc with exact dyadic evaluation; coord is a Fraction."""
    if not is_admissible(model.param, m, n):
        raise ValueError(f"({m}, {n}) is not admissible")
    if tol <= 0:
        raise ValueError("tol must be positive")
    arcs = arcs if arcs is not None else markov_arcs(model, m, n)
    lo, hi = (Fraction(v) for v in arcs[0].float_arc())
    r_lo, r_hi = _branch_residual(model, m, n, lo), _branch_residual(model, m, n, hi)
    if (r_lo > 0) == (r_hi > 0):
        raise ConsistencyError(f"no sign change of the return displacement on K_({m},{n})")
    goal = Fraction(tol) / 1000
    x, r = (lo, r_lo) if abs(r_lo) < abs(r_hi) else (hi, r_hi)
    for _ in range(400):
        if abs(r) < goal:
            break
        mid = (lo + hi) / 2
        r = _branch_residual(model, m, n, mid)
        x = mid
        if (r > 0) == (r_lo > 0):
            lo = mid
        else:
            hi = mid
    if abs(r) >= tol:
        raise ConsistencyError(f"fixed point residual {float(abs(r)):.3e} exceeds {tol}")
    return SkeletonPoint(V, x if x >= 0 else x + 1)


def rotation_vector_exact(model: DenjoyModel, m: int, n: int, tol: float = 1e-9) -> PlanarRational:
    """rho_{m,n}, cross-checked by the periodic orbit and by exact H-transport."""
    target = rho_vec(model.param, m, n)
    arcs = markov_arcs(model, m, n)
    if not arcs:
        raise ValueError(f"({m}, {n}) is not admissible")
    period = m + n + 1
    # (a) lifted orbit of the fixed point
    x = fixed_point_in_K(model, m, n, arcs=arcs)
    start = LiftedSkeletonPoint(x)
    end = iterate(model, start, period)
    dx, dy = displacement(start, end)
    cm, cn = ceil_mul(model.param, m), ceil_mul(model.param, n)
    if abs(dx - cm) >= tol or abs(dy - cn) >= tol:
        raise ConsistencyError(f"orbit displacement {(dx, dy)} != {(cm, cn)}")
    # (b) H-transport along the exact orbit of an arc endpoint
    e0 = LiftedSkeletonPoint.at(V, arcs[0].arc[0])
    e1 = iterate(model, e0, period)
    h0, h1 = h_transport_lift(model, e0), h_transport_lift(model, e1)
    hd = (h1[0] - h0[0], h1[1] - h0[1])
    if hd != (cm, cn):
        raise ConsistencyError(f"H-transported displacement {hd} != {(cm, cn)}")
    return PlanarRational(Fraction(hd[0], period), Fraction(hd[1], period))


# -- serialization ---------------------------------------------------------

def coord_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, float):
        return repr(c)
    return mpmath.nstr(surd.to_mpf(c), 30)


def orbit_records(model: DenjoyModel, lpt: LiftedSkeletonPoint, steps: int,
                  bits: Optional[int] = None) -> list[dict]:
    """Half-step records of an orbit; ``step2`` is twice the (half-integer) time."""
    rnd = _rounder(bits)
    s = _lift_tuple(lpt)
    out = []

    def rec(k, t):
        return {"step2": k, "axis": t[0], "coord": coord_str(t[1]), "translate": [t[2], t[3]]}

    out.append(rec(0, s))
    for t in range(steps):
        s = rnd(_half(model, H, *s))[:4]
        out.append(rec(2 * t + 1, s))
        s = rnd(_half(model, V, *s))[:4]
        out.append(rec(2 * t + 2, s))
    return out


MARKOV_CSV_HEADER = ["m", "n", "branch", "lo", "hi", "lo_30", "hi_30"]


def markov_rows(arcs: list[MarkovArc]) -> list[list]:
    rows = []
    for a in arcs:
        m, n, b = a.label
        lo, hi = a.float_arc()
        rows.append([m, n, b, f"{lo:.17e}", f"{hi:.17e}", coord_str(a.arc[0]), coord_str(a.arc[1])])
    return rows
