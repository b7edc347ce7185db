"""Piecewise-linear Denjoy-type circle maps and the plateau map built from them.

The rotation by ``p/q`` is blown up along the whole (finite) orbit of 0: the
orbit point ``n*p/q`` becomes a gap ``gap_n`` and the rotation becomes an affine
gap-to-gap map on gaps and a translation on the complementary arcs.  The result
is an exact PL homeomorphism with rotation number ``p/q`` whose gap ``gap_0``
wanders for ``q - 1`` steps.  Gaps with ``|n| <= K`` get lengths proportional to
``1/(n^2 + 4)``; the remaining gaps share the leftover mass equally.

On ``gap_0`` the map is then redefined so that the inner arc ``I`` (17/18 of
``gap_0`` by default) is sent to the single point ``tau`` while ``gap_0`` still
maps onto ``gap_1``.  That plateau map is ``phi``; ``p`` collapses ``I`` and
``psi = phi o p^-1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .errors import ConstructionError, WindowError
from .numeric import IrrationalParam
from .plmap import (PiecewiseCircleMap, arcs_intersect, collapse, rotation)

DEFAULT_GAPS = 40
DEFAULT_MASS = Fraction(1, 2)
DEFAULT_GAP0 = Fraction(1, 50)
DEFAULT_I_FRACTION = Fraction(17, 18)


def apply(f: PiecewiseCircleMap, x):
    return f.apply(x)


def apply_lift(f: PiecewiseCircleMap, x):
    return f.lift(x)


@dataclass(frozen=True)
class SemiconjData:
    """Cumulative gap table of h: gap_n -> n*p/q, Cantor arcs stretched by 1/(1-L)."""
    h: PiecewiseCircleMap
    total_gap_mass: Fraction


@dataclass(eq=False)
class DenjoyModel:
    param: IrrationalParam
    K: int
    gap_mass: Fraction
    halfwidth: Fraction          # of I
    gap0_halfwidth: Fraction     # of the wandering arc
    tau: Fraction
    phi: PiecewiseCircleMap
    p: PiecewiseCircleMap
    psi: PiecewiseCircleMap
    semiconj: SemiconjData
    gap_left: tuple              # by circle position j = n*p mod q; j = 0 is gap_0
    gap_len: tuple
    gap_label: tuple             # symmetric label n of the gap at position j

    @property
    def q(self) -> int:
        return self.param.convergent_den

    @property
    def rho(self) -> Fraction:
        return self.param.rho

    @property
    def horizon_limit(self) -> int:
        """Largest step count for which gap_0 provably wanders."""
        return self.q - 1

    @cached_property
    def _pos_of_label(self) -> dict:
        return {n: j for j, n in enumerate(self.gap_label)}

    def gap(self, n: int) -> tuple[Fraction, Fraction]:
        """gap_n as a lifted interval (left, right) with left in [-1/2, 1)."""
        j = self._pos_of_label.get(self._wrap_label(n))
        return self.gap_left[j], self.gap_left[j] + self.gap_len[j]

    def _wrap_label(self, n: int) -> int:
        q = self.q
        r = n % q
        return r if r <= q // 2 else r - q

    @property
    def wandering_arc(self) -> tuple[Fraction, Fraction]:
        return (-self.gap0_halfwidth, self.gap0_halfwidth)

    @property
    def I(self) -> tuple[Fraction, Fraction]:
        return (-self.halfwidth, self.halfwidth)

    @cached_property
    def floats(self) -> dict:
        return {"w": float(self.halfwidth), "tau": float(self.tau)}

    @cached_property
    def g_map(self) -> PiecewiseCircleMap:
        """h o p^-1, the semiconjugacy seen from the collapsed side."""
        h = self.semiconj.h
        w = self.halfwidth
        scale = 1 - 2 * w
        pts = []
        for b, v in zip(h.breakpoints, h.values):
            # all breakpoints of h sit outside I
            bl = b if b < Fraction(1, 2) else b - 1
            y = (abs(bl) - w) / scale * (1 if bl > 0 else -1)
            # h(b - 1) = v - 1 on the negative side, then shift the pair by +1
            pts.append((y if y >= 0 else y + 1, v))
        pts.sort()
        return PiecewiseCircleMap([a for a, _ in pts], [b for _, b in pts], "g")

    @cached_property
    def transport_bound(self) -> Fraction:
        """B = max(sup|h - id|, sup|h o p^-1 - id|), the finite-horizon slack constant."""
        return max(self.semiconj.h.max_displacement(), self.g_map.max_displacement())

    def fold(self, u):
        """Lift of eta_tau: I -> [0, tau], tau * (1 - (u/w)^2), u the signed coordinate."""
        if isinstance(u, float):
            t = u / self.floats["w"]
            return self.floats["tau"] * (1.0 - t * t)
        t = u / self.halfwidth
        return self.tau * (1 - t * t)

    def to_json(self) -> dict:
        def s(x):
            return f"{x.numerator}/{x.denominator}"

        def mp(f):
            return {"breakpoints": [s(b) for b in f.breakpoints], "values": [s(v) for v in f.values]}

        window = [(n, self.gap(n)) for n in range(-self.K, self.K + 1)]
        return {
            "rho": s(self.rho),
            "K": self.K,
            "gap_mass": s(self.gap_mass),
            "I_halfwidth": s(self.halfwidth),
            "wandering_halfwidth": s(self.gap0_halfwidth),
            "tau": s(self.tau),
            "window_gaps": [{"n": n, "left": s(a), "right": s(b)} for n, (a, b) in window],
            "phi": mp(self.phi),
            "p": mp(self.p),
            "psi": mp(self.psi),
        }


def build_denjoy(param: IrrationalParam, K: int = DEFAULT_GAPS, gap_mass=DEFAULT_MASS,
                 i_halfwidth_fraction=DEFAULT_I_FRACTION, gap0_length=DEFAULT_GAP0) -> DenjoyModel:
    L = Fraction(gap_mass)
    frac = Fraction(i_halfwidth_fraction)
    g0 = Fraction(gap0_length)
    p, q = param.convergent_num, param.convergent_den
    if not 0 < L < 1:
        raise ConstructionError("gap mass must lie in (0, 1)")
    if not 0 < frac < 1:
        raise ConstructionError("I must be a proper sub-arc of the wandering arc")
    if K < 1 or K > param.max_safe_index or 2 * K + 1 >= q:
        raise ConstructionError(f"gap budget K={K} too large for q={q}")
    if not 0 < g0 < Fraction(1, 4):
        raise ConstructionError("gap_0 length must lie in (0, 1/4)")

    pinv = pow(p, -1, q)
    labels = []
    for j in range(q):
        r = (j * pinv) % q
        labels.append(r if r <= q // 2 else r - q)
    c = 4 * g0
    window_mass = sum(c / (n * n + 4) for n in range(-K, K + 1))
    rest = L - window_mass
    if rest <= 0:
        raise ConstructionError(
            f"gap mass {L} does not cover the window gaps |n| <= {K} (need > {float(window_mass):.6f})")
    tail = rest / (q - 2 * K - 1)
    lengths = [c / (n * n + 4) if abs(n) <= K else tail for n in labels]

    half0 = g0 / 2
    lefts = [-half0]
    acc = Fraction(0)
    step = (1 - L) / q
    for j in range(1, q):
        lefts.append(half0 + step * j + acc)
        acc += lengths[j]
    rights = [a + l for a, l in zip(lefts, lengths)]
    if rights[-1] + step != 1 - half0:
        raise ConstructionError("gap table does not close up")

    w = frac * half0
    tau = (lefts[p] + rights[p]) / 2

    # phi: gap at j -> gap at j + p (carry 1 on wrap), complement translated
    bps, vals = [w, half0], [tau, rights[p]]
    for j in range(1, q):
        j2 = j + p
        carry = 0
        if j2 >= q:
            j2 -= q
            carry = 1
        if j2 == 0:
            il, ir = Fraction(1) - half0, Fraction(1) + half0
        else:
            il, ir = lefts[j2] + carry, rights[j2] + carry
        bps += [lefts[j], rights[j]]
        vals += [il, ir]
    bps += [1 - half0, 1 - w]
    vals += [lefts[p] + 1, tau + 1]
    phi = PiecewiseCircleMap(bps, vals, "phi")

    pmap = collapse(w)
    scale = 1 - 2 * w
    psi_b, psi_v = [Fraction(0)], [tau]
    for b, v in zip(bps[1:-1], vals[1:-1]):
        psi_b.append((b - w) / scale)
        psi_v.append(v)
    psi = PiecewiseCircleMap(psi_b, psi_v, "psi")

    hb, hv = [half0], [Fraction(0)]
    for j in range(1, q):
        hb += [lefts[j], rights[j]]
        hv += [Fraction(j, q), Fraction(j, q)]
    hb.append(1 - half0)
    hv.append(Fraction(1))
    h = PiecewiseCircleMap(hb, hv, "h")

    return DenjoyModel(param=param, K=K, gap_mass=L, halfwidth=w, gap0_halfwidth=half0, tau=tau,
                       phi=phi, p=pmap, psi=psi, semiconj=SemiconjData(h, L),
                       gap_left=tuple(lefts), gap_len=tuple(lengths), gap_label=tuple(labels))


def rotation_number_estimate(f: PiecewiseCircleMap, x0, n_iters: int) -> tuple:
    """Interval [(F^n(x) - x)/n - 1/n, (F^n(x) - x)/n + 1/n] bracketing rot(F)."""
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    x = x0 if isinstance(x0, float) else Fraction(x0)
    y = x
    for _ in range(n_iters):
        y = f.lift(y)
    avg = (y - x) / n_iters
    return (avg - Fraction(1, n_iters), avg + Fraction(1, n_iters)) if not isinstance(avg, float) \
        else (avg - 1 / n_iters, avg + 1 / n_iters)


def gap_position(model: DenjoyModel, x) -> Optional[int]:
    """Circle position j of the gap containing x, or None for a point of the Cantor arcs."""
    u = x - math.floor(x)
    if u <= model.gap0_halfwidth or u >= 1 - model.gap0_halfwidth:
        return 0
    h = model.semiconj.h
    i = h._locate(u) if not isinstance(u, float) else None
    if i is None:
        from bisect import bisect_right
        i = bisect_right(h._fb, u) - 1
    # breakpoints alternate left_j, right_j starting after gap_0's right end
    if i % 2 == 1:
        return (i + 1) // 2
    if 0 < i and u == h.breakpoints[i]:
        return i // 2
    return None


def semiconj_h(model: DenjoyModel, x, window: Optional[int] = None):
    """h(x) in [0, 1); exact n*p/q on gap_n.  With ``window`` set, gaps |n| > window raise."""
    if window is not None:
        j = gap_position(model, x)
        if j is not None and abs(model.gap_label[j]) > window:
            raise WindowError(f"point lies in gap_{model.gap_label[j]}, outside modeled window {window}")
    return model.semiconj.h.apply(x)


def wandering_check(model: Optional[DenjoyModel], horizon: int, f: Optional[PiecewiseCircleMap] = None,
                    arc=None) -> bool:
    """True iff f^k(arc) misses arc for 1 <= k <= horizon (exact arc arithmetic)."""
    if f is None:
        f = model.phi
    if arc is None:
        arc = model.wandering_arc
    if model is not None and horizon > model.horizon_limit:
        raise WindowError(f"horizon {horizon} beyond tracked orbit length {model.horizon_limit}")
    a, b = Fraction(arc[0]), Fraction(arc[1])
    lo, hi = a, b
    for _ in range(horizon):
        lo, hi = f.lift(lo), f.lift(hi)
        if arcs_intersect((lo, hi), (a, b)):
            return False
    return True
