"""Degree-one piecewise-linear circle maps with exact breakpoints.

A map is stored by its breakpoints ``b_0 < ... < b_{N-1}`` in ``[0, 1)`` and the
values of a chosen lift at them.  Between breakpoints (and across the wrap
from ``b_{N-1}`` to ``b_0 + 1``) the lift is affine, so ``lift(x + 1) = lift(x) + 1``
holds by construction.

Evaluation is generic in the number type: ``Fraction`` and ``Surd`` inputs are
evaluated exactly, ``float`` inputs go through a float copy of the tables.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Sequence


def _floor(x):
    return math.floor(x)


class PiecewiseCircleMap:
    degree = 1

    def __init__(self, breakpoints: Sequence, values: Sequence, name: str = ""):
        bps = [Fraction(b) for b in breakpoints]
        vals = [Fraction(v) for v in values]
        if not bps or len(bps) != len(vals):
            raise ValueError("need matching, nonempty breakpoint and value lists")
        if bps[0] < 0 or bps[-1] >= 1:
            raise ValueError("breakpoints must lie in [0, 1)")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        ext_v = vals + [vals[0] + 1]
        if any(v2 < v1 for v1, v2 in zip(ext_v, ext_v[1:])):
            raise ValueError("lift must be nondecreasing")
        self.name = name
        self.breakpoints = tuple(bps)
        self.values = tuple(vals)
        ext_b = bps + [bps[0] + 1]
        self._slopes = tuple((ext_v[i + 1] - ext_v[i]) / (ext_b[i + 1] - ext_b[i])
                             for i in range(len(bps)))
        self._fb = [float(b) for b in bps]
        self._fv = [float(v) for v in vals]
        self._fs = [float(s) for s in self._slopes]
        self._ext_v = tuple(ext_v)
        self._fext_v = [float(v) for v in ext_v]

    # -- structure ---------------------------------------------------------

    def __len__(self):
        return len(self.breakpoints)

    def __repr__(self):
        return f"PiecewiseCircleMap({self.name or '?'}, {len(self)} pieces)"

    @property
    def slopes(self):
        return self._slopes

    @property
    def plateaus(self) -> list[tuple[Fraction, Fraction]]:
        """Arcs (start, end) of [0, 1) + Z on which the lift is constant."""
        n = len(self.breakpoints)
        out = []
        for i, s in enumerate(self._slopes):
            if s == 0:
                end = self.breakpoints[i + 1] if i + 1 < n else self.breakpoints[0] + 1
                out.append((self.breakpoints[i], end))
        return out

    def is_homeomorphism(self) -> bool:
        return all(s > 0 for s in self._slopes)

    def lipschitz(self) -> Fraction:
        return max(self._slopes)

    # -- evaluation --------------------------------------------------------

    def _locate(self, u):
        """Index i with b_i <= u < b_{i+1}; -1 means the wrap piece before b_0."""
        i = bisect_right(self._fb, float(u)) - 1
        bps = self.breakpoints
        n = len(bps)
        while i >= 0 and bps[i] > u:
            i -= 1
        while i + 1 < n and bps[i + 1] <= u:
            i += 1
        return i

    def lift(self, x):
        if isinstance(x, float):
            k = math.floor(x)
            u = x - k
            i = bisect_right(self._fb, u) - 1
            if i < 0:
                return k - 1 + self._fv[-1] + self._fs[-1] * (u + 1 - self._fb[-1])
            return k + self._fv[i] + self._fs[i] * (u - self._fb[i])
        if isinstance(x, int):
            x = Fraction(x)
        k = _floor(x)
        u = x - k
        i = self._locate(u)
        if i < 0:
            return k - 1 + self.values[-1] + self._slopes[-1] * (u + 1 - self.breakpoints[-1])
        return k + self.values[i] + self._slopes[i] * (u - self.breakpoints[i])

    __call__ = lift

    def apply(self, x):
        """Circle evaluation: x in [0, 1) (any real accepted), result in [0, 1)."""
        y = self.lift(x)
        return y - _floor(y)

    def inverse_lift(self, y):
        """Unique x with lift(x) = y; raises on a plateau value."""
        exact = not isinstance(y, float)
        v0 = self.values[0] if exact else self._fv[0]
        k = _floor(y - v0)
        yy = y - k
        vals = self._ext_v if exact else self._fext_v
        i = bisect_right(vals, yy) - 1 if not exact else self._locate_value(yy)
        i = min(i, len(self.breakpoints) - 1)
        s = self._slopes[i] if exact else self._fs[i]
        if s == 0:
            if yy == vals[i]:
                return k + (self.breakpoints[i] if exact else self._fb[i])
            raise ValueError("value lies on a plateau")
        b = self.breakpoints[i] if exact else self._fb[i]
        return k + b + (yy - vals[i]) / s

    def _locate_value(self, yy):
        vals = self._ext_v
        i = bisect_right(self._fext_v, float(yy)) - 1
        i = max(0, min(i, len(vals) - 2))
        while i > 0 and vals[i] > yy:
            i -= 1
        while i + 1 < len(vals) - 1 and vals[i + 1] <= yy:
            i += 1
        # step off a plateau onto the piece that actually carries yy
        while i + 1 < len(vals) - 1 and self._slopes[i] == 0 and vals[i + 1] == yy and yy != vals[i]:
            i += 1
        return i

    # -- algebra -----------------------------------------------------------

    def compose(self, inner: "PiecewiseCircleMap", name: str = "") -> "PiecewiseCircleMap":
        """self o inner."""
        cand = set(inner.breakpoints)
        lo = inner.values[0]
        for b in self.breakpoints:
            # all targets b + k within one period of the inner lift
            k = _floor(lo - b)
            for t in (b + k, b + k + 1):
                if lo <= t < lo + 1:
                    try:
                        x = inner.inverse_lift(t)
                    except ValueError:
                        continue
                    cand.add(x - _floor(x))
        bps = sorted(cand)
        vals = [self.lift(inner.lift(b)) for b in bps]
        return simplify(PiecewiseCircleMap(bps, vals, name))

    def inverse(self, name: str = "") -> "PiecewiseCircleMap":
        if not self.is_homeomorphism():
            raise ValueError(f"{self.name or 'map'} has a plateau; no inverse")
        pairs = []
        for b, v in zip(self.breakpoints, self.values):
            k = _floor(v)
            pairs.append((v - k, b - k))
        pairs.sort()
        return PiecewiseCircleMap([p[0] for p in pairs], [p[1] for p in pairs], name)

    def max_displacement(self) -> Fraction:
        """sup |lift(x) - x|, attained at a breakpoint."""
        return max(abs(v - b) for b, v in zip(self.breakpoints, self.values))


def simplify(f: PiecewiseCircleMap) -> PiecewiseCircleMap:
    """Drop breakpoints where the slope does not change (keeps at least one)."""
    n = len(f.breakpoints)
    if n <= 1:
        return f
    keep = [i for i in range(n) if f.slopes[i] != f.slopes[i - 1]]
    if not keep:
        keep = [0]
    if len(keep) == n:
        return f
    return PiecewiseCircleMap([f.breakpoints[i] for i in keep], [f.values[i] for i in keep], f.name)


def identity() -> PiecewiseCircleMap:
    return PiecewiseCircleMap([0], [0], "id")


def rotation(angle) -> PiecewiseCircleMap:
    return PiecewiseCircleMap([0], [Fraction(angle)], f"R[{angle}]")


def collapse(halfwidth) -> PiecewiseCircleMap:
    """Collapse the arc [-w, w] to 0, affine on the complement, fixing 1/2."""
    w = Fraction(halfwidth)
    return PiecewiseCircleMap([w, 1 - w], [0, 1], "p")


def squeeze(halfwidth, inner_halfwidth) -> PiecewiseCircleMap:
    """Homeomorphism sending [-w, w] affinely onto [-d, d] and its complement onto the rest."""
    w, d = Fraction(halfwidth), Fraction(inner_halfwidth)
    if not 0 < d <= w < Fraction(1, 2):
        raise ValueError("need 0 < d <= w < 1/2")
    return PiecewiseCircleMap([w, 1 - w], [d, 1 - d], f"S[{d}]")


def circle_dist(x, y):
    t = (x - y) % 1
    return min(t, 1 - t)


def uniform_distance(f: PiecewiseCircleMap, g: PiecewiseCircleMap) -> Fraction:
    """Exact sup over the circle of the arc distance between f(x) and g(x)."""
    pts = sorted(set(f.breakpoints) | set(g.breakpoints))
    diffs = [f.lift(x) - g.lift(x) for x in pts]
    best = max(circle_dist(d, 0) for d in diffs)
    # the PL difference may cross a half-integer between breakpoints
    ext = diffs + [diffs[0]]
    for d1, d2 in zip(ext, ext[1:]):
        lo, hi = min(d1, d2), max(d1, d2)
        if _floor(lo - Fraction(1, 2)) != _floor(hi - Fraction(1, 2)) or (hi - lo) >= 1:
            return Fraction(1, 2)
    return best


def modulus(f: PiecewiseCircleMap, delta) -> Fraction:
    """Exact sup{ d(f x, f y) : d(x, y) < delta } for a nondecreasing degree-one f."""
    delta = Fraction(delta)
    if delta <= 0:
        return Fraction(0)
    if delta >= Fraction(1, 2):
        delta = Fraction(1, 2)
    cand = set()
    for b in f.breakpoints:
        cand.add(b)
        c = b - delta
        cand.add(c - _floor(c))
    D = max(f.lift(x + delta) - f.lift(x) for x in cand)
    return min(D, Fraction(1, 2))


def arcs_intersect(a, b) -> bool:
    """Closed arcs given as lifted intervals (lo, hi) with hi - lo < 1."""
    a0, a1 = a
    b0, b1 = b
    k = _floor(a0 - b0)
    for s in (k - 1, k, k + 1, k + 2):
        if b0 + s <= a1 and a0 <= b1 + s:
            return True
    return False
