"""Exact planar convex geometry for the sets Lambda and Omega.

Hulls are built with a monotone chain over ``Fraction`` coordinates, so the
near-collinear generators piling up along the anti-diagonal are handled without
any tolerance.  Collinear points are always dropped: a hull vertex is an
extremal point in the strict sense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import CertificationError
from .numeric import (IrrationalParam, PlanarRational, alpha, ceil_mul,
                      is_admissible, admissible_indices, rho_vec)

ORIGIN = PlanarRational(Fraction(0), Fraction(0))
SQRT_BITS = 48


@dataclass(frozen=True)
class HullPolygon:
    vertices: tuple[PlanarRational, ...]
    generator_tags: tuple[Optional[tuple[int, int]], ...] = field(default=())

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    def __len__(self):
        return len(self.vertices)

    def tag_of(self, v: PlanarRational):
        if not self.generator_tags:
            return None
        return self.generator_tags[self.vertices.index(v)]


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[PlanarRational], tags: Optional[dict] = None) -> HullPolygon:
    pts = sorted(set(PlanarRational(Fraction(p[0]), Fraction(p[1])) for p in points))
    if not pts:
        raise ValueError("convex hull of an empty point set")
    if len(pts) == 1:
        hull = pts
    else:
        lower: list = []
        for p in pts:
            while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
                lower.pop()
            lower.append(p)
        upper: list = []
        for p in reversed(pts):
            while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
                upper.pop()
            upper.append(p)
        hull = lower[:-1] + upper[:-1]
        if len(hull) == 2 and hull[0] == hull[1]:
            hull = hull[:1]
    gt = tuple(tags.get(v) for v in hull) if tags else ()
    return HullPolygon(tuple(hull), gt)


def _generators(param: IrrationalParam, N: int) -> dict:
    """Admissible rho_{m,n} with m, n <= N, keyed by point, tagged by the first (m, n)."""
    if N > param.max_safe_index - 1:
        raise CertificationError(f"truncation {N} beyond certified range")
    idx = admissible_indices(param, N)
    ceil = {k: ceil_mul(param, k) for k in idx}
    out: dict = {}
    for m in idx:
        for n in idx:
            s = m + n + 1
            p = PlanarRational(Fraction(ceil[m], s), Fraction(ceil[n], s))
            out.setdefault(p, (m, n))
    return out


def omega_set(param: IrrationalParam, N: int, closure: bool = False) -> HullPolygon:
    gens = _generators(param, N)
    if closure:
        r = param.rho
        gens.setdefault(PlanarRational(Fraction(0), r), None)
        gens.setdefault(PlanarRational(r, Fraction(0)), None)
    if not gens:
        raise ValueError(f"no admissible pair with indices <= {N}")
    return convex_hull(gens, gens)


def lambda_set(param: IrrationalParam, N: int, closure: bool = False) -> HullPolygon:
    gens = _generators(param, N)
    if closure:
        r = param.rho
        gens.setdefault(PlanarRational(Fraction(0), r), None)
        gens.setdefault(PlanarRational(r, Fraction(0)), None)
    gens.setdefault(ORIGIN, None)
    return convex_hull(gens, gens)


def gamma_slope(param: IrrationalParam, m: int, n: int) -> Fraction:
    """Slope of the line through rho_{m,n} and (0, rho), via the closed form."""
    if not is_admissible(param, m, n):
        raise ValueError(f"({m}, {n}) is not admissible")
    r = param.rho
    am, an = alpha(param, m).value, alpha(param, n).value
    return -1 + (am + an - r) / (m * r + am)


@dataclass(frozen=True)
class AccumulationReport:
    near_0rho: int
    near_rho0: int
    elsewhere: tuple[PlanarRational, ...]


def accumulation_report(param: IrrationalParam, N: int, radius) -> AccumulationReport:
    radius = Fraction(radius)
    r = param.rho
    if not 0 < radius < r / 2:
        raise ValueError("radius must lie in (0, rho/2)")
    r2 = radius * radius
    hull = lambda_set(param, N)
    a = b = 0
    rest = []
    for v in hull.vertices:
        if v == ORIGIN:
            continue
        if v.x * v.x + (v.y - r) ** 2 < r2:
            a += 1
        elif (v.x - r) ** 2 + v.y * v.y < r2:
            b += 1
        else:
            rest.append(v)
    return AccumulationReport(a, b, tuple(sorted(rest)))


# -- distances --------------------------------------------------------------

def sqrt_upper(s: Fraction, bits: int = SQRT_BITS) -> Fraction:
    """Exact sqrt when s is a rational square, else an upper bound within 2**-bits."""
    s = Fraction(s)
    if s < 0:
        raise ValueError("negative squared distance")
    n, d = s.numerator, s.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    scale = 1 << bits
    # ceil(sqrt(n/d) * scale) = ceil(sqrt(n * scale^2 * d) / d)
    t = math.isqrt(n * scale * scale * d)
    if t * t < n * scale * scale * d:
        t += 1
    return Fraction(-(-t // d), scale)


def _seg_dist2(p, a, b) -> Fraction:
    dx, dy = b[0] - a[0], b[1] - a[1]
    L = dx * dx + dy * dy
    if L == 0:
        t = Fraction(0)
    else:
        t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L
        t = min(max(t, Fraction(0)), Fraction(1))
    qx, qy = a[0] + t * dx - p[0], a[1] + t * dy - p[1]
    return qx * qx + qy * qy


def contains(poly: HullPolygon, p) -> bool:
    vs = poly.vertices
    if len(vs) == 1:
        return tuple(p) == tuple(vs[0])
    if len(vs) == 2:
        return _cross(vs[0], vs[1], p) == 0 and _seg_dist2(p, vs[0], vs[1]) == 0
    return all(_cross(vs[i], vs[(i + 1) % len(vs)], p) >= 0 for i in range(len(vs)))


def dist2_to_body(poly: HullPolygon, p) -> Fraction:
    p = (Fraction(p[0]), Fraction(p[1]))
    vs = poly.vertices
    if contains(poly, p):
        return Fraction(0)
    if len(vs) == 1:
        return (p[0] - vs[0][0]) ** 2 + (p[1] - vs[0][1]) ** 2
    edges = zip(vs, vs[1:] + vs[:1]) if len(vs) > 2 else [(vs[0], vs[1])]
    return min(_seg_dist2(p, a, b) for a, b in edges)


def body_contains(outer: HullPolygon, inner: HullPolygon) -> bool:
    return all(contains(outer, v) for v in inner.vertices)


def hausdorff_squared(a: HullPolygon, b: HullPolygon) -> Fraction:
    # for convex bodies the directed distance is attained at a vertex
    da = max(dist2_to_body(b, v) for v in a.vertices)
    db = max(dist2_to_body(a, v) for v in b.vertices)
    return max(da, db)


def hausdorff(a: HullPolygon, b: HullPolygon) -> Fraction:
    if a.degenerate != b.degenerate:
        raise ValueError("Hausdorff comparison of a degenerate with a nondegenerate hull")
    return sqrt_upper(hausdorff_squared(a, b))


# -- serialization ----------------------------------------------------------

def hull_rows(hull: HullPolygon) -> list[list]:
    rows = []
    tags = hull.generator_tags or (None,) * len(hull.vertices)
    for v, t in zip(hull.vertices, tags):
        m, n = t if t else ("", "")
        rows.append([m, n, v.x.numerator, v.x.denominator, v.y.numerator, v.y.denominator,
                     f"{float(v.x):.12f}", f"{float(v.y):.12f}"])
    return rows


HULL_CSV_HEADER = ["m", "n", "x_num", "x_den", "y_num", "y_den", "x", "y"]


def hull_svg(hull: HullPolygon, generators: Sequence[PlanarRational] = (),
             markers: Sequence[PlanarRational] = (), size: int = 600) -> str:
    """Schematic SVG on the unit square: filled hull, generator dots, marked points."""
    def sx(x):
        return f"{float(x) * size:.4f}"

    def sy(y):
        return f"{(1 - float(y)) * size:.4f}"

    pts = " ".join(f"{sx(v.x)},{sy(v.y)}" for v in hull.vertices)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect x="0" y="0" width="{size}" height="{size}" fill="white" stroke="black"/>']
    if len(hull.vertices) >= 3:
        out.append(f'<polygon class="hull" points="{pts}" fill="#9ecae1" stroke="#08519c" '
                   f'stroke-width="1"/>')
    else:
        out.append(f'<polyline class="hull" points="{pts}" fill="none" stroke="#08519c" '
                   f'stroke-width="2"/>')
    for g in generators:
        out.append(f'<circle class="generator" cx="{sx(g.x)}" cy="{sy(g.y)}" r="1.5" fill="#08306b"/>')
    for m in markers:
        out.append(f'<circle class="marker" cx="{sx(m.x)}" cy="{sy(m.y)}" r="4" fill="none" '
                   f'stroke="#cb181d" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
