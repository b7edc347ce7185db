"""Homeomorphic covers of a near-homeomorphism of the circle.

Given homeomorphisms ``f_n -> f`` uniformly, the stage maps

    fhat_n = f_{1,n+1} o f_{1,n}^-1,   ghat_n = f_{1,n} o f_{1,n+1}^-1,   h_n = f^n o f_{1,n}^-1

(with ``f_{1,n} = f_1 o ... o f_n``) satisfy ``ghat_n o fhat_n = id`` and
``h_{n+1} o fhat_n = f o h_n`` exactly, and converge once the moduli ledger
``eps_n = 3 (alpha_n + beta_n + gamma_n)`` is summable.  Everything here is a
symbolic PL map over ``Fraction``, so identities are checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import skeleton as sk
from .circlemap import DenjoyModel
from .errors import ConsistencyError, ThinningError
from .numeric import rho_vec
from .plmap import (PiecewiseCircleMap, circle_dist, identity, modulus, squeeze,
                    uniform_distance)


@dataclass(frozen=True)
class CompactModel:
    """The circle with arc-length metric, sampled on the dyadic grid k / 2**grid_bits."""
    grid_bits: int = 12
    space: str = "circle"

    @property
    def resolution(self) -> Fraction:
        return Fraction(1, 1 << self.grid_bits)

    def grid(self) -> list[Fraction]:
        n = 1 << self.grid_bits
        return [Fraction(k, n) for k in range(n)]

    @staticmethod
    def metric(x, y):
        return circle_dist(x, y)


class ApproxSequence:
    """A map f with homeomorphisms f_1, f_2, ... converging to it (1-based)."""

    def __init__(self, f: PiecewiseCircleMap, members: Sequence[PiecewiseCircleMap],
                 labels: Optional[Sequence[int]] = None):
        if not members:
            raise ValueError("need at least one approximating homeomorphism")
        for g in members:
            if not g.is_homeomorphism():
                raise ValueError(f"member {g!r} is not a homeomorphism")
        self.f = f
        self.members = tuple(members)
        self.labels = tuple(labels) if labels is not None else tuple(range(1, len(members) + 1))
        self._dist: dict = {}
        self._fwd = {0: identity()}
        self._inv = {0: identity()}
        self._fpow = {0: identity()}

    def __len__(self):
        return len(self.members)

    def member(self, n: int) -> PiecewiseCircleMap:
        if not 1 <= n <= len(self.members):
            raise IndexError(f"member {n} outside 1..{len(self.members)}")
        return self.members[n - 1]

    def distance(self, n: int) -> Fraction:
        """Exact d(f_n, f)."""
        if n not in self._dist:
            self._dist[n] = uniform_distance(self.member(n), self.f)
        return self._dist[n]

    def uniform_distance(self, n: int) -> Fraction:
        return self.distance(n)

    def subsequence(self, indices: Sequence[int]) -> "ApproxSequence":
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("indices must be strictly increasing")
        sub = ApproxSequence(self.f, [self.member(i) for i in indices],
                             [self.labels[i - 1] for i in indices])
        sub._dist = {k + 1: self._dist[i] for k, i in enumerate(indices) if i in self._dist}
        return sub

    def forward(self, n: int) -> PiecewiseCircleMap:
        """f_{1,n} = f_1 o ... o f_n."""
        if n not in self._fwd:
            self._fwd[n] = self.forward(n - 1).compose(self.member(n), f"f_1,{n}")
        return self._fwd[n]

    def inverse(self, n: int) -> PiecewiseCircleMap:
        """f_{n,1}^-1 = f_n^-1 o ... o f_1^-1."""
        if n not in self._inv:
            self._inv[n] = self.forward(n).inverse(f"f_{n},1^-1")
        return self._inv[n]

    def f_power(self, n: int) -> PiecewiseCircleMap:
        if n not in self._fpow:
            self._fpow[n] = self.f.compose(self.f_power(n - 1), f"f^{n}")
        return self._fpow[n]


def build_collapse_family(model: DenjoyModel, count: int = 200) -> ApproxSequence:
    """f = p (collapse of I); f_n squeezes I affinely onto the arc of half-width w/n."""
    w = model.halfwidth
    members = [squeeze(w, w / n) for n in range(1, count + 1)]
    seq = ApproxSequence(model.p, members)
    for n in range(1, count + 1):
        seq._dist[n] = w / n     # the squeeze moves the ends of I by w - w/n, the collapse by w
    return seq


def compose_chain(seq: ApproxSequence, kind: str, n: int) -> PiecewiseCircleMap:
    if n < 0 or n > len(seq):
        raise IndexError(f"chain length {n} outside 0..{len(seq)}")
    if kind == "forward":
        return seq.forward(n)
    if kind == "inverse":
        return seq.inverse(n)
    raise ValueError(f"kind must be 'forward' or 'inverse', got {kind!r}")


def fhat(seq: ApproxSequence, n: int) -> PiecewiseCircleMap:
    return seq.forward(n + 1).compose(seq.inverse(n), f"fhat_{n}")


def ghat(seq: ApproxSequence, n: int) -> PiecewiseCircleMap:
    return seq.forward(n).compose(seq.inverse(n + 1), f"ghat_{n}")


def h_stage(seq: ApproxSequence, n: int) -> PiecewiseCircleMap:
    return seq.f_power(n).compose(seq.inverse(n), f"h_{n}")


# -- moduli ------------------------------------------------------------------

@dataclass(frozen=True)
class ModulusEntry:
    n: int
    member: int            # label of f_n in the original family
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    alpha_branch: str      # which map attains the max: "f_1,n-1", "f_1,n-1 o f" or "tie"
    beta_branch: str
    grid_alpha: Optional[Fraction] = None

    @property
    def epsilon(self) -> Fraction:
        return 3 * (self.alpha + self.beta + self.gamma)


@dataclass
class ModulusLedger:
    entries: list = field(default_factory=list)
    epsilon_override: Optional[dict] = None   # for negative controls only

    def epsilon(self, n: int) -> Fraction:
        if self.epsilon_override and n in self.epsilon_override:
            return self.epsilon_override[n]
        return self.entries[n - 1].epsilon

    @property
    def prefix_sums(self) -> list[Fraction]:
        out, acc = [], Fraction(0)
        for k in range(1, len(self.entries) + 1):
            acc += self.epsilon(k)
            out.append(acc)
        return out

    def scaled(self, factor) -> "ModulusLedger":
        factor = Fraction(factor)
        return ModulusLedger(self.entries, {k: self.epsilon(k) * factor for k in range(1, len(self.entries) + 1)})

    def halved(self) -> "ModulusLedger":
        return self.scaled(Fraction(1, 2))

    def rows(self) -> list[list]:
        rows = []
        for e, s in zip(self.entries, self.prefix_sums):
            eps = self.epsilon(e.n)
            rows.append([e.n, e.member, f"{float(e.alpha):.12e}", f"{float(e.beta):.12e}",
                         f"{float(e.gamma):.12e}", f"{float(eps):.12e}", f"{float(s):.12e}",
                         e.alpha_branch, e.beta_branch])
        return rows


LEDGER_CSV_HEADER = ["n", "member", "alpha", "beta", "gamma", "epsilon", "prefix_sum",
                     "alpha_branch", "beta_branch"]


def _branch_mod(A: PiecewiseCircleMap, Af: PiecewiseCircleMap, delta: Fraction):
    if delta == 0:
        return Fraction(0), "empty"     # sup over the empty set
    a, b = modulus(A, delta), modulus(Af, delta)
    tag = "tie" if a == b else ("f_1,n-1" if a > b else "f_1,n-1 o f")
    return max(a, b), tag


def grid_modulus(f: PiecewiseCircleMap, delta: Fraction, grid: Sequence[Fraction]) -> Fraction:
    """Grid lower bound for modulus(f, delta): pairs (x, x + delta') with delta' just below delta."""
    if delta == 0:
        return Fraction(0)
    out = Fraction(0)
    for x in grid:
        out = max(out, min(f.lift(x + delta) - f.lift(x), Fraction(1, 2)))
    return out


def _stage_moduli(seq: ApproxSequence, n: int, delta_n: Fraction, delta_next: Fraction):
    A = seq.forward(n - 1)
    Af = A.compose(seq.f)
    alpha, ab = _branch_mod(A, Af, delta_n)
    beta, bb = _branch_mod(A, Af, delta_next)
    gamma = modulus(seq.f_power(n - 1), delta_n) if delta_n else Fraction(0)
    return alpha, beta, gamma, ab, bb


def moduli(seq: ApproxSequence, n: int, grid: Optional[CompactModel] = None) -> ModulusEntry:
    """Ledger entry for stage n (needs f_{n+1} for beta_n).

    alpha, beta, gamma are exact suprema over the circle; with ``grid`` set, a grid
    lower bound for alpha is recorded alongside as a cross-check.
    """
    if not 1 <= n < len(seq):
        raise IndexError(f"stage {n} needs members n and n+1 (family has {len(seq)})")
    alpha, beta, gamma, ab, bb = _stage_moduli(seq, n, seq.distance(n), seq.distance(n + 1))
    ga = None
    if grid is not None:
        A = seq.forward(n - 1)
        d = seq.distance(n)
        ga = max(grid_modulus(A, d, grid.grid()), grid_modulus(A.compose(seq.f), d, grid.grid()))
        if ga > alpha:
            raise ConsistencyError(f"grid modulus {ga} exceeds exact supremum {alpha} at stage {n}")
    return ModulusEntry(n, seq.labels[n - 1], alpha, beta, gamma, ab, bb, ga)


def build_ledger(seq: ApproxSequence, stages: int, grid: Optional[CompactModel] = None) -> ModulusLedger:
    return ModulusLedger([moduli(seq, n, grid) for n in range(1, stages + 1)])


# -- thinning ----------------------------------------------------------------

def geometric_target(k: int) -> Fraction:
    return Fraction(1, 1 << k)


def thin_subsequence(seq: ApproxSequence, target: Callable[[int], Fraction] = geometric_target,
                     stages: int = 8) -> list[int]:
    """Greedy choice of members so that the re-indexed ledger has eps_k <= target(k).

    Member k+1 is the first unused one that both closes stage k (its distance fixes
    beta_k) and leaves room for stage k+1 (3 (alpha_{k+1} + gamma_{k+1}) < target(k+1)).
    Returns ``stages + 1`` indices; the last one only serves beta of the last stage.
    """
    chosen: list[int] = []
    pending = None       # (alpha_k, gamma_k, A, Af) of the stage awaiting its beta
    for k in range(1, stages + 2):
        sub = seq.subsequence(chosen) if chosen else None
        A = sub.forward(k - 1) if sub else identity()
        Af = A.compose(seq.f)
        fpow = seq.f_power(k - 1)
        start = chosen[-1] + 1 if chosen else 1
        pick = None
        for i in range(start, len(seq) + 1):
            d = seq.distance(i)
            if pending is not None:
                pa, pg, pA, pAf = pending
                beta, _ = _branch_mod(pA, pAf, d)
                if 3 * (pa + beta + pg) > target(k - 1):
                    continue
            if k <= stages:
                alpha, _ = _branch_mod(A, Af, d)
                gamma = modulus(fpow, d) if d else Fraction(0)
                if not 3 * (alpha + gamma) < target(k):
                    continue
                pending_next = (alpha, gamma, A, Af)
            else:
                pending_next = None
            pick = i
            break
        if pick is None:
            raise ThinningError(k if k <= stages else stages,
                                f"family of {len(seq)} members exhausted at stage {min(k, stages)}")
        chosen.append(pick)
        pending = pending_next
    return chosen


# -- verification ------------------------------------------------------------

@dataclass
class IdentityReport:
    stages: int
    grid_points: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def identity_check(seq: ApproxSequence, stages: int, grid: CompactModel) -> IdentityReport:
    """ghat_n o fhat_n = fhat_n o ghat_n = id and h_{n+1} o fhat_n = f o h_n on the grid."""
    pts = grid.grid()
    rep = IdentityReport(stages, len(pts))
    for n in range(0, stages):
        F, G = fhat(seq, n), ghat(seq, n)
        Hn, Hn1 = h_stage(seq, n), h_stage(seq, n + 1)
        for x in pts:
            if G.lift(F.lift(x)) != x:
                rep.failures.append(("ghat o fhat", n, x))
            if F.lift(G.lift(x)) != x:
                rep.failures.append(("fhat o ghat", n, x))
            if Hn1.apply(F.lift(x)) != seq.f.apply(Hn.lift(x)):
                rep.failures.append(("h o fhat", n, x))
    return rep


@dataclass
class CauchyReport:
    stages: int
    max_usage: dict = field(default_factory=dict)          # chain -> max d / eps over stages
    exact_sup: dict = field(default_factory=dict)          # chain -> list of exact d(.,.) per stage
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "stages": self.stages,
            "max_usage": {k: float(v) for k, v in sorted(self.max_usage.items())},
            "exact_sup": {k: [float(v) for v in vs] for k, vs in sorted(self.exact_sup.items())},
            "violations": [{"chain": c, "stage": n, "x": str(x), "distance": float(d), "epsilon": float(e)}
                           for c, n, x, d, e in self.violations],
        }


def cauchy_verify(seq: ApproxSequence, indices: Optional[Sequence[int]] = None,
                  grid: Optional[CompactModel] = None, ledger: Optional[ModulusLedger] = None,
                  strict: bool = True) -> CauchyReport:
    """d(X_n, X_{n-1}) <= eps_n on the grid for X in (fhat, ghat, h), every consecutive pair."""
    sub = seq.subsequence(indices) if indices is not None else seq
    grid = grid or CompactModel()
    stages = len(sub) - 1
    if ledger is None:
        ledger = build_ledger(sub, stages)
    rep = CauchyReport(stages)
    pts = grid.grid()
    chains = {"fhat": fhat, "ghat": ghat, "h": h_stage}
    prev = {name: fn(sub, 0) for name, fn in chains.items()}
    for n in range(1, stages + 1):
        eps = ledger.epsilon(n)
        for name, fn in chains.items():
            cur = fn(sub, n)
            worst = Fraction(0)
            for x in pts:
                d = circle_dist(cur.lift(x), prev[name].lift(x))
                worst = max(worst, d)
                if d > eps:
                    rep.violations.append((name, n, x, d, eps))
            rep.exact_sup.setdefault(name, []).append(uniform_distance(cur, prev[name]))
            if eps > 0:
                rep.max_usage[name] = max(rep.max_usage.get(name, Fraction(0)), worst / eps)
            prev[name] = cur
    if strict and rep.violations:
        c, n, x, d, e = rep.violations[0]
        raise ConsistencyError(f"{c}: d = {float(d):.3e} > eps_{n} = {float(e):.3e} at x = {x}")
    return rep


# -- transport of rotation averages -----------------------------------------

@dataclass
class Fact1Report:
    horizon: int
    bound: Fraction
    max_difference: Fraction
    differences: list = field(default_factory=list)
    periodic_exact: dict = field(default_factory=dict)    # (m, n) -> bool

    @property
    def ok(self) -> bool:
        return self.max_difference <= self.bound and all(self.periodic_exact.values())


def _transport(model: DenjoyModel, kind: str):
    if kind == "identity":
        return (lambda lpt: lpt.position), Fraction(0)
    if kind == "H":
        return (lambda lpt: sk.h_transport_lift(model, lpt)), model.semiconj.h.max_displacement()
    raise ValueError(f"unknown transport {kind!r}")


def fact1_rotation_check(model: DenjoyModel, r: str = "H", horizon: int = 5000,
                         starts: Sequence = (), markov: Sequence[tuple[int, int]] = ()) -> Fact1Report:
    """Raw vs transported rotation averages: |difference| <= 2 B_r / horizon.

    With r = H, B_r = sup|h - id| (H acts coordinatewise as h).  On Markov periodic
    orbits the transported average is compared with rho_{m,n} for exact equality
    (H only).
    """
    R, B = _transport(model, r)
    bound = 2 * B / horizon
    rep = Fact1Report(horizon, bound, Fraction(0))
    for s in starts:
        lpt = s if isinstance(s, sk.LiftedSkeletonPoint) else sk.LiftedSkeletonPoint(s)
        end = sk.iterate(model, lpt, horizon)
        raw = sk.displacement(lpt, end)
        r0, r1 = R(lpt), R(end)
        tr = (r1[0] - r0[0], r1[1] - r0[1])
        diff = max(abs(Fraction(raw[0]) - Fraction(tr[0])), abs(Fraction(raw[1]) - Fraction(tr[1]))) / horizon
        rep.differences.append(diff)
        rep.max_difference = max(rep.max_difference, diff)
    # the identity leaves the approximate periodic point's raw average, which is not exact
    for m, n in (markov if r == "H" else ()):
        P = m + n + 1
        x = sk.fixed_point_in_K(model, m, n, tol=1e-40)
        lpt = sk.LiftedSkeletonPoint(x)
        end, _ = sk.orbit_with_events(model, lpt, P, bits=320)
        r0, r1 = R(lpt), R(end)
        avg = (Fraction(r1[0] - r0[0]) / P, Fraction(r1[1] - r0[1]) / P)
        rep.periodic_exact[(m, n)] = avg == tuple(rho_vec(model.param, m, n))
    return rep
