"""Certified rational stand-in for an irrational rotation number.

The irrational ``rho`` is carried as a continued-fraction convergent ``p/q``
together with an exact error bound.  Every ceiling ``ceil(m*rho)`` used
downstream is certified per index: it is only handed out when ``m*p/q`` is
farther from the nearest integer than ``m`` times the error bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

from .errors import CertificationError

DEFAULT_SCAN_LIMIT = 20000


class PlanarRational(NamedTuple):
    x: Fraction
    y: Fraction

    def swap(self) -> "PlanarRational":
        return PlanarRational(self.y, self.x)


def point(x, y) -> PlanarRational:
    return PlanarRational(Fraction(x), Fraction(y))


@dataclass(frozen=True)
class IrrationalParam:
    cf_coeffs: tuple[int, ...]
    depth: int
    convergent_num: int
    convergent_den: int
    error_bound: Fraction
    max_safe_index: int

    @property
    def rho(self) -> Fraction:
        return Fraction(self.convergent_num, self.convergent_den)

    def __float__(self) -> float:
        return self.convergent_num / self.convergent_den


@dataclass(frozen=True)
class AlphaValue:
    value: Fraction
    index: int


def convergents(coeffs: Sequence[int]) -> list[tuple[int, int]]:
    """Convergents p_k/q_k of [0; a_1, a_2, ...]."""
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    out = []
    for a in coeffs:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return out


def _certified_prefix(p: int, q: int, err: Fraction, limit: int) -> int:
    # dist(m p/q, Z) > m * err  <=>  min(r, q - r) * err.den > m * q * err.num
    en, ed = err.numerator, err.denominator
    for m in range(1, limit + 1):
        r = (m * p) % q
        if min(r, q - r) * ed <= m * q * en:
            return m - 1
    return limit


def build_param(cf_coeffs: Sequence[int], depth: int, scan_limit: int = DEFAULT_SCAN_LIMIT) -> IrrationalParam:
    coeffs = tuple(int(a) for a in cf_coeffs)
    if depth < 1 or depth > len(coeffs):
        raise ValueError(f"depth {depth} exceeds the {len(coeffs)} available coefficients")
    if any(a < 1 for a in coeffs):
        raise ValueError("continued-fraction coefficients must be positive")
    conv = convergents(coeffs[: depth + 1])
    p, q = conv[depth - 1]
    if not 0 < p < q:
        raise ValueError(f"convergent {p}/{q} does not lie in (0, 1)")
    q_prev = conv[depth - 2][1] if depth >= 2 else 1
    if len(coeffs) > depth:
        q_next = conv[depth][1]
    else:
        # next coefficient unknown; a_{k+1} >= 1 still gives q_{k+1} >= q_k + q_{k-1}
        q_next = q + q_prev
    err = Fraction(1, q * q_next)
    assert gcd(p, q) == 1
    safe = _certified_prefix(p, q, err, min(scan_limit, q - 1))
    return IrrationalParam(coeffs, depth, p, q, err, safe)


def golden(depth: int = 20) -> IrrationalParam:
    return build_param([1] * (depth + 1), depth)


def silver(depth: int = 11) -> IrrationalParam:
    return build_param([2] * (depth + 1), depth)


def _check_index(param: IrrationalParam, n: int) -> None:
    if not 1 <= n <= param.max_safe_index:
        raise CertificationError(
            f"index {n} outside certified range 1..{param.max_safe_index}")


def ceil_mul(param: IrrationalParam, n: int) -> int:
    """Certified ceil(n * rho)."""
    _check_index(param, n)
    return -((-n * param.convergent_num) // param.convergent_den)


def alpha(param: IrrationalParam, n: int) -> AlphaValue:
    c = ceil_mul(param, n)
    return AlphaValue(c - n * param.rho, n)


def rho_vec(param: IrrationalParam, m: int, n: int) -> PlanarRational:
    s = m + n + 1
    return PlanarRational(Fraction(ceil_mul(param, m), s), Fraction(ceil_mul(param, n), s))


def _alpha_below_rho(param: IrrationalParam, n: int) -> bool:
    # alpha_n - rho = ceil(n rho) - (n+1) rho; its sign is certified when
    # (n+1) p/q keeps a margin larger than (n+1) * error_bound from ceil(n rho)
    c = ceil_mul(param, n)
    gap = c - (n + 1) * param.rho
    if abs(gap) <= (n + 1) * param.error_bound:
        raise CertificationError(f"sign of alpha_{n} - rho is not certified")
    return gap < 0


def is_admissible(param: IrrationalParam, m: int, n: int) -> bool:
    _check_index(param, m)
    _check_index(param, n)
    return _alpha_below_rho(param, m) and _alpha_below_rho(param, n)


def admissible_indices(param: IrrationalParam, upto: int) -> list[int]:
    return [k for k in range(1, upto + 1) if _alpha_below_rho(param, k)]
