"""The Mahler series f(w, z) = sum_{n>=1} floor(n w) z^n and the identity

    sum_n s_{alpha,0}(n) / beta^(n+1)
        = (1 - 1/beta) f(alpha, 1/beta)
        = (1/(b-a)) (1 - (b-a)/beta - a/(beta-1))

for beta = sturmian_beta(alpha, a, b), checked in certified arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Union

from .beta_expansion import GUARD_BITS, sturmian_beta
from .errors import DivergentInput, IdentityViolated
from .numeric.ball import RealBall
from .numeric.slope import Slope
from .words import lower_mechanical

Weight = Union[Slope, Fraction, int]


def _floors(w: Weight, N: int) -> List[int]:
    if isinstance(w, Slope):
        return [w.floor_affine(n) for n in range(1, N + 1)]
    w = Fraction(w)
    return [math.floor(n * w) for n in range(1, N + 1)]


def _bound(w: Weight) -> int:
    """m with |floor(n w)| <= m n for all n >= 1."""
    if isinstance(w, Slope):
        lo, hi = w.ball(32).lower_fraction(), w.ball(32).upper_fraction()
        return max(1, math.ceil(max(abs(lo), abs(hi))) + 1)
    return max(1, math.ceil(abs(Fraction(w))) + 1)


def series_tail(r: RealBall, N: int) -> Fraction:
    """Upper bound for sum_{n>N} n r^n = N r^(N+1)/(1-r) + r^(N+1)/(1-r)^2, r = |z|."""
    one_minus = 1 - r
    p = r ** (N + 1)
    return (N * p / one_minus + p / (one_minus * one_minus)).upper_fraction()


def _terms_for(r: float, bits: int, m: int) -> int:
    lr = -math.log2(r) if r > 0 else float("inf")
    if lr == float("inf"):
        return 1
    n = max(4, int((bits + 4) / lr))
    while True:
        lt = (math.log2(m) + (n + 1) * -lr
              + math.log2(n / (1 - r) + 1 / (1 - r) ** 2))
        if lt < -(bits + 4):
            return n
        n += max(1, n // 16)


@dataclass(frozen=True)
class MahlerEvaluation:
    w: Weight
    z: RealBall
    value: RealBall
    terms_used: int
    tail_bound: RealBall

    def to_json(self) -> dict:
        return {"w": str(self.w), "z": self.z.to_json(), "value": self.value.to_json(),
                "terms_used": self.terms_used, "tail_bound": self.tail_bound.rad_str()}


def mahler_f(w: Weight, z: Union[RealBall, Fraction, int], bits: int = 128) -> MahlerEvaluation:
    """Certified ball for f(w, z) with real |z| < 1."""
    if not isinstance(z, RealBall):
        z = RealBall.exact(Fraction(z), bits + GUARD_BITS)
    r = abs(z)
    if not r < 1:
        raise DivergentInput(f"|z| must be certifiably < 1, got {z!r}")
    if z.is_exact() and z.man == 0:
        zero = RealBall.exact(0, bits)
        return MahlerEvaluation(w, z, zero, 0, zero)
    m = _bound(w)
    N = _terms_for(float(r.upper_fraction()), bits, m)
    zz = z.with_prec(max(z.prec, bits + GUARD_BITS))
    acc = RealBall.exact(0, zz.prec)
    for c in reversed(_floors(w, N)):
        acc = (acc + c) * zz if c else acc * zz
    tail = m * series_tail(r.with_prec(zz.prec), N)
    value = acc.add_error(tail)
    return MahlerEvaluation(w, z, value, N, RealBall.exact(0, 64).add_error(tail))


def _digit_series(alpha: Slope, beta_ball: RealBall, bits: int) -> RealBall:
    """sum_n s_{alpha,0}(n) / beta^(n+1) with the tail bounded by sum_{n>=N} beta^-(n+1)."""
    y = beta_ball.inverse()
    lb = math.log2(float(beta_ball.lower_fraction()))
    N = int((bits + 8) / lb) + 8
    digits = lower_mechanical(alpha, 0).prefix(N)
    acc = RealBall.exact(0, y.prec)
    for d in reversed(digits):
        acc = (acc + d) * y if d else acc * y
    tail = ((y ** (N + 1)) / (1 - y)).upper_fraction()
    return acc.add_interval(Fraction(0), tail)


@dataclass(frozen=True)
class IdentityReport:
    alpha: Slope
    a: int
    b: int
    bits: int
    beta: RealBall
    values: Dict[str, RealBall]
    gaps: Dict[str, Fraction]

    @property
    def max_gap(self) -> Fraction:
        return max(self.gaps.values())

    def to_json(self) -> dict:
        return {"alpha": str(self.alpha), "a": self.a, "b": self.b, "bits": self.bits,
                "beta": self.beta.to_json(),
                "values": {k: v.to_json() for k, v in self.values.items()},
                "gaps": {k: f"{float(g):.3e}" for k, g in self.gaps.items()},
                "max_gap": f"{float(self.max_gap):.3e}"}


def identity_check(alpha: Slope, a: int, b: int, bits: int = 512) -> IdentityReport:
    """Evaluate the three sides and certify that they overlap pairwise.

    A gap is the widest possible distance between points of two balls,
    |m1 - m2| + r1 + r2.
    """
    beta = sturmian_beta(alpha, a, b, bits + GUARD_BITS)
    x = beta.ball(bits + GUARD_BITS).with_prec(bits + GUARD_BITS)
    values = {
        "digit_series": _digit_series(alpha, x, bits),
        "mahler": (1 - x.inverse()) * mahler_f(alpha, x.inverse(), bits + 8).value,
        "closed_form": (1 - (b - a) / x - a / (x - 1)) / (b - a),
    }
    gaps = {}
    for (k1, v1), (k2, v2) in combinations(values.items(), 2):
        if not v1.overlaps(v2):
            raise IdentityViolated(f"{k1} and {k2} are disjoint: {v1!r} vs {v2!r}")
        gaps[f"{k1}~{k2}"] = abs(v1.mid - v2.mid) + v1.rad + v2.rad
    return IdentityReport(alpha, a, b, bits, beta.value, values, gaps)
