"""Exact and certified representations of irrational slopes.

Three representations share one interface:

* :class:`QuadraticSurd` -- ``(p + q*sqrt(d)) / r``; floors are exact at any n.
* :class:`CFStream` -- a continued fraction given by an eventually periodic
  pattern or by a program ``k -> a_k``; floors are certified by bracketing
  the value between consecutive convergents.
* :class:`CertifiedDecimal` -- a user-supplied rational centre and error bound,
  asserted irrational by the user.  Floors refuse to guess when the interval
  straddles an integer.
"""
from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Iterator, List, Optional, Tuple, Union

from ..errors import ParseError, PrecisionExhausted, Unsupported
from .ball import RealBall

INITIAL_BITS = 128
DEFAULT_CEILING_BITS = 16384
CEILING_ENV = "STURMBETA_PRECISION_CEILING"
MAX_CF_TERMS = 20000


def precision_ceiling() -> int:
    """Configured maximum working precision in bits."""
    value = os.environ.get(CEILING_ENV)
    return int(value) if value else DEFAULT_CEILING_BITS


def precision_ladder(start: int = INITIAL_BITS, ceiling: Optional[int] = None) -> Iterator[int]:
    """128, 256, 512, ... up to and including the ceiling."""
    ceiling = precision_ceiling() if ceiling is None else ceiling
    bits = start
    while bits < ceiling:
        yield bits
        bits *= 2
    yield max(ceiling, start)


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _floor_surd(a: int, b: int, d: int, c: int) -> int:
    """floor((a + b*sqrt(d)) / c) for c > 0 and d not a perfect square."""
    if b == 0:
        return a // c
    s = isqrt(b * b * d)
    k = a + s if b > 0 else a - s - 1
    return k // c


class Slope:
    """Common interface of the slope representations."""

    #: True when irrationality rests on a user assertion rather than a proof.
    assumed: bool = False

    def ball(self, bits: int) -> RealBall:
        raise NotImplementedError

    def floor_affine(self, n: int, rho: "Intercept" = 0) -> int:
        return _ball_floor(self, n, rho, ceil=False)

    def ceil_affine(self, n: int, rho: "Intercept" = 0) -> int:
        return _ball_floor(self, n, rho, ceil=True)

    def cf_term(self, k: int) -> int:
        raise NotImplementedError

    def convergent(self, k: int) -> Fraction:
        p0, q0, p1, q1 = 0, 1, 1, 0
        for i in range(k + 1):
            a = self.cf_term(i)
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        return Fraction(p1, q1)

    def convergents(self, k: int) -> List[Fraction]:
        out = []
        p0, q0, p1, q1 = 0, 1, 1, 0
        for i in range(k + 1):
            a = self.cf_term(i)
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            out.append(Fraction(p1, q1))
        return out

    def __float__(self) -> float:
        return float(self.ball(64).mid)

    def compare(self, other: "Slope") -> int:
        """Sign of ``self - other`` (distinct irrationals only ever refine to a decision)."""
        for bits in precision_ladder():
            s = (self.ball(bits) - other.ball(bits)).sign()
            if s is not None and s != 0:
                return s
            if s == 0:
                return 0
        if self == other:
            return 0
        raise PrecisionExhausted("cannot separate slopes")


Intercept = Union[int, Fraction, "QuadraticSurd", RealBall]


def _ball_floor(alpha: Slope, n: int, rho, ceil: bool) -> int:
    if n == 0 and isinstance(rho, (int, Fraction)):
        r = Fraction(rho)
        return -((-r.numerator) // r.denominator) if ceil else r.numerator // r.denominator
    for bits in precision_ladder():
        x = alpha.ball(bits) * n + _intercept_ball(rho, bits)
        k = x.ceil() if ceil else x.floor()
        if k is not None:
            return k
        if alpha.assumed:
            break
    raise PrecisionExhausted(
        f"value {'ceil' if ceil else 'floor'} of alpha*{n}+rho is not certifiable at the precision ceiling")


def _intercept_ball(rho, bits: int) -> RealBall:
    if isinstance(rho, RealBall):
        return rho
    if isinstance(rho, Slope):
        return rho.ball(bits)
    return RealBall.exact(Fraction(rho), bits)


@dataclass(frozen=True)
class QuadraticSurd(Slope):
    """The real number ``(p + q*sqrt(d)) / r`` with d square-free, q != 0, r > 0."""

    p: int
    q: int
    d: int
    r: int

    def __post_init__(self):
        if self.r <= 0:
            raise ParseError("denominator r must be positive")
        if self.q == 0:
            raise ParseError("q = 0 gives a rational number")
        if not _squarefree(self.d):
            raise ParseError(f"d = {self.d} must be a square-free integer > 1")

    @property
    def value_bounds(self) -> Tuple[int, int]:
        f = _floor_surd(self.p, self.q, self.d, self.r)
        return f, f + 1

    def ball(self, bits: int) -> RealBall:
        root = RealBall.sqrt_int(self.q * self.q * self.d, bits + 8)
        if self.q < 0:
            root = -root
        return ((root + self.p) / self.r).with_prec(bits)

    def _affine(self, n: int, rho) -> Optional[Tuple[int, int, int]]:
        """(a, b, c) with alpha*n + rho = (a + b*sqrt(d))/c exactly, if possible."""
        if isinstance(rho, (int, Fraction)):
            rho = Fraction(rho)
            u, v = rho.numerator, rho.denominator
            return self.p * n * v + u * self.r, self.q * n * v, self.r * v
        if isinstance(rho, QuadraticSurd) and rho.d == self.d:
            return (self.p * n * rho.r + rho.p * self.r,
                    self.q * n * rho.r + rho.q * self.r,
                    self.r * rho.r)
        return None

    def floor_affine(self, n: int, rho: Intercept = 0) -> int:
        t = self._affine(n, rho)
        if t is None:
            return _ball_floor(self, n, rho, ceil=False)
        return _floor_surd(*t[:2], self.d, t[2])

    def ceil_affine(self, n: int, rho: Intercept = 0) -> int:
        t = self._affine(n, rho)
        if t is None:
            return _ball_floor(self, n, rho, ceil=True)
        return -_floor_surd(-t[0], -t[1], self.d, t[2])

    def cf_term(self, k: int) -> int:
        return self._cf_terms(k + 1)[k]

    def _cf_terms(self, count: int) -> List[int]:
        with _SURD_CF_LOCK:
            cache = _SURD_CF_CACHE.setdefault(self, [[], (self.p, self.q, self.r)])
            return self._extend_cf(cache, count)

    def _extend_cf(self, cache: list, count: int) -> List[int]:
        terms, state = cache
        a, b, c = state
        while len(terms) < count:
            t = _floor_surd(a, b, self.d, c)
            terms.append(t)
            # x - t = (a - t*c + b*sqrt(d)) / c; invert
            a -= t * c
            # 1/x = c (a - b sqrt d) / (a^2 - b^2 d)
            den = a * a - b * b * self.d
            a, b, c = c * a, -c * b, den
            if c < 0:
                a, b, c = -a, -b, -c
            g = gcd(gcd(a, b), c)
            a, b, c = a // g, b // g, c // g
        cache[1] = (a, b, c)
        return terms

    def minimal_polynomial(self) -> Tuple[Fraction, ...]:
        """Monic coefficients (low to high) of the minimal polynomial."""
        # (r x - p)^2 = q^2 d
        r2 = Fraction(self.r * self.r)
        c0 = Fraction(self.p * self.p - self.q * self.q * self.d) / r2
        c1 = Fraction(-2 * self.p * self.r) / r2
        return (c0, c1, Fraction(1))

    def __str__(self) -> str:
        sign = "+" if self.q > 0 else "-"
        return f"surd:({self.p}{sign}{abs(self.q)}*sqrt({self.d}))/{self.r}"


_SURD_CF_CACHE: dict = {}
_SURD_CF_LOCK = threading.Lock()


@dataclass(frozen=True)
class CFStream(Slope):
    """Continued fraction ``[a0; a1, a2, ...]``.

    Either ``head`` followed by an endlessly repeated ``period``, or a
    ``program`` mapping k to a_k (in which case ``head`` overrides the first
    terms).
    """

    head: Tuple[int, ...] = ()
    period: Tuple[int, ...] = ()
    program: Optional[Callable[[int], int]] = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        if not self.period and self.program is None:
            raise ParseError("a finite continued fraction is rational; give a period or a program")
        if not self.head and self.program is None:
            raise ParseError("continued fraction needs an explicit a0")
        if any(a < 1 for a in self.head[1:] + self.period):
            raise ParseError("continued fraction terms after the first must be >= 1")

    def cf_term(self, k: int) -> int:
        if k < len(self.head):
            return self.head[k]
        if self.program is not None:
            a = int(self.program(k))
            if k > 0 and a < 1:
                raise ParseError(f"program produced a_{k} = {a} < 1")
            return a
        return self.period[(k - len(self.head)) % len(self.period)]

    def _bracket(self, k: int, cache: List[Fraction]) -> Tuple[Fraction, Fraction]:
        while len(cache) < k + 2:
            cache[:] = self.convergents(max(2 * len(cache), k + 2))
        a, b = cache[k], cache[k + 1]
        return (a, b) if a < b else (b, a)

    def ball(self, bits: int) -> RealBall:
        cache: List[Fraction] = []
        eps = Fraction(1, 1 << bits)
        k = 1
        while True:
            lo, hi = self._bracket(k, cache)
            if hi - lo < eps or k > MAX_CF_TERMS:
                break
            k += 1
        lo_b = RealBall.exact(lo, bits + 8)
        hi_b = RealBall.exact(hi, bits + 8)
        return lo_b.union(hi_b).with_prec(bits)

    def _floor_or_ceil(self, n: int, rho, ceil: bool) -> int:
        if not isinstance(rho, (int, Fraction)):
            return _ball_floor(self, n, rho, ceil)
        rho = Fraction(rho)
        if n == 0:
            return _ball_floor(self, 0, rho, ceil)
        cache: List[Fraction] = []
        for k in range(MAX_CF_TERMS):
            lo, hi = self._bracket(k, cache)
            low, high = n * lo + rho, n * hi + rho
            # alpha*n + rho lies strictly inside (low, high)
            f = low.numerator // low.denominator
            if f + 1 >= high:
                if ceil:
                    return f + 1
                return f
        raise PrecisionExhausted("continued fraction exhausted before the floor was certified")

    def floor_affine(self, n: int, rho: Intercept = 0) -> int:
        return self._floor_or_ceil(n, rho, ceil=False)

    def ceil_affine(self, n: int, rho: Intercept = 0) -> int:
        return self._floor_or_ceil(n, rho, ceil=True)

    def __str__(self) -> str:
        if self.program is not None:
            return self.name or "cf:<program>"
        head = ",".join(str(a) for a in self.head[1:])
        per = ",".join(str(a) for a in self.period)
        inner = f"{self.head[0] if self.head else 0};"
        parts = [p for p in (head, f"({per})") if p]
        return "cf:[" + inner + ",".join(parts) + "]"


@dataclass(frozen=True)
class CertifiedDecimal(Slope):
    """``centre +/- error``, asserted irrational by the user."""

    centre: Fraction
    error: Fraction
    assumed: bool = True

    def __post_init__(self):
        if self.error < 0:
            raise ParseError("error bound must be nonnegative")

    def ball(self, bits: int) -> RealBall:
        return RealBall.exact(self.centre, bits).add_error(self.error)

    def _interval_floor(self, n: int, rho, ceil: bool) -> int:
        if not isinstance(rho, (int, Fraction)):
            return _ball_floor(self, n, rho, ceil)
        rho = Fraction(rho)
        lo = n * (self.centre - self.error) + rho
        hi = n * (self.centre + self.error) + rho
        if ceil:
            a, b = -((-lo.numerator) // lo.denominator), -((-hi.numerator) // hi.denominator)
        else:
            a, b = lo.numerator // lo.denominator, hi.numerator // hi.denominator
        if a != b:
            raise PrecisionExhausted(
                f"decimal slope too coarse: alpha*{n}+rho straddles an integer")
        return a

    def floor_affine(self, n: int, rho: Intercept = 0) -> int:
        return self._interval_floor(n, rho, ceil=False)

    def ceil_affine(self, n: int, rho: Intercept = 0) -> int:
        return self._interval_floor(n, rho, ceil=True)

    def cf_term(self, k: int) -> int:
        lo, hi = self.centre - self.error, self.centre + self.error
        for i in range(k + 1):
            a, b = lo.numerator // lo.denominator, hi.numerator // hi.denominator
            if a != b or (i < k and (lo == a or hi == b)):
                raise Unsupported(f"error bound only justifies {i} continued fraction terms")
            if i == k:
                return a
            lo, hi = 1 / (hi - b), 1 / (lo - a)
        raise AssertionError("unreachable")

    def __str__(self) -> str:
        return f"dec:{_fraction_decimal(self.centre)}~{_fraction_decimal(self.error)}"


def _fraction_decimal(x: Fraction) -> str:
    import decimal

    with decimal.localcontext() as ctx:
        ctx.prec = 60
        return str(decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator))


# ---------------------------------------------------------------- functions
def floor_linear(alpha: Slope, n: int, rho: Intercept = 0) -> int:
    """Certified ``floor(alpha*n + rho)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return alpha.floor_affine(n, rho)


def ceil_linear(alpha: Slope, n: int, rho: Intercept = 0) -> int:
    """Certified ``ceil(alpha*n + rho)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return alpha.ceil_affine(n, rho)


def convergent(alpha: Slope, k: int) -> Fraction:
    """k-th continued-fraction convergent of alpha."""
    return alpha.convergent(k)


def check_unit_interval(alpha: Slope) -> Slope:
    """Reject slopes outside (0, 1)."""
    if isinstance(alpha, QuadraticSurd):
        if alpha.value_bounds[0] != 0:
            raise ParseError(f"slope {alpha} is not in (0, 1)")
    elif isinstance(alpha, CFStream):
        if alpha.cf_term(0) != 0:
            raise ParseError(f"slope {alpha} is not in (0, 1)")
    else:
        b = alpha.ball(64)
        if not (b.certainly_positive() and (1 - b).certainly_positive()):
            raise ParseError(f"slope {alpha} is not certifiably in (0, 1)")
    return alpha


# ------------------------------------------------------------------ parsing
_SURD_RE = re.compile(
    r"^\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*(\d+)$")
_SURD_SHORT_RE = re.compile(r"^([+-]?\d*)\s*\*?\s*sqrt\(\s*(\d+)\s*\)\s*([+-]\s*\d+)?$")


def parse_number(text: str) -> Slope:
    """Parse ``surd:``, ``cf:`` or ``dec:`` syntax without range checks."""
    text = text.strip()
    kind, _, body = text.partition(":")
    if not body:
        raise ParseError(f"expected surd:/cf:/dec: prefix in {text!r}")
    body = body.replace(" ", "")
    if kind == "surd":
        m = _SURD_RE.match(body)
        if m:
            p, sgn, q, d, r = m.groups()
            q = int(q) if sgn == "+" else -int(q)
            return QuadraticSurd(int(p), q, int(d), int(r))
        m = _SURD_SHORT_RE.match(body)
        if m:
            coef, d, shift = m.groups()
            q = int(coef) if coef not in ("", "+", "-") else (-1 if coef == "-" else 1)
            p = int(shift) if shift else 0
            return QuadraticSurd(p, q, int(d), 1)
        raise ParseError(f"bad surd syntax {body!r}; expected (p+q*sqrt(d))/r")
    if kind == "cf":
        m = re.match(r"^\[(-?\d+);([0-9,]*?)(?:,?\(([0-9,]+)\))?\]$", body)
        if not m:
            raise ParseError(f"bad continued fraction {body!r}; expected [a0;a1,...,(period)]")
        a0, mid, per = m.groups()
        head = (int(a0),) + tuple(int(x) for x in mid.split(",") if x)
        period = tuple(int(x) for x in per.split(",")) if per else ()
        return CFStream(head, period)
    if kind == "dec":
        value, sep, err = body.partition("~")
        if not sep:
            raise ParseError("decimal slope needs an error bound: dec:<digits>~<error>")
        try:
            return CertifiedDecimal(Fraction(value), Fraction(err))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"unknown number kind {kind!r}")


def parse_slope(text: str) -> Slope:
    """Parse a slope and check that it lies in (0, 1)."""
    return check_unit_interval(parse_number(text))


# Frequently used slopes
TAU_INV2 = QuadraticSurd(3, -1, 5, 2)          # tau^-2 = (3 - sqrt5)/2
SQRT2_MINUS_1 = QuadraticSurd(-1, 1, 2, 1)
SQRT3_MINUS_1_HALF = QuadraticSurd(-1, 1, 3, 2)
GOLDEN = QuadraticSurd(1, 1, 5, 2)              # tau = (1 + sqrt5)/2
