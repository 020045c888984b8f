"""Midpoint-radius ball arithmetic over binary fractions.

A ball stores its midpoint as ``man * 2**exp`` with an arbitrary-size integer
mantissa rounded to ``prec`` bits, and its radius as a short (64-bit) mantissa
that is always rounded *up*.  Every operation returns a ball containing the
exact result for every choice of inputs from the operand balls.
"""
from __future__ import annotations

import decimal
from functools import cmp_to_key
from fractions import Fraction
from typing import Optional, Tuple, Union

Dyadic = Tuple[int, int]  # (mantissa, exponent)
Number = Union[int, Fraction, "RealBall"]

RAD_BITS = 64
DEFAULT_PREC = 128


def _up(m: int, e: int) -> Dyadic:
    """Round a nonnegative dyadic up to RAD_BITS bits."""
    n = m.bit_length()
    if n > RAD_BITS:
        s = n - RAD_BITS
        m = -((-m) >> s)
        e += s
    return m, e


def _down(m: int, e: int) -> Dyadic:
    n = m.bit_length()
    if n > RAD_BITS:
        s = n - RAD_BITS
        m >>= s
        e += s
    return m, e


def _radd(a: Dyadic, b: Dyadic) -> Dyadic:
    am, ae = a
    bm, be = b
    if am == 0:
        return b
    if bm == 0:
        return a
    if ae < be:
        am, ae, bm, be = bm, be, am, ae
    # now ae >= be; a tiny b is absorbed into one ulp of the (short) a
    if ae - be > 2 * RAD_BITS and bm.bit_length() + be <= ae:
        return _up(am + 1, ae)
    return _up((am << (ae - be)) + bm, be)


def _rmul(a: Dyadic, b: Dyadic) -> Dyadic:
    if a[0] == 0 or b[0] == 0:
        return 0, 0
    return _up(a[0] * b[0], a[1] + b[1])


def _rdiv_up(a: Dyadic, b: Dyadic) -> Dyadic:
    """Upper bound on a/b for a >= 0, b > 0."""
    if a[0] == 0:
        return 0, 0
    k = RAD_BITS + b[0].bit_length()
    q = -((-(a[0] << k)) // b[0])
    return _up(q, a[1] - b[1] - k)


def _cmp_dyadic(am: int, ae: int, bm: int, be: int) -> int:
    if ae < be:
        bm <<= be - ae
    else:
        am <<= ae - be
    return (am > bm) - (am < bm)


def _dyadic_floor(m: int, e: int) -> int:
    return m << e if e >= 0 else m >> -e


def _dyadic_ceil(m: int, e: int) -> int:
    return m << e if e >= 0 else -((-m) >> -e)


def _sub_dyadic(am: int, ae: int, bm: int, be: int) -> Dyadic:
    e = min(ae, be)
    return (am << (ae - e)) - (bm << (be - e)), e


def _add_dyadic(am: int, ae: int, bm: int, be: int) -> Dyadic:
    e = min(ae, be)
    return (am << (ae - e)) + (bm << (be - e)), e


class RealBall:
    """Closed interval ``[mid - rad, mid + rad]`` with a binary midpoint."""

    __slots__ = ("man", "exp", "rman", "rexp", "prec")

    def __init__(self, man: int, exp: int, rman: int = 0, rexp: int = 0,
                 prec: int = DEFAULT_PREC, *, _rounded: bool = False):
        if rman < 0:
            raise ValueError("radius must be nonnegative")
        if not _rounded:
            man, exp, err = _round_mid(man, exp, prec)
            rman, rexp = _radd(_up(rman, rexp), err)
        if man == 0:
            exp = 0
        if rman == 0:
            rexp = 0
        self.man = man
        self.exp = exp
        self.rman = rman
        self.rexp = rexp
        self.prec = prec

    # ------------------------------------------------------------------ build
    @classmethod
    def exact(cls, value: Union[int, Fraction], prec: int = DEFAULT_PREC) -> "RealBall":
        """Ball around an integer or rational; exact whenever ``value`` is dyadic."""
        if isinstance(value, RealBall):
            return value
        if isinstance(value, int):
            return cls(value, 0, 0, 0, prec)
        value = Fraction(value)
        num, den = value.numerator, value.denominator
        if den & (den - 1) == 0:
            return cls(num, -(den.bit_length() - 1), 0, 0, prec)
        k = prec + den.bit_length() + 2
        q = (num << k) // den
        return cls(q, -k, 1, -k, prec)

    @classmethod
    def from_endpoints(cls, lo: Dyadic, hi: Dyadic, prec: int = DEFAULT_PREC) -> "RealBall":
        """Smallest ball (up to rounding) containing the dyadic interval [lo, hi]."""
        s, e = _add_dyadic(lo[0], lo[1], hi[0], hi[1])
        d, _ = _sub_dyadic(hi[0], hi[1], lo[0], lo[1])
        if d < 0:
            raise ValueError("lo > hi")
        return cls(s, e - 1, d, e - 1, prec)

    @classmethod
    def sqrt_int(cls, d: int, prec: int = DEFAULT_PREC) -> "RealBall":
        if d < 0:
            raise ValueError("negative radicand")
        from math import isqrt

        k = prec + 2
        s = isqrt(d << (2 * k))
        if s * s == d << (2 * k):
            return cls(s, -k, 0, 0, prec)
        # sqrt(d) lies in (s, s+1) * 2^-k; centre the ball at s + 1/2
        return cls(2 * s + 1, -k - 1, 1, -k - 1, prec)

    def with_prec(self, prec: int) -> "RealBall":
        return RealBall(self.man, self.exp, self.rman, self.rexp, prec)

    # ---------------------------------------------------------------- access
    @property
    def mid(self) -> Fraction:
        return Fraction(self.man) * Fraction(2) ** self.exp

    @property
    def rad(self) -> Fraction:
        return Fraction(self.rman) * Fraction(2) ** self.rexp

    def lower(self) -> Dyadic:
        return _sub_dyadic(self.man, self.exp, self.rman, self.rexp)

    def upper(self) -> Dyadic:
        return _add_dyadic(self.man, self.exp, self.rman, self.rexp)

    def lower_fraction(self) -> Fraction:
        m, e = self.lower()
        return Fraction(m) * Fraction(2) ** e

    def upper_fraction(self) -> Fraction:
        m, e = self.upper()
        return Fraction(m) * Fraction(2) ** e

    def rad_log2(self) -> float:
        """log2 of the radius (``-inf`` for exact balls)."""
        if self.rman == 0:
            return float("-inf")
        return self.rman.bit_length() + self.rexp

    def is_exact(self) -> bool:
        return self.rman == 0

    def __float__(self) -> float:
        return float(self.mid)

    # -------------------------------------------------------------- rounding
    def floor(self) -> Optional[int]:
        """``floor(x)`` if it is the same for every x in the ball, else None."""
        lo = _dyadic_floor(*self.lower())
        hi = _dyadic_floor(*self.upper())
        return lo if lo == hi else None

    def ceil(self) -> Optional[int]:
        lo = _dyadic_ceil(*self.lower())
        hi = _dyadic_ceil(*self.upper())
        return lo if lo == hi else None

    # ------------------------------------------------------------ predicates
    def sign(self) -> Optional[int]:
        """Certified sign, or None when the ball contains 0 (and is not exactly 0)."""
        if self.rman == 0:
            return (self.man > 0) - (self.man < 0)
        c = _cmp_dyadic(abs(self.man), self.exp, self.rman, self.rexp)
        if c > 0:
            return 1 if self.man > 0 else -1
        return None

    def __lt__(self, other: Number) -> bool:
        """Certainly less (every point of self below every point of other)."""
        return (self - _coerce(other, self.prec)).certainly_negative()

    def __gt__(self, other: Number) -> bool:
        return (self - _coerce(other, self.prec)).certainly_positive()

    def __le__(self, other: Number) -> bool:
        d = self - _coerce(other, self.prec)
        return _cmp_dyadic(*d.upper(), 0, 0) <= 0

    def __ge__(self, other: Number) -> bool:
        d = self - _coerce(other, self.prec)
        return _cmp_dyadic(*d.lower(), 0, 0) >= 0

    def certainly_positive(self) -> bool:
        return _cmp_dyadic(*self.lower(), 0, 0) > 0

    def certainly_negative(self) -> bool:
        return _cmp_dyadic(*self.upper(), 0, 0) < 0

    def contains(self, value: Union[int, Fraction, "RealBall"]) -> bool:
        if isinstance(value, RealBall):
            return (_cmp_dyadic(*self.lower(), *value.lower()) <= 0
                    and _cmp_dyadic(*value.upper(), *self.upper()) <= 0)
        value = Fraction(value)
        return self.lower_fraction() <= value <= self.upper_fraction()

    def overlaps(self, other: "RealBall") -> bool:
        return (_cmp_dyadic(*self.lower(), *other.upper()) <= 0
                and _cmp_dyadic(*other.lower(), *self.upper()) <= 0)

    def intersect(self, other: "RealBall") -> "RealBall":
        if not self.overlaps(other):
            raise ValueError("disjoint balls")
        lo = max(self.lower(), other.lower(), key=_dkey)
        hi = min(self.upper(), other.upper(), key=_dkey)
        return RealBall.from_endpoints(lo, hi, max(self.prec, other.prec))

    # ------------------------------------------------------------ arithmetic
    def __neg__(self) -> "RealBall":
        return RealBall(-self.man, self.exp, self.rman, self.rexp, self.prec, _rounded=True)

    def __abs__(self) -> "RealBall":
        if self.sign() is None:
            hi = self.upper() if self.man >= 0 else (-self.lower()[0], self.lower()[1])
            return RealBall.from_endpoints((0, 0), hi, self.prec)
        return -self if self.man < 0 else self

    def __add__(self, other: Number) -> "RealBall":
        other = _coerce(other, self.prec)
        if other is NotImplemented:
            return NotImplemented
        m, e = _add_dyadic(self.man, self.exp, other.man, other.exp)
        prec = max(self.prec, other.prec)
        m, e, err = _round_mid(m, e, prec)
        rad = _radd(_radd((self.rman, self.rexp), (other.rman, other.rexp)), err)
        return RealBall(m, e, rad[0], rad[1], prec, _rounded=True)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "RealBall":
        other = _coerce(other, self.prec)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> "RealBall":
        return (-self) + other

    def __mul__(self, other: Number) -> "RealBall":
        other = _coerce(other, self.prec)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        m, e, err = _round_mid(self.man * other.man, self.exp + other.exp, prec)
        rad = err
        if other.rman:
            rad = _radd(rad, _rmul(_up(abs(self.man), self.exp), (other.rman, other.rexp)))
        if self.rman:
            rad = _radd(rad, _rmul(_up(abs(other.man), other.exp), (self.rman, self.rexp)))
            if other.rman:
                rad = _radd(rad, _rmul((self.rman, self.rexp), (other.rman, other.rexp)))
        return RealBall(m, e, rad[0], rad[1], prec, _rounded=True)

    __rmul__ = __mul__

    def inverse(self) -> "RealBall":
        if self.sign() is None or self.man == 0:
            raise ZeroDivisionError("ball contains zero")
        prec = self.prec
        a = abs(self.man)
        k = prec + a.bit_length() + 2
        q = (1 << k) // a
        # 1/|mid| lies in [q, q+1) * 2^(-k-exp)
        m = 2 * q + 1
        e = -k - self.exp - 1
        rad = (1, e)
        if self.rman:
            low = _down(*_sub_dyadic(a, self.exp, self.rman, self.rexp))
            rad = _radd(rad, _rdiv_up((self.rman, self.rexp), _rmul_down(low, low)))
        if self.man < 0:
            m = -m
        return RealBall(m, e, rad[0], rad[1], prec)

    def __truediv__(self, other: Number) -> "RealBall":
        other = _coerce(other, self.prec)
        if other is NotImplemented:
            return NotImplemented
        if other.rman == 0 and other.man != 0 and abs(other.man) & (abs(other.man) - 1) == 0:
            # power of two: exact scaling
            sh = abs(other.man).bit_length() - 1
            r = self.mul_2exp(-(other.exp + sh))
            return -r if other.man < 0 else r
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> "RealBall":
        return _coerce(other, self.prec) * self.inverse()

    def __pow__(self, n: int) -> "RealBall":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self ** (-n)).inverse()
        result = RealBall(1, 0, 0, 0, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_2exp(self, k: int) -> "RealBall":
        return RealBall(self.man, self.exp + k, self.rman, self.rexp + k if self.rman else 0,
                        self.prec, _rounded=True)

    def add_error(self, err: Union[Fraction, "RealBall", Dyadic]) -> "RealBall":
        """Widen the radius by a nonnegative amount."""
        if isinstance(err, RealBall):
            d = err.upper()
            d = (max(d[0], 0), d[1])
        elif isinstance(err, tuple):
            d = err
        else:
            d = _frac_up(Fraction(err))
        rad = _radd((self.rman, self.rexp), _up(*d) if d[0] >= 0 else (0, 0))
        return RealBall(self.man, self.exp, rad[0], rad[1], self.prec, _rounded=True)

    def add_interval(self, lo: Fraction, hi: Fraction) -> "RealBall":
        """Ball containing ``self + t`` for every t in [lo, hi] (rational endpoints)."""
        centre = RealBall.exact((Fraction(lo) + Fraction(hi)) / 2, self.prec)
        return (self + centre).add_error((Fraction(hi) - Fraction(lo)) / 2)

    def union(self, other: "RealBall") -> "RealBall":
        lo = min(self.lower(), other.lower(), key=_dkey)
        hi = max(self.upper(), other.upper(), key=_dkey)
        return RealBall.from_endpoints(lo, hi, max(self.prec, other.prec))

    # --------------------------------------------------------------- display
    def mid_str(self, digits: int = 30) -> str:
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            v = decimal.Decimal(self.man)
            if self.exp >= 0:
                v = v * (decimal.Decimal(2) ** self.exp)
            else:
                v = v / (decimal.Decimal(2) ** (-self.exp))
            return str(+v)

    def rad_str(self, digits: int = 3) -> str:
        if self.rman == 0:
            return "0"
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            ctx.rounding = decimal.ROUND_UP
            v = decimal.Decimal(self.rman)
            if self.rexp >= 0:
                v = v * (decimal.Decimal(2) ** self.rexp)
            else:
                v = v / (decimal.Decimal(2) ** (-self.rexp))
            return str(+v)

    def to_json(self, digits: int = 40) -> dict:
        return {"midpoint": self.mid_str(digits), "radius": self.rad_str()}

    def __repr__(self) -> str:
        return f"[{self.mid_str(20)} +/- {self.rad_str()}]"


_dkey = cmp_to_key(lambda a, b: _cmp_dyadic(a[0], a[1], b[0], b[1]))


def _rmul_down(a: Dyadic, b: Dyadic) -> Dyadic:
    return _down(a[0] * b[0], a[1] + b[1])


def _frac_up(x: Fraction) -> Dyadic:
    if x <= 0:
        return 0, 0
    k = RAD_BITS + x.denominator.bit_length() - x.numerator.bit_length() + 2
    if k >= 0:
        m = -((-(x.numerator << k)) // x.denominator)
    else:
        m = -((-x.numerator) // (x.denominator << -k))
    return _up(m, -k)


def _round_mid(man: int, exp: int, prec: int) -> Tuple[int, int, Dyadic]:
    n = abs(man).bit_length()
    if n <= prec:
        return man, exp, (0, 0)
    s = n - prec
    return man >> s, exp + s, (1, exp + s)


def _coerce(x, prec: int):
    if isinstance(x, RealBall):
        return x
    if isinstance(x, (int, Fraction)):
        return RealBall.exact(x, prec)
    return NotImplemented


def ball(x: Union[int, Fraction, str, RealBall], prec: int = DEFAULT_PREC) -> RealBall:
    """Convenience constructor; strings are parsed as exact decimals."""
    if isinstance(x, str):
        x = Fraction(x)
    return RealBall.exact(x, prec) if not isinstance(x, RealBall) else x


def ball_min(a: RealBall, b: RealBall) -> RealBall:
    lo = min(a.lower(), b.lower(), key=_dkey)
    hi = min(a.upper(), b.upper(), key=_dkey)
    return RealBall.from_endpoints(lo, hi, max(a.prec, b.prec))


def ball_max(a: RealBall, b: RealBall) -> RealBall:
    lo = max(a.lower(), b.lower(), key=_dkey)
    hi = max(a.upper(), b.upper(), key=_dkey)
    return RealBall.from_endpoints(lo, hi, max(a.prec, b.prec))
