"""Beta-transformation dynamics, greedy expansions and the beta solver.

Three arithmetic routes are used, in order of preference:

* exact: when beta is a root of a known polynomial (integers, quadratic surds,
  finite expansions of one) orbit points are kept as polynomials in beta
  reduced modulo that polynomial, so hits on digit boundaries are decided
  exactly;
* word: when beta was solved from an expansion of one ``s`` that satisfies
  Parry's criterion, ``T^n 1 = (s_n + T^{n+1} 1) / beta`` is run backwards,
  which contracts errors instead of amplifying them;
* ball: forward iteration ``x -> beta*x - floor(beta*x)`` in ball arithmetic
  with the working precision sized from the number of steps and doubled on
  demand.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import FloorMismatch, NotExpansionOfOne, PrecisionExhausted, SturmError
from .numeric.ball import RealBall, ball_max, ball_min
from .numeric.slope import QuadraticSurd, Slope, precision_ceiling
from .words import (DigitWord, Order, first_difference, is_balanced, lex_compare, rename,
                    upper_mechanical)

Point = Union[int, Fraction, RealBall, Callable[[RealBall], RealBall]]

GUARD_BITS = 32
MAX_TERMS = 1_000_000
DEFAULT_BITS = 128
DEFAULT_VERIFY_DEPTH = 64


# ------------------------------------------------------------ exact algebra
class _QuotientRing:
    """Q[x] / (P) for a monic P; elements are coefficient tuples, low degree first."""

    def __init__(self, monic: Sequence[Fraction]):
        monic = tuple(Fraction(c) for c in monic)
        if monic[-1] != 1:
            raise ValueError("polynomial must be monic")
        self.low = monic[:-1]
        self.degree = len(self.low)

    def const(self, c) -> Tuple[Fraction, ...]:
        return (Fraction(c),) + (Fraction(0),) * (self.degree - 1)

    def mul_x(self, e: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
        top = e[-1]
        shifted = (Fraction(0),) + e[:-1]
        if top == 0:
            return shifted
        return tuple(s - top * c for s, c in zip(shifted, self.low))

    @staticmethod
    def is_const(e) -> bool:
        return all(c == 0 for c in e[1:])

    @staticmethod
    def sub_const(e, c):
        return (e[0] - c,) + tuple(e[1:])

    @staticmethod
    def evaluate(e, x: RealBall) -> RealBall:
        acc = RealBall.exact(0, x.prec)
        for c in reversed(e):
            acc = acc * x + RealBall.exact(c, x.prec)
        return acc


def _finite_head(word: DigitWord) -> Optional[Tuple[int, ...]]:
    """Digits of a word known to end in zeros, with trailing zeros stripped."""
    if word.is_finite:
        head = tuple(word.prefix(len(word)))
    elif word.finite_support is not None and word.finite_support[1] == 0:
        head = word.finite_support[0]
    else:
        return None
    while head and head[-1] == 0:
        head = head[:-1]
    return head


# --------------------------------------------------------------- BetaNumber
class BetaNumber:
    """A real beta > 1 known through a certified ball.

    Optional extras: ``poly`` (monic polynomial with root beta, enabling exact
    orbits), ``word`` (the expansion of one beta was solved from) and a
    ``refiner`` returning a ball of radius <= 2**-bits.
    """

    def __init__(self, value: RealBall, *, poly: Optional[Sequence[Fraction]] = None,
                 word: Optional[DigitWord] = None,
                 refiner: Optional[Callable[[int], RealBall]] = None, label: str = ""):
        if not value.certainly_positive() or not (value - 1).certainly_positive():
            raise SturmError(f"beta ball {value!r} is not certifiably > 1")
        self.value = value
        self.poly = tuple(Fraction(c) for c in poly) if poly is not None else None
        self.word = word
        self._refiner = refiner
        self.label = label
        self._lock = threading.Lock()
        self._balls: Dict[int, RealBall] = {}
        self._expansion: Optional[DigitWord] = None
        self._floor: Optional[int] = None

    # ------------------------------------------------------------ builders
    @classmethod
    def from_integer(cls, n: int) -> "BetaNumber":
        if n < 2:
            raise SturmError("integer beta must be >= 2")
        return cls(RealBall.exact(n), poly=(Fraction(-n), Fraction(1)),
                   refiner=lambda bits: RealBall.exact(n, bits), label=str(n))

    @classmethod
    def from_surd(cls, surd: QuadraticSurd) -> "BetaNumber":
        return cls(surd.ball(DEFAULT_BITS), poly=surd.minimal_polynomial(),
                   refiner=lambda bits: surd.ball(bits + 4), label=str(surd))

    @classmethod
    def from_slope(cls, x: Slope) -> "BetaNumber":
        if isinstance(x, QuadraticSurd):
            return cls.from_surd(x)
        if x.assumed:
            return cls(x.ball(DEFAULT_BITS), label=str(x))
        return cls(x.ball(DEFAULT_BITS), refiner=lambda bits: x.ball(bits + 4), label=str(x))

    # -------------------------------------------------------------- access
    @property
    def can_refine(self) -> bool:
        return self._refiner is not None

    def ball(self, bits: int) -> RealBall:
        """A ball for beta whose radius is at most 2**-bits when refinable."""
        if self._refiner is None:
            return self.value
        with self._lock:
            for b, v in self._balls.items():
                if b >= bits:
                    return v
        v = self._refiner(bits)
        with self._lock:
            self._balls[bits] = v
        return v

    @property
    def floor(self) -> int:
        """floor(beta), the largest digit."""
        if self._floor is None:
            f = self.value.floor()
            if f is None and self.poly is not None:
                r = self.value.upper_fraction()
                k = math.floor(r)
                if self._poly_value_is(k):
                    f = k
            bits = DEFAULT_BITS
            while f is None and self.can_refine and bits <= precision_ceiling():
                f = self.ball(bits).floor()
                bits *= 2
            if f is None:
                raise PrecisionExhausted("cannot certify floor(beta)")
            self._floor = f
        return self._floor

    def _poly_value_is(self, k: int) -> bool:
        return sum(c * Fraction(k) ** i for i, c in enumerate(self.poly)) == 0

    def log2_upper(self) -> float:
        return math.log2(float(self.value.upper_fraction()))

    def expansion_of_one(self) -> DigitWord:
        """Memoised d_beta(1) as an infinite word (finite expansions end in zeros)."""
        if self._expansion is None:
            if self.word is not None:
                self._expansion = self.word
            else:
                beta = self

                def block(start: int, stop: int) -> List[int]:
                    return _greedy(beta, 1, stop).digits[start:stop]

                self._expansion = DigitWord(block, alphabet=tuple(range(self.floor + 1)))
        return self._expansion

    def __repr__(self) -> str:
        return f"BetaNumber({self.label or ''} {self.value!r})"


# ------------------------------------------------------------ orbit engines
@dataclass
class _Run:
    digits: List[int]
    points: List[RealBall]
    truncated_at: Optional[int] = None
    finite_at: Optional[int] = None          # first n with T^n x = 0 exactly
    period: Optional[Tuple[int, int]] = None  # (preperiod, period) of the orbit, exact


def _as_start(x: Point, b: RealBall) -> RealBall:
    if callable(x):
        return x(b)
    if isinstance(x, RealBall):
        return x
    return RealBall.exact(Fraction(x), b.prec)


def _exact_run(beta: BetaNumber, x: Fraction, steps: int, out_bits: int) -> _Run:
    ring = _QuotientRing(beta.poly)
    e = ring.const(x)
    seen = {e: 0}
    digits: List[int] = []
    elems = [e]
    run = _Run(digits, [])
    n = 0
    while n < steps:
        y = ring.mul_x(e)
        if ring.is_const(y):
            d = math.floor(y[0])
        else:
            d = None
            for bits in _ladder(DEFAULT_BITS, precision_ceiling()):
                d = ring.evaluate(y, beta.ball(bits)).floor()
                if d is not None or not beta.can_refine:
                    break
            if d is None:
                run.truncated_at = n
                break
        e = ring.sub_const(y, d)
        digits.append(d)
        elems.append(e)
        n += 1
        if run.finite_at is None and ring.is_const(e) and e[0] == 0:
            run.finite_at = n
        if run.period is None:
            if e in seen:
                run.period = (seen[e], n - seen[e])
            else:
                seen[e] = n
        if run.period is not None:
            # the rest of the orbit is determined; extend by copying
            pre, per = run.period
            while n < steps:
                digits.append(digits[pre + (n - pre) % per])
                elems.append(elems[pre + (n + 1 - pre) % per])
                n += 1
            break
    b = beta.ball(out_bits + GUARD_BITS)
    cache: Dict[Tuple[Fraction, ...], RealBall] = {}
    for el in elems:
        if el not in cache:
            cache[el] = ring.evaluate(el, b).with_prec(out_bits + GUARD_BITS)
        run.points.append(cache[el])
    return run


def _clamp_unit(x: RealBall) -> RealBall:
    """Intersect an orbit ball with [0, 1], where every T_beta^n x lies."""
    if x.lower()[0] >= 0 and x.upper_fraction() <= 1:
        return x
    return x.intersect(RealBall.from_endpoints((0, 0), (1, 0), x.prec))


def _ladder(start: int, ceiling: int):
    bits = start
    while bits < ceiling:
        yield bits
        bits *= 2
    yield max(start, ceiling)


def _ball_run(beta: BetaNumber, x: Point, steps: int, out_bits: int) -> _Run:
    need = int(math.ceil(steps * beta.log2_upper())) + out_bits + GUARD_BITS
    ceiling = max(precision_ceiling(), 4 * need)
    run = None
    for bits in _ladder(need, ceiling):
        b = beta.ball(bits)
        if b.prec < bits:
            b = b.with_prec(bits)
        cur = _as_start(x, b).with_prec(bits)
        digits: List[int] = []
        points = [cur]
        run = _Run(digits, points)
        for n in range(steps):
            y = b * cur
            d = y.floor()
            if d is None:
                run.truncated_at = n
                break
            cur = _clamp_unit(y - d)
            digits.append(d)
            points.append(cur)
        if run.truncated_at is None or not beta.can_refine:
            break
    return run


def _word_run(beta: BetaNumber, steps: int, out_bits: int) -> _Run:
    """Orbit of 1 from the known expansion ``beta.word`` by the backward recursion."""
    s = beta.word
    bits = out_bits + GUARD_BITS
    b = beta.ball(bits)
    lb = max(math.log2(float(b.lower_fraction())), 1e-9)
    extra = int(math.ceil((bits + 2) / lb)) + 2
    digits = list(s.prefix(steps + extra))
    y = b.inverse()
    cur = RealBall.from_endpoints((0, 0), (1, 0), bits)     # T^m 1 lies in [0, 1]
    rev: List[RealBall] = []
    for n in range(steps + extra - 1, -1, -1):
        cur = _clamp_unit((cur + digits[n]) * y)
        if n <= steps:
            rev.append(cur)
    points = rev[::-1]
    points[0] = RealBall.exact(1, bits)
    return _Run(digits[:steps], points)


def _greedy(beta: BetaNumber, x: Point, steps: int, out_bits: int = 64) -> _Run:
    if beta.poly is not None and isinstance(x, (int, Fraction)):
        return _exact_run(beta, Fraction(x), steps, out_bits)
    return _ball_run(beta, x, steps, out_bits)


# ------------------------------------------------------------- operations
def t_beta_step(beta: BetaNumber, x: RealBall) -> Tuple[int, RealBall]:
    """One step of T_beta: (floor(beta*x), beta*x - floor(beta*x))."""
    y = beta.ball(x.prec) * x
    d = y.floor()
    if d is None:
        raise PrecisionExhausted("beta*x straddles an integer at this precision")
    return d, y - d


def d_beta(beta: BetaNumber, x: Point, n: int) -> DigitWord:
    """First n digits of the greedy beta-expansion of x in [0, 1]."""
    run = _greedy(beta, x, n)
    if run.truncated_at is not None:
        raise PrecisionExhausted(
            f"greedy expansion not certifiable beyond digit {run.truncated_at}")
    return DigitWord.finite(run.digits, alphabet=tuple(range(beta.floor + 1)))


class ExpansionStatus(enum.Enum):
    HOLDS = "holds"
    NOT_STRICT = "not_strict"
    FAILS = "fails"


@dataclass(frozen=True)
class ExpansionVerdict:
    status: ExpansionStatus
    depth: int
    witness: Optional[int] = None      # the shift n that breaks sigma^n(s) < s

    def __bool__(self) -> bool:
        return self.status is ExpansionStatus.HOLDS


def _strict_below(s: DigitWord, n: int, length: int, max_length: int) -> Optional[bool]:
    """Is sigma^n(s) < s?  None when the two agree on max_length digits."""
    while True:
        i = first_difference(s, s, length, n, 0)
        if i is not None:
            return s[n + i] < s[i]
        if length >= max_length:
            return None
        length = min(4 * length, max_length)


def is_expansion_of_one(s: DigitWord, depth: int = 1000, max_compare: Optional[int] = None
                        ) -> ExpansionVerdict:
    """Check sigma^n(s) < s for 1 <= n <= depth.

    Each shift is compared over ``depth`` digits, extended up to
    ``max_compare`` (default 64 * depth) while the two words still agree.
    Finite and periodic words are decided exactly.
    """
    head = _finite_head(s)
    if head is not None:
        if not head or head[0] == 0:
            return ExpansionVerdict(ExpansionStatus.FAILS, depth, 0)
        padded = DigitWord.padded(head)
        for n in range(1, len(head)):
            below = _strict_below(padded, n, len(head), len(head))
            if below is None:
                return ExpansionVerdict(ExpansionStatus.NOT_STRICT, depth, n)
            if not below:
                return ExpansionVerdict(ExpansionStatus.FAILS, depth, n)
        return ExpansionVerdict(ExpansionStatus.HOLDS, depth)
    if s[0] == 0:
        return ExpansionVerdict(ExpansionStatus.FAILS, depth, 0)
    if s.period is not None:
        p = len(s.period)
        for n in range(1, p + 1):
            below = _strict_below(s, n, p, p)
            if below is None:
                return ExpansionVerdict(ExpansionStatus.NOT_STRICT, depth, n)
            if not below:
                return ExpansionVerdict(ExpansionStatus.FAILS, depth, n)
    max_compare = max_compare or 64 * depth
    for n in range(1, depth + 1):
        below = _strict_below(s, n, depth, max_compare)
        if below is None:
            return ExpansionVerdict(ExpansionStatus.NOT_STRICT, depth, n)
        if not below:
            return ExpansionVerdict(ExpansionStatus.FAILS, depth, n)
    return ExpansionVerdict(ExpansionStatus.HOLDS, depth)


def quasi_greedy(d: DigitWord | Sequence[int] | str) -> DigitWord:
    """Periodic word with period d_1 ... d_{m-1} (d_m - 1)."""
    if isinstance(d, DigitWord):
        head = _finite_head(d)
        if head is None:
            raise ValueError("quasi_greedy needs a finite word")
    elif isinstance(d, str):
        head = tuple(int(c) for c in d)
    else:
        head = tuple(d)
    while head and head[-1] == 0:
        head = head[:-1]
    if not head:
        raise ValueError("empty expansion")
    period = list(head[:-1]) + [head[-1] - 1]
    return DigitWord.periodic(period, alphabet=tuple(range(max(head) + 1)))


def _expansion_is_finite(beta: BetaNumber, depth: int) -> Optional[Tuple[int, ...]]:
    if beta.word is not None:
        return _finite_head(beta.word)
    if beta.poly is not None:
        run = _exact_run(beta, Fraction(1), depth, 64)
        if run.finite_at is not None:
            return tuple(run.digits[:run.finite_at])
    return None


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    depth: int
    violation: Optional[int] = None    # first n with sigma^n(s) above the bound
    bound: str = "d_beta(1)"

    def __bool__(self) -> bool:
        return self.admissible


def is_admissible(s: DigitWord, beta: BetaNumber, depth: int = 1000) -> AdmissibilityVerdict:
    """Parry's criterion: sigma^n(s) <= d_beta(1) (or its quasi-greedy form) for n <= depth."""
    head = _expansion_is_finite(beta, depth)
    if head is not None:
        bound = quasi_greedy(head)
        label = "quasi-greedy"
    else:
        bound = beta.expansion_of_one()
        label = "d_beta(1)"
    s_head = _finite_head(s)
    if s_head is not None:
        s = DigitWord.padded(s_head)
        shifts = range(0, min(depth, len(s_head)) + 1) if s_head else range(0)
        compare = len(s_head) + 1
    else:
        shifts = range(0, depth + 1)
        compare = depth
    for n in shifts:
        i = first_difference(s, bound, compare, n, 0)
        if i is not None and s[n + i] > bound[i]:
            return AdmissibilityVerdict(False, depth, n, label)
    return AdmissibilityVerdict(True, depth, None, label)


# ------------------------------------------------------------ beta solver
def _g_eval(digits: Sequence[int], x: RealBall, n_terms: int, tail_b: int,
            with_tail: bool) -> RealBall:
    """sum_{n<N} s_n x^-(n+1) - 1, plus the tail interval [0, b / (x^N (x-1))]."""
    y = x.inverse()
    acc = RealBall.exact(0, x.prec)
    for n in range(n_terms - 1, -1, -1):
        d = digits[n]
        acc = (acc + d) * y if d else acc * y
    acc = acc - 1
    if with_tail:
        xl = RealBall.exact(x.lower_fraction(), 64)
        tail = (y.with_prec(64) ** n_terms) * tail_b / (xl - 1)
        half = tail.mul_2exp(-1)
        acc = (acc + half).add_error(half)
    return acc


def _g_prime(digits: Sequence[int], x: RealBall, n_terms: int) -> RealBall:
    y = x.inverse()
    acc = RealBall.exact(0, x.prec)
    for n in range(n_terms - 1, -1, -1):
        acc = (acc + (n + 1) * digits[n]) * y
    return -(acc * y)


def _terms_for(bits: int, x_low: float, b: int) -> int:
    lx = math.log2(x_low)
    n = (bits + 4 + math.log2(b) - math.log2(x_low - 1)) / lx
    return min(MAX_TERMS, max(8, int(math.ceil(n))))


class _RootSolver:
    """Certified root of G(x) = sum s_n x^-(n+1) - 1 on [b, b+1]."""

    def __init__(self, word: DigitWord, head: Optional[Tuple[int, ...]]):
        self.word = word
        self.head = head
        self.b = word[0]
        self._mid: Optional[RealBall] = None
        self._mid_bits = 0
        self._lock = threading.Lock()

    def _digits(self, n: int) -> Sequence[int]:
        if self.head is not None:
            return self.head
        return self.word.prefix(n)

    def _n_terms(self, bits: int, x_low: float) -> Tuple[int, bool]:
        if self.head is not None:
            return len(self.head), False
        return _terms_for(bits, x_low, self.b), True

    def g(self, x: RealBall, bits: int) -> RealBall:
        x = x.with_prec(bits)
        n, tail = self._n_terms(bits, float(x.lower_fraction()))
        return _g_eval(self._digits(n), x, n, self.b, tail)

    def _bisect(self) -> RealBall:
        lo, hi = Fraction(self.b), Fraction(self.b + 1)
        while hi - lo > Fraction(1, 1 << 40):
            mid = (lo + hi) / 2
            s = self.g(RealBall.exact(mid, 96), 96).sign()
            if s is None or s == 0:
                return RealBall.exact(mid, 96)
            if s > 0:
                lo = mid
            else:
                hi = mid
        return RealBall.exact((lo + hi) / 2, 96)

    def _newton_step(self, x: RealBall, bits: int) -> RealBall:
        work = bits + GUARD_BITS
        g = self.g(x.with_prec(work), work)
        half = bits // 2 + GUARD_BITS
        n, _ = self._n_terms(half, float(x.mid))
        dg = _g_prime(self._digits(n), x.with_prec(half), n)
        step = RealBall.exact(g.mid, work) / RealBall.exact(dg.mid, half)
        nxt = x.with_prec(work) - step
        return RealBall(nxt.man, nxt.exp, 0, 0, work, _rounded=True)

    def _newton(self, target: int) -> RealBall:
        with self._lock:
            if self._mid is not None and self._mid_bits >= target:
                return self._mid
            x = self._mid if self._mid is not None else self._bisect()
            bits = max(self._mid_bits, 40)
            while bits < target:
                bits = min(2 * bits, target)
                x = self._newton_step(x, bits)
            x = self._newton_step(x, target)
            self._mid, self._mid_bits = x, target
            return x

    def solve(self, bits: int) -> RealBall:
        """Newton proposes the midpoint; the sign bracket G(m-r) > 0 > G(m+r) certifies it."""
        if self.head is not None and len(self.head) == 1:
            return RealBall.exact(self.head[0], bits)
        m = self._newton(bits + 8)
        r = Fraction(1, 1 << (bits + 2))
        for _ in range(60):
            lo = RealBall.exact(m.mid - r, bits + GUARD_BITS + 16)
            hi = RealBall.exact(m.mid + r, bits + GUARD_BITS + 16)
            if (self.g(lo, bits + GUARD_BITS + 16).certainly_positive()
                    and self.g(hi, bits + GUARD_BITS + 16).certainly_negative()):
                return RealBall.exact(m.mid, bits + 8).add_error(r).with_prec(bits + 8)
            r *= 2
        raise PrecisionExhausted("could not certify a bracket around the root")


def solve_beta(s: DigitWord | str, bits: int = DEFAULT_BITS, *,
               verify_depth: int = DEFAULT_VERIFY_DEPTH, check_depth: int = 1000) -> BetaNumber:
    """The unique beta with d_beta(1) = s, enclosed in a ball of radius <= 2**-bits.

    ``s`` must satisfy sigma^n(s) < s (checked for n <= check_depth); the
    greedy re-expansion of one is compared with ``s`` for ``verify_depth``
    digits.
    """
    if isinstance(s, str):
        s = DigitWord.padded(s)
    verdict = is_expansion_of_one(s, check_depth)
    if not verdict:
        raise NotExpansionOfOne(
            f"sigma^{verdict.witness}(s) is not strictly below s ({verdict.status.value})")
    head = _finite_head(s)
    solver = _RootSolver(s, head)
    poly = None
    if head is not None:
        m = len(head)
        # x^m - sum d_i x^(m-i)
        coeffs = [Fraction(0)] * (m + 1)
        coeffs[m] = Fraction(1)
        for i, d in enumerate(head, start=1):
            coeffs[m - i] -= d
        poly = tuple(coeffs)
        word = DigitWord.padded(head)
    else:
        word = s
    value = solver.solve(bits)
    beta = BetaNumber(value, poly=poly, word=word, refiner=solver.solve,
                      label=f"d_beta(1)={s.to_str(12) if not s.is_finite else s.to_str()}")
    beta._balls[bits] = value
    if verify_depth:
        _verify_expansion(beta, word, verify_depth)
    return beta


def _verify_expansion(beta: BetaNumber, s: DigitWord, depth: int) -> None:
    run = _greedy(beta, 1, depth)
    if run.truncated_at is not None:
        raise PrecisionExhausted(f"re-expansion of one stalled at digit {run.truncated_at}")
    want = list(s.prefix(depth))
    if run.digits != want:
        k = next(i for i, (a, b) in enumerate(zip(run.digits, want)) if a != b)
        raise NotExpansionOfOne(f"greedy expansion of one differs from s at digit {k}")


def sturmian_beta(alpha: Slope, a: int = 0, b: int = 1, bits: int = DEFAULT_BITS,
                  **kwargs) -> BetaNumber:
    """Solve d_beta(1) = D(1 c_alpha) with D(0) = a, D(1) = b."""
    if not 0 <= a < b:
        raise SturmError("need 0 <= a < b")
    word = rename(upper_mechanical(alpha, 0), a, b)
    beta = solve_beta(word, bits, **kwargs)
    if beta.floor != b:
        raise FloorMismatch(f"floor(beta) = {beta.floor} but the word starts with {b}")
    beta.label = f"sturmian({alpha},{a},{b})"
    beta.slope = alpha
    beta.digit_pair = (a, b)
    return beta


# ----------------------------------------------------------------- orbits
@dataclass
class OrbitRecord:
    points: List[RealBall]
    digits: List[int]
    running_min: RealBall
    running_max: RealBall
    truncated_at: Optional[int] = None
    finite_at: Optional[int] = None
    period: Optional[Tuple[int, int]] = None
    method: str = "ball"

    def to_csv(self) -> str:
        lines = ["n,digit,midpoint,radius"]
        for n, p in enumerate(self.points):
            d = self.digits[n] if n < len(self.digits) else ""
            lines.append(f"{n},{d},{p.mid_str(25)},{p.rad_str()}")
        if self.truncated_at is not None:
            lines.append(f"# truncated at step {self.truncated_at}: precision exhausted")
        return "\n".join(lines) + "\n"


def orbit(beta: BetaNumber, n: int, out_bits: int = 64) -> OrbitRecord:
    """T_beta^k 1 for 0 <= k <= n as certified balls."""
    if beta.poly is not None:
        run, method = _exact_run(beta, Fraction(1), n, out_bits), "exact"
    elif beta.word is not None:
        run, method = _word_run(beta, n, out_bits), "word"
    else:
        run, method = _ball_run(beta, 1, n, out_bits), "ball"
    pts = run.points
    lo = hi = pts[0]
    for p in pts[1:]:
        lo = ball_min(lo, p)
        hi = ball_max(hi, p)
    return OrbitRecord(pts, run.digits, lo, hi, run.truncated_at, run.finite_at,
                       run.period, method)


def diam_estimate(beta: BetaNumber, n: int) -> RealBall:
    """running max - running min of the first n+1 orbit points (a lower bound on diam)."""
    rec = orbit(beta, n)
    return rec.running_max - rec.running_min


def word_value(word: DigitWord, beta: RealBall, bits: int) -> RealBall:
    """sum_n x_n beta^-(n+1) with the tail bounded by max digit / (beta^N (beta - 1))."""
    lb = math.log2(float(beta.lower_fraction()))
    N = int((bits + 8) / lb) + 8
    digits = word.prefix(N)
    y = beta.with_prec(bits + GUARD_BITS).inverse()
    acc = RealBall.exact(0, y.prec)
    for d in reversed(digits):
        acc = (acc + d) * y if d else acc * y
    top = max(max(digits), max(word.alphabet or (0,)))
    tail = (top * y ** N / (beta.with_prec(64) - 1)).upper_fraction()
    return acc.add_interval(Fraction(0), tail)


@dataclass
class Confinement:
    """Orbit balls checked against [lower, 1].

    Balls that overlap the bound are settled by comparing sigma^n(d_beta(1))
    with the expansion of the bound; the greedy expansion is increasing in
    x, so the digit order is the order of the points."""
    points: List[RealBall]
    lower: RealBall
    settled_by_digits: List[int]
    violations: List[int]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def running_min(self) -> RealBall:
        lo = self.points[0]
        for p in self.points[1:]:
            lo = ball_min(lo, p)
        return lo

    @property
    def running_max(self) -> RealBall:
        hi = self.points[0]
        for p in self.points[1:]:
            hi = ball_max(hi, p)
        return hi


def confine_orbit(beta: BetaNumber, n: int, lower_word: DigitWord, *, depth: int = 100_000,
                  out_bits: int = 64) -> Confinement:
    """Certify lower <= T^k 1 <= 1 for k <= n, where lower has greedy expansion lower_word."""
    rec = orbit(beta, n, out_bits)
    # the bound is computed far more precisely than the orbit balls it tightens
    lower_bits = 2 * out_bits + 4 * GUARD_BITS
    lower = word_value(lower_word, beta.ball(lower_bits + GUARD_BITS), lower_bits)
    s = beta.expansion_of_one()
    lo_end = lower.lower()
    points, settled, bad = [], [], []
    for k, p in enumerate(rec.points):
        if not (p >= lower):
            if p < lower:
                bad.append(k)
            else:
                o = lex_compare(s, lower_word, depth, k, 0)
                if o is Order.LESS:
                    bad.append(k)
                else:
                    settled.append(k)
                    p = RealBall.from_endpoints(lo_end, p.upper(), lower.prec)
        if p.upper_fraction() > 1:
            p = RealBall.from_endpoints(p.lower(), (1, 0), max(p.prec, lower.prec))
        points.append(p)
    return Confinement(points, lower, settled, bad)


# --------------------------------------------------------- Sturmian checks
def _has_small_period(a: np.ndarray, max_period: int) -> Optional[int]:
    n = len(a)
    start = n // 3
    for p in range(1, max_period + 1):
        if start + p >= n:
            break
        if np.array_equal(a[start + p:], a[start:n - p]):
            return p
    return None


@dataclass(frozen=True)
class SturmianEvidence:
    sturmian: bool
    depth: int
    maximal: Optional[bool] = None
    letters: Tuple[int, ...] = ()
    balanced: Optional[bool] = None
    period: Optional[int] = None
    orbit_min_ok: Optional[bool] = None
    reason: str = ""

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def is_sturmian_number(beta: BetaNumber, depth: int = 2000) -> SturmianEvidence:
    """Depth-bounded evidence that d_beta(1) is Sturmian over {a, floor(beta)}."""
    head = _expansion_is_finite(beta, depth)
    if head is not None:
        return SturmianEvidence(False, depth, reason=f"finite expansion d_beta(1) = {''.join(map(str, head))}")
    word = beta.expansion_of_one()
    arr = word.array(depth)
    letters = tuple(int(v) for v in np.unique(arr))
    b = beta.floor
    if len(letters) != 2 or letters[1] != b:
        return SturmianEvidence(False, depth, letters=letters,
                                reason="d_beta(1) is not over a two-letter alphabet {a, floor(beta)}")
    bal = is_balanced(DigitWord.finite(arr.tolist()), depth)
    period = _has_small_period(arr, depth // 3)
    if not bal or period is not None:
        return SturmianEvidence(False, depth, letters=letters, balanced=bal.balanced,
                                period=period, reason="unbalanced" if not bal else "periodic")
    a = letters[0]
    rec = orbit(beta, depth)
    bound = 1 - beta.ball(128).inverse()
    orbit_ok = not any(p < bound for p in rec.points)
    maximal = (a == b - 1)
    return SturmianEvidence(True, depth, maximal=maximal, letters=letters, balanced=True,
                            period=None, orbit_min_ok=orbit_ok,
                            reason="consistent to depth %d" % depth)


# -------------------------------------------------------- class evidence
class ClassVerdict(enum.Enum):
    C1_DETECTED = "C1_detected"
    C2_DETECTED = "C2_detected"
    C3_CONSISTENT = "C3_consistent"
    C4_CONSISTENT = "C4_consistent"
    C5_CONSISTENT = "C5_consistent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ClassEvidence:
    depth: int
    verdict: ClassVerdict
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"depth": self.depth, "verdict": self.verdict.value, "witness": self.witness}


def _max_zero_run(a: np.ndarray) -> Tuple[int, int]:
    """Longest run of zeros and the index where it starts."""
    best, best_at, cur = 0, -1, 0
    for i, v in enumerate(a.tolist()):
        cur = cur + 1 if v == 0 else 0
        if cur > best:
            best, best_at = cur, i - cur + 1
    return best, best_at


def missing_factor(beta: BetaNumber, depth: int, max_len: int = 12) -> Optional[str]:
    """Shortest (then lexicographically least) admissible word absent from d_beta(1)."""
    d = beta.expansion_of_one()
    dp = d.prefix(max_len)
    text = "".join(map(str, d.prefix(depth))) if beta.floor < 10 else None
    if text is None:
        return None
    words = [()]
    for n in range(1, max_len + 1):
        nxt = []
        for w in words:
            for c in range(beta.floor + 1):
                u = w + (c,)
                # every suffix of u must be <= the prefix of d_beta(1) of its length
                if all(u[k:] <= dp[:n - k] for k in range(n)):
                    nxt.append(u)
        words = nxt
        for u in words:
            s = "".join(map(str, u))
            if s not in text:
                return s
    return None


def classify(beta: BetaNumber, depth: int = 1000) -> ClassEvidence:
    """Finite-depth evidence for Blanchard's classes."""
    if beta.poly is not None:
        run = _exact_run(beta, Fraction(1), depth, 64)
        if run.finite_at is not None:
            return ClassEvidence(depth, ClassVerdict.C1_DETECTED,
                                 {"d_beta(1)": "".join(map(str, run.digits[:run.finite_at]))})
        if run.period is not None:
            pre, per = run.period
            return ClassEvidence(depth, ClassVerdict.C2_DETECTED,
                                 {"preperiod": "".join(map(str, run.digits[:pre])),
                                  "period": "".join(map(str, run.digits[pre:pre + per]))})
        if run.truncated_at is not None:
            return ClassEvidence(depth, ClassVerdict.INCONCLUSIVE,
                                 {"truncated_at": run.truncated_at})
    else:
        head = _expansion_is_finite(beta, depth)
        if head is not None:
            return ClassEvidence(depth, ClassVerdict.C1_DETECTED,
                                 {"d_beta(1)": "".join(map(str, head))})
    arr = beta.expansion_of_one().array(depth)
    run_len, run_at = _max_zero_run(arr)
    witness = {"max_zero_run": run_len, "max_zero_run_at": run_at}
    period = _has_small_period(arr, depth // 3)
    if period is not None:
        witness["apparent_period"] = period
        return ClassEvidence(depth, ClassVerdict.INCONCLUSIVE, witness)
    missing = missing_factor(beta, depth)
    if missing is not None:
        witness["missing_factor"] = missing
    stable = run_at < depth // 2
    if stable:
        return ClassEvidence(depth, ClassVerdict.C3_CONSISTENT, witness)
    if missing is not None:
        return ClassEvidence(depth, ClassVerdict.C4_CONSISTENT, witness)
    return ClassEvidence(depth, ClassVerdict.C5_CONSISTENT, witness)
