"""The acceptance battery: one function per criterion, each returning a
:class:`CriterionResult`.  Used by ``sturmbeta check acceptance`` and by the
test suite."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .beta_expansion import (BetaNumber, confine_orbit, d_beta, is_admissible, solve_beta,
                             sturmian_beta)
from .errors import FloorMismatch
from .mahler import identity_check
from .numeric.ball import RealBall
from .numeric.slope import (SQRT2_MINUS_1, SQRT3_MINUS_1_HALF, TAU_INV2, CFStream,
                            QuadraticSurd, Slope)
from .parry_measure import birkhoff_frequencies, frequency_report
from .words import (DigitWord, Order, characteristic, complexity, fibonacci_word,
                    is_balanced, lex_compare, lower_mechanical, rename, upper_mechanical)

FIB_34 = "0100101001001010010100100101001001"
UPPER_26 = "10100101001001010010100100"
LOWER_26 = "00100101001001010010100100"
TEST_SLOPES: Tuple[Slope, ...] = (TAU_INV2, SQRT2_MINUS_1, SQRT3_MINUS_1_HALF)
DIGIT_PAIRS = ((0, 1), (1, 3))
SMALL_SLOPE = QuadraticSurd(-2, 1, 5, 1)      # sqrt5 - 2, about 0.236
FREQUENCY_FAMILIES = ((TAU_INV2, 0, 1), (TAU_INV2, 1, 3), (SMALL_SLOPE, 1, 4))
SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: Optional[float]

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:g} s)" if self.budget else ""
        return f"[{status}] {self.number}. {self.name}: {self.detail}; {self.seconds:.2f} s{budget}"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3), "budget": self.budget}


def _timed(number: int, name: str, budget: Optional[float]):
    def wrap(fn: Callable[[], Tuple[bool, str]]) -> Callable[[], CriterionResult]:
        def run() -> CriterionResult:
            t = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t
            if budget is not None and dt >= budget:
                ok, detail = False, detail + "; over time budget"
            return CriterionResult(number, name, ok, detail, dt, budget)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


# ---------------------------------------------------------------- criteria
@_timed(1, "Fibonacci prefix", 1.0)
def fibonacci_prefix() -> Tuple[bool, str]:
    f = fibonacci_word(34).to_str()
    s = lower_mechanical(TAU_INV2, 0).to_str(34)
    c = characteristic(TAU_INV2).to_str(34)
    clauses = [f == FIB_34, f == s]
    detail = (f"fibonacci_word(34) {'=' if clauses[0] else '!='} displayed string; "
              f"lower_mechanical(tau^-2, 0) = {s} {'=' if clauses[1] else '!='} f "
              f"(characteristic(tau^-2) = f: {c == f})")
    return all(clauses), detail


@_timed(2, "Mechanical word bounds", 5.0)
def mechanical_bounds() -> Tuple[bool, str]:
    up = upper_mechanical(TAU_INV2, 0)
    lo = lower_mechanical(TAU_INV2, 0)
    ok = up.to_str(26) == UPPER_26 and lo.to_str(26) == LOWER_26
    bad = []
    for n in range(1, 1001):
        if lex_compare(lo, up, x_offset=0, y_offset=n) is not Order.LESS:
            bad.append(("0c", n))
        if lex_compare(up, up, x_offset=n, y_offset=0) is not Order.LESS:
            bad.append(("1c", n))
    return ok and not bad, f"prefixes match: {ok}; order violations for 1<=n<=1000: {len(bad)}"


@_timed(3, "Round trip", 60.0)
def round_trip() -> Tuple[bool, str]:
    done, skipped, bad = 0, [], []
    for alpha, (a, b) in itertools.product(TEST_SLOPES, DIGIT_PAIRS):
        try:
            beta = sturmian_beta(alpha, a, b, verify_depth=0)
        except FloorMismatch:
            skipped.append(f"({alpha},{a},{b})")
            continue
        word = beta.expansion_of_one()
        got = d_beta(beta, 1, 2000)
        if got.prefix(2000) != word.prefix(2000):
            bad.append(f"({alpha},{a},{b})")
        done += 1
    detail = f"{done} cases matched to 2000 digits" if not bad else f"mismatch: {bad}"
    if skipped:
        detail += f"; not realizable: {skipped}"
    return not bad and done > 0, detail


def _confined(alpha: Slope, a: int, b: int, n: int) -> Tuple[bool, str]:
    """Orbit balls inside [1 - (b-a)/beta - r, 1 + r] and diam_estimate within 1e-3 of (b-a)/beta."""
    beta = sturmian_beta(alpha, a, b)
    conf = confine_orbit(beta, n, rename(lower_mechanical(alpha, 0), a, b))
    low = 1 - (b - a) * beta.ball(256).inverse()
    inside = all(p.lower_fraction() >= low.lower_fraction() - p.rad
                 and p.upper_fraction() <= 1 + p.rad for p in conf.points)
    d = conf.running_max - conf.running_min
    target = (b - a) * beta.ball(256).inverse()
    in_range = (d.upper_fraction() >= target.lower_fraction() - Fraction(1, 1000)
                and d.lower_fraction() <= target.upper_fraction())
    ok = conf.ok and inside and in_range
    return ok, (f"({a},{b}): {len(conf.points)} balls inside, "
                f"{len(conf.settled_by_digits)} settled by digit order, "
                f"diam {float(d.mid):.6f} vs {b - a}/beta {float(target.mid):.6f}")


@_timed(4, "Orbit confinement", 120.0)
def orbit_confinement() -> Tuple[bool, str]:
    ok1, d1 = _confined(TAU_INV2, 0, 1, 10_000)
    ok5, d5 = _confined(TAU_INV2, 1, 3, 10_000)
    return ok1 and ok5, f"{d1}; {d5}"


@_timed(5, "Complexity and balance", 60.0)
def complexity_and_balance() -> Tuple[bool, str]:
    bad = []
    for alpha in TEST_SLOPES:
        w = lower_mechanical(alpha, 0)
        for n in range(1, 31):
            if complexity(w, n, 100_000) != n + 1:
                bad.append(f"P({alpha},{n})")
        if not is_balanced(w, 100_000):
            bad.append(f"unbalanced {alpha}")
    return not bad, "P(s,n)=n+1 for n<=30 and balanced at window 1e5" if not bad else str(bad)


def random_cf_slopes(rng: np.random.Generator, count: int) -> List[CFStream]:
    """Irrational slopes [0; a1..a6, (1)] with random partial quotients."""
    out = []
    for _ in range(count):
        head = (0,) + tuple(int(v) for v in rng.integers(1, 6, size=6))
        out.append(CFStream(head, (1,)))
    return out


def order_cases(rng: np.random.Generator, cases: int = 200):
    """Random (alpha, rho, rho'), (alpha, alpha') and (beta, gamma) instances.

    Pairs closer than 1e-3 are redrawn: a difference that small need not show
    up within the comparison depth."""
    intercepts, slopes, betas = [], [], []
    surds = TEST_SLOPES + (SMALL_SLOPE,)
    while len(intercepts) < cases:
        r1, r2 = (Fraction(int(v), 1000) for v in rng.integers(0, 1000, size=2))
        if r1 != r2:
            intercepts.append((surds[len(intercepts) % len(surds)], r1, r2))
    pool = random_cf_slopes(rng, 4 * cases)
    while len(slopes) < cases:
        i, j = (int(v) for v in rng.choice(len(pool), size=2, replace=False))
        if abs(float(pool[i]) - float(pool[j])) > 1e-3:
            slopes.append((pool[i], pool[j]))
    while len(betas) < cases:
        q = rng.integers(1, 1000, size=2)
        p = rng.integers(q + 1, 4 * q + 1)
        b1, b2 = Fraction(int(p[0]), int(q[0])), Fraction(int(p[1]), int(q[1]))
        if abs(b1 - b2) > Fraction(1, 1000):
            betas.append((b1, b2))
    return intercepts, slopes, betas


def rational_beta(x: Fraction) -> BetaNumber:
    """beta = x for a rational x > 1, with exact orbits."""
    return BetaNumber(RealBall.exact(x, 256), poly=(-x, Fraction(1)),
                      refiner=lambda bits: RealBall.exact(x, bits), label=str(x))


@_timed(6, "Order laws", None)
def order_laws() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    intercepts, slopes, betas = order_cases(rng)
    depth = 10_000
    v = {"intercept": 0, "slope": 0, "beta": 0}
    for alpha, r1, r2 in intercepts:
        o = lex_compare(lower_mechanical(alpha, r1), lower_mechanical(alpha, r2), depth)
        if o is not (Order.LESS if r1 < r2 else Order.GREATER):
            v["intercept"] += 1
    for a1, a2 in slopes:
        o = lex_compare(characteristic(a1), characteristic(a2), depth)
        if o is not (Order.LESS if float(a1) < float(a2) else Order.GREATER):
            v["slope"] += 1
    for b1, b2 in betas:
        o = lex_compare(rational_beta(b1).expansion_of_one(),
                        rational_beta(b2).expansion_of_one(), depth)
        if o is not (Order.LESS if b1 < b2 else Order.GREATER):
            v["beta"] += 1
    n = (len(intercepts), len(slopes), len(betas))
    return not any(v.values()), f"cases {n}; violations {v}"


@_timed(7, "Mahler identity", 30.0)
def identity() -> Tuple[bool, str]:
    gaps = []
    for a, b in DIGIT_PAIRS:
        rep = identity_check(TAU_INV2, a, b, 512)
        gaps.append(rep.max_gap)
    ok = all(g < Fraction(1, 10 ** 40) for g in gaps)
    return ok, "max pairwise gaps " + ", ".join(f"{float(g):.2e}" for g in gaps)


@_timed(8, "Frequency defects", 300.0)
def frequency_defects() -> Tuple[bool, str]:
    parts, ok = [], True
    for alpha, a, b in FREQUENCY_FAMILIES:
        rep = frequency_report(alpha, a, b)
        defect = getattr(rep, rep.asserted)
        good = defect.lower_fraction() > Fraction(1, 10 ** 6)
        freq = birkhoff_frequencies(rep.beta, a, b, 20, 100_000, SEED)
        mu = np.array([float(rep.mu_a.mid), float(rep.mu_b.mid)])
        err = float(np.abs(freq - mu).max())
        good = good and err < 1e-2
        ok = ok and good
        parts.append(f"{rep.case}: {rep.asserted} >= {float(defect.lower_fraction()):.4g}, "
                     f"birkhoff err {err:.2g}")
    return ok, "; ".join(parts)


def golden_language(w: Tuple[int, ...]) -> bool:
    """Brute force: every suffix of w is <= the quasi-greedy word 1010..."""
    q = (1, 0) * (len(w) // 2 + 1)
    return all(w[n:] <= q[:len(w) - n] for n in range(len(w)))


@_timed(9, "Parry admissibility oracle", 10.0)
def admissibility_oracle() -> Tuple[bool, str]:
    tau = solve_beta("11")
    bad, total = 0, 0
    for length in range(1, 13):
        for w in itertools.product((0, 1), repeat=length):
            total += 1
            if bool(is_admissible(DigitWord.finite(w), tau)) != golden_language(w):
                bad += 1
    return bad == 0, f"{total} words, {bad} disagreements"


CRITERIA: Dict[int, Callable[[], CriterionResult]] = {
    1: fibonacci_prefix, 2: mechanical_bounds, 3: round_trip, 4: orbit_confinement,
    5: complexity_and_balance, 6: order_laws, 7: identity, 8: frequency_defects,
    9: admissibility_oracle,
}


def run_all(only: Optional[List[int]] = None) -> List[CriterionResult]:
    return [CRITERIA[k]() for k in sorted(CRITERIA) if only is None or k in only]
