"""Parry's invariant density for T_beta and the digit-frequency series I and J.

Every series is summed in ball arithmetic up to a truncation N and the
remainder is added as a one-sided interval ``[0, tail]``.  Where two
expressions for the same quantity exist both are evaluated and intersected,
so a disagreement surfaces as :class:`IdentityViolated`.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .beta_expansion import GUARD_BITS, BetaNumber, orbit, sturmian_beta
from .errors import IdentityViolated, InequalityUnresolved, SlopeMismatch, SturmError
from .numeric.ball import RealBall
from .numeric.slope import Slope, precision_ceiling

DEFAULT_SEED = 20240601
BIRKHOFF_POINTS = 20
BIRKHOFF_LENGTH = 100_000


# ------------------------------------------------------------------ helpers
def _series(coeffs: Sequence[int], y: RealBall) -> RealBall:
    """sum_{n<N} c_n y^(n+1) by Horner's rule."""
    acc = RealBall.exact(0, y.prec)
    for c in reversed(coeffs):
        acc = (acc + int(c)) * y if c else acc * y
    return acc


def _geom_tail(y: RealBall, N: int, shift: int = 0) -> Fraction:
    """Upper bound for sum_{n>=N} y^(n+shift)."""
    return ((y ** (N + shift)) / (1 - y)).upper_fraction()


def _linear_tail(y: RealBall, N: int) -> Fraction:
    """Upper bound for sum_{n>=N} n y^(n+1) = y^(N+1) (N/(1-y) + y/(1-y)^2)."""
    one_minus = 1 - y
    t = (y ** (N + 1)) * (N / one_minus + y / (one_minus * one_minus))
    return t.upper_fraction()


def truncation_for(beta: BetaNumber, bits: int) -> int:
    """Smallest N whose (n+1)(b+1) beta^-(n+1) tail is below 2**-(bits+4)."""
    lb = math.log2(float(beta.value.lower_fraction()))
    b = beta.floor
    y = 2.0 ** -lb
    n = max(8, int((bits + 4) / lb))
    while True:
        # log2 of (b+1) y^(n+1) ((n+1)/(1-y) + y/(1-y)^2)
        lt = (math.log2(b + 1) - (n + 1) * lb
              + math.log2((n + 1) / (1 - y) + y / (1 - y) ** 2))
        if lt < -(bits + 4):
            return n
        n += max(1, n // 16)


def _with_tail(x: RealBall, tail: Fraction) -> RealBall:
    return x.add_interval(Fraction(0), tail) if tail else x


def _agree(a: RealBall, b: RealBall, what: str) -> RealBall:
    if not a.overlaps(b):
        raise IdentityViolated(f"two expressions for {what} are disjoint: {a!r} vs {b!r}")
    return a.intersect(b)


@dataclass
class _Data:
    y: RealBall
    digits: np.ndarray
    points: list
    tail_zero: bool


def _data(beta: BetaNumber, N: int, bits: int) -> _Data:
    rec = orbit(beta, N, out_bits=bits)
    if rec.truncated_at is not None:
        from .errors import PrecisionExhausted
        raise PrecisionExhausted(f"orbit of 1 truncated at step {rec.truncated_at}")
    y = beta.ball(bits + GUARD_BITS).with_prec(bits + GUARD_BITS).inverse()
    digits = np.asarray(rec.digits[:N], dtype=np.int64)
    tail_zero = rec.finite_at is not None and rec.finite_at <= N
    return _Data(y, digits, rec.points, tail_zero)


# --------------------------------------------------------- normalizing factor
def normalizing_factor(beta: BetaNumber, N: Optional[int] = None, bits: int = 128) -> RealBall:
    """F(beta) = sum T^n 1 / beta^n = sum (n+1) eps_n / beta^(n+1), both forms intersected."""
    N = N or truncation_for(beta, bits)
    d = _data(beta, N, bits)
    y = d.y
    # orbit form: sum_{n<N} p_n y^n
    acc = RealBall.exact(0, y.prec)
    for p in reversed(d.points[:N]):
        acc = acc * y + p
    orbit_form = acc if d.tail_zero else _with_tail(acc, _geom_tail(y, N))
    coeffs = (np.arange(1, N + 1, dtype=object) * d.digits.astype(object)).tolist()
    digit_form = _series(coeffs, y)
    if not d.tail_zero:
        b = beta.floor
        digit_form = _with_tail(digit_form, b * (_linear_tail(y, N) + _geom_tail(y, N, 1)))
    return _agree(orbit_form, digit_form, "F(beta)")


# ------------------------------------------------------------------ density
def density(beta: BetaNumber, x: Union[RealBall, Fraction, int, float], N: Optional[int] = None,
            bits: int = 128, F: Optional[RealBall] = None) -> RealBall:
    """h_beta(x) = (1/F) sum_{x < T^n 1} beta^-n.

    Terms whose comparison cannot be decided contribute ``[0, beta^-n]``.
    """
    N = N or truncation_for(beta, bits)
    if isinstance(x, float):
        x = Fraction(x)
    if not isinstance(x, RealBall):
        x = RealBall.exact(Fraction(x), bits + GUARD_BITS)
    d = _data(beta, N, bits)
    y = d.y
    total = RealBall.exact(0, y.prec)
    slack = Fraction(0)
    yn = RealBall.exact(1, y.prec)
    for p in d.points[:N]:
        if x < p:
            total = total + yn
        elif not x >= p:
            slack += yn.upper_fraction()
        yn = yn * y
    if not d.tail_zero:
        slack += _geom_tail(y, N)
    total = _with_tail(total, slack)
    F = F if F is not None else normalizing_factor(beta, N, bits)
    return total / F


def density_grid(beta: BetaNumber, xs: np.ndarray, N: int = 2000) -> np.ndarray:
    """Floating-point h_beta on a grid, for quadrature and plots."""
    rec = orbit(beta, N)
    pts = np.array([float(p.mid) for p in rec.points[:N]])
    w = float(beta.value.mid) ** -np.arange(N, dtype=float)
    F = float(np.dot(pts, w))
    order = np.argsort(pts)
    sp, sw = pts[order], w[order]
    # suffix sums: weight of all points strictly greater than x
    suffix = np.concatenate([np.cumsum(sw[::-1])[::-1], [0.0]])
    idx = np.searchsorted(sp, np.asarray(xs, dtype=float), side="right")
    return suffix[idx] / F


# ---------------------------------------------------------- series I and J
def _check_heights(alpha: Slope, digits: np.ndarray, b: int) -> np.ndarray:
    """Return ceil(alpha*n) for n < N after checking h_n = ceil(alpha(n+1))."""
    N = len(digits)
    ceil = np.array([alpha.ceil_affine(n) for n in range(N + 1)], dtype=np.int64)
    h = np.cumsum(digits == b)
    bad = np.flatnonzero(h != ceil[1:])
    if bad.size:
        n = int(bad[0])
        raise SlopeMismatch(
            f"h_{n} = {int(h[n])} but ceil(alpha*{n + 1}) = {int(ceil[n + 1])}")
    return ceil[:N]


def series_I(beta: BetaNumber, alpha: Slope, N: Optional[int] = None, bits: int = 128) -> RealBall:
    """I = sum ceil(alpha n) eps_n / beta^(n+1), cross-checked against
    sum_{n in J} beta^-n (T^n 1 - b/beta)."""
    N = N or truncation_for(beta, bits)
    b = beta.floor
    d = _data(beta, N, bits)
    ceil = _check_heights(alpha, d.digits, b)
    y = d.y
    main = _with_tail(_series((ceil * d.digits).tolist(), y), b * _linear_tail(y, N))
    # each swapped-form term is at most beta^-(n+1)
    b_over = y * b
    acc = RealBall.exact(0, y.prec)
    for n in range(N - 1, -1, -1):
        acc = acc * y
        if d.digits[n] == b:
            acc = acc + (d.points[n] - b_over)
    swapped = _with_tail(acc, _geom_tail(y, N, 1))
    return _agree(main, swapped, "I")


def series_J(beta: BetaNumber, alpha: Slope, a: int, b: int, N: Optional[int] = None,
             bits: int = 128) -> RealBall:
    """J = sum_{n in J} beta^-(n+1) + sum (n - ceil(alpha n)) eps_n / beta^(n+1),
    cross-checked against sum_J beta^-(n+1) + sum_{n in K} beta^-n (T^n 1 - a/beta)."""
    N = N or truncation_for(beta, bits)
    if beta.floor != b:
        raise SturmError(f"floor(beta) = {beta.floor} differs from b = {b}")
    d = _data(beta, N, bits)
    ceil = _check_heights(alpha, d.digits, b)
    y = d.y
    in_j = (d.digits == b).astype(np.int64)
    coeffs = in_j + (np.arange(N, dtype=np.int64) - ceil) * d.digits
    tail = (b + 1) * (_linear_tail(y, N) + _geom_tail(y, N, 1))
    main = _with_tail(_series(coeffs.tolist(), y), tail)
    a_over = y * a
    acc = RealBall.exact(0, y.prec)
    for n in range(N - 1, -1, -1):
        acc = acc * y
        if d.digits[n] == b:
            acc = acc + y
        elif d.digits[n] == a:
            acc = acc + (d.points[n] - a_over)
    swapped = _with_tail(acc, _geom_tail(y, N, 1))
    return _agree(main, swapped, "J")


# ------------------------------------------------------------------ Birkhoff
def birkhoff_frequencies(beta: BetaNumber, a: int, b: int, points: int = BIRKHOFF_POINTS,
                         length: int = BIRKHOFF_LENGTH, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Empirical (freq_a, freq_b) of d_beta(x) for seeded random x, shape (points, 2).

    Runs in double precision: a diagnostic, not a certificate.
    """
    rng = np.random.default_rng(seed)
    x = rng.random(points)
    bf = float(beta.value.mid)
    counts = np.zeros((points, 2), dtype=np.int64)
    for _ in range(length):
        y = bf * x
        dig = np.floor(y)
        x = y - dig
        counts[:, 0] += dig == a
        counts[:, 1] += dig == b
    return counts / length


# ------------------------------------------------------------------- report
def _ball_json(x: RealBall) -> Dict[str, str]:
    return x.to_json()


@dataclass
class FrequencyReport:
    alpha: Slope
    a: int
    b: int
    beta: BetaNumber
    F: RealBall
    I: RealBall
    J: RealBall
    mu_b: RealBall
    mu_a: RealBall
    defect_b: RealBall
    defect_a: RealBall
    case: str
    asserted: str
    N: int
    bits: int
    notes: list = field(default_factory=list)
    birkhoff: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"alpha": str(self.alpha), "a": self.a, "b": self.b,
               "beta": _ball_json(self.beta.value), "case": self.case,
               "asserted": self.asserted, "N": self.N, "bits": self.bits,
               "notes": list(self.notes)}
        for k in ("F", "I", "J", "mu_b", "mu_a", "defect_b", "defect_a"):
            out[k] = _ball_json(getattr(self, k))
        if self.birkhoff is not None:
            out["birkhoff"] = self.birkhoff
        return out


def proof_case(alpha: Slope, a: int, b: int) -> Tuple[str, str]:
    """(case label, defect that the case asserts)."""
    if a == 0:
        return "a=0", "defect_b"
    if b * alpha.ball(64) > 1:
        return "a>=1,b*alpha>1", "defect_b"
    return "a>=1,b*alpha<1", "defect_a"


def _assemble(alpha: Slope, a: int, b: int, bits: int, N: Optional[int]) -> FrequencyReport:
    beta = sturmian_beta(alpha, a, b, bits + GUARD_BITS)
    N = N or truncation_for(beta, bits)
    F = normalizing_factor(beta, N, bits)
    I = series_I(beta, alpha, N, bits)
    J = series_J(beta, alpha, a, b, N, bits)
    al = alpha.ball(bits + GUARD_BITS)
    mu_b, mu_a = I / F, J / F
    case, asserted = proof_case(alpha, a, b)
    notes = []
    if a == 0:
        notes.append("a = 0: J evaluated with the general formula; the K-sum vanishes")
    return FrequencyReport(alpha, a, b, beta, F, I, J, mu_b, mu_a, al - mu_b, (1 - al) - mu_a,
                           case, asserted, N, bits, notes)


def frequency_report(alpha: Slope, a: int, b: int, bits: int = 128, *, N: Optional[int] = None,
                     birkhoff: bool = False, seed: int = DEFAULT_SEED,
                     points: int = BIRKHOFF_POINTS, length: int = BIRKHOFF_LENGTH) -> FrequencyReport:
    """Certified mu_beta(a), mu_beta(b) and the strict defect for the matching proof case.

    Raises :class:`InequalityUnresolved` when the asserted defect is not
    certifiably positive at the precision ceiling.
    """
    ceiling = max(bits, precision_ceiling())
    while True:
        rep = _assemble(alpha, a, b, bits, N)
        defect = getattr(rep, rep.asserted)
        if defect.certainly_positive():
            break
        if defect.certainly_negative() or bits * 2 > ceiling:
            raise InequalityUnresolved(
                f"{rep.asserted} = {defect.mid_str(20)} +/- {defect.rad_str()} is not certifiably > 0")
        bits *= 2
    for name in ("mu_a", "mu_b"):
        m = getattr(rep, name)
        if m < 0 or m > 1:
            raise IdentityViolated(f"{name} outside [0, 1]: {m!r}")
    if birkhoff:
        freq = birkhoff_frequencies(rep.beta, a, b, points, length, seed)
        mu = np.array([float(rep.mu_a.mid), float(rep.mu_b.mid)])
        rep.birkhoff = {"seed": seed, "points": points, "length": length,
                        "mean": freq.mean(axis=0).tolist(),
                        "max_abs_error": float(np.abs(freq - mu).max())}
    return rep
