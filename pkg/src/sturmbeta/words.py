"""Finite and infinite words over small integer alphabets.

Infinite words are memoising generators: digits are produced in blocks and
cached in an append-only prefix.  Equality and order between infinite words
are only ever decided up to a stated depth.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .numeric.slope import Intercept, Slope

Block = Callable[[int, int], Sequence[int]]

DEFAULT_WINDOW = 10_000
DEFAULT_DEPTH = 10_000
DEFAULT_BALANCE_LENGTH = 256


class DigitWord:
    """A finite word, or an infinite word generated block by block.

    ``block(start, stop)`` must return the digits at positions
    ``start, ..., stop - 1``; it is only ever called with ``start`` equal to
    the current memoised length.
    """

    #: (head, fill) when the word is known to be ``head`` followed by ``fill`` forever
    finite_support: Optional[Tuple[Tuple[int, ...], int]] = None
    period: Optional[Tuple[int, ...]] = None

    def __init__(self, block: Optional[Block] = None, *, digits: Optional[Sequence[int]] = None,
                 alphabet: Optional[Sequence[int]] = None, name: str = ""):
        if (block is None) == (digits is None):
            raise ValueError("give exactly one of block or digits")
        self._block = block
        self._memo: List[int] = list(digits) if digits is not None else []
        self._finite = digits is not None
        self._lock = threading.Lock()
        if alphabet is None:
            alphabet = sorted(set(self._memo)) if self._finite else (0, 1)
        self.alphabet: Tuple[int, ...] = tuple(alphabet)
        self.name = name
        if self._finite and any(d not in self.alphabet for d in self._memo):
            raise ValueError("digit outside the declared alphabet")

    # -------------------------------------------------------------- builders
    @classmethod
    def finite(cls, digits: Iterable[int] | str, alphabet=None) -> "DigitWord":
        if isinstance(digits, str):
            digits = [int(c) for c in digits]
        return cls(digits=list(digits), alphabet=alphabet)

    @classmethod
    def padded(cls, digits: Iterable[int] | str, fill: int = 0, alphabet=None) -> "DigitWord":
        """Infinite word ``digits`` followed by ``fill`` forever."""
        if isinstance(digits, str):
            digits = [int(c) for c in digits]
        head = list(digits)
        if alphabet is None:
            alphabet = sorted(set(head) | {fill})

        def block(start: int, stop: int) -> List[int]:
            return [head[i] if i < len(head) else fill for i in range(start, stop)]

        w = cls(block, alphabet=alphabet)
        w.finite_support = (tuple(head), fill)
        return w

    @classmethod
    def periodic(cls, period: Sequence[int], alphabet=None) -> "DigitWord":
        period = list(period)
        if alphabet is None:
            alphabet = sorted(set(period))
        w = cls(lambda a, b: [period[i % len(period)] for i in range(a, b)], alphabet=alphabet)
        w.period = tuple(period)
        return w

    # ---------------------------------------------------------------- access
    @property
    def is_finite(self) -> bool:
        return self._finite

    def __len__(self) -> int:
        if not self._finite:
            raise TypeError("infinite word has no length")
        return len(self._memo)

    def _ensure(self, n: int) -> None:
        if n <= len(self._memo):
            return
        if self._finite:
            raise IndexError(f"finite word of length {len(self._memo)} has no prefix of length {n}")
        with self._lock:
            have = len(self._memo)
            if n <= have:
                return
            # grow geometrically so repeated small requests stay cheap
            target = max(n, 2 * have, 64)
            new = list(self._block(have, target))
            if len(new) != target - have:
                raise RuntimeError("block generator returned the wrong number of digits")
            self._memo.extend(new)

    def prefix(self, n: int) -> Tuple[int, ...]:
        self._ensure(n)
        return tuple(self._memo[:n])

    def array(self, n: int, start: int = 0) -> np.ndarray:
        self._ensure(start + n)
        return np.fromiter(self._memo[start:start + n], dtype=np.int64, count=n)

    def __getitem__(self, i):
        if isinstance(i, slice):
            if i.stop is None:
                raise ValueError("open slice of a word")
            self._ensure(i.stop)
            return tuple(self._memo[i])
        if i < 0:
            raise IndexError("negative index")
        self._ensure(i + 1)
        return self._memo[i]

    def to_str(self, n: Optional[int] = None) -> str:
        if n is None:
            n = len(self)
        return "".join(str(d) for d in self.prefix(n))

    def __str__(self) -> str:
        return self.to_str() if self._finite else self.to_str(32) + "..."

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<DigitWord{label} {self}>"

    # ---------------------------------------------------------- derived words
    def map(self, fn: Callable[[int], int], alphabet: Sequence[int]) -> "DigitWord":
        if self._finite:
            return DigitWord(digits=[fn(d) for d in self._memo], alphabet=alphabet)
        return DigitWord(lambda a, b: [fn(d) for d in self[a:b]], alphabet=alphabet)

    def drop(self, k: int) -> "DigitWord":
        if self._finite:
            return DigitWord(digits=self._memo[k:], alphabet=self.alphabet)
        return DigitWord(lambda a, b: self[a + k:b + k], alphabet=self.alphabet)

    def prepend(self, digits: Sequence[int]) -> "DigitWord":
        head = list(digits)
        alphabet = sorted(set(self.alphabet) | set(head))
        if self._finite:
            return DigitWord(digits=head + self._memo, alphabet=alphabet)
        h = len(head)

        def block(a: int, b: int) -> List[int]:
            out = [head[i] for i in range(a, min(b, h))]
            if b > h:
                out.extend(self[max(a, h) - h:b - h])
            return out

        return DigitWord(block, alphabet=alphabet)


# ------------------------------------------------------------ mechanical words
def _mechanical_block(alpha: Slope, rho: Intercept, upper: bool) -> Block:
    op = alpha.ceil_affine if upper else alpha.floor_affine

    def block(start: int, stop: int) -> List[int]:
        vals = [op(n, rho) for n in range(start, stop + 1)]
        return [vals[i + 1] - vals[i] for i in range(stop - start)]

    return block


@lru_cache(maxsize=256)
def lower_mechanical(alpha: Slope, rho: Intercept = 0) -> DigitWord:
    """``s(n) = floor(alpha*(n+1) + rho) - floor(alpha*n + rho)``."""
    return DigitWord(_mechanical_block(alpha, rho, upper=False), name=f"s[{alpha},{rho}]")


@lru_cache(maxsize=256)
def upper_mechanical(alpha: Slope, rho: Intercept = 0) -> DigitWord:
    """``s'(n) = ceil(alpha*(n+1) + rho) - ceil(alpha*n + rho)``."""
    return DigitWord(_mechanical_block(alpha, rho, upper=True), name=f"s'[{alpha},{rho}]")


@lru_cache(maxsize=256)
def characteristic(alpha: Slope) -> DigitWord:
    """The characteristic word c_alpha, i.e. s_{alpha,0} with its first letter dropped."""
    w = lower_mechanical(alpha, 0).drop(1)
    w.name = f"c[{alpha}]"
    return w


def fibonacci_word(n: int) -> DigitWord:
    """Length-n prefix of the limit of f0 = 0, f1 = 01, f_{k+2} = f_{k+1} f_k."""
    a, b = "0", "01"
    while len(b) < n:
        a, b = b, b + a
    return DigitWord.finite(b[:n] if n > 1 else a[:n], alphabet=(0, 1))


# ------------------------------------------------------------- combinatorics
def height(w: DigitWord | Sequence[int]) -> int:
    """Number of occurrences of the letter 1."""
    digits = w.prefix(len(w)) if isinstance(w, DigitWord) else w
    return sum(1 for d in digits if d == 1)


def slope_of(w: DigitWord | Sequence[int]) -> Fraction:
    digits = w.prefix(len(w)) if isinstance(w, DigitWord) else tuple(w)
    if not digits:
        raise ValueError("slope of the empty word")
    return Fraction(height(digits), len(digits))


def _window(w: DigitWord, window: Optional[int]) -> int:
    if w.is_finite:
        return len(w) if window is None else min(window, len(w))
    return DEFAULT_WINDOW if window is None else window


@dataclass(frozen=True)
class FactorSet:
    length: int
    factors: frozenset

    def __len__(self) -> int:
        return len(self.factors)

    def to_json(self) -> list:
        return sorted(self.factors)


def factor_set(w: DigitWord, n: int, window: Optional[int] = None) -> FactorSet:
    """All distinct length-n factors of the length-``window`` prefix."""
    window = _window(w, window)
    if window < n:
        raise ValueError("window must be at least n")
    s = w.to_str(window)
    return FactorSet(n, frozenset(s[i:i + n] for i in range(window - n + 1)))


def complexity(w: DigitWord, n: int, window: Optional[int] = None) -> int:
    return len(factor_set(w, n, window))


def _binary(w: DigitWord, window: int) -> np.ndarray:
    a = w.array(window)
    letters = np.unique(a)
    if len(letters) > 2:
        raise ValueError("balance is defined for two-letter words")
    if len(letters) == 2:
        a = (a == letters[1]).astype(np.int64)
    else:
        a = np.zeros_like(a)
    return a


@dataclass(frozen=True)
class BalanceVerdict:
    balanced: bool
    window: int
    max_length: int
    witness: Optional[str] = None   # palindrome w with 0w0 and 1w1 both factors

    def __bool__(self) -> bool:
        return self.balanced


def is_balanced(w: DigitWord, window: Optional[int] = None,
                max_length: Optional[int] = None) -> BalanceVerdict:
    """Search for a palindrome w such that 0w0 and 1w1 both occur.

    Factors up to length ``max_length`` (default ``min(window, 256)``) of the
    length-``window`` prefix are examined.  Factor identities are refined one
    letter at a time, so each length costs one sort of the window.
    """
    window = _window(w, window)
    if max_length is None:
        max_length = min(window, DEFAULT_BALANCE_LENGTH)
    max_length = min(max_length, window)
    s = _binary(w, window)
    text = None
    ids = np.zeros(window + 1, dtype=np.int64)       # id of the length-m factor at i
    for m in range(0, max_length - 1):
        count = window - m - 1                        # positions of length m+2 factors
        if count <= 0:
            break
        first = s[:count]
        last = s[m + 1:m + 1 + count]
        inner = ids[1:1 + count]
        both0 = inner[(first == 0) & (last == 0)]
        both1 = inner[(first == 1) & (last == 1)]
        if both0.size and both1.size:
            common = np.intersect1d(both0, both1)
            if common.size:
                if text is None:
                    text = "".join(map(str, s.tolist()))
                positions = np.flatnonzero(np.isin(ids[:window - m + 1], common))
                candidates = {text[p:p + m] for p in positions.tolist()}
                pal = sorted(c for c in candidates if c == c[::-1])
                witness = pal[0] if pal else sorted(candidates)[0]
                return BalanceVerdict(False, window, max_length, witness)
        # refine ids to length m+1
        nxt = window - m
        key = ids[:nxt] * 2 + s[m:m + nxt]
        _, inv = np.unique(key, return_inverse=True)
        ids = inv.astype(np.int64)
    return BalanceVerdict(True, window, max_length)


def height_spread(w: DigitWord, n: int, window: Optional[int] = None) -> int:
    """max - min height over the length-n factors of the window prefix."""
    window = _window(w, window)
    s = _binary(w, window)
    cs = np.concatenate(([0], np.cumsum(s)))
    h = cs[n:] - cs[:-n] if n else np.zeros(1, dtype=np.int64)
    return int(h.max() - h.min())


# ---------------------------------------------------------------- ordering
class Order(enum.Enum):
    LESS = "Less"
    EQUAL_TO_DEPTH = "Equal-to-depth"
    GREATER = "Greater"


def first_difference(x: DigitWord, y: DigitWord, depth: int = DEFAULT_DEPTH,
                     x_offset: int = 0, y_offset: int = 0) -> Optional[int]:
    """Smallest index i < depth with x[i] != y[i], reading from the offsets."""
    checked = 0
    chunk = 128
    while checked < depth:
        upto = min(depth, checked + chunk)
        a = x.array(upto - checked, x_offset + checked)
        b = y.array(upto - checked, y_offset + checked)
        diff = np.flatnonzero(a != b)
        if diff.size:
            return checked + int(diff[0])
        checked = upto
        chunk *= 2
    return None


def lex_compare(x: DigitWord, y: DigitWord, depth: int = DEFAULT_DEPTH,
                x_offset: int = 0, y_offset: int = 0) -> Order:
    i = first_difference(x, y, depth, x_offset, y_offset)
    if i is None:
        return Order.EQUAL_TO_DEPTH
    return Order.LESS if x[x_offset + i] < y[y_offset + i] else Order.GREATER


# ---------------------------------------------------------------- morphisms
def exchange(w: DigitWord) -> DigitWord:
    """E: 0 <-> 1."""
    return w.map(lambda d: 1 - d, (0, 1))


def rename(w: DigitWord, a: int, b: int) -> DigitWord:
    """D: 0 -> a, 1 -> b."""
    table = {0: a, 1: b}
    return w.map(table.__getitem__, tuple(sorted({a, b})))


def shift(w: DigitWord, k: int) -> DigitWord:
    return w.drop(k)


def frequency(w: DigitWord, u: Sequence[int] | str, n: int) -> Fraction:
    """Occurrences of u starting at positions 0..n-1, divided by n."""
    if isinstance(u, str):
        u = [int(c) for c in u]
    m = len(u)
    a = w.array(n + m - 1)
    hits = np.ones(n, dtype=bool)
    for j, letter in enumerate(u):
        hits &= a[j:j + n] == letter
    return Fraction(int(hits.sum()), n)
