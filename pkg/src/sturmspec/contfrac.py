"""Finite continued fractions with an extended last digit, and Sturmian words.

An expansion is stored with its two leading zeros, so ``(0,)`` is the
shortest one, ``(0, 0)`` evaluates to 0 and ``(0, 0, c1, ..., ck)`` is
the usual ``1/(c1 + 1/(c2 + ...))``.  The last digit may be -1 or 0;
those expansions reduce to shorter ones.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateExpansion, MalformedDigits

PRESETS = {"golden": 1, "silver": 2}


@dataclass(frozen=True)
class ContFrac:
    digits: tuple[int, ...]

    @property
    def level(self) -> int:
        return len(self.digits) - 2

    @property
    def tail(self) -> tuple[int, ...]:
        return self.digits[2:]

    @property
    def last(self) -> int | None:
        return self.digits[-1] if self.level >= 1 else None

    def can_extend(self) -> bool:
        return self.digits == (0, 0) or (self.level >= 1 and self.digits[-1] >= 1)

    def extend(self, *more: int) -> "ContFrac":
        cur = self
        for m in more:
            if not cur.can_extend():
                raise MalformedDigits(f"cannot extend {cur} with {m}")
            cur = make_contfrac(cur.digits + (m,))
        return cur

    def parent(self) -> "ContFrac":
        if self.level < 0:
            raise MalformedDigits("[0] has no parent")
        return ContFrac(self.digits[:-1])

    def __str__(self) -> str:
        return "[" + ",".join(str(d) for d in self.digits) + "]"


@dataclass(frozen=True)
class Degenerate:
    """Tagged stand-in for the value -1 of a degenerate expansion."""

    value: Fraction = Fraction(-1)

    def __str__(self) -> str:
        return "-1 (degenerate)"


DEGENERATE = Degenerate()


@dataclass(frozen=True)
class WordPeriod:
    bits: tuple[int, ...]
    p: int
    q: int

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def make_contfrac(digits: Iterable[int]) -> ContFrac:
    ds = tuple(int(d) for d in digits)
    if not ds:
        raise MalformedDigits("empty digit list")
    if ds[0] != 0 or (len(ds) > 1 and ds[1] != 0):
        raise MalformedDigits(f"expansion must start with 0,0: {ds}")
    body = ds[2:]
    if any(d < 1 for d in body[:-1]):
        raise MalformedDigits(f"interior digits must be >= 1: {ds}")
    if body and body[-1] < -1:
        raise MalformedDigits(f"last digit must be >= -1: {ds}")
    return ContFrac(ds)


def alpha_expansion(alpha_digits: Sequence[int], k: int) -> ContFrac:
    """The level-k approximant [0,0,c1..ck] of the digit sequence."""
    if k < -1:
        raise MalformedDigits("level must be >= -1")
    if k == -1:
        return ContFrac((0,))
    if k > len(alpha_digits):
        raise MalformedDigits(f"only {len(alpha_digits)} digits for level {k}")
    return make_contfrac((0, 0) + tuple(alpha_digits[:k]))


def reduce(c: ContFrac) -> ContFrac:
    """Strip trailing -1/0 digits by the evaluation rules.

    Returns ``[0]`` for the degenerate expansions and leaves ``[0,0,-1]``
    alone, since the rule would produce the invalid ``[0,-1]``.
    """
    ds = c.digits
    while len(ds) >= 3 and ds[-1] in (-1, 0):
        if ds[-1] == 0:
            ds = ds[:-2]
        elif len(ds) == 3:
            return ContFrac(ds)
        else:
            ds = ds[:-2] + (ds[-2] - 1,)
    return ContFrac(ds)


def is_degenerate(c: ContFrac) -> bool:
    return isinstance(evaluate(c), Degenerate)


@functools.lru_cache(maxsize=4096)
def evaluate(c: ContFrac) -> Fraction | Degenerate:
    r = reduce(c)
    if r.digits == (0,) or r.digits == (0, 0, -1):
        return DEGENERATE
    val = Fraction(0)
    for d in reversed(r.tail):
        val = 1 / (d + val)
    return val


def convergents(alpha_digits: Sequence[int], k: int) -> tuple[int, int]:
    """(p_k, q_k) with q_{-1} = 0, q_0 = 1 and q_k = c_k q_{k-1} + q_{k-2}."""
    p_prev, q_prev, p, q = 1, 0, 0, 1
    if k == -1:
        return p_prev, q_prev
    for d in alpha_digits[:k]:
        p_prev, q_prev, p, q = p, q, d * p + p_prev, d * q + q_prev
    if k > len(alpha_digits):
        raise MalformedDigits(f"only {len(alpha_digits)} digits for level {k}")
    return p, q


def denominators(alpha_digits: Sequence[int], k: int) -> list[int]:
    """[q_{-1}, q_0, ..., q_k]."""
    qs = [0, 1]
    for d in alpha_digits[:k]:
        qs.append(d * qs[-1] + qs[-2])
    return qs


def mechanical_word(alpha: Fraction, n: int) -> int:
    alpha = Fraction(alpha)
    x = (n * alpha) % 1
    return int(1 - alpha <= x < 1)


def word_of(alpha: Fraction) -> WordPeriod:
    alpha = Fraction(alpha)
    p, q = alpha.numerator, alpha.denominator
    return WordPeriod(tuple(mechanical_word(alpha, n) for n in range(1, q + 1)), p, q)


def word_period(c: ContFrac) -> WordPeriod:
    val = evaluate(c)
    if isinstance(val, Degenerate):
        raise DegenerateExpansion(str(c))
    return word_of(val)


def _substitution(alpha_digits: Sequence[int], n: int, seeds: tuple[str, str]) -> str:
    if n == -1:
        return seeds[0]
    if n == 0:
        return seeds[1]
    prev, cur = seeds[1], "0" * (alpha_digits[0] - 1) + "1"
    for d in alpha_digits[1:n]:
        prev, cur = cur, cur * d + prev
    return cur


def is_rotation(a: str, b: str) -> bool:
    return len(a) == len(b) and b in a + a


@functools.lru_cache(maxsize=1)
def substitution_seeds() -> tuple[str, str]:
    """Pick the seed pair (s_-1, s_0) whose words rotate onto the mechanical periods."""
    probes = [(1,) * 8, (2,) * 6, (1, 2, 3, 1, 4)]
    for seeds in (("0", "1"), ("1", "0")):
        ok = all(
            is_rotation(
                _substitution(ds, n, seeds),
                str(word_period(alpha_expansion(ds, n))),
            )
            for ds in probes
            for n in range(1, len(ds) + 1)
        )
        if ok:
            return seeds
    raise RuntimeError("no seed ordering reproduces the mechanical words")


def substitution_word(alpha_digits: Sequence[int], n: int) -> str:
    if n < -1:
        raise MalformedDigits("level must be >= -1")
    if n > len(alpha_digits):
        raise MalformedDigits(f"only {len(alpha_digits)} digits for level {n}")
    return _substitution(alpha_digits, n, substitution_seeds())


def period_window(alpha: Fraction, start: int = 1) -> str:
    """ω_α(start), ..., ω_α(start + q - 1) as a bit string."""
    alpha = Fraction(alpha)
    return "".join(str(mechanical_word(alpha, n)) for n in range(start, start + alpha.denominator))


def concatenation_split(alpha_digits: Sequence[int], n: int) -> tuple[str, str, str]:
    """(level n-2 period, level n-1 period, level n period), read from index 0."""
    return tuple(  # type: ignore[return-value]
        period_window(evaluate(alpha_expansion(alpha_digits, j)), 0) for j in (n - 2, n - 1, n)
    )


def concatenation_holds(alpha_digits: Sequence[int], n: int) -> bool:
    """Level-n period built from c_n copies of level n-1 and one of level n-2.

    Read from index 0, even levels put the short block first and odd
    levels put it last.  Read from index 1 the same blocks appear, but
    only up to rotation.
    """
    short, long_, target = concatenation_split(alpha_digits, n)
    block = long_ * alpha_digits[n - 1]
    exact = target == (short + block if n % 2 == 0 else block + short)
    one_based = str(word_period(alpha_expansion(alpha_digits, n)))
    return exact and is_rotation(one_based, block + short)


def parse_alpha(spec: str, depth: int = 40) -> tuple[int, ...]:
    """Digits c1, c2, ... from "cf:1,2,3", "rat:p/q" or a preset name."""
    spec = spec.strip()
    if spec in PRESETS:
        return (PRESETS[spec],) * depth
    if spec.startswith("cf:"):
        ds = tuple(int(x) for x in spec[3:].split(",") if x.strip())
        if not ds or any(d < 1 for d in ds):
            raise MalformedDigits(f"digits must be >= 1: {spec}")
        return ds
    if spec.startswith("rat:"):
        return rational_digits(Fraction(spec[4:]))
    raise MalformedDigits(f"unrecognised alpha: {spec!r}")


def rational_digits(alpha: Fraction) -> tuple[int, ...]:
    """Digits of a rational in (0, 1]; 1 is written as (1,)."""
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise MalformedDigits(f"rational must lie in (0, 1]: {alpha}")
    out = []
    x = 1 / alpha
    while True:
        a = x.numerator // x.denominator
        out.append(a)
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return tuple(out)
