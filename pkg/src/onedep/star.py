"""Cylinder probabilities of the one-dependent hard-core process on stars.

Every function is written once for a generic scalar: pass a ``float`` for
speed or a :class:`fractions.Fraction` for exact results.  Below the critical
point the process is unique, so these probabilities are the only candidates;
above it some of them come out negative, and that is returned unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, TypeVar, Union

Density = Union[float, Fraction]
S = TypeVar("S", float, Fraction)


def zeros_prob(k: int, p: S) -> S:
    """P(0_k): probability of k consecutive zeros on the line."""
    if k < 0:
        raise ValueError("k must be non-negative")
    prev, cur = 1 + 0 * p, 1 - p  # P(0_0), P(0_1)
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, cur - p * prev
    return cur


class ASequence(NamedTuple):
    values: list
    truncated: bool  # stopped because some term was <= 0


def a_seq(p: S, kmax: int) -> ASequence:
    """Ratios ``a_k = P(0_k) / P(0_{k-1})`` for k = 1..kmax.

    Uses ``a_1 = 1 - p`` and ``a_k = 1 - p / a_{k-1}``.  Generation stops after
    the first non-positive term, since the next ratio is undefined or the
    corresponding probabilities have already changed sign.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    vals = [1 - p]
    while len(vals) < kmax:
        if vals[-1] <= 0:
            return ASequence(vals, True)
        vals.append(1 - p / vals[-1])
    return ASequence(vals, False)


def limit_a(p: float) -> float:
    """Limit of ``a_k(p)`` as k grows, for ``0 <= p <= 1/4``."""
    if p < 0 or p > 0.25:
        raise ValueError(f"limit_a needs 0 <= p <= 1/4, got {p}")
    return (1 + math.sqrt(1 - 4 * float(p))) / 2


def _parse_bits(w) -> tuple[int, ...]:
    if isinstance(w, str):
        if any(ch not in "01" for ch in w):
            raise ValueError(f"not a 0/1 word: {w!r}")
        return tuple(int(ch) for ch in w)
    bits = tuple(int(b) for b in w)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"not a 0/1 word: {w!r}")
    return bits


@lru_cache(maxsize=1 << 16, typed=True)
def _ray_prob(w: tuple[int, ...], p):
    if not w:
        return 1 + 0 * p
    try:
        j = w.index(1)
    except ValueError:
        return zeros_prob(len(w), p)
    if j + 1 < len(w) and w[j + 1] == 1:
        return 0 * p
    if j == 0:
        # the symbol after the 1 is a forced 0 and splits the rest off
        return p * _ray_prob(w[2:], p)
    # zeros then a 1: one-dependence at the last zero before it
    return zeros_prob(j - 1, p) * _ray_prob(w[j:], p)


def ray_prob(w, p: S) -> S:
    """Probability that a window of the line process reads ``w``."""
    return _ray_prob(_parse_bits(w), p)


@dataclass(frozen=True)
class StarConfig:
    """Center bit plus one 0/1 word per ray, position 1 next to the center."""

    center: int
    rays: tuple[str, ...]

    def __post_init__(self):
        if self.center not in (0, 1):
            raise ValueError("center bit must be 0 or 1")
        if len(self.rays) < 2:
            raise ValueError("a star needs at least two rays")
        for r in self.rays:
            _parse_bits(r)

    @property
    def d(self) -> int:
        return len(self.rays)

    @classmethod
    def parse(cls, text: str) -> "StarConfig":
        """Parse ``"c|r1,r2,...,rd"``, e.g. ``"0|01,001,0"``."""
        try:
            c, rays = text.strip().split("|")
        except ValueError:
            raise ValueError(f"expected 'c|r1,...,rd', got {text!r}") from None
        if c not in ("0", "1"):
            raise ValueError(f"center must be 0 or 1 in {text!r}")
        return cls(int(c), tuple(r.strip() for r in rays.split(",")))

    def __str__(self) -> str:
        return f"{self.center}|{','.join(self.rays)}"


def star_prob(x: StarConfig, p: S) -> S:
    """Cylinder probability of a star configuration (empty rays marginalized)."""
    rays = [_parse_bits(r) for r in x.rays]
    one = 1 + 0 * p
    if any(r and r[0] == 1 for r in rays):
        if x.center == 1:
            return 0 * p
        out = one
        for r in rays:
            out = out * _ray_prob(r, p)
        return out
    trimmed = one
    for r in rays:
        trimmed = trimmed * _ray_prob(r[1:], p)
    if x.center == 1:
        return p * trimmed
    full = one
    for r in rays:
        full = full * _ray_prob(r, p)
    return full - p * trimmed


def cache_clear() -> None:
    _ray_prob.cache_clear()
