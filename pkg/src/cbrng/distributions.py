"""Word-to-variate transforms with fixed, documented draw counts.

Every operation consumes a fixed number of raw 32-bit words, so interleaved
use stays reproducible and parallel callers can account for consumption
exactly:

================  =========================
uniform_f64       2 words
uniform_f32       1 word
draw_double2      4 words
range_u32         1 word
normal2           4 words
fill_bytes(n)     ceil(n / 4) words
================  =========================

Float maps keep the top mantissa-width bits of the raw draw (shift-down,
never modulo), so the weaker low bits of an imperfect generator never reach
the float path and results land strictly in [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .generators import Generator

TWO_POW_NEG53 = 2.0 ** -53
TWO_POW_NEG24 = 2.0 ** -24


@dataclass(frozen=True)
class Double2:
    """A pair of unit-interval doubles drawn from consecutive stream positions."""

    x: float
    y: float


def uniform_f64(g: Generator) -> float:
    """Uniform double in [0, 1): top 53 bits of one 64-bit draw."""
    return (g.next_u64() >> 11) * TWO_POW_NEG53


def uniform_f32(g: Generator) -> np.float32:
    """Uniform single in [0, 1): top 24 bits of one word."""
    return np.float32((g.next_u32() >> 8) * TWO_POW_NEG24)


def draw_double2(g: Generator) -> Double2:
    """Two sequential uniform doubles (four words)."""
    return Double2(uniform_f64(g), uniform_f64(g))


def range_u32(g: Generator, bound: int) -> int:
    """Integer in [0, bound) via the multiply-high map.

    One word per draw regardless of ``bound``, which keeps stream positions
    predictable; the price is a bias of at most bound / 2**32 (negligible
    for small bounds, and preferred here over rejection loops that would
    consume a data-dependent number of words).
    """
    if bound == 0:
        raise ValueError("bound must be at least 1 (empty range)")
    if not 0 < bound <= 0xFFFFFFFF:
        raise ValueError("bound must fit in 32 bits")
    return (g.next_u32() * bound) >> 32


def normal2(g: Generator) -> tuple[float, float]:
    """Standard-normal pair via Box-Muller (four words).

    The radius draw is remapped u -> 1 - u so it lies in (0, 1], removing
    the log(0) singularity without rejection.
    """
    u1 = 1.0 - uniform_f64(g)
    u2 = uniform_f64(g)
    r = math.sqrt(-2.0 * math.log(u1))
    return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


def fill_bytes(g: Generator, n: int) -> bytes:
    """``n`` bytes: little-endian serialization of consecutive words.

    A trailing partial word is drawn whole and its unused bytes dropped, so
    byte output is a prefix property of the word stream: concatenating
    whole-word calls equals one large call.
    """
    if n < 0:
        raise ValueError("byte count must be non-negative")
    if n == 0:
        return b""
    words = g.words((n + 3) // 4)
    return words.astype("<u4").tobytes()[:n]


def uniform_f64_array(g: Generator, n: int) -> np.ndarray:
    """``n`` uniform doubles in bulk; same stream as ``n`` scalar calls."""
    w = g.words(2 * n).astype(np.uint64)
    return ((w[0::2] | (w[1::2] << np.uint64(32))) >> np.uint64(11)) * TWO_POW_NEG53


def uniform_f32_array(g: Generator, n: int) -> np.ndarray:
    """``n`` uniform singles in bulk."""
    return (((g.words(n) >> np.uint32(8)).astype(np.float64)) * TWO_POW_NEG24).astype(np.float32)


def normal2_array(g: Generator, n_pairs: int) -> tuple[np.ndarray, np.ndarray]:
    """``n_pairs`` Box-Muller pairs in bulk.

    Consumes the same stream positions as ``n_pairs`` scalar calls; values
    may differ from the scalar path by libm rounding (about 1 ulp).
    """
    u = uniform_f64_array(g, 2 * n_pairs)
    u1 = 1.0 - u[0::2]
    u2 = u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    return r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)


def words_to_unit_doubles(words: np.ndarray) -> np.ndarray:
    """Reinterpret a word stream as unit doubles (pairs, low word first)."""
    w = np.asarray(words, dtype=np.uint32).astype(np.uint64)
    w = w[: (w.size // 2) * 2]
    return ((w[0::2] | (w[1::2] << np.uint64(32))) >> np.uint64(11)) * TWO_POW_NEG53


def bytes_to_unit_doubles(data: bytes) -> np.ndarray:
    """Little-endian byte blob -> unit doubles; inverse of emission order."""
    nwords = len(data) // 4
    return words_to_unit_doubles(np.frombuffer(data, dtype="<u4", count=nwords))
