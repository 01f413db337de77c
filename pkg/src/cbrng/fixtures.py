"""Deliberately broken word-stream sources for battery sensitivity checks.

Each one mimics a specific failure mode; a battery that cannot fail these
is not testing anything. They expose the same surface as
``bulk.AlgorithmSource`` and plug straight into the ``stats`` functions
(and into the CLI ``test`` subcommand's hidden ``--sabotage`` flag).
"""

from __future__ import annotations

import numpy as np

from . import bulk
from .generators import MASK32, Algorithm


class ConstantSource:
    """Every word of every stream is zero."""

    name = "constant"
    seed_bits = 64

    def stream_words(self, seed, stream_counter, n):
        return np.zeros(n, dtype=np.uint32)

    def prefix_words(self, seeds, stream_counters, nwords):
        n = np.broadcast_shapes(np.shape(np.atleast_1d(seeds)),
                                np.shape(np.atleast_1d(stream_counters)))[0]
        return np.zeros((n, nwords), dtype=np.uint32)


class CounterEchoSource:
    """Output equals the in-stream position; seed and counter are ignored."""

    name = "counter-echo"
    seed_bits = 64

    def stream_words(self, seed, stream_counter, n):
        return (np.arange(n, dtype=np.uint64) & np.uint64(MASK32)).astype(np.uint32)

    def prefix_words(self, seeds, stream_counters, nwords):
        n = np.broadcast_shapes(np.shape(np.atleast_1d(seeds)),
                                np.shape(np.atleast_1d(stream_counters)))[0]
        row = np.arange(nwords, dtype=np.uint32)
        return np.broadcast_to(row, (n, nwords)).copy()


class LowBitStuckSource:
    """A healthy generator whose output bit 0 is wedged at 1."""

    name = "low-bit-stuck"
    seed_bits = 64

    def __init__(self):
        self._inner = bulk.AlgorithmSource(Algorithm.PHILOX)

    def stream_words(self, seed, stream_counter, n):
        return self._inner.stream_words(seed, stream_counter, n) | np.uint32(1)

    def prefix_words(self, seeds, stream_counters, nwords):
        return self._inner.prefix_words(seeds, stream_counters, nwords) | np.uint32(1)


SABOTAGE_SOURCES = {
    "constant": ConstantSource,
    "counter-echo": CounterEchoSource,
    "low-bit-stuck": LowBitStuckSource,
}


def sabotage_source(name: str):
    try:
        return SABOTAGE_SOURCES[name]()
    except KeyError:
        raise ValueError(f"unknown sabotage fixture {name!r}; "
                         f"expected one of {sorted(SABOTAGE_SOURCES)}") from None
