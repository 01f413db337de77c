"""Vectorized engines: the same streams as ``generators``, in numpy batches.

Counter-based generation is embarrassingly parallel, so bulk output is
produced by evaluating the keyed mix over arrays of counter values (or, for
cross-stream work like the interleaved battery and the particle benchmark,
over arrays of seeds). Bit-for-bit equality with the scalar transcriptions
in :mod:`cbrng.generators` is enforced by tests; any divergence is a bug.

Tyche is the one sequential-within-stream algorithm; its single-stream bulk
path runs through a compiled kernel (see ``_kernels``) while cross-stream
batches vectorize over streams here.
"""

from __future__ import annotations

import numpy as np

from .generators import (
    GOLDEN64,
    MASK32,
    PHILOX_M0,
    PHILOX_M1,
    PHILOX_W0,
    PHILOX_W1,
    SPLITMIX_M1,
    SPLITMIX_M2,
    THREEFRY_PARITY,
    THREEFRY_ROTATIONS,
    THREEFRY_ROUNDS,
    TYCHE_INIT_CONST,
    TYCHE_WARMUP,
    Algorithm,
    Block,
    Generator,
)

U32 = np.uint32
U64 = np.uint64


def _u32(x) -> np.ndarray:
    return np.asarray(x, dtype=U32)


def _rotl(x: np.ndarray, r: int) -> np.ndarray:
    return (x << U32(r)) | (x >> U32(32 - r))


def philox4x32(c0, c1, c2, c3, k0, k1):
    """Vector Philox4x32-10 over broadcastable uint32 arrays."""
    c0, c1, c2, c3, k0, k1 = np.broadcast_arrays(*map(_u32, (c0, c1, c2, c3, k0, k1)))
    k0 = k0.copy()
    k1 = k1.copy()
    for r in range(10):
        if r > 0:
            k0 = k0 + U32(PHILOX_W0)
            k1 = k1 + U32(PHILOX_W1)
        p0 = c0.astype(U64) * U64(PHILOX_M0)
        p1 = c2.astype(U64) * U64(PHILOX_M1)
        c0, c1, c2, c3 = (
            (p1 >> U64(32)).astype(U32) ^ c1 ^ k0,
            p1.astype(U32),
            (p0 >> U64(32)).astype(U32) ^ c3 ^ k1,
            p0.astype(U32),
        )
    return c0, c1, c2, c3


def threefry4x32(c0, c1, c2, c3, k0, k1, k2, k3):
    """Vector Threefry4x32-20 over broadcastable uint32 arrays."""
    c = list(np.broadcast_arrays(*map(_u32, (c0, c1, c2, c3))))
    key = list(np.broadcast_arrays(*map(_u32, (k0, k1, k2, k3))))
    ks = key + [U32(THREEFRY_PARITY) ^ key[0] ^ key[1] ^ key[2] ^ key[3]]
    x = [c[i] + ks[i] for i in range(4)]
    for r in range(THREEFRY_ROUNDS):
        r0, r1 = THREEFRY_ROTATIONS[r % 8]
        if r % 2 == 0:
            x[0] = x[0] + x[1]
            x[1] = _rotl(x[1], r0) ^ x[0]
            x[2] = x[2] + x[3]
            x[3] = _rotl(x[3], r1) ^ x[2]
        else:
            x[0] = x[0] + x[3]
            x[3] = _rotl(x[3], r0) ^ x[0]
            x[2] = x[2] + x[1]
            x[1] = _rotl(x[1], r1) ^ x[2]
        if (r + 1) % 4 == 0:
            j = (r + 1) // 4
            for i in range(4):
                x[i] = x[i] + ks[(j + i) % 5]
            x[3] = x[3] + U32(j)
    return tuple(x)


def squares32(ctr, key):
    """Vector squares32 over broadcastable uint64 arrays."""
    ctr = np.asarray(ctr, dtype=U64)
    key = np.asarray(key, dtype=U64)
    x = ctr * key
    y = x
    z = y + key
    x = x * x + y
    x = (x >> U64(32)) | (x << U64(32))
    x = x * x + z
    x = (x >> U64(32)) | (x << U64(32))
    x = x * x + y
    x = (x >> U64(32)) | (x << U64(32))
    return ((x * x + z) >> U64(32)).astype(U32)


def squares_keys(seeds) -> np.ndarray:
    """Vectorized 32->64-bit odd key expansion (matches ``squares_key``)."""
    s = np.asarray(seeds, dtype=U64) & U64(MASK32)
    z = s + U64(GOLDEN64)
    z = (z ^ (z >> U64(30))) * U64(SPLITMIX_M1)
    z = (z ^ (z >> U64(27))) * U64(SPLITMIX_M2)
    z = z ^ (z >> U64(31))
    return (z ^ (s << U64(32))) | U64(1)


def tyche_mix(a, b, c, d):
    """Vector quarter round over broadcastable uint32 arrays."""
    a = a + b
    d = _rotl(d ^ a, 16)
    c = c + d
    b = _rotl(b ^ c, 12)
    a = a + b
    d = _rotl(d ^ a, 8)
    c = c + d
    b = _rotl(b ^ c, 7)
    return a, b, c, d


def tyche_init(seeds, stream_counters):
    """Vectorized warm-up: one Tyche state per (seed, counter) lane."""
    seeds = np.asarray(seeds, dtype=U64)
    a, b, c, d = np.broadcast_arrays(
        (seeds >> U64(32)).astype(U32),
        seeds.astype(U32),
        _u32(TYCHE_INIT_CONST),
        _u32(stream_counters),
    )
    c = c.copy()
    for _ in range(TYCHE_WARMUP):
        a, b, c, d = tyche_mix(a, b, c, d)
    return a, b, c, d


def tyche_advance_state(state: tuple[int, int, int, int], steps: int) -> tuple[int, int, int, int]:
    """Apply ``steps`` quarter rounds to one scalar state (compiled loop)."""
    from . import _kernels

    st = np.array(state, dtype=U64)
    remaining = steps
    while remaining > 0:
        chunk = min(remaining, 1 << 22)
        _kernels.tyche_fill(st, np.empty(chunk, dtype=U32))
        remaining -= chunk
    return tuple(int(v) for v in st)


def prefix_words(algorithm: Algorithm, seeds, stream_counters, nwords: int) -> np.ndarray:
    """First ``nwords`` words of many streams at once.

    ``seeds`` (uint64) and ``stream_counters`` (uint32) broadcast against
    each other; the result has shape ``(n_streams, nwords)`` and row ``i``
    equals the first words of ``make_generator(algorithm, seeds[i],
    stream_counters[i])``.
    """
    seeds = np.atleast_1d(np.asarray(seeds, dtype=U64))
    scs = np.atleast_1d(_u32(stream_counters))
    seeds, scs = np.broadcast_arrays(seeds, scs)
    n = seeds.shape[0]
    out = np.empty((n, nwords), dtype=U32)
    if algorithm is Algorithm.PHILOX:
        from . import _kernels

        seeds_c = np.ascontiguousarray(seeds)
        scs_c = np.ascontiguousarray(scs.astype(U64))
        if nwords == 4:
            _kernels.philox_block_lanes(seeds_c, scs_c, U64(0), out)
        else:
            block = np.empty((n, 4), dtype=U32)
            for blk in range((nwords + 3) // 4):
                _kernels.philox_block_lanes(seeds_c, scs_c, U64(blk), block)
                take = min(4, nwords - 4 * blk)
                out[:, 4 * blk:4 * blk + take] = block[:, :take]
    elif algorithm is Algorithm.THREEFRY:
        k0 = seeds.astype(U32)
        k1 = (seeds >> U64(32)).astype(U32)
        for blk in range((nwords + 3) // 4):
            w = threefry4x32(_u32(blk), U32(0), U32(0), U32(0), k0, k1, scs, U32(0))
            for j in range(min(4, nwords - 4 * blk)):
                out[:, 4 * blk + j] = w[j]
    elif algorithm is Algorithm.SQUARES:
        keys = squares_keys(seeds)
        base = scs.astype(U64) << U64(32)
        for j in range(nwords):
            out[:, j] = squares32(base | U64(j), keys)
    elif algorithm is Algorithm.TYCHE:
        a, b, c, d = tyche_init(seeds, scs)
        for j in range(nwords):
            a, b, c, d = tyche_mix(a, b, c, d)
            out[:, j] = b
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return out


def first_words(algorithm: Algorithm, seeds, stream_counters) -> np.ndarray:
    """First output word of each stream; avalanche/correlation workhorse."""
    return prefix_words(algorithm, seeds, stream_counters, 1)[:, 0]


def _block_range(g: Generator, nblocks: int) -> np.ndarray:
    start = g._block_ctr
    return ((U64(start) + np.arange(nblocks, dtype=U64)) & U64(MASK32)).astype(U32)


_WORD_CHUNK = 1 << 21  # bound temporary sizes; large requests loop over chunks


def generator_words(g: Generator, n: int) -> np.ndarray:
    """Implementation of :meth:`Generator.words`; advances ``g`` in place."""
    if n < 0:
        raise ValueError("word count must be non-negative")
    if n < 128:
        # Array-kernel dispatch overhead dwarfs the draw cost down here.
        out = np.empty(n, dtype=U32)
        for i in range(n):
            out[i] = g.next_u32()
        return out
    if n > _WORD_CHUNK:
        out = np.empty(n, dtype=U32)
        for lo in range(0, n, _WORD_CHUNK):
            k = min(_WORD_CHUNK, n - lo)
            out[lo:lo + k] = generator_words(g, k)
        return out
    out = np.empty(n, dtype=U32)
    filled = 0
    # Drain any partially served block first.
    while g._cache_pos != 0 and filled < n:
        out[filled] = g.next_u32()
        filled += 1
    m = n - filled
    if m == 0:
        return out
    alg = g.algorithm
    if alg in (Algorithm.PHILOX, Algorithm.THREEFRY):
        nblocks = (m + 3) // 4
        ics = _block_range(g, nblocks)
        if alg is Algorithm.PHILOX:
            w = philox4x32(_u32(g.stream_counter), ics, U32(0), U32(0),
                           _u32(g._key[0]), _u32(g._key[1]))
        else:
            w = threefry4x32(ics, U32(0), U32(0), U32(0),
                             _u32(g._key[0]), _u32(g._key[1]),
                             _u32(g._key[2]), _u32(g._key[3]))
        flat = np.stack(w, axis=-1).ravel()
        out[filled:] = flat[:m]
        g._block_ctr = int((g._block_ctr + nblocks) & MASK32)
        tail = m & 3
        if tail:
            last = flat[-4:]
            g._cache = Block(*(int(x) for x in last))
            g._cache_pos = tail
    elif alg is Algorithm.SQUARES:
        ics = ((U64(g._block_ctr) + np.arange(m, dtype=U64)) & U64(MASK32))
        ctr64 = (U64(g.stream_counter) << U64(32)) | ics
        out[filled:] = squares32(ctr64, U64(g._key))
        g._block_ctr = int((g._block_ctr + m) & MASK32)
    elif alg is Algorithm.TYCHE:
        from . import _kernels

        st = np.array(g._tyche_state, dtype=U64)
        _kernels.tyche_fill(st, out[filled:])
        g._tyche_state = tuple(int(v) for v in st)
        g._block_ctr = int((g._block_ctr + m) & MASK32)
    else:
        raise ValueError(f"unknown algorithm {alg!r}")
    return out


class AlgorithmSource:
    """Adapter giving the statistical battery a uniform word-stream surface."""

    def __init__(self, algorithm: Algorithm):
        self.algorithm = Algorithm(algorithm)
        self.name = self.algorithm.name.lower()
        self.seed_bits = 32 if self.algorithm is Algorithm.SQUARES else 64

    def stream_words(self, seed: int, stream_counter: int, n: int) -> np.ndarray:
        return Generator(self.algorithm, seed, stream_counter).words(n)

    def prefix_words(self, seeds, stream_counters, nwords: int) -> np.ndarray:
        return prefix_words(self.algorithm, seeds, stream_counters, nwords)
