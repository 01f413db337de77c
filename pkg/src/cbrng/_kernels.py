"""JIT-compiled hot loops with inherently sequential data dependencies.

Only two things live here: advancing a single Tyche state (each output word
depends on the previous state, so it cannot be vectorized across positions)
and the byte-serial trajectory digest. Everything else in the package
vectorizes with plain numpy. Imported lazily so that `import cbrng` stays
cheap.
"""

from __future__ import annotations

import numba
import numpy as np

_U64 = np.uint64
_M32 = np.uint64(0xFFFFFFFF)

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


@numba.njit(numba.void(numba.uint64[:], numba.uint32[:]), cache=True)
def tyche_fill(state: np.ndarray, out: np.ndarray) -> None:
    """Run len(out) quarter rounds from ``state``, recording lane b each step.

    ``state`` holds (a, b, c, d) as uint64 values < 2**32 and is updated in
    place to the final state.
    """
    a, b, c, d = state[0], state[1], state[2], state[3]
    for i in range(out.shape[0]):
        a = (a + b) & _M32
        d ^= a
        d = ((d << _U64(16)) | (d >> _U64(16))) & _M32
        c = (c + d) & _M32
        b ^= c
        b = ((b << _U64(12)) | (b >> _U64(20))) & _M32
        a = (a + b) & _M32
        d ^= a
        d = ((d << _U64(8)) | (d >> _U64(24))) & _M32
        c = (c + d) & _M32
        b ^= c
        b = ((b << _U64(7)) | (b >> _U64(25))) & _M32
        out[i] = b
    state[0], state[1], state[2], state[3] = a, b, c, d


_M64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_PHILOX_M0 = np.uint64(0xD2511F53)
_PHILOX_M1 = np.uint64(0xCD9E8D57)
_PHILOX_W0 = np.uint64(0x9E3779B9)
_PHILOX_W1 = np.uint64(0xBB67AE85)


@numba.njit(numba.void(numba.uint64[:], numba.uint64[:], numba.uint64,
                       numba.uint32[:, :]),
            cache=True, nogil=True)
def philox_block_lanes(seeds: np.ndarray, stream_ctrs: np.ndarray, block_ctr: int,
                       out: np.ndarray) -> None:
    """Philox4x32-10 block ``block_ctr`` of one stream per lane.

    The per-particle hot path: lane i gets the block of stream
    (seeds[i], stream_ctrs[i]). Bit-identical to the scalar and numpy
    implementations.
    """
    for i in range(seeds.shape[0]):
        s = seeds[i]
        k0 = s & _M32
        k1 = (s >> np.uint64(32)) & _M32
        c0 = stream_ctrs[i] & _M32
        c1 = block_ctr & _M32
        c2 = np.uint64(0)
        c3 = np.uint64(0)
        for r in range(10):
            if r > 0:
                k0 = (k0 + _PHILOX_W0) & _M32
                k1 = (k1 + _PHILOX_W1) & _M32
            p0 = (c0 * _PHILOX_M0) & _M64
            p1 = (c2 * _PHILOX_M1) & _M64
            c0 = (p1 >> np.uint64(32)) ^ c1 ^ k0
            c1 = p1 & _M32
            c2 = (p0 >> np.uint64(32)) ^ c3 ^ k1
            c3 = p0 & _M32
        out[i, 0] = c0
        out[i, 1] = c1
        out[i, 2] = c2
        out[i, 3] = c3


@numba.njit(numba.uint64(numba.uint8[:]), cache=True)
def fnv1a64(data: np.ndarray) -> int:
    """Canonical FNV-1a 64-bit fold (xor byte, multiply by the FNV prime)."""
    h = _U64(FNV_OFFSET_BASIS)
    prime = _U64(FNV_PRIME)
    for i in range(data.shape[0]):
        h = ((h ^ _U64(data[i])) * prime) & _U64(0xFFFFFFFFFFFFFFFF)
    return h
