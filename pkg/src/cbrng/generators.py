"""Counter-based random number generators.

Four keyed counter-mix algorithms behind one engine contract:

* Philox4x32-10   -- multiply/xor S-P network (Salmon et al., "Parallel
  random numbers: as easy as 1, 2, 3", SC'11).
* Threefry4x32-20 -- add/rotate/xor network derived from the Threefish
  block cipher (same paper).
* Squares         -- middle-square with a Weyl-sequence counter, squares32
  variant (Widynski, arXiv:2004.06278).
* Tyche           -- ChaCha quarter-round state mixer (Neves & Araujo,
  "Fast and small nonlinear pseudorandom number generators").

Every stream is named by a 64-bit ``seed`` plus a 32-bit ``stream_counter``
(Squares uses the low 32 seed bits). Output is a pure function of
(algorithm, seed, stream_counter, position): there is no global state, so
one generator per task/particle/pixel can be constructed on the fly and
thrown away, and any stream can be regenerated bit-exactly anywhere.

The functions in this module are deliberately straight-line Python-integer
transcriptions of the published algorithms; they are the semantic reference
for the vectorized fast paths in ``cbrng.bulk``. Known-answer tests pin
their outputs so the constants cannot drift.
"""

from __future__ import annotations

import enum
import struct
from typing import NamedTuple

MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF

PHILOX_ROUNDS = 10
PHILOX_M0 = 0xD2511F53  # multiplier for counter word 0
PHILOX_M1 = 0xCD9E8D57  # multiplier for counter word 2
PHILOX_W0 = 0x9E3779B9  # key-schedule Weyl increments
PHILOX_W1 = 0xBB67AE85

THREEFRY_ROUNDS = 20
THREEFRY_PARITY = 0x1BD11BDA
# Rotation pairs for (lane 1, lane 3), indexed by round mod 8.
THREEFRY_ROTATIONS = (
    (10, 26), (11, 21), (13, 27), (23, 5),
    (6, 20), (17, 11), (25, 10), (18, 20),
)

TYCHE_INIT_CONST = 0x9E3779B9
TYCHE_WARMUP = 20

GOLDEN64 = 0x9E3779B97F4A7C15
SPLITMIX_M1 = 0xBF58476D1CE4E5B9
SPLITMIX_M2 = 0x94D049BB133111EB

STATE_STRUCT = struct.Struct("<BQIIB")  # algorithm, seed, stream ctr, block ctr, cache pos


class Algorithm(enum.IntEnum):
    """Stable numeric tags; also used in the serialized state format."""

    PHILOX = 0
    THREEFRY = 1
    SQUARES = 2
    TYCHE = 3

    @classmethod
    def from_name(cls, name: str) -> "Algorithm":
        try:
            return cls[name.strip().upper().replace("-", "_")]
        except KeyError:
            raise ValueError(f"unknown algorithm {name!r}; "
                             f"expected one of {[a.name.lower() for a in cls]}") from None


class StreamId(NamedTuple):
    """Name of one logical stream: 64-bit seed + 32-bit stream counter.

    Squares generators use only the low 32 seed bits. Any two ids differing
    in any bit name statistically independent streams; the id never changes
    over a generator's lifetime.
    """

    seed: int
    stream_counter: int


class Block(NamedTuple):
    """One 4x32-bit output block of a keyed counter mix."""

    w0: int
    w1: int
    w2: int
    w3: int


def rotl32(x: int, r: int) -> int:
    return ((x << r) | (x >> (32 - r))) & MASK32


def philox_block(key: tuple[int, int], ctr: tuple[int, int, int, int]) -> Block:
    """Philox4x32-10: ten rounds of paired 32x32->64 multiply/xor mixing.

    Pure function of (key, ctr). Each round multiplies counter words 0 and
    2 by fixed constants, folds the high halves into the other two lanes
    together with the key, and bumps the key by Weyl constants.
    """
    c0, c1, c2, c3 = (w & MASK32 for w in ctr)
    k0, k1 = (w & MASK32 for w in key)
    for r in range(PHILOX_ROUNDS):
        if r > 0:
            k0 = (k0 + PHILOX_W0) & MASK32
            k1 = (k1 + PHILOX_W1) & MASK32
        p0 = PHILOX_M0 * c0
        p1 = PHILOX_M1 * c2
        c0, c1, c2, c3 = (
            ((p1 >> 32) & MASK32) ^ c1 ^ k0,
            p1 & MASK32,
            ((p0 >> 32) & MASK32) ^ c3 ^ k1,
            p0 & MASK32,
        )
    return Block(c0, c1, c2, c3)


def threefry_block(key: tuple[int, int, int, int],
                   ctr: tuple[int, int, int, int],
                   rounds: int = THREEFRY_ROUNDS) -> Block:
    """Threefry4x32-20: add/rotate/xor rounds with key injection every 4.

    The extended key schedule appends the xor of all key words with the
    Threefish parity constant; injection ``j`` adds ``ks[(j+i) mod 5]`` to
    lane ``i`` and ``j`` itself to lane 3.
    """
    key = tuple(w & MASK32 for w in key)
    ks = (*key, THREEFRY_PARITY ^ key[0] ^ key[1] ^ key[2] ^ key[3])
    x = [(ctr[i] + ks[i]) & MASK32 for i in range(4)]
    for r in range(rounds):
        r0, r1 = THREEFRY_ROTATIONS[r % 8]
        if r % 2 == 0:
            x[0] = (x[0] + x[1]) & MASK32
            x[1] = rotl32(x[1], r0) ^ x[0]
            x[2] = (x[2] + x[3]) & MASK32
            x[3] = rotl32(x[3], r1) ^ x[2]
        else:
            x[0] = (x[0] + x[3]) & MASK32
            x[3] = rotl32(x[3], r0) ^ x[0]
            x[2] = (x[2] + x[1]) & MASK32
            x[1] = rotl32(x[1], r1) ^ x[2]
        if (r + 1) % 4 == 0:
            j = (r + 1) // 4
            for i in range(4):
                x[i] = (x[i] + ks[(j + i) % 5]) & MASK32
            x[3] = (x[3] + j) & MASK32
    return Block(*x)


def squares_key(seed: int) -> int:
    """Expand a 32-bit seed into a 64-bit odd Squares key.

    SplitMix64-style finalizer (Weyl offset, two multiply-xorshift steps)
    spreads the seed over all 64 bits, the raw seed is xored into the high
    half, and the low bit is forced odd as the Squares construction
    requires. Fixed map: equal seeds always yield equal keys.
    """
    s = seed & MASK32
    z = (s + GOLDEN64) & MASK64
    z = ((z ^ (z >> 30)) * SPLITMIX_M1) & MASK64
    z = ((z ^ (z >> 27)) * SPLITMIX_M2) & MASK64
    z ^= z >> 31
    return (z ^ (s << 32)) | 1


def squares_round(seed_key: int, counter: int) -> int:
    """squares32: four square-and-swap rounds, upper 32 bits of the last.

    ``seed_key`` must be odd (see :func:`squares_key`); even keys are not
    rejected but degrade statistical quality.
    """
    x = y = (counter * seed_key) & MASK64
    z = (y + seed_key) & MASK64
    x = (x * x + y) & MASK64
    x = ((x >> 32) | (x << 32)) & MASK64
    x = (x * x + z) & MASK64
    x = ((x >> 32) | (x << 32)) & MASK64
    x = (x * x + y) & MASK64
    x = ((x >> 32) | (x << 32)) & MASK64
    return ((x * x + z) & MASK64) >> 32


def tyche_mix(state: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    """One ChaCha-style quarter round over the full 128-bit state."""
    a, b, c, d = state
    a = (a + b) & MASK32
    d = rotl32(d ^ a, 16)
    c = (c + d) & MASK32
    b = rotl32(b ^ c, 12)
    a = (a + b) & MASK32
    d = rotl32(d ^ a, 8)
    c = (c + d) & MASK32
    b = rotl32(b ^ c, 7)
    return a, b, c, d


def tyche_init(seed: int, stream_counter: int) -> tuple[int, int, int, int]:
    """Load (seed hi, seed lo, golden constant, stream counter), then warm up.

    Twenty quarter rounds diffuse low-entropy seeds so that no seed word
    survives verbatim into the working state.
    """
    state = (
        (seed >> 32) & MASK32,
        seed & MASK32,
        TYCHE_INIT_CONST,
        stream_counter & MASK32,
    )
    for _ in range(TYCHE_WARMUP):
        state = tyche_mix(state)
    return state


def tyche_next(state: tuple[int, int, int, int]) -> tuple[int, tuple[int, int, int, int]]:
    """Advance the state one quarter round; the output word is lane ``b``."""
    state = tyche_mix(state)
    return state[1], state


class Generator:
    """Deterministic 32-bit word stream named by (algorithm, seed, counter).

    Satisfies the usual engine contract: ``MIN``/``MAX`` bound the output
    range and calling the generator draws the next word. Word streams are
    bit-exact across runs, platforms, and the scalar/vectorized paths.

    Philox and Threefry produce 4 words per counter tick and serve them
    from a small cache; Squares and Tyche produce one word per tick. The
    block counter wraps silently at 2**32, which bounds the per-stream
    period (2**32 blocks) exactly as advertised: streams this long repeat
    (Philox/Threefry/Squares) and serialized Tyche positions lose meaning,
    so partition work across stream counters long before that.

    Generators are value-like: one per thread/task, no sharing, no global
    state. Drawing from a single instance concurrently is not supported;
    handing an instance from one thread to another is fine.
    """

    MIN = 0
    MAX = MASK32

    __slots__ = ("algorithm", "seed", "stream_counter", "_block_ctr",
                 "_cache", "_cache_pos", "_key", "_tyche_state")

    def __init__(self, algorithm: Algorithm, seed: int, stream_counter: int):
        self.algorithm = Algorithm(algorithm)
        self.seed = seed & MASK64
        self.stream_counter = stream_counter & MASK32
        if self.algorithm is Algorithm.SQUARES:
            self.seed &= MASK32  # Squares accepts 32-bit seeds
        self._block_ctr = 0
        self._cache: Block | None = None
        self._cache_pos = 0
        self._key = self._derive_key()
        self._tyche_state = (
            tyche_init(self.seed, self.stream_counter)
            if self.algorithm is Algorithm.TYCHE else None
        )

    def _derive_key(self):
        if self.algorithm is Algorithm.PHILOX:
            return (self.seed & MASK32, (self.seed >> 32) & MASK32)
        if self.algorithm is Algorithm.THREEFRY:
            return (self.seed & MASK32, (self.seed >> 32) & MASK32,
                    self.stream_counter, 0)
        if self.algorithm is Algorithm.SQUARES:
            return squares_key(self.seed)
        return None

    @property
    def stream_id(self) -> StreamId:
        return StreamId(self.seed, self.stream_counter)

    @property
    def words_per_block(self) -> int:
        return 4 if self.algorithm in (Algorithm.PHILOX, Algorithm.THREEFRY) else 1

    def _next_block(self) -> Block:
        """Generate the block at ``_block_ctr`` and advance it (mod 2**32)."""
        ic = self._block_ctr
        self._block_ctr = (ic + 1) & MASK32
        if self.algorithm is Algorithm.PHILOX:
            return philox_block(self._key, (self.stream_counter, ic, 0, 0))
        if self.algorithm is Algorithm.THREEFRY:
            return threefry_block(self._key, (ic, 0, 0, 0))
        raise AssertionError("single-word algorithms do not cache blocks")

    def next_u32(self) -> int:
        """Next 32-bit word of the stream."""
        alg = self.algorithm
        if alg is Algorithm.SQUARES:
            ic = self._block_ctr
            self._block_ctr = (ic + 1) & MASK32
            return squares_round(self._key, (self.stream_counter << 32) | ic)
        if alg is Algorithm.TYCHE:
            self._block_ctr = (self._block_ctr + 1) & MASK32
            word, self._tyche_state = tyche_next(self._tyche_state)
            return word
        if self._cache_pos == 0:
            self._cache = self._next_block()
        word = self._cache[self._cache_pos]
        self._cache_pos = (self._cache_pos + 1) & 3
        if self._cache_pos == 0:
            self._cache = None
        return word

    __call__ = next_u32

    def next_u64(self) -> int:
        """Two word draws recombined, low word first."""
        lo = self.next_u32()
        hi = self.next_u32()
        return (hi << 32) | lo

    def words(self, n: int):
        """Next ``n`` words as a uint32 array (vectorized fast path).

        Produces exactly the same stream as ``n`` calls to ``next_u32`` and
        leaves the generator in the same state.
        """
        from . import bulk

        return bulk.generator_words(self, n)

    def copy(self) -> "Generator":
        """Independent clone that will replay this generator's future output."""
        g = Generator.__new__(Generator)
        g.algorithm = self.algorithm
        g.seed = self.seed
        g.stream_counter = self.stream_counter
        g._block_ctr = self._block_ctr
        g._cache = self._cache
        g._cache_pos = self._cache_pos
        g._key = self._key
        g._tyche_state = self._tyche_state
        return g

    def state_bytes(self) -> bytes:
        """18-byte little-endian state: tag, seed, stream ctr, block ctr, cache pos.

        Together with the algorithm definition this fully determines the
        remaining output, so a restored generator resumes the exact stream.
        """
        return STATE_STRUCT.pack(int(self.algorithm), self.seed,
                                 self.stream_counter, self._block_ctr,
                                 self._cache_pos)

    @classmethod
    def from_state_bytes(cls, data: bytes) -> "Generator":
        """Rebuild a generator, repositioned mid-stream, from :meth:`state_bytes`."""
        tag, seed, stream_ctr, block_ctr, cache_pos = STATE_STRUCT.unpack(data)
        g = cls(Algorithm(tag), seed, stream_ctr)
        if g.words_per_block == 1:
            if cache_pos != 0:
                raise ValueError("cache position must be 0 for single-word algorithms")
            if g.algorithm is Algorithm.TYCHE:
                g._advance_tyche(block_ctr)
            g._block_ctr = block_ctr
            return g
        if cache_pos:
            # Mid-block: regenerate the block that block_ctr has already passed.
            g._block_ctr = (block_ctr - 1) & MASK32
            g._cache = g._next_block()
            g._cache_pos = cache_pos
        else:
            g._block_ctr = block_ctr
        return g

    def _advance_tyche(self, steps: int) -> None:
        if steps > 4096:
            from . import bulk

            self._tyche_state = bulk.tyche_advance_state(self._tyche_state, steps)
        else:
            state = self._tyche_state
            for _ in range(steps):
                state = tyche_mix(state)
            self._tyche_state = state

    def __repr__(self) -> str:
        return (f"Generator({self.algorithm.name.lower()}, seed={self.seed:#x}, "
                f"stream_counter={self.stream_counter}, position={self._position()})")

    def _position(self) -> int:
        blocks = self._block_ctr
        if self._cache_pos:
            return ((blocks - 1) & MASK32) * 4 + self._cache_pos
        return blocks * self.words_per_block


def make_generator(algorithm: Algorithm | str, seed: int, counter: int) -> Generator:
    """Engine positioned at the start of stream (seed, counter).

    Equal arguments always produce generators with identical output; all
    seed and counter values are legal.
    """
    if isinstance(algorithm, str):
        algorithm = Algorithm.from_name(algorithm)
    return Generator(algorithm, seed, counter)
