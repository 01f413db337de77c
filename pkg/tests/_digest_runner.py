"""Digest the first words of a fixed panel of streams; run in fresh processes.

Prints one hex digest covering 100 random (seed, counter) pairs x 10^4 words
for each algorithm. Two independent processes (or machines) must print the
same line for the determinism guarantee to hold.
"""

from __future__ import annotations

import hashlib

import numpy as np

PANEL_SEED = 20240819
PAIRS = 100
WORDS = 10_000


def stream_panel():
    rng = np.random.default_rng(PANEL_SEED)
    seeds = rng.integers(0, 2**64, size=PAIRS, dtype=np.uint64)
    ctrs = rng.integers(0, 2**32, size=PAIRS, dtype=np.uint32)
    return [(int(s), int(c)) for s, c in zip(seeds, ctrs)]


def panel_digest() -> str:
    import cbrng

    h = hashlib.sha256()
    for alg in cbrng.Algorithm:
        for seed, ctr in stream_panel():
            words = cbrng.make_generator(alg, seed, ctr).words(WORDS)
            h.update(words.astype("<u4").tobytes())
    return h.hexdigest()


if __name__ == "__main__":
    print(panel_digest())
