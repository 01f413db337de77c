"""Single-stream throughput micro-benchmark.

Times (construct generator + draw L words) as one unit so that the fixed
construction cost is visible: counter-based generators are cheap to build,
which is exactly what makes the many-short-streams regime of parallel
programs viable, and amortization should show up as falling per-word cost
with growing L.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .generators import Algorithm, make_generator

BENCH_SEED = 0xB0A710C5

_sink = 0  # consumes one word per run so the draw cannot be optimized away


@dataclass(frozen=True)
class BenchRow:
    algorithm: str
    length: int
    median_ns: float
    words_per_second: float


def micro_benchmark(algorithm: Algorithm | str, stream_lengths, repetitions: int = 3,
                    seed: int = BENCH_SEED) -> list[BenchRow]:
    """Median wall time of (construct + draw L words) per stream length."""
    global _sink
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    if isinstance(algorithm, str):
        algorithm = Algorithm.from_name(algorithm)
    rows = []
    for length in stream_lengths:
        if length < 1:
            raise ValueError("stream lengths must be >= 1")
        samples = []
        for rep in range(repetitions):
            t0 = time.perf_counter_ns()
            g = make_generator(algorithm, seed, rep)
            words = g.words(length)
            _sink ^= int(words[-1])
            samples.append(time.perf_counter_ns() - t0)
        median_ns = statistics.median(samples)
        rows.append(BenchRow(algorithm.name.lower(), int(length), median_ns,
                             length / (median_ns / 1e9)))
    return rows


def format_bench_table(rows: list[BenchRow]) -> str:
    lines = [f"{'algorithm':<10} {'length':>10} {'median_ns':>14} {'words/s':>14}"]
    for r in rows:
        lines.append(f"{r.algorithm:<10} {r.length:>10} {r.median_ns:>14.0f} "
                     f"{r.words_per_second:>14.3e}")
    return "\n".join(lines)


def bench_rows_csv(rows: list[BenchRow]) -> str:
    lines = ["algorithm,length,median_ns,words_per_second"]
    for r in rows:
        lines.append(f"{r.algorithm},{r.length},{r.median_ns:.0f},{r.words_per_second:.6g}")
    return "\n".join(lines)
