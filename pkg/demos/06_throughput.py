#!/usr/bin/env python3
# Throughput across stream lengths: why cheap construction matters.
#
# Parallel programs draw *short* streams from *many* generators, so what
# counts is construction-plus-draw cost, not just steady-state speed. The
# table times (construct + draw L words) and reports words/second; watch the
# per-word cost collapse as the constructor amortizes. Numbers are machine-
# dependent; the shape of the curve is the point.

from cbrng import Algorithm, micro_benchmark
from cbrng.bench import format_bench_table

lengths = [1, 10, 100, 1_000, 10_000, 100_000, 1_000_000]

rows = []
for alg in Algorithm:
    rows.extend(micro_benchmark(alg, lengths, repetitions=3))
print(format_bench_table(rows))

print("\nper-word cost, L=1 vs L=1e6:")
for alg in Algorithm:
    sub = [r for r in rows if r.algorithm == alg.name.lower()]
    first, last = sub[0], sub[-1]
    print(f"  {alg.name.lower():<9} {first.median_ns / first.length:>10.0f} ns"
          f" -> {last.median_ns / last.length:>8.2f} ns")
