#!/usr/bin/env python3
# Testing many parallel streams at once: the interleave construction.
#
# Single-stream quality says nothing about correlations *between* streams,
# which is what a parallel program actually relies on. The construction
# here mimics a particle simulation: 16,000 streams (one per particle) each
# contribute 3 words per iteration, concatenated iteration-major. If
# neighboring seeds were correlated, the combined stream would show it.

from cbrng import Algorithm, InterleaveSpec, chi_square_bytes, interleave_stream, monobit
from cbrng.distributions import bytes_to_unit_doubles
from cbrng.stats import ks_uniform

spec = InterleaveSpec(n_streams=16_000, draws_per_stream=3, iterations=100)
print(f"spec: {spec.n_streams} streams x {spec.draws_per_stream} draws "
      f"x {spec.iterations} iterations = {spec.total_bytes / 1e6:.1f} MB")

for alg in Algorithm:
    blob = interleave_stream(spec, alg, base_seed=1)
    verdicts = [
        monobit(blob).verdict.value,
        chi_square_bytes(blob).verdict.value,
        ks_uniform(bytes_to_unit_doubles(blob)).verdict.value,
    ]
    print(f"{alg.name.lower():<9} monobit/chi2/ks -> {verdicts}")

# The same blob is exactly reproducible, byte for byte, and the CLI emits it
# for external suites:   cbrng interleave --gen philox --iterations 2000 | RNG_test stdin32
again = interleave_stream(spec, Algorithm.PHILOX, base_seed=1)
print("bit-identical on rerun:", again == interleave_stream(spec, Algorithm.PHILOX, 1))
