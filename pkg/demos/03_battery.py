#!/usr/bin/env python3
# The built-in statistical battery, and what it takes to fail it.
#
# The battery is a fast gate for CI: single-stream bit balance, byte
# frequencies, KS against uniform, seed-bit avalanche, adjacent-stream
# correlation, and the same checks on an interleaved many-streams blob.
# Verdicts are three-level (pass / suspicious / fail); an occasional
# suspicious tail brush is expected of healthy generators, hard fails are
# not. For serious certification, pipe raw output into PractRand or TestU01
# instead (see the CLI in the README).

from cbrng import Algorithm, battery_passes, run_battery
from cbrng.fixtures import sabotage_source
from cbrng.stats import format_report

BUDGET = 16 * 2**20  # MiB per stream; CI uses 64

print(f"--- philox, {BUDGET >> 20} MiB ---")
reports = run_battery(Algorithm.PHILOX, BUDGET)
for r in reports:
    print(format_report(r))
print("overall:", "PASS" if battery_passes(reports) else "FAIL")

# A battery that cannot fail anything is worthless, so feed it garbage: a
# generator whose low output bit is wedged at 1.
print("\n--- sabotage: low-bit-stuck ---")
reports = run_battery(sabotage_source("low-bit-stuck"), BUDGET)
for r in reports:
    print(format_report(r))
print("overall:", "PASS" if battery_passes(reports) else "FAIL")
