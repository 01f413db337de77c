#!/usr/bin/env python3
# From raw words to variates: uniforms, pairs, bounded integers, normals.
#
# Every transform consumes a fixed number of 32-bit words, so a simulation
# that mixes distribution calls stays aligned and replayable. No transform
# can ever return 1.0 (or anything outside its stated range): the float maps
# keep only the top mantissa bits of each draw.

import numpy as np

from cbrng import (
    draw_double2,
    make_generator,
    normal2,
    normal2_array,
    range_u32,
    uniform_f32,
    uniform_f64,
    uniform_f64_array,
)

g = make_generator("philox", seed=2024, counter=0)

print("uniform_f64 :", [round(uniform_f64(g), 6) for _ in range(4)])
print("uniform_f32 :", [float(uniform_f32(g)) for _ in range(4)])

r = draw_double2(g)
print("draw_double2:", (round(r.x, 6), round(r.y, 6)))

print("d6 rolls    :", [range_u32(g, 6) + 1 for _ in range(12)])
print("normal pair :", tuple(round(z, 4) for z in normal2(g)))

# --- bulk variants drive the same streams at numpy speed ----------------------
d = uniform_f64_array(make_generator("squares", 8, 0), 2_000_000)
print(f"2e6 uniforms: mean={d.mean():.5f}  min={d.min():.2e}  max={d.max():.10f}")

z0, z1 = normal2_array(make_generator("tyche", 8, 0), 500_000)
z = np.concatenate([z0, z1])
print(f"1e6 normals : mean={z.mean():+.5f}  var={z.var():.5f}")

# --- fixed draw accounting -----------------------------------------------------
# uniform_f64: 2 words, uniform_f32: 1, draw_double2: 4, range_u32: 1, normal2: 4
h = make_generator("philox", 2024, 0)
uniform_f64(h)  # 2 words
uniform_f32(h)  # 1 word
k = make_generator("philox", 2024, 0)
k.words(3)  # skip the same three words manually
print("draw accounting: next word aligned across paths ->", h.next_u32() == k.next_u32())
