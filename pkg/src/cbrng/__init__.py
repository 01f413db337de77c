"""cbrng: counter-based random number generation for reproducible parallel work.

A stream is named by a 64-bit seed and a 32-bit counter; its contents are a
pure function of that name. Construct generators on the fly (one per
particle, pixel, task, ...), draw, and throw them away: no state to store,
no streams to coordinate, and results that replay bit-exactly on any thread
count or platform.
"""

from .bench import BenchRow, micro_benchmark
from .brownian import (
    Particles,
    SimConfig,
    SimResult,
    TrajectoryChecksum,
    apply_forces_step,
    checksum,
    init_particles,
    load_snapshot,
    run_sim,
    save_snapshot,
    write_run_report,
)
from .distributions import (
    Double2,
    bytes_to_unit_doubles,
    draw_double2,
    fill_bytes,
    normal2,
    normal2_array,
    range_u32,
    uniform_f32,
    uniform_f32_array,
    uniform_f64,
    uniform_f64_array,
    words_to_unit_doubles,
)
from .generators import (
    Algorithm,
    Block,
    StreamId,
    Generator,
    make_generator,
    philox_block,
    squares_key,
    squares_round,
    threefry_block,
    tyche_init,
    tyche_mix,
    tyche_next,
)
from .stats import (
    InterleaveSpec,
    TestReport,
    Verdict,
    avalanche,
    avalanche_stats,
    battery_passes,
    chi_square_bytes,
    interleave_stream,
    interstream_correlation,
    ks_uniform,
    monobit,
    run_battery,
    write_reports_jsonl,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm", "Block", "StreamId", "Generator", "make_generator",
    "philox_block", "threefry_block", "squares_key", "squares_round",
    "tyche_init", "tyche_mix", "tyche_next",
    "Double2", "uniform_f64", "uniform_f32", "draw_double2", "range_u32",
    "normal2", "fill_bytes", "uniform_f64_array", "uniform_f32_array",
    "normal2_array", "words_to_unit_doubles", "bytes_to_unit_doubles",
    "TestReport", "Verdict", "InterleaveSpec", "monobit", "chi_square_bytes",
    "ks_uniform", "avalanche", "avalanche_stats", "interstream_correlation",
    "interleave_stream", "run_battery", "battery_passes", "write_reports_jsonl",
    "Particles", "SimConfig", "SimResult", "TrajectoryChecksum",
    "init_particles", "apply_forces_step", "run_sim", "checksum",
    "save_snapshot", "load_snapshot", "write_run_report",
    "BenchRow", "micro_benchmark",
    "__version__",
]
