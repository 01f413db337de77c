"""Brownian dynamics benchmark: stateless per-particle, per-step seeding.

Each particle's random kick at step ``i`` comes from a generator built on
the spot as ``(seed=pid, counter=i)`` and thrown away. No RNG state is
stored anywhere between steps, so the trajectory is a pure function of the
configuration: any thread count, any work partitioning, and any
stop/snapshot/resume schedule produces bit-identical results. The
trajectory checksum makes that claim testable with a single integer.

Counter 0 is reserved for drawing initial conditions; dynamics steps use
counters 1..steps (shifted by ``init_counter`` when a re-randomized
initial-condition family is wanted).
"""

from __future__ import annotations

import dataclasses
import math
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bulk
from .generators import MASK32, Algorithm

SNAPSHOT_MAGIC = b"CBRNSNP1"
_RECORD = struct.Struct("<Qdddd")  # pid, x, y, vx, vy
_HEADER = struct.Struct("<8sQI")  # magic, n_particles, next_iteration

_U64 = np.uint64
_SCALE53 = 2.0 ** -53


@dataclass
class SimConfig:
    """Benchmark parameters; ``init_counter`` shifts the whole counter family."""

    n_particles: int
    steps: int
    dt: float = 0.01
    gamma: float = 0.1
    mass: float = 1.0
    threads: int = 1
    algorithm: Algorithm = Algorithm.PHILOX
    init_counter: int = 0

    def __post_init__(self):
        if isinstance(self.algorithm, str):
            self.algorithm = Algorithm.from_name(self.algorithm)
        self.algorithm = Algorithm(self.algorithm)
        if self.n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if not self.dt >= 0:
            raise ValueError("dt must be non-negative")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class Particles:
    """Struct-of-arrays particle store: persistent id, position, velocity.

    Deliberately holds no generator state; randomness is re-derived from
    (pid, iteration) every step.
    """

    pid: np.ndarray  # uint64
    x: np.ndarray
    y: np.ndarray
    vx: np.ndarray
    vy: np.ndarray

    @property
    def n(self) -> int:
        return self.pid.size

    def copy(self) -> "Particles":
        return Particles(self.pid.copy(), self.x.copy(), self.y.copy(),
                         self.vx.copy(), self.vy.copy())


@dataclass(frozen=True)
class TrajectoryChecksum:
    digest: int

    def __str__(self) -> str:
        return f"{self.digest:016x}"


@dataclass
class SimResult:
    particles: Particles
    checksum: TrajectoryChecksum
    wall_seconds: float
    particle_steps_per_second: float


def _unit_doubles(words: np.ndarray, lo_col: int) -> np.ndarray:
    u = words[:, lo_col].astype(_U64) | (words[:, lo_col + 1].astype(_U64) << _U64(32))
    return ((u >> _U64(11)).astype(np.float64)) * _SCALE53


def init_particles(cfg: SimConfig) -> Particles:
    """pid = index; positions uniform in [0,1)^2, velocities in [-1,1).

    Consumes 8 words per particle from stream (pid, init_counter): one
    double pair for position, one mapped 2u-1 for velocity.
    """
    pid = np.arange(cfg.n_particles, dtype=_U64)
    w = bulk.prefix_words(cfg.algorithm, pid, np.uint32(cfg.init_counter), 8)
    return Particles(
        pid=pid,
        x=_unit_doubles(w, 0),
        y=_unit_doubles(w, 2),
        vx=_unit_doubles(w, 4) * 2.0 - 1.0,
        vy=_unit_doubles(w, 6) * 2.0 - 1.0,
    )


def _step_slice(p: Particles, lo: int, hi: int, counter: int, cfg: SimConfig,
                sqrt_dt: float) -> None:
    """Drag, random kick, Euler position update for particles [lo, hi)."""
    vx = p.vx[lo:hi]
    vy = p.vy[lo:hi]
    vx -= (cfg.gamma / cfg.mass) * vx * cfg.dt
    vy -= (cfg.gamma / cfg.mass) * vy * cfg.dt
    w = bulk.prefix_words(cfg.algorithm, p.pid[lo:hi], np.uint32(counter), 4)
    rx = _unit_doubles(w, 0)
    ry = _unit_doubles(w, 2)
    vx += (rx * 2.0 - 1.0) * sqrt_dt
    vy += (ry * 2.0 - 1.0) * sqrt_dt
    p.x[lo:hi] += vx * cfg.dt
    p.y[lo:hi] += vy * cfg.dt


def apply_forces_step(particles: Particles, iteration: int, cfg: SimConfig) -> Particles:
    """One dynamics step over all particles; ``iteration`` must be >= 1.

    Iteration 0 is the initialization counter and never a dynamics step.
    Updates in place and returns the same object.
    """
    if iteration < 1:
        raise ValueError("iteration must be >= 1; counter 0 is reserved for init")
    counter = (cfg.init_counter + iteration) & MASK32
    _step_slice(particles, 0, particles.n, counter, cfg, math.sqrt(cfg.dt))
    return particles


def _slices(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    step = (n + parts - 1) // parts
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]


def run_sim(cfg: SimConfig, particles: Particles | None = None,
            start_iteration: int = 1) -> SimResult:
    """Run ``cfg.steps`` dynamics steps, partitioned over ``cfg.threads``.

    Workers own contiguous pid ranges with no shared mutable state inside a
    step and a barrier between steps; the result does not depend on the
    partitioning. Pass ``particles``/``start_iteration`` (e.g. from
    :func:`load_snapshot`) to resume a run; fresh runs initialize at
    ``init_counter`` and step with iterations 1..steps.
    """
    t0 = time.perf_counter()
    if particles is None:
        particles = init_particles(cfg)
    sqrt_dt = math.sqrt(cfg.dt)
    end = start_iteration + cfg.steps
    ranges = _slices(particles.n, cfg.threads)
    if cfg.threads == 1 or len(ranges) == 1:
        for it in range(start_iteration, end):
            counter = (cfg.init_counter + it) & MASK32
            _step_slice(particles, 0, particles.n, counter, cfg, sqrt_dt)
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            for it in range(start_iteration, end):
                counter = (cfg.init_counter + it) & MASK32
                futures = [pool.submit(_step_slice, particles, lo, hi, counter,
                                       cfg, sqrt_dt) for lo, hi in ranges]
                for f in futures:
                    f.result()
    wall = time.perf_counter() - t0
    digest = checksum(particles)
    rate = particles.n * cfg.steps / wall if wall > 0 else float("inf")
    return SimResult(particles, digest, wall, rate)


def _packed_records(particles: Particles) -> np.ndarray:
    cols = np.column_stack([
        particles.pid.astype("<u8"),
        particles.x.astype("<f8").view("<u8"),
        particles.y.astype("<f8").view("<u8"),
        particles.vx.astype("<f8").view("<u8"),
        particles.vy.astype("<f8").view("<u8"),
    ])
    return np.ascontiguousarray(cols).view(np.uint8).ravel()


def checksum(particles: Particles) -> TrajectoryChecksum:
    """FNV-1a 64-bit fold over the 40-byte little-endian particle records.

    Records are folded in pid order; callers must already hold particles
    pid-sorted (simulation order is canonical). Permuted input is an error,
    not a different digest.
    """
    pid = particles.pid
    if pid.size and np.any(np.diff(pid.astype(np.int64)) <= 0):
        raise ValueError("particles must be sorted by pid")
    from . import _kernels

    if pid.size == 0:
        return TrajectoryChecksum(_kernels.FNV_OFFSET_BASIS)
    return TrajectoryChecksum(int(_kernels.fnv1a64(_packed_records(particles))))


def save_snapshot(path, particles: Particles, next_iteration: int) -> None:
    """Binary snapshot: header (magic, n, next iteration) + pid-ordered records."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(SNAPSHOT_MAGIC, particles.n, next_iteration))
        fh.write(_packed_records(particles).tobytes())


def load_snapshot(path) -> tuple[Particles, int]:
    """Inverse of :func:`save_snapshot`; returns (particles, next_iteration)."""
    with open(path, "rb") as fh:
        magic, n, next_iteration = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != SNAPSHOT_MAGIC:
            raise ValueError("not a particle snapshot file")
        raw = np.frombuffer(fh.read(n * _RECORD.size), dtype=np.uint8)
    if raw.size != n * _RECORD.size:
        raise ValueError("truncated snapshot file")
    rec = raw.view("<u8").reshape(n, 5)
    particles = Particles(
        pid=rec[:, 0].copy(),
        x=rec[:, 1].copy().view("<f8"),
        y=rec[:, 2].copy().view("<f8"),
        vx=rec[:, 3].copy().view("<f8"),
        vy=rec[:, 4].copy().view("<f8"),
    )
    return particles, next_iteration


def write_run_report(path, cfg: SimConfig, result: SimResult) -> None:
    """Structured per-run results file: config echo, checksum, wall time, rate."""
    import json

    payload = {
        "config": {**dataclasses.asdict(cfg), "algorithm": cfg.algorithm.name.lower()},
        "checksum": str(result.checksum),
        "wall_seconds": result.wall_seconds,
        "particle_steps_per_second": result.particle_steps_per_second,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
