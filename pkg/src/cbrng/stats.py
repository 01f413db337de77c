"""Built-in statistical battery and the interleaved parallel-stream test.

The battery is a fast sanity layer, not a replacement for the heavyweight
external suites; for those, emit raw words with ``fill_bytes`` or the CLI
``generate``/``interleave`` subcommands and pipe into e.g. PractRand's
``RNG_test stdin32``.

Verdicts use a three-level scheme. Healthy generators occasionally brush a
tail by chance, so a narrow "suspicious" band sits between pass and fail:

* pass        p in (1e-4, 1 - 1e-4)
* suspicious  p in (1e-6, 1e-4]  or  [1 - 1e-4, 1 - 1e-6)
* fail        otherwise

For survival-style p-values (chi-square, KS) both tails apply: p ~ 1 means
the data fit *too* well. Folded two-sided p-values (|z|-based tests) can
only be extreme in one direction, so only the low band applies there; a
perfectly balanced monobit count is a pass, not an anomaly.

A battery run is deterministic: all internal sampling derives from fixed
seeds, so re-running produces byte-identical reports.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import special, stats as scipy_stats

from .bulk import AlgorithmSource
from .distributions import words_to_unit_doubles
from .generators import MASK32, MASK64, Algorithm

SUSPICIOUS_P = 1e-4
FAIL_P = 1e-6

MIN_MONOBIT_BYTES = 1000
MIN_CHI_SQUARE_BYTES = 256 * 50  # expected count >= 50 per bin
MIN_KS_SAMPLES = 100
MIN_AVALANCHE_TRIALS = 10_000
MIN_CORRELATION_DRAWS = 10_000
MIN_BATTERY_BYTES = 16 * 2**20

# Correlation verdict bounds: |r| below PASS is healthy at 1e5 draws
# (~3 sigma); above FAIL only degenerate relationships land.
CORRELATION_PASS_R = 0.01
CORRELATION_FAIL_R = 0.05

AVALANCHE_MEAN_TOL = 0.5
AVALANCHE_RATE_LO, AVALANCHE_RATE_HI = 0.45, 0.55
AVALANCHE_MEAN_FAIL = 2.0
AVALANCHE_RATE_FAIL_LO, AVALANCHE_RATE_FAIL_HI = 0.40, 0.60

DEFAULT_BATTERY_SEED = 0x243F6A8885A308D3  # pi digits; nothing up the sleeve
_AVALANCHE_RNG_SEED = 0x6176616C
_CORRELATION_RNG_SEED = 0x636F7272

_POPCOUNT8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


class Verdict(str, enum.Enum):
    PASS = "pass"
    SUSPICIOUS = "suspicious"
    FAIL = "fail"


@dataclass(frozen=True)
class TestReport:
    """Outcome of one statistical test."""

    __test__ = False  # data type, not a pytest case

    test_name: str
    statistic: float
    p_value_or_z: float
    n_samples: int
    verdict: Verdict


def classify_p(p: float, *, folded: bool = False) -> Verdict:
    """Map a p-value onto the pass/suspicious/fail bands.

    ``folded`` marks p-values of the form P(|Z| >= |z|): both tails are
    already folded into one number, so only the low band is meaningful.
    """
    if math.isnan(p):
        return Verdict.FAIL
    tail = p if folded else min(p, 1.0 - p)
    if tail > SUSPICIOUS_P:
        return Verdict.PASS
    if tail > FAIL_P:
        return Verdict.SUSPICIOUS
    return Verdict.FAIL


def _as_byte_array(data) -> np.ndarray:
    if isinstance(data, np.ndarray) and data.dtype == np.uint8:
        return data
    return np.frombuffer(memoryview(data), dtype=np.uint8)


def _resolve_source(algorithm):
    """Accept an Algorithm, an algorithm name, or any word-stream source."""
    if isinstance(algorithm, (Algorithm, str)):
        if isinstance(algorithm, str):
            algorithm = Algorithm.from_name(algorithm)
        return AlgorithmSource(algorithm)
    return algorithm


def monobit(data) -> TestReport:
    """Global ones/zeros balance; z = (ones - n/2) / sqrt(n/4)."""
    arr = _as_byte_array(data)
    if arr.size < MIN_MONOBIT_BYTES:
        raise ValueError(f"monobit needs at least {MIN_MONOBIT_BYTES} bytes, got {arr.size}")
    n_bits = 8 * arr.size
    ones = int(np.bincount(arr, minlength=256) @ _POPCOUNT8)
    z = (ones - n_bits / 2) / math.sqrt(n_bits / 4)
    p = math.erfc(abs(z) / math.sqrt(2.0))
    return TestReport("monobit", z, p, n_bits, classify_p(p, folded=True))


def chi_square_bytes(data) -> TestReport:
    """256-bin byte-frequency chi-square (255 dof), survival p-value."""
    arr = _as_byte_array(data)
    if arr.size < MIN_CHI_SQUARE_BYTES:
        raise ValueError(
            f"chi-square needs at least {MIN_CHI_SQUARE_BYTES} bytes, got {arr.size}")
    counts = np.bincount(arr, minlength=256)
    expected = arr.size / 256.0
    statistic = float(((counts - expected) ** 2 / expected).sum())
    p = float(scipy_stats.chi2.sf(statistic, 255))
    return TestReport("chi_square_bytes", statistic, p, arr.size, classify_p(p))


def ks_uniform(samples) -> TestReport:
    """Kolmogorov-Smirnov distance to the uniform CDF, asymptotic p-value.

    Out-of-range samples raise: they indicate a bug in the word-to-float
    maps, not bad luck.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size < MIN_KS_SAMPLES:
        raise ValueError(f"KS needs at least {MIN_KS_SAMPLES} samples, got {x.size}")
    if x.min() < 0.0 or x.max() >= 1.0:
        raise ValueError("samples outside [0, 1): unit-interval map is broken")
    n = x.size
    x = np.sort(x)
    grid = np.arange(1, n + 1, dtype=np.float64) / n
    d = float(max((grid - x).max(), (x - (grid - 1.0 / n)).max()))
    p = float(special.kolmogorov(d * math.sqrt(n)))
    return TestReport("ks_uniform", d, p, n, classify_p(p))


@dataclass(frozen=True)
class AvalancheStats:
    """Raw avalanche measurements backing the TestReport verdict."""

    mean_hamming: float
    bit_flip_rates: np.ndarray  # per output bit, length 32
    z: float
    trials: int


def avalanche_stats(algorithm, trials: int,
                    rng_seed: int = _AVALANCHE_RNG_SEED) -> AvalancheStats:
    """Flip one random seed bit per trial; measure first-word divergence.

    An ideal mixer flips each of the 32 output bits independently with
    probability 1/2, i.e. mean Hamming distance 16.
    """
    if trials < MIN_AVALANCHE_TRIALS:
        raise ValueError(f"avalanche needs at least {MIN_AVALANCHE_TRIALS} trials")
    source = _resolve_source(algorithm)
    rng = np.random.default_rng(rng_seed)
    seed_bits = source.seed_bits
    seeds = rng.integers(0, 2**seed_bits, size=trials, dtype=np.uint64)
    ctrs = rng.integers(0, 2**32, size=trials, dtype=np.uint32)
    flip = np.uint64(1) << rng.integers(0, seed_bits, size=trials, dtype=np.uint64)
    w_base = source.prefix_words(seeds, ctrs, 1)[:, 0]
    w_flip = source.prefix_words(seeds ^ flip, ctrs, 1)[:, 0]
    diff = w_base ^ w_flip
    mean = float(np.bitwise_count(diff).mean())
    rates = ((diff[:, None] >> np.arange(32, dtype=np.uint32)) & np.uint32(1)).mean(axis=0)
    z = (mean - 16.0) / (math.sqrt(8.0) / math.sqrt(trials))
    return AvalancheStats(mean, rates, z, trials)


def avalanche(algorithm, trials: int, rng_seed: int = _AVALANCHE_RNG_SEED) -> TestReport:
    """Avalanche verdict: mean within 16 +/- 0.5, all bit rates in [0.45, 0.55]."""
    st = avalanche_stats(algorithm, trials, rng_seed)
    mean_err = abs(st.mean_hamming - 16.0)
    lo, hi = float(st.bit_flip_rates.min()), float(st.bit_flip_rates.max())
    if mean_err <= AVALANCHE_MEAN_TOL and lo >= AVALANCHE_RATE_LO and hi <= AVALANCHE_RATE_HI:
        verdict = Verdict.PASS
    elif (mean_err > AVALANCHE_MEAN_FAIL or lo < AVALANCHE_RATE_FAIL_LO
          or hi > AVALANCHE_RATE_FAIL_HI):
        verdict = Verdict.FAIL
    else:
        verdict = Verdict.SUSPICIOUS
    return TestReport("avalanche", st.mean_hamming, st.z, st.trials, verdict)


def interstream_correlation(algorithm, seed_pairs: int = 4, draws: int = 100_000,
                            rng_seed: int = _CORRELATION_RNG_SEED) -> TestReport:
    """Pearson correlation between adjacent-seed and adjacent-counter streams.

    For each base (s, c), correlates the unit-double sequence of (s, c)
    against (s+1, c) and against (s, c+1). The reported p-value combines
    the worst correlation across all pairs (Sidak), so it stays uniform
    under the null; the verdict applies the documented |r| bounds.
    """
    if draws < MIN_CORRELATION_DRAWS:
        raise ValueError(f"correlation needs at least {MIN_CORRELATION_DRAWS} draws")
    source = _resolve_source(algorithm)
    rng = np.random.default_rng(rng_seed)
    seed_mask = (1 << source.seed_bits) - 1
    rs = []
    for _ in range(seed_pairs):
        s = int(rng.integers(0, 2**source.seed_bits, dtype=np.uint64))
        c = int(rng.integers(0, 2**32, dtype=np.uint64))
        u_base = words_to_unit_doubles(source.stream_words(s, c, 2 * draws))
        u_seed = words_to_unit_doubles(source.stream_words((s + 1) & seed_mask, c, 2 * draws))
        u_ctr = words_to_unit_doubles(source.stream_words(s, (c + 1) & MASK32, 2 * draws))
        rs.append(pearson_r(u_base, u_seed))
        rs.append(pearson_r(u_base, u_ctr))
    rs = np.array(rs)
    if not np.all(np.isfinite(rs)):
        return TestReport("interstream_correlation", math.nan, math.nan, draws, Verdict.FAIL)
    max_r = float(np.abs(rs).max())
    z = max_r * math.sqrt(draws)
    p_single = math.erfc(z / math.sqrt(2.0))
    p = 1.0 - (1.0 - p_single) ** len(rs)
    if max_r < CORRELATION_PASS_R:
        verdict = Verdict.PASS
    elif max_r < CORRELATION_FAIL_R:
        verdict = Verdict.SUSPICIOUS
    else:
        verdict = Verdict.FAIL
    return TestReport("interstream_correlation", max_r, p, draws, verdict)


def pearson_r(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation; nan when either side has zero variance."""
    with np.errstate(invalid="ignore", divide="ignore"):
        return float(np.corrcoef(a, b)[0, 1])


@dataclass(frozen=True)
class InterleaveSpec:
    """Shape of the parallel-stream construction.

    Per iteration t, every stream p contributes ``draws_per_stream``
    consecutive words from ``(base_seed + p, t)``; iterations concatenate.
    """

    n_streams: int = 16_000
    draws_per_stream: int = 3
    iterations: int = 1

    def __post_init__(self):
        if min(self.n_streams, self.draws_per_stream, self.iterations) < 1:
            raise ValueError("all interleave parameters must be >= 1")

    @property
    def total_bytes(self) -> int:
        return 4 * self.n_streams * self.draws_per_stream * self.iterations


def iter_interleave_chunks(spec: InterleaveSpec, algorithm, base_seed: int) -> Iterator[bytes]:
    """Yield one little-endian byte chunk per iteration, in canonical order.

    Canonical order is iteration-major, stream-minor, draw-innermost; the
    output is bit-identical however production is scheduled.
    """
    source = _resolve_source(algorithm)
    seeds = (np.uint64(base_seed & MASK64) + np.arange(spec.n_streams, dtype=np.uint64))
    for t in range(spec.iterations):
        words = source.prefix_words(seeds, np.uint32(t & MASK32), spec.draws_per_stream)
        yield words.astype("<u4").tobytes()


def interleave_stream(spec: InterleaveSpec, algorithm, base_seed: int) -> bytes:
    """Concatenated micro-streams of many (seed, counter) pairs at once."""
    return b"".join(iter_interleave_chunks(spec, algorithm, base_seed))


def run_battery(algorithm, bytes_budget: int,
                base_seed: int = DEFAULT_BATTERY_SEED) -> list[TestReport]:
    """Full quick battery on one generator (or word-stream source).

    Runs monobit, byte chi-square and KS on a single ``bytes_budget``-sized
    stream, the avalanche and adjacent-stream correlation probes, and
    monobit + chi-square on an interleaved parallel-stream blob of the same
    budget. Deterministic for fixed arguments.
    """
    if bytes_budget < MIN_BATTERY_BYTES:
        raise ValueError(f"battery budget below minimum {MIN_BATTERY_BYTES} bytes")
    source = _resolve_source(algorithm)
    words = source.stream_words(base_seed, 0, bytes_budget // 4)
    blob = words.astype("<u4").tobytes()
    reports = [
        monobit(blob),
        chi_square_bytes(blob),
        ks_uniform(words_to_unit_doubles(words)),
        avalanche(source, MIN_AVALANCHE_TRIALS),
        interstream_correlation(source),
    ]
    spec = InterleaveSpec(iterations=max(1, bytes_budget // (4 * 16_000 * 3)))
    iblob = interleave_stream(spec, source, base_seed)
    reports.append(dataclasses.replace(monobit(iblob), test_name="interleave_monobit"))
    reports.append(dataclasses.replace(chi_square_bytes(iblob),
                                       test_name="interleave_chi_square"))
    return reports


def battery_passes(reports: Sequence[TestReport]) -> bool:
    """Overall verdict: no failures and at most one suspicious result."""
    verdicts = [r.verdict for r in reports]
    return (Verdict.FAIL not in verdicts
            and verdicts.count(Verdict.SUSPICIOUS) <= 1)


def format_report(report: TestReport) -> str:
    return (f"{report.test_name:<24} stat={report.statistic:>14.6g} "
            f"p_or_z={report.p_value_or_z:>12.6g} n={report.n_samples:>12} "
            f"{report.verdict.value}")


def report_to_dict(report: TestReport) -> dict:
    return {
        "test_name": report.test_name,
        "statistic": report.statistic,
        "p_value_or_z": report.p_value_or_z,
        "n_samples": report.n_samples,
        "verdict": report.verdict.value,
    }


def write_reports_jsonl(path, reports: Iterable[TestReport]) -> None:
    """One JSON record per report, mirroring the TestReport fields exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(json.dumps(report_to_dict(r)) + "\n")
