"""Command-line front door: stream emission, battery runs, benchmarks.

Exit codes are a stable contract: 0 success (battery pass), 1 statistical
failure, 2 usage error. Data goes to stdout, diagnostics to stderr, so raw
output can be piped straight into external consumers, e.g.:

    cbrng generate --gen philox --seed 1 --counter 0 --n 250000000 | RNG_test stdin32
    cbrng interleave --gen tyche --iterations 2000 | RNG_test stdin32
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, brownian, stats
from .distributions import uniform_f64_array
from .fixtures import sabotage_source
from .generators import Algorithm, make_generator

ALGO_NAMES = [a.name.lower() for a in Algorithm]
EMIT_CHUNK_WORDS = 1 << 22


def _int_arg(text: str) -> int:
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cbrng")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("generate", help="emit draws from one stream on stdout")
    gen.add_argument("--gen", choices=ALGO_NAMES, required=True)
    gen.add_argument("--seed", type=_int_arg, default=0)
    gen.add_argument("--counter", type=_int_arg, default=0)
    gen.add_argument("--n", type=int, default=1, help="number of draws to emit")
    gen.add_argument("--format", choices=["raw", "hex", "f64-text"], default="raw",
                     help="raw = unframed little-endian 32-bit words")
    gen.set_defaults(func=cmd_generate)

    test = sub.add_parser("test", help="run the statistical battery")
    test.add_argument("--gen", choices=ALGO_NAMES + ["all"], default="all")
    test.add_argument("--mb", type=int, default=64, help="battery budget in MiB")
    test.add_argument("--seed", type=_int_arg, default=stats.DEFAULT_BATTERY_SEED)
    test.add_argument("--report", type=Path, default=None,
                      help="write per-test JSONL records (per-algorithm suffix "
                           "when testing more than one)")
    test.add_argument("--sabotage", choices=["constant", "counter-echo", "low-bit-stuck"],
                      default=None, help=argparse.SUPPRESS)
    test.set_defaults(func=cmd_test)

    inter = sub.add_parser("interleave", help="emit the parallel-stream construction")
    inter.add_argument("--gen", choices=ALGO_NAMES, required=True)
    inter.add_argument("--seed", type=_int_arg, default=0)
    inter.add_argument("--streams", type=int, default=16_000)
    inter.add_argument("--draws", type=int, default=3)
    inter.add_argument("--iterations", type=int, default=1)
    inter.set_defaults(func=cmd_interleave)

    micro = sub.add_parser("bench-micro", help="single-stream throughput table")
    micro.add_argument("--gen", choices=ALGO_NAMES + ["all"], default="all")
    micro.add_argument("--lengths", default="1,10,100,1000,10000,100000,1000000,10000000")
    micro.add_argument("--reps", type=int, default=3)
    micro.add_argument("--csv", action="store_true")
    micro.set_defaults(func=cmd_bench_micro)

    brn = sub.add_parser("bench-brownian", help="particle benchmark + checksum")
    brn.add_argument("--gen", choices=ALGO_NAMES, default="philox")
    brn.add_argument("--particles", type=int, default=100_000)
    brn.add_argument("--steps", type=int, default=1000)
    brn.add_argument("--threads", type=int, default=1)
    brn.add_argument("--dt", type=float, default=0.01)
    brn.add_argument("--gamma", type=float, default=0.1)
    brn.add_argument("--mass", type=float, default=1.0)
    brn.add_argument("--init-counter", type=_int_arg, default=0)
    brn.add_argument("--report", type=Path, default=None)
    brn.set_defaults(func=cmd_bench_brownian)

    return parser


def cmd_generate(args) -> int:
    g = make_generator(args.gen, args.seed, args.counter)
    if args.n < 0:
        raise ValueError("--n must be non-negative")
    remaining = args.n
    out = sys.stdout
    while remaining > 0:
        chunk = min(remaining, EMIT_CHUNK_WORDS)
        if args.format == "raw":
            out.buffer.write(g.words(chunk).astype("<u4").tobytes())
        elif args.format == "hex":
            out.write("".join(f"{w:08x}\n" for w in g.words(chunk)))
        else:
            out.write("".join(f"{float(v)!r}\n" for v in uniform_f64_array(g, chunk)))
        remaining -= chunk
    out.flush()
    return 0


def _battery_targets(args):
    if args.sabotage:
        return [(args.sabotage, sabotage_source(args.sabotage))]
    if args.gen == "all":
        return [(name, Algorithm.from_name(name)) for name in ALGO_NAMES]
    return [(args.gen, Algorithm.from_name(args.gen))]


def cmd_test(args) -> int:
    if args.mb < 16:
        raise ValueError("battery budget must be at least 16 MiB")
    targets = _battery_targets(args)
    all_pass = True
    for name, target in targets:
        reports = stats.run_battery(target, args.mb * 2**20, args.seed)
        ok = stats.battery_passes(reports)
        all_pass &= ok
        print(f"== {name} battery ({args.mb} MiB) ==")
        for r in reports:
            print(stats.format_report(r))
        print(f"overall: {'PASS' if ok else 'FAIL'}")
        if args.report is not None:
            path = args.report
            if len(targets) > 1:
                path = path.with_name(f"{path.stem}.{name}{path.suffix}")
            stats.write_reports_jsonl(path, reports)
    return 0 if all_pass else 1


def cmd_interleave(args) -> int:
    spec = stats.InterleaveSpec(args.streams, args.draws, args.iterations)
    alg = Algorithm.from_name(args.gen)
    for chunk in stats.iter_interleave_chunks(spec, alg, args.seed):
        sys.stdout.buffer.write(chunk)
    sys.stdout.flush()
    return 0


def cmd_bench_micro(args) -> int:
    lengths = [int(tok) for tok in args.lengths.split(",") if tok]
    names = ALGO_NAMES if args.gen == "all" else [args.gen]
    rows = []
    for name in names:
        rows.extend(bench.micro_benchmark(name, lengths, args.reps))
    print(bench.bench_rows_csv(rows) if args.csv else bench.format_bench_table(rows))
    return 0


def cmd_bench_brownian(args) -> int:
    cfg = brownian.SimConfig(
        n_particles=args.particles, steps=args.steps, dt=args.dt, gamma=args.gamma,
        mass=args.mass, threads=args.threads, algorithm=Algorithm.from_name(args.gen),
        init_counter=args.init_counter,
    )
    result = brownian.run_sim(cfg)
    print(f"config: gen={args.gen} particles={cfg.n_particles} steps={cfg.steps} "
          f"dt={cfg.dt} gamma={cfg.gamma} mass={cfg.mass} threads={cfg.threads} "
          f"init_counter={cfg.init_counter}")
    print(f"checksum: {result.checksum}")
    print(f"wall_seconds: {result.wall_seconds:.3f}")
    print(f"particle_steps_per_second: {result.particle_steps_per_second:.3e}")
    if args.report is not None:
        brownian.write_run_report(args.report, cfg, result)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
