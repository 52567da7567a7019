"""Operator entry point: chat REPL, server, benchmarks, baselines, ablations."""
from __future__ import annotations

import argparse
import os
import sys

from . import benchmark
from .engine import MemoryEngine
from .errors import MemoryError_
from .model import EngineConfig, SimulatedClock, WallClock
from .persistence import DEFAULT_SNAPSHOT_PATH, load, save


def _print_table(rows: list[dict], columns: list[str]) -> None:
    widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) for c in columns}
    header = "  ".join(c.ljust(widths[c]) for c in columns)
    print(header)
    print("-" * len(header))
    for r in rows:
        print("  ".join(str(r.get(c, "")).ljust(widths[c]) for c in columns))


def cmd_chat(args) -> int:
    clock = SimulatedClock() if args.simulated_clock else WallClock()
    engine = MemoryEngine(EngineConfig(), clock=clock)
    print("memory chat - :sleep :stats :self :save [path] :load [path] :advance <hours> :quit")
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            return 0
        if not line:
            continue
        try:
            if line == ":quit":
                return 0
            if line == ":sleep":
                report = engine.force_sleep()
                print(
                    f"slept: transferred={report.episodes_transferred} "
                    f"pairs={report.pairs_strengthened} dreams={report.dreams_integrated} "
                    f"forgot={report.concepts_forgotten} theta_f={report.theta_f:.4f}"
                )
            elif line == ":stats":
                for key, value in engine.stats().items():
                    print(f"{key}: {value}")
            elif line == ":self":
                print(engine.introspect("summary"))
            elif line.startswith(":save"):
                parts = line.split(maxsplit=1)
                path = parts[1] if len(parts) > 1 else DEFAULT_SNAPSHOT_PATH
                print(f"wrote {save(engine, path)} bytes to {path}")
            elif line.startswith(":load"):
                parts = line.split(maxsplit=1)
                path = parts[1] if len(parts) > 1 else DEFAULT_SNAPSHOT_PATH
                engine = load(path, clock=clock if clock.simulated else None)
                print(f"loaded {engine.ltm.node_count} concepts from {path}")
            elif line.startswith(":advance"):
                hours = float(line.split()[1])
                print(f"clock now {engine.advance_clock(hours).isoformat()}")
            elif line.startswith(":"):
                print(f"unknown command {line}")
            else:
                report = engine.process_message(line)
                for t in report.tagged:
                    print(
                        f"  + {t.label} ({t.ctype.value}) importance={t.importance:.3f}"
                    )
                if report.sleep_report:
                    print(
                        f"  [slept: forgot {report.sleep_report.concepts_forgotten}, "
                        f"dreamed {report.sleep_report.dreams_integrated}]"
                    )
                for h in engine.query(line, 3):
                    concept = engine.ltm.get(h.concept_id)
                    print(f"  ? {concept.label} fused={h.fused_score:.3f}")
        except MemoryError_ as exc:
            print(f"error: {exc}")


def cmd_serve(args) -> int:
    from .service import serve

    if args.simulated_clock:
        os.environ["SCM_SIMULATED_CLOCK"] = "true"
    serve(host=args.host, port=args.port)
    return 0


def cmd_bench(args) -> int:
    config = EngineConfig(rng_seed=args.seed)
    results = benchmark.run_suite(args.suite, args.runs, config)
    rows = [
        {
            "test": r.test,
            "run": run_idx,
            "score": f"{r.score:.3f}",
            "metric": f"{r.numer}/{r.denom}",
            "status": "PASS" if r.passed else "FAIL",
            "ltm_size": r.ltm_size,
        }
        for run_idx, r in results
    ]
    _print_table(rows, ["test", "run", "score", "metric", "status", "ltm_size"])
    passed = sum(1 for _i, r in results if r.passed)
    print(f"\n{passed}/{len(results)} runs passing")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(benchmark.results_to_csv(results))
        print(f"csv written to {args.csv}")
    return 0 if passed == len(results) else 1


def cmd_baseline(args) -> int:
    config = EngineConfig(rng_seed=args.seed)
    kinds = [args.backend] if args.backend != "all" else ["fifo", "vector", "noforget", "full"]
    rows = []
    results = {}
    for kind in kinds:
        b = benchmark.run_baseline(kind, config)
        results[kind] = b
        rows.append(
            {
                "backend": b.backend,
                "recall": f"{b.recall}/{b.probes}",
                "ltm_size": b.size,
            }
        )
    _print_table(rows, ["backend", "recall", "ltm_size"])
    if args.backend != "all":
        return 0
    full = results["full"]
    ok = (
        results["fifo"].recall < full.recall
        and results["vector"].recall <= full.recall
        and results["vector"].size > full.size
        and results["noforget"].recall == full.recall
        and results["noforget"].size > full.size
        and full.recall == full.probes
    )
    print("orderings:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


_ABLATION_CHECKS = {
    "forget": lambda ab, full: ab.noise_retained == 50,
    "tagger": lambda ab, full: ab.noise_retained == 50,
    "wm_limit": lambda ab, full: ab.noise_retained > full.noise_retained,
    "self": lambda ab, full: ab.recall == full.recall
    and ab.noise_retained == full.noise_retained,
    "rem": lambda ab, full: ab.recall == full.recall and ab.ltm_size >= full.ltm_size,
    "nrem": lambda ab, full: True,
}


def cmd_ablate(args) -> int:
    config = EngineConfig(rng_seed=args.seed)
    ab, full = benchmark.run_ablation(args.disable, config)
    rows = [
        {
            "engine": f"no-{ab.component}",
            "recall": f"{ab.recall}/{ab.probes}",
            "ltm_size": ab.ltm_size,
            "noise_retained": f"{ab.noise_retained}/{ab.noise_total}",
        },
        {
            "engine": "full",
            "recall": f"{full.recall}/{full.probes}",
            "ltm_size": full.ltm_size,
            "noise_retained": f"{full.noise_retained}/{full.noise_total}",
        },
    ]
    _print_table(rows, ["engine", "recall", "ltm_size", "noise_retained"])
    ok = _ABLATION_CHECKS[args.disable](ab, full)
    print("expectation:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_growth(args) -> int:
    config = EngineConfig(rng_seed=args.seed)
    series = benchmark.run_growth(args.cycles, args.forgetting == "on", config)
    print("cycle,concepts")
    for i, count in enumerate(series, start=1):
        print(f"{i},{count}")
    if args.forgetting == "off":
        ok = all(b > a for a, b in zip(series, series[1:]))
        print("strictly increasing:", "PASS" if ok else "FAIL")
        return 0 if ok else 1
    last5 = series[-5:]
    peak = max(series)
    ok = (max(last5) - min(last5)) <= 0.10 * peak + 1e-9
    print("plateau:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scm", description="semantic memory engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chat", help="interactive REPL")
    p.add_argument("--simulated-clock", action="store_true")
    p.set_defaults(func=cmd_chat)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="0.0.0.0")
    p.add_argument("--port", type=int, default=int(os.environ.get("SCM_PORT", 8750)))
    p.add_argument("--simulated-clock", action="store_true")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", help="run the benchmark suite")
    p.add_argument("--suite", default="all", choices=("all",) + benchmark.TEST_IDS)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--csv", default=None)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("baseline", help="run baseline comparisons")
    p.add_argument("--backend", default="all", choices=("all", "fifo", "vector", "noforget", "full"))
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("ablate", help="disable one component and compare")
    p.add_argument("--disable", required=True, choices=benchmark.ABLATABLE_COMPONENTS)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("growth", help="memory growth simulation")
    p.add_argument("--cycles", type=int, default=20)
    p.add_argument("--forgetting", default="on", choices=("on", "off"))
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_growth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
