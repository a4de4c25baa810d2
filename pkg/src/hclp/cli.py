"""Command-line front end.

Subcommands: solve (run one algorithm on one instance file), deduce
(decide entailment of a statement), generate (write a random instance),
export-lp (write the MILP as LP text), bench (timing sweep over
generated instances with a CSV report).

Reports are single JSON documents on standard output; bench emits CSV.
Exit codes: 0 success (consistent / deduced), 1 negative verdict
(inconsistent / not deduced), 2 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from .instances import GenConfig, Instance, ParseError, SplitMix64, generate, \
    parse, parse_statement, serialize
from .milp import build_formulation, write_lp
from .oracle import brute_force_solve
from .solver import SearchConfig, SearchStats, SearchTimeout, SolveResult, \
    c1_solve, deduce, pc_check

ALGORITHMS = ("c1", "pc", "pc-conflicts", "oracle")
CSV_COLUMNS = ("instance_id", "n", "m", "g", "t", "s", "algorithm",
               "verdict", "class", "nodes", "skipped", "time_ms", "timeout")
CLASSES = ("c1", "ct", "inconsistent", "unknown")


def _read_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read())


def _run_algorithm(
    algorithm: str,
    instance: Instance,
    t: int,
    s: int,
    timeout_ms: Optional[float] = None,
) -> SolveResult:
    E = instance.matrix
    stmts = list(instance.statements)
    if algorithm == "c1":
        return c1_solve(E, stmts)
    if algorithm == "oracle":
        return brute_force_solve(E, stmts, t)
    cfg = SearchConfig(t=t, conflicts=(algorithm == "pc-conflicts"), s=s)
    return pc_check(E, stmts, cfg, timeout_ms=timeout_ms)


def cmd_solve(args: argparse.Namespace) -> int:
    instance = _read_instance(args.path)
    t = args.t if args.t is not None else instance.matrix.n
    result = _run_algorithm(args.algorithm, instance, t, args.s)
    witness = result.witness
    report = {
        "instance": instance.metadata.get("id", args.path),
        "algorithm": args.algorithm,
        "t": t,
        "s": args.s,
        "verdict": result.verdict,
        "witness": (
            [sorted(level) for level in witness.levels]
            if witness is not None else None
        ),
        "witness_text": str(witness) if witness is not None else None,
        "stats": {
            "nodes": result.stats.nodes,
            "candidates": result.stats.candidates,
            "skipped": result.stats.skipped,
            "singleton_calls": result.stats.singleton_calls,
            "learned": result.stats.learned,
        },
        "time_ms": round(result.stats.wall_ms, 3),
    }
    print(json.dumps(report, indent=2))
    return 0 if result.consistent else 1


def cmd_deduce(args: argparse.Namespace) -> int:
    instance = _read_instance(args.path)
    statement = parse_statement(args.statement, instance.matrix.m)
    t = args.t if args.t is not None else instance.matrix.n
    cfg = SearchConfig(t=t, conflicts=True, s=5)
    start = time.monotonic()
    deduced = deduce(instance.matrix, list(instance.statements), statement, cfg)
    elapsed_ms = (time.monotonic() - start) * 1000.0
    report = {
        "instance": instance.metadata.get("id", args.path),
        "statement": str(statement),
        "t": t,
        "deduced": deduced,
        "time_ms": round(elapsed_ms, 3),
    }
    print(json.dumps(report, indent=2))
    return 0 if deduced else 1


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = GenConfig(n=args.n, m=args.m, g=args.g,
                    domain_max=args.domain_max, seed=args.seed)
    text = serialize(generate(cfg))
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_export_lp(args: argparse.Namespace) -> int:
    instance = _read_instance(args.path)
    t = args.t if args.t is not None else instance.matrix.n
    formulation = build_formulation(instance.matrix,
                                    list(instance.statements), t)
    text = write_lp(formulation)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(json.dumps({
            "variables": len(formulation.variables),
            "constraints": len(formulation.constraints),
            "out": args.out,
        }, indent=2))
    else:
        sys.stdout.write(text)
    return 0


def _bench_worker(task: Tuple) -> Dict[str, object]:
    """Generate one instance, run one algorithm, return one CSV row.

    Module-level so a process pool can pickle it; the instance is
    regenerated from its seed inside the worker.
    """
    instance_id, n, m, g, inst_seed, t, s, algorithm, timeout_ms = task
    instance = generate(GenConfig(n=n, m=m, g=g, seed=inst_seed))
    E = instance.matrix
    stmts = list(instance.statements)
    timed_out = 0
    try:
        result: Optional[SolveResult] = _run_algorithm(
            algorithm, instance, t, s, timeout_ms)
    except SearchTimeout as exc:
        result = None
        stats = exc.stats
        verdict = "unknown"
        cls = "unknown"
        timed_out = 1
    except ValueError:
        # Oracle size guard; the row survives with an unknown verdict.
        result = None
        stats = SearchStats()
        verdict = "unknown"
        cls = "unknown"
    if result is not None:
        stats = result.stats
        verdict = result.verdict
        if algorithm == "c1":
            cls = "c1" if result.consistent else "unknown"
        elif not result.consistent:
            cls = "inconsistent"
        elif c1_solve(E, stmts).consistent:
            cls = "c1"
        else:
            cls = "ct"
    return {
        "instance_id": instance_id,
        "n": n,
        "m": m,
        "g": g,
        "t": t,
        "s": s,
        "algorithm": algorithm,
        "verdict": verdict,
        "class": cls,
        "nodes": stats.nodes,
        "skipped": stats.skipped,
        "time_ms": stats.wall_ms,
        "timeout": timed_out,
    }


def _parse_sizes(text: str) -> List[Tuple[int, int]]:
    sizes: List[Tuple[int, int]] = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"size {chunk!r} is not of the form n,g")
        n, g = int(parts[0]), int(parts[1])
        if n < 1 or g < 1:
            raise ValueError(f"size {chunk!r} must be positive")
        sizes.append((n, g))
    if not sizes:
        raise ValueError("no sizes given")
    return sizes


def _bench_workers() -> int:
    raw = os.environ.get("HCLP_THREADS", "").strip()
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        print(f"warning: ignoring HCLP_THREADS={raw!r}", file=sys.stderr)
        return 1
    return max(workers, 1)


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = _parse_sizes(args.sizes)
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algorithm!r}")
    if not algorithms:
        raise ValueError("no algorithms given")
    if args.per_size < 0:
        raise ValueError("--per-size must be non-negative")

    # One seed stream drives every instance, so a fixed --seed pins the
    # whole sweep.
    rng = SplitMix64(args.seed)
    tasks: List[Tuple] = []
    groups: List[Tuple[int, int]] = []
    for si, (n, g) in enumerate(sizes):
        t = args.t if args.t is not None else n
        for k in range(args.per_size):
            inst_seed = rng.next_u64()
            for ai, algorithm in enumerate(algorithms):
                tasks.append((f"n{n}_g{g}_k{k}", n, args.m, g, inst_seed,
                              t, args.s, algorithm, args.timeout_ms))
                groups.append((si, ai))

    workers = _bench_workers()
    if workers > 1 and tasks:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_worker, tasks))
    else:
        rows = [_bench_worker(task) for task in tasks]

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([
            row["instance_id"], row["n"], row["m"], row["g"], row["t"],
            row["s"], row["algorithm"], row["verdict"], row["class"],
            row["nodes"], row["skipped"], f"{row['time_ms']:.3f}",
            row["timeout"],
        ])
    csv_text = buffer.getvalue()

    summary = {"per_size": []}
    for si, (n, g) in enumerate(sizes):
        entry = {"n": n, "g": g, "algorithms": []}
        for ai, algorithm in enumerate(algorithms):
            sub = [row for row, key in zip(rows, groups) if key == (si, ai)]
            times = [row["time_ms"] for row in sub]
            classes = {cls: 0 for cls in CLASSES}
            for row in sub:
                classes[row["class"]] += 1
            entry["algorithms"].append({
                "algorithm": algorithm,
                "count": len(sub),
                "mean_ms": round(statistics.mean(times), 3) if times else None,
                "median_ms": (
                    round(statistics.median(times), 3) if times else None
                ),
                "timeouts": sum(row["timeout"] for row in sub),
                "classes": classes,
            })
        summary["per_size"].append(entry)

    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(csv_text)
        print(json.dumps(summary, indent=2))
    else:
        sys.stdout.write(csv_text)
        print(json.dumps(summary, indent=2), file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hclp",
        description="Consistency and deduction solver for hierarchical "
                    "lexicographic preference models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="decide consistency of one instance")
    p_solve.add_argument("path")
    p_solve.add_argument("--algorithm", choices=ALGORITHMS,
                         default="pc-conflicts")
    p_solve.add_argument("--t", type=int, default=None,
                         help="level-size bound (default: n)")
    p_solve.add_argument("--s", type=int, default=5,
                         help="conflict-set size cap (default: 5)")
    p_solve.set_defaults(func=cmd_solve)

    p_deduce = sub.add_parser("deduce", help="decide entailment of a statement")
    p_deduce.add_argument("path")
    p_deduce.add_argument("--statement", required=True,
                          help='statement text, e.g. "2 < 0" or "1 <= 3"')
    p_deduce.add_argument("--t", type=int, default=None,
                          help="level-size bound (default: n)")
    p_deduce.set_defaults(func=cmd_deduce)

    p_gen = sub.add_parser("generate", help="write a random instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--g", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--domain-max", type=int, default=5)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_generate)

    p_lp = sub.add_parser("export-lp", help="write the instance MILP as LP text")
    p_lp.add_argument("path")
    p_lp.add_argument("--t", type=int, default=None,
                      help="level-size bound (default: n)")
    p_lp.add_argument("--out", default=None)
    p_lp.set_defaults(func=cmd_export_lp)

    p_bench = sub.add_parser("bench", help="timing sweep over random instances")
    p_bench.add_argument("--sizes", required=True,
                         help='semicolon list of n,g pairs, e.g. "10,10;15,15"')
    p_bench.add_argument("--per-size", type=int, default=50)
    p_bench.add_argument("--algorithms", default="pc,pc-conflicts")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--timeout-ms", type=float, default=None)
    p_bench.add_argument("--out", default=None)
    p_bench.add_argument("--m", type=int, default=25)
    p_bench.add_argument("--t", type=int, default=None,
                         help="level-size bound (default: n per size)")
    p_bench.add_argument("--s", type=int, default=5)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
