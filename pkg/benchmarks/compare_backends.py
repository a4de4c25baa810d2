"""Timing comparison between the interpreted and compiled search cores.

Runs identical seeded instance batches through both backends, checks
that verdicts and counters agree, and prints mean wall times plus the
speedup. Sizes where the interpreter would be impractically slow can be
run compiled-only with --skip-pure-above.
"""

import argparse
import statistics
import sys

from hclp import (GenConfig, SearchConfig, SearchTimeout, SplitMix64,
                  generate, kernel_available, pc_check)


def parse_sizes(text):
    sizes = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        n, g = chunk.split(",")
        sizes.append((int(n), int(g)))
    return sizes


def run_backend(instances, t, s, backend, timeout_ms):
    times = []
    outcomes = []
    for inst in instances:
        cfg = SearchConfig(t=t if t is not None else inst.matrix.n,
                           conflicts=True, s=s)
        try:
            result = pc_check(inst.matrix, list(inst.statements), cfg,
                              backend=backend, timeout_ms=timeout_ms)
        except SearchTimeout:
            times.append(float("nan"))
            outcomes.append(("timeout",))
            continue
        times.append(result.stats.wall_ms)
        outcomes.append((result.verdict, result.stats.nodes,
                         result.stats.candidates, result.stats.skipped,
                         result.stats.singleton_calls, result.stats.learned))
    return times, outcomes


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="8,8;10,10;12,12;14,14;20,20",
                        help="semicolon list of n,g pairs")
    parser.add_argument("--count", type=int, default=10,
                        help="instances per size")
    parser.add_argument("--m", type=int, default=25)
    parser.add_argument("--t", type=int, default=None,
                        help="level-size bound (default: n)")
    parser.add_argument("--s", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--timeout-ms", type=float, default=120000)
    parser.add_argument("--skip-pure-above", type=int, default=16,
                        help="run only the compiled backend for n above this")
    args = parser.parse_args(argv)

    if not kernel_available():
        print("compiled kernel unavailable; nothing to compare",
              file=sys.stderr)
        return 1

    rng = SplitMix64(args.seed)
    print(f"{'size':>10} {'pure ms':>12} {'compiled ms':>12} {'speedup':>9}")
    for n, g in parse_sizes(args.sizes):
        instances = [
            generate(GenConfig(n=n, m=args.m, g=g, seed=rng.next_u64()))
            for _ in range(args.count)
        ]
        comp_times, comp_out = run_backend(instances, args.t, args.s,
                                           "compiled", args.timeout_ms)
        comp_mean = statistics.mean(comp_times)
        if n > args.skip_pure_above:
            print(f"{n:>6},{g:<3} {'skipped':>12} {comp_mean:>12.3f} "
                  f"{'':>9}")
            continue
        pure_times, pure_out = run_backend(instances, args.t, args.s,
                                           "pure", args.timeout_ms)
        if pure_out != comp_out:
            print(f"backend disagreement at size {n},{g}", file=sys.stderr)
            return 1
        pure_mean = statistics.mean(pure_times)
        print(f"{n:>6},{g:<3} {pure_mean:>12.3f} {comp_mean:>12.3f} "
              f"{pure_mean / comp_mean:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
