"""Exhaustive ground-truth solver.

Enumerates every hierarchical model over subsets of the evaluations
whose level sets respect the size bound, and tests satisfaction
directly. The model count grows super-exponentially, so this exists for
validating the search algorithms and the MILP round trip on small
instances, not for production solving.
"""

from __future__ import annotations

import time
from itertools import combinations
from typing import Iterable, Iterator, List, Tuple

from .core import (ADDITION, Combiner, EvaluationMatrix, HclpModel,
                   PreferenceStatement, satisfies_all)
from .solver import SearchStats, SolveResult

MAX_ORACLE_INDICES = 10


def _ordered_partitions(
    elems: Tuple[int, ...], t: int
) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    # First block chosen smallest-first then lexicographic, remainder
    # partitioned recursively; every block is nonempty with size <= t.
    if not elems:
        yield ()
        return
    for size in range(1, min(t, len(elems)) + 1):
        for block in combinations(elems, size):
            chosen = set(block)
            rest = tuple(e for e in elems if e not in chosen)
            for tail in _ordered_partitions(rest, t):
                yield (block,) + tail


def enumerate_models(indices: Iterable[int], t: int) -> Iterator[HclpModel]:
    """All canonical models over subsets of the given evaluations.

    Deterministic order: by used subset (size ascending, then
    lexicographic by sorted index tuple), then by partition structure
    (first level smallest-first). The empty model comes first; each
    model appears exactly once.
    """
    idx = tuple(sorted(set(int(i) for i in indices)))
    if len(idx) > MAX_ORACLE_INDICES:
        raise ValueError(
            f"oracle enumeration is limited to {MAX_ORACLE_INDICES} "
            f"evaluations, got {len(idx)}"
        )
    if t < 1:
        raise ValueError("level-size bound t must be at least 1")
    for size in range(len(idx) + 1):
        for subset in combinations(idx, size):
            for partition in _ordered_partitions(subset, t):
                yield HclpModel(tuple(frozenset(b) for b in partition))


def brute_force_solve(
    E: EvaluationMatrix,
    statements: Iterable[PreferenceStatement],
    t: int,
    op: Combiner = ADDITION,
) -> SolveResult:
    """First satisfying model in enumeration order, or Inconsistent.

    The stats nodes counter holds the number of models examined.
    """
    if E.n > MAX_ORACLE_INDICES:
        raise ValueError(
            f"the oracle is limited to n <= {MAX_ORACLE_INDICES}, got {E.n}"
        )
    stmts = list(statements)
    start = time.perf_counter()
    # Additive fast path: per-statement difference rows make the
    # satisfaction test a handful of integer sums per model.
    fast = op.is_addition
    diffs: List[List[int]] = []
    strict: List[bool] = []
    if fast:
        for st in stmts:
            diffs.append([
                E.value(i, st.alpha) - E.value(i, st.beta)
                for i in range(E.n)
            ])
            strict.append(st.strict)

    def satisfied_fast(model: HclpModel) -> bool:
        for d, is_strict in zip(diffs, strict):
            outcome = 0
            for level in model.levels:
                total = 0
                for i in level:
                    total += d[i]
                if total != 0:
                    outcome = total
                    break
            if outcome > 0 or (outcome == 0 and is_strict):
                return False
        return True

    checked = 0
    for model in enumerate_models(range(E.n), t):
        checked += 1
        ok = satisfied_fast(model) if fast else satisfies_all(model, stmts, E, op)
        if ok:
            stats = SearchStats(nodes=checked)
            stats.wall_ms = (time.perf_counter() - start) * 1000.0
            return SolveResult(True, model, stats)
    stats = SearchStats(nodes=checked)
    stats.wall_ms = (time.perf_counter() - start) * 1000.0
    return SolveResult(False, None, stats)
