"""Consistency and deduction procedures.

Implements the greedy single-evaluation check, the recursive
consistency search with optional conflict learning, and the deduction
reduction. Two interchangeable search backends exist: a compiled kernel
(additive combiner, n <= 64, bounded values) and a pure-Python engine.
Both follow the identical enumeration order and count the identical
statistics, so verdicts, witnesses, and stats never depend on which one
ran.
"""

from __future__ import annotations

import os
import time
from array import array
from dataclasses import dataclass
from itertools import combinations
from typing import (FrozenSet, Iterable, Iterator, List, Optional, Sequence,
                    Tuple)

from .core import (ADDITION, Combiner, EvaluationMatrix, HclpModel, Ordering3,
                   PreferenceStatement, compare_on_set)

try:
    from . import _kernel
except ImportError:
    _kernel = None

# Envelope for the compiled backend: level masks are 64-bit and combined
# differences must fit a signed 64-bit integer.
KERNEL_MAX_N = 64
KERNEL_MAX_VALUE = 10 ** 6
_CHECK_EVERY = 65536


def kernel_available() -> bool:
    return _kernel is not None


@dataclass
class SearchStats:
    """Counters accumulated during one solve."""

    nodes: int = 0
    candidates: int = 0
    skipped: int = 0
    singleton_calls: int = 0
    learned: int = 0
    wall_ms: float = 0.0


@dataclass(frozen=True)
class SearchConfig:
    """Level-size bound t, conflict learning switch, and the cardinality
    bound s on learned sets. Bounds larger than n are clamped to n at
    solve time."""

    t: int
    conflicts: bool = False
    s: int = 5

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError("level-size bound t must be at least 1")
        if self.conflicts and self.s < 2:
            raise ValueError("conflict-size bound s must be at least 2")


@dataclass(frozen=True)
class SolveResult:
    consistent: bool
    witness: Optional[HclpModel]
    stats: SearchStats

    @property
    def verdict(self) -> str:
        return "consistent" if self.consistent else "inconsistent"


class SearchTimeout(Exception):
    """Deadline expired; partial statistics are preserved."""

    def __init__(self, stats: SearchStats) -> None:
        super().__init__("search deadline expired")
        self.stats = stats


class ConflictStore:
    """Learned conflicting sets with subset queries and scoped rollback.

    Invariant: no stored set is a superset of another stored set
    (dominated entries are pruned on insert, since a stored subset
    already implies the pruning). mark/rollback give stack-scoped undo
    so that sets learned inside a subtree can be discarded when the
    search retreats above the prefix that justified them.
    """

    def __init__(self, s: int = 5) -> None:
        if s < 2:
            raise ValueError("cardinality bound s must be at least 2")
        self.s = s
        self._sets: List[FrozenSet[int]] = []
        self._journal: List[Tuple[str, FrozenSet[int]]] = []

    def __len__(self) -> int:
        return len(self._sets)

    def __iter__(self) -> Iterator[FrozenSet[int]]:
        return iter(self._sets)

    def sets(self) -> List[FrozenSet[int]]:
        return list(self._sets)

    def blocks(self, C: Iterable[int]) -> bool:
        """True iff some stored set is contained in C."""
        candidate = frozenset(C)
        return any(stored <= candidate for stored in self._sets)

    def insert(self, C: Iterable[int]) -> bool:
        """Store C unless a stored subset already covers it.

        Stored supersets of C become redundant and are removed. Returns
        True when C was actually added.
        """
        candidate = frozenset(C)
        if not 2 <= len(candidate) <= self.s:
            raise ValueError(
                f"stored sets must have size in [2, {self.s}], "
                f"got {len(candidate)}"
            )
        if self.blocks(candidate):
            return False
        for dominated in [s for s in self._sets if candidate <= s]:
            self._sets.remove(dominated)
            self._journal.append(("kill", dominated))
        self._sets.append(candidate)
        self._journal.append(("add", candidate))
        return True

    def mark(self) -> int:
        return len(self._journal)

    def rollback(self, mark: int) -> None:
        """Undo every insert (and its pruning) made after mark."""
        while len(self._journal) > mark:
            kind, stored = self._journal.pop()
            if kind == "add":
                self._sets.remove(stored)
            else:
                self._sets.append(stored)


def conflict_insert(store: ConflictStore, C: Iterable[int]) -> bool:
    return store.insert(C)


def conflict_blocks(store: ConflictStore, C: Iterable[int]) -> bool:
    return store.blocks(C)


def negate(statement: PreferenceStatement) -> PreferenceStatement:
    """Swap the pair and flip strictness: not (a <= b) is (b < a), and
    not (a < b) is (b <= a)."""
    return PreferenceStatement(statement.beta, statement.alpha,
                               not statement.strict)


def _validate_statements(
    E: EvaluationMatrix, statements: Sequence[PreferenceStatement]
) -> None:
    for statement in statements:
        if statement.alpha >= E.m or statement.beta >= E.m:
            raise ValueError(
                f"statement {statement} references an alternative "
                f"outside 0..{E.m - 1}"
            )


def _greedy(
    avail: List[int],
    tied: List[PreferenceStatement],
    E: EvaluationMatrix,
    op: Combiner,
) -> Tuple[List[int], List[PreferenceStatement]]:
    # Singleton comparisons reduce to the raw values: strict monotonicity
    # of the combiner preserves the order of single ratings.
    seq: List[int] = []
    remaining = list(avail)
    cur = list(tied)
    added = True
    while added:
        added = False
        i = 0
        while i < len(remaining):
            e = remaining[i]
            if any(E.value(e, st.alpha) > E.value(e, st.beta) for st in cur):
                i += 1
                continue
            seq.append(e)
            remaining.pop(i)
            cur = [st for st in cur
                   if E.value(e, st.alpha) == E.value(e, st.beta)]
            added = True
    return seq, cur


def max_singleton_sequence(
    available: Iterable[int],
    gamma_active: Iterable[PreferenceStatement],
    E: EvaluationMatrix,
    op: Combiner = ADDITION,
) -> List[int]:
    """Greedy non-extendable chain of singleton levels.

    Repeatedly scans the available evaluations in ascending index order
    and appends an evaluation as a singleton level whenever it does not
    order alpha above beta for any statement still tied; statements tied
    so far are updated as levels are appended, and a full pass that adds
    nothing ends the scan.
    """
    seq, _ = _greedy(sorted(set(available)), list(gamma_active), E, op)
    return seq


def c1_solve(
    E: EvaluationMatrix,
    statements: Iterable[PreferenceStatement],
    op: Combiner = ADDITION,
) -> SolveResult:
    """Greedy consistency check for single-evaluation levels.

    Builds the maximal singleton sequence over all evaluations and never
    backtracks; consistent iff no strict statement is left tied.
    """
    stmts = list(statements)
    _validate_statements(E, stmts)
    start = time.perf_counter()
    seq, tied = _greedy(list(range(E.n)), stmts, E, op)
    consistent = not any(st.strict for st in tied)
    stats = SearchStats(nodes=1, singleton_calls=1)
    stats.wall_ms = (time.perf_counter() - start) * 1000.0
    witness = None
    if consistent:
        witness = HclpModel(tuple(frozenset([e]) for e in seq))
    return SolveResult(consistent, witness, stats)


def candidate_level_sets(
    available: Iterable[int],
    tied: Iterable[PreferenceStatement],
    cfg: SearchConfig,
    store: Optional[ConflictStore],
    E: EvaluationMatrix,
    op: Combiner = ADDITION,
) -> Iterator[FrozenSet[int]]:
    """Stream of admissible next level sets.

    Sizes 2..t, smaller sets first, ties broken by the sorted index
    tuple; sets containing a stored conflicting set are skipped (when
    learning is enabled), and sets ordering alpha above beta for some
    tied statement are filtered out.
    """
    avail = sorted(set(available))
    tied_list = list(tied)
    t_eff = min(cfg.t, len(avail))
    for k in range(2, t_eff + 1):
        for comb in combinations(avail, k):
            candidate = frozenset(comb)
            if cfg.conflicts and store is not None and store.blocks(candidate):
                continue
            if any(
                compare_on_set(comb, st.alpha, st.beta, E, op)
                is Ordering3.GREATER
                for st in tied_list
            ):
                continue
            yield candidate


def _pure_solve(
    E: EvaluationMatrix,
    stmts: List[PreferenceStatement],
    cfg: SearchConfig,
    op: Combiner,
    deadline: Optional[float],
) -> Tuple[bool, Optional[List[FrozenSet[int]]], SearchStats]:
    n = E.n
    stats = SearchStats()
    t_eff = min(cfg.t, n)
    s_eff = min(cfg.s, n)
    store = ConflictStore(max(s_eff, 2)) if cfg.conflicts else None
    strict = [st.strict for st in stmts]
    aval = [[E.value(i, st.alpha) for i in range(n)] for st in stmts]
    bval = [[E.value(i, st.beta) for i in range(n)] for st in stmts]
    since_check = [0]

    def check_deadline() -> None:
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout(stats)

    def node(avail: List[int], tied: List[int]) -> Optional[List[FrozenSet[int]]]:
        stats.nodes += 1
        stats.singleton_calls += 1
        check_deadline()
        # Greedy singleton extension: ascending-index passes with the
        # tied set updated mid-pass, repeated until a pass adds nothing.
        seq: List[int] = []
        remaining = list(avail)
        cur = list(tied)
        added = True
        while added:
            added = False
            i = 0
            while i < len(remaining):
                e = remaining[i]
                if any(aval[p][e] > bval[p][e] for p in cur):
                    i += 1
                    continue
                seq.append(e)
                remaining.pop(i)
                cur = [p for p in cur if aval[p][e] == bval[p][e]]
                added = True
        local = [frozenset([e]) for e in seq]
        if not any(strict[p] for p in cur):
            return local
        mark = store.mark() if store is not None else 0
        maxk = min(t_eff, len(remaining))
        for k in range(2, maxk + 1):
            for comb in combinations(remaining, k):
                stats.candidates += 1
                since_check[0] += 1
                if since_check[0] >= _CHECK_EVERY:
                    since_check[0] = 0
                    check_deadline()
                candidate = frozenset(comb)
                if store is not None and store.blocks(candidate):
                    stats.skipped += 1
                    continue
                opposed = False
                new_tied: List[int] = []
                for p in cur:
                    va = op.fold(aval[p][i] for i in comb)
                    vb = op.fold(bval[p][i] for i in comb)
                    if va > vb:
                        opposed = True
                        break
                    if va == vb:
                        new_tied.append(p)
                if opposed:
                    continue
                if not any(strict[p] for p in new_tied):
                    return local + [candidate]
                rest = [i for i in remaining if i not in candidate]
                sub = node(rest, new_tied)
                if sub is not None:
                    return local + [candidate] + sub
                if store is not None and k <= s_eff:
                    if store.insert(candidate):
                        stats.learned += 1
        if store is not None:
            store.rollback(mark)
        return None

    levels = node(list(range(n)), list(range(len(stmts))))
    return levels is not None, levels, stats


def _kernel_solve(
    E: EvaluationMatrix,
    stmts: List[PreferenceStatement],
    cfg: SearchConfig,
    deadline: Optional[float],
) -> Tuple[bool, Optional[List[FrozenSet[int]]], SearchStats]:
    n = E.n
    g = len(stmts)
    diffs = array("q", (
        E.value(i, st.alpha) - E.value(i, st.beta)
        for st in stmts for i in range(n)
    ))
    strict = array("B", (1 if st.strict else 0 for st in stmts))
    t_eff = min(cfg.t, n)
    s_eff = min(cfg.s, n) if cfg.conflicts else 0
    dl = -1.0 if deadline is None else deadline
    status, masks, raw = _kernel.solve(
        diffs, strict, n, g, t_eff, 1 if cfg.conflicts else 0, s_eff, dl
    )
    stats = SearchStats(nodes=raw[0], candidates=raw[1], skipped=raw[2],
                        singleton_calls=raw[3], learned=raw[4])
    if status < 0:
        raise SearchTimeout(stats)
    levels = None
    if status == 1:
        levels = [
            frozenset(i for i in range(n) if (mask >> i) & 1)
            for mask in masks
        ]
    return status == 1, levels, stats


def _kernel_supports(E: EvaluationMatrix, op: Combiner) -> Tuple[bool, str]:
    if not op.is_addition:
        return False, "the compiled kernel only supports the additive combiner"
    if E.n > KERNEL_MAX_N:
        return False, f"the compiled kernel is limited to n <= {KERNEL_MAX_N}"
    if E.max_value() > KERNEL_MAX_VALUE:
        return False, (
            f"the compiled kernel is limited to values <= {KERNEL_MAX_VALUE}"
        )
    return True, ""


def _resolve_backend(backend: str, E: EvaluationMatrix, op: Combiner) -> str:
    if backend not in ("auto", "pure", "compiled"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "pure":
        return "pure"
    supported, reason = (False, "the compiled kernel is not installed")
    if _kernel is not None:
        supported, reason = _kernel_supports(E, op)
    if backend == "compiled":
        if not supported:
            raise RuntimeError(reason)
        return "compiled"
    if supported and not os.environ.get("HCLP_PURE"):
        return "compiled"
    return "pure"


def pc_check(
    E: EvaluationMatrix,
    statements: Iterable[PreferenceStatement],
    cfg: SearchConfig,
    op: Combiner = ADDITION,
    backend: str = "auto",
    timeout_ms: Optional[float] = None,
) -> SolveResult:
    """Recursive consistency check for bounded-size level sets.

    Each search node first extends the model by the maximal singleton
    sequence (never a backtrack point), succeeds when no strict
    statement remains tied, and otherwise tries candidate level sets of
    sizes 2..t in the fixed enumeration order. A candidate that leaves a
    strict statement tied starts a child node on the still-tied
    statements and remaining evaluations; when learning is enabled, a
    candidate whose child fails is recorded as a conflicting set (sizes
    up to s), valid for the prefix that learned it, and later candidates
    containing any recorded set are skipped.
    """
    stmts = list(statements)
    _validate_statements(E, stmts)
    deadline = None
    if timeout_ms is not None:
        deadline = time.monotonic() + timeout_ms / 1000.0
    chosen = _resolve_backend(backend, E, op)
    start = time.perf_counter()
    try:
        if chosen == "compiled":
            consistent, levels, stats = _kernel_solve(E, stmts, cfg, deadline)
        else:
            consistent, levels, stats = _pure_solve(E, stmts, cfg, op, deadline)
    except SearchTimeout as timeout:
        timeout.stats.wall_ms = (time.perf_counter() - start) * 1000.0
        raise
    stats.wall_ms = (time.perf_counter() - start) * 1000.0
    witness = HclpModel(tuple(levels)) if consistent else None
    return SolveResult(consistent, witness, stats)


def deduce(
    E: EvaluationMatrix,
    statements: Iterable[PreferenceStatement],
    statement: PreferenceStatement,
    cfg: SearchConfig,
    op: Combiner = ADDITION,
    backend: str = "auto",
    timeout_ms: Optional[float] = None,
) -> bool:
    """Whether every model satisfying the statement set also satisfies
    the query.

    Reduction: the query follows iff the statements together with its
    negation are inconsistent.
    """
    stmts = list(statements)
    if statement in stmts:
        raise ValueError("the query statement is already asserted")
    result = pc_check(E, stmts + [negate(statement)], cfg, op, backend,
                      timeout_ms)
    return not result.consistent
