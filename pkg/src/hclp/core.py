"""Domain types and lexicographic comparison operations.

An evaluation matrix rates m alternatives with n evaluation functions,
where a lower rating is better (0 is best). A hierarchical model is an
ordered sequence of disjoint level sets of evaluation indices;
alternatives are compared level by level on combined ratings, the most
important level first, and the first level that separates two
alternatives decides between them.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, FrozenSet, Iterable, List, Sequence, Tuple


class Ordering3(IntEnum):
    """Three-way comparison outcome."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


def _cmp(a: int, b: int) -> Ordering3:
    return Ordering3((a > b) - (a < b))


@dataclass(frozen=True, eq=False)
class Combiner:
    """Associative, commutative, strictly monotonic operation with identity.

    Strict monotonicity (combine(x, y) < combine(z, y) iff x < z) is what
    makes comparisons on combined ratings well defined; it rules out
    minimum and maximum as combiners.
    """

    name: str
    fn: Callable[[int, int], int]
    identity: int

    def fold(self, values: Iterable[int]) -> int:
        acc = self.identity
        for value in values:
            acc = self.fn(acc, value)
        return acc

    @property
    def is_addition(self) -> bool:
        return self.fn is operator.add and self.identity == 0

    def __repr__(self) -> str:
        return f"Combiner({self.name!r})"


ADDITION = Combiner("addition", operator.add, 0)


@dataclass(frozen=True)
class EvaluationMatrix:
    """n x m grid of non-negative integer ratings.

    Entry (i, a) is the rating of alternative a under evaluation i.
    Rows are evaluations, columns are alternatives. Python integers are
    unbounded, so combined ratings cannot wrap around regardless of n or
    the value range; the compiled search kernel enforces its own fixed-
    width envelope before it is selected.
    """

    values: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.values)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(
                    f"row {i} has {len(row)} values, expected {width}"
                )
            for v in row:
                if v < 0:
                    raise ValueError(f"negative value {v} in row {i}")
        object.__setattr__(self, "values", rows)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.values[0])

    def value(self, evaluation: int, alternative: int) -> int:
        if not 0 <= evaluation < self.n:
            raise IndexError(
                f"evaluation index {evaluation} out of range 0..{self.n - 1}"
            )
        if not 0 <= alternative < self.m:
            raise IndexError(
                f"alternative index {alternative} out of range 0..{self.m - 1}"
            )
        return self.values[evaluation][alternative]

    def max_value(self) -> int:
        return max(max(row) for row in self.values)


@dataclass(frozen=True)
class PreferenceStatement:
    """Alternative alpha is preferred over beta, strictly or not."""

    alpha: int
    beta: int
    strict: bool = False

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alternative indices must be non-negative")
        if self.alpha == self.beta:
            raise ValueError("degenerate statement: alpha equals beta")

    def __str__(self) -> str:
        op = "<" if self.strict else "<="
        return f"{self.alpha} {op} {self.beta}"


@dataclass(frozen=True)
class HclpModel:
    """Ordered sequence of level sets, most important first.

    Canonical form: empty level sets are dropped at construction (they
    never affect the induced relations). Disjointness is not enforced
    here; validate_model reports overlaps as violations.
    """

    levels: Tuple[FrozenSet[int], ...] = ()

    def __post_init__(self) -> None:
        canon = tuple(
            frozenset(int(i) for i in level) for level in self.levels
        )
        object.__setattr__(
            self, "levels", tuple(level for level in canon if level)
        )

    def sigma(self) -> FrozenSet[int]:
        """Union of all level sets: the evaluations the model uses."""
        used: set = set()
        for level in self.levels:
            used |= level
        return frozenset(used)

    def __str__(self) -> str:
        if not self.levels:
            return "()"
        return " ".join(
            "[" + " ".join(str(i) for i in sorted(level)) + "]"
            for level in self.levels
        )


EMPTY_MODEL = HclpModel(())


def combine_level(
    C: Iterable[int],
    alternative: int,
    E: EvaluationMatrix,
    op: Combiner = ADDITION,
) -> int:
    """Combined rating of one alternative over the evaluations in C.

    Returns the combiner identity for the empty set.
    """
    indices = sorted(set(int(i) for i in C))
    return op.fold(E.value(i, alternative) for i in indices)


def compare_on_set(
    C: Iterable[int],
    a: int,
    b: int,
    E: EvaluationMatrix,
    op: Combiner = ADDITION,
) -> Ordering3:
    """Three-way comparison of alternatives a and b on one level set.

    The lower combined rating wins; the empty set compares every pair
    Equal.
    """
    indices = sorted(set(int(i) for i in C))
    va = op.fold(E.value(i, a) for i in indices)
    vb = op.fold(E.value(i, b) for i in indices)
    return _cmp(va, vb)


def model_compare(
    H: HclpModel,
    a: int,
    b: int,
    E: EvaluationMatrix,
    op: Combiner = ADDITION,
) -> Ordering3:
    """Lexicographic comparison: the first separating level decides.

    Equal when every level (or the empty model) leaves a and b tied.
    """
    for level in H.levels:
        outcome = compare_on_set(level, a, b, E, op)
        if outcome is not Ordering3.EQUAL:
            return outcome
    return Ordering3.EQUAL


def satisfies(
    H: HclpModel,
    statement: PreferenceStatement,
    E: EvaluationMatrix,
    op: Combiner = ADDITION,
) -> bool:
    """Whether the model orders the statement's pair as required.

    A strict statement needs a strictly better alpha; a non-strict one
    also accepts a tie, so the empty model satisfies every non-strict
    statement and no strict one.
    """
    outcome = model_compare(H, statement.alpha, statement.beta, E, op)
    if statement.strict:
        return outcome is Ordering3.LESS
    return outcome is not Ordering3.GREATER


def satisfies_all(
    H: HclpModel,
    statements: Iterable[PreferenceStatement],
    E: EvaluationMatrix,
    op: Combiner = ADDITION,
) -> bool:
    return all(satisfies(H, statement, E, op) for statement in statements)


def tied_statements(
    H: HclpModel,
    statements: Iterable[PreferenceStatement],
    E: EvaluationMatrix,
    op: Combiner = ADDITION,
) -> List[PreferenceStatement]:
    """Statements whose pair the model leaves Equal (not yet strictly
    satisfied). Input order is preserved."""
    return [
        statement
        for statement in statements
        if model_compare(H, statement.alpha, statement.beta, E, op)
        is Ordering3.EQUAL
    ]


def non_strict_version(
    statements: Iterable[PreferenceStatement],
) -> List[PreferenceStatement]:
    """The same pairs with every strictness flag cleared."""
    return [
        PreferenceStatement(statement.alpha, statement.beta, False)
        for statement in statements
    ]


def compose(H: HclpModel, H2: HclpModel) -> HclpModel:
    """H followed by H2 with H's evaluations removed from H2's levels.

    Empty resulting levels are dropped; the result is again canonical.
    """
    used = H.sigma()
    tail = tuple(level - used for level in H2.levels)
    return HclpModel(H.levels + tail)


def validate_model(H: HclpModel, t: int, n: int) -> List[str]:
    """Check the level-size bound, index range, and disjointness.

    Returns a list of violation descriptions, empty when the model is
    valid.
    """
    violations: List[str] = []
    seen: set = set()
    for k, level in enumerate(H.levels):
        if len(level) > t:
            violations.append(
                f"level {k} has size {len(level)}, bound is {t}"
            )
        for i in sorted(level):
            if not 0 <= i < n:
                violations.append(
                    f"level {k} references evaluation {i}, "
                    f"valid range is 0..{n - 1}"
                )
            if i in seen:
                violations.append(
                    f"evaluation {i} appears in more than one level"
                )
        seen |= level
    return violations
