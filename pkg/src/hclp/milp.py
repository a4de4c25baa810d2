"""Mixed-integer formulation of the consistency problem.

Builds the feasibility MILP for a given instance and level-size bound,
writes it as solver-agnostic LP text, reads that text back, and checks
variable assignments against the constraints in exact integer
arithmetic. No solver is embedded; exported .lp files can be fed to any
external MILP solver.

Variable name grammar (all indices zero-based):

    y_<i>_<j>       evaluation i placed in level j          (binary)
    x_<j>_<phi>     combined rating difference of statement
                    phi's pair on level j                   (integer)
    slt_<j>_<phi>   x_<j>_<phi> < 0                         (binary)
    sgt_<j>_<phi>   x_<j>_<phi> > 0                         (binary)
    seq_<j>_<phi>   x_<j>_<phi> = 0                         (binary)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (ADDITION, Combiner, EvaluationMatrix, HclpModel,
                   PreferenceStatement, validate_model)


class UnsupportedCombinerError(ValueError):
    """The formulation's closed forms require the additive combiner."""


@dataclass(frozen=True)
class Bounds:
    """Per-statement bounds on the per-level combined difference."""

    m_lo: int
    m_hi: int

    def __post_init__(self) -> None:
        # The empty level attains 0, so the bounds always straddle it.
        if not self.m_lo <= 0 <= self.m_hi:
            raise ValueError(f"bounds ({self.m_lo}, {self.m_hi}) must straddle 0")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str            # "binary" or "integer"
    lower: int
    upper: int


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: Tuple[Tuple[int, str], ...]
    sense: str           # "<=", ">=", or "="
    rhs: int


_NAME_RE = re.compile(r"^(y|x|slt|sgt|seq)_(\d+)_(\d+)$")


def variable_provenance(name: str) -> Tuple[str, int, int]:
    """Decode a variable name into (family, first index, second index).

    For y the indices are (evaluation, level); for the others they are
    (level, statement).
    """
    match = _NAME_RE.match(name)
    if not match:
        raise ValueError(f"unrecognized variable name {name!r}")
    return match.group(1), int(match.group(2)), int(match.group(3))


@dataclass(frozen=True)
class MilpFormulation:
    """Variables plus linear constraints; the objective is constant 0."""

    variables: Tuple[Variable, ...]
    constraints: Tuple[Constraint, ...]

    def variable_names(self) -> List[str]:
        return [v.name for v in self.variables]

    def provenance(self) -> Dict[str, Tuple[str, int, int]]:
        """Name-derived map from every variable to its indices."""
        return {v.name: variable_provenance(v.name) for v in self.variables}


def _require_addition(op: Combiner) -> None:
    if not op.is_addition:
        raise UnsupportedCombinerError(
            "the MILP closed forms sum signed rating differences and "
            "require the additive combiner"
        )


def compute_bounds(
    E: EvaluationMatrix,
    statement: PreferenceStatement,
    op: Combiner = ADDITION,
) -> Bounds:
    """Tightest bounds on the per-level difference for one statement.

    The lower bound sums the negative per-evaluation differences, the
    upper bound the positive ones.
    """
    _require_addition(op)
    diffs = [
        E.value(i, statement.alpha) - E.value(i, statement.beta)
        for i in range(E.n)
    ]
    return Bounds(
        sum(d for d in diffs if d < 0),
        sum(d for d in diffs if d > 0),
    )


def build_formulation(
    E: EvaluationMatrix,
    statements: Iterable[PreferenceStatement],
    t: int,
    op: Combiner = ADDITION,
) -> MilpFormulation:
    """Feasibility formulation for the consistency problem at bound t.

    Exactly n*n + 4*n*g variables and 2*n + 7*n*g + (number of strict
    statements) constraints, in a fixed deterministic order.
    """
    _require_addition(op)
    if t < 1:
        raise ValueError("level-size bound t must be at least 1")
    stmts = list(statements)
    for st in stmts:
        if st.alpha >= E.m or st.beta >= E.m:
            raise ValueError(
                f"statement {st} references an alternative outside 0..{E.m - 1}"
            )
    n = E.n
    g = len(stmts)
    diffs = [
        [E.value(i, st.alpha) - E.value(i, st.beta) for i in range(n)]
        for st in stmts
    ]
    bounds = [
        Bounds(sum(d for d in row if d < 0), sum(d for d in row if d > 0))
        for row in diffs
    ]

    variables: List[Variable] = []
    for i in range(n):
        for j in range(n):
            variables.append(Variable(f"y_{i}_{j}", "binary", 0, 1))
    for p in range(g):
        for j in range(n):
            variables.append(Variable(f"slt_{j}_{p}", "binary", 0, 1))
            variables.append(Variable(f"sgt_{j}_{p}", "binary", 0, 1))
            variables.append(Variable(f"seq_{j}_{p}", "binary", 0, 1))
    for p in range(g):
        for j in range(n):
            variables.append(
                Variable(f"x_{j}_{p}", "integer", bounds[p].m_lo, bounds[p].m_hi)
            )

    constraints: List[Constraint] = []

    def add(terms: Sequence[Tuple[int, str]], sense: str, rhs: int) -> None:
        constraints.append(
            Constraint(f"c{len(constraints)}", tuple(terms), sense, rhs)
        )

    # (1) each evaluation sits in at most one level; levels hold at most
    # t evaluations
    for i in range(n):
        add([(1, f"y_{i}_{j}") for j in range(n)], "<=", 1)
    for j in range(n):
        add([(1, f"y_{i}_{j}") for i in range(n)], "<=", t)
    # (2) x is the combined difference of the level's members
    for p in range(g):
        for j in range(n):
            terms = [(diffs[p][i], f"y_{i}_{j}") for i in range(n)
                     if diffs[p][i] != 0]
            terms.append((-1, f"x_{j}_{p}"))
            add(terms, "=", 0)
    # (3) exactly one sign indicator holds
    for p in range(g):
        for j in range(n):
            add([(1, f"slt_{j}_{p}"), (1, f"sgt_{j}_{p}"),
                 (1, f"seq_{j}_{p}")], "=", 1)
    # (4) slt forces x < 0
    for p in range(g):
        hi = bounds[p].m_hi
        for j in range(n):
            add([(1, f"x_{j}_{p}"), (hi + 1, f"slt_{j}_{p}")], "<=", hi)
    # (5) sgt forces x > 0
    for p in range(g):
        lo = bounds[p].m_lo
        for j in range(n):
            add([(1, f"x_{j}_{p}"), (lo - 1, f"sgt_{j}_{p}")], ">=", lo)
    # (6) seq forces x >= 0
    for p in range(g):
        lo = bounds[p].m_lo
        for j in range(n):
            terms = [(1, f"x_{j}_{p}")]
            if lo != 0:
                terms.append((lo, f"seq_{j}_{p}"))
            add(terms, ">=", lo)
    # (7) seq forces x <= 0
    for p in range(g):
        hi = bounds[p].m_hi
        for j in range(n):
            terms = [(1, f"x_{j}_{p}")]
            if hi != 0:
                terms.append((hi, f"seq_{j}_{p}"))
            add(terms, "<=", hi)
    # (8) an opposing level needs an earlier supporting level
    for p in range(g):
        for j in range(n):
            terms = [(1, f"slt_{jj}_{p}") for jj in range(j)]
            terms.append((-1, f"sgt_{j}_{p}"))
            add(terms, ">=", 0)
    # (9) strict statements need a supporting level somewhere
    for p, st in enumerate(stmts):
        if st.strict:
            add([(1, f"slt_{j}_{p}") for j in range(n)], ">=", 1)

    return MilpFormulation(tuple(variables), tuple(constraints))


def _terms_text(terms: Sequence[Tuple[int, str]]) -> str:
    parts: List[str] = []
    for k, (coef, name) in enumerate(terms):
        magnitude = abs(coef)
        body = name if magnitude == 1 else f"{magnitude} {name}"
        if k == 0:
            parts.append(body if coef > 0 else f"- {body}")
        else:
            parts.append((" + " if coef > 0 else " - ") + body)
    return "".join(parts)


def write_lp(formulation: MilpFormulation, sink=None) -> str:
    """LP-format text for the formulation; byte-deterministic.

    Sections: a constant-zero Minimize objective, Subject To, Bounds for
    the integer variables, Binary and General variable lists, End. When
    sink is given, the text is also written to it.
    """
    lines: List[str] = []
    lines.append("Minimize")
    lines.append(f" obj: 0 {formulation.variables[0].name}")
    lines.append("Subject To")
    for constraint in formulation.constraints:
        lines.append(
            f" {constraint.name}: {_terms_text(constraint.terms)} "
            f"{constraint.sense} {constraint.rhs}"
        )
    integers = [v for v in formulation.variables if v.kind == "integer"]
    binaries = [v for v in formulation.variables if v.kind == "binary"]
    if integers:
        lines.append("Bounds")
        for v in integers:
            lines.append(f" {v.lower} <= {v.name} <= {v.upper}")
    if binaries:
        lines.append("Binary")
        for v in binaries:
            lines.append(f" {v.name}")
    if integers:
        lines.append("General")
        for v in integers:
            lines.append(f" {v.name}")
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if sink is not None:
        sink.write(text)
    return text


def _parse_terms(tokens: List[str], line_no: int) -> Tuple[Tuple[int, str], ...]:
    terms: List[Tuple[int, str]] = []
    sign = 1
    magnitude: Optional[int] = None
    for tok in tokens:
        if tok == "+":
            sign = 1
        elif tok == "-":
            sign = -1
        elif re.fullmatch(r"\d+", tok):
            if magnitude is not None:
                raise ValueError(
                    f"line {line_no}: two consecutive coefficients"
                )
            magnitude = int(tok)
        else:
            terms.append((sign * (1 if magnitude is None else magnitude), tok))
            sign = 1
            magnitude = None
    if magnitude is not None:
        raise ValueError(f"line {line_no}: dangling coefficient")
    return tuple(terms)


def read_lp(text: str) -> MilpFormulation:
    """Parse LP text produced by write_lp back into a formulation.

    Binary variables keep their listed order, then integer variables
    theirs, which reproduces the builder's variable table.
    """
    section = None
    constraints: List[Constraint] = []
    bounds: Dict[str, Tuple[int, int]] = {}
    binary_names: List[str] = []
    integer_names: List[str] = []
    headers = {"minimize", "subject to", "bounds", "binary", "general", "end"}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("\\"):
            continue
        lowered = stripped.lower()
        if lowered in headers:
            section = lowered
            continue
        if section == "minimize":
            continue
        if section == "subject to":
            if ":" not in stripped:
                raise ValueError(f"line {line_no}: missing constraint name")
            name, _, body = stripped.partition(":")
            tokens = body.split()
            sense_at = next(
                (k for k, tok in enumerate(tokens) if tok in ("<=", ">=", "=")),
                None,
            )
            if sense_at is None or sense_at != len(tokens) - 2:
                raise ValueError(
                    f"line {line_no}: expected '<terms> <sense> <integer>'"
                )
            constraints.append(Constraint(
                name.strip(),
                _parse_terms(tokens[:sense_at], line_no),
                tokens[sense_at],
                int(tokens[-1]),
            ))
        elif section == "bounds":
            tokens = stripped.split()
            if len(tokens) != 5 or tokens[1] != "<=" or tokens[3] != "<=":
                raise ValueError(
                    f"line {line_no}: expected '<lo> <= <name> <= <hi>'"
                )
            bounds[tokens[2]] = (int(tokens[0]), int(tokens[4]))
        elif section == "binary":
            binary_names.append(stripped)
        elif section == "general":
            integer_names.append(stripped)
        elif section == "end":
            raise ValueError(f"line {line_no}: content after End")
        else:
            raise ValueError(f"line {line_no}: content outside any section")
    variables = [Variable(name, "binary", 0, 1) for name in binary_names]
    for name in integer_names:
        if name not in bounds:
            raise ValueError(f"integer variable {name} has no bounds entry")
        lo, hi = bounds[name]
        variables.append(Variable(name, "integer", lo, hi))
    return MilpFormulation(tuple(variables), tuple(constraints))


def assignment_from_model(
    H: HclpModel,
    E: EvaluationMatrix,
    statements: Iterable[PreferenceStatement],
    t: int,
    op: Combiner = ADDITION,
) -> Dict[str, int]:
    """Variable assignment encoding the model, level k at position k.

    Positions after the last level stay empty (all-zero y column, zero
    difference, seq set); trailing placement keeps every supporting
    level ahead of any opposing one, which the prefix constraints need.
    """
    _require_addition(op)
    violations = validate_model(H, t, E.n)
    if violations:
        raise ValueError("invalid model: " + "; ".join(violations))
    stmts = list(statements)
    n = E.n
    level_of: Dict[int, int] = {}
    for j, level in enumerate(H.levels):
        for i in level:
            level_of[i] = j
    assignment: Dict[str, int] = {}
    for i in range(n):
        for j in range(n):
            assignment[f"y_{i}_{j}"] = 1 if level_of.get(i) == j else 0
    for p, st in enumerate(stmts):
        for j in range(n):
            if j < len(H.levels):
                x = sum(
                    E.value(i, st.alpha) - E.value(i, st.beta)
                    for i in H.levels[j]
                )
            else:
                x = 0
            assignment[f"x_{j}_{p}"] = x
            assignment[f"slt_{j}_{p}"] = 1 if x < 0 else 0
            assignment[f"sgt_{j}_{p}"] = 1 if x > 0 else 0
            assignment[f"seq_{j}_{p}"] = 1 if x == 0 else 0
    return assignment


def check_assignment(
    formulation: MilpFormulation, assignment: Dict[str, int]
) -> List[str]:
    """Names of the constraints the assignment violates (empty when ok).

    Every constraint is evaluated in exact integer arithmetic. A missing
    variable is an input error, not a violation.
    """
    missing = [
        v.name for v in formulation.variables if v.name not in assignment
    ]
    if missing:
        raise ValueError(
            f"assignment is missing {len(missing)} variables, "
            f"first {missing[0]}"
        )
    violated: List[str] = []
    for constraint in formulation.constraints:
        lhs = sum(coef * assignment[name] for coef, name in constraint.terms)
        if constraint.sense == "<=":
            ok = lhs <= constraint.rhs
        elif constraint.sense == ">=":
            ok = lhs >= constraint.rhs
        else:
            ok = lhs == constraint.rhs
        if not ok:
            violated.append(constraint.name)
    return violated
