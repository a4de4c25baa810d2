"""Instance file format and the seeded random instance generator.

The file format is line-oriented UTF-8 text with LF endings:

    line 1: ``hclp 1`` (magic and format version)
    line 2: ``n m g`` (evaluations, alternatives, statements)
    lines 3..n+2: m space-separated non-negative integers (row i is
        evaluation i over alternatives 0..m-1)
    next g lines: ``<i> < <j>`` or ``<i> <= <j>`` with zero-based
        alternative indices

Lines starting with ``#`` are comments and may appear anywhere.
Comments of the form ``# key = value`` are treated as instance
metadata and survive a serialize/parse round trip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .core import EvaluationMatrix, PreferenceStatement

MAGIC = "hclp"
FORMAT_VERSION = 1

_MASK64 = (1 << 64) - 1
_METADATA_RE = re.compile(r"^#\s*([A-Za-z_][A-Za-z0-9_-]*)\s*=\s*(.*?)\s*$")


class ParseError(ValueError):
    """Malformed instance text; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SplitMix64:
    """Deterministic, portable 64-bit pseudo-random generator.

    One step, with all arithmetic modulo 2**64::

        state += 0x9E3779B97F4A7C15
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        output z ^ (z >> 31)

    The same seed yields the same stream on every platform and in any
    language implementing this recurrence, which is what makes generated
    instances reproducible.
    """

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), bias-free.

        Rejection sampling: draws above the largest multiple of bound
        are discarded instead of folded in by the modulus.
        """
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % bound


@dataclass
class Instance:
    """An evaluation matrix plus preference statements and optional
    metadata (generator name, seed, parameters)."""

    matrix: EvaluationMatrix
    statements: Tuple[PreferenceStatement, ...]
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.statements = tuple(self.statements)
        seen = set()
        for statement in self.statements:
            if statement.alpha >= self.matrix.m or statement.beta >= self.matrix.m:
                raise ValueError(
                    f"statement {statement} references an alternative "
                    f"outside 0..{self.matrix.m - 1}"
                )
            pair = (statement.alpha, statement.beta)
            if pair in seen:
                raise ValueError(f"duplicate statement pair {pair}")
            seen.add(pair)


@dataclass(frozen=True)
class GenConfig:
    """Parameters for the random instance generator."""

    n: int
    m: int
    g: int
    domain_max: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1 or self.g < 1:
            raise ValueError("n, m, and g must all be at least 1")
        if self.domain_max < 0:
            raise ValueError("domain_max must be non-negative")
        pair_count = self.m * (self.m - 1) // 2
        if self.g > pair_count:
            raise ValueError(
                f"g={self.g} exceeds the {pair_count} distinct pairs "
                f"over {self.m} alternatives"
            )


def _parse_statement_tokens(
    tokens: Sequence[str], m: Optional[int], line_no: int
) -> PreferenceStatement:
    if len(tokens) != 3 or tokens[1] not in ("<", "<="):
        raise ParseError(
            line_no, "expected a statement of the form '<i> < <j>' or '<i> <= <j>'"
        )
    try:
        alpha, beta = int(tokens[0]), int(tokens[2])
    except ValueError:
        raise ParseError(line_no, "statement indices must be integers") from None
    if alpha < 0 or beta < 0:
        raise ParseError(line_no, "statement indices must be non-negative")
    if m is not None and (alpha >= m or beta >= m):
        raise ParseError(
            line_no, f"alternative index out of range 0..{m - 1}"
        )
    if alpha == beta:
        raise ParseError(line_no, "statement compares an alternative with itself")
    return PreferenceStatement(alpha, beta, tokens[1] == "<")


def parse_statement(text: str, m: Optional[int] = None) -> PreferenceStatement:
    """Parse a single statement such as ``2 < 0`` or ``1 <= 0``."""
    return _parse_statement_tokens(text.split(), m, 1)


def parse(text: str) -> Instance:
    """Parse instance text, rejecting malformed input with line numbers."""
    metadata: Dict[str, str] = {}
    lines: List[Tuple[int, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            match = _METADATA_RE.match(stripped)
            if match:
                metadata[match.group(1)] = match.group(2)
            continue
        lines.append((line_no, stripped))

    cursor = 0
    total = len(text.splitlines())

    def next_line(expected: str) -> Tuple[int, str]:
        nonlocal cursor
        if cursor >= len(lines):
            raise ParseError(total + 1, f"unexpected end of file, expected {expected}")
        entry = lines[cursor]
        cursor += 1
        return entry

    line_no, magic = next_line("the header 'hclp 1'")
    if magic.split() != [MAGIC, str(FORMAT_VERSION)]:
        raise ParseError(line_no, f"expected the header '{MAGIC} {FORMAT_VERSION}'")

    line_no, counts = next_line("'n m g' counts")
    tokens = counts.split()
    if len(tokens) != 3:
        raise ParseError(line_no, "expected three integers 'n m g'")
    try:
        n, m, g = (int(tok) for tok in tokens)
    except ValueError:
        raise ParseError(line_no, "expected three integers 'n m g'") from None
    if n < 1 or m < 1 or g < 0:
        raise ParseError(line_no, "need n >= 1, m >= 1, g >= 0")

    rows: List[List[int]] = []
    for i in range(n):
        line_no, row_text = next_line(f"matrix row {i}")
        tokens = row_text.split()
        if len(tokens) != m:
            raise ParseError(
                line_no, f"matrix row {i} has {len(tokens)} values, expected {m}"
            )
        row: List[int] = []
        for tok in tokens:
            try:
                value = int(tok)
            except ValueError:
                raise ParseError(line_no, f"invalid matrix value {tok!r}") from None
            if value < 0:
                raise ParseError(line_no, f"negative matrix value {value}")
            row.append(value)
        rows.append(row)

    statements: List[PreferenceStatement] = []
    seen_pairs = set()
    for k in range(g):
        line_no, stmt_text = next_line(f"statement {k}")
        statement = _parse_statement_tokens(stmt_text.split(), m, line_no)
        pair = (statement.alpha, statement.beta)
        if pair in seen_pairs:
            raise ParseError(line_no, f"duplicate statement pair {pair}")
        seen_pairs.add(pair)
        statements.append(statement)

    if cursor < len(lines):
        line_no, extra = lines[cursor]
        raise ParseError(line_no, f"trailing content {extra!r}")

    return Instance(EvaluationMatrix(tuple(tuple(r) for r in rows)),
                    tuple(statements), metadata)


def serialize(instance: Instance) -> str:
    """Instance text that parses back to an equal Instance.

    Byte-deterministic: metadata is emitted in insertion order, matrix
    rows and statements in instance order.
    """
    out: List[str] = [f"{MAGIC} {FORMAT_VERSION}"]
    for key, value in instance.metadata.items():
        if not _METADATA_RE.match(f"# {key} = {value}"):
            raise ValueError(f"metadata entry {key!r}={value!r} is not serializable")
        out.append(f"# {key} = {value}")
    E = instance.matrix
    out.append(f"{E.n} {E.m} {len(instance.statements)}")
    for row in E.values:
        out.append(" ".join(str(v) for v in row))
    for statement in instance.statements:
        out.append(str(statement))
    return "\n".join(out) + "\n"


def generate(cfg: GenConfig) -> Instance:
    """Seeded random instance.

    Matrix entries are uniform over {0..domain_max}, drawn row-major.
    The g statement pairs (i, j) with i < j are a uniform sample without
    replacement, taken as the prefix of a partial Fisher-Yates shuffle
    of the ascending pair list; orienting every statement up the index
    order keeps the statement graph acyclic. The first ceil(g/2)
    statements are strict, the rest non-strict.
    """
    rng = SplitMix64(cfg.seed)
    rows = tuple(
        tuple(rng.below(cfg.domain_max + 1) for _ in range(cfg.m))
        for _ in range(cfg.n)
    )
    pairs = [(i, j) for i in range(cfg.m) for j in range(i + 1, cfg.m)]
    for k in range(cfg.g):
        swap = k + rng.below(len(pairs) - k)
        pairs[k], pairs[swap] = pairs[swap], pairs[k]
    strict_count = (cfg.g + 1) // 2
    statements = tuple(
        PreferenceStatement(alpha, beta, k < strict_count)
        for k, (alpha, beta) in enumerate(pairs[: cfg.g])
    )
    metadata = {
        "generator": "splitmix64",
        "seed": str(cfg.seed),
        "domain_max": str(cfg.domain_max),
    }
    return Instance(EvaluationMatrix(rows), statements, metadata)
