"""Consistency and deduction solver for hierarchical lexicographic
preference models.

An instance pairs a non-negative evaluation matrix with strict and
non-strict pairwise preference statements. A model orders disjoint
subsets of the evaluations into levels; alternatives compare
lexicographically level by level on combined values, lower first. The
package decides whether some model with level sets of at most t
evaluations satisfies every statement, extracts witnesses, deduces
entailed statements, exports an equivalent MILP, and benchmarks the
search algorithms on reproducible random instances.
"""

from .core import (ADDITION, EMPTY_MODEL, Combiner, EvaluationMatrix,
                   HclpModel, Ordering3, PreferenceStatement, combine_level,
                   compare_on_set, compose, model_compare, non_strict_version,
                   satisfies, satisfies_all, tied_statements, validate_model)
from .instances import (GenConfig, Instance, ParseError, SplitMix64, generate,
                        parse, parse_statement, serialize)
from .milp import (Bounds, Constraint, MilpFormulation, UnsupportedCombinerError,
                   Variable, assignment_from_model, build_formulation,
                   check_assignment, compute_bounds, read_lp, write_lp)
from .oracle import brute_force_solve, enumerate_models
from .solver import (ConflictStore, SearchConfig, SearchStats, SearchTimeout,
                     SolveResult, c1_solve, candidate_level_sets,
                     conflict_blocks, conflict_insert, deduce,
                     kernel_available, max_singleton_sequence, negate,
                     pc_check)

__version__ = "0.1.0"

__all__ = [
    "ADDITION",
    "Bounds",
    "Combiner",
    "ConflictStore",
    "Constraint",
    "EMPTY_MODEL",
    "EvaluationMatrix",
    "GenConfig",
    "HclpModel",
    "Instance",
    "MilpFormulation",
    "Ordering3",
    "ParseError",
    "PreferenceStatement",
    "SearchConfig",
    "SearchStats",
    "SearchTimeout",
    "SolveResult",
    "SplitMix64",
    "UnsupportedCombinerError",
    "Variable",
    "assignment_from_model",
    "brute_force_solve",
    "build_formulation",
    "c1_solve",
    "candidate_level_sets",
    "check_assignment",
    "combine_level",
    "compare_on_set",
    "compose",
    "compute_bounds",
    "conflict_blocks",
    "conflict_insert",
    "deduce",
    "enumerate_models",
    "generate",
    "kernel_available",
    "max_singleton_sequence",
    "model_compare",
    "negate",
    "non_strict_version",
    "parse",
    "parse_statement",
    "pc_check",
    "read_lp",
    "satisfies",
    "satisfies_all",
    "serialize",
    "tied_statements",
    "validate_model",
    "write_lp",
    "__version__",
]
