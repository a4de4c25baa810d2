"""Shared fixtures: the two worked instances used across the suite.

Dessert instance: alternatives apple pie (AP=0), chocolate cake (CC=1),
ice cream (IC=2); evaluations cost (c=0), sugar (s=1), fat (f=2).
Statements: IC < AP strict, CC <= AP.

Chain instance: five evaluations c1..c5 (indices 0..4) rating four
alternatives 0..3; statements 0 <= 1, 1 <= 2, 2 < 3 strict. Consistent
without the strict statement, inconsistent with it at any t.
"""

import pytest

from hclp import EvaluationMatrix, PreferenceStatement

AP, CC, IC = 0, 1, 2
COST, SUGAR, FAT = 0, 1, 2

C1, C2, C3, C4, C5 = 0, 1, 2, 3, 4


@pytest.fixture
def dessert_matrix() -> EvaluationMatrix:
    return EvaluationMatrix((
        (10, 13, 11),
        (23, 23, 16),
        (20, 17, 24),
    ))


@pytest.fixture
def dessert_statements():
    return [
        PreferenceStatement(IC, AP, strict=True),
        PreferenceStatement(CC, AP),
    ]


@pytest.fixture
def chain_matrix() -> EvaluationMatrix:
    return EvaluationMatrix((
        (1, 0, 0, 0),
        (0, 2, 2, 2),
        (1, 1, 0, 1),
        (0, 2, 1, 1),
        (2, 0, 1, 0),
    ))


@pytest.fixture
def chain_statements():
    return [
        PreferenceStatement(0, 1),
        PreferenceStatement(1, 2),
        PreferenceStatement(2, 3, strict=True),
    ]
