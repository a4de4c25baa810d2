import random

import pytest

from hclp import (ADDITION, EMPTY_MODEL, Combiner, EvaluationMatrix, HclpModel,
                  Ordering3, PreferenceStatement, combine_level, compare_on_set,
                  compose, model_compare, non_strict_version, satisfies,
                  satisfies_all, tied_statements, validate_model)
from tests.conftest import AP, CC, COST, FAT, IC, SUGAR


def model(*levels):
    return HclpModel(tuple(frozenset(level) for level in levels))


def test_matrix_validation():
    with pytest.raises(ValueError):
        EvaluationMatrix(())
    with pytest.raises(ValueError):
        EvaluationMatrix(((1, 2), (3,)))
    with pytest.raises(ValueError):
        EvaluationMatrix(((1, -2),))
    E = EvaluationMatrix(((1, 2), (3, 4)))
    assert (E.n, E.m) == (2, 2)
    assert E.value(1, 0) == 3
    with pytest.raises(IndexError):
        E.value(2, 0)
    with pytest.raises(IndexError):
        E.value(0, 2)
    assert E.max_value() == 4


def test_statement_validation_and_text():
    st = PreferenceStatement(2, 0, strict=True)
    assert str(st) == "2 < 0"
    assert str(PreferenceStatement(1, 0)) == "1 <= 0"
    with pytest.raises(ValueError):
        PreferenceStatement(1, 1)
    with pytest.raises(ValueError):
        PreferenceStatement(-1, 0)


def test_model_canonical_form():
    H = HclpModel((frozenset(), frozenset({1}), frozenset(), frozenset({0, 2})))
    assert H.levels == (frozenset({1}), frozenset({0, 2}))
    assert H.sigma() == frozenset({0, 1, 2})
    assert str(H) == "[1] [0 2]"
    assert str(EMPTY_MODEL) == "()"
    assert EMPTY_MODEL.sigma() == frozenset()


def test_dessert_combined_values(dessert_matrix):
    E = dessert_matrix
    assert combine_level([SUGAR, FAT], AP, E) == 43
    assert combine_level([SUGAR, FAT], CC, E) == 40
    assert combine_level([SUGAR, FAT], IC, E) == 40
    assert combine_level([COST], AP, E) == 10
    assert combine_level([COST], CC, E) == 13
    assert combine_level([COST], IC, E) == 11
    assert combine_level([COST, SUGAR, FAT], IC, E) == 51
    assert combine_level([], IC, E) == 0


def test_dessert_set_comparisons(dessert_matrix):
    E = dessert_matrix
    assert compare_on_set([SUGAR, FAT], IC, CC, E) is Ordering3.EQUAL
    assert compare_on_set([COST], IC, CC, E) is Ordering3.LESS
    assert compare_on_set([SUGAR, FAT], IC, AP, E) is Ordering3.LESS
    # Duplicated indices collapse to the set.
    assert compare_on_set([COST, COST], IC, CC, E) is Ordering3.LESS


def test_dessert_model_relations(dessert_matrix):
    E = dessert_matrix
    H = model({FAT, SUGAR}, {COST})
    assert model_compare(H, IC, CC, E) is Ordering3.LESS
    assert model_compare(H, IC, AP, E) is Ordering3.LESS
    assert model_compare(H, CC, AP, E) is Ordering3.LESS
    assert model_compare(H, AP, IC, E) is Ordering3.GREATER
    assert model_compare(EMPTY_MODEL, IC, CC, E) is Ordering3.EQUAL


def test_dessert_cost_sugar_then_fat_prefers_apple_pie(dessert_matrix):
    # On {c, s} the pie rates 33 against the cake's 36, so the cake
    # compares greater under ({c, s}, {f}).
    E = dessert_matrix
    H = model({COST, SUGAR}, {FAT})
    assert compare_on_set([COST, SUGAR], CC, AP, E) is Ordering3.GREATER
    assert model_compare(H, CC, AP, E) is Ordering3.GREATER


def test_dessert_statements_satisfied(dessert_matrix, dessert_statements):
    E = dessert_matrix
    H = model({FAT, SUGAR}, {COST})
    assert satisfies(H, dessert_statements[0], E)
    assert satisfies(H, dessert_statements[1], E)
    assert satisfies_all(H, dessert_statements, E)


def test_satisfies_strict_vs_non_strict(dessert_matrix):
    E = dessert_matrix
    H = model({SUGAR, FAT})
    tie = PreferenceStatement(IC, CC)
    assert satisfies(H, tie, E)
    assert not satisfies(H, PreferenceStatement(IC, CC, strict=True), E)
    # The empty model satisfies every non-strict statement and no
    # strict one.
    assert satisfies(EMPTY_MODEL, tie, E)
    assert not satisfies(EMPTY_MODEL, PreferenceStatement(IC, AP, strict=True), E)


def test_strict_satisfaction_implies_non_strict(chain_matrix):
    rng = random.Random(7)
    E = chain_matrix
    for _ in range(200):
        alpha = rng.randrange(E.m)
        beta = (alpha + 1 + rng.randrange(E.m - 1)) % E.m
        levels = []
        pool = list(range(E.n))
        rng.shuffle(pool)
        while pool and rng.random() < 0.8:
            size = 1 + rng.randrange(2)
            levels.append(frozenset(pool[:size]))
            del pool[:size]
        H = HclpModel(tuple(levels))
        strict = PreferenceStatement(alpha, beta, strict=True)
        if satisfies(H, strict, E):
            assert satisfies(H, non_strict_version([strict])[0], E)


def test_tied_statements_preserves_order(chain_matrix, chain_statements):
    E = chain_matrix
    H = model({1})
    tied = tied_statements(H, chain_statements, E)
    assert tied == [chain_statements[1], chain_statements[2]]
    assert tied_statements(EMPTY_MODEL, chain_statements, E) == chain_statements


def test_non_strict_version():
    st = PreferenceStatement(2, 3, strict=True)
    weak = PreferenceStatement(0, 1)
    relaxed = non_strict_version([st, weak])
    assert [s.strict for s in relaxed] == [False, False]
    assert (relaxed[0].alpha, relaxed[0].beta) == (2, 3)
    assert relaxed[1] == weak


def test_compose_removes_used_evaluations():
    H = model({1}, {2})
    H2 = model({0, 2}, {3})
    assert compose(H, H2) == model({1}, {2}, {0}, {3})
    assert compose(EMPTY_MODEL, H2) == H2
    assert compose(H, EMPTY_MODEL) == H
    # A suffix level fully consumed by the prefix disappears.
    assert compose(H, model({1, 2})) == H


def test_validate_model():
    assert validate_model(model({0, 1}, {2}), 2, 3) == []
    assert validate_model(model({0, 1, 2}), 2, 3) != []
    assert validate_model(model({5}), 2, 3) != []
    assert validate_model(model({0}, {0, 1}), 2, 3) != []
    assert validate_model(EMPTY_MODEL, 1, 1) == []


def test_indifferent_subset_drops_out(dessert_matrix):
    # {s, f} rates IC and CC equally, so dropping it from the full set
    # cannot change the comparison.
    E = dessert_matrix
    full = [COST, SUGAR, FAT]
    assert compare_on_set(full, IC, CC, E) is compare_on_set([COST], IC, CC, E)


def test_addition_combiner_strictly_monotone():
    rng = random.Random(11)
    for _ in range(300):
        values = [rng.randrange(50) for _ in range(1 + rng.randrange(6))]
        k = rng.randrange(len(values))
        bumped = list(values)
        bumped[k] += 1 + rng.randrange(5)
        assert ADDITION.fold(bumped) > ADDITION.fold(values)
    assert ADDITION.fold([]) == 0
    assert ADDITION.is_addition


def test_custom_combiner_rejected_by_is_addition():
    mx = Combiner("max", max, 0)
    assert not mx.is_addition
    assert mx.fold([3, 1, 2]) == 3
