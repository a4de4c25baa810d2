import pytest

from hclp import (ConflictStore, EvaluationMatrix, GenConfig, HclpModel,
                  PreferenceStatement, SearchConfig, SearchTimeout, SplitMix64,
                  brute_force_solve, c1_solve, candidate_level_sets,
                  conflict_blocks, conflict_insert, deduce, generate,
                  max_singleton_sequence, negate, pc_check, satisfies_all)
from tests.conftest import AP, CC, IC


def test_search_config_validation():
    SearchConfig(t=1)
    SearchConfig(t=2, conflicts=True, s=2)
    with pytest.raises(ValueError):
        SearchConfig(t=0)
    with pytest.raises(ValueError):
        SearchConfig(t=2, conflicts=True, s=1)
    # The cap only matters when conflict recording is on.
    SearchConfig(t=2, conflicts=False, s=0)


def test_negate_flips_pair_and_strictness():
    weak = PreferenceStatement(0, 1)
    strict = PreferenceStatement(2, 3, strict=True)
    assert negate(weak) == PreferenceStatement(1, 0, strict=True)
    assert negate(strict) == PreferenceStatement(3, 2, strict=False)
    assert negate(negate(weak)) == weak
    assert negate(negate(strict)) == strict


def test_greedy_sequence_dessert(dessert_matrix, dessert_statements):
    seq = max_singleton_sequence(range(3), dessert_statements, dessert_matrix)
    assert seq == [1, 2, 0]


def test_greedy_sequence_chain(chain_matrix, chain_statements):
    seq = max_singleton_sequence(range(5), chain_statements, chain_matrix)
    assert seq == [1, 0]


def test_greedy_empty_statements(chain_matrix):
    # Nothing constrains the scan, so every evaluation is appended in
    # index order.
    assert max_singleton_sequence(range(5), [], chain_matrix) == [0, 1, 2, 3, 4]
    assert max_singleton_sequence([], [], chain_matrix) == []


def test_c1_solve_dessert(dessert_matrix, dessert_statements):
    result = c1_solve(dessert_matrix, dessert_statements)
    assert result.consistent
    assert result.verdict == "consistent"
    assert str(result.witness) == "[1] [2] [0]"
    assert result.stats.nodes == 1
    assert result.stats.singleton_calls == 1
    assert satisfies_all(result.witness, dessert_statements, dessert_matrix)


def test_c1_solve_chain_fails(chain_matrix, chain_statements):
    result = c1_solve(chain_matrix, chain_statements)
    assert not result.consistent
    assert result.witness is None


def test_candidate_stream_chain(chain_matrix, chain_statements):
    # After the greedy prefix (c2, c1) the tied statements are the
    # second and third ones; of all level sets over {c3, c4, c5} only
    # {c3, c5} survives the opposition filter.
    E = chain_matrix
    tied = chain_statements[1:]
    cfg = SearchConfig(t=3)
    stream = [sorted(c) for c in
              candidate_level_sets([2, 3, 4], tied, cfg, None, E)]
    assert stream == [[2, 4]]
    # Without the filter's statements every subset is a candidate, in
    # size-then-lexicographic order.
    free = [sorted(c) for c in
            candidate_level_sets([2, 3, 4], [], cfg, None, E)]
    assert free == [[2, 3], [2, 4], [3, 4], [2, 3, 4]]


def test_candidate_stream_respects_store(chain_matrix, chain_statements):
    E = chain_matrix
    store = ConflictStore(5)
    store.insert({2, 4})
    cfg = SearchConfig(t=3, conflicts=True, s=5)
    stream = [sorted(c) for c in
              candidate_level_sets([2, 3, 4], [], cfg, store, E)]
    assert [2, 4] not in stream
    assert [2, 3, 4] not in stream
    assert [2, 3] in stream


def test_candidate_stream_respects_bound(chain_matrix):
    cfg = SearchConfig(t=2)
    stream = [sorted(c) for c in
              candidate_level_sets([2, 3, 4], [], cfg, None, chain_matrix)]
    assert stream == [[2, 3], [2, 4], [3, 4]]


@pytest.mark.parametrize("conflicts,skipped,learned", [
    (False, 0, 0),
    (True, 1, 1),
])
def test_pc_check_chain_exact_stats(chain_matrix, chain_statements,
                                    conflicts, skipped, learned):
    cfg = SearchConfig(t=3, conflicts=conflicts, s=5)
    result = pc_check(chain_matrix, chain_statements, cfg, backend="pure")
    assert not result.consistent
    stats = result.stats
    assert stats.nodes == 2
    assert stats.candidates == 4
    assert stats.singleton_calls == 2
    assert stats.skipped == skipped
    assert stats.learned == learned
    assert stats.wall_ms >= 0.0


def test_pc_check_chain_weak_consistent(chain_matrix, chain_statements):
    weak = chain_statements[:2]
    result = pc_check(chain_matrix, weak, SearchConfig(t=3))
    assert result.consistent
    assert satisfies_all(result.witness, weak, chain_matrix)


def test_pc_check_dessert(dessert_matrix, dessert_statements):
    for t in (1, 2, 3):
        result = pc_check(dessert_matrix, dessert_statements, SearchConfig(t=t))
        assert result.consistent
        assert str(result.witness) == "[1] [2] [0]"
        assert max(len(l) for l in result.witness.levels) <= t


def test_pc_check_empty_statements(chain_matrix):
    for backend in ("pure", "compiled"):
        result = pc_check(chain_matrix, [], SearchConfig(t=2), backend=backend)
        assert result.consistent
        assert result.witness == HclpModel(
            tuple(frozenset({i}) for i in range(5)))


def test_pc_check_t_above_n_clamped(chain_matrix, chain_statements):
    a = pc_check(chain_matrix, chain_statements, SearchConfig(t=5))
    b = pc_check(chain_matrix, chain_statements, SearchConfig(t=50))
    assert a.consistent == b.consistent
    assert a.stats.candidates == b.stats.candidates


def test_pc_check_t1_matches_c1(chain_matrix):
    rng = SplitMix64(83)
    for _ in range(40):
        inst = generate(GenConfig(n=4, m=5, g=3, seed=rng.next_u64()))
        stmts = list(inst.statements)
        a = c1_solve(inst.matrix, stmts)
        b = pc_check(inst.matrix, stmts, SearchConfig(t=1))
        assert a.consistent == b.consistent
        assert a.witness == b.witness


def test_pc_check_rejects_bad_statement_index():
    E = EvaluationMatrix(((1, 2),))
    with pytest.raises(ValueError):
        pc_check(E, [PreferenceStatement(0, 5)], SearchConfig(t=1))


def test_pc_check_timeout_carries_stats(chain_matrix, chain_statements):
    for backend in ("pure", "compiled"):
        with pytest.raises(SearchTimeout) as err:
            pc_check(chain_matrix, chain_statements, SearchConfig(t=3),
                     backend=backend, timeout_ms=0)
        assert err.value.stats.nodes >= 0
        assert err.value.stats.wall_ms >= 0.0


def test_deduce_two_cycle(dessert_matrix):
    gamma = [PreferenceStatement(IC, AP, strict=True)]
    cfg = SearchConfig(t=3, conflicts=True, s=5)
    assert deduce(dessert_matrix, gamma, PreferenceStatement(IC, AP), cfg)


def test_deduce_nothing_from_empty(dessert_matrix):
    cfg = SearchConfig(t=3, conflicts=True, s=5)
    assert not deduce(dessert_matrix, [],
                      PreferenceStatement(IC, AP, strict=True), cfg)


def test_deduce_vacuous_from_inconsistent(chain_matrix, chain_statements):
    cfg = SearchConfig(t=3, conflicts=True, s=5)
    assert deduce(chain_matrix, chain_statements,
                  PreferenceStatement(3, 0, strict=True), cfg)


def test_deduce_rejects_member_statement(dessert_matrix, dessert_statements):
    cfg = SearchConfig(t=2)
    with pytest.raises(ValueError):
        deduce(dessert_matrix, dessert_statements, dessert_statements[0], cfg)


def test_deduce_strict_weakening(dessert_matrix):
    # a < b entails a <= b but not the converse.
    cfg = SearchConfig(t=3)
    strict = [PreferenceStatement(CC, AP, strict=True)]
    weak = [PreferenceStatement(CC, AP)]
    assert deduce(dessert_matrix, strict, PreferenceStatement(CC, AP), cfg)
    assert not deduce(dessert_matrix, weak,
                      PreferenceStatement(CC, AP, strict=True), cfg)


def test_conflict_store_antichain():
    store = ConflictStore(5)
    assert conflict_insert(store, {2, 4})
    assert not conflict_insert(store, {2, 3, 4})     # dominated, dropped
    assert len(store) == 1
    assert conflict_blocks(store, {2, 3, 4})
    assert conflict_blocks(store, {2, 4})
    assert not conflict_blocks(store, {2, 3})
    # A new subset evicts the stored supersets.
    store2 = ConflictStore(5)
    store2.insert({1, 2, 3})
    store2.insert({1, 4})
    store2.insert({1, 2})
    assert set(store2.sets()) == {frozenset({1, 4}), frozenset({1, 2})}


def test_conflict_store_size_limits():
    store = ConflictStore(3)
    with pytest.raises(ValueError):
        store.insert({1})
    with pytest.raises(ValueError):
        store.insert({1, 2, 3, 4})
    assert store.insert({1, 2, 3})
    with pytest.raises(ValueError):
        ConflictStore(1)


def test_conflict_store_journal_rollback():
    store = ConflictStore(5)
    store.insert({1, 2, 3})
    mark = store.mark()
    store.insert({4, 5})
    store.insert({1, 2})                 # evicts {1, 2, 3}
    assert set(store.sets()) == {frozenset({4, 5}), frozenset({1, 2})}
    store.rollback(mark)
    assert set(store.sets()) == {frozenset({1, 2, 3})}
    # Rolling back to the same mark twice is a no-op.
    store.rollback(mark)
    assert set(store.sets()) == {frozenset({1, 2, 3})}


def test_conflict_store_nested_rollback():
    store = ConflictStore(4)
    outer = store.mark()
    store.insert({1, 2})
    inner = store.mark()
    store.insert({3, 4})
    store.rollback(inner)
    assert set(store.sets()) == {frozenset({1, 2})}
    store.rollback(outer)
    assert store.sets() == []


def test_pc_matches_oracle_seeded():
    rng = SplitMix64(0x50C7)
    for _ in range(60):
        n = 2 + rng.below(4)
        m = 3 + rng.below(3)
        g = 1 + rng.below(min(4, m * (m - 1) // 2))
        t = 1 + rng.below(3)
        inst = generate(GenConfig(n=n, m=m, g=g, seed=rng.next_u64()))
        stmts = list(inst.statements)
        want = brute_force_solve(inst.matrix, stmts, t).consistent
        for conflicts in (False, True):
            cfg = SearchConfig(t=t, conflicts=conflicts, s=5)
            got = pc_check(inst.matrix, stmts, cfg)
            assert got.consistent == want
            if got.consistent:
                assert satisfies_all(got.witness, stmts, inst.matrix)
                assert max(len(l) for l in got.witness.levels) <= t
