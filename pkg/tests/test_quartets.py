import numpy as np
import pytest

from helpers import brute_force_quartets, naive_quartet_conflict
from quartetfold.quartets import (
    Pair,
    Quartet,
    build_model,
    can_stack,
    enumerate_quartets,
    pairs_conflict_on_base,
    pairs_cross,
    quartets_conflict,
)
from quartetfold.sequence import parse_sequence, random_sequence


def test_pairs_cross_examples():
    assert pairs_cross(Pair(1, 5), Pair(3, 8))
    assert not pairs_cross(Pair(2, 9), Pair(3, 7))  # nested
    assert not pairs_cross(Pair(1, 4), Pair(5, 9))  # disjoint


def test_pairs_cross_symmetric():
    rng = np.random.default_rng(3)
    for _ in range(200):
        i, j, k, l = rng.integers(1, 30, size=4)
        if i >= j or k >= l:
            continue
        p, q = Pair(int(i), int(j)), Pair(int(k), int(l))
        assert pairs_cross(p, q) == pairs_cross(q, p)


def test_pairs_conflict_on_base_examples():
    assert pairs_conflict_on_base(Pair(1, 9), Pair(1, 5))
    assert not pairs_conflict_on_base(Pair(2, 8), Pair(2, 8))  # identical pair
    assert not pairs_conflict_on_base(Pair(1, 9), Pair(2, 8))


def test_can_stack_examples():
    assert can_stack(Quartet(1, 9), Quartet(2, 8))
    assert can_stack(Quartet(2, 8), Quartet(1, 9))
    assert not can_stack(Quartet(1, 9), Quartet(3, 7))  # gap of one
    assert not can_stack(Quartet(1, 9), Quartet(1, 9))  # self


def test_quartets_conflict_examples():
    # Stacked quartets share pair (2,8) exactly: consistent.
    assert not quartets_conflict(Quartet(1, 9), Quartet(2, 8))
    # (1,6) crosses (4,10).
    assert quartets_conflict(Quartet(1, 6), Quartet(4, 10))
    # Position 1 paired with 9 and with 7.
    assert quartets_conflict(Quartet(1, 9), Quartet(1, 7))


def test_quartets_conflict_symmetric():
    rng = np.random.default_rng(11)
    for _ in range(200):
        i, k = rng.integers(1, 12, size=2)
        j = i + int(rng.integers(4, 12))
        l = k + int(rng.integers(4, 12))
        q1, q2 = Quartet(int(i), int(j)), Quartet(int(k), int(l))
        assert quartets_conflict(q1, q2) == quartets_conflict(q2, q1)


def test_enumerate_against_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(40):
        seq = random_sequence(int(rng.integers(8, 30)), rng)
        for min_loop in (0, 2, 3):
            got = [(q.i, q.j) for q in enumerate_quartets(seq, min_loop)]
            assert got == brute_force_quartets(seq, min_loop)


def test_enumerate_gggaaaccc():
    # Every (i, j) with GC outer and GC inner pairs and room for the loop.
    seq = parse_sequence("GGGAAACCC")
    got = [(q.i, q.j) for q in enumerate_quartets(seq, 3)]
    assert got == [(1, 8), (1, 9), (2, 8), (2, 9)]
    assert got == brute_force_quartets(seq, 3)
    # (3,7) is excluded: its inner pair (4,6) would be A-A.
    assert (3, 7) not in got


def test_enumerate_no_pairs():
    assert enumerate_quartets(parse_sequence("AAAA"), 3) == []


def test_enumerate_count_matches_oracle_ggggaaaacccc():
    seq = parse_sequence("GGGGAAAACCCC")
    got = [(q.i, q.j) for q in enumerate_quartets(seq, 3)]
    assert got == brute_force_quartets(seq, 3)


def test_enumerate_rejects_negative_min_loop():
    with pytest.raises(ValueError):
        enumerate_quartets(parse_sequence("GGGAAACCC"), -1)


def test_build_model_gggaaaccc():
    model = build_model(parse_sequence("GGGAAACCC"), 3)
    quartets = [(q.i, q.j) for q in model.quartets]
    assert quartets == [(1, 8), (1, 9), (2, 8), (2, 9)]
    # Only (1,9) and (2,8) stack; everything else double-books a base.
    assert model.stacks == {(1, 2)}
    assert model.conflicts == {(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)}
    assert model.au_end == frozenset()


def test_build_model_conflicts_match_naive_oracle():
    rng = np.random.default_rng(17)
    for _ in range(25):
        seq = random_sequence(int(rng.integers(10, 26)), rng)
        model = build_model(seq, 3)
        qs = [(q.i, q.j) for q in model.quartets]
        expected = {
            (a, b)
            for a in range(len(qs))
            for b in range(a + 1, len(qs))
            if naive_quartet_conflict(qs[a], qs[b])
            and not can_stack(model.quartets[a], model.quartets[b])
        }
        assert model.conflicts == expected


def test_stacks_and_conflicts_disjoint_and_stacks_share_one_pair():
    rng = np.random.default_rng(29)
    for _ in range(25):
        seq = random_sequence(int(rng.integers(10, 28)), rng)
        model = build_model(seq, 3)
        assert not (model.conflicts & model.stacks)
        for a, b in model.stacks:
            shared = set(model.quartets[a].pairs) & set(model.quartets[b].pairs)
            assert len(shared) == 1


def test_quartet_count_quadratic_bound():
    rng = np.random.default_rng(31)
    for _ in range(10):
        n = int(rng.integers(8, 40))
        seq = random_sequence(n, rng)
        assert len(enumerate_quartets(seq, 3)) <= n * n


def test_au_end_outer_mode():
    # Quartet (1,10) has outer pair U-A, inner pair G-C.
    seq = parse_sequence("UGGAAAACCA")
    model = build_model(seq, 3)
    idx = [(q.i, q.j) for q in model.quartets].index((1, 10))
    assert idx in model.au_end


def test_au_end_inner_mode_flag():
    # Quartet (1,10): outer G-C, inner A-U -> in au_end only in inner mode.
    seq = parse_sequence("GAGAAAAUCC")
    assert [(q.i, q.j) for q in build_model(seq, 3).quartets] == [(1, 10)]
    assert build_model(seq, 3, qua_mode="outer").au_end == frozenset()
    assert build_model(seq, 3, qua_mode="inner").au_end == {0}
    with pytest.raises(ValueError):
        build_model(seq, 3, qua_mode="both")


def test_build_model_deterministic():
    seq = random_sequence(24, np.random.default_rng(51))
    assert build_model(seq, 3) == build_model(seq, 3)


def test_model_dump_uses_one_based_positions():
    model = build_model(parse_sequence("GGGAAACCC"), 3)
    dump = model.to_dict()
    assert dump["num_vars"] == 4
    assert dump["quartets"][1] == {"index": 1, "outer": [1, 9], "inner": [2, 8]}
    assert [1, 2] in dump["stacks"]
