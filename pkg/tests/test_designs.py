from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hotplug_cc.designs import (
    Design,
    DesignError,
    blocks_matching,
    count_blocks_containing,
    lambda_exact,
    lambda_s,
    parse_design,
    serialize_design,
    verify_design,
)
from oracles import all_subsets, count_pattern_blocks

from conftest import EX2_P


def test_shipped_design_matches_rows_of_placement_array(design):
    expected = [tuple(i for i, ch in enumerate(row, start=1) if ch == "*") for row in EX2_P]
    assert (design.t, design.v, design.k_block, design.lam, design.b) == (3, 8, 4, 1, 14)
    assert list(design.blocks) == expected
    assert design.blocks[0] == (1, 2, 5, 6)
    assert design.blocks[13] == (2, 3, 5, 8)


def test_parse_degenerate_design():
    d = parse_design("1 2 1 1\n1\n2\n")
    assert (d.v, d.b) == (2, 2)
    assert verify_design(d).valid


@pytest.mark.parametrize(
    "text, message",
    [
        ("3 8 4 1\n1 2 5 6\n6 5 2 1\n", "duplicates block 1"),
        ("3 8 4\n1 2 5 6\n", "header"),
        ("3 8 4 1\n1 2 5\n", "expected 4 points"),
        ("3 8 4 1\n1 2 2 6\n", "repeated point"),
        ("3 8 4 1\n1 2 5 9\n", "outside 1..8"),
        ("3 8 4 1\n1 2 x 6\n", "expected integers"),
        ("# only a comment\n", "missing header"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(DesignError, match=message):
        parse_design(text)


def test_round_trip_sorts_points_and_keeps_order(design):
    text = "# comment\n3 8 4 1\n6 5 2 1\n\n8 7 4 3\n"
    d = parse_design(text)
    assert serialize_design(d) == "3 8 4 1\n1 2 5 6\n3 4 7 8\n"
    assert parse_design(serialize_design(design)) == design
    assert serialize_design(parse_design(serialize_design(design))) == serialize_design(design)


def test_verify_shipped(design):
    report = verify_design(design)
    assert report.valid and report.violations == []


def test_verify_complete_design():
    d = Design.from_blocks(2, 3, 2, 1, combinations(range(1, 4), 2))
    assert verify_design(d).valid


def test_verify_reports_every_uncovered_triple(design):
    broken = Design(3, 8, 4, 1, design.blocks[1:])
    report = verify_design(broken)
    assert not report.valid
    # recount by enumeration over all triples
    expected = {
        T: sum(1 for b in broken.blocks if set(T) <= set(b))
        for T in combinations(range(1, 9), 3)
    }
    bad = {T: c for T, c in expected.items() if c != 1}
    assert dict(report.violations) == bad
    assert set(bad) == set(combinations((1, 2, 5, 6), 3))
    assert all(c == 0 for c in bad.values())


@pytest.mark.parametrize("s, expected", [(0, 14), (1, 7), (2, 3), (3, 1)])
def test_lambda_s_formula_and_count(design, s, expected):
    assert lambda_s(design, s) == expected
    for Y in combinations(range(1, 9), s):
        assert count_blocks_containing(design, Y) == expected


@pytest.mark.parametrize("i, expected", [(0, 1), (1, 2), (2, 2), (3, 1)])
def test_lambda_exact(design, i, expected):
    assert lambda_exact(design, i) == expected


def test_lambda_exact_matches_enumeration_everywhere(design):
    for T in combinations(range(1, 9), 3):
        for Y in all_subsets(T):
            assert count_pattern_blocks(design.blocks, T, Y) == lambda_exact(design, len(Y))


def test_lambda_ranges(design):
    with pytest.raises(ValueError):
        lambda_s(design, 4)
    with pytest.raises(ValueError):
        lambda_exact(design, -1)


def test_blocks_matching_examples(design):
    assert blocks_matching(design, (2, 6, 8), (2, 6)) == [1, 6]
    assert blocks_matching(design, (2, 6, 8), (8,)) == [2, 5]
    assert blocks_matching(design, (2, 6, 8), (2, 6, 8)) == [3]
    assert [design.blocks[i - 1] for i in blocks_matching(design, (1, 2, 3), (1,))] == [
        (1, 4, 5, 8),
        (1, 4, 6, 7),
    ]


def test_blocks_matching_errors(design):
    with pytest.raises(ValueError):
        blocks_matching(design, (1, 2), (1,))
    with pytest.raises(ValueError):
        blocks_matching(design, (1, 2, 3), (4,))


def test_intersection_patterns_partition_blocks(design):
    for T in combinations(range(1, 9), 3):
        rows = [r for Y in all_subsets(T) for r in blocks_matching(design, T, Y)]
        assert sorted(rows) == list(range(1, design.b + 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 8).flatmap(lambda v: st.tuples(st.just(v), st.integers(1, v - 1))).flatmap(
    lambda vk: st.tuples(st.just(vk[0]), st.just(vk[1]), st.integers(1, vk[1]))
))
def test_lambda_counts_on_complete_designs(vkt):
    # every k-subset of [v] as a block: a t-(v, k, C(v-t, k-t)) design for each t <= k
    v, k, t = vkt
    d = Design.from_blocks(t, v, k, comb(v - t, k - t), combinations(range(1, v + 1), k))
    assert verify_design(d).valid
    for s in range(t + 1):
        for Y in combinations(range(1, v + 1), s):
            assert count_blocks_containing(d, Y) == lambda_s(d, s)
    T = tuple(range(1, t + 1))
    for Y in all_subsets(T):
        assert len(blocks_matching(d, T, Y)) == count_pattern_blocks(d.blocks, T, Y)
        assert len(blocks_matching(d, T, Y)) == lambda_exact(d, len(Y))
