from __future__ import annotations

import pytest

from charstack.liealg import LieContext, commutes
from charstack.scan import FAMILIES, UnknownFamily, generate_pairs, parse_group, strict_scan


@pytest.mark.parametrize("family", FAMILIES)
def test_pairs_commute_and_are_seeded(family):
    ctx = LieContext.sl(4)
    first = generate_pairs(family, ctx, 5, seed=7)
    again = generate_pairs(family, ctx, 5, seed=7)
    assert [(a.matrix, b.matrix) for a, b in first] == [(a.matrix, b.matrix) for a, b in again]
    assert all(commutes(a, b) for a, b in first)


def test_different_seeds_differ():
    ctx = LieContext.sl(3)
    a = generate_pairs("polynomial_in", ctx, 5, seed=1)
    b = generate_pairs("polynomial_in", ctx, 5, seed=2)
    assert [p[0].matrix for p in a] != [p[0].matrix for p in b]


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        generate_pairs("nope", LieContext.sl(2), 1, 0)


def test_block_sl2_needs_rank_four():
    with pytest.raises(ValueError):
        generate_pairs("block_sl2", LieContext.sl(3), 1, 0)


@pytest.mark.parametrize("text, kind, n", [("SL:4", "SL", 4), ("gl:2", "GL", 2)])
def test_parse_group(text, kind, n):
    ctx = parse_group(text)
    assert (ctx.kind, ctx.n) == (kind, n)


@pytest.mark.parametrize("text", ["SL4", "SO:3", "SL:x", "SL:1"])
def test_parse_group_errors(text):
    with pytest.raises(ValueError):
        parse_group(text)


def test_diagonal_scan_all_strict():
    s = strict_scan("diagonal", 20, 3, LieContext.sl(3))
    assert s.strict_count == 20
    assert s.all_agree
    data = s.to_json()
    assert data["strict_fraction"] == "20/20"
    assert "pairs" not in data
    assert len(s.to_json(include_pairs=True)["pairs"]) == 20


def test_unipotent_scan_none_strict():
    s = strict_scan("unipotent_diagonal_pair", 10, 3, LieContext.sl(3))
    assert s.strict_count == 0
    assert s.all_agree
