import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rankone.blocks import (
    Block,
    block_lengths,
    difference_set,
    eventual_spacers,
    positive_differences,
    signed_steps,
    up_down_gcd,
    witness_difference,
)
from rankone.errors import NeedTwoDistinctValues, NotConstructible
from rankone.oracle import string_block_lengths
from rankone.params import family_spec, length_of, odd_pair, periodic_spec
from rankone.parser import is_n_block

from conftest import periodic_specs

CH = family_spec("chacon")


def test_length_set_examples():
    assert block_lengths(CH, 0, 12, 2).lengths == tuple(range(1, 13))
    for name in ("yp:2", "even_staircase"):
        ls = block_lengths(family_spec(name), 0, 40, 2)
        assert ls.lengths and all(h % 2 == 0 for h in ls.lengths)
        assert ls.shared_residues.get(2) == 0


def test_difference_set_examples():
    assert difference_set(CH, 0, 12, 2) >= set(range(1, 12))
    assert all(h % 2 == 0 for h in difference_set(family_spec("yp:2"), 0, 40, 2))
    z = family_spec("z_example")
    ds = difference_set(z, 1, length_of(z, 4), 4)
    assert min(ds) >= length_of(z, 1) == 8


def test_up_down_gcd_examples():
    assert up_down_gcd([0, 1]) == 1
    assert up_down_gcd([3, 7]) == 4
    assert up_down_gcd([2, 4, 8]) == 2
    with pytest.raises(NeedTwoDistinctValues):
        up_down_gcd([5, 5])


def _bfs_min_signed(values):
    """Least positive sum of pairwise differences, any number of terms."""
    vals = sorted(set(values))
    D = {a - b for a in vals for b in vals if a != b}
    bound = max(vals) - min(vals)
    seen, frontier = {0}, {0}
    while frontier:
        nxt = {x + d for x in frontier for d in D if abs(x + d) <= bound} - seen
        seen |= nxt
        frontier = nxt
    return min(x for x in seen if x > 0)


def _bounded_min_signed(values, terms):
    vals = sorted(set(values))
    D = {a - b for a in vals for b in vals if a != b}
    sums, best = {0}, math.inf
    for _ in range(terms):
        sums = {s + d for s in sums for d in D}
        best = min([best] + [s for s in sums if s > 0])
    return best


distinct_values = st.lists(st.integers(0, 20), min_size=2, max_size=6).filter(lambda v: len(set(v)) >= 2)


@given(distinct_values)
def test_up_down_gcd_matches_unbounded_search(vals):
    assert up_down_gcd(vals) == _bfs_min_signed(vals) == reduce(math.gcd, [abs(a - b) for a in vals for b in vals])


@given(distinct_values)
def test_bounded_search_is_a_multiple(vals):
    # few terms can only overshoot the gcd, never undercut it
    b = _bounded_min_signed(vals, 4)
    assert b % up_down_gcd(vals) == 0


@given(distinct_values, st.integers(-30, 30))
def test_signed_steps(vals, k):
    d = up_down_gcd(vals)
    steps = signed_steps(vals, k * d)
    assert sum(a - b for a, b in steps) == k * d
    assert all(a in vals and b in vals for a, b in steps)
    if k % 2 == 0 and d > 1:
        with pytest.raises(NotConstructible):
            signed_steps(vals, k * d + 1)


def test_eventual_spacers():
    assert eventual_spacers(CH) == {0, 1}
    assert eventual_spacers(periodic_spec([(3, [2, 7]), (2, [4])])) == {2, 4, 7}
    assert eventual_spacers(family_spec("z_example")) == {0}


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("h", [1, 2, 3, 4, 5])
def test_chacon_witness(n, h):
    pair = witness_difference(CH, n, h)
    a, b = (blk.render(CH) for blk in pair)
    assert len(a) - len(b) == h
    assert is_n_block(a, CH, n, pair.context) and is_n_block(b, CH, n, pair.context)


def test_odd_pair_witness_units():
    op = odd_pair()
    assert witness_difference(op, 0, 1).difference == 2
    assert witness_difference(op, 0, 2).difference == 4
    ds = difference_set(op, 0, 60)
    assert {2, 4} <= ds and not any(h % 2 for h in ds)


def test_prefix_is_kept():
    g = Block(0, (0, 1), 1)
    pair = witness_difference(CH, 0, 3, prefix=g)
    for blk in pair:
        assert blk.startswith(g)
        assert blk.render(CH).startswith(g.render(CH))


@given(periodic_specs(max_q=3, max_a=3), st.integers(0, 1), st.integers(1, 3))
def test_witness_on_random_periodic(spec, n, h):
    pair = witness_difference(spec, n, h)
    a, b = (blk.render(spec) for blk in pair)
    assert len(a) - len(b) == pair.difference == h * up_down_gcd(eventual_spacers(spec))
    assert is_n_block(a, spec, n, pair.context)
    assert is_n_block(b, spec, n, pair.context)


@given(periodic_specs(max_q=3, max_a=3), st.integers(1, 3))
def test_witness_pmax_route(spec, h):
    from rankone.factors import p_max

    p, _ = p_max(spec)
    pair = witness_difference(spec, 0, h, unit="pmax")
    a, b = (blk.render(spec) for blk in pair)
    assert len(a) - len(b) == h * p
    assert is_n_block(a, spec, 0, pair.context) and is_n_block(b, spec, 0, pair.context)


@given(periodic_specs(max_q=3, max_a=4), st.data())
def test_dual_path_random(spec, data):
    M = 0
    while length_of(spec, M + 1) <= 20000 and M < 6:
        M += 1
    n = data.draw(st.integers(0, M))
    L = length_of(spec, M)
    assert set(block_lengths(spec, n, L, M).lengths) == string_block_lengths(spec, n, M)


@given(periodic_specs(max_q=3, max_a=4), st.integers(10, 80))
def test_monotone_in_context(spec, L):
    a = set(block_lengths(spec, 0, L, 2).lengths)
    b = set(block_lengths(spec, 0, L, 3).lengths)
    assert a <= b


@given(st.lists(st.integers(0, 500), min_size=1, max_size=60, unique=True), st.integers(1, 600))
def test_positive_differences(xs, L):
    pos = np.array(sorted(xs), dtype=np.int64)
    want = sorted({b - a for a in xs for b in xs if 0 < b - a <= L})
    assert positive_differences(pos, L).tolist() == want


def test_block_totals():
    blk = Block(0, (0, 1, 1), 1)
    assert blk.parts == 3 and blk.total_length == 5 and blk.render(CH) == "00101"


@pytest.mark.parametrize(
    "spec",
    [odd_pair(), periodic_spec([(3, [2, 7])]), periodic_spec([(2, [1]), (3, [3, 5])], seed_zeros=2)],
    ids=["odd_pair", "p27", "mixed"],
)
@pytest.mark.parametrize("h", [1, 2, 3])
def test_pmax_construction_without_search(spec, h):
    from rankone.factors import p_max

    p, _ = p_max(spec)
    pair = witness_difference(spec, 0, h, unit="pmax", search=False)
    a, b = (blk.render(spec) for blk in pair)
    assert len(a) - len(b) == h * p
    assert is_n_block(a, spec, 0, pair.context) and is_n_block(b, spec, 0, pair.context)
