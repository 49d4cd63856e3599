"""Acceptance gate: one test per criterion, each timed against its budget.

A summary line per criterion is printed at the end of the session.
"""

import io
import json
import math
import random
import time
from functools import reduce

import pytest

from rankone.blocks import Block, block_lengths, difference_set, up_down_gcd, witness_difference
from rankone.cli import run
from rankone.factors import factor_map_eval, has_finite_factor, mef, p_max
from rankone.mixing import decide_mixing, decide_weak_mixing, empirical_mixing_report
from rankone.oracle import STRING_BUDGET, check_lemma_suite, string_block_lengths
from rankone.params import family_spec, length_of, odd_pair, spacer_census
from rankone.parser import expected_occurrences, is_n_block
from rankone.words import build_word

from conftest import BOUNDED, BUILTIN, named_spec

PRIMES_TO_19 = [2, 3, 5, 7, 11, 13, 17, 19]
LEMMAS_12 = ("vmsamelength", "singlespacerdifference", "vklengthinblocks", "vkmisses", "vnblockswitness")


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


def report(name):
    buf = io.StringIO()
    assert run(["report", "--family", name], buf) == 0
    return json.loads(buf.getvalue())


def contexts(spec, limit=10**5):
    M = 0
    while length_of(spec, M + 1, cap=None) <= limit:
        M += 1
    return M


@pytest.mark.criterion(1)
def test_criterion_01_dual_path():
    checked = 0
    with Timer(60):
        for name in BUILTIN + ["odd_pair"]:
            spec = named_spec(name)
            for M in range(contexts(spec) + 1):
                L = length_of(spec, M)
                for n in range(M + 1):
                    fast = set(block_lengths(spec, n, L, M).lengths)
                    assert fast == string_block_lengths(spec, n, M), (name, n, M)
                    checked += 1
    assert checked > 100


@pytest.mark.criterion(2)
def test_criterion_02_chacon():
    with Timer(1):
        body = report("chacon")
        assert body["p_max"] == 1 and body["mef"]["kind"] == "trivial"
        assert body["weak_mixing"]["status"] == "Proved"
        assert body["mixing"]["status"] == "Refuted"
        ch = family_spec("chacon")
        assert set(block_lengths(ch, 0, 12, 2).lengths) == set(range(1, 13))
        # independent: window sums of (1 + gap) over the level-0 gaps inside v_2
        gaps = [0, 1, 0, 0, 1, 1, 0, 1]
        terms = [1 + g for g in gaps] + [1]
        sums = {sum(terms[i:j]) for i in range(len(terms)) for j in range(i + 1, len(terms) + 1)}
        assert {s for s in sums if s <= 12} == set(range(1, 13))


@pytest.mark.criterion(3)
def test_criterion_03_odd_pair():
    with Timer(5):
        op = odd_pair()
        p, cert = p_max(op)
        assert p == 2 and cert.payload["level"] == 0 and cert.payload["residue"] == 1
        m = mef(op)
        assert m.kind == "cyclic" and m.p_max == 2
        assert decide_weak_mixing(op).is_refuted
        ls = block_lengths(op, 0, 200, 6)
        assert ls.lengths and all(h % 2 == 0 for h in ls.lengths)
        assert 2 in difference_set(op, 0, 200, 6)
        assert set(ls.lengths) <= string_block_lengths(op, 0, 6)


@pytest.mark.criterion(4)
def test_criterion_04_y2():
    with Timer(5):
        y = family_spec("yp", 2)
        L2 = length_of(y, 2)
        fast = block_lengths(y, 0, L2, 2).lengths
        assert fast and all(h % 2 == 0 for h in fast)
        assert all(h % 2 == 0 for h in string_block_lengths(y, 0, 2))
        for v in (decide_weak_mixing(y), decide_mixing(y)):
            assert v.is_refuted and v.certificate.payload["p"] == 2


@pytest.mark.criterion(5)
def test_criterion_05_x2_saturation():
    with Timer(60):
        rep = empirical_mixing_report(family_spec("xp", 2), 0, 10**4, 4)
        assert rep.saturation_start is not None and rep.saturation_start <= 10**4
        assert not rep.residue_obstructions
        ls = block_lengths(family_spec("xp", 2), 0, 10**4, 4)
        assert set(range(rep.saturation_start, 10**4 + 1)) <= set(ls.lengths)
        assert rep.audit_modulus == 2
        assert rep.length_residues == tuple(L % 2 for L in rep.level_lengths)


@pytest.mark.criterion(6)
def test_criterion_06_staircase():
    with Timer(5):
        st = family_spec("staircase")
        v = decide_mixing(st)
        assert v.is_proved and v.certificate.rule == "cofinite_spacers"
        census = spacer_census(st, 50)
        assert set(range(51)) <= set(census.values)


@pytest.mark.criterion(7)
def test_criterion_07_even_staircase():
    with Timer(5):
        es = family_spec("even_staircase")
        v = decide_weak_mixing(es)
        assert v.is_refuted and v.certificate.payload["p"] == 2
        census = spacer_census(es, 10**4)
        assert abs(float(census.density_at_horizon) - 0.5) <= 0.01


@pytest.mark.criterion(8)
def test_criterion_08_z_example():
    with Timer(60):
        z = family_spec("z_example")
        v = decide_weak_mixing(z)
        assert v.status.value == "Unknown"
        assert v.known is not None and v.known["value"] is False
        rep = check_lemma_suite(z, 2, 6)
        lem = rep.lemmas["vndifference"]
        assert lem.passed and lem.checked > 0
        mins = {x["n"]: x["min_difference"] for x in lem.notes}
        assert set(mins) == {0, 1, 2}
        for n, d in mins.items():
            assert d >= length_of(z, n)
        for p in PRIMES_TO_19:
            f = has_finite_factor(z, p)
            assert f.is_refuted
            assert f.certificate.payload["witnesses"]


def _signed_sum_min(values, terms=4):
    """Least positive sum of at most `terms` pairwise differences."""
    vals = sorted(set(values))
    steps = {a - b for a in vals for b in vals if a != b}
    sums, best = {0}, math.inf
    for _ in range(terms):
        sums = {s + d for s in sums for d in steps}
        best = min([best] + [s for s in sums if s > 0])
    return best


@pytest.mark.criterion(9)
def test_criterion_09_up_down_gcd():
    with Timer(5):
        assert up_down_gcd([0, 1]) == 1
        assert up_down_gcd([3, 7]) == 4
        assert up_down_gcd([2, 4, 8]) == 2
        rng = random.Random(0)
        disagree = []
        for _ in range(100):
            vals = [rng.randint(0, 20) for _ in range(rng.randint(2, 6))]
            if len(set(vals)) < 2:
                continue
            g = up_down_gcd(vals)
            assert g == reduce(math.gcd, [abs(a - b) for a in vals for b in vals])
            if _signed_sum_min(vals) != g:
                disagree.append((vals, _signed_sum_min(vals), g))
        assert not disagree, f"{len(disagree)} multisets disagree, e.g. {disagree[0]}"


@pytest.mark.criterion(10)
def test_criterion_10_witness():
    with Timer(10):
        ch = family_spec("chacon")
        for n in range(3):
            for h in range(1, 6):
                pair = witness_difference(ch, n, h)
                a, b = (blk.render(ch) for blk in pair)
                assert len(a) - len(b) == h
                assert is_n_block(a, ch, n, pair.context) and is_n_block(b, ch, n, pair.context)
        gamma = Block(0, (0, 1), 1)
        for h in range(1, 6):
            pair = witness_difference(ch, 0, h, prefix=gamma)
            for blk in pair:
                assert blk.render(ch).startswith(gamma.render(ch))
                assert is_n_block(blk.render(ch), ch, 0, pair.context)


@pytest.mark.criterion(11)
def test_criterion_11_equivariance():
    with Timer(5):
        op = odd_pair()
        text = build_word(op, 6)
        count = 0
        for size in (6, 12, 24):
            for o in range(0, len(text) - size - 1):
                a = factor_map_eval(op, 2, expected_occurrences(text[o : o + size], op, 0, 6))
                b = factor_map_eval(op, 2, expected_occurrences(text[o + 1 : o + 1 + size], op, 0, 6))
                assert b == (a + 1) % 2
                count += 1
        assert count >= 200


@pytest.mark.criterion(12)
def test_criterion_12_lemma_suite_bounded():
    with Timer(60):
        for name in BOUNDED:
            spec = named_spec(name)
            M = min(contexts(spec, STRING_BUDGET), 8)
            rep = check_lemma_suite(spec, 2, M)
            for lemma in LEMMAS_12:
                assert rep.lemmas[lemma].passed, (name, lemma, rep.lemmas[lemma].to_dict())
