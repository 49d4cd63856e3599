import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rankone.errors import SpecError
from rankone.params import (
    LevelParams,
    ParamSpec,
    cantor_pair,
    cantor_unpair,
    family_spec,
    is_bounded,
    known_verdicts,
    length_of,
    level_params,
    load_spec,
    nth_prime,
    periodic_spec,
    spacer_census,
    spec_from_dict,
    spec_to_dict,
    validate,
    z_spacer,
)

from conftest import periodic_specs


def test_chacon_levels():
    ch = family_spec("chacon")
    for n in range(6):
        lv = level_params(ch, n)
        assert (lv.q, lv.spacers) == (3, (0, 1))


def test_staircase_level_one():
    st_ = family_spec("staircase")
    assert length_of(st_, 1) == 4
    lv = level_params(st_, 1)
    assert (lv.q, lv.spacers) == (6, (0, 1, 2, 3, 4))


def test_z_level_zero_and_spacers():
    z = family_spec("z_example")
    lv = level_params(z, 0)
    assert (lv.q, lv.spacers) == (3, (0, 5))
    assert [length_of(z, n) for n in range(7)] == [1, 8, 49, 295, 1772, 10633, 63800]
    assert [level_params(z, n).spacers[1] for n in range(6)] == [5, 25, 148, 887, 5317, 31901]


def test_z_spacer_by_direct_search():
    # least a > 3L with a = 1 mod the prime picked out by the pairing
    for n in range(8):
        L = 7 * n + 3
        p = nth_prime(cantor_unpair(n)[1])
        a = 3 * L + 1
        while a % p != 1:
            a += 1
        assert z_spacer(n, L) == a


@given(st.integers(0, 200), st.integers(0, 200))
def test_cantor_pair_roundtrip(a, b):
    z = cantor_pair(a, b)
    assert cantor_unpair(z) == (a, b)
    assert a <= z


def test_family_lengths():
    assert [length_of(family_spec("chacon"), n) for n in range(6)] == [1, 4, 13, 40, 121, 364]
    assert [length_of(family_spec("xp:2"), n) for n in range(5)] == [1, 2, 8, 128, 32768]
    assert [length_of(family_spec("even_staircase"), n) for n in range(2)] == [2, 16]


def test_validate_examples():
    assert validate(family_spec("chacon")).ok
    assert not validate(family_spec("chacon")).degenerate
    assert validate(periodic_spec([(2, [5])])).degenerate
    rep = validate(periodic_spec([(2, [1])], prefix=[(1, [])]))
    assert not rep.ok
    assert any("q" in v for v in rep.violations)


def test_is_bounded_examples():
    b = is_bounded(family_spec("chacon"))
    assert b.is_proved and b.certificate.payload["bound"] == 1
    assert is_bounded(family_spec("staircase")).is_refuted
    b = is_bounded(periodic_spec([(3, [2, 7])]))
    assert b.is_proved and b.certificate.payload["bound"] == 7


def test_census_examples():
    c = spacer_census(family_spec("even_staircase"), 100)
    assert c.values == tuple(range(0, 101, 2))
    assert c.density_at_horizon == Fraction(51, 101)
    c = spacer_census(family_spec("staircase"), 50)
    assert c.values == tuple(range(51))
    c = spacer_census(family_spec("chacon"), 10)
    assert c.values == (0, 1)


@given(periodic_specs())
def test_periodic_level_params_repeat(spec):
    k, per = len(spec.prefix), len(spec.tail.levels)
    for n in range(k, k + 3):
        assert level_params(spec, n) == level_params(spec, n + per)


@given(periodic_specs())
def test_periodic_bound_exact(spec):
    B = max(a for lv in spec.prefix + spec.tail.levels for a in lv.spacers)
    assert is_bounded(spec).certificate.payload["bound"] == B


@given(periodic_specs(), st.integers(1, 60))
def test_census_complement_disjoint(spec, N):
    c = spacer_census(spec, N)
    assert list(c.complement) == sorted(set(c.complement))
    assert not set(c.complement) & set(c.values)
    assert set(c.complement) | set(c.values) == set(range(N + 1))


@given(periodic_specs())
def test_spec_json_roundtrip(spec):
    assert spec_from_dict(json.loads(json.dumps(spec_to_dict(spec)))) == spec


def test_load_spec_reports_line_and_field():
    with pytest.raises(SpecError, match="line 3"):
        load_spec('{\n "seed_zeros": 1,\n "prefix": [,]\n}')
    with pytest.raises(SpecError, match=r"prefix\[0\]"):
        load_spec('{"seed_zeros": 1, "prefix": [{"q": 2}], "tail": {"kind": "family", "id": "chacon"}}')


def test_known_verdicts_only_for_canonical():
    assert known_verdicts(family_spec("yp:2"))["weak_mixing"]["value"] is False
    with_prefix = ParamSpec(2, (LevelParams(2, (2,)),), family_spec("yp:2").tail)
    assert known_verdicts(with_prefix) == {}
