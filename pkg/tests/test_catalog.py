import json
from fractions import Fraction

import pytest

from pitail.catalog import (
    AlgebraicScale,
    SeriesParams,
    catalog_from_json,
    catalog_to_json,
    get_series,
    load_catalog,
)
from pitail.errors import SeriesNotFound
from pitail.hpeval import reference_value, term

from oracles import term_bruteforce


def test_catalog_has_36_rows_in_order():
    rows = load_catalog()
    assert len(rows) == 36
    assert [r.id for r in rows] == list(range(1, 37))


def test_chudnovsky_row():
    row = get_series(7)
    assert row.q == Fraction(1, 6)
    assert (row.r, row.s) == (13591409, 545140134)
    assert row.t == Fraction(-1, 53360**3)
    assert row.p == AlgebraicScale(426880, 10005)
    assert not row.conjectural


def test_row_33_is_the_only_conjectural_one():
    row = get_series(33)
    assert (row.q, row.r, row.s, row.t) == (Fraction(1, 2), 1, 4, -1)
    assert row.conjectural
    assert [r.id for r in load_catalog() if abs(r.t) == 1] == [33]
    assert [r.id for r in load_catalog() if r.conjectural] == [33]


@pytest.mark.parametrize(
    "sid, field, value",
    [
        (23, "t", Fraction(1, 99**4)),
        (23, "s", 26390),
        (35, "q", Fraction(1, 2)),
        (35, "r", 1),
        (35, "s", 6),
        (35, "t", Fraction(1, 4)),
    ],
)
def test_get_series_fields(sid, field, value):
    assert getattr(get_series(sid), field) == value


@pytest.mark.parametrize("bad", [0, 37, -1, "7"])
def test_get_series_unknown(bad):
    with pytest.raises(SeriesNotFound, match="series not in catalog"):
        get_series(bad)


@pytest.mark.parametrize("row", load_catalog(), ids=lambda r: f"#{r.id}")
def test_row_invariants(row):
    assert 0 < row.q < 1
    assert row.q in {Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)}
    assert abs(row.t) <= 1 and row.t != 1
    assert float(row.p) > 0
    m = row.p.radicand
    assert m < 10**6
    assert all(m % (d * d) for d in range(2, int(m**0.5) + 1))


@pytest.mark.parametrize("row", load_catalog(), ids=lambda r: f"#{r.id}")
def test_fifty_terms_approach_p_over_pi(row):
    # the 50-term partial sum misses p/pi by no more than the 50th term,
    # or by 128-bit rounding once that term is below resolution
    partial = sum(term(row, k) for k in range(50))
    ref = reference_value(row, 128)
    err = abs(ref - partial)
    assert err < max(abs(term(row, 49)), abs(ref) * Fraction(1, 2**120))


def test_term_matches_bruteforce_pochhammer():
    for row in (get_series(1), get_series(18), get_series(33)):
        for k in (0, 1, 5, 12):
            assert term(row, k) == term_bruteforce(row, k)


def test_json_round_trip():
    text = catalog_to_json()
    assert catalog_from_json(text) == load_catalog()
    first = json.loads(text)[6]
    assert first == {
        "id": 7,
        "p": {"coeff": "426880/1", "radicand": 10005},
        "q": "1/6",
        "r": 13591409,
        "s": 545140134,
        "t": "-1/151931373056000",
        "conjectural": False,
    }


def test_custom_constructor_and_validation():
    row = SeriesParams.custom("1/3", 2, 0, "1/5")
    assert row.p.radicand == 1 and not row.conjectural
    with pytest.raises(ValueError):
        SeriesParams.custom("3/2", 1, 1, "1/5")
    with pytest.raises(ValueError):
        SeriesParams.custom("1/3", 1, 1, "1")
    with pytest.raises(ValueError):
        AlgebraicScale(1, 12)
