import random
from fractions import Fraction

import mpmath
import pytest

from pitail.catalog import get_series, load_catalog
from pitail.errors import ResourceError
from pitail.expansion import alpha_series
from pitail.hpeval import (
    HPReal,
    alpha_direct,
    f_n,
    partial_sum,
    pi_value,
    pochhammer_prefactor,
    reference_value,
    remainder,
    remainder_report,
    term,
)

from oracles import alpha_mpmath, inv_pi_ramanujan, prefactor_bruteforce, tail_sum, term_bruteforce


def as_mp(x: HPReal, bits: int) -> mpmath.mpf:
    with mpmath.workprec(bits):
        return mpmath.mpf(x.to_decimal(int(x.precision_bits * 0.302) + 10))


def agree_bits(x, y) -> float:
    """Number of leading bits on which two mpmath values agree."""
    if x == y:
        return float("inf")
    return float(-mpmath.log(abs(x - y) / abs(y), 2))


# -- exact layer ---------------------------------------------------------------


def test_prefactor_examples():
    assert pochhammer_prefactor(Fraction(1, 3), 0) == 1
    assert pochhammer_prefactor(Fraction(1, 2), 1) == Fraction(1, 8)
    assert prefactor_bruteforce(Fraction(1, 6), 2) == Fraction(385, 13824)
    assert pochhammer_prefactor(Fraction(1, 6), 2) == Fraction(385, 13824)


@pytest.mark.parametrize("q", [Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(3, 11)])
def test_prefactor_bruteforce(q):
    for n in (0, 1, 2, 7, 30):
        assert pochhammer_prefactor(q, n) == prefactor_bruteforce(q, n)


def test_terms_and_f_n():
    s33, s35, s7 = get_series(33), get_series(35), get_series(7)
    assert term(s33, 0) == 1
    assert term(s33, 1) == Fraction(-5, 8)
    assert term(s7, 0) == 13591409
    assert f_n(s33, 1) == Fraction(-1, 8)
    assert f_n(s35, 1) == Fraction(1, 32)
    for row in (s7, get_series(12), s35):
        for n in (1, 4, 9):
            assert f_n(row, n) / term(row, n) == Fraction(n, row.r + row.s * n)


@pytest.mark.parametrize("row", load_catalog()[::5], ids=lambda r: f"#{r.id}")
def test_partial_sum_matches_term_sum(row):
    for n in (0, 1, 13):
        assert partial_sum(row, n) == sum(term_bruteforce(row, k) for k in range(n + 1))


def test_partial_sum_examples():
    assert partial_sum(get_series(33), 1) == Fraction(3, 8)
    assert partial_sum(get_series(35), 0) == 1
    assert partial_sum(get_series(23), 0) == 1103


# -- reference values ----------------------------------------------------------


@pytest.mark.parametrize("bits", [64, 256, 1024, 4096])
def test_pi_against_independent_series(bits):
    with mpmath.workprec(bits + 64):
        ours = 1 / as_mp(pi_value(bits), bits + 64)
        assert agree_bits(ours, inv_pi_ramanujan(bits)) >= bits - 8
        assert agree_bits(ours, 1 / mpmath.pi) >= bits - 8


def test_reference_series_33():
    ref = reference_value(get_series(33), 256)
    with mpmath.workprec(320):
        assert agree_bits(as_mp(ref, 320), 2 / mpmath.pi) >= 248
    assert ref.to_decimal(14) == "6.3661977236758e-1"


def test_reference_chudnovsky_close_to_first_term():
    row = get_series(7)
    ref = reference_value(row, 256)
    assert abs(ref - 13591409) < 2 * abs(term(row, 1))


@pytest.mark.parametrize("sid", [1, 7, 18, 23, 33])
def test_reference_precision_contract(sid):
    row = get_series(sid)
    for P in (64, 200, 777):
        lo, hi = reference_value(row, P), reference_value(row, 2 * P)
        with mpmath.workprec(2 * P + 32):
            assert agree_bits(as_mp(lo, 2 * P + 32), as_mp(hi, 2 * P + 32)) >= P - 4


# -- remainders ----------------------------------------------------------------


def test_remainder_chudnovsky_n0_bracket():
    row = get_series(7)
    R0 = abs(remainder(row, 0, 256))
    u1, u2 = abs(term(row, 1)), abs(term(row, 2))
    assert R0 < u1 * (1 + Fraction(1, 10**6))
    assert R0 > u1 * (1 - Fraction(1, 10**6)) * (1 - u2 / u1)


@pytest.mark.parametrize(
    "row", [r for r in load_catalog() if abs(r.t) <= Fraction(1, 4)], ids=lambda r: f"#{r.id}"
)
def test_remainder_against_direct_tail(row):
    P = 256
    for n in (0, 3, 17, 40):
        ours = as_mp(remainder(row, n, P), P + 64)
        with mpmath.workprec(P + 64):
            assert agree_bits(ours, tail_sum(row, n, P)) >= P - 8


def test_remainder_keeps_bits_through_cancellation():
    # R_80 of the Chudnovsky series is ~1e-1120 below a partial sum of ~1e7
    row = get_series(7)
    R = remainder(row, 80, 1024)
    with mpmath.workprec(1100):
        assert agree_bits(as_mp(R, 1100), tail_sum(row, 80, 1024)) >= 1016


def test_telescoping():
    rng = random.Random(1)
    for _ in range(12):
        row = rng.choice(load_catalog())
        n = rng.randint(1, 60)
        P = 256
        diff = remainder(row, n - 1, P) - remainder(row, n, P)
        u = term(row, n)
        assert abs(diff - u) <= abs(u) * Fraction(1, 2 ** (P - 6))


def test_precision_monotone_for_remainder():
    row = get_series(33)
    for P in (128, 300):
        a, b = remainder(row, 25, P), remainder(row, 25, 2 * P)
        with mpmath.workprec(2 * P + 32):
            assert agree_bits(as_mp(a, 2 * P + 32), as_mp(b, 2 * P + 32)) >= P - 8


def test_term_cap():
    with pytest.raises(ResourceError):
        remainder(get_series(7), 0, 10_000, term_cap=20)


def test_remainder_report_consistency():
    row = get_series(23)
    rep = remainder_report(row, 12, 3, 512)
    assert rep.F_n == f_n(row, 12)
    assert rep.expansion_value == sum(c / Fraction(12) ** j for j, c in enumerate(rep_table(row, 3)))
    assert abs(rep.scaled_error - rep.abs_error * 12**3) <= rep.scaled_error * Fraction(1, 2**500)
    assert abs(rep.ratio - rep.expansion_value) - rep.abs_error <= rep.abs_error * Fraction(1, 2**500)


def rep_table(row, J):
    from pitail.expansion import c_table

    return c_table(row, J).c


# -- alpha_n -------------------------------------------------------------------


@pytest.mark.parametrize("q", [Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)])
def test_alpha_direct_against_loggamma(q):
    for n in (1, 10, 123):
        ours = as_mp(alpha_direct(q, n, 300), 400)
        with mpmath.workprec(400):
            assert abs(ours - alpha_mpmath(q, n, 300)) < mpmath.mpf(2) ** -290


def test_alpha_decays():
    a = [abs(float(alpha_direct(Fraction(1, 4), n, 128))) for n in (10, 50, 200)]
    assert a[2] < a[1] < a[0]


def test_alpha_direct_vs_series_q_sixth():
    q, n = Fraction(1, 6), 50
    f8 = alpha_series(q, 8)
    approx = f8.truncate(6).evaluate(n)
    # even-index f_j vanish, so the first omitted term is f_7
    assert f8[6] == 0
    next_term = abs(f8[7]) / Fraction(n) ** 7
    assert abs(alpha_direct(q, n, 512) - approx) < 2 * next_term


@pytest.mark.parametrize("q", [Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)])
def test_alpha_even_coefficients_vanish(q):
    f = alpha_series(q, 14)
    assert all(c == 0 for c in f.coeffs[0::2])
    assert all(c != 0 for c in f.coeffs[1::2])


def test_hpreal_rendering():
    x = HPReal.from_rational(Fraction(-1, 3), 64)
    assert x.to_decimal(5) == "-3.3333e-1"
    assert x.to_json(5) == {"value": "-3.3333e-1", "digits": 5, "bits": 64}
    assert HPReal.from_rational(0, 64).to_decimal(3) == "0.00e+0"
