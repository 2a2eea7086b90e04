"""Arbitrary-precision evaluation of terms, remainders and alpha_n.

Everything up to the partial sums is exact rational arithmetic.  Rounding
enters only in ``reference_value``, ``remainder`` and ``alpha_direct``, which
work on MPFR numbers (via gmpy2) at an explicitly budgeted precision.

1/pi is taken from the Chudnovsky row of the catalog itself: its terms shrink
by ~1.5e-14 per step, so a fixed-point integer summation with a geometric
tail bound is both fast and self-contained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpq

from .catalog import SeriesParams, get_series
from .errors import ResourceError

__all__ = [
    "HPReal",
    "DEFAULT_TERM_CAP",
    "pochhammer_prefactor",
    "term",
    "f_n",
    "partial_sum",
    "reference_value",
    "pi_value",
    "remainder",
    "alpha_direct",
    "RemainderReport",
    "remainder_report",
    "working_precision",
]

DEFAULT_TERM_CAP = 10**6
GUARD_BITS = 64
_PI_SERIES = 7


def _ctx(bits: int):
    return gmpy2.context(precision=bits)


def _to_mpfr(x, bits: int) -> mpfr:
    """Correctly rounded conversion of an int/Fraction/mpfr to ``bits`` bits."""
    if isinstance(x, Fraction):
        x = mpq(x.numerator, x.denominator)
    return mpfr(x, bits)


@dataclass(frozen=True)
class HPReal:
    """A binary floating value together with the precision it was rounded to."""

    value: mpfr
    precision_bits: int

    def __post_init__(self) -> None:
        if self.precision_bits < 2:
            raise ValueError("precision must be at least 2 bits")
        if self.value.precision != self.precision_bits:
            object.__setattr__(self, "value", mpfr(self.value, self.precision_bits))

    @classmethod
    def from_rational(cls, x, bits: int) -> "HPReal":
        return cls(_to_mpfr(Fraction(x), bits), bits)

    def __float__(self) -> float:
        return float(self.value)

    # gmpy2 rounds even abs/neg to the ambient context, so pin it
    def __abs__(self) -> "HPReal":
        with _ctx(self.precision_bits):
            return HPReal(abs(self.value), self.precision_bits)

    def __neg__(self) -> "HPReal":
        with _ctx(self.precision_bits):
            return HPReal(-self.value, self.precision_bits)

    def _binary(self, other, op) -> "HPReal":
        if isinstance(other, HPReal):
            bits = min(self.precision_bits, other.precision_bits)
            rhs = other.value
        else:
            bits = self.precision_bits
            rhs = _to_mpfr(Fraction(other), bits + GUARD_BITS)
        with _ctx(bits):
            return HPReal(op(self.value, rhs), bits)

    def __add__(self, other) -> "HPReal":
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other) -> "HPReal":
        return self._binary(other, lambda x, y: x - y)

    def __mul__(self, other) -> "HPReal":
        return self._binary(other, lambda x, y: x * y)

    def __truediv__(self, other) -> "HPReal":
        return self._binary(other, lambda x, y: x / y)

    def _cmp_value(self, other):
        if isinstance(other, HPReal):
            return other.value
        return _to_mpfr(Fraction(other), self.precision_bits + GUARD_BITS)

    def __lt__(self, other) -> bool:
        return self.value < self._cmp_value(other)

    def __le__(self, other) -> bool:
        return self.value <= self._cmp_value(other)

    def __gt__(self, other) -> bool:
        return self.value > self._cmp_value(other)

    def __ge__(self, other) -> bool:
        return self.value >= self._cmp_value(other)

    def is_zero(self) -> bool:
        return self.value == 0

    def log2_abs(self) -> float:
        """log2 |x| as a float (-inf for zero); exponent-safe for huge ranges."""
        if self.value == 0:
            return -math.inf
        m, e = gmpy2.frexp(abs(self.value))
        return e + math.log2(float(m))

    def with_precision(self, bits: int) -> "HPReal":
        return HPReal(mpfr(self.value, bits), bits)

    def digits10(self) -> int:
        """Decimal digits the binary precision can carry."""
        return max(1, int(self.precision_bits * math.log10(2)))

    def to_decimal(self, digits: int | None = None) -> str:
        """Scientific decimal string with ``digits`` significant digits."""
        digits = digits or self.digits10()
        v = self.value
        if v == 0:
            return "0." + "0" * (digits - 1) + "e+0"
        mant, exp, _ = gmpy2.digits(v, 10, digits)
        sign = ""
        if mant.startswith("-"):
            sign, mant = "-", mant[1:]
        return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+d}"

    def __str__(self) -> str:
        return self.to_decimal()

    def to_json(self, digits: int | None = None) -> dict:
        digits = digits or self.digits10()
        return {"value": self.to_decimal(digits), "digits": digits, "bits": self.precision_bits}


# ---------------------------------------------------------------------------
# exact layer


def pochhammer_prefactor(q, n: int) -> Fraction:
    """(1/2)_n (q)_n (1-q)_n / (n!)^3 as an exact rational."""
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if n < 0:
        raise ValueError("n must be non-negative")
    num, den = 1, 1
    a, b = q.numerator, q.denominator
    for k in range(n):
        # (k + 1/2)(k + q)(k + 1 - q) / (k+1)^3
        num *= (2 * k + 1) * (b * k + a) * (b * (k + 1) - a)
        den *= 2 * b * b * (k + 1) ** 3
    return Fraction(num, den)


def term(params: SeriesParams, k: int) -> Fraction:
    """u_k = prefactor(q, k) * (r + s k) * t**k."""
    return pochhammer_prefactor(params.q, k) * (params.r + params.s * k) * params.t**k


def f_n(params: SeriesParams, n: int) -> Fraction:
    """The scale F_n = prefactor(q, n) * n * t**n against which R_n is expanded."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return pochhammer_prefactor(params.q, n) * n * params.t**n


def partial_sum(params: SeriesParams, n: int) -> Fraction:
    """Exact sum u_0 + ... + u_n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    # common-denominator accumulation: one Fraction normalization at the end
    q, t = params.q, params.t
    a, b = q.numerator, q.denominator
    tn, td = t.numerator, t.denominator
    num, den = params.r, 1  # running sum as num/den
    pnum, pden = 1, 1  # prefactor * t**k as pnum/pden
    for k in range(1, n + 1):
        j = k - 1
        pnum *= (2 * j + 1) * (b * j + a) * (b * k - a) * tn
        step = 2 * b * b * k**3 * td
        pden *= step
        num = num * step + pnum * (params.r + params.s * k)
        den = pden
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# floating layer


@lru_cache(maxsize=64)
def _chudnovsky_fixed(bits: int, term_cap: int) -> tuple[int, int]:
    """floor-ish of (sum of the Chudnovsky row) * 2**bits, and the term count.

    Each term is built from the previous one with one floor division, so the
    accumulated truncation error is at most ``K * (r + s K)`` units for K
    terms; callers add >= 64 guard bits on top of ``bits`` to absorb it.
    """
    p = get_series(_PI_SERIES)
    a, b = p.q.numerator, p.q.denominator
    tn, td = p.t.numerator, p.t.denominator
    # |u_{k+1} / u_k| <= |t| (1 + s / (r + s k)) =: rho_k, decreasing in k
    scale = 1 << bits
    cur = scale  # prefactor_k * t**k * 2**bits
    total = cur * p.r
    k = 0
    while True:
        k += 1
        if k > term_cap:
            raise ResourceError(f"reference summation needs more than {term_cap} terms")
        j = k - 1
        cur = cur * ((2 * j + 1) * (b * j + a) * (b * k - a) * tn) // (2 * b * b * k**3 * td)
        u = cur * (p.r + p.s * k)
        total += u
        rho = abs(p.t) * (1 + Fraction(p.s, p.r + p.s * k))
        # remaining tail <= |u_k| rho / (1 - rho) < 1 unit
        if abs(u) * rho < (1 - rho):
            return total, k


def _inv_pi_mpfr(bits: int, term_cap: int = DEFAULT_TERM_CAP) -> mpfr:
    """1/pi = (Chudnovsky sum) / (Chudnovsky p), at ``bits`` bits."""
    work = bits + GUARD_BITS
    fixed, _ = _chudnovsky_fixed(work + GUARD_BITS, term_cap)
    chud = get_series(_PI_SERIES).p
    with _ctx(work):
        s7 = mpfr(fixed) / mpfr(2) ** (work + GUARD_BITS)
        val = s7 / (_to_mpfr(chud.coeff, work) * gmpy2.sqrt(mpfr(chud.radicand)))
    return mpfr(val, bits)


def _reference_mpfr(params: SeriesParams, bits: int, term_cap: int = DEFAULT_TERM_CAP) -> mpfr:
    work = bits + GUARD_BITS
    inv_pi = _inv_pi_mpfr(work, term_cap)
    with _ctx(work):
        val = _to_mpfr(params.p.coeff, work) * gmpy2.sqrt(mpfr(params.p.radicand)) * inv_pi
    return mpfr(val, bits)


def reference_value(params: SeriesParams, precision_bits: int, term_cap: int = DEFAULT_TERM_CAP) -> HPReal:
    """p/pi for a catalog row, accurate to within 4 ulp at ``precision_bits``.

    The Chudnovsky sum is carried with 192 guard bits, so its fixed-point
    truncation error stays far below one ulp; the handful of sqrt, product
    and quotient roundings happen at P+64 or more bits, and the final
    rounding to P bits adds half an ulp.
    """
    if precision_bits < 64:
        raise ValueError("precision must be >= 64 bits")
    return HPReal(_reference_mpfr(params, precision_bits, term_cap), precision_bits)


def pi_value(precision_bits: int, term_cap: int = DEFAULT_TERM_CAP) -> HPReal:
    """pi itself, derived from the same Chudnovsky summation."""
    work = precision_bits + GUARD_BITS
    inv = _inv_pi_mpfr(work, term_cap)
    with _ctx(work):
        val = 1 / inv
    return HPReal(mpfr(val, precision_bits), precision_bits)


def _log2_int(m: int) -> float:
    shift = max(0, m.bit_length() - 60)
    return math.log2(m >> shift) + shift


def _log2_abs_fraction(x: Fraction) -> float:
    if x == 0:
        return -math.inf
    return _log2_int(abs(x.numerator)) - _log2_int(x.denominator)


def working_precision(params: SeriesParams, n: int, precision_bits: int, partial: Fraction | None = None) -> int:
    """Bits needed so that R_n = p/pi - S_n keeps ``precision_bits`` significant bits.

    Budget: P + 64 guard bits + the bit length of |S_n| + the bits cancelled
    in the subtraction, estimated as log2(|S_n| / |u_{n+1}|) plus 16 bits of
    slack for alternating tails where |R_n| may be about |u_{n+1}| / 2.
    """
    partial = partial_sum(params, n) if partial is None else partial
    mag = max(0, math.ceil(_log2_abs_fraction(partial)))
    nxt = term(params, n + 1)
    cancel = max(0, math.ceil(_log2_abs_fraction(partial) - _log2_abs_fraction(nxt))) + 16
    return precision_bits + GUARD_BITS + mag + cancel


def _remainder_mpfr(params: SeriesParams, n: int, bits: int, term_cap: int) -> tuple[mpfr, int]:
    partial = partial_sum(params, n)
    work = working_precision(params, n, bits, partial)
    ref = _reference_mpfr(params, work, term_cap)
    with _ctx(work):
        val = ref - _to_mpfr(partial, work)
    return val, work


def remainder(params: SeriesParams, n: int, precision_bits: int, term_cap: int = DEFAULT_TERM_CAP) -> HPReal:
    """R_n = p/pi - sum_{k<=n} u_k, carrying ``precision_bits`` significant bits."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if precision_bits < 64:
        raise ValueError("precision must be >= 64 bits")
    val, _ = _remainder_mpfr(params, n, precision_bits, term_cap)
    return HPReal(mpfr(val, precision_bits), precision_bits)


def alpha_direct(q, n: int, precision_bits: int) -> HPReal:
    """alpha_n = ln(prefactor(q, n) * (pi n)**1.5 / sin(pi q)) at P bits."""
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if n < 1:
        raise ValueError("n must be >= 1")
    work = precision_bits + 32
    pi = pi_value(work).value
    with _ctx(work):
        pn = pi * n
        x = _to_mpfr(pochhammer_prefactor(q, n), work) * pn * gmpy2.sqrt(pn)
        x = x / gmpy2.sin(pi * _to_mpfr(q, work))
        val = gmpy2.log(x)
    return HPReal(mpfr(val, precision_bits), precision_bits)


@dataclass(frozen=True)
class RemainderReport:
    """One point of an order-of-error check: R_n / F_n against sum_{j<J} c_j / n**j."""

    series_id: int
    n: int
    J: int
    R_n: HPReal
    F_n: Fraction
    ratio: HPReal
    expansion_value: Fraction
    abs_error: HPReal
    scaled_error: HPReal

    def to_json(self) -> dict:
        from .catalog import format_rational

        return {
            "series": self.series_id,
            "n": self.n,
            "J": self.J,
            "R_n": self.R_n.to_json(),
            "F_n": format_rational(self.F_n),
            "ratio": self.ratio.to_json(),
            "expansion_value": format_rational(self.expansion_value),
            "abs_error": self.abs_error.to_json(),
            "scaled_error": self.scaled_error.to_json(),
        }


def remainder_report(
    params: SeriesParams, n: int, J: int, precision_bits: int, ctable=None, term_cap: int = DEFAULT_TERM_CAP
) -> RemainderReport:
    """Compare the remainder at n with the J-term expansion.

    ``ctable`` may be passed to reuse a coefficient table with at least J
    entries; otherwise one is computed.
    """
    from .expansion import c_table

    if n < 1:
        raise ValueError("n must be >= 1")
    if J < 0:
        raise ValueError("J must be >= 0")
    ctable = c_table(params, max(J, 1)) if ctable is None else ctable
    if ctable.J < J:
        raise ValueError(f"coefficient table has {ctable.J} entries, need {J}")
    R, work = _remainder_mpfr(params, n, precision_bits, term_cap)
    F = f_n(params, n)
    expansion = sum((ctable.c[j] / Fraction(n) ** j for j in range(J)), Fraction(0))
    with _ctx(work):
        ratio = R / _to_mpfr(F, work)
        err = abs(ratio - _to_mpfr(expansion, work))
        scaled = err * mpfr(n) ** J
    P = precision_bits
    return RemainderReport(
        series_id=params.id,
        n=n,
        J=J,
        R_n=HPReal(mpfr(R, P), P),
        F_n=F,
        ratio=HPReal(mpfr(ratio, P), P),
        expansion_value=expansion,
        abs_error=HPReal(mpfr(err, P), P),
        scaled_error=HPReal(mpfr(scaled, P), P),
    )
