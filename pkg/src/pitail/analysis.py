"""Uses of the remainder expansion: truncation, acceleration, sweeps, envelopes."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Callable, Iterable, Sequence

import gmpy2
from gmpy2 import mpfr

from .catalog import SeriesParams, format_rational, get_series
from .errors import PrecisionError
from .expansion import CoeffTable, c_table
from .hpeval import (
    GUARD_BITS,
    HPReal,
    RemainderReport,
    _ctx,
    _reference_mpfr,
    _remainder_mpfr,
    _to_mpfr,
    f_n,
    partial_sum,
    remainder_report,
)

__all__ = [
    "expansion_value",
    "optimal_truncation",
    "AccelerationReport",
    "accelerate",
    "order_sweep",
    "EnvelopeReport",
    "envelope_check",
    "sign_pattern",
    "classify_cell",
    "AUTO_TABLE_SIZE",
    "ENVELOPE_SERIES",
]

AUTO_TABLE_SIZE = 200
ENVELOPE_SERIES = 33


def _pmap(fn: Callable, items: Iterable, jobs: int | None) -> list:
    """Order-preserving map, in worker processes when jobs > 1."""
    items = list(items)
    if not jobs or jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def expansion_value(ctable: CoeffTable, n: int) -> Fraction:
    """Exact sum_{j<J} c_j / n**j."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return ctable.as_series().evaluate(n) if ctable.J else Fraction(0)


def optimal_truncation(ctable: CoeffTable, n: int) -> int:
    """Smallest-term truncation point for the divergent expansion at n.

    Returns the first j >= 1 whose term |c_j / n**j| is not smaller than the
    previous nonzero term, or ``ctable.J`` if the terms keep shrinking.  Zero
    coefficients never stop the scan.
    """
    if ctable.J < 2:
        raise ValueError("need a table with at least two coefficients")
    x = Fraction(1, n)
    prev = abs(ctable.c[0])
    xj = Fraction(1)
    for j in range(1, ctable.J):
        xj *= x
        mag = abs(ctable.c[j]) * xj
        if mag == 0:
            continue
        if prev != 0 and mag >= prev:
            return j
        prev = mag
    return ctable.J


@dataclass(frozen=True)
class AccelerationReport:
    series_id: int
    n: int
    J_used: int
    raw_estimate: Fraction
    corrected_estimate: Fraction
    raw_error: HPReal
    corrected_error: HPReal
    digits_gained: float
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "series": self.series_id,
            "n": self.n,
            "J_used": self.J_used,
            "raw_estimate": format_rational(self.raw_estimate),
            "corrected_estimate": format_rational(self.corrected_estimate),
            "raw_error": self.raw_error.to_json(20),
            "corrected_error": self.corrected_error.to_json(20),
            "digits_gained": round(self.digits_gained, 6),
        }


def _conjectural_warning(params: SeriesParams) -> tuple[str, ...]:
    if params.conjectural:
        return (f"series {params.id} is conjectural: the expansion is unproved for |t| = 1",)
    return ()


def accelerate(params: SeriesParams, n: int, J: int | str = "auto", precision_bits: int = 256) -> AccelerationReport:
    """Add the tail estimate F_n * sum_{j<J} c_j / n**j to the n-th partial sum.

    ``J="auto"`` picks the smallest-term truncation from a 200-entry table.
    Both estimates are exact rationals; their errors are measured against
    p/pi at P + 64 + bitlen|S_n| bits, and the call fails with
    ``PrecisionError`` unless that is at least three times the number of
    bits the corrected estimate gets right.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if J == "auto":
        table = c_table(params, AUTO_TABLE_SIZE)
        J = optimal_truncation(table, n)
        table = table.prefix(J)
    else:
        J = int(J)
        if J < 0:
            raise ValueError("J must be >= 0")
        table = c_table(params, J) if J else CoeffTable(params.id, 0, ())

    raw = partial_sum(params, n)
    corrected = raw + f_n(params, n) * expansion_value(table, n) if J else raw
    work = precision_bits + GUARD_BITS + max(0, abs(raw).numerator.bit_length() - abs(raw).denominator.bit_length() + 1)
    ref = _reference_mpfr(params, work)
    with _ctx(work):
        raw_err = abs(ref - _to_mpfr(raw, work))
        cor_err = abs(ref - _to_mpfr(corrected, work))
        apparent = work + 1 if cor_err == 0 else float(gmpy2.log2(abs(ref)) - gmpy2.log2(cor_err))
    if 3 * apparent > work:
        need = math.ceil(3 * apparent) - GUARD_BITS + 1
        raise PrecisionError(
            f"increase precision: corrected estimate is good to ~{apparent:.0f} bits, "
            f"measuring it needs --prec >= {need}"
        )
    with _ctx(work):
        gained = float(gmpy2.log10(raw_err) - gmpy2.log10(cor_err)) if J else 0.0
    return AccelerationReport(
        series_id=params.id,
        n=n,
        J_used=J,
        raw_estimate=raw,
        corrected_estimate=corrected,
        raw_error=HPReal(mpfr(raw_err, precision_bits), precision_bits),
        corrected_error=HPReal(mpfr(cor_err, precision_bits), precision_bits),
        digits_gained=float(gained),
        warnings=_conjectural_warning(params),
    )


def _sweep_point(args, params: SeriesParams, J: int, precision_bits: int, ctable: CoeffTable) -> RemainderReport:
    return remainder_report(params, args, J, precision_bits, ctable=ctable)


def order_sweep(
    params: SeriesParams, n_list: Sequence[int], J: int, precision_bits: int, jobs: int | None = 1
) -> list[RemainderReport]:
    """One RemainderReport per n; flat ``scaled_error`` means the error is O(n**-J)."""
    n_list = list(n_list)
    if not n_list:
        raise ValueError("n_list must not be empty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly ascending")
    ctable = c_table(params, max(J, 1))
    fn = partial(_sweep_point, params=params, J=J, precision_bits=precision_bits, ctable=ctable)
    return _pmap(fn, n_list, jobs)


@dataclass(frozen=True)
class EnvelopeReport:
    """One (n, L) cell of the bracket ``lower < R_n/F_n < upper``.

    ``lower`` sums c_j / n**j for j <= 4L-1 and ``upper`` for j <= 4L+1, both
    exactly.  ``margin`` is the smaller gap divided by the bracket width; a
    cell holds only when that exceeds 2**(-P/2).
    """

    series_id: int
    n: int
    L: int
    lower: Fraction
    ratio: HPReal
    upper: Fraction
    margin: HPReal
    status: str  # "holds" | "violated" | "indeterminate"

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def to_json(self) -> dict:
        return {
            "series": self.series_id,
            "n": self.n,
            "L": self.L,
            "lower": format_rational(self.lower),
            "ratio": self.ratio.to_json(30),
            "upper": format_rational(self.upper),
            "margin": self.margin.to_json(10),
            "status": self.status,
            "holds": self.holds,
        }


def classify_cell(margin, width, threshold) -> str:
    """Status of one envelope cell from its normalized margin.

    Near-ties (|margin| <= threshold) and empty brackets are indeterminate,
    never a pass.
    """
    if width == 0 or -threshold <= margin <= threshold:
        return "indeterminate"
    return "holds" if margin > 0 else "violated"


def _envelope_row(n: int, series_id: int, L_max: int, precision_bits: int, ctable: CoeffTable) -> list[EnvelopeReport]:
    params = get_series(series_id)
    x = Fraction(1, n)
    prefix = []
    acc = Fraction(0)
    xj = Fraction(1)
    for c in ctable.c:
        acc += c * xj
        prefix.append(acc)
        xj *= x
    widths = [prefix[4 * L + 1] - prefix[4 * L - 1] for L in range(1, L_max + 1)]
    smallest = min((abs(w) for w in widths if w), default=Fraction(1))
    extra = max(0, math.ceil(-math.log2(smallest.numerator) + math.log2(smallest.denominator)))
    bits = precision_bits + GUARD_BITS + extra

    R, work = _remainder_mpfr(params, n, bits, 10**6)
    threshold = mpfr(2) ** (-(precision_bits // 2))
    out = []
    with _ctx(work):
        ratio = R / _to_mpfr(f_n(params, n), work)
        for L, width in zip(range(1, L_max + 1), widths):
            lower, upper = prefix[4 * L - 1], prefix[4 * L + 1]
            gap = min(ratio - _to_mpfr(lower, work), _to_mpfr(upper, work) - ratio)
            margin = gap / _to_mpfr(abs(width), work) if width else mpfr(0)
            status = classify_cell(margin, width, threshold)
            out.append(
                EnvelopeReport(
                    series_id, n, L, lower, HPReal(mpfr(ratio, precision_bits), precision_bits), upper,
                    HPReal(mpfr(margin, 64), 64), status,
                )
            )
    return out


def envelope_check(
    n_max: int, L_max: int, precision_bits: int, series_id: int = ENVELOPE_SERIES, jobs: int | None = 1
) -> list[EnvelopeReport]:
    """Check ``sum_{j<=4L-1} < R_n/F_n < sum_{j<=4L+1}`` for 1 <= n <= n_max, 1 <= L <= L_max.

    Intended for series 33; other ids are accepted for exploration only.
    R_n is evaluated with enough extra bits that its rounding error is
    negligible against the narrowest bracket at each n.  Reports come back in
    (L, n) order.
    """
    if n_max < 1 or L_max < 1:
        raise ValueError("n_max and L_max must be >= 1")
    ctable = c_table(get_series(series_id), 4 * L_max + 2)
    fn = partial(_envelope_row, series_id=series_id, L_max=L_max, precision_bits=precision_bits, ctable=ctable)
    rows = _pmap(fn, range(1, n_max + 1), jobs)
    return [rows[n - 1][L - 1] for L in range(1, L_max + 1) for n in range(1, n_max + 1)]


def sign_pattern(ctable: CoeffTable) -> list[str]:
    """Signs ('+' / '-') of the nonzero coefficients, in order."""
    return ["+" if c > 0 else "-" for c in ctable.c if c != 0]
