"""Exact rational coefficients of the remainder and log-prefactor expansions.

Two expansions live here:

* ``c_table`` gives ``c_0, c_1, ...`` with
  ``R_n ~ F_n * sum_j c_j / n**j``, where ``R_n`` is the tail of the series
  after term ``n`` and ``F_n = (1/2)_n (q)_n (1-q)_n / n!**3 * n * t**n``.
* ``alpha_series`` gives ``f_1, f_2, ...`` with
  ``(1/2)_n (q)_n (1-q)_n / n!**3 = sin(pi q) / (pi n)**1.5 * exp(alpha_n)`` and
  ``alpha_n ~ sum_j f_j / n**j``, assembled from the Stirling series.

Both expansions diverge; they are only meaningful truncated.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .catalog import SeriesParams
from .errors import SingularRecursion
from .formal import FormalSeries

__all__ = [
    "bernoulli",
    "a_coeff",
    "theta_series",
    "alpha_series",
    "DCoeffs",
    "d_coeffs",
    "CoeffTable",
    "c_table",
]

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1), Fraction(-1, 2)]


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k (B_1 = -1/2; odd k > 1 give 0).

    Built from ``sum_{i=0}^{k} C(k+1, i) B_i = 0`` and memoized.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > 1 and k % 2:
        return Fraction(0)
    with _bern_lock:
        while len(_bern) <= k:
            m = len(_bern)
            acc = sum((comb(m + 1, i) * b for i, b in enumerate(_bern)), Fraction(0))
            _bern.append(-acc / (m + 1))
        return _bern[k]


def a_coeff(q, l: int) -> Fraction:
    """Coefficient of n**-l in ``(n + 1/2 - q) ln(1 - q/n) + q``."""
    if l < 1:
        raise ValueError("l must be >= 1")
    q = Fraction(q)
    return -(l + 1 - 2 * q) * q**l / (2 * l * (l + 1))


def theta_series(L: int) -> FormalSeries:
    """Stirling correction ``sum_{l=1}^{L} B_2l / (2l (2l-1)) x**-(2l-1)`` (order 2L)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    coeffs = [Fraction(0)] * (2 * L)
    for l in range(1, L + 1):
        coeffs[2 * l - 1] = bernoulli(2 * l) / (2 * l * (2 * l - 1))
    return FormalSeries(coeffs, 2 * L)


def alpha_series(q, J: int) -> FormalSeries:
    """Coefficients f_0..f_{J-1} of the expansion of alpha_n (f_0 = 0).

    Uses L = ceil(J/2) Stirling terms, so the neglected part is
    O(n**-(2L+1)) and every returned coefficient is exact.
    """
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if J < 2:
        raise ValueError("J must be >= 2")
    L = -(-J // 2)
    f = [Fraction(0)] * J
    bases = (q, 1 - q, Fraction(1, 2))

    for l in range(1, min(2 * L, J - 1) + 1):
        f[l] += sum(a_coeff(a, l) for a in bases)

    for l in range(1, L + 1):
        w = bernoulli(2 * l) / (2 * l * (2 * l - 1))
        if 2 * l - 1 < J:
            f[2 * l - 1] -= 3 * w
        for m in range(0, 2 * L + 2 - 2 * l):
            power = m + 2 * l - 1
            if power >= J:
                break
            f[power] += w * comb(2 * l - 2 + m, m) * sum(a**m for a in bases)
    return FormalSeries(f, J)


@dataclass(frozen=True)
class DCoeffs:
    """Expansion ``F_n / F_{n-1} = sum_l d_l n**-l``."""

    q: Fraction
    t: Fraction
    values: tuple[Fraction, ...]

    def __getitem__(self, l: int) -> Fraction:
        return self.values[l]

    def as_series(self) -> FormalSeries:
        return FormalSeries(self.values)


def _d_scale(q: Fraction, l: int) -> Fraction:
    # d_l / t
    if l == 0:
        return Fraction(1)
    if l == 1:
        return Fraction(-1, 2)
    g = q * (1 - q)
    return g if l == 2 else g / 2


def d_coeffs(q, t, L: int) -> DCoeffs:
    """d_0..d_L: t, -t/2, q(1-q)t, then q(1-q)t/2 for every l >= 3."""
    q, t = Fraction(q), Fraction(t)
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if L < 0:
        raise ValueError("L must be non-negative")
    return DCoeffs(q, t, tuple(t * _d_scale(q, l) for l in range(L + 1)))


@dataclass(frozen=True)
class CoeffTable:
    series_id: int
    J: int
    c: tuple[Fraction, ...]

    def __getitem__(self, j: int) -> Fraction:
        return self.c[j]

    def __len__(self) -> int:
        return self.J

    def as_series(self) -> FormalSeries:
        return FormalSeries(self.c, self.J)

    def prefix(self, J: int) -> "CoeffTable":
        if not 0 <= J <= self.J:
            raise ValueError(f"J must be in [0, {self.J}]")
        return CoeffTable(self.series_id, J, self.c[:J])


def c_table(params: SeriesParams, J: int) -> CoeffTable:
    """Exact c_0..c_{J-1} from the three-term recursion on d_l.

    The recursion is run on integers: with t = a/b, q(1-q) = e/f and
    M = 2f(b-a), each X_N = (b-a) M**N c_N is an integer, and
    ``X_N = M**(N-1) a (D_N s b + D_{N-1} r (b-a))
            + sum_{k=1}^{N-1} X_k M**(N-1-k) (a D_{N-k} - 2fb C(N-1, k-1))``
    with D_l = 2f d_l / t.  This avoids a gcd per term; one reduction per
    returned coefficient.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    t = params.t
    if t == 1:
        raise SingularRecursion("recursion singular: 1-d_0 = 0")
    a, b = t.numerator, t.denominator
    g = params.q * (1 - params.q)
    e, f = g.numerator, g.denominator
    r, s = params.r, params.s
    bma = b - a
    M = 2 * f * bma

    def D(l: int) -> int:
        return (2 * f, -f, 2 * e)[l] if l < 3 else e

    X = [a * s]
    # Z[k-1] holds X_k * M**(N-1-k) for the current N
    Z: list[int] = []
    Mpow = 1  # M**(N-1)
    for N in range(1, J):
        head = Mpow * a * (D(N) * s * b + D(N - 1) * r * bma)
        acc = head
        for k in range(1, N):
            acc += Z[k - 1] * (a * D(N - k) - 2 * f * b * comb(N - 1, k - 1))
        X.append(acc)
        Z = [z * M for z in Z]
        Z.append(acc)
        Mpow *= M

    c = []
    den = bma
    for x in X:
        c.append(Fraction(x, den))
        den *= M
    return CoeffTable(params.id, J, tuple(c))
