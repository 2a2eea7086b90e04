"""Truncated formal power series in 1/n with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable

__all__ = ["FormalSeries"]


class FormalSeries:
    """``sum_{j < order} coeffs[j] * n**-j``, truncated at a fixed order.

    Every operation returns a series of the same order (the smaller one when
    two orders differ), so terms beyond the truncation are never produced.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        coeffs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(coeffs)
        if order < 1:
            raise ValueError("order must be positive")
        coeffs = coeffs[:order]
        coeffs.extend([Fraction(0)] * (order - len(coeffs)))
        self.order = order
        self.coeffs: tuple[Fraction, ...] = tuple(coeffs)

    @classmethod
    def zero(cls, order: int) -> "FormalSeries":
        return cls((), order)

    @classmethod
    def constant(cls, value, order: int) -> "FormalSeries":
        return cls((value,), order)

    @classmethod
    def monomial(cls, power: int, order: int, coeff=1) -> "FormalSeries":
        """``coeff * n**-power`` (zero if the power is past the truncation)."""
        c = [Fraction(0)] * order
        if power < order:
            c[power] = Fraction(coeff)
        return cls(c, order)

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        terms = ", ".join(str(c) for c in self.coeffs)
        return f"FormalSeries([{terms}], order={self.order})"

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def _coerce(self, other) -> "FormalSeries":
        if isinstance(other, FormalSeries):
            return other
        return FormalSeries.constant(other, self.order)

    def truncate(self, order: int) -> "FormalSeries":
        return FormalSeries(self.coeffs[:order], order)

    def __add__(self, other) -> "FormalSeries":
        other = self._coerce(other)
        order = min(self.order, other.order)
        return FormalSeries((a + b for a, b in zip(self.coeffs, other.coeffs)), order)

    __radd__ = __add__

    def __neg__(self) -> "FormalSeries":
        return FormalSeries((-a for a in self.coeffs), self.order)

    def __sub__(self, other) -> "FormalSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FormalSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "FormalSeries":
        if not isinstance(other, FormalSeries):
            k = Fraction(other)
            return FormalSeries((k * a for a in self.coeffs), self.order)
        order = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * order
        for i in range(order):
            if a[i]:
                for j in range(order - i):
                    out[i + j] += a[i] * b[j]
        return FormalSeries(out, order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FormalSeries":
        if isinstance(other, FormalSeries):
            return self * other.reciprocal()
        return self * (1 / Fraction(other))

    def __pow__(self, e: int) -> "FormalSeries":
        if e < 0:
            return self.reciprocal() ** (-e)
        result = FormalSeries.constant(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def reciprocal(self) -> "FormalSeries":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("constant term is zero")
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, self.order):
            acc = sum((a[i] * out[k - i] for i in range(1, k + 1)), Fraction(0))
            out.append(-acc * inv0)
        return FormalSeries(out, self.order)

    def exp(self) -> "FormalSeries":
        """exp of a series with zero constant term."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a zero constant term to stay rational")
        # e' = a' e, written with k*a_k to avoid a derivative object
        a = self.coeffs
        out = [Fraction(1)] + [Fraction(0)] * (self.order - 1)
        for k in range(1, self.order):
            out[k] = sum((i * a[i] * out[k - i] for i in range(1, k + 1)), Fraction(0)) / k
        return FormalSeries(out, self.order)

    def log(self) -> "FormalSeries":
        """log of a series with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        a = self.coeffs
        out = [Fraction(0)] * self.order
        for k in range(1, self.order):
            acc = k * a[k] - sum((i * out[i] * a[k - i] for i in range(1, k)), Fraction(0))
            out[k] = acc / k
        return FormalSeries(out, self.order)

    def shift(self, a) -> "FormalSeries":
        """Re-expand ``sum c_j (n - a)**-j`` in powers of ``1/n``.

        Uses ``(n - a)**-j = n**-j * sum_m C(j-1+m, m) a**m n**-m`` for j >= 1.
        """
        a = Fraction(a)
        out = [self.coeffs[0]] + [Fraction(0)] * (self.order - 1)
        for j in range(1, self.order):
            cj = self.coeffs[j]
            if not cj:
                continue
            am = Fraction(1)
            for m in range(self.order - j):
                out[j + m] += comb(j - 1 + m, m) * am * cj
                am *= a
        return FormalSeries(out, self.order)

    def evaluate(self, n) -> Fraction:
        """Exact value of the truncated sum at a given n (Horner in 1/n)."""
        x = 1 / Fraction(n)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc
