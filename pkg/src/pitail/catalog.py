"""The 36 known rational hypergeometric series for 1/pi.

Each row describes

    p / pi = sum_k (1/2)_k (q)_k (1-q)_k / (k!)^3 * (r + s*k) * t^k

with ``(a)_k`` the rising factorial.  ``p`` is the only irrational parameter
and is kept exactly as ``coeff * sqrt(radicand)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import SeriesNotFound

__all__ = [
    "AlgebraicScale",
    "SeriesParams",
    "load_catalog",
    "get_series",
    "catalog_to_json",
    "catalog_from_json",
    "format_rational",
    "parse_rational",
]


def format_rational(x: Fraction) -> str:
    """Render a rational as ``"num/den"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def _is_squarefree(m: int) -> bool:
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class AlgebraicScale:
    """A positive number of the form ``coeff * sqrt(radicand)``."""

    coeff: Fraction
    radicand: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.radicand < 1 or not _is_squarefree(self.radicand):
            raise ValueError(f"radicand must be a positive squarefree integer, got {self.radicand}")
        if self.coeff <= 0:
            raise ValueError("scale must be positive")

    def __str__(self) -> str:
        return f"{format_rational(self.coeff)}*sqrt({self.radicand})"

    def __float__(self) -> float:
        return float(self.coeff) * self.radicand**0.5


@dataclass(frozen=True)
class SeriesParams:
    id: int
    p: AlgebraicScale
    q: Fraction
    r: int
    s: int
    t: Fraction
    conjectural: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if abs(self.t) > 1 or self.t == 1:
            raise ValueError(f"need |t| <= 1 and t != 1, got {self.t}")
        if self.conjectural != (abs(self.t) == 1):
            raise ValueError("conjectural must be set exactly when |t| = 1")

    @classmethod
    def custom(cls, q, r: int, s: int, t, p: AlgebraicScale | None = None, id: int = 0) -> "SeriesParams":
        """Build an off-catalog row, e.g. for tests.  ``p`` defaults to 1."""
        t = Fraction(t)
        return cls(id, p or AlgebraicScale(Fraction(1)), Fraction(q), r, s, t, abs(t) == 1)


def _row(id: int, coeff, radicand: int, q: str, r: int, s: int, t) -> SeriesParams:
    t = Fraction(t)
    return SeriesParams(id, AlgebraicScale(Fraction(coeff), radicand), Fraction(q), r, s, t, abs(t) == 1)


_F = Fraction
_ROWS = (
    _row(1, 5, 15, "1/6", 8, 63, _F(-64, 125)),
    _row(2, 32, 2, "1/6", 15, 154, _F(-27, 512)),
    _row(3, 32, 6, "1/6", 25, 342, _F(-1, 512)),
    _row(4, _F(160, 9), 30, "1/6", 31, 506, _F(-9, 64000)),
    _row(5, _F(640, 3), 15, "1/6", 263, 5418, _F(-1, 512000)),
    _row(6, 1760, 330, "1/6", 10177, 261702, _F(-1, 440**3)),
    _row(7, 426880, 10005, "1/6", 13591409, 545140134, _F(-1, 53360**3)),
    _row(8, 5, 5, "1/6", 3, 28, _F(27, 125)),
    _row(9, _F(5, 6), 15, "1/6", 1, 11, _F(4, 125)),
    _row(10, _F(11, 4), 33, "1/6", 5, 63, _F(8, 1331)),
    _row(11, _F(85, 54), 255, "1/6", 8, 133, _F(64, 614125)),
    _row(12, 8, 1, "1/4", 3, 20, _F(-1, 4)),
    _row(13, 72, 1, "1/4", 23, 260, _F(-1, 324)),
    _row(14, 3528, 1, "1/4", 1123, 21460, _F(-1, 777924)),
    _row(15, 9, 7, "1/4", 8, 65, _F(-256, 3969)),
    _row(16, _F(16, 3), 3, "1/4", 3, 28, _F(-1, 48)),
    _row(17, _F(288, 5), 5, "1/4", 41, 644, _F(-1, 25920)),
    _row(18, _F(9, 2), 1, "1/4", 1, 7, _F(32, 81)),
    _row(19, 2, 3, "1/4", 1, 8, _F(1, 9)),
    _row(20, _F(9, 4), 2, "1/4", 1, 10, _F(1, 81)),
    _row(21, _F(49, 9), 3, "1/4", 3, 40, _F(1, 2401)),
    _row(22, 18, 11, "1/4", 19, 280, _F(1, 9801)),
    _row(23, _F(9801, 4), 2, "1/4", 1103, 26390, _F(1, 99**4)),
    _row(24, 12, 3, "1/3", 7, 51, _F(-1, 16)),
    _row(25, 96, 3, "1/3", 53, 615, _F(-1, 1024)),
    _row(26, 1500, 3, "1/3", 827, 14151, _F(-1, 250000)),
    _row(27, _F(4, 3), 3, "1/3", 1, 5, _F(-9, 16)),
    _row(28, _F(4, 5), 15, "1/3", 1, 9, _F(-1, 80)),
    _row(29, _F(108, 7), 7, "1/3", 13, 165, _F(-1, 3024)),
    _row(30, 3, 3, "1/3", 1, 6, _F(1, 2)),
    _row(31, _F(27, 4), 1, "1/3", 2, 15, _F(2, 27)),
    _row(32, _F(15, 2), 3, "1/3", 4, 33, _F(4, 125)),
    _row(33, 2, 1, "1/2", 1, 4, _F(-1)),
    _row(34, 2, 2, "1/2", 1, 6, _F(-1, 8)),
    _row(35, 4, 1, "1/2", 1, 6, _F(1, 4)),
    _row(36, 16, 1, "1/2", 5, 42, _F(1, 64)),
)
del _F

_BY_ID = {row.id: row for row in _ROWS}


def load_catalog() -> list[SeriesParams]:
    return list(_ROWS)


def get_series(id: int) -> SeriesParams:
    try:
        return _BY_ID[id]
    except (KeyError, TypeError):
        raise SeriesNotFound(id) from None


def _row_to_dict(row: SeriesParams) -> dict:
    return {
        "id": row.id,
        "p": {"coeff": format_rational(row.p.coeff), "radicand": row.p.radicand},
        "q": format_rational(row.q),
        "r": row.r,
        "s": row.s,
        "t": format_rational(row.t),
        "conjectural": row.conjectural,
    }


def catalog_to_json(rows: list[SeriesParams] | None = None) -> str:
    rows = load_catalog() if rows is None else rows
    return json.dumps([_row_to_dict(row) for row in rows], indent=2)


def catalog_from_json(text: str) -> list[SeriesParams]:
    out = []
    for obj in json.loads(text):
        p = AlgebraicScale(parse_rational(obj["p"]["coeff"]), int(obj["p"]["radicand"]))
        out.append(
            SeriesParams(
                int(obj["id"]), p, parse_rational(obj["q"]), int(obj["r"]), int(obj["s"]),
                parse_rational(obj["t"]), bool(obj["conjectural"]),
            )
        )
    return out
