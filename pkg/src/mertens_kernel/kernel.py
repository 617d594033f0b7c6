"""The kernel K(x, y) = 1/2 - {1/(xy)} on [0, 1]^2 (zero when xy = 0).

Exact values use ``fractions.Fraction``; the float path is a convenience
view.  Grid samples are taken at right endpoints m/N, 1 <= m <= N, where
K(m/N, n/N) = 1/2 - (N^2 mod mn)/(mn).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import InvalidArgument
from .numtheory import MobiusTable

Rational = Fraction
RationalLike = Union[int, str, Fraction]

HALF = Fraction(1, 2)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, "a/b" strings and Fractions to Fraction.

    Floats are accepted too and converted exactly (binary value).
    """
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidArgument(f"not a rational number: {value!r}") from exc


def frac_part(t: Fraction) -> Fraction:
    return t - math.floor(t)


def _check_unit(*values) -> None:
    for v in values:
        if not 0 <= v <= 1:
            raise InvalidArgument(f"{v} outside [0, 1]")


def kernel_exact(x: RationalLike, y: RationalLike) -> Fraction:
    x, y = as_rational(x), as_rational(y)
    _check_unit(x, y)
    xy = x * y
    if xy == 0:
        return Fraction(0)
    return HALF - frac_part(1 / xy)


def kernel_float(x: float, y: float) -> float:
    """Double-precision K(x, y).

    For xy > 0 we have 1/(xy) >= 1, so ``t - floor(t)`` is exact and the
    error is that of ``1/(x*y)``: within a few ulps of 1/(xy).
    """
    x, y = float(x), float(y)
    _check_unit(x, y)
    xy = x * y
    if xy == 0.0:
        return 0.0
    t = 1.0 / xy
    return 0.5 - (t - math.floor(t))


def _check_grid(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise InvalidArgument(f"grid size must be a positive integer, got {n!r}")


def _grid_parts(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(mn, N^2 mod mn) for 1 <= m, n <= N as int64 arrays."""
    idx = np.arange(1, n + 1, dtype=np.int64)
    prod = np.multiply.outer(idx, idx)
    return prod, (n * n) % prod


@dataclass(frozen=True)
class GridMatrix:
    """Exact samples K(m/N, n/N); ``entries[m-1][n-1]`` for 1 <= m, n <= N."""

    grid_size: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, mn: tuple[int, int]) -> Fraction:
        m, n = mn
        return self.entries[m - 1][n - 1]

    def frobenius_sq(self) -> Fraction:
        return sum((e * e for row in self.entries for e in row), Fraction(0))

    def to_float(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.entries])


def grid_matrix(n: int) -> GridMatrix:
    _check_grid(n)
    rows = [[Fraction(0)] * n for _ in range(n)]
    nn = n * n
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            d = a * b
            # 1/2 - (N^2 mod d)/d
            v = Fraction(d - 2 * (nn % d), 2 * d)
            rows[a - 1][b - 1] = rows[b - 1][a - 1] = v
    return GridMatrix(n, tuple(tuple(r) for r in rows))


def grid_float(n: int) -> np.ndarray:
    """Float image of the grid: entry (m, n) is float(K(m/N, n/N)).

    Numerator and denominator of (mn - 2r)/(2mn) are exact in int64 and
    below 2**53, so the single division is correctly rounded.
    """
    _check_grid(n)
    prod, rem = _grid_parts(n)
    return (prod - 2 * rem) / (2 * prod)


def riemann_l2_sum(n: int) -> Fraction:
    """Exact (1/N^2) * sum over the grid of K(m/N, n/N)^2.

    Samples depend on (m, n) only through d = mn, so terms are grouped by d
    and summed over the common denominator lcm(1..N)^4 (a multiple of every
    d^2 that occurs).
    """
    _check_grid(n)
    prod, rem = _grid_parts(n)
    d, first, counts = np.unique(prod.ravel(), return_index=True, return_counts=True)
    r = rem.ravel()[first]
    weights = counts * (d - 2 * r) ** 2
    lcm_sq = math.lcm(*range(1, n + 1)) ** 2
    total = 0
    for dd, w in zip(d.tolist(), weights.tolist()):
        q = lcm_sq // dd
        total += w * q * q
    return Fraction(total, 4 * n * n * lcm_sq * lcm_sq)


def mobius_quadratic_form(n: int, table: MobiusTable, method: str = "floor") -> Fraction:
    """Exact (1/N^2) * sum_{m,n<=N} K(m/N, n/N) mu(m) mu(n).

    ``method="floor"`` writes K = 1/2 - N^2/(mn) + floor(N^2/(mn)), which
    splits the sum into M(N)^2/2 - N^2 (sum mu(m)/m)^2 plus an integer
    floor sum; ``method="direct"`` adds the exact grid entries one by one
    and is only practical for small N.
    """
    _check_grid(n)
    table.require(n)
    mu = table.mu[1 : n + 1]
    if method == "direct":
        grid = grid_matrix(n)
        total = Fraction(0)
        for a in range(1, n + 1):
            if mu[a - 1] == 0:
                continue
            for b in range(1, n + 1):
                if mu[b - 1]:
                    total += grid[a, b] * int(mu[a - 1] * mu[b - 1])
        return total / (n * n)
    if method != "floor":
        raise InvalidArgument(f"unknown method {method!r}")
    support = np.nonzero(mu)[0] + 1
    signs = mu[support - 1]
    floors = (n * n) // np.multiply.outer(support, support)
    floor_sum = int(signs @ floors @ signs)
    m_n = int(signs.sum())
    h = table.harmonic(n)
    return (Fraction(m_n * m_n, 2) - n * n * h * h + floor_sum) / (n * n)
