"""Exact checks of two Mertens-function identities.

eq12:         M(N^2)/N^2 + Q_N = M(N)(M(N) + 4)/(2N^2) - (sum_{m<=N} mu(m)/m)^2,
              Q_N being the Moebius quadratic form of the kernel grid.
mertens1897:  M(n) = 2 M(sqrt n) - sum_{r,s<=sqrt n} mu(r) mu(s) floor(n/(rs)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidArgument
from .kernel import mobius_quadratic_form
from .numtheory import MobiusTable

CHECKS = ("eq12", "mertens1897")


@dataclass(frozen=True)
class IdentityReport:
    parameter: int
    lhs: Fraction
    rhs: Fraction

    @property
    def residual(self) -> Fraction:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.residual == 0


@dataclass(frozen=True)
class IdentityScan:
    which: str
    reports: tuple[IdentityReport, ...]

    @property
    def all_zero(self) -> bool:
        return all(r.holds for r in self.reports)


def check_identity_12(n: int, table: MobiusTable, method: str = "floor") -> IdentityReport:
    if n < 1:
        raise InvalidArgument("N must be positive")
    table.require(n * n)
    nn = n * n
    m_n = int(table.mertens_prefix[n])
    m_nn = int(table.mertens_prefix[nn])
    h = table.harmonic(n)
    lhs = Fraction(m_nn, nn) + mobius_quadratic_form(n, table, method)
    rhs = Fraction(m_n * (m_n + 4), 2 * nn) - h * h
    return IdentityReport(n, lhs, rhs)


def check_mertens_1897(n: int, table: MobiusTable) -> IdentityReport:
    if n < 1:
        raise InvalidArgument("n must be positive")
    table.require(n)
    root = math.isqrt(n)
    mu = table.mu[1 : root + 1]
    support = np.nonzero(mu)[0] + 1
    signs = mu[support - 1]
    double_sum = int(signs @ (n // np.multiply.outer(support, support)) @ signs)
    lhs = int(table.mertens_prefix[n])
    rhs = 2 * int(table.mertens_prefix[root]) - double_sum
    return IdentityReport(n, Fraction(lhs), Fraction(rhs))


def required_limit(which: str, upper: int) -> int:
    """Smallest table limit a scan up to ``upper`` needs."""
    if which == "eq12":
        return max(upper, 1) ** 2
    if which == "mertens1897":
        return max(upper, 1)
    raise InvalidArgument(f"unknown identity {which!r}; expected one of {CHECKS}")


def scan_identities(which: str, params: range, table: MobiusTable) -> IdentityScan:
    required_limit(which, 1)
    check = check_identity_12 if which == "eq12" else check_mertens_1897
    reports = tuple(check(k, table) for k in sorted(params))
    return IdentityScan(which, reports)
