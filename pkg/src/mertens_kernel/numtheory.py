"""Integer arithmetic: Moebius/Mertens sieving and the modular toolbox
(Legendre symbols, square roots modulo p and p**2, CRT, prime search).

Everything here works on Python's unbounded ``int``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CannotLift,
    InvalidArgument,
    NonCoprimeModuli,
    NoSquareRoot,
    ResourceLimit,
    TableTooSmall,
)

# Miller-Rabin with the first 13 prime bases is exact below this bound
# (Sorenson & Webster, 2015).
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True, eq=False)
class MobiusTable:
    """mu(k) and M(k) for 0 <= k <= limit.

    Both arrays are padded with a leading zero so that ``mu[k]`` is the
    Moebius value of ``k``; ``mertens_prefix[k]`` is M(k).  The arrays are
    read-only.
    """

    limit: int
    mu: np.ndarray
    mertens_prefix: np.ndarray

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "MobiusTable":
        """Build a table from mu(1), ..., mu(limit) without validating them.

        Used to feed deliberately corrupted tables to the identity checkers.
        """
        if len(values) == 0:
            raise InvalidArgument("table needs at least one value")
        mu = np.zeros(len(values) + 1, dtype=np.int64)
        mu[1:] = np.asarray(values, dtype=np.int64)
        prefix = np.cumsum(mu)
        mu.setflags(write=False)
        prefix.setflags(write=False)
        return cls(len(values), mu, prefix)

    def with_value(self, k: int, value: int) -> "MobiusTable":
        """Copy of the table with mu(k) replaced by ``value``."""
        if not 1 <= k <= self.limit:
            raise InvalidArgument(f"index {k} outside 1..{self.limit}")
        values = self.mu[1:].copy()
        values[k - 1] = value
        return MobiusTable.from_values(values)

    def values(self) -> list[int]:
        return [int(v) for v in self.mu[1:]]

    def require(self, n: int) -> None:
        if n > self.limit:
            raise TableTooSmall(f"table covers 1..{self.limit}, need {n}")

    def harmonic(self, n: int) -> Fraction:
        """Exact sum of mu(m)/m over m <= n."""
        self.require(n)
        if n < 1:
            return Fraction(0)
        lcm = math.lcm(*range(1, n + 1))
        total = 0
        for m in range(1, n + 1):
            v = int(self.mu[m])
            if v:
                total += v * (lcm // m)
        return Fraction(total, lcm)


def sieve_mobius(limit: int) -> MobiusTable:
    if limit < 1:
        raise InvalidArgument("limit must be >= 1")
    mu = np.ones(limit + 1, dtype=np.int64)
    mu[0] = 0
    composite = np.zeros(limit + 1, dtype=bool)
    for p in range(2, limit + 1):
        if composite[p]:
            continue
        composite[p * p :: p] = True
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    prefix = np.cumsum(mu)
    mu.setflags(write=False)
    prefix.setflags(write=False)
    return MobiusTable(limit, mu, prefix)


def mertens(x, table: MobiusTable) -> int:
    """M(x) = sum of mu(m) for m <= x; zero when x < 1.

    ``x`` may be an int, float or Fraction; its floor is taken exactly.
    """
    if x < 0:
        raise InvalidArgument("x must be non-negative")
    k = math.floor(x)
    if k < 1:
        return 0
    table.require(k)
    return int(table.mertens_prefix[k])


def is_prime(n: int) -> bool:
    """Exact primality test.

    Below 3.3e24 this is a deterministic Miller-Rabin test.  Above it every
    base up to 2*ln(n)**2 is tried, which is exact under the generalized
    Riemann hypothesis.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if n < _MR_DETERMINISTIC_LIMIT:
        bases: Iterable[int] = _MR_BASES
    else:
        bases = range(2, min(n - 2, math.floor(2 * math.log(n) ** 2)) + 1)
    return not any(witness(a) for a in bases)


def _require_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidArgument(f"{p} is not an odd prime")


def legendre_symbol(a: int, p: int) -> int:
    """(a/p) by Euler's criterion."""
    _require_odd_prime(p)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_mod_prime(a: int, p: int) -> int:
    """Smaller square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks)."""
    ls = legendre_symbol(a, p)
    a %= p
    if ls == 0:
        return 0
    if ls == -1:
        raise NoSquareRoot(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre_symbol(z, p) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


def lift_sqrt_to_prime_square(r: int, a: int, p: int) -> int:
    """One Hensel step: the root of x**2 = a (mod p**2) congruent to r mod p."""
    _require_odd_prime(p)
    if a % p == 0:
        raise CannotLift(f"{p} divides {a}; the root mod {p} is not simple")
    if (r * r - a) % p:
        raise InvalidArgument(f"{r}**2 is not {a} mod {p}")
    p2 = p * p
    s = (r - (r * r - a) * pow(2 * r, -1, p2)) % p2
    assert (s * s - a) % p2 == 0 and (s - r) % p == 0
    return s


@dataclass(frozen=True)
class ResidueClass:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidArgument("modulus must be positive")
        if not 0 <= self.residue < self.modulus:
            raise InvalidArgument(
                f"residue {self.residue} not in [0, {self.modulus})"
            )

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"


def crt_combine(classes: Sequence[ResidueClass]) -> ResidueClass:
    if not classes:
        raise InvalidArgument("need at least one residue class")
    for i, a in enumerate(classes):
        for b in classes[i + 1 :]:
            if math.gcd(a.modulus, b.modulus) != 1:
                raise NonCoprimeModuli(f"gcd({a.modulus}, {b.modulus}) > 1")
    r, m = 0, 1
    for c in classes:
        k = (c.residue - r) * pow(m, -1, c.modulus) % c.modulus
        r += m * k
        m *= c.modulus
    return ResidueClass(r, m)


def primes_pm1_mod8(q: float, count: int, max_candidates: int = 10_000_000) -> list[int]:
    """The ``count`` smallest primes p > q with p = 1 or 7 (mod 8)."""
    if q < 5:
        raise InvalidArgument("Q must be at least 5")
    if count < 1:
        raise InvalidArgument("count must be positive")
    found: list[int] = []
    n = math.floor(q) + 1
    for _ in range(max_candidates):
        if n % 8 in (1, 7) and is_prime(n):
            found.append(n)
            if len(found) == count:
                return found
        n += 1
    raise ResourceLimit(f"scanned {max_candidates} candidates above {q}")
