"""Number-theoretic witnesses for sign-definite kernel values.

Given u in {+1, -1} and a count ``lemma_n`` (so lemma_n + 1 primes), we find
primes p_j = +-1 (mod 8) above Q, integers m_j and n with

    2 m_j = 3 (mod p_j),  m_j = u (mod 3),  0 < m_j < 3 p_j,
    3 n^2 = m_j (mod p_j^2),  P^2 < n < 2 P^2  (P = prod p_j).

At the points x_j = p_j/n the kernel takes the closed-form values
K(x_j, x_j) = -(u/6 + m_j/(3 p_j^2)) and K(x_j, x_k) = -1/(2 p_j p_k), and
u*G (G = [K(x_j, x_k)]) is negative definite with every eigenvalue at most
-1/336.  Bump functions of logarithmic width t around each x_j turn this into
the overlap matrix Psi = t sqrt(x_j x_k) K(x_j, x_k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .errors import ConstructionBug, InvalidArgument, InvalidInstance, PreconditionViolation
from .kernel import frac_part, kernel_exact
from .numtheory import (
    ResidueClass,
    crt_combine,
    is_prime,
    lift_sqrt_to_prime_square,
    primes_pm1_mod8,
    sqrt_mod_prime,
)
from .spectral import symmetric_eigenvalues

DEFINITENESS_BOUND = Fraction(-1, 336)
DEFINITENESS_SLACK = 1e-12


def default_q(lemma_n: int) -> float:
    return 5 * math.sqrt(lemma_n + 1)


@dataclass(frozen=True)
class Lemma31Instance:
    u: int
    q: float
    lemma_n: int
    primes: tuple[int, ...]
    ms: tuple[int, ...]
    n: int
    P: int

    @property
    def points(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(p, self.n) for p in self.primes)


def _least_m(p: int, u: int) -> int:
    """Least positive m with 2m = 3 (mod p) and m = u (mod 3)."""
    cls = crt_combine([ResidueClass(3 * pow(2, -1, p) % p, p), ResidueClass(u % 3, 3)])
    return cls.residue


def _canonical_root(m: int, p: int) -> int:
    """Smaller root of 3 x^2 = m (mod p^2)."""
    p2 = p * p
    a = m * pow(3, -1, p2) % p2
    r = sqrt_mod_prime(a, p)
    s = lift_sqrt_to_prime_square(r, a, p)
    return min(s, p2 - s)


def construct_lemma31(u: int, lemma_n: int, q: Optional[float] = None) -> Lemma31Instance:
    if u not in (1, -1):
        raise InvalidArgument("u must be +1 or -1")
    if isinstance(lemma_n, bool) or not isinstance(lemma_n, int) or lemma_n < 0:
        raise InvalidArgument("lemma_n must be a non-negative integer")
    if q is None:
        q = default_q(lemma_n)
    if not q >= 5:
        raise InvalidArgument("Q must be at least 5")
    primes = tuple(primes_pm1_mod8(q, lemma_n + 1))
    ms = tuple(_least_m(p, u) for p in primes)
    cls = crt_combine([ResidueClass(_canonical_root(m, p), p * p) for m, p in zip(ms, primes)])
    P = math.prod(primes)
    # The class is prime to P^2, so its residue is nonzero and P^2 + residue
    # is the only representative in (P^2, 2P^2).
    inst = Lemma31Instance(u, q, lemma_n, primes, ms, P * P + cls.residue, P)
    report = verify_lemma31(inst)
    if not report.passed:
        raise ConstructionBug(f"constructed instance fails {report.failures}")
    return inst


@dataclass(frozen=True)
class LemmaVerification:
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]


def verify_lemma31(inst: Lemma31Instance) -> LemmaVerification:
    """Exact modular checks of every condition and certificate.

    Keys: the four defining conditions (3n^2 = m_j mod p_j^2, m_j least with
    2m_j = 3 mod p_j and m_j = u mod 3, 0 < m_j < 3p_j, P^2 < n < 2P^2)
    plus the supporting facts (prime properties, gcd conditions, the derived congruence
    2n^2 = 1 (mod p_j p_k) and the integrality certificates for v_j, w_jk).
    """
    u, n, P = inst.u, inst.n, inst.P
    ps, ms = inst.primes, inst.ms
    pairs = [(j, k) for j in range(len(ps)) for k in range(len(ps)) if j != k]
    sized = len(ps) == inst.lemma_n + 1 and len(ms) == len(ps)
    checks = {
        "sizes": sized,
        "primes_prime": all(is_prime(p) for p in ps),
        "primes_ascending_distinct": all(a < b for a, b in zip(ps, ps[1:])),
        "primes_above_q": all(p > inst.q for p in ps),
        "primes_pm1_mod8": all(p % 8 in (1, 7) for p in ps),
        "n_square_congruence": sized and all((3 * n * n - m) % (p * p) == 0 for p, m in zip(ps, ms)),
        "m_least_solution": sized and all(
            (2 * m - 3) % p == 0 and (m - u) % 3 == 0 and m == _least_m(p, u)
            for p, m in zip(ps, ms)
        ),
        "m_range": sized and all(0 < m < 3 * p for p, m in zip(ps, ms)),
        "n_window": P * P < n < 2 * P * P,
        "P_is_product": P == math.prod(ps),
        "gcd_m_3p": all(math.gcd(m, 3 * p) == 1 for p, m in zip(ps, ms)),
        "gcd_n_P": math.gcd(n, math.prod(ps)) == 1,
        "two_n_sq_mod_pjpk": all((2 * n * n - 1) % (ps[j] * ps[k]) == 0 for j, k in pairs),
    }
    # 3n^2 = m_j + (3 v_j - u) p_j^2 for an integer v_j.
    checks["certificate_v"] = checks["n_square_congruence"] and all(
        ((3 * n * n - m) // (p * p) + u) % 3 == 0 for p, m in zip(ps, ms)
    )
    # 2n^2 = 1 + (1 + 2 w_jk) p_j p_k for an integer w_jk.
    checks["certificate_w"] = checks["two_n_sq_mod_pjpk"] and all(
        ((2 * n * n - 1) // (ps[j] * ps[k])) % 2 == 1 for j, k in pairs
    )
    return LemmaVerification(checks)


def closed_form_kernel_values(inst: Lemma31Instance) -> tuple[tuple[Fraction, ...], ...]:
    """G(j, k) = K(x_j, x_k), evaluated directly and by the closed forms.

    Raises ConstructionBug if the two evaluations differ anywhere.
    """
    xs = inst.points
    size = len(xs)
    direct = [[kernel_exact(xs[j], xs[k]) for k in range(size)] for j in range(size)]
    for j in range(size):
        for k in range(size):
            if j == k:
                closed = -(Fraction(inst.u, 6) + Fraction(inst.ms[j], 3 * inst.primes[j] ** 2))
            else:
                closed = Fraction(-1, 2 * inst.primes[j] * inst.primes[k])
            if closed != direct[j][k]:
                raise ConstructionBug(
                    f"K(x_{j + 1}, x_{k + 1}) = {direct[j][k]} but closed form gives {closed}"
                )
    return tuple(tuple(row) for row in direct)


def _digits_for(t: float, n: int = 1) -> int:
    extra = max(0, -math.floor(math.log10(t))) if t < 1 else 0
    return 40 + extra + 2 * len(str(n))


def _split_mp(t: mpmath.mpf) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(Delta, delta) at the current working precision."""
    big = mpmath.log(t / -mpmath.expm1(-t))
    return big, t - big


@dataclass(frozen=True)
class BumpParameters:
    t: float
    Delta: float
    delta: float

    def identity_errors(self) -> dict[str, float]:
        """Relative errors of e^Delta - e^-delta = t and Delta + delta = t."""
        exp_gap = math.expm1(self.Delta) - math.expm1(-self.delta)
        return {
            "exp_gap": abs(exp_gap - self.t) / self.t,
            "sum": abs(self.Delta + self.delta - self.t) / self.t,
        }

    def unit_norm_error(self) -> float:
        """|(e^Delta - e^-delta) x_j / (t x_j) - 1|, the same for every j."""
        return abs((math.expm1(self.Delta) - math.expm1(-self.delta)) / self.t - 1)


def split_bump(t: float) -> BumpParameters:
    """Delta = ln(t/(1 - e^-t)) and delta = t - Delta for a given width t > 0."""
    if not t > 0:
        raise InvalidArgument("t must be positive")
    with mpmath.workdps(_digits_for(t)):
        big, small = _split_mp(mpmath.mpf(t))
        return BumpParameters(float(t), float(big), float(small))


def _satisfies_smallness(t: float, n: int) -> bool:
    with mpmath.workdps(_digits_for(t, n)):
        return mpmath.expm1(2 * mpmath.mpf(t)) <= mpmath.mpf(28) / (3 * mpmath.mpf(n) ** 2)


def choose_bump_scale(inst: Lemma31Instance) -> BumpParameters:
    """t = (1/2) ln(1 + 28/(3n^2)), the largest t with e^(2t) - 1 <= 28/(3n^2).

    The float t is nudged down if rounding put it past the boundary.
    """
    t = 0.5 * math.log1p(28 / (3 * inst.n * inst.n))
    while not _satisfies_smallness(t, inst.n):
        t = math.nextafter(t, 0.0)
    if not t <= 2 / max(inst.primes):
        raise ConstructionBug("width condition t <= 2/max(p_j) does not follow")
    return split_bump(t)


@dataclass(frozen=True)
class OverlapMatrix:
    closed: np.ndarray
    box: np.ndarray
    box_constant: bool

    @property
    def max_rel_error(self) -> float:
        scale = np.maximum(np.abs(self.closed), np.finfo(float).tiny)
        return float(np.max(np.abs(self.box - self.closed) / scale))


def overlap_matrix(inst: Lemma31Instance, bump: BumpParameters,
                   g: Optional[tuple[tuple[Fraction, ...], ...]] = None) -> OverlapMatrix:
    """Psi(j, k) = t sqrt(x_j x_k) K(x_j, x_k), plus an independent box check.

    The box check integrates K(x_j, x_k) + 1/(x_j x_k) - 1/(xy) over the
    product of the two supports with exact antiderivatives (area and
    log x), in extended precision since the two large terms cancel to
    about t^2 x_j x_k.  It also confirms that floor(1/(xy)) is constant on
    every box.
    """
    n = inst.n
    if not _satisfies_smallness(bump.t, n):
        raise PreconditionViolation("bump width violates e^(2t) - 1 <= 28/(3n^2)")
    if g is None:
        g = closed_form_kernel_values(inst)
    ps = inst.primes
    size = len(ps)
    closed = np.array([
        [bump.t * (math.sqrt(ps[j] * ps[k]) / n) * float(g[j][k]) for k in range(size)]
        for j in range(size)
    ])
    box = np.empty_like(closed)
    constant = True
    with mpmath.workdps(_digits_for(bump.t, n)):
        t = mpmath.mpf(bump.t)
        big, small = _split_mp(t)
        up, down = mpmath.exp(big), mpmath.exp(-small)
        xs = [mpmath.mpf(p) / n for p in ps]
        for j in range(size):
            for k in range(size):
                xj, xk = xs[j], xs[k]
                inv = mpmath.mpf(n * n) / (ps[j] * ps[k])
                level = mpmath.mpf(g[j][k].numerator) / g[j][k].denominator
                area = (xj * up - xj * down) * (xk * up - xk * down)
                logs = ((mpmath.log(xj * up) - mpmath.log(xj * down))
                        * (mpmath.log(xk * up) - mpmath.log(xk * down)))
                box[j, k] = float(((level + inv) * area - logs) / (t * mpmath.sqrt(xj * xk)))
                base = (n * n) // (ps[j] * ps[k])
                lo = 1 / (xj * up * xk * up)
                hi = 1 / (xj * down * xk * down)
                if not (base < lo and hi < base + 1):
                    constant = False
    return OverlapMatrix(closed, box, constant)


@dataclass
class WitnessReport:
    instance: Lemma31Instance
    points: tuple[Fraction, ...]
    kernel_matrix: tuple[tuple[Fraction, ...], ...]
    bump: BumpParameters
    overlap: OverlapMatrix
    eigenvalues_uG: list[float]
    lemma: LemmaVerification
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def max_eig_uG(self) -> float:
        return self.eigenvalues_uG[0]

    @property
    def passes(self) -> bool:
        return self.max_eig_uG <= float(DEFINITENESS_BOUND) + DEFINITENESS_SLACK

    @property
    def all_checks_pass(self) -> bool:
        return self.passes and self.lemma.passed and all(self.checks.values())


def _require_definiteness_precondition(inst: Lemma31Instance) -> None:
    # min p_j > 5 max(1, sqrt(N)), compared as p^2 > 25 max(1, N).
    if not inst.primes:
        raise InvalidInstance("instance has no primes")
    smallest = min(inst.primes)
    if not (smallest > 5 and smallest * smallest > 25 * max(1, inst.lemma_n)):
        raise InvalidInstance(
            f"min prime {smallest} must exceed 5*max(1, sqrt({inst.lemma_n}))"
        )


def definiteness_check(inst: Lemma31Instance) -> WitnessReport:
    _require_definiteness_precondition(inst)
    lemma = verify_lemma31(inst)
    if not lemma.passed:
        raise InvalidInstance(f"instance fails {lemma.failures}")
    g = closed_form_kernel_values(inst)
    bump = choose_bump_scale(inst)
    overlap = overlap_matrix(inst, bump, g)
    size = len(inst.primes)
    ug = [[float(inst.u * g[j][k]) for k in range(size)] for j in range(size)]
    eigs = symmetric_eigenvalues(ug)

    xs = inst.points
    ps = inst.primes
    inv_products = [[1 / (xs[j] * xs[k]) for k in range(size)] for j in range(size)]
    errors = bump.identity_errors()
    with mpmath.workdps(_digits_for(bump.t, inst.n)):
        big = _split_mp(mpmath.mpf(bump.t))[0]
        inside_unit = all(mpmath.exp(big) * p / inst.n < 1 for p in ps)
    checks = {
        "points_in_open_seventh": all(0 < x < Fraction(1, 7) for x in xs),
        "diagonal_sign": all((g[j][j] < 0) if inst.u == 1 else (g[j][j] > 0) for j in range(size)),
        "fractional_window": all(
            Fraction(1, 3) < frac_part(v) < Fraction(17, 21) for row in inv_products for v in row
        ),
        "supports_disjoint": all(
            abs(math.log(ps[k] / ps[j])) > bump.t for j in range(size) for k in range(size) if j != k
        ),
        "supports_inside_unit_interval": bool(inside_unit),
        "width_below_2_over_pmax": bump.t <= 2 / max(ps),
        "bump_exp_identity": errors["exp_gap"] <= 1e-12,
        "bump_sum_identity": errors["sum"] <= 1e-12,
        "bump_positive_split": 0 < bump.Delta < bump.t and 0 < bump.delta < bump.t,
        "bump_unit_norm": bump.unit_norm_error() <= 1e-12,
        "overlap_box_agrees": overlap.max_rel_error <= 1e-10,
        "overlap_box_constant": overlap.box_constant,
        "overlap_sign_matches_kernel": bool(np.all(np.sign(overlap.closed) == np.sign(
            np.array([[float(v) for v in row] for row in g])))),
    }
    return WitnessReport(inst, xs, g, bump, overlap, eigs, lemma, checks)
