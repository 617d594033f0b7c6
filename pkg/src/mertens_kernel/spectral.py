"""Grid discretization of the integral operator and its eigenvalues.

The operator phi -> int_0^1 K(x, y) phi(y) dy is replaced by the matrix
A_N(m, n) = K(m/N, n/N)/N.  Eigenvalues e of A_N approximate 1/lambda for
the kernel's eigenvalues lambda; the reciprocals are reported as
indicative estimates only (no error bars are available for this
discontinuous kernel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import InvalidArgument, NoConvergence
from .kernel import _check_grid, grid_float, riemann_l2_sum

ESTIMATE_LABEL = "indicative"


def nystrom_matrix(n: int) -> np.ndarray:
    _check_grid(n)
    return grid_float(n) / n


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Round-robin pairing of 0..n-1: n-1 (or n) rounds of disjoint pairs
    covering every pair exactly once per sweep."""
    idx = list(range(n)) + ([-1] if n % 2 else [])
    k = len(idx)
    rounds = []
    for _ in range(k - 1):
        pairs = [(idx[i], idx[k - 1 - i]) for i in range(k // 2)]
        pairs = sorted((min(a, b), max(a, b)) for a, b in pairs if a >= 0 and b >= 0)
        if pairs:
            p = np.array([a for a, _ in pairs], dtype=np.intp)
            q = np.array([b for _, b in pairs], dtype=np.intp)
            rounds.append((p, q))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def symmetric_eigenvalues(a, tol: float = 1e-13, max_sweeps: int = 100) -> list[float]:
    """Eigenvalues of a real symmetric matrix, sorted descending.

    Cyclic Jacobi with round-robin ordering: each round annihilates a set of
    disjoint off-diagonal pairs at once, so a round is two vectorized row
    updates.  Stops once the off-diagonal Frobenius norm is at most ``tol``
    times the initial Frobenius norm.  The sweep order is fixed, so results
    are reproducible bit for bit.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgument("matrix must be square")
    if not tol > 0:
        raise InvalidArgument("tol must be positive")
    if a.size and np.max(np.abs(a - a.T)) > 1e-14:
        raise InvalidArgument("matrix is not symmetric")
    a = (a + a.T) / 2
    n = a.shape[0]
    target = tol * float(np.linalg.norm(a))
    rounds = _round_robin(n)
    sweeps = 0
    while _off_norm(a) > target:
        if sweeps >= max_sweeps:
            raise NoConvergence(f"off-diagonal norm still {_off_norm(a):.3e} after {sweeps} sweeps")
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(active, np.where(theta == 0, 1.0, t), 0.0)
            c = 1 / np.sqrt(t * t + 1)
            s = (t * c)[:, None]
            c = c[:, None]
            # A <- J^T A J as two row updates; the transpose turns the
            # column update into a row update.
            for _ in range(2):
                rp, rq = a[p], a[q]
                a[p], a[q] = c * rp - s * rq, s * rp + c * rq
                a = np.ascontiguousarray(a.T)
            a[p, q] = 0.0
            a[q, p] = 0.0
        sweeps += 1
    return sorted(np.diag(a).tolist(), reverse=True)


@lru_cache(maxsize=16)
def _grid_eigenvalues(n: int) -> tuple[float, ...]:
    return tuple(symmetric_eigenvalues(nystrom_matrix(n)))


@dataclass(frozen=True)
class Spectrum:
    grid_size: int
    eigenvalues: tuple[float, ...]
    zero_threshold: float
    trace: float
    frobenius_sq: float

    @property
    def positive_count(self) -> int:
        return sum(1 for e in self.eigenvalues if e > self.zero_threshold)

    @property
    def negative_count(self) -> int:
        return sum(1 for e in self.eigenvalues if e < -self.zero_threshold)

    @property
    def kernel_eigenvalue_estimates(self) -> tuple[float, ...]:
        """1/e for every eigenvalue beyond the threshold, in eigenvalue order."""
        return tuple(1 / e for e in self.eigenvalues if abs(e) > self.zero_threshold)

    @property
    def positive_estimates(self) -> tuple[float, ...]:
        """Estimates of lambda_1^+ <= lambda_2^+ <= ..."""
        return tuple(1 / e for e in self.eigenvalues if e > self.zero_threshold)

    @property
    def negative_estimates(self) -> tuple[float, ...]:
        """Estimates of lambda_1^- >= lambda_2^- >= ... (closest to zero first)."""
        return tuple(1 / e for e in reversed(self.eigenvalues) if e < -self.zero_threshold)

    @property
    def eigen_sum(self) -> float:
        return math.fsum(self.eigenvalues)

    @property
    def eigen_square_sum(self) -> float:
        return math.fsum(e * e for e in self.eigenvalues)

    def consistency(self, rel_tol: float = 1e-10) -> dict[str, bool]:
        return {
            "count_matches_grid": len(self.eigenvalues) == self.grid_size,
            "sum_equals_trace": math.isclose(self.eigen_sum, self.trace, rel_tol=rel_tol),
            "square_sum_equals_frobenius": math.isclose(
                self.eigen_square_sum, self.frobenius_sq, rel_tol=rel_tol
            ),
            "all_within_half": all(abs(e) <= 0.5 for e in self.eigenvalues),
        }


def spectrum(n: int, zero_threshold: float = 1e-9) -> Spectrum:
    _check_grid(n)
    if not zero_threshold >= 0:
        raise InvalidArgument("threshold must be non-negative")
    a = nystrom_matrix(n)
    return Spectrum(
        grid_size=n,
        eigenvalues=_grid_eigenvalues(n),
        zero_threshold=zero_threshold,
        trace=math.fsum(np.diag(a).tolist()),
        frobenius_sq=math.fsum((a * a).ravel().tolist()),
    )


@dataclass(frozen=True)
class TraceBoundReport:
    grid_size: int
    riemann_sum: Fraction
    eig_square_sum: float

    @property
    def below_quarter(self) -> bool:
        return self.riemann_sum < Fraction(1, 4)

    @property
    def consistent(self) -> bool:
        return math.isclose(self.eig_square_sum, float(self.riemann_sum), rel_tol=1e-10)


def trace_bound_check(n: int) -> TraceBoundReport:
    return TraceBoundReport(n, riemann_l2_sum(n), spectrum(n).eigen_square_sum)


def remark_bound_log(k: int) -> mpmath.mpf:
    """Natural log of 2772 * (918 (k+1) ln(k+1))^(6(k+1))."""
    if k < 1:
        raise InvalidArgument("k must be positive")
    with mpmath.workdps(60):
        k1 = mpmath.mpf(k + 1)
        return mpmath.log(2772) + 6 * k1 * mpmath.log(918 * k1 * mpmath.log(k1))


def remark_bound(k: int) -> mpmath.mpf:
    with mpmath.workdps(60):
        return mpmath.exp(remark_bound_log(k))


def remark_bound_check(k: int, lambda_plus_estimate) -> bool:
    """True iff the estimate does not exceed the upper bound for lambda_k^+.

    Compared in log space at 60 significant digits, so estimates just above
    a bound near 1e40 are still resolved.  ``lambda_plus_estimate`` may be a
    float, int, Fraction, string or mpf.
    """
    with mpmath.workdps(60):
        if isinstance(lambda_plus_estimate, Fraction):
            est = mpmath.mpf(lambda_plus_estimate.numerator) / lambda_plus_estimate.denominator
        else:
            est = mpmath.mpf(lambda_plus_estimate)
        if not est > 0:
            raise InvalidArgument("estimate must be positive")
        return bool(mpmath.log(est) <= remark_bound_log(k))
