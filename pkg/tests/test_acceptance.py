"""The ten acceptance criteria, one test each, at their stated tolerances.

Each test records a PASS/FAIL line that is repeated in the terminal summary.
"""

import math
from fractions import Fraction

import pytest

from mertens_kernel.identities import scan_identities
from mertens_kernel.kernel import riemann_l2_sum
from mertens_kernel.numtheory import sieve_mobius
from mertens_kernel.spectral import remark_bound_check, spectrum
from mertens_kernel.witness import (
    choose_bump_scale,
    closed_form_kernel_values,
    construct_lemma31,
    definiteness_check,
    verify_lemma31,
)

import oracles

INSTANCES = [(u, k) for u in (1, -1) for k in range(5)]
SIGN_GRIDS = (32, 64, 128, 256)


@pytest.fixture(scope="module")
def big_table():
    return sieve_mobius(512 * 512)


@pytest.fixture(scope="module")
def witnesses():
    return {key: construct_lemma31(*key) for key in INSTANCES}


def test_criterion_01_eq12_residuals(big_table, acceptance_line):
    scan = scan_identities("eq12", range(1, 513), big_table)
    bad = [r.parameter for r in scan.reports if r.residual != 0]
    ok = len(scan.reports) == 512 and not bad
    acceptance_line(1, ok, f"eq12 residual zero for N=1..512 ({len(scan.reports)} checked, nonzero at {bad[:5]})")
    assert ok


def test_criterion_02_mertens_1897(acceptance_line):
    scan = scan_identities("mertens1897", range(1, 20001), sieve_mobius(20000))
    bad = [r.parameter for r in scan.reports if r.residual != 0]
    ok = len(scan.reports) == 20000 and not bad
    acceptance_line(2, ok, f"Mertens 1897 residual zero for n=1..20000 (nonzero at {bad[:5]})")
    assert ok


@pytest.mark.slow
def test_criterion_03_trace_bound(acceptance_line):
    sums = {n: riemann_l2_sum(n) for n in range(1, 513)}
    above = [n for n in range(3, 513) if not sums[n] < Fraction(1, 4)]
    diffs = [abs(sums[2 ** (k + 1)] - sums[2**k]) for k in range(5, 9)]
    decreasing = all(a > b for a, b in zip(diffs, diffs[1:]))
    exact_n3 = sums[3] == Fraction(13, 144)
    ok = not above and decreasing and exact_n3
    acceptance_line(3, ok, (
        f"sum < 1/4 on 3..512: {not above}; "
        f"dyadic differences decreasing: {decreasing} {[float(d) for d in diffs]}; "
        f"N=3 equals 13/144: {exact_n3} (computed {sums[3]})"
    ))
    assert not above
    assert decreasing
    assert exact_n3, f"riemann_l2_sum(3) = {sums[3]}, criterion states 13/144"


@pytest.mark.slow
def test_criterion_04_sign_counts(acceptance_line):
    specs = [spectrum(n, zero_threshold=1e-9) for n in SIGN_GRIDS]
    pos = [s.positive_count for s in specs]
    neg = [s.negative_count for s in specs]
    enough = pos[-1] >= 10 and neg[-1] >= 10
    monotone = all(a <= b for a, b in zip(pos, pos[1:])) and all(a <= b for a, b in zip(neg, neg[1:]))
    ok = enough and monotone
    acceptance_line(4, ok, f"counts along N={list(SIGN_GRIDS)}: positive {pos}, negative {neg}")
    assert enough and monotone


@pytest.mark.slow
def test_criterion_05_spectral_consistency(acceptance_line):
    failures = {}
    for n in (1, 2, 3, 10) + SIGN_GRIDS + (512,):
        s = spectrum(n)
        sum_ok = math.isclose(s.eigen_sum, s.trace, rel_tol=1e-10)
        sq_ok = math.isclose(s.eigen_square_sum, s.frobenius_sq, rel_tol=1e-10)
        bounded = all(abs(e) <= 0.5 for e in s.eigenvalues)
        wide = all(abs(x) >= 2 for x in s.kernel_eigenvalue_estimates)
        if not (sum_ok and sq_ok and bounded and wide):
            failures[n] = (sum_ok, sq_ok, bounded, wide)
    acceptance_line(5, not failures, f"trace, Frobenius and |eig| <= 1/2 at N up to 512 (failures {failures})")
    assert not failures


def test_criterion_06_lemma_instances(witnesses, acceptance_line):
    failures = {}
    for key, inst in witnesses.items():
        report = verify_lemma31(inst)
        if not report.passed:
            failures[key] = report.failures
    brute = {}
    for u, m_expected, n_expected in ((1, 19, 72), (-1, 5, 68)):
        m = oracles.least_m(7, u)
        n = min(oracles.witness_solutions([7], [m]))
        inst = witnesses[u, 0]
        brute[u] = (m, n) == (m_expected, n_expected) and (inst.primes, inst.ms, inst.n) == ((7,), (m,), n)
    ok = not failures and all(brute.values())
    acceptance_line(6, ok, f"10 instances verified (failures {failures}); N=0 brute-force match {brute}")
    assert ok


def test_criterion_07_closed_forms(witnesses, acceptance_line):
    mismatches = []
    for key, inst in witnesses.items():
        g = closed_form_kernel_values(inst)
        xs = inst.points
        direct = tuple(tuple(oracles.kernel(x, y) for y in xs) for x in xs)
        if g != direct:
            mismatches.append(key)
    acceptance_line(7, not mismatches, f"closed forms equal direct evaluation exactly (mismatches {mismatches})")
    assert not mismatches


def test_criterion_08_definiteness(witnesses, acceptance_line):
    worst_eig, worst_box, worst_bump, bad = -math.inf, 0.0, 0.0, []
    for key, inst in witnesses.items():
        r = definiteness_check(inst)
        bump_err = max(choose_bump_scale(inst).identity_errors().values())
        worst_eig = max(worst_eig, r.max_eig_uG)
        worst_box = max(worst_box, r.overlap.max_rel_error)
        worst_bump = max(worst_bump, bump_err)
        if not (r.max_eig_uG <= -1 / 336 + 1e-12 and r.overlap.max_rel_error <= 1e-10 and bump_err <= 1e-12):
            bad.append(key)
    acceptance_line(8, not bad, (
        f"max eig(uG) {worst_eig:.6g} <= -1/336; box rel err {worst_box:.3g}; "
        f"bump identity err {worst_bump:.3g} (failing {bad})"
    ))
    assert not bad


@pytest.mark.slow
def test_criterion_09_remark_bound(acceptance_line):
    estimates = spectrum(512).positive_estimates
    bad = [k for k, lam in enumerate(estimates, start=1) if not remark_bound_check(k, lam)]
    ok = bool(estimates) and not bad
    acceptance_line(9, ok, f"{len(estimates)} positive estimates at N=512 within the bound (violations {bad})")
    assert ok


def test_criterion_10_mutation(big_table, acceptance_line):
    table = sieve_mobius(64 * 64)
    undetected = []
    for m in range(2, 65):
        for delta in (1, -1):
            bad = table.with_value(m, int(table.mu[m]) + delta)
            if scan_identities("eq12", range(1, 65), bad).all_zero:
                undetected.append((m, delta))
    acceptance_line(10, not undetected, f"every single-value corruption of mu(2..64) detected (missed {undetected})")
    assert not undetected
