"""Verification toolkit for the kernel K(x, y) = 1/2 - {1/(xy)} on (0, 1]^2."""

from .errors import KernelToolkitError
from .identities import check_identity_12, check_mertens_1897, scan_identities
from .kernel import grid_matrix, kernel_exact, kernel_float, mobius_quadratic_form, riemann_l2_sum
from .numtheory import MobiusTable, mertens, sieve_mobius
from .spectral import spectrum, symmetric_eigenvalues, trace_bound_check
from .witness import construct_lemma31, definiteness_check, verify_lemma31

__all__ = [
    "KernelToolkitError",
    "MobiusTable",
    "check_identity_12",
    "check_mertens_1897",
    "construct_lemma31",
    "definiteness_check",
    "grid_matrix",
    "kernel_exact",
    "kernel_float",
    "mertens",
    "mobius_quadratic_form",
    "riemann_l2_sum",
    "scan_identities",
    "sieve_mobius",
    "spectrum",
    "symmetric_eigenvalues",
    "trace_bound_check",
    "verify_lemma31",
]
