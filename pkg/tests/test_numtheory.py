import math

import pytest
from hypothesis import given, strategies as st

from mertens_kernel.errors import (
    CannotLift,
    InvalidArgument,
    NonCoprimeModuli,
    NoSquareRoot,
    ResourceLimit,
    TableTooSmall,
)
from mertens_kernel.numtheory import (
    MobiusTable,
    ResidueClass,
    crt_combine,
    is_prime,
    legendre_symbol,
    lift_sqrt_to_prime_square,
    mertens,
    primes_pm1_mod8,
    sieve_mobius,
    sqrt_mod_prime,
)

import oracles

ODD_PRIMES = [p for p in range(3, 400) if oracles.is_prime(p)]


@pytest.fixture(scope="module")
def table_10k():
    return sieve_mobius(10_000)


def test_sieve_examples():
    t = sieve_mobius(1)
    assert t.values() == [1]
    assert int(t.mertens_prefix[1]) == 1
    assert sieve_mobius(6).values() == [1, -1, -1, 0, -1, 1]
    assert int(sieve_mobius(10).mertens_prefix[10]) == -1


def test_sieve_matches_factorization():
    t = sieve_mobius(2000)
    assert t.values() == [oracles.mu(k) for k in range(1, 2001)]


def test_sieve_rejects_zero():
    with pytest.raises(InvalidArgument):
        sieve_mobius(0)


def test_table_is_read_only():
    t = sieve_mobius(10)
    with pytest.raises(ValueError):
        t.mu[3] = 1


def test_prefix_differences(table_10k):
    mu, pre = table_10k.mu, table_10k.mertens_prefix
    assert all(pre[k] - pre[k - 1] == mu[k] for k in range(2, 10_001))


def test_mobius_divisor_sum(table_10k):
    # sum_{d | n} mu(d) = 0 for n > 1, by accumulating mu(d) over multiples.
    acc = [0] * 10_001
    for d in range(1, 10_001):
        v = int(table_10k.mu[d])
        if v:
            for n in range(d, 10_001, d):
                acc[n] += v
    assert acc[1] == 1
    assert not any(acc[2:])


def test_mertens_examples():
    t = sieve_mobius(100)
    assert mertens(0.5, t) == 0
    assert mertens(4, t) == -1
    assert mertens(100, t) == 1 == oracles.mertens(100)
    assert mertens(4.9, t) == -1


def test_mertens_table_too_small():
    with pytest.raises(TableTooSmall):
        mertens(11, sieve_mobius(10))


def test_from_values_and_mutation():
    t = sieve_mobius(10)
    bad = t.with_value(4, 1)
    assert bad.values()[3] == 1
    assert int(bad.mertens_prefix[10]) == int(t.mertens_prefix[10]) + 1
    assert MobiusTable.from_values([1, -1]).limit == 2


def test_legendre_examples():
    assert legendre_symbol(1, 7) == 1
    assert legendre_symbol(2, 7) == 1
    assert legendre_symbol(3, 7) == -1
    assert legendre_symbol(14, 7) == 0


@pytest.mark.parametrize("p", [2, 1, 0, -7, 9])
def test_legendre_rejects_bad_modulus(p):
    with pytest.raises(InvalidArgument):
        legendre_symbol(1, p)


@given(st.integers(-10**6, 10**6), st.sampled_from(ODD_PRIMES))
def test_legendre_matches_square_set(a, p):
    squares = {x * x % p for x in range(1, p)}
    expected = 0 if a % p == 0 else (1 if a % p in squares else -1)
    assert legendre_symbol(a, p) == expected == legendre_symbol(a % p, p)


def test_two_is_residue_exactly_for_pm1_mod8():
    for p in ODD_PRIMES:
        assert (legendre_symbol(2, p) == 1) == (p % 8 in (1, 7))
        assert legendre_symbol(2, p) == (-1) ** ((p * p - 1) // 8)


def test_sqrt_examples():
    assert sqrt_mod_prime(4, 7) == 2
    assert sqrt_mod_prime(2, 7) == 3
    assert sqrt_mod_prime(39, 7) == 2
    assert sqrt_mod_prime(0, 7) == 0
    with pytest.raises(NoSquareRoot):
        sqrt_mod_prime(3, 7)


@pytest.mark.parametrize("p", ODD_PRIMES)
def test_sqrt_is_smaller_root(p):
    for a in range(1, p):
        if legendre_symbol(a, p) == 1:
            r = sqrt_mod_prime(a, p)
            assert r == oracles.squares_mod(a, p)[0]
            assert r <= (p - 1) // 2


def test_lift_examples():
    assert lift_sqrt_to_prime_square(1, 1, 7) == 1
    assert lift_sqrt_to_prime_square(2, 39, 7) == 23
    assert lift_sqrt_to_prime_square(3, 2, 7) == 10


def test_lift_errors():
    with pytest.raises(CannotLift):
        lift_sqrt_to_prime_square(0, 49, 7)
    with pytest.raises(InvalidArgument):
        lift_sqrt_to_prime_square(3, 4, 7)


@given(st.sampled_from(ODD_PRIMES[:40]), st.integers(1, 10**9))
def test_lift_property(p, a):
    if legendre_symbol(a, p) != 1:
        return
    r = sqrt_mod_prime(a, p)
    s = lift_sqrt_to_prime_square(r, a, p)
    assert (r * r - a) % p == 0
    assert (s * s - a) % (p * p) == 0
    assert s % p == r and 0 < s < p * p


def test_crt_examples():
    assert crt_combine([ResidueClass(0, 7)]) == ResidueClass(0, 7)
    assert crt_combine([ResidueClass(2, 3), ResidueClass(3, 5)]) == ResidueClass(8, 15)
    assert crt_combine([ResidueClass(5, 7), ResidueClass(1, 3)]) == ResidueClass(19, 21)


def test_crt_errors():
    with pytest.raises(NonCoprimeModuli):
        crt_combine([ResidueClass(1, 6), ResidueClass(1, 5), ResidueClass(1, 4)])
    with pytest.raises(InvalidArgument):
        ResidueClass(7, 7)
    with pytest.raises(InvalidArgument):
        crt_combine([])


@given(st.lists(st.sampled_from(ODD_PRIMES + [4, 8, 9, 25, 27]), min_size=1, max_size=6, unique=True),
       st.data())
def test_crt_property(moduli, data):
    moduli = [m for i, m in enumerate(moduli) if all(math.gcd(m, k) == 1 for k in moduli[:i])]
    classes = [ResidueClass(data.draw(st.integers(0, m - 1)), m) for m in moduli]
    out = crt_combine(classes)
    assert out.modulus == math.prod(moduli)
    assert all(out.residue % c.modulus == c.residue for c in classes)


def test_big_crt_uses_unbounded_ints():
    ps = [10**18 + 3, 10**18 + 9, 10**18 + 7]
    classes = [ResidueClass(p - 1, p) for p in ps]
    out = crt_combine(classes)
    assert out.residue == math.prod(ps) - 1


def test_prime_search_examples():
    assert primes_pm1_mod8(5, 1) == [7]
    assert primes_pm1_mod8(5, 3) == [7, 17, 23]
    assert primes_pm1_mod8(17, 1) == [23]
    assert primes_pm1_mod8(5 * math.sqrt(2), 2) == [17, 23]


def test_prime_search_against_oracle():
    assert primes_pm1_mod8(100.5, 25) == oracles.primes_pm1_mod8(100.5, 25)


def test_prime_search_errors():
    with pytest.raises(InvalidArgument):
        primes_pm1_mod8(4.9, 1)
    with pytest.raises(ResourceLimit):
        primes_pm1_mod8(5, 1000, max_candidates=100)


def test_prime_search_residues_are_squares_of_two():
    for p in primes_pm1_mod8(5, 60):
        assert legendre_symbol(2, p) == 1


def test_is_prime_examples():
    assert not is_prime(1)
    assert is_prime(7)
    assert not is_prime(2737)
    assert not is_prime(0)
    assert is_prime(2)


def test_is_prime_against_trial_division():
    assert [n for n in range(5000) if is_prime(n)] == [n for n in range(5000) if oracles.is_prime(n)]


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert is_prime(2**89 - 1)  # above the fixed-base range
    assert not is_prime((2**61 - 1) * (2**31 - 1))
    # strong pseudoprime to bases 2..37, caught by base 41
    assert not is_prime(3825123056546413051)
