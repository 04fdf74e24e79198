import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from grh_expanders.arith import (NonResidue, divisors, euler_phi, factorize, integrate_simpson, is_prime, kronecker,
                                 li, primes_up_to, sqrt_mod)

@given(st.integers(min_value=-10, max_value=10**12))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == (n > 1 and sympy.isprime(n))

def test_is_prime_large_known():
    assert is_prime(2**127 - 1)
    assert not is_prime(2**127 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7

def test_primes_up_to():
    assert primes_up_to(1) == []
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(10**5) == list(sympy.primerange(2, 10**5 + 1))

@given(st.integers(min_value=2, max_value=10**15))
@settings(max_examples=60)
def test_factorize_recovers_n(n):
    fac = factorize(n)
    assert fac.value() == n
    assert all(is_prime(p) for p in fac.primes())
    assert dict(fac.factors) == sympy.factorint(n)

def test_factorize_sign_and_semiprime():
    fac = factorize(-12)
    assert fac.sign == -1 and fac.factors == ((2, 2), (3, 1))
    p, q = 1000003, 998244353
    assert factorize(p * q).primes() == [p, q]
    assert str(factorize(-12)) == "-2^2 * 3"

@given(st.integers(min_value=-500, max_value=500), st.integers(min_value=1, max_value=999).map(lambda k: 2 * k + 1))
def test_kronecker_is_jacobi_for_odd_n(D, n):
    assert kronecker(D, n) == sympy.jacobi_symbol(D, n)

def test_kronecker_at_two():
    # (D|2) is 0 for even D, +1 for D = +-1 mod 8, -1 for D = +-3 mod 8
    assert [kronecker(D, 2) for D in (-4, -7, -3, 1, 5)] == [0, 1, -1, 1, -1]

@given(st.sampled_from([3, 5, 7, 13, 17, 97, 1009, 65537, 998244353]), st.integers(min_value=0, max_value=10**9))
def test_sqrt_mod(p, a):
    a %= p
    if a and kronecker(a, p) == -1:
        with pytest.raises(NonResidue):
            sqrt_mod(a, p)
        return
    r1, r2 = sqrt_mod(a, p)
    assert r1 <= r2
    assert r1 * r1 % p == a and r2 * r2 % p == a

def test_li_against_mpmath():
    for x in (10, 100, 1000, 10**4):
        assert abs(li(x) - float(mpmath.li(x, offset=True))) < 1e-6
    with pytest.raises(ValueError):
        li(1.5)

def test_simpson_polynomial_exact():
    assert abs(integrate_simpson(lambda t: t**3 - t, 0.0, 2.0) - 2.0) < 1e-12

def test_phi_and_divisors():
    assert euler_phi(1009) == 1008
    assert euler_phi(100) == 40
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert all(euler_phi(n) == sympy.totient(n) for n in range(2, 300))
    assert sum(euler_phi(d) for d in divisors(360)) == 360
