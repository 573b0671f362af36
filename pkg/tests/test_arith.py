from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from quartictorsion.arith import (
    class_product,
    euler_phi,
    factor_int,
    is_probable_prime,
    legendre_symbol,
    prime_stream,
    rational_sqrt,
    squarefree_class,
    squarefree_divisors,
    valuation,
)

small_primes = st.sampled_from([p for p in prime_stream(400) if p > 2])
nonzero_int = st.integers(-10**6, 10**6).filter(bool)
nonzero_q = st.builds(Fraction, nonzero_int, st.integers(1, 10**4))


@pytest.mark.parametrize("a,p,expected", [(4, 7, 1), (11, 7, 1), (3, 5, -1), (14, 7, 0)])
def test_legendre_examples(a, p, expected):
    assert legendre_symbol(a, p) == expected


@pytest.mark.parametrize("p", [2, 9, 1, 15])
def test_legendre_rejects_bad_modulus(p):
    with pytest.raises(ValueError):
        legendre_symbol(3, p)


@pytest.mark.parametrize("q,expected", [(32, 2), (-7, -7), (1568, 2), (Fraction(3, 4), 3), (Fraction(-1, 8), -2)])
def test_squarefree_class_examples(q, expected):
    assert squarefree_class(q) == expected


def test_squarefree_class_rejects_zero():
    with pytest.raises(ValueError):
        squarefree_class(0)


@pytest.mark.parametrize("n,expected", [(1, 1), (14, 6), (12, 4)])
def test_phi_examples(n, expected):
    assert euler_phi(n) == expected


@pytest.mark.parametrize("n", [0, -3])
def test_phi_rejects_nonpositive(n):
    with pytest.raises(ValueError):
        euler_phi(n)


def test_prime_stream_examples():
    assert prime_stream(10) == [2, 3, 5, 7]
    assert prime_stream(1) == []
    assert len(prime_stream(500)) == 95


def test_prime_stream_matches_trial_division():
    def trial(n):
        return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))

    assert prime_stream(10**4) == [n for n in range(10**4 + 1) if trial(n)]


@given(st.integers(2, 10**12))
def test_primality_matches_sympy(n):
    assert is_probable_prime(n) == sympy.isprime(n)


def test_primality_large_known():
    assert is_probable_prime(2**61 - 1)
    assert not is_probable_prime((2**31 - 1) * (2**61 - 1))


@given(st.integers(1, 10**5))
def test_phi_matches_sympy(n):
    assert euler_phi(n) == sympy.totient(n)


@given(st.integers(1, 10**9))
def test_factor_int_matches_sympy(n):
    assert factor_int(n) == sympy.factorint(n)


@given(nonzero_int, nonzero_int, small_primes)
def test_legendre_multiplicative(a, b, p):
    if a % p == 0 or b % p == 0:
        return
    assert legendre_symbol(a * b, p) == legendre_symbol(a, p) * legendre_symbol(b, p)


@given(st.integers(-10**4, 10**4), small_primes)
def test_legendre_matches_sympy(a, p):
    expected = 0 if a % p == 0 else sympy.legendre_symbol(a % p, p)
    assert legendre_symbol(a, p) == expected


@given(nonzero_q, nonzero_q)
def test_class_product_is_class_of_product(q, r):
    assert class_product(squarefree_class(q), squarefree_class(r)) == squarefree_class(q * r)


@given(nonzero_q, nonzero_q)
def test_square_invariance(q, s):
    assert squarefree_class(q * s * s) == squarefree_class(q)


@given(nonzero_q)
def test_class_is_squarefree_and_quotient_is_square(q):
    s = squarefree_class(q)
    assert sympy.factorint(abs(s)) == {} or max(sympy.factorint(abs(s)).values()) == 1
    assert rational_sqrt(q / s) is not None


@given(nonzero_int)
def test_squarefree_divisors(n):
    divs = squarefree_divisors(n)
    expected = sorted(d for d in sympy.divisors(abs(n)) if sympy.factorint(d) == {} or max(sympy.factorint(d).values()) == 1)
    assert sorted(divs) == expected


@given(nonzero_q, small_primes)
def test_valuation(q, p):
    v = valuation(q, p)
    r = q / Fraction(p) ** v
    assert r.numerator % p and r.denominator % p
