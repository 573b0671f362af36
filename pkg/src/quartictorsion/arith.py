"""Integer and rational primitives shared by every other module.

Python ints are arbitrary precision and :class:`fractions.Fraction` keeps
numerator/denominator in lowest terms with a positive denominator, so those
two types are the BigInt/BigRational layer directly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

Rational = Union[int, Fraction]

TRIAL_DIVISION_BOUND = 10**6

# Deterministic Miller-Rabin for n < 3.3e24 with these witnesses.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def as_fraction(q: Rational | str) -> Fraction:
    if isinstance(q, Fraction):
        return q
    return Fraction(q)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed witness set.

    Deterministic below 3.3e24; beyond that the answer is probabilistic
    with the same fixed witnesses.
    """
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_stream(limit: int) -> list[int]:
    """All primes ``<= limit`` in ascending order (sieve of Eratosthenes)."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, by Euler's criterion."""
    if p < 3 or p % 2 == 0 or not is_probable_prime(p):
        raise ValueError(f"legendre_symbol needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def factor_int(n: int, bound: int = TRIAL_DIVISION_BOUND) -> dict[int, int]:
    """Factor ``|n|`` by trial division up to ``bound``.

    A leftover cofactor above the bound is accepted if it is prime or a
    perfect square of a prime; anything else raises, since the integers met
    here have small prime support.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n and p <= bound:
        for q in (p, p + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        if p * p > n or is_probable_prime(n):
            out[n] = out.get(n, 0) + 1
        else:
            r = math.isqrt(n)
            if r * r == n and is_probable_prime(r):
                out[r] = out.get(r, 0) + 2
            else:
                raise ArithmeticError(f"cofactor {n} beyond trial division bound")
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factor_int(n))


def squarefree_part(n: int) -> int:
    """Signed squarefree integer s with n/s a perfect square."""
    if n == 0:
        raise ValueError("squarefree part of 0")
    s = -1 if n < 0 else 1
    for p, e in factor_int(n).items():
        if e % 2:
            s *= p
    return s


def squarefree_class(q: Rational) -> int:
    """Squarefree integer representing q in Q*/(Q*)^2."""
    q = as_fraction(q)
    if q == 0:
        raise ValueError("0 has no square class")
    return squarefree_part(q.numerator * q.denominator)


def class_product(*classes: int) -> int:
    """Product of square classes, reduced to the squarefree representative."""
    return squarefree_part(reduce(lambda u, v: u * v, classes, 1))


def is_square_int(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_rational_square(q: Rational) -> bool:
    q = as_fraction(q)
    return q >= 0 and is_square_int(q.numerator) and is_square_int(q.denominator)


def rational_sqrt(q: Rational) -> Fraction | None:
    q = as_fraction(q)
    if not is_rational_square(q):
        return None
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


def euler_phi(n: int) -> int:
    if n <= 0:
        raise ValueError("euler_phi needs n >= 1")
    result = n
    for p in factor_int(n):
        result = result // p * (p - 1)
    return result


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor_int(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def squarefree_divisors(n: int) -> list[int]:
    """Positive squarefree divisors of n, ascending."""
    divs = [1]
    for p in factor_int(n):
        divs += [d * p for d in divs]
    return sorted(divs)


def valuation(n: Rational, p: int) -> int:
    """p-adic valuation; raises for 0."""
    n = as_fraction(n)
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    num, den = n.numerator, n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def lcm_all(values: Iterable[int]) -> int:
    return reduce(lambda u, v: u * v // math.gcd(u, v), values, 1)


def fraction_str(q: Rational) -> str:
    """Exact ``num/den`` string (integers stay bare)."""
    q = as_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
