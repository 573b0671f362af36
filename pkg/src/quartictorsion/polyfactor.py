"""Factorization of rational polynomials, restricted to low-degree factors.

Modular polynomials are plain ``list[int]`` (lowest degree first, reduced
into ``[0, p)``, trailing zeros trimmed). The rational entry points accept
:class:`~quartictorsion.poly.Poly`.

The central routine is :func:`extract_factors_bounded`: factor modulo one
good prime, Hensel-lift only the modular factors of degree at most ``D``,
then test subsets of those with degree sum at most ``D`` for exact
divisibility over Z. Nothing of higher degree is ever recombined.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .arith import as_fraction, prime_stream
from .poly import Poly, content, primitive, squarefree_decomposition

ModPoly = list


# ---------------------------------------------------------------------------
# arithmetic in F_p[x] (and Z/p^k[x] where noted)


def _trim(a: ModPoly) -> ModPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


def mod_reduce(f: Sequence[int], m: int) -> ModPoly:
    return _trim([v % m for v in f])


def _add(a: ModPoly, b: ModPoly, m: int) -> ModPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % m
    return _trim(out)


def _sub(a: ModPoly, b: ModPoly, m: int) -> ModPoly:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, v in enumerate(b):
        out[i] = (out[i] - v) % m
    return _trim(out)


def _mul(a: ModPoly, b: ModPoly, m: int) -> ModPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return _trim([v % m for v in out])


def _scale(a: ModPoly, c: int, m: int) -> ModPoly:
    return _trim([v * c % m for v in a])


def _divmod(a: ModPoly, b: ModPoly, m: int) -> tuple[ModPoly, ModPoly]:
    """Division by b whose leading coefficient is a unit mod m."""
    if not b:
        raise ZeroDivisionError
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, m)
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1 - db, -1, -1):
        c = r[i + db] * inv % m
        if c:
            q[i] = c
            for j, v in enumerate(b):
                r[i + j] = (r[i + j] - c * v) % m
    return _trim(q), _trim(r[:db])


def _rem(a: ModPoly, b: ModPoly, m: int) -> ModPoly:
    return _divmod(a, b, m)[1]


def _monic(a: ModPoly, m: int) -> ModPoly:
    return _scale(a, pow(a[-1], -1, m), m) if a else a


def _gcd(a: ModPoly, b: ModPoly, p: int) -> ModPoly:
    while b:
        a, b = b, _rem(a, b, p)
    return _monic(a, p)


def _powmod(base: ModPoly, e: int, f: ModPoly, m: int) -> ModPoly:
    result: ModPoly = [1]
    base = _rem(base, f, m)
    while e:
        if e & 1:
            result = _rem(_mul(result, base, m), f, m)
        e >>= 1
        if e:
            base = _rem(_mul(base, base, m), f, m)
    return result


def _deriv(a: ModPoly, p: int) -> ModPoly:
    return _trim([i * v % p for i, v in enumerate(a)][1:])


def is_squarefree_mod(f: ModPoly, p: int) -> bool:
    d = _deriv(f, p)
    return bool(d) and len(_gcd(f, d, p)) == 1


def is_irreducible_mod(f: ModPoly, p: int) -> bool:
    """Rabin-style check: gcd(f, x^(p^d) - x) = 1 for every d < deg f, and
    f divides x^(p^n) - x."""
    n = len(f) - 1
    if n < 1:
        return False
    f = _monic(f, p)
    h = [0, 1]
    for d in range(1, n + 1):
        h = _powmod(h, p, f, p)
        diff = _rem(_sub(h, [0, 1], p), f, p)
        if d < n and len(_gcd(f, diff, p)) > 1:
            return False
    return not diff


# ---------------------------------------------------------------------------
# factorization over F_p


def _squarefree_mod(f: ModPoly, p: int) -> list[tuple[ModPoly, int]]:
    """Squarefree decomposition of a monic f over F_p (handles p-th powers)."""
    out: list[tuple[ModPoly, int]] = []
    if len(f) <= 1:
        return out
    d = _deriv(f, p)
    if d:
        c = _gcd(f, d, p)
        w = _divmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = _gcd(w, c, p)
            z = _divmod(w, y, p)[0]
            if len(z) > 1:
                out.append((_monic(z, p), i))
            i += 1
            w = y
            c = _divmod(c, y, p)[0]
        if len(c) > 1:
            root = [c[k] for k in range(0, len(c), p)]  # c is a p-th power
            out += [(g, e * p) for g, e in _squarefree_mod(root, p)]
    else:
        root = [f[k] for k in range(0, len(f), p)]
        out += [(g, e * p) for g, e in _squarefree_mod(root, p)]
    return out


def distinct_degree(f: ModPoly, p: int, max_degree: int | None = None) -> tuple[list[tuple[int, ModPoly]], ModPoly]:
    """Distinct-degree factorization of a monic squarefree f.

    Returns ``(parts, rest)`` where each part is ``(d, product of all
    degree-d irreducible factors)``. With ``max_degree`` the search stops
    early and ``rest`` holds the product of all factors of larger degree.
    """
    parts = []
    h: ModPoly = [0, 1]
    rest = list(f)
    d = 0
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        if max_degree is not None and d > max_degree:
            return parts, rest
        h = _powmod(h, p, rest, p)
        g = _gcd(rest, _sub(h, [0, 1], p), p)
        if len(g) > 1:
            parts.append((d, g))
            rest = _divmod(rest, g, p)[0]
            h = _rem(h, rest, p)
    if len(rest) > 1:
        deg = len(rest) - 1
        if max_degree is None or deg <= max_degree:
            parts.append((deg, rest))
            rest = [1]
    return parts, rest


def equal_degree(g: ModPoly, d: int, p: int, rng: random.Random) -> list[ModPoly]:
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    n = len(g) - 1
    if n == d:
        return [g]
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            t = list(a)
            power = a
            for _ in range(d - 1):
                power = _rem(_mul(power, power, p), g, p)
                t = _add(t, power, p)
            b = t
        else:
            b = _sub(_powmod(a, (p**d - 1) // 2, g, p), [1], p)
        u = _gcd(g, b, p)
        if 1 < len(u) < len(g):
            v = _divmod(g, u, p)[0]
            return equal_degree(u, d, p, rng) + equal_degree(_monic(v, p), d, p, rng)


@dataclass(frozen=True)
class FactorPattern:
    """Multiset of (degree, multiplicity) of the irreducible factors mod p."""

    parts: tuple[tuple[int, int], ...]
    prime: int | None = None

    @property
    def degrees(self) -> list[int]:
        return sorted(d for d, _ in self.parts)

    def total_degree(self) -> int:
        return sum(d * e for d, e in self.parts)


def _to_mod(f: Poly, p: int) -> ModPoly:
    out = []
    for v in f.c:
        v = as_fraction(v)
        if v.denominator % p == 0:
            raise ValueError(f"coefficient {v} is not {p}-integral")
        out.append(v.numerator * pow(v.denominator, -1, p) % p)
    return _trim(out)


def factor_mod_p(f: Poly, p: int, seed: int = 0) -> tuple[FactorPattern, list[tuple[ModPoly, int]]]:
    """Complete factorization of f over F_p into monic irreducibles.

    Raises ``ValueError`` when p divides the leading coefficient.
    """
    fp = _to_mod(f, p)
    if len(fp) - 1 != f.degree:
        raise ValueError(f"{p} divides the leading coefficient")
    fp = _monic(fp, p)
    rng = random.Random(seed)
    factors: list[tuple[ModPoly, int]] = []
    for s, e in _squarefree_mod(fp, p):
        parts, _ = distinct_degree(s, p)
        for d, g in parts:
            for h in equal_degree(g, d, p, rng):
                factors.append((h, e))
    factors.sort(key=lambda t: (len(t[0]), t[0]))
    counts: dict[tuple[int, int], int] = {}
    for h, e in factors:
        counts[(len(h) - 1, e)] = counts.get((len(h) - 1, e), 0) + 1
    parts = tuple(sorted((d, e) for (d, e), k in counts.items() for _ in range(k)))
    return FactorPattern(parts, p), factors


# ---------------------------------------------------------------------------
# Hensel lifting


def _hensel_step(f, g, h, s, t, m):
    """One quadratic Hensel step (Gathen-Gerhard 15.10) from m to m^2."""
    M = m * m
    e = _sub(mod_reduce(f, M), _mul(g, h, M), M)
    q, r = _divmod(_mul(s, e, M), h, M)
    g2 = _add(g, _add(_mul(t, e, M), _mul(q, g, M), M), M)
    h2 = _add(h, r, M)
    b = _sub(_add(_mul(s, g2, M), _mul(t, h2, M), M), [1], M)
    c, d = _divmod(_mul(s, b, M), h2, M)
    s2 = _sub(s, d, M)
    t2 = _sub(_sub(t, _mul(t, b, M), M), _mul(c, g2, M), M)
    return g2, h2, s2, t2, M


def _xgcd_mod(a: ModPoly, b: ModPoly, p: int) -> tuple[ModPoly, ModPoly]:
    """s, t with s*a + t*b = 1 over F_p (a, b coprime)."""
    r0, r1 = a, b
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1, p), p)
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    if len(r0) != 1:
        raise ValueError("factors are not coprime mod p")
    inv = pow(r0[0], -1, p)
    return _scale(s0, inv, p), _scale(t0, inv, p)


def lift_factor(f: Sequence[int], g: ModPoly, p: int, k: int) -> ModPoly:
    """Unique monic lift mod p^k of a monic factor g of f (mod p).

    f is an integer polynomial with p not dividing its leading coefficient;
    g must be coprime to f/g modulo p.
    """
    target = p**k
    lc_inv = pow(f[-1], -1, p)
    f1 = _scale(mod_reduce(f, p), lc_inv, p)
    h, r = _divmod(f1, g, p)
    if r:
        raise ValueError("g does not divide f mod p")
    s, t = _xgcd_mod(g, h, p)
    m = p
    while m < target:
        M = m * m
        fm = _scale(mod_reduce(f, M), pow(f[-1], -1, M), M)
        g, h, s, t, m = _hensel_step(fm, g, h, s, t, m)
    return mod_reduce(g, target)


def hensel_lift(f: Poly, p: int, factors: Sequence[ModPoly], k: int) -> list[ModPoly]:
    """Lift a coprime monic factorization of f mod p to one mod p^k."""
    fi = primitive(f).c
    if k <= 1:
        return [list(g) for g in factors]
    for a, b in combinations(factors, 2):
        if len(_gcd(list(a), list(b), p)) > 1:
            raise ValueError("input factors are not coprime mod p")
    return [lift_factor(fi, list(g), p, k) for g in factors]


# ---------------------------------------------------------------------------
# bounded extraction over Q


@dataclass
class BoundedFactorization:
    """``f = unit * prod(g**e for g, e in factors) * cofactor``.

    Every listed factor is irreducible over Q of degree at most ``bound``;
    the cofactor provably has no rational factor of degree at most ``bound``.
    """

    factors: list[tuple[Poly, int]]
    cofactor: Poly
    unit: Fraction
    bound: int
    primes: list[int] = field(default_factory=list)

    def factor_set(self) -> set[Poly]:
        return {g for g, _ in self.factors}

    def degrees(self) -> list[int]:
        return sorted(g.degree for g, e in self.factors for _ in range(e))

    def product(self) -> Poly:
        out = Poly((self.unit,)) * self.cofactor
        for g, e in self.factors:
            out = out * g**e
        return out


def good_primes(f: Poly, count: int, start: int = 3, skip: Iterable[int] = (), max_prime: int = 2000) -> list[int]:
    """Smallest odd primes p >= start with f mod p of full degree and squarefree.

    May return fewer than ``count`` primes (none at all when f is not
    squarefree over Q).
    """
    fi = primitive(f).c
    skip = set(skip)
    out = []
    for p in prime_stream(max_prime):
        if p < start or p in skip or fi[-1] % p == 0:
            continue
        if is_squarefree_mod(mod_reduce(fi, p), p):
            out.append(p)
            if len(out) == count:
                break
    return out


def _small_modular_factors(fi: list[int], p: int, D: int) -> list[ModPoly]:
    fp = _monic(mod_reduce(fi, p), p)
    parts, _ = distinct_degree(fp, p, max_degree=D)
    rng = random.Random(p)
    smalls = []
    for d, g in parts:
        smalls += equal_degree(g, d, p, rng)
    return smalls


def _symmetric(v: int, m: int) -> int:
    v %= m
    return v - m if v > m // 2 else v


def _int_divides(f: list[int], g: list[int]) -> list[int] | None:
    """Exact quotient f/g over Z, or None."""
    r = list(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return None
    q = [0] * (len(r) - dg)
    lg = g[-1]
    for i in range(len(r) - 1 - dg, -1, -1):
        c, rem = divmod(r[i + dg], lg)
        if rem:
            return None
        q[i] = c
        if c:
            for j, v in enumerate(g):
                r[i + j] -= c * v
    if any(r[:dg]):
        return None
    return q


def _extract_squarefree(fi: list[int], D: int, trial_primes: int) -> tuple[list[Poly], list[int], int]:
    """Bounded extraction for a primitive squarefree integer polynomial."""
    n = len(fi) - 1
    primes = good_primes(Poly(fi), trial_primes)
    if not primes:
        raise ArithmeticError("no good prime found")
    best = None
    for p in primes:
        smalls = _small_modular_factors(fi, p, D)
        if best is None or len(smalls) < len(best[1]):
            best = (p, smalls)
        if not smalls:
            break
    p, smalls = best
    if not smalls:
        return [], fi, p
    norm2 = math.isqrt(sum(v * v for v in fi)) + 1
    bound = math.comb(D, D // 2) * norm2
    k = 1
    while p**k <= 2 * bound:
        k += 1
    mod = p**k
    lifted = [lift_factor(fi, g, p, k) for g in smalls]
    found: list[Poly] = []
    cur = list(fi)
    remaining = list(range(len(lifted)))
    size = 1
    while size <= len(remaining):
        hit = False
        for combo in combinations(remaining, size):
            if sum(len(lifted[i]) - 1 for i in combo) > D:
                continue
            prod = [cur[-1] % mod]
            for i in combo:
                prod = _mul(prod, lifted[i], mod)
            cand = [_symmetric(v, mod) for v in prod]
            g = primitive(Poly(cand)).c
            if cur[0] and g[0] and cur[0] % g[0]:
                continue
            q = _int_divides(cur, list(g))
            if q is None:
                continue
            found.append(Poly(g))
            cur = q
            remaining = [i for i in remaining if i not in combo]
            hit = True
            break
        if not hit:
            size += 1
    return found, cur, p


def extract_factors_bounded(f: Poly, D: int, trial_primes: int = 3) -> BoundedFactorization:
    """All irreducible rational factors of f of degree <= D, plus the cofactor."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    unit = content(f) if as_fraction(f.lc) > 0 else -content(f)
    fi = primitive(f)
    if fi.degree < 1 or D < 1:
        return BoundedFactorization([], fi, unit, D)
    if fi.c[0] == 0:
        # pull out powers of x directly; keeps the modular search smaller
        e = next(i for i, v in enumerate(fi.c) if v)
        rest = extract_factors_bounded(Poly(fi.c[e:]), D, trial_primes)
        rest.factors.insert(0, (Poly((0, 1)), e))
        rest.unit *= unit
        return rest
    if good_primes(fi, 1, max_prime=200):
        pieces = [(fi, 1)]
    else:
        pieces = squarefree_decomposition(fi)
    factors: list[tuple[Poly, int]] = []
    cofactor = Poly((1,))
    primes = []
    for s, e in pieces:
        found, cof, p = _extract_squarefree(list(s.c), D, trial_primes)
        primes.append(p)
        factors += [(g, e) for g in found]
        cofactor = cofactor * Poly(cof) ** e
    factors.sort(key=lambda t: (t[0].degree, t[0].c))
    out = BoundedFactorization(factors, cofactor, Fraction(1), D, primes)
    unit *= Fraction(fi.lc) / Fraction(out.product().lc)
    out.unit = unit
    return out


def rational_roots(f: Poly) -> list[Fraction]:
    """Rational roots of f with multiplicity, ascending."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    roots = []
    for g, e in extract_factors_bounded(f, 1).factors:
        r = Fraction(-g.c[0], g.c[1])
        roots += [r] * e
    return sorted(roots)


# ---------------------------------------------------------------------------
# degree patterns


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _realizable(parts: tuple[int, ...], modular: list[int]) -> bool:
    """Can the modular degrees be grouped into bins with sums ``parts``?"""
    bins = list(parts)
    mods = sorted(modular, reverse=True)

    def place(i: int) -> bool:
        if i == len(mods):
            return all(b == 0 for b in bins)
        seen = set()
        for j, b in enumerate(bins):
            if b >= mods[i] and b not in seen:
                seen.add(b)
                bins[j] -= mods[i]
                if place(i + 1):
                    return True
                bins[j] += mods[i]
        return False

    return place(0)


def degree_pattern_bound(f: Poly, primes: Sequence[int]) -> set[tuple[int, ...]]:
    """Degree multisets of rational factorizations compatible with every
    modular factorization pattern (each rational factor is a union of
    modular factors). A pre-filter only: never excludes the true pattern.
    """
    modular = []
    for p in primes:
        pattern, _ = factor_mod_p(f, p)
        # a repeated modular factor still has to land inside rational factors
        modular.append([d for d, e in pattern.parts for _ in range(e)])
    return {lam for lam in _partitions(f.degree) if all(_realizable(lam, m) for m in modular)}
