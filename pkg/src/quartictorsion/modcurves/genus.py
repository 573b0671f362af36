"""Genus and cusp counts of X1(m, n) from the congruence subgroup Gamma(m) cap Gamma1(n).

The subgroup is enumerated inside SL2(Z/n); its cosets carry the action of
S = [[0, -1], [1, 0]] and T = [[1, 1], [0, 1]], and Riemann-Hurwitz gives

    g = 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

# the eight (m, n) whose modular curve is elliptic
ELLIPTIC_LABELS = ((1, 11), (1, 14), (1, 15), (2, 10), (2, 12), (3, 9), (4, 8), (6, 6))

Mat = tuple[int, int, int, int]


def _mul(a: Mat, b: Mat, n: int) -> Mat:
    return (
        (a[0] * b[0] + a[1] * b[2]) % n,
        (a[0] * b[1] + a[1] * b[3]) % n,
        (a[2] * b[0] + a[3] * b[2]) % n,
        (a[2] * b[1] + a[3] * b[3]) % n,
    )


@dataclass(frozen=True)
class CurveInvariants:
    m: int
    n: int
    index: int
    elliptic_points_2: int
    elliptic_points_3: int
    cusps: int
    genus: int


@lru_cache(maxsize=None)
def modular_invariants(m: int, n: int) -> CurveInvariants:
    if m < 1 or n < 1 or n % m:
        raise ValueError(f"need m | n, got ({m}, {n})")
    if n == 1:
        return CurveInvariants(m, n, 1, 1, 1, 1, 0)
    N = n
    group = [(a, b, c, d) for a in range(N) for b in range(N) for c in range(N) for d in range(N)
             if (a * d - b * c) % N == 1]
    minus = N - 1
    H = set()
    for b in range(0, N, m):
        for sgn in (1, minus):
            H.add((sgn % N, (sgn * b) % N, 0, sgn % N))
    coset_of: dict[Mat, int] = {}
    reps: list[Mat] = []
    for g in group:
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for h in H:
            coset_of[_mul(h, g, N)] = idx
    S = (0, minus, 1, 0)
    T = (1, 1, 0, 1)
    ST = _mul(S, T, N)
    act = lambda M: [coset_of[_mul(r, M, N)] for r in reps]
    s_act, t_act, st_act = act(S), act(T), act(ST)
    nu2 = sum(1 for i, j in enumerate(s_act) if i == j)
    nu3 = sum(1 for i, j in enumerate(st_act) if i == j)
    seen = [False] * len(reps)
    cusps = 0
    for i in range(len(reps)):
        if not seen[i]:
            cusps += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = t_act[j]
    mu = len(reps)
    g = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(cusps, 2)
    if g.denominator != 1:
        raise ArithmeticError(f"non-integral genus {g} for ({m}, {n})")
    return CurveInvariants(m, n, mu, nu2, nu3, cusps, int(g))


def genus(m: int, n: int) -> int:
    return modular_invariants(m, n).genus


def cusp_count(m: int, n: int) -> int:
    """Number of cusps over the complex numbers."""
    return modular_invariants(m, n).cusps


def genus_class(m: int, n: int) -> str:
    """'genus-zero', 'elliptic' or 'higher'."""
    if m < 1 or n < 1 or n % m:
        raise ValueError(f"need m | n, got ({m}, {n})")
    g = genus(m, n)
    if g == 0:
        return "genus-zero"
    return "elliptic" if g == 1 else "higher"
