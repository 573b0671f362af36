import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from quartictorsion.arith import prime_stream
from quartictorsion.ecurve import (
    ShortABCurve,
    WeierstrassCurve,
    count_points_mod_p,
    curve_create,
    curve_from_json,
    curve_to_json,
    division_polynomial,
    group_law,
    halve_point,
    halving_test,
    point_order,
    quadratic_twist,
    scalar_multiple,
    torsion_locus,
    torsion_subgroup_K,
    torsion_subgroup_Q,
)
from quartictorsion.modcurves.catalog import CATALOG, catalog_get, eisenstein_field, gaussian_field
from quartictorsion.modcurves.families import specialize_family
from quartictorsion.numfield import nf_create
from quartictorsion.poly import Poly, poly_from_string as P
from quartictorsion.polyfactor import rational_roots

X1_11 = catalog_get((1, 11)).curve()
CONGRUENT = curve_create([0, 0, 0, -1, 0])


def test_curve_create_examples():
    E = catalog_get((2, 10)).curve()
    assert (E.b2, E.b4, E.b6, E.b8) == (4, -2, 0, -1)
    assert E.discriminant == 80
    assert catalog_get((3, 9)).curve().discriminant == -27
    assert specialize_family("2x8", 0).curve.singular
    assert not E.singular


def test_b_invariant_relation():
    rng = random.Random(3)
    for _ in range(50):
        E = curve_create([rng.randint(-9, 9) for _ in range(5)])
        assert 4 * E.b8 == E.b2 * E.b6 - E.b4**2


def test_group_law_examples():
    P0 = X1_11.point(0, 0)
    assert X1_11.identity + P0 == P0
    assert -P0 == X1_11.point(0, 1)
    assert scalar_multiple(P0, 5).is_identity
    assert (P0 + (-P0)).is_identity
    with pytest.raises(ValueError):
        X1_11.point(1, 5)


def test_point_order_examples():
    assert point_order(X1_11.point(0, 0), 20) == 5
    assert point_order(CONGRUENT.point(0, 0), 20) == 2
    # rank one curve, (3, 5) is non-torsion
    E = curve_create([0, 0, 0, 0, -2])
    assert point_order(E.point(3, 5), 50) is None


def random_curve_with_point(rng):
    while True:
        a1, a3, a2, a4 = (rng.randint(-5, 5) for _ in range(4))
        x0, y0 = Fraction(rng.randint(-6, 6), rng.randint(1, 3)), Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        a6 = y0 * y0 + a1 * x0 * y0 + a3 * y0 - x0**3 - a2 * x0 * x0 - a4 * x0
        E = curve_create([a1, a3, a2, a4, a6])
        if not E.singular:
            return E, E.point(x0, y0)


@settings(max_examples=100)
@given(st.integers(0, 10**6))
def test_associativity(seed):
    rng = random.Random(seed)
    E, P0 = random_curve_with_point(rng)
    Q = scalar_multiple(P0, rng.randint(2, 4))
    R = scalar_multiple(P0, -rng.randint(1, 3)) + (P0 if rng.random() < 0.5 else E.identity)
    assert (P0 + Q) + R == P0 + (Q + R)
    assert (P0 + (-P0)).is_identity
    for S in (P0 + Q, Q + R):
        assert S.is_identity or E.contains(S.x, S.y)


def test_associativity_over_number_field():
    K = gaussian_field()
    i = K.gen
    E = CONGRUENT.base_change(K)
    pts = [E.point(i, 1 - i), E.point(0, 0), E.point(-1, 0), E.point(-i, 1 + i)]
    for P1 in pts:
        for P2 in pts:
            for P3 in pts:
                assert (P1 + P2) + P3 == P1 + (P2 + P3)


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(2, 9))
def test_division_polynomial_multiplication_formula(seed, n):
    # x(nP) = x - psi_{n-1} psi_{n+1} / psi_n^2 with psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    rng = random.Random(seed)
    E, P0 = random_curve_with_point(rng)
    nP = scalar_multiple(P0, n)
    psi2sq = E.two_torsion_cubic()(P0.x)
    f = {k: E._f(k)(P0.x) for k in (n - 1, n, n + 1)}
    num = f[n - 1] * f[n + 1] * (psi2sq if n % 2 else 1)
    den = f[n] ** 2 * (1 if n % 2 else psi2sq)
    if den == 0:
        assert nP.is_identity
    else:
        assert not nP.is_identity and nP.x == P0.x - num / den


def test_twist_examples():
    p = 13
    assert quadratic_twist(ShortABCurve(-11, 32), p) == ShortABCurve(-11 * p, 32 * p * p)
    assert quadratic_twist(ShortABCurve(-11, 32), -7) == ShortABCurve(77, 1568)
    E = ShortABCurve(3, -5)
    assert quadratic_twist(E, 1) == E


@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(-100, 100).filter(bool))
def test_twist_invariants(a, b, d):
    assume(b != 0 and a * a != 4 * b)
    E = ShortABCurve(a, b)
    Ed = quadratic_twist(E, d)
    W, Wd = E.to_weierstrass(), Ed.to_weierstrass()
    assert Wd.j_invariant == W.j_invariant
    assert Wd.discriminant == d**6 * W.discriminant


def test_division_polynomial_examples():
    E = catalog_get((2, 10)).curve()
    assert division_polynomial(E, 2) == P("4x^3+4x^2-4x")
    assert division_polynomial(catalog_get((3, 9)).curve(), 3) == P("3x^4+3x")
    assert division_polynomial(X1_11, 25).degree == 312
    assert torsion_locus(E, 2) == P("x^3+x^2-x")
    assert torsion_locus(X1_11, 5).degree == 12


def test_lambda4_x1_2_10():
    E = catalog_get((2, 10)).curve()
    expected = P("x") * P("x^2+1") * P("x^2+x-1") * P("x^4+2x^3-6x^2-2x+1")
    lam = torsion_locus(E, 4)
    assert lam == expected or lam == -expected


def brute_torsion_x(E: WeierstrassCurve, n: int) -> set:
    """x(P) for P != O with nP = O, from a height-bounded point search."""
    found = set()
    for d in range(1, 5):
        for a in range(-300, 301):
            x = Fraction(a, d * d)
            for Q in E.lift_x(x):
                if scalar_multiple(Q, n).is_identity:
                    found.add(x)
    return found


@pytest.mark.parametrize("label", sorted(CATALOG))
def test_division_polynomials_match_group_law(label):
    E = CATALOG[label].curve()
    for n in range(2, 13):
        roots = set(rational_roots(torsion_locus(E, n)))
        # every rational root with a rational point lifts to an n-torsion point
        with_points = {r for r in roots if E.lift_x(r)}
        assert with_points == brute_torsion_x(E, n), (label, n)
        for r in with_points:
            for Q in E.lift_x(r):
                assert scalar_multiple(Q, n).is_identity


def brute_count(coeffs, p):
    a1, a3, a2, a4, a6 = coeffs
    count = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0:
                count += 1
    return count


def test_count_points_examples():
    assert count_points_mod_p(CONGRUENT, 3) == 4
    assert count_points_mod_p(CONGRUENT, 5) == 8
    with pytest.raises(ValueError):
        count_points_mod_p(CONGRUENT, 2)
    with pytest.raises(ValueError):
        count_points_mod_p(X1_11, 11)


@given(st.lists(st.integers(-20, 20), min_size=5, max_size=5), st.sampled_from(prime_stream(60)[1:]))
def test_count_points_matches_enumeration(coeffs, p):
    E = curve_create(coeffs)
    assume(not E.singular and E.discriminant.numerator % p)
    assert count_points_mod_p(E, p) == brute_count(coeffs, p)


TORSION_Q = [
    ([0, -1, -1, 0, 0], (1, 5)),
    ([0, 0, -1, 1, 0], (1, 4)),
    ([0, 0, 0, -1, 0], (2, 2)),
    ([0, 0, 0, 0, 1], (1, 6)),
    ([0, 0, 0, 0, -2], (1, 1)),
    ([-1, -4, -4, 0, 0], (1, 7)),
    ([0, 0, 1, -1, 0], (1, 6)),
    ([1, 0, 0, -1, 0], (1, 2)),
    ([0, 0, 0, -4, 0], (2, 2)),
    ([0, 0, -11, 32, 0], (1, 6)),
    ([0, 0, -7, 16, 0], (1, 4)),
    ([0, 1, 0, 0, 0], (1, 3)),
]


@pytest.mark.parametrize("coeffs,expected", TORSION_Q)
def test_torsion_Q_table(coeffs, expected):
    E = curve_create(coeffs)
    T = torsion_subgroup_Q(E)
    assert T.invariants == expected
    assert T.order == len(T.points)
    g = math.gcd(*[count_points_mod_p(E, p) for p in prime_stream(60)[1:] if E.discriminant.numerator % p][:2])
    assert g % T.order == 0
    for P0 in T.points:
        assert scalar_multiple(P0, T.exponent).is_identity


def test_torsion_Q_structure_strings():
    assert torsion_subgroup_Q(X1_11).structure() == "Z/5"
    assert torsion_subgroup_Q(CONGRUENT).structure() == "Z/2 x Z/2"


def test_torsion_Q_families():
    # 9-torsion and 2x8 torsion from specializations
    E9 = specialize_family("kubert9", 2).curve
    assert torsion_subgroup_Q(E9).invariants == (1, 9)
    E28 = specialize_family("2x8", Fraction(1, 2)).curve
    assert torsion_subgroup_Q(E28).invariants == (2, 8)


def test_torsion_K_examples():
    E48 = catalog_get((4, 8)).curve().base_change(gaussian_field())
    assert torsion_subgroup_K(E48, 16 * 3 * 5).invariants == (2, 4)
    E39 = catalog_get((3, 9)).curve().base_change(eisenstein_field())
    assert torsion_subgroup_K(E39).invariants == (3, 3)
    K = nf_create(P("x^4-2x^2+5"))
    assert torsion_subgroup_K(catalog_get((2, 10)).curve().base_change(K)).invariants == (1, 12)


def test_halving_examples():
    assert halving_test(CONGRUENT, CONGRUENT.identity)
    assert not halving_test(CONGRUENT, CONGRUENT.point(0, 0))
    E = CONGRUENT.base_change(gaussian_field())
    P0 = E.point(0, 0)
    assert halving_test(E, P0)
    Q = halve_point(P0)
    assert Q is not None and scalar_multiple(Q, 2) == P0


def test_halving_requires_full_two_torsion():
    with pytest.raises(ValueError):
        halving_test(X1_11, X1_11.point(0, 0))


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_halving_matches_search(seed):
    rng = random.Random(seed)
    e = sorted(rng.sample(range(-6, 7), 3))
    f = Poly.from_roots(e)
    E = curve_create([0, 0, f.c[2], f.c[1], f.c[0]])
    pts = [E.point(r, 0) for r in e]
    # points of small height
    for x in range(-10, 11):
        pts += E.lift_x(x)
    for P0 in pts:
        verdict = halving_test(E, P0)
        Q = halve_point(P0)
        assert verdict == (Q is not None)
        if Q is not None:
            assert scalar_multiple(Q, 2) == P0
    for P0 in pts[:4]:
        assert halving_test(E, scalar_multiple(P0, 2) if not P0.is_identity else P0)


def test_json_roundtrip():
    K = nf_create(P("x^4-2x^2+5"))
    for E in (X1_11, catalog_get((2, 10)).curve().base_change(K)):
        assert curve_from_json(curve_to_json(E)) == E
