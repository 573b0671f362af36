"""Acceptance criteria 1-11; each test prints one PASS/FAIL line."""

import random
import time

import pytest

from quartictorsion.arith import legendre_symbol, prime_stream
from quartictorsion.descent import alpha_image, isogenous_curve, rank_upper_bound, selmer_group, solvable_Qp
from quartictorsion.ecurve import ShortABCurve, quadratic_twist, torsion_locus, torsion_subgroup_K
from quartictorsion.modcurves import (
    CATALOG,
    build_exceptional_curve_2x10,
    catalog_get,
    cm_prime_bound,
    eisenstein_field,
    gaussian_field,
    no_exceptional_evidence,
    search_exceptional_primes,
)
from quartictorsion.modcurves.evidence import cyclotomic12, gaussian_sqrt2, octic_torsion_field, sqrt_2i_plus_1
from quartictorsion.poly import poly_from_string as P
from quartictorsion.polyfactor import extract_factors_bounded

X14 = ShortABCurve(-11, 32)
X15 = ShortABCurve(-7, 16)


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def z14_primes(limit):
    return [p for p in prime_stream(limit) if p % 8 == 3 and p != 7 and legendre_symbol(p, 7) == 1]


def z15_primes(limit):
    return [p for p in prime_stream(limit) if p % 8 == 7 and p % 3 == 2 and p != 5 and legendre_symbol(p, 5) == -1]


def test_criterion_01_z14_twists(report):
    t0 = time.perf_counter()
    primes = z14_primes(500)
    bad = []
    for p in primes:
        E = quadratic_twist(X14, p)
        if selmer_group(E) != {1, 2} or selmer_group(isogenous_curve(E)) != {1, -7}:
            bad.append((p, "selmer"))
        for d in (p, -7 * p):
            if rank_upper_bound(quadratic_twist(X14, d)).bound != 0:
                bad.append((d, "bound"))
    secs = time.perf_counter() - t0
    ok = primes[:4] == [11, 43, 67, 107] and not bad and secs < 10
    report(1, ok, f"{len(primes)} primes <= 500, failures {bad}, {secs:.1f}s")


def test_criterion_02_z15_twists(report):
    primes = z15_primes(500)
    bad = []
    for p in primes:
        for d in (p, -15 * p):
            E = quadratic_twist(X15, d)
            if selmer_group(E) != {1} or selmer_group(isogenous_curve(E)) != {1, -15, p, -15 * p}:
                bad.append((d, "selmer"))
            if rank_upper_bound(E).bound != 0:
                bad.append((d, "bound"))
    ok = primes[:3] == [23, 47, 167] and not bad
    report(2, ok, f"primes {primes}, failures {bad}")


def test_criterion_03_search(report):
    r14 = search_exceptional_primes(14, 120)
    r15 = search_exceptional_primes(15, 200)
    certified = all(c["verdict"] == "certified" for r in (r14, r15) for e in r.entries for c in e.certificates)
    ok = r14.primes == [11, 43, 67, 107] and r15.primes == [23, 47, 167] and certified
    ok = ok and not r14.discrepancies and not r15.discrepancies
    report(3, ok, f"Z/14: {r14.primes}, Z/15: {r15.primes}, all certified: {certified}")


def test_criterion_04_lambda4(report):
    lam = torsion_locus(catalog_get((2, 10)).curve(), 4)
    expected = P("x") * P("x^2+1") * P("x^2+x-1") * P("x^4+2x^3-6x^2-2x+1")
    bf = extract_factors_bounded(lam, 4)
    ok = lam.monic() == expected and {g for g, _ in bf.factors} == {
        P("x"), P("x^2+1"), P("x^2+x-1"), P("x^4+2x^3-6x^2-2x+1")
    } and bf.cofactor.degree == 0
    report(4, ok, f"lambda4 = {lam.to_str()}")


def test_criterion_05_x1_11(report):
    t0 = time.perf_counter()
    rep = no_exceptional_evidence((1, 11))
    psi5 = rep.check("psi5 factors (D=5)").observed
    lam = rep.check("lambda25 factors (D=4)").observed
    secs = time.perf_counter() - t0
    ok = (
        rep.ok
        and psi5["factors"] == ["x", "x - 1"]
        and psi5["cofactor_degree"] == 10
        and psi5["cofactor_irreducible"]
        and lam["degree"] == 312
        and lam["factors"] == ["x", "x - 1"]
        and secs < 120
    )
    report(5, ok, f"psi5 {psi5['factors']} + deg {psi5['cofactor_degree']}, lambda25 deg {lam['degree']} {lam['factors']}, {secs:.1f}s")


def test_criterion_06_torsion_table(report):
    QI, QE = gaussian_field(), eisenstein_field()
    cases = [
        ("X1(3,9)/Q(sqrt-3)", (3, 9), QE, None, (3, 3)),
        ("X1(6,6)/Q(sqrt-3)", (6, 6), QE, None, (2, 6)),
        ("X1(4,8)/Q(i)", (4, 8), QI, 16 * 3 * 5, (2, 4)),
        ("X1(4,8)/Q(i,sqrt2)", (4, 8), gaussian_sqrt2().field, None, (4, 4)),
        ("X1(2,10)/Q[x]/(x^4-2x^2+5)", (2, 10), sqrt_2i_plus_1().field, None, (1, 12)),
        ("X1(2,12)/Q(zeta12)", (2, 12), cyclotomic12(), None, (2, 8)),
        ("X1(2,12)/Q[x]/(x^4+4x^3-6x^2+4x+1)", (2, 12), octic_torsion_field(), None, (1, 8)),
    ]
    results = {}
    for name, label, K, bound, expected in cases:
        T = torsion_subgroup_K(catalog_get(label).curve().base_change(K), bound)
        results[name] = (T.invariants, expected)
    ok = all(obs == exp for obs, exp in results.values()) and sqrt_2i_plus_1().field.poly == P("x^4-2x^2+5")
    report(6, ok, ", ".join(f"{k} -> {v[0]}" for k, v in results.items()))


def test_criterion_07_exceptional_curve(report):
    Z = build_exceptional_curve_2x10()
    T = torsion_subgroup_K(Z)
    ok = not Z.singular and Z.j_invariant == 1728 and T.invariants == (2, 10)
    report(7, ok, f"j = {Z.j_invariant}, torsion {T.structure()}")


def test_criterion_08_cm_bounds(report):
    a, b = cm_prime_bound(6, 3), cm_prime_bound(4, 4)
    report(8, a == 7 and b == 5, f"cm_prime_bound(6,3) = {a}, cm_prime_bound(4,4) = {b}")


def test_criterion_09_property_suite(report):
    from test_descent import ORACLE_DEPTH, oracle, random_space
    from test_ecurve import brute_torsion_x
    from quartictorsion.polyfactor import rational_roots
    from quartictorsion.ecurve import scalar_multiple

    failures = []
    conclusive = {}
    for p in sorted(ORACLE_DEPTH):
        rng = random.Random(1000 + p)
        conclusive[p] = 0
        for _ in range(200):
            space = random_space(rng, p)
            expected = oracle(space, p)
            if expected is None:
                continue
            conclusive[p] += 1
            if bool(solvable_Qp(space, p)) != expected:
                failures.append(("local", p, space))
    bases = [r.short() for r in CATALOG.values() if r.short_model is not None]
    twists = [quadratic_twist(E, d) for E in bases for d in (1, -1, 2, -7, 11, -15, 23)]
    for E in twists:
        for F in (E, isogenous_curve(E)):
            S = selmer_group(F)
            if not S.is_subgroup():
                failures.append(("subgroup", F))
            if not alpha_image(F, 2000).issubset(S):
                failures.append(("alpha", F))
    for label, rec in CATALOG.items():
        E = rec.curve()
        for n in range(2, 13):
            roots = {r for r in rational_roots(torsion_locus(E, n)) if E.lift_x(r)}
            if roots != brute_torsion_x(E, n):
                failures.append(("divpoly", label, n))
            for r in roots:
                if not all(scalar_multiple(Q, n).is_identity for Q in E.lift_x(r)):
                    failures.append(("group law", label, n))
    ok = not failures and all(c >= 150 for c in conclusive.values())
    report(9, ok, f"conclusive oracle cases {conclusive}, {len(twists)} twists, failures {failures[:5]}")


def test_criterion_10_families(report):
    from test_modcurves import test_kubert9_order_nine_random, test_two_eight_square_criterion, test_three_six_square_criterion

    results = {}
    for name, fn in (
        ("2x8 square criterion", test_two_eight_square_criterion),
        ("3x6 square criterion", test_three_six_square_criterion),
        ("kubert9", test_kubert9_order_nine_random),
    ):
        try:
            fn()
            results[name] = True
        except AssertionError:
            results[name] = False
    report(10, all(results.values()), f"{results}")


def test_criterion_11_known_ranks(report):
    curves = {
        "X1(14)": X14,
        "X1(14)^(-7)": quadratic_twist(X14, -7),
        "X1(15)": X15,
        "X1(15)^(-15)": quadratic_twist(X15, -15),
    }
    bounds = {name: rank_upper_bound(E).bound for name, E in curves.items()}
    not_sharp = [name for name, b in bounds.items() if b != 0]
    report(11, not not_sharp, f"rank bounds {bounds}; not sharp: {not_sharp}")
