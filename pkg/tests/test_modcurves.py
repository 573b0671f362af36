import json
import logging
import os
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quartictorsion.arith import euler_phi, legendre_symbol, prime_stream, rational_sqrt
from quartictorsion.ecurve import (
    full_two_torsion_roots,
    halving_test,
    point_order,
    scalar_multiple,
    torsion_subgroup_Q,
)
from quartictorsion.modcurves import (
    CATALOG,
    QUADRATIC_EXCEPTIONAL_PAIRS,
    CertificateCache,
    PoleError,
    SingularParameter,
    build_exceptional_curve_2x10,
    catalog_get,
    checksum,
    cm_exponent_bound,
    cm_prime_bound,
    cusp_consistency,
    designated_point,
    exceptional_2x10_evidence,
    extra3_condition,
    family_condition_curve,
    gaussian_field,
    genus_class,
    get_family,
    nine_torsion_order,
    no_exceptional_evidence,
    point_to_parameter,
    search_exceptional_primes,
    specialize_family,
)
from quartictorsion.modcurves.genus import cusp_count, genus
from quartictorsion.numfield import QQ, compose_quadratic_tower, nf_sqrt
from quartictorsion.poly import Poly, poly_from_string as P

S = [(1, 11), (1, 14), (1, 15), (2, 10), (2, 12), (3, 9), (4, 8), (6, 6)]
QI = gaussian_field()
I = QI.gen


def random_rationals(seed, count, avoid=()):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        t = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
        if t not in avoid and t not in out:
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# catalog and genus


def test_catalog_examples():
    r = catalog_get((1, 11))
    assert r.coefficients == (0, -1, -1, 0, 0) and r.tag == "11A3" and r.torsion == (1, 5) and r.all_cusps
    r = catalog_get((4, 8))
    assert r.curve().coefficients == (0, 0, 0, -1, 0) and r.tag == "32A2" and r.base_field == "Q(i)"
    r = catalog_get((6, 6))
    assert r.curve().coefficients == (0, 0, 0, 0, 1) and r.tag == "36A1" and r.base_field == "Q(sqrt(-3))"
    assert sorted(CATALOG) == sorted(S)
    for label in ("X1_2_10", "2x10", (2, 10)):
        assert catalog_get(label).label == (2, 10)
    assert catalog_get("X1_11").label == (1, 11)
    with pytest.raises(KeyError):
        catalog_get((1, 13))


@pytest.mark.parametrize("label", S)
def test_catalog_torsion_over_base_field(label):
    from quartictorsion.ecurve import torsion_subgroup_K

    rec = CATALOG[label]
    E = rec.curve()
    K = rec.field()
    T = torsion_subgroup_Q(E) if K is QQ else torsion_subgroup_K(E.base_change(K))
    assert T.invariants == rec.torsion
    assert not E.singular
    if rec.short_model is not None:
        assert rec.short().to_weierstrass().coefficients == E.coefficients


def test_quadratic_pairs_reference():
    assert {(p.torsion, p.field_discriminant, p.curve_count) for p in QUADRATIC_EXCEPTIONAL_PAIRS} == {
        ((1, 14), -7, 2),
        ((1, 15), 5, 1),
        ((1, 15), -15, 1),
    }


def test_genus_class_examples():
    assert genus_class(1, 11) == "elliptic"
    assert genus_class(1, 10) == "genus-zero"
    assert genus_class(2, 10) == "elliptic"
    with pytest.raises(ValueError):
        genus_class(2, 5)


def genus_x1_oracle(N: int) -> int:
    # genus of X1(N), N >= 5
    g = sympy.Rational(N * N, 24)
    for p in sympy.primefactors(N):
        g *= 1 - sympy.Rational(1, p * p)
    g = 1 + g - sympy.Rational(1, 4) * sum(euler_phi(d) * euler_phi(N // d) for d in sympy.divisors(N))
    return int(g)


@pytest.mark.parametrize("N", range(5, 41))
def test_genus_x1_matches_formula(N):
    assert genus(1, N) == genus_x1_oracle(N)


def test_genus_classes_of_small_groups():
    elliptic = {(m, n) for m in range(1, 13) for n in range(m, 40, m) if genus_class(m, n) == "elliptic"}
    assert elliptic == set(S)
    for n in list(range(1, 11)) + [12]:
        assert genus_class(1, n) == "genus-zero"
    for n in (2, 4, 6, 8):
        assert genus_class(2, n) == "genus-zero"
    assert genus_class(1, 13) == "higher" and genus_class(1, 16) == "higher"


def test_cusp_counts():
    assert cusp_count(1, 11) == 10
    assert cusp_count(4, 8) == 16
    assert cusp_count(6, 6) == 12


# ---------------------------------------------------------------------------
# families


def test_specialize_examples():
    sp = specialize_family("kubert9", 2)
    assert sp.curve.coefficients == (-3, -12, -12, 0, 0)
    assert point_order(sp.curve.point(0, 0), 20) == 9
    sp = specialize_family("4x8", 0)
    assert sp.is_cusp and sp.curve.singular
    sp = specialize_family("6x6-variant", 2)
    assert sp.is_cusp
    with pytest.raises(PoleError):
        specialize_family("2x8", 1)


def test_point_to_parameter_examples():
    E = catalog_get((4, 8)).curve()
    assert point_to_parameter(E.point(0, 0)) == 0
    EK = E.base_change(QI)
    assert point_to_parameter(EK.point(I, 1 - I)) == QI(-1)
    with pytest.raises(PoleError):
        point_to_parameter(E.point(1, 0))


def test_extra3_condition_examples():
    assert extra3_condition(2) == P("x^3-9x^2+144")
    with pytest.raises(SingularParameter):
        extra3_condition(0)
    for t in random_rationals(5, 5, avoid=(0, 1)):
        f = extra3_condition(t)
        assert f.degree == 3 and f.lc == 1


def sympy_psi3_cubic(E):
    x = sympy.Symbol("x")
    b2, b4, b6, b8 = (sympy.Rational(v.numerator, v.denominator) for v in (E.b2, E.b4, E.b6, E.b8))
    psi3 = 3 * x**4 + b2 * x**3 + 3 * b4 * x**2 + 3 * b6 * x + b8
    _, facs = sympy.factor_list(psi3, x)
    return facs, x


@pytest.mark.parametrize("t", [Fraction(2), Fraction(3), Fraction(-1, 2), Fraction(5, 3), Fraction(7)])
def test_extra3_condition_divides_psi3(t):
    E = specialize_family("kubert9", t).curve
    x0 = scalar_multiple(E.point(0, 0), 3).x
    facs, x = sympy_psi3_cubic(E)
    cubic = extra3_condition(t)
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(cubic.c))
    psi3 = sympy.prod([g**e for g, e in facs])
    assert sympy.rem(psi3, expr, x) == 0
    assert sympy.rem(psi3, x - sympy.Rational(x0.numerator, x0.denominator), x) == 0


def test_kubert9_order_nine_random():
    for t in random_rationals(9, 10, avoid=(0, 1)):
        if specialize_family("kubert9", t).curve.singular:
            continue
        assert nine_torsion_order(t) == 9


def test_kubert9_variant_is_diagnostic():
    fam = get_family("kubert9-variant")
    assert fam.diagnostic
    E = specialize_family(fam, 2).curve
    assert point_order(E.point(0, 0), 20) != 9


@pytest.mark.parametrize("family", ["kubert9", "2x8", "3x6", "6x6"])
def test_cusp_consistency_discriminant_families(family):
    report = cusp_consistency(family, random_rationals(11, 20))
    assert report["discrepancies"] == []
    for entry in report["predicate_roots"]:
        assert entry.get("pole") or (entry["is_cusp"] and entry["singular"])


def test_cusp_consistency_6x6_variant():
    fam = get_family("6x6-variant")
    roots = fam.cusp_roots()
    samples = random_rationals(13, 20, avoid=roots)
    report = cusp_consistency(fam, samples)
    assert report["diagnostic"]
    # off the cusp locus the variant model stays nonsingular
    for t in samples:
        assert not specialize_family(fam, t).discriminant_zero
    # the variant model is nonsingular at the cusp root x = -1; surfaced as a discrepancy
    assert [d["t"] for d in report["discrepancies"]] == ["-1"]


def test_two_eight_square_criterion():
    q = P("t^2-2t-1", "t") * P("t^2+2t-1", "t")
    for t in random_rationals(17, 20, avoid=(0, 1, -1)):
        sp = specialize_family("2x8", t)
        if sp.curve.singular:
            continue
        qt = q(t)
        E_i = sp.curve.base_change(QI)
        P0 = designated_point("2x8", t)
        assert P0.x == -16 * t**4 / (t * t - 1) ** 2 and P0.y == 0
        P_i = E_i.point(QI(P0.x), QI(0))
        assert halving_test(E_i, P_i) == (nf_sqrt(QI(qt)) is not None)
        if nf_sqrt(QI(qt)) is None:
            tw = compose_quadratic_tower(QI, qt)
            EK = sp.curve.base_change(tw.field, lambda v: tw.field(v))
            assert halving_test(EK, EK.point(tw.field(P0.x), tw.field(0)))


def test_two_eight_square_parameters():
    # parameters from points of y^2 = x^3 - x give squares of the quartic
    cc = family_condition_curve("2x8")
    E = catalog_get((4, 8)).curve().base_change(QI)
    for Pt in (E.point(I, 1 - I), E.point(-I, 1 + I), E.point(0, 0)):
        t = point_to_parameter(Pt)
        assert nf_sqrt(cc.quartic(t)) is not None


def has_full_two_torsion(E):
    try:
        full_two_torsion_roots(E)
        return True
    except ValueError:
        return False


def test_three_six_square_criterion():
    q = P("2t", "t") * P("3t^2-6t+4", "t")
    samples = random_rationals(19, 10, avoid=(0,)) + [Fraction(2)]
    for t in samples:
        sp = specialize_family("3x6", t)
        if sp.curve.singular:
            continue
        qt = q(t)
        assert has_full_two_torsion(sp.curve) == (rational_sqrt(qt) is not None)
        for F in (QI, get_field_eisenstein()):
            EF = sp.curve.base_change(F)
            assert has_full_two_torsion(EF) == (nf_sqrt(F(qt)) is not None)
        if rational_sqrt(qt) is None:
            tw = compose_quadratic_tower(QQ, qt)
            assert has_full_two_torsion(sp.curve.base_change(tw.field))


def get_field_eisenstein():
    from quartictorsion.modcurves import eisenstein_field

    return eisenstein_field()


@pytest.mark.parametrize("family", ["2x8", "3x6", "4x8"])
def test_condition_curve_maps(family):
    cc = family_condition_curve(family)
    assert all(cc.verify().values())
    target = cc.target_curve()
    assert target.coefficients == catalog_get(cc.target_label).curve().coefficients


def test_condition_curve_roundtrip_on_points():
    cc = family_condition_curve("2x8")
    assert cc.on_quartic(0, 1)
    x, y = cc.map_to_target(0, 1)
    assert (x, y) == (0, 0)
    assert cc.map_from_target(x, y) == (0, 1)
    cc = family_condition_curve("3x6")
    assert cc.on_quartic(2, 4)
    x, y = cc.map_to_target(2, 4)
    assert (x, y) == (2, 3) and cc.target_curve().contains(x, y)
    assert cc.map_from_target(2, 3) == (2, 4)


def test_condition_curve_unknown_family():
    with pytest.raises(KeyError):
        family_condition_curve("kubert9")


# ---------------------------------------------------------------------------
# CM bounds


def test_cm_prime_bound_examples():
    assert cm_prime_bound(6, 3) == 7
    assert cm_prime_bound(4, 4) == 5
    assert cm_prime_bound(2, 1) == 5


@given(st.sampled_from([2, 4, 6]), st.integers(1, 24))
def test_cm_bounds_brute(w, m):
    expected = max((p for p in prime_stream(200) if m % p and euler_phi(m * p) <= 2 * w), default=0)
    assert cm_prime_bound(w, m) == expected
    es = [e for e in range(m, 2000, m) if euler_phi(e) <= 2 * w]
    E = cm_exponent_bound(w, m)
    for e in es:
        assert E % e == 0


def test_cm_exponent_examples():
    assert cm_exponent_bound(4, 4) == 16 * 3 * 5
    assert cm_exponent_bound(6, 3) % 9 == 0


# ---------------------------------------------------------------------------
# search and cache


def test_search_examples():
    rep = search_exceptional_primes(14, 120)
    assert rep.primes == [11, 43, 67, 107] and rep.discrepancies == []
    rep = search_exceptional_primes("Z/15", 200)
    assert rep.primes == [23, 47, 167] and rep.discrepancies == []
    assert search_exceptional_primes(14, 10).primes == []
    with pytest.raises(ValueError):
        search_exceptional_primes(13, 100)
    with pytest.raises(ValueError):
        search_exceptional_primes(14, 1)


def test_search_entries_recheck_congruences():
    for target, limit in ((14, 400), (15, 400)):
        rep = search_exceptional_primes(target, limit)
        for entry in rep.entries:
            p = entry.prime
            assert sympy.isprime(p)
            if target == 14:
                assert p % 8 == 3 and sympy.legendre_symbol(p % 7, 7) == 1
                assert entry.field["generators"] == [-7, p]
            else:
                assert p % 8 == 7 and p % 3 == 2 and sympy.legendre_symbol(p % 5, 5) == -1
                assert entry.field["generators"] == [-15, p]
            assert all(c["verdict"] == "certified" for c in entry.certificates)
            assert len(entry.certificates) == 2


def test_search_parallel_matches_serial():
    a = search_exceptional_primes(15, 300).to_json()
    b = search_exceptional_primes(15, 300, workers=2).to_json()
    assert a == b


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "certs.jsonl"
    first = search_exceptional_primes(14, 120, cache=CertificateCache(path))
    assert first.cache_stats["hits"] == 0
    cache = CertificateCache(path)
    second = search_exceptional_primes(14, 120, cache=cache)
    assert second.cache_stats["hits"] == 8 and second.cache_stats["rejected"] == 0
    assert first.to_json() == second.to_json()


def test_cache_rejects_bad_checksum(tmp_path, caplog):
    path = tmp_path / "certs.jsonl"
    search_exceptional_primes(14, 20, cache=CertificateCache(path))
    lines = path.read_text().splitlines()
    rec = json.loads(lines[0])
    rec["certificate"]["rank_bound"] = 5
    lines[0] = json.dumps(rec)
    path.write_text("\n".join(lines + ["not json"]) + "\n")
    cache = CertificateCache(path)
    with caplog.at_level(logging.WARNING):
        rep = search_exceptional_primes(14, 20, cache=cache)
    assert rep.primes == [11]
    assert cache.stats()["rejected"] == 2
    assert all(c["rank_bound"] == 0 for c in rep.entries[0].certificates)


def test_cache_unwritable(tmp_path, caplog):
    locked = tmp_path / "ro"
    locked.mkdir()
    path = locked / "sub" / "certs.jsonl"
    os.chmod(locked, 0o500)
    try:
        cache = CertificateCache(path)
        with caplog.at_level(logging.WARNING):
            rep = search_exceptional_primes(14, 20, cache=cache)
        assert rep.primes == [11]
        if os.geteuid() != 0:
            assert not cache.writable
    finally:
        os.chmod(locked, 0o700)


# ---------------------------------------------------------------------------
# evidence


def test_evidence_x1_11():
    rep = no_exceptional_evidence((1, 11))
    assert rep.ok
    psi5 = rep.check("psi5 factors (D=5)").observed
    assert psi5["factors"] == ["x", "x - 1"] and psi5["cofactor_degree"] == 10
    lam = rep.check("lambda25 factors (D=4)").observed
    assert lam["degree"] == 312 and lam["factors"] == ["x", "x - 1"]


def test_evidence_2x12():
    rep = no_exceptional_evidence("2x12")
    assert rep.ok
    assert rep.check("torsion over Q(zeta12)").observed == (2, 8)
    assert rep.check("torsion over Q[x]/(x^4+4x^3-6x^2+4x+1)").observed == (1, 8)


def test_evidence_3x9_4x8_6x6():
    rep = no_exceptional_evidence((3, 9))
    assert rep.ok and rep.check("torsion over Q(sqrt(-3))").observed == (3, 3)
    rep = no_exceptional_evidence((4, 8))
    assert rep.ok
    assert rep.check("torsion over Q(i, sqrt 2)").observed == (4, 4)
    assert rep.check("all points over Q(i, sqrt 2) are cusps").observed == {"cusp": 16}
    rep = no_exceptional_evidence((6, 6))
    assert rep.ok and rep.check("torsion over Q(sqrt(-3))").observed == (2, 6)
    with pytest.raises(ValueError):
        no_exceptional_evidence((1, 14))


def test_exceptional_curve_2x10():
    Z = build_exceptional_curve_2x10()
    assert not Z.singular
    assert Z.j_invariant == 1728
    assert Z.field.poly == P("x^4-2x^2+5")
    rep = exceptional_2x10_evidence()
    assert rep.ok
    assert rep.check("exceptional curve torsion").observed == (2, 10)
    assert rep.check("torsion over Q(sqrt(2i+1))").observed == (1, 12)
    assert rep.check("additional torsion points over Q(sqrt(2i+1))").observed == 6
    json.dumps(rep.to_json())
