"""Command-line interface.

Every command prints one JSON report to stdout::

    {"schema_version": 1, "command": ..., "inputs": {...}, "result": {...},
     "discrepancies": [...]}

Exit codes: 0 success, 1 discrepancies present, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from .arith import as_fraction, fraction_str
from .descent import rank_upper_bound
from .ecurve import (
    ShortABCurve,
    WeierstrassCurve,
    curve_create,
    curve_to_json,
    point_order,
    quadratic_twist,
    torsion_locus,
    torsion_subgroup_K,
    torsion_subgroup_Q,
)
from .numfield import (
    QQ,
    AnyField,
    IncompleteRootSearch,
    ReducibleFieldPolynomial,
    factor_over_field,
    lift_poly,
    nf_create,
)
from .poly import Poly, poly_from_string, poly_to_json
from .polyfactor import extract_factors_bounded

SCHEMA_VERSION = 1


class InvalidInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"not a rational number: {text!r}") from exc


def _parse_field(text: str | None) -> AnyField:
    from .modcurves.catalog import BASE_FIELDS

    if text is None or text.strip() in ("Q", "QQ"):
        return QQ
    if text in BASE_FIELDS:
        return BASE_FIELDS[text]()
    try:
        g = poly_from_string(text)
    except ValueError as exc:
        raise InvalidInput(exc.args[0]) from exc
    if g.degree < 1 or g.degree > 4:
        raise InvalidInput("field polynomial must have degree 1 to 4")
    if g.degree == 1:
        return QQ
    try:
        return nf_create(g)
    except ReducibleFieldPolynomial as exc:
        raise InvalidInput(f"field polynomial {g.to_str()} is reducible: factor {exc.factor.to_str()}") from exc


def _curve_from_args(args: argparse.Namespace) -> tuple[WeierstrassCurve, dict]:
    from .modcurves.catalog import catalog_get

    inputs: dict[str, Any] = {}
    if getattr(args, "label", None):
        try:
            rec = catalog_get(args.label)
        except (KeyError, ValueError) as exc:
            raise InvalidInput(f"unknown label {args.label!r}") from exc
        coeffs = list(rec.coefficients)
        inputs["label"] = rec.name
        default_field = rec.base_field
    elif getattr(args, "coeffs", None):
        parts = [p for p in args.coeffs.replace(" ", "").split(",") if p]
        if len(parts) != 5:
            raise InvalidInput("--coeffs needs five values a1,a3,a2,a4,a6")
        coeffs = [_fraction(p) for p in parts]
        default_field = "Q"
    else:
        raise InvalidInput("give a curve with --label or --coeffs")
    field_text = args.field if getattr(args, "field", None) else default_field
    K = _parse_field(field_text)
    inputs["coefficients"] = [fraction_str(as_fraction(c)) for c in coeffs]
    inputs["field"] = K.to_json()
    E = curve_create(coeffs)
    if K is not QQ:
        E = E.base_change(K)
    if E.singular:
        raise InvalidInput("singular curve (discriminant 0)")
    return E, inputs


# ---------------------------------------------------------------------------
# commands


def cmd_descent(args: argparse.Namespace) -> tuple[dict, dict, list]:
    a, b = _fraction(args.a), _fraction(args.b)
    try:
        E = ShortABCurve(a, b)
        if args.twist is not None:
            d = int(args.twist)
            E = quadratic_twist(E, d)
    except ValueError as exc:
        raise InvalidInput(exc.args[0]) from exc
    inputs = {"a": fraction_str(a), "b": fraction_str(b), "twist": args.twist}
    cert = rank_upper_bound(E)
    return inputs, cert.to_json(), []


def cmd_search(args: argparse.Namespace) -> tuple[dict, dict, list]:
    from .modcurves.cache import CertificateCache, default_cache_path
    from .modcurves.search import search_exceptional_primes

    if args.torsion not in (14, 15):
        raise InvalidInput("--torsion must be 14 or 15")
    if args.limit < 2:
        raise InvalidInput("--limit must be at least 2")
    path = args.cache if args.cache else default_cache_path()
    cache = CertificateCache(path) if path else None
    report = search_exceptional_primes(args.torsion, args.limit, cache=cache, workers=args.workers)
    inputs = {"torsion": args.torsion, "limit": args.limit}
    return inputs, report.to_json(full=not args.brief), report.discrepancies


def cmd_torsion(args: argparse.Namespace) -> tuple[dict, dict, list]:
    E, inputs = _curve_from_args(args)
    if args.bound is not None:
        inputs["exponent_bound"] = args.bound
    if E.is_rational() and args.bound is None:
        T = torsion_subgroup_Q(E)
    else:
        T = torsion_subgroup_K(E, args.bound)
    result = T.to_json()
    result["order"] = T.order
    result["exponent_bound"] = T.exponent_bound
    result["points"] = [P.to_json() for P in T.points]
    disc = [] if T.status == "complete" else [{"reason": "root search incomplete", "status": T.status}]
    return inputs, result, disc


def cmd_divpoly(args: argparse.Namespace) -> tuple[dict, dict, list]:
    E, inputs = _curve_from_args(args)
    if args.n < 2:
        raise InvalidInput("--n must be at least 2")
    inputs.update({"n": args.n, "factor_bound": args.factor})
    lam = torsion_locus(E, args.n)
    result: dict[str, Any] = {"degree": lam.degree}
    if E.is_rational():
        result["locus"] = poly_to_json(lam)
        if args.factor:
            bf = extract_factors_bounded(lam, args.factor)
            result["factors"] = [
                {"factor": g.to_str(), "degree": g.degree, "multiplicity": e} for g, e in bf.factors
            ]
            result["cofactor_degree"] = bf.cofactor.degree
    else:
        K = E.field
        result["locus"] = [str(v) for v in lam.c]
        if args.factor:
            H = lift_poly(lam, K) if lam.is_rational() else lam
            try:
                fs = factor_over_field(H, K, args.factor)
            except IncompleteRootSearch as exc:
                return inputs, result, [{"reason": str(exc)}]
            result["factors"] = [{"factor": f.to_str(), "degree": f.degree} for f in fs]
    return inputs, result, []


def cmd_family(args: argparse.Namespace) -> tuple[dict, dict, list]:
    from .modcurves.families import (
        PoleError,
        SingularParameter,
        family_condition_curve,
        get_family,
        nine_torsion_order,
        specialize_family,
    )

    try:
        fam = get_family(args.id)
    except KeyError as exc:
        raise InvalidInput(exc.args[0]) from exc
    inputs: dict[str, Any] = {"id": fam.family_id}
    result: dict[str, Any] = {"family": fam.to_json()}
    disc: list = []
    if args.condition:
        try:
            cc = family_condition_curve(fam)
        except KeyError as exc:
            raise InvalidInput(exc.args[0]) from exc
        result["condition_curve"] = cc.to_json()
        disc += [{"reason": f"map identity {k} failed"} for k, v in cc.verify().items() if not v]
    if args.t is not None:
        t = _fraction(args.t)
        inputs["t"] = fraction_str(t)
        try:
            spec = specialize_family(fam, t)
        except PoleError as exc:
            raise InvalidInput(f"t = {fraction_str(t)} is a pole of the family") from exc
        result["specialization"] = spec.to_json()
        if fam.family_id == "kubert9" and not spec.curve.singular:
            try:
                result["order_of_origin"] = nine_torsion_order(t)
            except SingularParameter:
                pass
        elif not spec.curve.singular and spec.curve.contains(spec.curve.field(0), spec.curve.field(0)):
            result["order_of_origin"] = point_order(spec.curve.point(0, 0), 12)
        if not fam.diagnostic and not spec.consistent:
            disc.append({"reason": "cusp predicate disagrees with discriminant"})
    return inputs, result, disc


def cmd_catalog(args: argparse.Namespace) -> tuple[dict, dict, list]:
    from .modcurves.catalog import CATALOG, QUADRATIC_EXCEPTIONAL_PAIRS, catalog_get
    from .modcurves.families import FAMILIES
    from .modcurves.genus import modular_invariants

    if args.label:
        try:
            rec = catalog_get(args.label)
        except (KeyError, ValueError) as exc:
            raise InvalidInput(f"unknown label {args.label!r}") from exc
        out = rec.to_json()
        out["genus"] = modular_invariants(*rec.label).genus
        return {"label": rec.name}, out, []
    result = {
        "curves": [dict(r.to_json(), genus=modular_invariants(*r.label).genus) for r in CATALOG.values()],
        "families": sorted(FAMILIES),
        "quadratic_exceptional_pairs": [
            {"torsion": list(p.torsion), "field_discriminant": p.field_discriminant, "curves": p.curve_count}
            for p in QUADRATIC_EXCEPTIONAL_PAIRS
        ],
    }
    return {}, result, []


def cmd_evidence(args: argparse.Namespace) -> tuple[dict, dict, list]:
    from .modcurves.catalog import parse_label
    from .modcurves.evidence import exceptional_2x10_evidence, no_exceptional_evidence

    try:
        key = parse_label(args.target)
    except ValueError as exc:
        raise InvalidInput(exc.args[0]) from exc
    try:
        rep = exceptional_2x10_evidence() if key == (2, 10) else no_exceptional_evidence(key)
    except ValueError as exc:
        raise InvalidInput(exc.args[0]) from exc
    return {"target": list(key)}, rep.to_json(), [c.to_json() for c in rep.discrepancies]


COMMANDS = {
    "descent": cmd_descent,
    "search": cmd_search,
    "torsion": cmd_torsion,
    "divpoly": cmd_divpoly,
    "family": cmd_family,
    "catalog": cmd_catalog,
    "evidence": cmd_evidence,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quartictorsion", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", default=True, help="JSON output (always on)")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("descent", help="2-isogeny descent for y^2 = x^3 + ax^2 + bx")
    d.add_argument("--a", required=True)
    d.add_argument("--b", required=True)
    d.add_argument("--twist", type=int)

    s = sub.add_parser("search", help="twist search for Z/14 and Z/15 exceptional pairs")
    s.add_argument("--torsion", type=int, required=True)
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--cache", help="JSON-lines certificate cache (default: $QUARTICTORSION_CACHE)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--brief", action="store_true", help="omit local solvability transcripts")

    def curve_args(q: argparse.ArgumentParser) -> None:
        g = q.add_mutually_exclusive_group(required=True)
        g.add_argument("--label", help="catalog label such as X1_11 or X1_2_10")
        g.add_argument("--coeffs", help="a1,a3,a2,a4,a6")
        q.add_argument("--field", help="Q, Q(i), Q(sqrt(-3)) or a monic polynomial in x")

    t = sub.add_parser("torsion", help="torsion subgroup over Q or a number field")
    curve_args(t)
    t.add_argument("--bound", type=int, help="exponent bound to use instead of the automatic one")

    v = sub.add_parser("divpoly", help="torsion locus and its low-degree factors")
    curve_args(v)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--factor", type=int, default=0, metavar="D", help="extract factors of degree <= D")

    f = sub.add_parser("family", help="specialize a universal family")
    f.add_argument("--id", required=True)
    f.add_argument("--t")
    f.add_argument("--condition", action="store_true", help="include the condition curve and maps")

    c = sub.add_parser("catalog", help="elliptic modular curves X1(m, n)")
    c.add_argument("--label")

    e = sub.add_parser("evidence", help="torsion-growth evidence for a catalog curve")
    e.add_argument("--target", required=True)
    return p


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    t0 = time.perf_counter()
    report: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "command": args.command}
    try:
        inputs, result, disc = COMMANDS[args.command](args)
    except ValueError as exc:
        report["error"] = str(exc)
        _emit(report)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.update({"inputs": inputs, "result": result, "discrepancies": disc})
    if args.timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    _emit(report)
    return 1 if disc else 0


if __name__ == "__main__":
    sys.exit(main())
