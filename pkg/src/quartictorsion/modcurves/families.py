"""One-parameter universal families, their cusp loci and condition curves."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

from ..arith import as_fraction, fraction_str
from ..ecurve import CurvePoint, WeierstrassCurve, curve_create, point_order
from ..numfield import QQ, FieldElement, element_to_json, rationalize
from ..poly import Poly, primitive, rat_gcd
from ..polyfactor import rational_roots


class PoleError(ZeroDivisionError):
    """The parameter is a pole of a coefficient function."""


class SingularParameter(ValueError):
    """The family is singular at the requested parameter."""


T = Poly.x()


@dataclass(frozen=True)
class RationalFunction:
    """num/den in Q(t) with a monic denominator and no common factor."""

    num: Poly
    den: Poly = Poly((1,))

    def __post_init__(self):
        num = Poly([as_fraction(v) for v in self.num.c])
        den = Poly([as_fraction(v) for v in self.den.c])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = rat_gcd(num, den) if num else Poly((1,))
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        object.__setattr__(self, "num", num * (1 / lc) if num else num)
        object.__setattr__(self, "den", den.monic())

    @classmethod
    def lift(cls, v: Any) -> "RationalFunction":
        if isinstance(v, RationalFunction):
            return v
        if isinstance(v, Poly):
            return cls(v)
        return cls(Poly((as_fraction(v),)))

    def __add__(self, o: Any) -> "RationalFunction":
        o = RationalFunction.lift(o)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, o: Any) -> "RationalFunction":
        return self + (-RationalFunction.lift(o))

    def __rsub__(self, o: Any) -> "RationalFunction":
        return RationalFunction.lift(o) - self

    def __mul__(self, o: Any) -> "RationalFunction":
        o = RationalFunction.lift(o)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o: Any) -> "RationalFunction":
        o = RationalFunction.lift(o)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o: Any) -> "RationalFunction":
        return RationalFunction.lift(o) / self

    def __pow__(self, e: int) -> "RationalFunction":
        if e < 0:
            return RationalFunction(Poly((1,))) / (self ** (-e))
        return RationalFunction(self.num**e, self.den**e)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, o: object) -> bool:
        if not isinstance(o, RationalFunction):
            try:
                o = RationalFunction.lift(o)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        return _eval_poly(self.num, inner) / _eval_poly(self.den, inner)

    def __call__(self, t: Any) -> Any:
        d = self.den(t)
        if d == 0:
            raise PoleError(f"parameter {t} is a pole")
        return self.num(t) / d

    def to_json(self) -> dict:
        return {"num": [fraction_str(v) for v in self.num.c], "den": [fraction_str(v) for v in self.den.c]}

    def __str__(self) -> str:
        if self.den.degree == 0:
            return self.num.to_str("t")
        return f"({self.num.to_str('t')})/({self.den.to_str('t')})"


def _eval_poly(p: Poly, x: Any) -> Any:
    acc: Any = 0
    for c in reversed(p.c):
        acc = acc * x + c
    return acc


def _rf(p: Poly | int, q: Poly | int = 1) -> RationalFunction:
    num = p if isinstance(p, Poly) else Poly((p,))
    den = q if isinstance(q, Poly) else Poly((q,))
    return RationalFunction(num, den)


def _weierstrass_discriminant(a: tuple) -> Any:
    a1, a3, a2, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


# ---------------------------------------------------------------------------
# family data


@dataclass(frozen=True)
class FamilySpec:
    family_id: str
    description: str
    coefficients: tuple[RationalFunction, ...]  # a1, a3, a2, a4, a6
    base_field: str
    torsion: tuple[int, int]
    cusp_predicate: str = "discriminant"  # or "polynomial"
    cusp_polynomial: Poly | None = None
    parameter: str = "t"
    designated_point: tuple[RationalFunction, RationalFunction] = (_rf(0), _rf(0))
    square_criterion: RationalFunction | None = None
    diagnostic: bool = False
    notes: str = ""

    @property
    def discriminant(self) -> RationalFunction:
        return _family_discriminant(self.family_id)

    def poles(self) -> list[Fraction]:
        out: set[Fraction] = set()
        for c in self.coefficients:
            out.update(rational_roots(c.den) if c.den.degree > 0 else ())
        return sorted(out)

    def cusp_roots(self) -> list[Fraction]:
        """Rational parameters where the cusp predicate holds (poles excluded)."""
        if self.cusp_predicate == "polynomial":
            roots = rational_roots(self.cusp_polynomial)
        else:
            roots = rational_roots(self.discriminant.num)
        poles = set(self.poles())
        return sorted(set(roots) - poles)

    def to_json(self) -> dict:
        return {
            "id": self.family_id,
            "description": self.description,
            "coefficients": [c.to_json() for c in self.coefficients],
            "base_field": self.base_field,
            "torsion": list(self.torsion),
            "parameter": self.parameter,
            "cusp_predicate": self.cusp_predicate,
            "cusp_polynomial": None
            if self.cusp_polynomial is None
            else [fraction_str(v) for v in self.cusp_polynomial.c],
            "diagnostic": self.diagnostic,
            "notes": self.notes,
        }


def _build_families() -> dict[str, FamilySpec]:
    fams: dict[str, FamilySpec] = {}

    # nine-torsion (Tate normal form with (0,0) of order 9)
    c = T**3 - T**2
    b = c * (T**2 - T + 1)
    fams["kubert9"] = FamilySpec(
        "kubert9",
        "E(t): y^2 + (1-c)xy - by = x^3 - bx^2, c = t^3 - t^2, b = c(t^2 - t + 1)",
        (_rf(1 - c), _rf(-b), _rf(-b), _rf(0), _rf(0)),
        "Q",
        (1, 9),
        notes="(0,0) has order 9; the extra 3-torsion condition is extra3_condition(t)",
    )
    fams["kubert9-variant"] = FamilySpec(
        "kubert9-variant",
        "y^2 + (t^2 - t^3)xy + (t^2-t+1)(t^3-t^2)y = x^3 + (t^2-t+1)(t^3-t^2)x^2",
        (_rf(-c), _rf(b), _rf(b), _rf(0), _rf(0)),
        "Q",
        (1, 1),
        diagnostic=True,
        notes="sign-variant model kept for comparison; (0,0) does not have order 9",
    )

    # 2 + 8 torsion, Y^2 = X(X + (t^2-1)^2)(X + (4t^2/(t^2-1))^2)
    u = T**2 - 1
    A = _rf(u**2)
    B = _rf(16 * T**4, u**2)
    fams["2x8"] = FamilySpec(
        "2x8",
        "Y^2 = X(X + (t^2-1)^2)(X + (4t^2/(t^2-1))^2), t = y/(x-1) on y^2 = x^3 - x",
        (_rf(0), _rf(0), A + B, A * B, _rf(0)),
        "Q(i)",
        (2, 8),
        designated_point=(-B, _rf(0)),
        square_criterion=_rf((T**2 - 2 * T - 1) * (T**2 + 2 * T - 1)),
        notes="over fields containing Q(i) the designated 2-torsion point halves exactly "
        "when the square criterion holds, giving 4 + 8 torsion",
    )

    # 3 + 6 torsion over Q(sqrt(-3)), (0,0) of order 6
    q = (3 * T - 2) * (3 * T**2 + 4) * (3 * T**2 - 6 * T + 4)
    a1 = 2 * (9 * T**3 - 30 * T**2 + 60 * T - 40)
    a3 = -144 * q * (T - 2) ** 3
    a2 = -16 * q
    fams["3x6"] = FamilySpec(
        "3x6",
        "y^2 + a1 xy + a3 y = x^3 + a2 x^2 with a1 = 2(9t^3-30t^2+60t-40), "
        "a3 = -144 q (t-2)^3, a2 = -16 q, q = (3t-2)(3t^2+4)(3t^2-6t+4)",
        (_rf(a1), _rf(a3), _rf(a2), _rf(0), _rf(0)),
        "Q(sqrt(-3))",
        (3, 6),
        square_criterion=_rf(2 * T * (3 * T**2 - 6 * T + 4)),
        notes="full 2-torsion exactly when the square criterion holds",
    )
    fams["3x6-variant"] = FamilySpec(
        "3x6-variant",
        "y^2 + 2(9t^2-30t^2+60t-40)xy - 144q(t-2)^3 y = x^3 - 16q",
        (_rf(2 * (9 * T**2 - 30 * T**2 + 60 * T - 40)), _rf(a3), _rf(0), _rf(0), _rf(-16 * q)),
        "Q(sqrt(-3))",
        (1, 1),
        diagnostic=True,
        notes="variant with repeated t^2 and constant term; does not contain (0,0)",
    )

    # 6 + 6 torsion in the x-coordinate of y^2 = x^3 + 1
    cusp6 = T * (T - 2) * (T + 1) * (T**2 - T + 1) * (T**2 + 2 * T + 4)
    aa = Poly((Fraction(-64, 3), Fraction(128, 3), Fraction(-32, 3), Fraction(16, 3)))
    bb = Poly(
        (
            0,
            Fraction(131072, 27),
            Fraction(-262144, 27),
            Fraction(32768, 3),
            Fraction(-180224, 27),
            Fraction(65536, 27),
            Fraction(-4096, 3),
            Fraction(20480, 27),
            Fraction(-4096, 27),
        )
    )
    fams["6x6-variant"] = FamilySpec(
        "6x6-variant",
        "Y^2 + a(t)XY + b(t)Y = X^3 + c(t)X^2 with a(t) = c(t)",
        (_rf(aa), _rf(bb), _rf(aa), _rf(0), _rf(0)),
        "Q(sqrt(-3))",
        (6, 6),
        cusp_predicate="polynomial",
        cusp_polynomial=cusp6,
        parameter="x-coordinate on y^2 = x^3 + 1",
        diagnostic=True,
        notes="a(t) and c(t) coincide in this coefficient data; consistency checks are diagnostics",
    )
    tL = _rf(2 * T + 2, 3)
    fams["6x6"] = FamilySpec(
        "6x6",
        "3x6 family evaluated at t = (2x+2)/3, x the x-coordinate on y^2 = x^3 + 1",
        tuple(cf.compose(tL) for cf in fams["3x6"].coefficients),
        "Q(sqrt(-3))",
        (6, 6),
        cusp_predicate="discriminant",
        cusp_polynomial=cusp6,
        parameter="x-coordinate on y^2 = x^3 + 1",
        notes="derived universal family; its cusp locus is the explicit cusp polynomial",
    )
    return fams


FAMILIES: dict[str, FamilySpec] = _build_families()
FAMILY_ALIASES = {"4x8": "2x8", "kubert": "kubert9"}


def get_family(family: str | FamilySpec) -> FamilySpec:
    if isinstance(family, FamilySpec):
        return family
    key = FAMILY_ALIASES.get(family, family)
    if key not in FAMILIES:
        raise KeyError(f"unknown family {family!r}; known: {sorted(FAMILIES)}")
    return FAMILIES[key]


@lru_cache(maxsize=None)
def _family_discriminant(family_id: str) -> RationalFunction:
    return _weierstrass_discriminant(FAMILIES[family_id].coefficients)


# ---------------------------------------------------------------------------
# specialization


@dataclass
class Specialization:
    family: str
    parameter: Any
    curve: WeierstrassCurve
    is_cusp: bool
    discriminant_zero: bool
    predicate: str

    @property
    def consistent(self) -> bool:
        """Whether the cusp predicate agrees with singularity of the model."""
        return self.is_cusp == self.discriminant_zero

    def to_json(self) -> dict:
        from ..ecurve import curve_to_json

        return {
            "family": self.family,
            "parameter": element_to_json(self.parameter),
            "curve": curve_to_json(self.curve),
            "is_cusp": self.is_cusp,
            "discriminant_zero": self.discriminant_zero,
            "predicate": self.predicate,
            "consistent": self.consistent,
        }


def _field_of(t: Any):
    return t.field if isinstance(t, FieldElement) else QQ


def specialize_family(family: str | FamilySpec, t: Any) -> Specialization:
    fam = get_family(family)
    K = _field_of(t)
    t = K(t)
    coeffs = [cf(t) for cf in fam.coefficients]
    E = curve_create(coeffs, K)
    if fam.cusp_predicate == "polynomial":
        cusp = fam.cusp_polynomial(t) == 0
    else:
        cusp = E.singular
    return Specialization(fam.family_id, t, E, bool(cusp), E.singular, fam.cusp_predicate)


def designated_point(family: str | FamilySpec, t: Any) -> CurvePoint:
    fam = get_family(family)
    spec = specialize_family(fam, t)
    x, y = (f(spec.parameter) for f in fam.designated_point)
    return spec.curve.point(x, y)


def point_to_parameter(P: CurvePoint) -> Any:
    """t = y/(x-1) for a point on y^2 = x^3 - x."""
    E = P.curve
    if tuple(E.coefficients) != tuple(E.field(v) for v in (0, 0, 0, -1, 0)):
        raise ValueError("point_to_parameter expects a point on y^2 = x^3 - x")
    if P.is_identity:
        raise PoleError("the point at infinity has no finite parameter")
    if P.x == 1:
        raise PoleError("x = 1 is a pole of t = y/(x-1)")
    return P.y / (P.x - 1)


# ---------------------------------------------------------------------------
# extra 3-torsion on the nine-torsion family

_J39 = (
    Poly(
        (
            0, 0, 0, 0,
            Fraction(1, 3), Fraction(-5, 3), Fraction(13, 3), Fraction(-22, 3), Fraction(26, 3),
            Fraction(-22, 3), Fraction(13, 3), Fraction(-5, 3), Fraction(1, 3),
        )
    ),
    Poly(
        (
            0, 0, Fraction(2, 3), Fraction(-5, 3), 2, Fraction(-2, 3), Fraction(-4, 3), 2,
            Fraction(-4, 3), Fraction(1, 3),
        )
    ),
    Poly((Fraction(1, 3), 0, 1, Fraction(-7, 3), 3, -2, Fraction(1, 3))),
    Poly((1,)),
)


def extra3_condition(t: Any) -> Poly:
    """Monic cubic whose roots over K are x-coordinates of 3-torsion outside <3(0,0)>."""
    spec = specialize_family("kubert9", t)
    if spec.curve.singular:
        raise SingularParameter(f"nine-torsion family is singular at t = {t}")
    t = spec.parameter
    return rationalize(Poly([c(t) for c in _J39]))


# ---------------------------------------------------------------------------
# condition curves and birational maps


class QuadraticFunctionField:
    """Q(u)[v]/(v^2 - f(u)) with elements A + B v, A and B in Q(u)."""

    def __init__(self, f: Poly):
        self.f = RationalFunction(f)

    def __call__(self, A: Any = 0, B: Any = 0) -> "QElement":
        return QElement(self, RationalFunction.lift(A), RationalFunction.lift(B))

    @property
    def u(self) -> "QElement":
        return self(T)

    @property
    def v(self) -> "QElement":
        return self(0, 1)


@dataclass(frozen=True)
class QElement:
    F: QuadraticFunctionField = field(compare=False)
    A: RationalFunction
    B: RationalFunction

    def _lift(self, o: Any) -> "QElement":
        return o if isinstance(o, QElement) else self.F(o)

    def __add__(self, o: Any) -> "QElement":
        o = self._lift(o)
        return QElement(self.F, self.A + o.A, self.B + o.B)

    __radd__ = __add__

    def __neg__(self) -> "QElement":
        return QElement(self.F, -self.A, -self.B)

    def __sub__(self, o: Any) -> "QElement":
        return self + (-self._lift(o))

    def __rsub__(self, o: Any) -> "QElement":
        return self._lift(o) - self

    def __mul__(self, o: Any) -> "QElement":
        o = self._lift(o)
        return QElement(
            self.F, self.A * o.A + self.B * o.B * self.F.f, self.A * o.B + self.B * o.A
        )

    __rmul__ = __mul__

    def inverse(self) -> "QElement":
        n = self.A * self.A - self.B * self.B * self.F.f
        if n.is_zero():
            raise ZeroDivisionError("non-invertible function field element")
        return QElement(self.F, self.A / n, -self.B / n)

    def __truediv__(self, o: Any) -> "QElement":
        return self * self._lift(o).inverse()

    def __rtruediv__(self, o: Any) -> "QElement":
        return self._lift(o) * self.inverse()

    def __pow__(self, e: int) -> "QElement":
        out = self.F(1)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero()

    def evaluate(self, u: Any, v: Any) -> Any:
        return self.A(u) + self.B(u) * v

    def substitute(self, U: "QElement", V: "QElement") -> "QElement":
        """Replace (u, v) by elements of another quadratic function field."""
        A = _eval_poly(self.A.num, U) / _eval_poly(self.A.den, U)
        B = _eval_poly(self.B.num, U) / _eval_poly(self.B.den, U)
        return A + B * V


@dataclass
class ConditionCurve:
    """s^2 = quartic(t) together with maps to and from y^2 = cubic(x)."""

    family: str
    quartic: Poly
    target_label: tuple[int, int]
    cubic: Poly
    to_target: Callable[[QuadraticFunctionField], tuple[QElement, QElement]]
    from_target: Callable[[QuadraticFunctionField], tuple[QElement, QElement]]
    description: str = ""

    def target_curve(self) -> WeierstrassCurve:
        c = [as_fraction(v) for v in self.cubic.c]
        return curve_create([0, 0, c[2], c[1], c[0]])

    def map_to_target(self, t: Any, s: Any) -> tuple[Any, Any]:
        x, y = self.to_target(QuadraticFunctionField(self.quartic))
        return x.evaluate(t, s), y.evaluate(t, s)

    def map_from_target(self, x: Any, y: Any) -> tuple[Any, Any]:
        t, s = self.from_target(QuadraticFunctionField(self.cubic))
        return t.evaluate(x, y), s.evaluate(x, y)

    def on_quartic(self, t: Any, s: Any) -> bool:
        return s * s == self.quartic(t)

    def verify(self) -> dict[str, bool]:
        """Exact identities in the function fields of both curves."""
        Fq = QuadraticFunctionField(self.quartic)
        Fc = QuadraticFunctionField(self.cubic)
        x, y = self.to_target(Fq)
        t, s = self.from_target(Fc)
        cubic_at_x = _eval_poly(self.cubic, x)
        quartic_at_t = _eval_poly(self.quartic, t)
        t2, s2 = t.substitute(x, y), s.substitute(x, y)
        x2, y2 = x.substitute(t, s), y.substitute(t, s)
        return {
            "image_on_target": (y * y - cubic_at_x).is_zero(),
            "image_on_condition": (s * s - quartic_at_t).is_zero(),
            "roundtrip_condition": (t2 - Fq.u).is_zero() and (s2 - Fq.v).is_zero(),
            "roundtrip_target": (x2 - Fc.u).is_zero() and (y2 - Fc.v).is_zero(),
        }

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "quartic": [fraction_str(v) for v in self.quartic.c],
            "target_label": list(self.target_label),
            "cubic": [fraction_str(v) for v in self.cubic.c],
            "description": self.description,
            "verified": self.verify(),
        }


def _map_48_forward(F: QuadraticFunctionField) -> tuple[QElement, QElement]:
    t, s = F.u, F.v
    d = t * t - s - 3
    return (t * t - s + 1) / d, 4 * t / d


def _map_48_backward(F: QuadraticFunctionField) -> tuple[QElement, QElement]:
    x, y = F.u, F.v
    return y / (x - 1), (x * x - 2 * x - 1) / (x - 1)


def _map_66_forward(F: QuadraticFunctionField) -> tuple[QElement, QElement]:
    t, s = F.u, F.v
    return (3 * t - 2) / 2, 3 * s / 4


def _map_66_backward(F: QuadraticFunctionField) -> tuple[QElement, QElement]:
    x, y = F.u, F.v
    return (2 * x + 2) / 3, 4 * y / 3


CONDITION_CURVES = {
    "2x8": ConditionCurve(
        "2x8",
        (T**2 - 2 * T - 1) * (T**2 + 2 * T - 1),
        (4, 8),
        T**3 - T,
        _map_48_forward,
        _map_48_backward,
        "x = (t^2 - s + 1)/(t^2 - s - 3), y = 4t/(t^2 - s - 3); inverse t = y/(x-1), "
        "s = (x^2 - 2x - 1)/(x - 1)",
    ),
    "3x6": ConditionCurve(
        "3x6",
        2 * T * (3 * T**2 - 6 * T + 4),
        (6, 6),
        T**3 + 1,
        _map_66_forward,
        _map_66_backward,
        "x = (3t - 2)/2, y = 3s/4; inverse t = (2x + 2)/3, s = 4y/3",
    ),
}


def family_condition_curve(family: str | FamilySpec) -> ConditionCurve:
    fam = get_family(family)
    if fam.family_id not in CONDITION_CURVES:
        raise KeyError(f"family {fam.family_id} has no condition curve")
    return CONDITION_CURVES[fam.family_id]


# ---------------------------------------------------------------------------
# diagnostics


def nine_torsion_order(t: Any) -> int | None:
    spec = specialize_family("kubert9", t)
    if spec.curve.singular:
        raise SingularParameter(f"singular at t = {t}")
    return point_order(spec.curve.point(0, 0), 12)


def cusp_consistency(family: str | FamilySpec, samples: list[Fraction] | None = None) -> dict:
    """Check the cusp predicate against singularity at its roots and at samples."""
    fam = get_family(family)
    roots = fam.cusp_roots()
    at_roots = []
    for r in roots:
        try:
            sp = specialize_family(fam, r)
            at_roots.append({"t": fraction_str(r), "is_cusp": sp.is_cusp, "singular": sp.discriminant_zero})
        except PoleError:
            at_roots.append({"t": fraction_str(r), "pole": True})
    bad = [e for e in at_roots if not e.get("pole") and not (e["is_cusp"] and e["singular"])]
    off = []
    for t in samples or []:
        if t in roots:
            continue
        try:
            sp = specialize_family(fam, t)
        except PoleError:
            continue
        if sp.discriminant_zero or sp.is_cusp:
            off.append({"t": fraction_str(t), "is_cusp": sp.is_cusp, "singular": sp.discriminant_zero})
    return {
        "family": fam.family_id,
        "predicate_roots": at_roots,
        "discrepancies": bad + off,
        "diagnostic": fam.diagnostic,
    }
