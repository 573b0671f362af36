"""Elliptic curves in Weierstrass form over Q or a number field.

Curves use the long model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 and
coefficients are always listed in the order [a1, a3, a2, a4, a6].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .arith import (
    as_fraction,
    divisors,
    factor_int,
    fraction_str,
    is_probable_prime,
    legendre_symbol,
    prime_stream,
    rational_sqrt,
)
from .numfield import (
    QQ,
    AnyField,
    FieldElement,
    IncompleteRootSearch,
    NumberField,
    RationalField,
    element_from_json,
    element_to_json,
    field_from_json,
    nf_sqrt,
    rationalize,
    roots_in_field,
)
from .poly import Poly, primitive, squarefree_part_poly

MAZUR_BOUND = 12


def _norm(v: Any) -> Any:
    """Integral Fractions become ints so polynomial arithmetic stays in Z."""
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def _key(v: Any) -> tuple:
    if isinstance(v, FieldElement):
        return v.sort_key()
    return (as_fraction(v),)


def _sqrt(K: AnyField, v: Any) -> Any:
    if isinstance(K, RationalField):
        return rational_sqrt(v)
    return nf_sqrt(K(v))


class WeierstrassCurve:
    """Long Weierstrass model; singular models are allowed and flagged."""

    def __init__(self, coeffs: Sequence[Any], field: AnyField = QQ):
        if len(coeffs) != 5:
            raise ValueError("need coefficients [a1, a3, a2, a4, a6]")
        self.field = field
        a1, a3, a2, a4, a6 = (field(v) for v in coeffs)
        self.a1, self.a3, self.a2, self.a4, self.a6 = a1, a3, a2, a4, a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = a1 * a3 + 2 * a4
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        self.c4 = b2 * b2 - 24 * b4
        self.discriminant = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        self.singular = self.discriminant == 0
        self._psi: dict[int, Poly] = {}

    @property
    def coefficients(self) -> tuple:
        return (self.a1, self.a3, self.a2, self.a4, self.a6)

    @property
    def j_invariant(self) -> Any:
        if self.singular:
            raise ZeroDivisionError("singular curve has no j-invariant")
        return self.c4**3 / self.discriminant

    def is_rational(self) -> bool:
        return isinstance(self.field, RationalField)

    def base_change(self, K: NumberField, embed=None) -> "WeierstrassCurve":
        embed = embed or K
        return WeierstrassCurve([embed(v) for v in self.coefficients], K)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeierstrassCurve)
            and self.field == other.field
            and self.coefficients == other.coefficients
        )

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"WeierstrassCurve({list(map(str, self.coefficients))}, {self.field!r})"

    # points ----------------------------------------------------------------

    @property
    def identity(self) -> "CurvePoint":
        return CurvePoint(self, None, None)

    def point(self, x: Any, y: Any) -> "CurvePoint":
        P = CurvePoint(self, self.field(x), self.field(y))
        if not self.contains(P.x, P.y):
            raise ValueError(f"({x}, {y}) is not on the curve")
        return P

    def contains(self, x: Any, y: Any) -> bool:
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x**3 + self.a2 * x * x + self.a4 * x + self.a6
        return lhs == rhs

    def two_torsion_cubic(self) -> Poly:
        """4x^3 + b2 x^2 + 2 b4 x + b6, which equals (2y + a1 x + a3)^2 on E."""
        return Poly([_norm(v) for v in (self.b6, 2 * self.b4, self.b2, self.field(4))])

    def lift_x(self, x: Any) -> list["CurvePoint"]:
        """All points of E(K) with the given x-coordinate."""
        x = self.field(x)
        disc = self.two_torsion_cubic()(x)
        s = _sqrt(self.field, disc)
        if s is None:
            return []
        lin = self.a1 * x + self.a3
        ys = {(s - lin) / 2, (-s - lin) / 2}
        return sorted((CurvePoint(self, x, y) for y in ys), key=lambda P: P.sort_key())

    # division polynomials --------------------------------------------------

    def _f(self, n: int) -> Poly:
        """psi_n for odd n, psi_n / psi_2 for even n (a polynomial in x)."""
        if n in self._psi:
            return self._psi[n]
        b2, b4, b6, b8 = (_norm(v) for v in (self.b2, self.b4, self.b6, self.b8))
        if n == 0:
            out = Poly()
        elif n in (1, 2):
            out = Poly((_norm(self.field(1)),))
        elif n == 3:
            out = Poly((b8, 3 * b6, 3 * b4, b2, 3))
        elif n == 4:
            out = Poly((b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2))
        else:
            F2 = self.two_torsion_cubic() ** 2
            m = n // 2
            if n % 2:
                a = self._f(m + 2) * self._f(m) ** 3
                c = self._f(m - 1) * self._f(m + 1) ** 3
                out = F2 * a - c if m % 2 == 0 else a - F2 * c
            else:
                out = self._f(m) * (
                    self._f(m + 2) * self._f(m - 1) ** 2 - self._f(m - 2) * self._f(m + 1) ** 2
                )
        self._psi[n] = out
        return out


def curve_create(coeffs: Sequence[Any], field: AnyField = QQ) -> WeierstrassCurve:
    return WeierstrassCurve(coeffs, field)


@dataclass(frozen=True)
class ShortABCurve:
    """y^2 = x^3 + a x^2 + b x over Q."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if self.b == 0 or self.a * self.a - 4 * self.b == 0:
            raise ValueError(f"singular model y^2 = x^3 + {self.a}x^2 + {self.b}x")

    def to_weierstrass(self) -> WeierstrassCurve:
        return WeierstrassCurve([0, 0, self.a, self.b, 0])

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def to_json(self) -> dict:
        return {"a": fraction_str(self.a), "b": fraction_str(self.b)}

    def __str__(self) -> str:
        return f"y^2 = x^3 + ({fraction_str(self.a)})x^2 + ({fraction_str(self.b)})x"


def quadratic_twist(E: ShortABCurve, d: int) -> ShortABCurve:
    if d == 0:
        raise ValueError("twist by 0")
    return ShortABCurve(E.a * d, E.b * d * d)


class CurvePoint:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: WeierstrassCurve, x: Any, y: Any):
        self.curve, self.x, self.y = curve, x, y

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        return hash((self.x, self.y))

    def __neg__(self) -> "CurvePoint":
        if self.is_identity:
            return self
        E = self.curve
        return CurvePoint(E, self.x, -self.y - E.a1 * self.x - E.a3)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        return group_law(self, other)

    def __sub__(self, other: "CurvePoint") -> "CurvePoint":
        return group_law(self, -other)

    def __mul__(self, n: int) -> "CurvePoint":
        return scalar_multiple(self, n)

    __rmul__ = __mul__

    def sort_key(self) -> tuple:
        if self.is_identity:
            return ()
        return (_key(self.x), _key(self.y))

    def __repr__(self) -> str:
        return "O" if self.is_identity else f"({self.x}, {self.y})"

    def to_json(self) -> Any:
        if self.is_identity:
            return "O"
        return [element_to_json(self.x), element_to_json(self.y)]


def _check_on_curve(P: CurvePoint) -> None:
    if not P.is_identity and not P.curve.contains(P.x, P.y):
        raise ValueError(f"{P} is not on the curve")


def group_law(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord and tangent addition on the long model."""
    if P.curve != Q.curve:
        raise ValueError("points on different curves")
    _check_on_curve(P)
    _check_on_curve(Q)
    return _add(P, Q)


def _add(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    E = P.curve
    if P.x == Q.x:
        if P.y + Q.y + E.a1 * Q.x + E.a3 == 0:
            return E.identity
        lam = (3 * P.x * P.x + 2 * E.a2 * P.x + E.a4 - E.a1 * P.y) / (2 * P.y + E.a1 * P.x + E.a3)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    nu = P.y - lam * P.x
    x3 = lam * lam + E.a1 * lam - E.a2 - P.x - Q.x
    y3 = -(lam + E.a1) * x3 - nu - E.a3
    return CurvePoint(E, x3, y3)


def scalar_multiple(P: CurvePoint, n: int) -> CurvePoint:
    _check_on_curve(P)
    if n < 0:
        P, n = -P, -n
    result, base = P.curve.identity, P
    while n:
        if n & 1:
            result = _add(result, base)
        base = _add(base, base)
        n >>= 1
    return result


def point_order(P: CurvePoint, bound: int = MAZUR_BOUND) -> int | None:
    """Order of P if it is at most ``bound``, otherwise None."""
    _check_on_curve(P)
    Q = P
    for k in range(1, bound + 1):
        if Q.is_identity:
            return k
        Q = _add(Q, P)
    return None


def _order_dividing(P: CurvePoint, n: int) -> int:
    """Exact order of P, known to divide n."""
    order = n
    for p in factor_int(n):
        while order % p == 0 and scalar_multiple(P, order // p).is_identity:
            order //= p
    return order


# ---------------------------------------------------------------------------
# division polynomials and torsion loci


def division_polynomial(E: WeierstrassCurve, n: int) -> Poly:
    """x-only division polynomial.

    Odd n gives psi_n. Even n gives psi_n * psi_2, so n = 2 returns
    psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6; every root is the x-coordinate of
    a nonzero n-torsion point.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2:
        return E._f(n)
    return E._f(n) * E.two_torsion_cubic()


def _clean(f: Poly, K: AnyField) -> Poly:
    f = rationalize(f)
    if f.is_rational():
        g = primitive(f)
        from .polyfactor import good_primes

        if not good_primes(g, 1, max_prime=400):
            g = squarefree_part_poly(g)
        return g
    return f.monic()


def torsion_locus(E: WeierstrassCurve, n: int) -> Poly:
    """Squarefree polynomial whose roots are x(P) for P != O with nP = O."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n % 2:
        f = E._f(n)
    else:
        f = E._f(n) * E.two_torsion_cubic()
    return _clean(f, E.field)


# ---------------------------------------------------------------------------
# torsion subgroups


@dataclass
class TorsionGroup:
    invariants: tuple[int, int]
    generators: list[CurvePoint]
    points: list[CurvePoint] = field(default_factory=list, repr=False)
    status: str = "complete"
    exponent_bound: int | None = None

    @property
    def exponent(self) -> int:
        return self.invariants[1]

    @property
    def order(self) -> int:
        return self.invariants[0] * self.invariants[1]

    def structure(self) -> str:
        m, n = self.invariants
        if n == 1:
            return "0"
        return f"Z/{n}" if m == 1 else f"Z/{m} x Z/{n}"

    def to_json(self) -> dict:
        return {
            "invariants": list(self.invariants),
            "structure": self.structure(),
            "generators": [P.to_json() for P in self.generators],
            "status": self.status,
        }


def _primary_points(E: WeierstrassCurve, q: int) -> list[CurvePoint]:
    """All P in E(K) with qP = O, including O."""
    pts = [E.identity]
    for x in roots_in_field(torsion_locus(E, q), E.field):
        pts += E.lift_x(x)
    return [P for P in pts if scalar_multiple(P, q).is_identity]


def _primary_structure(pts: list[CurvePoint], ell: int, e: int) -> tuple[int, int, list[CurvePoint]]:
    """Structure Z/ell^a + Z/ell^b (a <= b) of the ell-primary points, with generators."""
    total = len(pts)
    a_plus_b = round(math.log(total, ell)) if total > 1 else 0
    if ell**a_plus_b != total:
        raise ArithmeticError(f"{total} points do not form an {ell}-group")
    orders = {P: _order_dividing(P, ell**e) for P in pts}
    b_exp = max((round(math.log(o, ell)) for o in orders.values()), default=0)
    a_exp = a_plus_b - b_exp
    pts_sorted = sorted(pts, key=lambda P: P.sort_key())
    gens: list[CurvePoint] = []
    if b_exp:
        P = next(Q for Q in pts_sorted if orders[Q] == ell**b_exp)
        gens.append(P)
        if a_exp:
            sub = {scalar_multiple(P, k * ell ** (b_exp - 1)) for k in range(ell)}
            Q = next(
                R
                for R in pts_sorted
                if orders[R] == ell**a_exp and scalar_multiple(R, ell ** (a_exp - 1)) not in sub
            )
            gens.append(Q)
    return ell**a_exp, ell**b_exp, gens


def _assemble(E: WeierstrassCurve, bound: int) -> TorsionGroup:
    m = n = 1
    big = E.identity
    small = E.identity
    points = [E.identity]
    status = "complete"
    for ell, e in sorted(factor_int(bound).items()):
        try:
            pts = _primary_points(E, ell**e)
        except IncompleteRootSearch:
            status = "partial"
            continue
        a, b, gens = _primary_structure(pts, ell, e)
        m, n = m * a, n * b
        if gens:
            big = _add(big, gens[0])
        if len(gens) > 1:
            small = _add(small, gens[1])
        points = [_add(P, Q) for P in points for Q in pts]
    generators = [small, big] if m > 1 else [P for P in (big,) if not P.is_identity]
    points.sort(key=lambda P: P.sort_key())
    return TorsionGroup((m, n), generators, points, status, bound)


def count_points_mod_p(E: WeierstrassCurve, p: int) -> int:
    """#E(F_p) for an odd prime of good reduction."""
    if p < 3 or not is_probable_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    coeffs = []
    for v in E.coefficients:
        v = E.field(v) if isinstance(E.field, RationalField) else v
        if isinstance(v, FieldElement):
            raise ValueError("count_points_mod_p needs a curve over Q")
        if v.denominator % p == 0:
            raise ValueError(f"model is not {p}-integral")
        coeffs.append(v.numerator * pow(v.denominator, -1, p) % p)
    return _count_mod_p(coeffs, p)


def _count_mod_p(coeffs: Sequence[int], p: int) -> int:
    a1, a3, a2, a4, a6 = coeffs
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (a1 * a3 + 2 * a4) % p
    b6 = (a3 * a3 + 4 * a6) % p
    b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4) % p
    disc = (-b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6) % p
    if disc == 0:
        raise ValueError(f"bad reduction at {p}")
    total = 1
    for x in range(p):
        d = (4 * x**3 + b2 * x * x + 2 * b4 * x + b6) % p
        total += 1 if d == 0 else 1 + legendre_symbol(d, p)
    return total


def _good_odd_primes(E: WeierstrassCurve, count: int) -> list[int]:
    dens = 1
    for v in E.coefficients:
        dens *= as_fraction(v).denominator
    disc = as_fraction(E.discriminant)
    out = []
    for p in prime_stream(10_000)[1:]:
        if dens % p and disc.numerator % p:
            out.append(p)
            if len(out) == count:
                break
    return out


def torsion_order_bound_Q(E: WeierstrassCurve, primes: int = 4) -> int:
    """gcd of #E(F_p) over the first few good odd primes."""
    return math.gcd(*[count_points_mod_p(E, p) for p in _good_odd_primes(E, primes)])


def torsion_subgroup_Q(E: WeierstrassCurve) -> TorsionGroup:
    if not isinstance(E.field, RationalField):
        raise ValueError("curve must be defined over Q")
    if E.singular:
        raise ValueError("singular curve")
    return _assemble(E, torsion_order_bound_Q(E))


def split_prime_bound(E: WeierstrassCurve, primes: int = 4, limit: int = 5000) -> int:
    """Order bound for E(K)_tors from residue fields F_p at split primes.

    Uses odd primes p unramified in K with a degree-one prime over p of good
    reduction; torsion injects into E(F_p) there.
    """
    K = E.field
    if isinstance(K, RationalField):
        return torsion_order_bound_Q(E, primes)
    g = K.poly
    g_disc = _poly_discriminant(g)
    counts = []
    for p in prime_stream(limit)[1:]:
        den = math.lcm(*(v.denominator for v in g.c))
        if g_disc.numerator % p == 0 or den % p == 0:
            continue
        coeff_dens = [math.lcm(*(c.denominator for c in v.c)) for v in E.coefficients]
        if any(d % p == 0 for d in coeff_dens):
            continue
        gp = [int(v.numerator * pow(v.denominator, -1, p)) % p for v in g.c]
        for r in range(p):
            if sum(c * pow(r, i, p) for i, c in enumerate(gp)) % p:
                continue
            red = []
            for v in E.coefficients:
                red.append(
                    sum(c.numerator * pow(c.denominator, -1, p) * pow(r, i, p) for i, c in enumerate(v.c)) % p
                )
            try:
                counts.append(_count_mod_p(red, p))
            except ValueError:
                continue
            break
        if len(counts) == primes:
            break
    if not counts:
        raise ArithmeticError("no split primes of good reduction found")
    return math.gcd(*counts)


def _poly_discriminant(g: Poly) -> Fraction:
    from .numfield import NumberField as _NF

    # disc(g) up to sign = N(g'(theta))
    K = _NF(g, check=False)
    return K.from_poly(g.derivative()).norm()


def torsion_subgroup_K(E: WeierstrassCurve, exponent_bound: int | None = None) -> TorsionGroup:
    """Torsion of exponent dividing ``exponent_bound`` (all of it if the bound is valid).

    Without a bound, the split-prime order bound is used.
    """
    if E.singular:
        raise ValueError("singular curve")
    bound = exponent_bound or split_prime_bound(E)
    return _assemble(E, bound)


# ---------------------------------------------------------------------------
# halving


def full_two_torsion_roots(E: WeierstrassCurve) -> list[Any]:
    """Roots e_i of the completed-square cubic x^3 + b2/4 x^2 + b4/2 x + b6/4."""
    roots = roots_in_field(E.two_torsion_cubic(), E.field)
    if len(roots) != 3:
        raise ValueError("full 2-torsion is not defined over the field")
    return roots


def halving_test(E: WeierstrassCurve, P: CurvePoint) -> bool:
    """True iff P lies in 2E(K)."""
    e = full_two_torsion_roots(E)
    _check_on_curve(P)
    if P.is_identity:
        return True
    K = E.field
    vals = []
    for i in range(3):
        d = P.x - e[i]
        if d == 0:
            j, k = [t for t in range(3) if t != i]
            d = (e[i] - e[j]) * (e[i] - e[k])
        vals.append(d)
    return all(_sqrt(K, v) is not None for v in vals)


def halve_point(P: CurvePoint) -> CurvePoint | None:
    """Some Q with 2Q = P, found through the 2-division polynomial x(2Q) = x(P)."""
    E = P.curve
    if P.is_identity:
        return P
    # x(2Q) = x(P)  <=>  f4-type relation: x^4 - b4 x^2 - 2 b6 x - b8 = x(P) * psi2^2
    b2, b4, b6, b8 = E.b2, E.b4, E.b6, E.b8
    xP = P.x
    num = Poly([-b8, -2 * b6, -b4, E.field(0), E.field(1)])
    rel = num - E.two_torsion_cubic() * xP
    if isinstance(E.field, RationalField):
        rel = Poly([as_fraction(v) for v in rel.c])
    for x in roots_in_field(rel, E.field):
        for Q in E.lift_x(x):
            if scalar_multiple(Q, 2) == P:
                return Q
    return None


# ---------------------------------------------------------------------------
# serialization


def curve_to_json(E: WeierstrassCurve) -> dict:
    return {
        "coefficients": [element_to_json(v) for v in E.coefficients],
        "field": E.field.to_json(),
    }


def curve_from_json(data: dict) -> WeierstrassCurve:
    K = field_from_json(data["field"])
    return WeierstrassCurve([element_from_json(K, v) for v in data["coefficients"]], K)


def point_from_json(E: WeierstrassCurve, data: Any) -> CurvePoint:
    if data == "O":
        return E.identity
    return E.point(element_from_json(E.field, data[0]), element_from_json(E.field, data[1]))
