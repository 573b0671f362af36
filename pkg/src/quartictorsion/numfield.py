"""Number fields Q[x]/(g) of degree at most 4 and their element arithmetic.

Elements are dense coefficient vectors in the power basis of the generator.
Root finding, square roots and splitting of polynomials over a field all go
through one norm-based routine (:func:`factor_over_field`): shift so the
norm down to Q is squarefree, factor that norm over Q with bounded
extraction, and recover the field factors as gcds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence, Union

from .arith import as_fraction, fraction_str, rational_sqrt, squarefree_class
from .poly import Poly, field_gcd, lagrange_interpolate, primitive, rat_gcd
from .polyfactor import extract_factors_bounded

MAX_DEGREE = 4


class ReducibleFieldPolynomial(ValueError):
    def __init__(self, g: Poly, factor: Poly):
        super().__init__(f"{g.to_str()} is reducible: factor {factor.to_str()}")
        self.factor = factor


class DegenerateTower(ValueError):
    pass


class IncompleteRootSearch(ArithmeticError):
    """No admissible shift found; the root list would not be complete."""


class RationalField:
    """Q, with the same interface as :class:`NumberField` (elements are Fractions)."""

    degree = 1
    poly = Poly((0, 1))

    def __call__(self, v: Any) -> Fraction:
        if isinstance(v, FieldElement):
            if not v.is_rational():
                raise ValueError(f"{v} is not rational")
            return v.c[0]
        return as_fraction(v)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def contains(self, v: Any) -> bool:
        return isinstance(v, (int, Fraction))

    def sqrt(self, v: Any) -> Fraction | None:
        return rational_sqrt(v)

    def roots(self, f: Poly) -> list[Fraction]:
        from .polyfactor import rational_roots

        return sorted(set(rational_roots(f)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("Q")

    def __repr__(self) -> str:
        return "QQ"

    def to_json(self) -> list[str]:
        return ["0", "1"]


QQ = RationalField()


class NumberField:
    """Q[theta]/(g(theta)) for monic irreducible g of degree 1..4."""

    def __init__(self, g: Poly, name: str | None = None, *, check: bool = True):
        g = Poly([as_fraction(v) for v in g.c])
        if g.degree < 1 or g.degree > MAX_DEGREE:
            raise ValueError(f"defining polynomial must have degree 1..{MAX_DEGREE}")
        if g.lc != 1:
            raise ValueError("defining polynomial must be monic")
        if check and g.degree > 1:
            ext = extract_factors_bounded(g, g.degree - 1)
            if ext.factors:
                raise ReducibleFieldPolynomial(g, ext.factors[0][0])
        self.poly = g
        self.degree = g.degree
        self.name = name or f"Q[x]/({g.to_str()})"
        n = self.degree
        # theta^k in the power basis for k < 2n - 1
        self._powers: list[tuple[Fraction, ...]] = []
        vec = [Fraction(0)] * n
        vec[0] = Fraction(1)
        for _ in range(2 * n - 1):
            self._powers.append(tuple(vec))
            top = vec[-1]
            vec = [Fraction(0)] + vec[:-1]
            if top:
                vec = [vec[i] - top * g.c[i] for i in range(n)]
        # optional tower data, set by compose_quadratic_tower
        self.base: NumberField | RationalField | None = None
        self.embedding: Callable[[Any], FieldElement] | None = None
        self.relative_sqrt: FieldElement | None = None

    # element construction -------------------------------------------------

    def __call__(self, v: Any) -> "FieldElement":
        if isinstance(v, FieldElement):
            if v.field is self:
                return v
            if v.field == self:
                return FieldElement(self, v.c)
            if v.is_rational():
                return self(v.c[0])
            raise ValueError("element belongs to a different field")
        if isinstance(v, (int, Fraction, str)):
            c = [Fraction(0)] * self.degree
            c[0] = as_fraction(v)
            return FieldElement(self, c)
        if isinstance(v, Poly):
            return self.from_poly(v)
        return FieldElement(self, [as_fraction(t) for t in v])

    def from_poly(self, p: Poly) -> "FieldElement":
        """Evaluate a rational polynomial at the generator."""
        n = self.degree
        c = [Fraction(0)] * n
        rem = p % self.poly if p.degree >= n else p
        for i, v in enumerate(rem.c):
            c[i] = as_fraction(v)
        return FieldElement(self, c)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self(-self.poly.c[0])
        c = [Fraction(0)] * self.degree
        c[1] = Fraction(1)
        return FieldElement(self, c)

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    def contains(self, v: Any) -> bool:
        return isinstance(v, (int, Fraction)) or (isinstance(v, FieldElement) and v.field == self)

    # queries ---------------------------------------------------------------

    def sqrt(self, v: Any) -> "FieldElement | None":
        return nf_sqrt(self(v))

    def roots(self, f: Poly) -> list["FieldElement"]:
        return roots_in_field(f, self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def __repr__(self) -> str:
        return f"NumberField({self.poly.to_str()})"

    def to_json(self) -> list[str]:
        return [fraction_str(v) for v in self.poly.c]


def _mul_vectors(K: NumberField, a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = K.degree
    prod = [Fraction(0)] * (2 * n - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                if v:
                    prod[i + j] += u * v
    out = list(prod[:n])
    for k in range(n, 2 * n - 1):
        if prod[k]:
            pk = K._powers[k]
            for i in range(n):
                out[i] += prod[k] * pk[i]
    return out


class FieldElement:
    __slots__ = ("field", "c")

    def __init__(self, field: NumberField, coeffs: Iterable[Fraction]):
        self.field = field
        self.c = tuple(coeffs)

    def _coerce(self, other: Any) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            return None
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other: Any) -> "FieldElement":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [u + v for u, v in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, [-u for u in self.c])

    def __sub__(self, other: Any) -> "FieldElement":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [u - v for u, v in zip(self.c, o.c)])

    def __rsub__(self, other: Any) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other: Any) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [u * other for u in self.c])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, _mul_vectors(self.field, self.c, o.c))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        K = self.field
        # extended Euclid of (element polynomial, g) over Q
        r0, r1 = K.poly, Poly(self.c)
        s0, s1 = Poly(), Poly((Fraction(1),))
        while r1.degree > 0:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r1.is_zero():
            raise ZeroDivisionError("element is not invertible (reducible modulus)")
        return K.from_poly(s1 * (Fraction(1) / as_fraction(r1.c[0])))

    def __truediv__(self, other: Any) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, [u / other for u in self.c])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "FieldElement":
        return self.field(other) * self.inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.c[0] == other and not any(self.c[1:])
        if isinstance(other, FieldElement):
            return self.field == other.field and self.c == other.c
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.c[0])
        return hash(self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_poly(self) -> Poly:
        return Poly(self.c)

    def matrix(self) -> list[list[Fraction]]:
        """Matrix of multiplication by self; column j is self*theta^j."""
        K = self.field
        cols = []
        basis = [Fraction(0)] * K.degree
        for j in range(K.degree):
            e = list(basis)
            e[j] = Fraction(1)
            cols.append(_mul_vectors(K, self.c, e))
        return [[cols[j][i] for j in range(K.degree)] for i in range(K.degree)]

    def norm(self) -> Fraction:
        return _det(self.matrix())

    def trace(self) -> Fraction:
        m = self.matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def charpoly(self) -> Poly:
        n = self.field.degree
        m = self.matrix()
        pts = []
        for t in range(n + 1):
            a = [[(Fraction(t) if i == j else Fraction(0)) - m[i][j] for j in range(n)] for i in range(n)]
            pts.append((t, _det(a)))
        return lagrange_interpolate(pts)

    def minpoly(self) -> Poly:
        cp = self.charpoly()
        for d in range(1, self.field.degree + 1):
            if self.field.degree % d:
                continue
            fac = extract_factors_bounded(cp, d)
            for g, _ in fac.factors:
                if g.degree == d and _eval_rational_poly(g, self).is_zero():
                    return g.monic()
        return cp

    def sort_key(self) -> tuple:
        return tuple(self.c)

    def __repr__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "a") -> str:
        return Poly(self.c).to_str(var)

    def to_json(self) -> list[str]:
        return [fraction_str(v) for v in self.c]


def _eval_rational_poly(p: Poly, x: Any) -> Any:
    acc: Any = x.field.zero if isinstance(x, FieldElement) else Fraction(0)
    for v in reversed(p.c):
        acc = acc * x + v
    return acc


def _det(m: list[list[Fraction]]) -> Fraction:
    a = [row[:] for row in m]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det


AnyField = Union[NumberField, RationalField]


def nf_create(g: Poly, name: str | None = None) -> NumberField:
    """Field with certified-irreducible defining polynomial g."""
    return NumberField(g, name)


# ---------------------------------------------------------------------------
# polynomials over a number field


def lift_poly(f: Poly, K: NumberField) -> Poly:
    """Coerce every coefficient of f into K."""
    return Poly([K(v) for v in f.c])


def norm_poly(H: Poly, K: NumberField) -> Poly:
    """N_{K/Q}(H) for H in K[T], by evaluation at integers and interpolation."""
    H = lift_poly(H, K)
    d = H.degree * K.degree
    pts = []
    for t in range(d + 1):
        pts.append((t, _eval_kpoly(H, Fraction(t)).norm()))
    return lagrange_interpolate(pts)


def _eval_kpoly(H: Poly, t: Any) -> FieldElement:
    acc = H.c[0].field.zero if H.c else None
    for v in reversed(H.c):
        acc = acc * t + v
    return acc


def _shift_kpoly(H: Poly, a: FieldElement) -> Poly:
    """H(T + a)."""
    return H.compose(Poly((a, a.field.one)))


def _is_squarefree_rational(N: Poly) -> bool:
    from .polyfactor import good_primes

    if good_primes(N, 1, max_prime=200):
        return True
    return rat_gcd(N, N.derivative()).degree == 0


def _shifts() -> Iterable[int]:
    yield 0
    k = 1
    while k <= 12:
        yield k
        yield -k
        k += 1


def factor_over_field(H: Poly, K: NumberField, max_degree: int) -> list[Poly]:
    """Monic irreducible factors of degree <= max_degree of H in K[T].

    H must be squarefree. Complete: raises :class:`IncompleteRootSearch`
    only if no shift in the trial range makes the norm squarefree.
    """
    H = lift_poly(H, K).monic()
    if H.degree < 1:
        return []
    n = K.degree
    theta = K.gen
    for c in _shifts():
        Hc = _shift_kpoly(H, theta * (-c)) if c else H
        N = norm_poly(Hc, K)
        if not _is_squarefree_rational(N):
            continue
        out = []
        fac = extract_factors_bounded(N, n * max_degree)
        for m, _ in fac.factors:
            if m.degree % n:
                continue
            G = field_gcd(Hc, lift_poly(m, K))
            if 1 <= G.degree <= max_degree:
                out.append(_shift_kpoly(G, theta * c) if c else G)
        out.sort(key=lambda q: (q.degree, [v.sort_key() for v in q.c]))
        return out
    raise IncompleteRootSearch(f"no squarefree norm shift for {H}")


def _squarefree_kpoly(H: Poly) -> Poly:
    g = field_gcd(H, H.derivative())
    return H if g.degree < 1 else H // g


def rationalize(f: Poly) -> Poly:
    """f with rational coefficients if every coefficient is a rational field element."""
    if all(isinstance(v, (int, Fraction)) or v.is_rational() for v in f.c):
        return Poly([v if isinstance(v, (int, Fraction)) else v.c[0] for v in f.c])
    return f


def roots_in_field(f: Poly, K: AnyField) -> list[Any]:
    """Distinct roots of f lying in K, sorted by coefficient vector."""
    if f.is_zero():
        raise ValueError("zero polynomial has every element as a root")
    if isinstance(K, RationalField):
        if not f.is_rational():
            f = Poly([QQ(v) for v in f.c])
        return K.roots(f)
    n = K.degree
    roots: list[FieldElement] = []
    f = rationalize(f)
    if f.is_rational():
        for h, _ in extract_factors_bounded(f, n).factors:
            if n % h.degree:
                continue
            if h.degree == 1:
                roots.append(K(Fraction(-h.c[0], h.c[1])))
            else:
                roots += [-G.c[0] for G in factor_over_field(h, K, 1)]
    else:
        H = _squarefree_kpoly(lift_poly(f, K))
        roots = [-G.c[0] for G in factor_over_field(H, K, 1)]
    return sorted(set(roots), key=lambda r: r.sort_key())


def nf_sqrt(gamma: Any) -> Any:
    """A square root of gamma in its field, or None if there is none."""
    if not isinstance(gamma, FieldElement):
        return rational_sqrt(gamma)
    K = gamma.field
    if gamma.is_zero():
        return K.zero
    if gamma.is_rational():
        r = rational_sqrt(gamma.c[0])
        if r is not None:
            return K(r)
    T2 = Poly((-gamma, K.zero, K.one))
    facs = factor_over_field(T2, K, 1)
    if not facs:
        return None
    return -facs[0].c[0]


def quadratic_split_over_quadratic(f: Poly, F: NumberField) -> tuple[Poly, Poly] | None:
    """Write a quartic f as lc(f) * q1 * q2 with monic quadratics over F."""
    if f.degree != 4:
        raise ValueError("need a quartic")
    facs = factor_over_field(lift_poly(f, F), F, 2)
    quads = [q for q in facs if q.degree == 2]
    if len(quads) != 2 or quads[0] * quads[1] != lift_poly(f, F).monic():
        return None
    return quads[0], quads[1]


# ---------------------------------------------------------------------------
# towers


@dataclass
class Tower:
    field: NumberField
    embed: Callable[[Any], FieldElement]
    sqrt_delta: FieldElement
    base_image: FieldElement


def compose_quadratic_tower(F: AnyField, delta: Any) -> Tower:
    """K = F(sqrt(delta)) as an absolute field with primitive element.

    ``base_image`` is the image of F's generator in K, ``sqrt_delta`` an
    element of K squaring to ``embed(delta)``.
    """
    if isinstance(F, RationalField):
        d = as_fraction(delta)
        if d == 0 or rational_sqrt(d) is not None:
            raise DegenerateTower(f"{d} is a square in Q")
        k = squarefree_class(d)
        K = nf_create(Poly((Fraction(-k), Fraction(0), Fraction(1))))
        r = rational_sqrt(d / k)
        K.base, K.relative_sqrt = F, K.gen * r
        return Tower(K, lambda a: K(QQ(a)), K.relative_sqrt, K.one)
    if F.degree * 2 > MAX_DEGREE:
        raise ValueError("tower would exceed degree 4")
    delta = F(delta)
    if nf_sqrt(delta) is not None:
        raise DegenerateTower(f"{delta} is a square in {F}")
    alpha = F.gen
    for c in _shifts():
        H = Poly((-delta + alpha * alpha * (c * c), alpha * (-2 * c), F.one))
        P = norm_poly(H, F)
        if extract_factors_bounded(P, P.degree // 2).factors:
            continue
        K = NumberField(P.monic(), check=False)
        theta = K.gen
        gF = lift_poly(F.poly, K)
        # (theta - c*Y)^2 - delta(Y) as a polynomial in Y over K
        dY = Poly([K(v) for v in delta.c])
        rel = Poly((theta * theta, theta * (-2 * c), K(c * c))) - dY
        G = field_gcd(gF, rel)
        if G.degree != 1:
            continue
        a_K = -G.c[0]

        def embed(a: Any, a_K=a_K) -> FieldElement:
            a = F(a)
            return _eval_rational_poly(Poly(a.c), a_K)

        s = theta - a_K * c
        if s * s != embed(delta):
            raise ArithmeticError("tower relation check failed")
        K.base, K.embedding, K.relative_sqrt = F, embed, s
        return Tower(K, embed, s, a_K)
    raise IncompleteRootSearch("no primitive element found")


def field_from_json(data: Sequence[str]) -> AnyField:
    g = Poly([as_fraction(v) for v in data])
    if g.degree == 1 and g.c[0] == 0:
        return QQ
    return nf_create(g)


def element_to_json(v: Any) -> Any:
    if isinstance(v, FieldElement):
        return v.to_json()
    return fraction_str(v)


def element_from_json(K: AnyField, data: Any) -> Any:
    if isinstance(K, RationalField):
        return as_fraction(data)
    return K([as_fraction(t) for t in data])


def primitive_rational(f: Poly) -> Poly:
    return primitive(f)
