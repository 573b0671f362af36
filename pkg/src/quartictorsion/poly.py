"""Dense univariate polynomials with coefficients in Z, Q or a number field.

Coefficients are stored lowest degree first with trailing zeros trimmed.
Any coefficient type supporting ``+ - * /`` and comparison with ``0`` works;
in practice that is ``int``, :class:`fractions.Fraction` and
:class:`quartictorsion.numfield.FieldElement`.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable, Sequence

from .arith import as_fraction, fraction_str


def _trim(coeffs: Sequence[Any]) -> tuple:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        self.c = _trim(list(coeffs))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, a: Any) -> "Poly":
        return cls((a,))

    @classmethod
    def from_roots(cls, roots: Iterable[Any]) -> "Poly":
        out = cls((1,))
        for r in roots:
            out = out * cls((-r, 1))
        return out

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> Any:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self) -> bool:
        return bool(self.c)

    def __len__(self) -> int:
        return len(self.c)

    def __getitem__(self, i: int) -> Any:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __iter__(self):
        return iter(self.c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __add__(self, other: Any) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-v for v in self.c])

    def __sub__(self, other: Any) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other: Any) -> "Poly":
        return Poly.const(other) - self

    def __mul__(self, other: Any) -> "Poly":
        if not isinstance(other, Poly):
            if other == 0:
                return Poly()
            return Poly([v * other for v in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u == 0:
                continue
            for j, v in enumerate(b):
                out[i + j] = out[i + j] + u * v
        return Poly(out)

    def __rmul__(self, other: Any) -> "Poly":
        return self * other

    def __pow__(self, e: int) -> "Poly":
        result, base = Poly((1,)), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = other.degree
        inv = _inverse(other.lc)
        q = [0] * max(len(r) - db, 0)
        for i in range(len(r) - 1 - db, -1, -1):
            coef = r[i + db] * inv
            if coef == 0:
                continue
            q[i] = coef
            for j, v in enumerate(other.c):
                r[i + j] = r[i + j] - coef * v
        return Poly(q), Poly(r[:db] if db > 0 else [])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x: Any) -> Any:
        acc: Any = 0
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def derivative(self) -> "Poly":
        return Poly([i * v for i, v in enumerate(self.c)][1:])

    def monic(self) -> "Poly":
        return self * _inverse(self.lc)

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for v in reversed(self.c):
            acc = acc * inner + v
        return acc

    def shift(self, a: Any) -> "Poly":
        """p(x + a)."""
        return self.compose(Poly((a, 1)))

    def map(self, f) -> "Poly":
        return Poly([f(v) for v in self.c])

    def is_rational(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.c)

    def __repr__(self) -> str:
        return f"Poly({self.to_str()})"

    def to_str(self, var: str = "x") -> str:
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            v = self.c[i]
            if v == 0:
                continue
            if not isinstance(v, (int, Fraction)) and getattr(v, "is_rational", lambda: False)():
                v = v.c[0]
            s = fraction_str(v) if isinstance(v, (int, Fraction)) else f"({v})"
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mon and s == "1":
                s = ""
            elif mon and s == "-1":
                s = "-"
            terms.append(f"{s}*{mon}" if s not in ("", "-") and mon else f"{s}{mon}")
        return " + ".join(terms).replace("+ -", "- ")


def _inverse(a: Any) -> Any:
    if isinstance(a, int):
        return Fraction(1, a)
    return 1 / a


# ---------------------------------------------------------------------------
# Q[x] helpers


def content(f: Poly) -> Fraction:
    """Positive rational c with f/c primitive integral (0 for f = 0)."""
    if f.is_zero():
        return Fraction(0)
    fr = [as_fraction(v) for v in f.c]
    den = reduce(lambda u, v: u * v // math.gcd(u, v), (v.denominator for v in fr), 1)
    nums = [int(v * den) for v in fr]
    g = reduce(math.gcd, nums, 0)
    return Fraction(g, den)


def primitive(f: Poly) -> Poly:
    """Primitive integral associate of f with positive leading coefficient."""
    if f.is_zero():
        return f
    c = content(f)
    if as_fraction(f.lc) < 0:
        c = -c
    return Poly([int(as_fraction(v) / c) for v in f.c])


def rat_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over Q via primitive pseudo-remainder sequences."""
    a, b = primitive(f), primitive(g)
    if a.is_zero():
        return b.monic() if b else b
    while b:
        a, b = b, _prem(a, b)
        b = primitive(b)
    return Poly([Fraction(v) for v in a.c]).monic()


def _prem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder of integer polynomials."""
    r = list(a.c)
    db, lb = b.degree, b.lc
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        lr = r[-1]
        r = [v * lb for v in r]
        for j, v in enumerate(b.c):
            r[k + j] -= lr * v
        r = list(_trim(r))
    return Poly(r)


def field_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd by plain Euclid (any coefficient field)."""
    a, b = f, g
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm over Q: f = unit * prod s_i^i with s_i squarefree coprime.

    Returned factors are primitive integral; trivial factors are dropped.
    """
    if f.degree < 1:
        return []
    out = []
    fm = Poly([Fraction(v) for v in f.c]).monic()
    df = fm.derivative()
    a0 = rat_gcd(fm, df)
    b = fm.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = rat_gcd(b, d) if d else b.monic()
        b = b.exact_div(a)
        c = d.exact_div(a) if d else Poly()
        d = c - b.derivative()
        if a.degree > 0:
            out.append((primitive(a), i))
        i += 1
    return out


def squarefree_part_poly(f: Poly) -> Poly:
    return primitive(reduce(lambda u, v: u * v, (s for s, _ in squarefree_decomposition(f)), Poly((1,))))


def lagrange_interpolate(points: Sequence[tuple[Any, Any]]) -> Poly:
    """Interpolating polynomial through (x_i, y_i) over Q (Newton form)."""
    xs = [as_fraction(x) for x, _ in points]
    coef = [as_fraction(y) for _, y in points]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Horner expansion of the Newton form
    out = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + out[:-1]
        out = [shifted[k] - xs[i] * out[k] for k in range(n)]
        out[0] += coef[i]
    return Poly(out)


def poly_to_json(f: Poly) -> list[str]:
    return [fraction_str(v) for v in f.c]


def poly_from_json(data: Sequence[str | int]) -> Poly:
    return Poly([as_fraction(v) for v in data])


_TERM = re.compile(r"([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*(x(?:\s*\^\s*(\d+))?)?")


def poly_from_string(text: str, var: str = "x") -> Poly:
    """Parse a polynomial such as ``x^4 - 2x^2 + 9`` or ``3*x^2 - 1/2*x``."""
    s = text.replace(var, "x").replace("**", "^").replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        if pos and m.group(1) is None:
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        e = 0 if m.group(3) is None else int(m.group(4) or 1)
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = m.end()
    deg = max(coeffs)
    return Poly([coeffs.get(i, Fraction(0)) for i in range(deg + 1)])
