"""Descent via 2-isogeny for y^2 = x^3 + a x^2 + b x over Q.

``selmer_group(E)`` is computed from E's own homogeneous spaces
z^2 = b1 u^4 + a u^2 v^2 + (b/b1) v^4 and bounds E(Q)/psi(E'(Q)), where
psi: E' -> E is the dual of phi: E -> E' with kernel {O, (0,0)}. The other
Selmer group is ``selmer_group(isogenous_curve(E))``, and

    rank E(Q) <= dim S(E) + dim S(E') - 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .arith import (
    as_fraction,
    class_product,
    fraction_str,
    is_square_int,
    prime_divisors,
    squarefree_class,
    squarefree_divisors,
    squarefree_part,
    valuation,
)
from .ecurve import ShortABCurve, quadratic_twist

# refinement cap per chart; far above what any space met in practice needs
MAX_CLASSES = 200_000


class InternalConsistencyError(ArithmeticError):
    pass


def isogenous_curve(E: ShortABCurve) -> ShortABCurve:
    """E' : y^2 = x^3 - 2a x^2 + (a^2 - 4b) x."""
    return ShortABCurve(-2 * E.a, E.a * E.a - 4 * E.b)


def _integral(E: ShortABCurve) -> tuple[int, int]:
    if not E.is_integral():
        raise ValueError("descent needs an integral model")
    return int(E.a), int(E.b)


@dataclass(frozen=True)
class HomogeneousSpace:
    """z^2 = b1 u^4 + A u^2 v^2 + b2 v^4."""

    b1: int
    A: int
    b2: int

    def __call__(self, u: int, v: int) -> int:
        u2, v2 = u * u, v * v
        return self.b1 * u2 * u2 + self.A * u2 * v2 + self.b2 * v2 * v2

    def discriminant_factor(self) -> int:
        return 2 * self.b1 * self.b2 * (self.A * self.A - 4 * self.b1 * self.b2)

    def to_json(self) -> list[int]:
        return [self.b1, self.A, self.b2]


def homogeneous_spaces(E: ShortABCurve) -> list[HomogeneousSpace]:
    a, b = _integral(E)
    out = []
    for d in squarefree_divisors(b):
        for b1 in (d, -d):
            out.append(HomogeneousSpace(b1, a, b // b1))
    return sorted(out, key=lambda s: (abs(s.b1), s.b1 < 0))


def solvable_R(space: HomogeneousSpace) -> bool:
    b1, A, b2 = space.b1, space.A, space.b2
    return b1 > 0 or b2 > 0 or (A > 0 and A * A - 4 * b1 * b2 >= 0)


# ---------------------------------------------------------------------------
# p-adic solvability


@dataclass
class LocalResult:
    prime: int
    solvable: bool
    depth: int
    classes: int
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.solvable

    def to_json(self) -> dict:
        out = {
            "prime": self.prime,
            "solvable": self.solvable,
            "depth": self.depth,
            "classes": self.classes,
            "reason": self.reason,
        }
        if self.witness is not None:
            out["witness"] = [str(w) for w in self.witness]
        return out


def _vp(n: int, p: int) -> int:
    return valuation(n, p) if n else math.inf


def _is_padic_square(n: int, p: int) -> bool:
    """Whether the nonzero integer n is a square in Q_p."""
    v = valuation(n, p)
    if v % 2:
        return False
    u = n // p**v
    if p == 2:
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1


def _poly_eval(c: list[int], x: int) -> int:
    acc = 0
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _chart(c: list[int], p: int, start: int, budget: list[int]) -> tuple[bool, int, tuple | None, str]:
    """Decide whether g(x) is a square in Q_p for some x in start + p^k Z_p.

    ``start`` is (residue, k). Returns (found, max depth, witness, reason).
    """
    dc = [i * v for i, v in enumerate(c)][1:]
    margin = 3 if p == 2 else 1
    stack = [start]
    depth = start[1]
    while stack:
        x0, k = stack.pop()
        depth = max(depth, k)
        budget[0] += 1
        if budget[0] > MAX_CLASSES:
            raise ArithmeticError(f"local solvability search at {p} exceeded {MAX_CLASSES} classes")
        g0 = _poly_eval(c, x0)
        if g0 == 0:
            return True, depth, (x0, k), "root"
        vg = valuation(g0, p)
        vd = _vp(_poly_eval(dc, x0), p)
        if vg > 2 * vd:
            return True, depth, (x0, k), "hensel-root"
        if min(k + vd, 2 * k) >= vg + margin:
            if _is_padic_square(g0, p):
                return True, depth, (x0, k), "square-class"
            continue
        step = p**k
        stack.extend((x0 + r * step, k + 1) for r in range(p - 1, -1, -1))
    return False, depth, None, "exhausted"


def solvable_Qp(space: HomogeneousSpace, p: int) -> LocalResult:
    """Existence of a nontrivial Q_p point, with a transcript.

    Primitive (u : v) splits into v = 1, u in Z_p and u = 1, v in pZ_p.
    Residue classes x0 + p^k Z_p are refined until g is provably of constant
    square class on the class, or a Hensel root is visible.
    """
    b1, A, b2 = space.b1, space.A, space.b2
    budget = [0]
    g = [b2, 0, A, 0, b1]  # f(x, 1)
    found, depth, wit, why = _chart(g, p, (0, 0), budget)
    if found:
        return LocalResult(p, True, depth, budget[0], (wit[0], 1, wit[1]), why)
    h = [b1, 0, A, 0, b2]  # f(1, x), x in p Z_p
    found, d2, wit, why = _chart(h, p, (0, 1), budget)
    if found:
        return LocalResult(p, True, max(depth, d2), budget[0], (1, wit[0], wit[1]), why)
    return LocalResult(p, False, max(depth, d2), budget[0], None, "exhausted")


# ---------------------------------------------------------------------------
# square class groups


class SquareClassGroup:
    """Finite subgroup of Q*/Q*^2 given by its squarefree representatives."""

    def __init__(self, elements: Iterable[int]):
        elems = {squarefree_part(e) for e in elements} | {1}
        self.elements = frozenset(elems)
        self.basis = _f2_basis(sorted(self.elements, key=lambda e: (abs(e), e < 0)))

    @classmethod
    def generated_by(cls, gens: Iterable[int]) -> "SquareClassGroup":
        elems = {1}
        for g in gens:
            g = squarefree_part(g)
            elems |= {class_product(e, g) for e in elems}
        return cls(elems)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def is_subgroup(self) -> bool:
        return 1 in self.elements and all(
            class_product(x, y) in self.elements for x in self.elements for y in self.elements
        )

    def issubset(self, other: "SquareClassGroup") -> bool:
        return self.elements <= other.elements

    def __contains__(self, c: int) -> bool:
        return squarefree_part(c) in self.elements

    def __iter__(self) -> Iterator[int]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SquareClassGroup):
            return self.elements == other.elements
        if isinstance(other, (set, frozenset)):
            return self.elements == frozenset(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.elements)

    def sorted(self) -> list[int]:
        return sorted(self.elements, key=lambda e: (abs(e), e < 0))

    def __repr__(self) -> str:
        return "{" + ", ".join(map(str, self.sorted())) + "}"


def _f2_basis(elements: list[int]) -> list[int]:
    basis: list[int] = []
    span = {1}
    for e in elements:
        if e not in span:
            basis.append(e)
            span |= {class_product(s, e) for s in span}
    return basis


def local_primes(E: ShortABCurve) -> list[int]:
    a, b = _integral(E)
    return prime_divisors(2 * b * (a * a - 4 * b))


@dataclass
class SelmerComputation:
    group: SquareClassGroup
    transcripts: dict[int, list[dict]] = field(default_factory=dict)


def selmer_data(E: ShortABCurve) -> SelmerComputation:
    primes = local_primes(E)
    members = []
    transcripts: dict[int, list[dict]] = {}
    for space in homogeneous_spaces(E):
        log: list[dict] = []
        ok = solvable_R(space)
        log.append({"prime": "inf", "solvable": ok})
        if ok:
            for p in primes:
                res = solvable_Qp(space, p)
                log.append(res.to_json())
                if not res:
                    ok = False
                    break
        transcripts[space.b1] = log
        if ok:
            members.append(space.b1)
    group = SquareClassGroup(members)
    if set(members) != set(group.elements) or not group.is_subgroup():
        raise InternalConsistencyError(f"locally solvable classes {sorted(members)} are not a subgroup")
    return SelmerComputation(group, transcripts)


def selmer_group(E: ShortABCurve) -> SquareClassGroup:
    return selmer_data(E).group


# ---------------------------------------------------------------------------
# images of rational points


def alpha_image(E: ShortABCurve, search_bound: int = 10**4) -> SquareClassGroup:
    """Classes of x(P) for points found with x = b1 u^2 / v^2 inside the bound.

    Always includes alpha(O) = 1 and alpha((0,0)) = class of b.
    """
    a, b = _integral(E)
    found = {1, squarefree_class(b)}
    for space in homogeneous_spaces(E):
        b1 = space.b1
        if b1 in found:
            continue
        if _space_has_point(space, search_bound):
            found.add(b1)
    return SquareClassGroup.generated_by(found)


def _space_has_point(space: HomogeneousSpace, bound: int) -> bool:
    umax = math.isqrt(bound // abs(space.b1)) if abs(space.b1) <= bound else 0
    vmax = math.isqrt(bound)
    for v in range(1, vmax + 1):
        for u in range(1, umax + 1):
            if math.gcd(u, v) != 1:
                continue
            if is_square_int(space(u, v)):
                return True
    return False


# ---------------------------------------------------------------------------
# certificates


@dataclass
class RankCertificate:
    curve: ShortABCurve
    selmer_psi: SquareClassGroup
    selmer_phi: SquareClassGroup
    alpha: SquareClassGroup
    beta: SquareClassGroup
    transcripts: dict = field(default_factory=dict, repr=False)

    @property
    def dim_psi(self) -> int:
        return self.selmer_psi.dimension

    @property
    def dim_phi(self) -> int:
        return self.selmer_phi.dimension

    @property
    def bound(self) -> int:
        return self.dim_psi + self.dim_phi - 2

    @property
    def known_rank(self) -> int:
        """Lower bound from the points found: dim im(alpha) + dim im(beta) - 2."""
        return self.alpha.dimension + self.beta.dimension - 2

    @property
    def verdict(self) -> str:
        return "certified" if self.bound == 0 else "bound only"

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "isogenous": isogenous_curve(self.curve).to_json(),
            "selmer_psi": self.selmer_psi.sorted(),
            "selmer_phi": self.selmer_phi.sorted(),
            "selmer_psi_basis": self.selmer_psi.basis,
            "selmer_phi_basis": self.selmer_phi.basis,
            "dim_psi": self.dim_psi,
            "dim_phi": self.dim_phi,
            "rank_bound": self.bound,
            "known_rank_lower_bound": self.known_rank,
            "verdict": self.verdict,
            "transcripts": {k: {str(b1): t for b1, t in v.items()} for k, v in self.transcripts.items()},
        }


def rank_upper_bound(E: ShortABCurve, point_search: int = 100) -> RankCertificate:
    if E.b == 0 or E.a * E.a == 4 * E.b:
        raise ValueError("singular curve")
    Ep = isogenous_curve(E)
    s_psi = selmer_data(E)
    s_phi = selmer_data(Ep)
    al = alpha_image(E, point_search)
    be = alpha_image(Ep, point_search)
    if not (al.issubset(s_psi.group) and be.issubset(s_phi.group)):
        raise InternalConsistencyError("point images escape the Selmer groups")
    return RankCertificate(
        E, s_psi.group, s_phi.group, al, be, {"psi": s_psi.transcripts, "phi": s_phi.transcripts}
    )


@dataclass
class BiquadraticCertificate:
    curve: ShortABCurve
    twists: tuple[int, int, int, int]
    certificates: list[RankCertificate]

    @property
    def bound(self) -> int:
        return sum(c.bound for c in self.certificates)

    @property
    def verdict(self) -> str:
        return "certified" if all(c.verdict == "certified" for c in self.certificates) else "bound only"

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "twists": list(self.twists),
            "rank_bound": self.bound,
            "verdict": self.verdict,
            "certificates": [c.to_json() for c in self.certificates],
        }


def biquadratic_rank_bound(E: ShortABCurve, d1: int, d2: int) -> BiquadraticCertificate:
    """Rank bound over Q(sqrt d1, sqrt d2) as the sum over the four twists."""
    c1, c2 = squarefree_class(d1), squarefree_class(d2)
    c12 = class_product(c1, c2)
    if 1 in (c1, c2, c12):
        raise ValueError(f"Q(sqrt {d1}, sqrt {d2}) is not biquadratic")
    twists = (1, c1, c2, c12)
    certs = [rank_upper_bound(quadratic_twist(E, d)) for d in twists]
    return BiquadraticCertificate(E, twists, certs)
