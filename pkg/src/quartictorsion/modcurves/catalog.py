"""The eight elliptic modular curves X1(m, n) and their base fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from ..ecurve import ShortABCurve, WeierstrassCurve, curve_create
from ..numfield import QQ, AnyField, NumberField, nf_create
from ..poly import Poly
from .genus import ELLIPTIC_LABELS, cusp_count


@lru_cache(maxsize=None)
def gaussian_field() -> NumberField:
    return nf_create(Poly((1, 0, 1)), "Q(i)")


@lru_cache(maxsize=None)
def eisenstein_field() -> NumberField:
    return nf_create(Poly((3, 0, 1)), "Q(sqrt(-3))")


BASE_FIELDS = {"Q": lambda: QQ, "Q(i)": gaussian_field, "Q(sqrt(-3))": eisenstein_field}


@dataclass(frozen=True)
class ModularCurveRecord:
    label: tuple[int, int]
    coefficients: tuple[int, int, int, int, int]
    tag: str | None
    base_field: str
    torsion: tuple[int, int]
    all_cusps: bool
    cm_roots_of_unity: int | None = None
    short_model: tuple[int, int] | None = None
    notes: str = ""

    @property
    def name(self) -> str:
        m, n = self.label
        return f"X1_{n}" if m == 1 else f"X1_{m}_{n}"

    def curve(self) -> WeierstrassCurve:
        return curve_create(self.coefficients)

    def short(self) -> ShortABCurve:
        if self.short_model is None:
            raise ValueError(f"{self.name} has no stored y^2 = x^3 + ax^2 + bx model")
        return ShortABCurve(*self.short_model)

    def field(self) -> AnyField:
        return BASE_FIELDS[self.base_field]()

    def cusp_total(self) -> int:
        return cusp_count(*self.label)

    def to_json(self) -> dict:
        return {
            "label": list(self.label),
            "name": self.name,
            "coefficients": [str(c) for c in self.coefficients],
            "tag": self.tag,
            "base_field": self.base_field,
            "torsion": list(self.torsion),
            "all_cusps": self.all_cusps,
            "cm_roots_of_unity": self.cm_roots_of_unity,
            "short_model": None if self.short_model is None else [str(v) for v in self.short_model],
            "cusps_over_C": self.cusp_total(),
            "notes": self.notes,
        }


# coefficients in the order [a1, a3, a2, a4, a6]
CATALOG: dict[tuple[int, int], ModularCurveRecord] = {
    r.label: r
    for r in (
        ModularCurveRecord((1, 11), (0, -1, -1, 0, 0), "11A3", "Q", (1, 5), True),
        ModularCurveRecord((1, 14), (0, 0, -11, 32, 0), None, "Q", (1, 6), True, short_model=(-11, 32),
                           notes="short model y^2 = x^3 - 11x^2 + 32x"),
        ModularCurveRecord((1, 15), (0, 0, -7, 16, 0), None, "Q", (1, 4), True, short_model=(-7, 16),
                           notes="short model y^2 = x^3 - 7x^2 + 16x"),
        ModularCurveRecord((2, 10), (0, 0, 1, -1, 0), "20A2", "Q", (1, 6), True, short_model=(1, -1)),
        ModularCurveRecord((2, 12), (0, 0, -1, 1, 0), "24A4", "Q", (1, 4), True, short_model=(-1, 1)),
        ModularCurveRecord((3, 9), (0, 1, 0, 0, 0), "27A3", "Q(sqrt(-3))", (3, 3), True, 6),
        ModularCurveRecord((4, 8), (0, 0, 0, -1, 0), "32A2", "Q(i)", (2, 4), True, 4, short_model=(0, -1)),
        ModularCurveRecord((6, 6), (0, 0, 0, 0, 1), "36A1", "Q(sqrt(-3))", (2, 6), True, 6),
    )
}

assert tuple(CATALOG) == ELLIPTIC_LABELS


def parse_label(label) -> tuple[int, int]:
    """Accepts (m, n), 'X1_11', 'X1_2_10', '2x10', '11' and similar."""
    if isinstance(label, tuple):
        return label
    s = str(label).strip().upper().replace("X1_", "").replace("X1(", "").rstrip(")")
    for sep in ("_", "X", ",", " "):
        if sep in s:
            m, n = s.split(sep, 1)
            return int(m), int(n)
    return 1, int(s)


def catalog_get(label) -> ModularCurveRecord:
    key = parse_label(label)
    if key not in CATALOG:
        raise KeyError(f"unknown modular curve label {label!r}")
    return CATALOG[key]


@dataclass(frozen=True)
class QuadraticPair:
    torsion: tuple[int, int]
    field_discriminant: int
    curve_count: int


# known exceptional pairs over quadratic fields (reference data, not recomputed)
QUADRATIC_EXCEPTIONAL_PAIRS = (
    QuadraticPair((1, 14), -7, 2),
    QuadraticPair((1, 15), 5, 1),
    QuadraticPair((1, 15), -15, 1),
)
