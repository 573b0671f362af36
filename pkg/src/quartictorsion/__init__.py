"""Exact descent, torsion and modular-curve computations for elliptic curves."""

__version__ = "0.1.0"

from .descent import rank_upper_bound, selmer_group
from .ecurve import ShortABCurve, WeierstrassCurve, curve_create, torsion_subgroup_K, torsion_subgroup_Q
from .numfield import QQ, NumberField, nf_create

__all__ = [
    "QQ",
    "NumberField",
    "ShortABCurve",
    "WeierstrassCurve",
    "curve_create",
    "nf_create",
    "rank_upper_bound",
    "selmer_group",
    "torsion_subgroup_K",
    "torsion_subgroup_Q",
]
