"""Elliptic modular curves X1(m, n), their families, CM bounds and evidence pipelines."""

from .cache import CACHE_ENV, CertificateCache, cache_key, checksum, default_cache_path
from .catalog import (
    CATALOG,
    QUADRATIC_EXCEPTIONAL_PAIRS,
    ModularCurveRecord,
    QuadraticPair,
    catalog_get,
    eisenstein_field,
    gaussian_field,
    parse_label,
)
from .evidence import (
    Check,
    EvidenceReport,
    build_exceptional_curve_2x10,
    exceptional_2x10_evidence,
    no_exceptional_evidence,
)
from .families import (
    FAMILIES,
    ConditionCurve,
    FamilySpec,
    PoleError,
    RationalFunction,
    QuadraticFunctionField,
    SingularParameter,
    Specialization,
    cusp_consistency,
    designated_point,
    extra3_condition,
    family_condition_curve,
    get_family,
    nine_torsion_order,
    point_to_parameter,
    specialize_family,
)
from .genus import ELLIPTIC_LABELS, CurveInvariants, cusp_count, genus, genus_class, modular_invariants
from .search import (
    SearchEntry,
    SearchReport,
    cm_exponent_bound,
    cm_prime_bound,
    search_exceptional_primes,
)

__all__ = [name for name in dir() if not name.startswith("_")]
