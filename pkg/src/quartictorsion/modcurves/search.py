"""CM exponent bounds and the twist search for exceptional biquadratic pairs."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from ..arith import euler_phi, is_probable_prime, legendre_symbol, lcm_all, prime_stream
from ..descent import rank_upper_bound
from ..ecurve import ShortABCurve, quadratic_twist
from .cache import CertificateCache

# ---------------------------------------------------------------------------
# CM bounds


def cm_prime_bound(w: int, m: int) -> int:
    """Largest prime p not dividing m with phi(lcm(m, p)) <= 2w."""
    if w < 1 or m < 1:
        raise ValueError("w and m must be positive")
    best = 0
    # phi(lcm(m, p)) >= p - 1, so p <= 2w + 1
    for p in prime_stream(2 * w + 1):
        if m % p and euler_phi(lcm_all([m, p])) <= 2 * w:
            best = p
    return best


def cm_exponent_bound(w: int, m: int) -> int:
    """lcm of all e with m | e and phi(e) <= 2w."""
    if w < 1 or m < 1:
        raise ValueError("w and m must be positive")
    # phi(e) >= sqrt(e/2), so phi(e) <= 2w forces e <= 8w^2
    es = [e for e in range(m, 8 * w * w + 1, m) if euler_phi(e) <= 2 * w]
    return lcm_all(es) if es else m


# ---------------------------------------------------------------------------
# exceptional twist search


@dataclass(frozen=True)
class SearchTarget:
    order: int
    model: tuple[int, int]
    partner: int  # second twist is partner * p

    def conditions(self, p: int) -> dict[str, Any]:
        if self.order == 14:
            return {"p mod 8": p % 8, "required p mod 8": 3, "(p/7)": legendre_symbol(p, 7) if p != 7 else 0}
        return {
            "p mod 8": p % 8,
            "required p mod 8": 7,
            "p mod 3": p % 3,
            "required p mod 3": 2,
            "(p/5)": legendre_symbol(p, 5) if p != 5 else 0,
        }

    def qualifies(self, p: int) -> bool:
        if p < 3 or not is_probable_prime(p):
            return False
        if self.order == 14:
            return p % 8 == 3 and p != 7 and legendre_symbol(p, 7) == 1
        return p % 8 == 7 and p % 3 == 2 and p != 5 and legendre_symbol(p, 5) == -1

    def field_descriptor(self, p: int) -> dict[str, Any]:
        return {
            "type": "biquadratic",
            "generators": [self.partner, p],
            "description": f"Q(sqrt({self.partner}), sqrt({p}))",
        }


TARGETS = {14: SearchTarget(14, (-11, 32), -7), 15: SearchTarget(15, (-7, 16), -15)}


def _target(target: Any) -> SearchTarget:
    key = target
    if isinstance(target, str):
        key = int(target.upper().replace("Z/", "").replace("ZZ", "").strip())
    elif isinstance(target, tuple):
        key = target[0] * target[1]
    if key not in TARGETS:
        raise ValueError(f"search target must be Z/14 or Z/15, got {target!r}")
    return TARGETS[key]


@dataclass
class SearchEntry:
    prime: int
    transcript: dict
    certificates: list[dict]
    field: dict

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "congruences": self.transcript,
            "certificates": self.certificates,
            "field": self.field,
        }


@dataclass
class SearchReport:
    target: int
    limit: int
    entries: list[SearchEntry] = field(default_factory=list)
    discrepancies: list[dict] = field(default_factory=list)
    cache_stats: dict = field(default_factory=dict)

    @property
    def primes(self) -> list[int]:
        return [e.prime for e in self.entries]

    def to_json(self, full: bool = True) -> dict:
        entries = [e.to_json() for e in self.entries]
        if not full:
            for e in entries:
                for c in e["certificates"]:
                    c.pop("transcripts", None)
        return {
            "target": f"Z/{self.target}",
            "limit": self.limit,
            "primes": self.primes,
            "entries": entries,
            "discrepancies": self.discrepancies,
        }


def _certify_pair(args: tuple[tuple[int, int], int, int]) -> list[dict]:
    model, partner, p = args
    E = ShortABCurve(*model)
    return [rank_upper_bound(quadratic_twist(E, d)).to_json() for d in (p, partner * p)]


def search_exceptional_primes(
    target: Any, limit: int, cache: CertificateCache | None = None, workers: int = 1
) -> SearchReport:
    if limit < 2:
        raise ValueError("limit must be at least 2")
    tgt = _target(target)
    base = ShortABCurve(*tgt.model)
    candidates = [p for p in prime_stream(limit) if tgt.qualifies(p)]
    report = SearchReport(tgt.order, limit)

    results: dict[int, list[dict]] = {}
    todo = []
    for p in candidates:
        twists = [quadratic_twist(base, d) for d in (p, tgt.partner * p)]
        cached = [cache.get(E) for E in twists] if cache is not None else [None, None]
        if all(c is not None for c in cached):
            results[p] = cached
        else:
            todo.append(p)
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for p, certs in zip(todo, ex.map(_certify_pair, [(tgt.model, tgt.partner, p) for p in todo])):
                results[p] = certs
    else:
        for p in todo:
            results[p] = _certify_pair((tgt.model, tgt.partner, p))
    if cache is not None:
        for p in todo:
            for d, cert in zip((p, tgt.partner * p), results[p]):
                cache.put(quadratic_twist(base, d), cert)

    for p in candidates:
        certs = results[p]
        bad = [c for c in certs if c["verdict"] != "certified"]
        if bad or not tgt.qualifies(p):
            report.discrepancies.append(
                {
                    "prime": p,
                    "reason": "twist not certified rank zero" if bad else "congruence recheck failed",
                    "bounds": [c["rank_bound"] for c in certs],
                }
            )
            continue
        report.entries.append(SearchEntry(p, tgt.conditions(p), certs, tgt.field_descriptor(p)))
    if cache is not None:
        report.cache_stats = cache.stats()
    return report
