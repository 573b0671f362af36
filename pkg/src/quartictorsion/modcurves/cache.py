"""Append-only JSON-lines cache of rank certificates keyed by (a, b)."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any

from ..arith import fraction_str
from ..ecurve import ShortABCurve

log = logging.getLogger(__name__)

CACHE_ENV = "QUARTICTORSION_CACHE"


def _canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def checksum(payload: Any) -> str:
    return hashlib.sha256(_canonical(payload).encode()).hexdigest()


def cache_key(E: ShortABCurve) -> str:
    return f"{fraction_str(E.a)},{fraction_str(E.b)}"


class CertificateCache:
    """Records are {"key", "certificate", "checksum"}; the last valid record per key wins."""

    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path is not None else None
        self.entries: dict[str, dict] = {}
        self.hits = 0
        self.misses = 0
        self.rejected = 0
        self.writable = self.path is not None
        if self.path is not None and self.path.exists():
            try:
                self._load()
            except OSError as exc:
                log.warning("cache %s is not readable (%s); continuing without it", self.path, exc)
                self.writable = False

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    self.entries[rec["key"]] = rec
                except (json.JSONDecodeError, KeyError, TypeError):
                    self.rejected += 1

    def get(self, E: ShortABCurve) -> dict | None:
        rec = self.entries.get(cache_key(E))
        if rec is None:
            self.misses += 1
            return None
        cert = rec.get("certificate")
        if cert is None or rec.get("checksum") != checksum(cert):
            log.warning("cache record for %s failed checksum; recomputing", cache_key(E))
            self.rejected += 1
            self.misses += 1
            del self.entries[cache_key(E)]
            return None
        self.hits += 1
        return cert

    def put(self, E: ShortABCurve, certificate: dict) -> None:
        rec = {"key": cache_key(E), "certificate": certificate, "checksum": checksum(certificate)}
        self.entries[rec["key"]] = rec
        if not self.writable:
            return
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(_canonical(rec) + "\n")
        except OSError as exc:
            log.warning("cache %s is not writable (%s); continuing without it", self.path, exc)
            self.writable = False

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "rejected": self.rejected}


def default_cache_path() -> Path | None:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None
