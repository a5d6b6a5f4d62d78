"""On-disk cache of truncation tables.

Entries are JSON files named by the sha256 of the truncation fingerprint
(quiver, relations, N, sources, monomial order and its version).  Each file
stores a checksum of its payload; an entry that fails to parse or to match
its checksum or key is rebuilt and overwritten, never used.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path as FsPath
from typing import Sequence

from .preproj import TruncatedQuotient, fingerprint

log = logging.getLogger(__name__)


def _blob(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


class CacheMismatch(RuntimeError):
    """A cached entry differs from a fresh rebuild."""


class TruncationCache:
    def __init__(self, directory, verify: bool = False):
        self.dir = FsPath(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.verify = verify
        self.events: list[dict] = []

    def key(self, fp: dict) -> str:
        return hashlib.sha256(_blob(fp)).hexdigest()

    def path_for(self, key: str) -> FsPath:
        return self.dir / f"{key}.json"

    def _load(self, key: str):
        path = self.path_for(key)
        if not path.exists():
            return None, "miss"
        try:
            entry = json.loads(path.read_bytes())
            payload = entry["payload"]
            if entry.get("key") != key:
                return None, "corrupt"
            if hashlib.sha256(_blob(payload)).hexdigest() != entry.get("checksum"):
                return None, "corrupt"
            return payload, "hit"
        except (ValueError, KeyError, TypeError):
            return None, "corrupt"

    def _store(self, key: str, tq: TruncatedQuotient):
        payload = tq.to_json()
        entry = {"key": key, "checksum": hashlib.sha256(_blob(payload)).hexdigest(),
                 "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(_blob(entry))
            os.replace(tmp, self.path_for(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def fetch(self, dq, relations: Sequence, N: int, weight, *, sources=None,
              order: str = "deglex") -> TruncatedQuotient:
        fp = fingerprint(dq, relations, N, sources=sources, order=order)
        key = self.key(fp)
        payload, status = self._load(key)
        tq = None
        if payload is not None:
            try:
                tq = TruncatedQuotient.from_json(payload, relations, weight, quiver=dq)
            except (ValueError, KeyError, TypeError, IndexError):
                tq, status = None, "corrupt"
        if tq is not None and self.verify:
            fresh = TruncatedQuotient(dq, relations, N, sources=sources, order=order, weight=weight)
            if not fresh.same_tables(tq):
                self.events.append({"key": key, "status": "mismatch"})
                self._store(key, fresh)
                raise CacheMismatch(f"cache entry {key[:12]} differs from a fresh rebuild")
            status = "verified"
        if tq is None:
            if status == "corrupt":
                log.warning("cache entry %s is corrupt; rebuilding", key[:12])
            tq = TruncatedQuotient(dq, relations, N, sources=sources, order=order, weight=weight)
            self._store(key, tq)
        self.events.append({"key": key, "status": status})
        log.info("cache %s %s", status, key[:12])
        return tq
