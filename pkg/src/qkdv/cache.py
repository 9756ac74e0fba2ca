"""Insert-once JSON cache for Hamiltonian records.

Files are keyed by (m, provenance, fit window, code hash).  A file is written to a
temporary name and hard-linked into place, so the first writer wins and readers
never see a partial document.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from functools import lru_cache
from pathlib import Path

from .hamiltonians import BR, HamiltonianRecord, br_chain, fit_window

_HASHED = (
    "exact/poly.py",
    "exact/series.py",
    "exact/matrix.py",
    "exact/linalg.py",
    "partitions.py",
    "density.py",
    "fock.py",
    "hamiltonians.py",
)


@lru_cache(maxsize=None)
def code_hash() -> str:
    root = Path(__file__).parent
    h = hashlib.sha256()
    for rel in _HASHED:
        h.update(rel.encode())
        h.update((root / rel).read_bytes())
    return h.hexdigest()[:16]


def default_cache_dir() -> Path:
    env = os.environ.get("QKDV_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "qkdv"


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


class RecordCache:
    def __init__(self, directory: str | os.PathLike | None = None, enabled: bool = True):
        self.directory = Path(directory) if directory else default_cache_dir()
        self.enabled = enabled

    def key(self, m: int, provenance: str = BR) -> str:
        kmax, modes = fit_window(m)
        return f"h{m}-{provenance}-k{kmax}-p{modes}-{code_hash()}.json"

    def path(self, m: int, provenance: str = BR) -> Path:
        return self.directory / self.key(m, provenance)

    def load(self, m: int, provenance: str = BR) -> HamiltonianRecord | None:
        if not self.enabled:
            return None
        p = self.path(m, provenance)
        if not p.exists():
            return None
        return HamiltonianRecord.from_json(json.loads(p.read_text()))

    def store(self, rec: HamiltonianRecord) -> Path | None:
        if not self.enabled:
            return None
        self.directory.mkdir(parents=True, exist_ok=True)
        final = self.path(rec.m, rec.provenance)
        text = dumps(record_document(rec))
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            try:
                os.link(tmp, final)
            except FileExistsError:
                pass
        finally:
            os.unlink(tmp)
        return final


def record_document(rec: HamiltonianRecord) -> dict:
    """The cached form: density, provenance and convention (blocks are re-derived on demand)."""
    data = rec.to_json()
    data["blocks"] = []
    return data


def load_chain(mmax: int, cache: RecordCache | None = None) -> dict[int, HamiltonianRecord]:
    """Explicit records for m <= 1 and recursion records for 2 <= m <= mmax."""
    cache = cache or RecordCache(enabled=False)
    recs: dict[int, HamiltonianRecord] = {}
    missing = False
    for m in range(2, mmax + 1):
        rec = cache.load(m)
        if rec is None:
            missing = True
            break
        recs[m] = rec
    if missing or mmax < 2:
        recs = br_chain(mmax)
        for m in range(2, mmax + 1):
            cache.store(recs[m])
    else:
        base = br_chain(1)
        base.update(recs)
        recs = base
    return recs
