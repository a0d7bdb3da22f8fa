"""On-disk cache of the S and Drinfeld coefficient tables.

A cache file is JSON holding the schema tag, N, every table entry in
canonical Element text and a SHA-256 over those entries.  Files are named
by N only; a file built to N' >= N serves a request for N as a truncated
view.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .pbw import Element
from .twisted import DrinfeldTable, STable, Y3, build_tables

__all__ = [
    "SCHEMA",
    "CacheError",
    "table_entries",
    "table_hash",
    "cache_tables",
    "load_tables",
    "load_or_build",
    "default_cache_dir",
]

SCHEMA = "ty3-tables/1"
_NAME = re.compile(r"^tables-N(\d+)\.json$")


class CacheError(Exception):
    """Unreadable, mismatched or tampered cache file."""


def default_cache_dir() -> Path:
    env = os.environ.get("TY3_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ty3"


def table_entries(t: DrinfeldTable) -> List[List]:
    """[symbol..., text] rows in a fixed order."""
    return [list(sym) + [el.to_text()] for sym, el in t.items()]


def _digest(N: int, entries: List[List]) -> str:
    payload = json.dumps({"schema": SCHEMA, "N": N, "entries": entries}, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def table_hash(t: DrinfeldTable) -> str:
    return _digest(t.N, table_entries(t))


def cache_path(directory: Union[str, Path], N: int) -> Path:
    return Path(directory) / f"tables-N{N}.json"


def cache_tables(t: DrinfeldTable, directory: Union[str, Path]) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    entries = table_entries(t)
    doc = {"schema": SCHEMA, "N": t.N, "hash": _digest(t.N, entries), "entries": entries}
    path = cache_path(d, t.N)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc, separators=(",", ":")))
    tmp.replace(path)
    return path


def _from_entries(N: int, entries: List[List]) -> DrinfeldTable:
    alg = Y3()
    S: Dict = {}
    tabs: Dict[str, Dict] = {"D": {}, "Dt": {}, "E": {}, "F": {}, "G": {}, "Gt": {}}
    for row in entries:
        name, *rest = row
        *key, text = rest
        el = Element.from_text(alg, text)
        if name == "S":
            S[tuple(key)] = el
        elif name in ("G", "Gt"):
            tabs[name][key[0]] = el
        elif name in tabs:
            tabs[name][tuple(key)] = el
        else:
            raise CacheError(f"unknown table {name!r}")
    return DrinfeldTable(N, STable(N, S), tabs["D"], tabs["Dt"], tabs["E"], tabs["F"], tabs["G"], tabs["Gt"])


def _read(path: Path) -> Tuple[DrinfeldTable, str]:
    try:
        doc = json.loads(path.read_text())
    except (OSError, ValueError) as e:
        raise CacheError(f"cannot read {path}: {e}") from e
    if doc.get("schema") != SCHEMA:
        raise CacheError(f"{path}: schema {doc.get('schema')!r}, expected {SCHEMA!r}")
    N, entries = doc.get("N"), doc.get("entries")
    if not isinstance(N, int) or not isinstance(entries, list):
        raise CacheError(f"{path}: malformed document")
    digest = _digest(N, entries)
    if digest != doc.get("hash"):
        raise CacheError(f"{path}: content hash mismatch")
    try:
        return _from_entries(N, entries), digest
    except (ValueError, TypeError, KeyError) as e:
        raise CacheError(f"{path}: bad entry: {e}") from e


def _candidates(directory: Path, N: int) -> List[Tuple[int, Path]]:
    out = []
    if directory.is_dir():
        for p in directory.iterdir():
            m = _NAME.match(p.name)
            if m and int(m.group(1)) >= N:
                out.append((int(m.group(1)), p))
    return sorted(out)


def load_tables(directory: Union[str, Path], N: int) -> DrinfeldTable:
    """Tables to N from the smallest cached build with N' >= N.

    Raises :class:`CacheError` when nothing suitable is cached or the file
    fails its checks.
    """
    cands = _candidates(Path(directory), N)
    if not cands:
        raise CacheError(f"no cached tables with N >= {N} in {directory}")
    t, _ = _read(cands[0][1])
    return t.truncate(N) if t.N > N else t


def load_or_build(directory: Optional[Union[str, Path]], N: int) -> Tuple[DrinfeldTable, List[str]]:
    """Load from cache, else build (and cache).  Returns (tables, warnings)."""
    warnings: List[str] = []
    if directory is None:
        return build_tables(N), warnings
    directory = Path(directory)
    cands = _candidates(directory, N)
    if cands:
        try:
            t = load_tables(directory, N)
            return t, warnings
        except CacheError as e:
            warnings.append(f"cache rejected ({e}); rebuilding")
    t = build_tables(N)
    try:
        cache_tables(t, directory)
    except OSError as e:
        warnings.append(f"could not write cache: {e}")
    return t, warnings
