"""Append-only JSONL result store.

Each line is one record: ``{"kind", "timestamp", "config_hash",
"bounds_version", "data"}``.  Integers beyond 64 bits and non-finite floats
are tagged so that ``load`` gives back exactly what ``persist`` wrote.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import os
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, List, Optional

from .census import BOUNDS_VERSION

log = logging.getLogger(__name__)

STORE_ENV = "SUMCONTAINERS_STORE"
_INT_LIMIT = 2 ** 63


def _encode(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return {"__int__": str(x)} if abs(x) >= _INT_LIMIT else x
    if isinstance(x, float):
        return x if math.isfinite(x) else {"__float__": repr(x)}
    if isinstance(x, Fraction):
        return {"__fraction__": str(x)}
    if isinstance(x, dict):
        return {str(k): _encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_encode(v) for v in x]
    raise TypeError(f"cannot store value of type {type(x).__name__}")


def _decode_hook(obj: dict):
    if len(obj) == 1:
        (key, val), = obj.items()
        if key == "__int__":
            return int(val)
        if key == "__float__":
            return float(val)
        if key == "__fraction__":
            return Fraction(val)
    return obj


def config_hash(config: Dict) -> str:
    text = json.dumps(_encode(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def make_record(kind: str, data: Dict, config: Dict, timestamp: Optional[str] = None) -> Dict:
    return {
        "kind": kind,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
        "config_hash": config_hash(config),
        "bounds_version": BOUNDS_VERSION,
        "data": data,
    }


def dumps(record: Dict) -> str:
    return json.dumps(_encode(record), sort_keys=True, separators=(",", ":"))


def loads(line: str) -> Dict:
    return json.loads(line, object_hook=_decode_hook)


def default_store() -> Optional[Path]:
    value = os.environ.get(STORE_ENV)
    return Path(value) if value else None


def persist(record: Dict, store) -> None:
    path = Path(store)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a", encoding="utf-8") as fh:
            fh.write(dumps(record) + "\n")
    except OSError as exc:
        raise OSError(f"cannot append to store {path}: {exc}") from exc


def _matches(record: Dict, flt: Dict) -> bool:
    for key, want in flt.items():
        if key in record:
            got = record[key]
        elif isinstance(record.get("data"), dict) and key in record["data"]:
            got = record["data"][key]
        else:
            return False
        if got != want:
            return False
    return True


def iter_records(store) -> Iterator[Dict]:
    path = Path(store)
    try:
        fh = path.open(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read store {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = loads(line)
            except json.JSONDecodeError:
                log.warning("skipping corrupt line %d in %s", lineno, path)
                continue
            if not isinstance(record, dict):
                log.warning("skipping non-record line %d in %s", lineno, path)
                continue
            yield record


def load(store, flt: Optional[Dict] = None) -> List[Dict]:
    """All records of ``store`` whose top-level or data fields equal every item of ``flt``."""
    flt = flt or {}
    return [r for r in iter_records(store) if _matches(r, flt)]
