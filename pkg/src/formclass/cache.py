"""On-disk JSON cache keyed by a content hash of (operation, params, version).

Entries are written once through an atomic rename. A corrupt entry is recomputed and
overwritten with a warning.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

from . import __version__

log = logging.getLogger(__name__)

ENV_VAR = "FORMCLASS_CACHE_DIR"
DEFAULT_DIR = ".formclass-cache"
SCHEMA_VERSION = 1


def dumps(obj: Any) -> str:
    """Canonical JSON text used for every report and cache entry."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def cache_dir() -> Path:
    return Path(os.environ.get(ENV_VAR, DEFAULT_DIR))


def cache_key(op: str, params: dict, version: str = __version__) -> str:
    blob = json.dumps({"op": op, "params": params, "version": version}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached(op: str, params: dict, compute: Callable[[], Any], directory: Path | None = None) -> tuple[Any, bool]:
    """(value, hit). The value is JSON data; compute is called on a miss."""
    directory = cache_dir() if directory is None else directory
    key = cache_key(op, params)
    path = directory / f"{key}.json"
    if path.exists():
        try:
            entry = json.loads(path.read_text())
            if entry.get("schema") != SCHEMA_VERSION or entry.get("key") != key:
                raise ValueError("schema or key mismatch")
            return entry["value"], True
        except (ValueError, KeyError, AttributeError) as exc:
            log.warning("corrupt cache entry %s (%s); recomputing", path, exc)
    value = compute()
    # round-trip so hits and misses return identical data
    value = json.loads(dumps(value))
    atomic_write(path, dumps({"schema": SCHEMA_VERSION, "key": key, "op": op, "params": params, "value": value}))
    return value, False
