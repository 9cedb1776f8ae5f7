"""On-disk cache for computed Hamiltonian densities.

Everything stored here is derived data: deleting the cache directory changes
nothing but runtime.  Entries are keyed by the index d and the engine
version; a version bump invalidates them.  Writes go through a temp file and
an atomic rename so a partially written entry is never observed.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from ._version import ENGINE_VERSION
from .diffpoly import DiffPoly, from_json_dict, to_json_dict

ENV_VAR = "QKDV_CACHE"
DEFAULT_DIR = ".qkdv-cache"


def resolve_cache_dir(explicit: str | os.PathLike | None = None) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(DEFAULT_DIR)


def wang_path(cache_dir: Path, d: int) -> Path:
    return cache_dir / "wang" / f"H_{d}.json"


def load_density(path: Path, d: int) -> DiffPoly | None:
    """Parse a cached density; any corruption or key mismatch returns None."""
    try:
        payload = json.loads(path.read_text())
        if payload.get("d") != d or payload.get("engine") != ENGINE_VERSION:
            return None
        return from_json_dict(payload)
    except (OSError, ValueError, KeyError, TypeError):
        return None


def store_density(path: Path, d: int, density: DiffPoly) -> None:
    payload = {"d": d, "engine": ENGINE_VERSION}
    payload.update(to_json_dict(density))
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(json.dumps(payload, separators=(",", ":")))
    os.replace(tmp, path)
