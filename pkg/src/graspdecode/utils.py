"""Small shared helpers: deterministic seeding, atomic file writes, formatting."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np


def derive_seed(seed: int, *keys: int) -> int:
    """Derive an independent child seed from a root seed and integer keys.

    Uses ``numpy.random.SeedSequence`` so derived streams are independent
    and the result does not depend on the order in which siblings are drawn.
    """
    return int(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys)).generate_state(1)[0])


def rng_for(seed: int, *keys: int) -> np.random.Generator:
    """Seeded generator for a (seed, *keys) coordinate; schedule independent."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys)))


def fmt_float(x: float) -> str:
    """Round-trip-exact decimal rendering of a float64."""
    return format(float(x), ".17g")


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write ``text`` to ``path`` via a temp file + rename in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
