"""Resumable on-disk state for long enumeration runs.

Layout: a directory holding ``manifest.json`` plus one ``.npy`` file per
completed backward-sweep level.  The manifest records a format tag, a format
version, the run parameters and a sha256 per level file, so a resume can
refuse anything that does not match bit-for-bit.

Manifest schema (format "candyfix-checkpoint", version 1)::

    {
      "format": "candyfix-checkpoint",
      "version": 1,
      "k": 4,
      "engine": "kappa=3,n=2,p=1/2,1/2",
      "levels": {"0": {"file": "level-0.npy", "sha256": "...", "exp": 0}},
      "entries": {"p_gap_0_0": {"num": ..., "exp": ...}}
    }

Levels hold exact integer numerators at the recorded exponent; round-trips
are bit-exact by construction (integer npy files).
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .dyadic import Dyadic

FORMAT = "candyfix-checkpoint"
VERSION = 1


class CheckpointError(Exception):
    """Missing, mismatched or corrupt checkpoint state."""


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class CheckpointStore:
    """Single-writer checkpoint directory for one (k, engine) run."""

    def __init__(self, path: str | Path, k: int, engine_tag: str):
        self.path = Path(path)
        self.k = k
        self.engine_tag = engine_tag
        self.path.mkdir(parents=True, exist_ok=True)
        self._manifest_path = self.path / "manifest.json"
        if self._manifest_path.exists():
            try:
                with open(self._manifest_path) as fh:
                    self._state = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise CheckpointError(f"unreadable checkpoint manifest: {exc}") from exc
            for field, want in (("format", FORMAT), ("version", VERSION),
                                ("k", k), ("engine", engine_tag)):
                got = self._state.get(field)
                if got != want:
                    raise CheckpointError(
                        f"checkpoint {field} mismatch: stored {got!r}, expected {want!r}"
                    )
        else:
            self._state = {
                "format": FORMAT,
                "version": VERSION,
                "k": k,
                "engine": engine_tag,
                "levels": {},
                "entries": {},
            }
            self._flush()

    def _flush(self):
        tmp = self._manifest_path.with_suffix(".json.tmp")
        with open(tmp, "w") as fh:
            json.dump(self._state, fh, indent=1, sort_keys=True)
        os.replace(tmp, self._manifest_path)

    # --- backward-sweep levels ---

    def completed_levels(self) -> list[int]:
        return sorted(int(r) for r in self._state["levels"])

    def has_level(self, r: int) -> bool:
        return str(r) in self._state["levels"]

    def save_level(self, r: int, values: np.ndarray, exp: int) -> None:
        name = f"level-{r}.npy"
        file = self.path / name
        np.save(file, np.asarray(values, dtype=np.int64))
        self._state["levels"][str(r)] = {
            "file": name,
            "sha256": _sha256(file),
            "exp": int(exp),
        }
        self._flush()

    def load_level(self, r: int) -> tuple[np.ndarray, int]:
        rec = self._state["levels"].get(str(r))
        if rec is None:
            raise CheckpointError(f"level {r} not present in checkpoint")
        file = self.path / rec["file"]
        if not file.exists():
            raise CheckpointError(f"checkpoint level file missing: {file}")
        if _sha256(file) != rec["sha256"]:
            raise CheckpointError(f"checkpoint level file corrupt: {file}")
        values = np.load(file)
        return values, int(rec["exp"])

    # --- per-conditioning partial maxima ---

    def get_entry(self, name: str) -> Dyadic | None:
        rec = self._state["entries"].get(name)
        if rec is None:
            return None
        return Dyadic.from_json(rec)

    def set_entry(self, name: str, value: Dyadic) -> None:
        self._state["entries"][name] = value.as_json()
        self._flush()
