"""Append-only JSON-lines result store, resumable by record key."""

from __future__ import annotations

import json
import os

import numpy as np

SCHEMA_VERSION = 1


def record_key(record):
    """Identity of a record within a store: one per grid cell per seed."""
    if record.get("kind") == "clean":
        return ("clean", record["dataset"], record["model"], record["seed"])
    return ("attack", record["dataset"], record["model"], record["method"],
            round(float(record["epsilon"]), 9), record["seed"])


def _jsonable(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


class ResultStore:
    """One JSON object per line; existing records are never rewritten."""

    def __init__(self, path):
        self.path = str(path)
        self._records = []
        self._keys = set()
        if os.path.exists(self.path):
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    record = json.loads(line)
                    self._records.append(record)
                    self._keys.add(record_key(record))

    def __len__(self):
        return len(self._records)

    def __contains__(self, key):
        return key in self._keys

    def records(self, **filters):
        """Records matching all given field values."""
        out = []
        for record in self._records:
            if all(record.get(k) == v for k, v in filters.items()):
                out.append(record)
        return out

    def append(self, record):
        """Persist a new record; re-appending an existing key is rejected."""
        record = dict(record)
        record.setdefault("v", SCHEMA_VERSION)
        key = record_key(record)
        if key in self._keys:
            raise ValueError(f"record {key} already exists; the store is append-only")
        line = json.dumps(record, default=_jsonable)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
        self._records.append(record)
        self._keys.add(key)
        return record
