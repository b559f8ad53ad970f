"""Persistent L-value cache.

JSON-lines file: a schema-version header line, then one stored L-value
per line keyed by (n, d, power, m).  Values are exact, so a cache hit
must be bit-identical to recomputation; on load every entry's stored
valuation is checked against one recomputed from the stored value, and
any mismatch or malformed line is rejected as poisoning.

Reads may happen concurrently; writes are serialized behind a lock, and
inserting the same key twice is a no-op when the values agree (exact
recomputation is deterministic) and an error when they do not.
"""

from __future__ import annotations

import json
import os
import threading

from .characters import CharSpec
from .cyclotomic import CyclotomicNumber, ord2
from .lvalues import LValueResult

SCHEMA = "dyadicl-cache-v1"


class CachePoisonedError(RuntimeError):
    """Cache contents are inconsistent with recomputation."""


def _key_of(spec: CharSpec, m: int) -> tuple:
    return spec.key() + (m,)


def _result_from_dict(d: dict) -> LValueResult:
    spec = CharSpec.from_dict(d["spec"])
    value = CyclotomicNumber.from_dict(d["value"])
    v = ord2(value)
    if str(v) != d["ord2"]:
        raise CachePoisonedError(
            f"stored ord2 {d['ord2']!r} does not match recomputed {v} "
            f"for spec {spec}, m={d['m']}"
        )
    return LValueResult(
        spec,
        int(d["m"]),
        value,
        v,
        tuple(int(p) for p in d.get("euler_factors_removed", ())),
    )


class LValueCache:
    def __init__(self, path: str | os.PathLike | None = None):
        self.path = os.fspath(path) if path is not None else None
        self._lock = threading.Lock()
        self._entries: dict[tuple, LValueResult] = {}
        if self.path is not None and os.path.exists(self.path):
            self._load()

    def __len__(self) -> int:
        return len(self._entries)

    def _load(self) -> None:
        with open(self.path, "r", encoding="utf-8") as fh:
            header = fh.readline()
            try:
                head = json.loads(header)
            except json.JSONDecodeError as exc:
                raise CachePoisonedError(f"unreadable header: {exc}") from exc
            if head.get("schema") != SCHEMA:
                raise CachePoisonedError(f"unexpected schema {head.get('schema')!r}")
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                try:
                    result = _result_from_dict(json.loads(line))
                except CachePoisonedError:
                    raise
                except (ValueError, KeyError, TypeError) as exc:
                    raise CachePoisonedError(f"bad entry at line {lineno}: {exc}") from exc
                self._entries[_key_of(result.spec, result.m)] = result

    def get(self, key: tuple) -> LValueResult | None:
        return self._entries.get(key)

    def put(self, key: tuple, result: LValueResult) -> None:
        with self._lock:
            existing = self._entries.get(key)
            if existing is not None:
                if existing.value != result.value:
                    raise CachePoisonedError(f"conflicting values cached for {key}")
                return
            self._entries[key] = result
            if self.path is not None:
                fresh = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
                with open(self.path, "a", encoding="utf-8") as fh:
                    if fresh:
                        fh.write(json.dumps({"schema": SCHEMA}, sort_keys=True) + "\n")
                    fh.write(json.dumps(result.to_dict(), sort_keys=True) + "\n")

    def verify_against(self, recompute) -> None:
        """Recompute every entry with the supplied function and require
        bit-exact agreement (full poisoning sweep; used by tests)."""
        for (n, d, power, m), stored in sorted(self._entries.items()):
            spec = CharSpec(n, d, power, allow_even_twist=d % 2 == 0)
            fresh = recompute(spec, m)
            if fresh.value != stored.value:
                raise CachePoisonedError(
                    f"cache entry for {spec}, m={m} differs from recomputation"
                )
