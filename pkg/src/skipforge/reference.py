"""Reference ordered map used as a differential oracle.

Deliberately built from a dict plus a bisect-maintained sorted key list,
with no skiplist machinery at all, so it stays an independent check on
every variant's answers.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right, insort
from typing import Optional

from .core import Key, Value


class ReferenceMap:
    def __init__(self):
        self._data: dict[Key, Value] = {}
        self._sorted: list[Key] = []

    def __len__(self) -> int:
        return len(self._data)

    def insert(self, key: Key, value: Value) -> Optional[Value]:
        old = self._data.get(key)
        if old is None and key not in self._data:
            insort(self._sorted, key)
        self._data[key] = value
        return old

    def remove(self, key: Key) -> Optional[Value]:
        if key not in self._data:
            return None
        old = self._data.pop(key)
        idx = bisect_left(self._sorted, key)
        del self._sorted[idx]
        return old

    def get(self, key: Key) -> Optional[Value]:
        return self._data.get(key)

    def range_scan(self, lo: Key, hi: Key) -> list[tuple[Key, Value]]:
        start = bisect_left(self._sorted, lo)
        end = bisect_right(self._sorted, hi)
        return [(k, self._data[k]) for k in self._sorted[start:end]]

    def items(self) -> list[tuple[Key, Value]]:
        return [(k, self._data[k]) for k in self._sorted]
