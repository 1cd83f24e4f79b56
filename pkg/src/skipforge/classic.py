"""The classic probabilistic skiplist, with an optional unrolled layout.

Every node owns a tower of forward links plus a small sorted block of up
to ``node_capacity`` keys.  With capacity 1 this degenerates to the
textbook structure (one key per tower); with capacity B > 1 nodes split
in half when overfull and borrow from or merge with their right
neighbour when they drop below ceil(B/2) keys, so all nodes except
possibly the last stay at least half full.

Routing always compares against a node's current first key, so moving
keys between blocks keeps the index consistent without touching towers.
"""
from __future__ import annotations

from bisect import bisect_left
from typing import Iterator, Optional

from .core import (
    DEFAULT_MAX_LEVEL,
    DEFAULT_P,
    HeightSampler,
    InvalidRangeError,
    Key,
    LevelGenConfig,
    SearchStats,
    Value,
)


class _Node:
    __slots__ = ("keys", "values", "next")

    def __init__(self, height: int):
        self.keys: list[Key] = []
        self.values: list[Value] = []
        self.next: list[Optional[_Node]] = [None] * height

    @property
    def height(self) -> int:
        return len(self.next)


class ClassicSkiplist:
    """Ordered map over byte keys with probabilistic tower heights."""

    def __init__(
        self,
        p: float = DEFAULT_P,
        max_level: int = DEFAULT_MAX_LEVEL,
        seed: int = 0,
        node_capacity: int = 1,
    ):
        if node_capacity < 1:
            raise ValueError("node_capacity must be >= 1")
        self._sampler = HeightSampler(LevelGenConfig(p=p, max_level=max_level, seed=seed))
        self._max_level = max_level
        self._cap = node_capacity
        self._min_fill = (node_capacity + 1) // 2
        self._head = _Node(max_level)
        self._level = 1
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def size(self) -> int:
        return self._size

    # Routing: the containing node for k is the last node whose first key
    # is <= k; the head stands in when k precedes every node.
    def _find_containing(self, key: Key) -> tuple[_Node, list[_Node]]:
        update: list[_Node] = [self._head] * self._level
        cur = self._head
        for i in range(self._level - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None and nxt.keys[0] <= key:
                cur = nxt
                nxt = cur.next[i]
            update[i] = cur
        return cur, update

    # Strict predecessor towers for a node whose first key is min_key; the
    # identity check lets callers excise a node whose block was emptied.
    def _preds_of(self, min_key: Key, target: Optional[_Node] = None) -> list[_Node]:
        preds: list[_Node] = [self._head] * self._level
        cur = self._head
        for i in range(self._level - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None and nxt is not target and nxt.keys[0] < min_key:
                cur = nxt
                nxt = cur.next[i]
            preds[i] = cur
        return preds

    def insert(self, key: Key, value: Value) -> Optional[Value]:
        """Upsert; returns the previous value or None if the key was new."""
        node, _ = self._find_containing(key)
        if node is self._head:
            target = self._head.next[0]
            if target is None:
                fresh = _Node(self._sampler.random_height())
                fresh.keys.append(key)
                fresh.values.append(value)
                self._splice(fresh)
                self._size += 1
                return None
        else:
            target = node
            idx = bisect_left(node.keys, key)
            if idx < len(node.keys) and node.keys[idx] == key:
                old = node.values[idx]
                node.values[idx] = value
                return old
        idx = bisect_left(target.keys, key)
        target.keys.insert(idx, key)
        target.values.insert(idx, value)
        self._size += 1
        if len(target.keys) > self._cap:
            self._split(target)
        return None

    def _splice(self, node: _Node) -> None:
        if node.height > self._level:
            self._level = node.height
        preds = self._preds_of(node.keys[0])
        for i in range(node.height):
            node.next[i] = preds[i].next[i]
            preds[i].next[i] = node

    def _split(self, node: _Node) -> None:
        mid = (len(node.keys) + 1) // 2
        right = _Node(self._sampler.random_height())
        right.keys = node.keys[mid:]
        right.values = node.values[mid:]
        node.keys = node.keys[:mid]
        node.values = node.values[:mid]
        self._splice(right)

    def _excise(self, node: _Node, ref_key: Key) -> None:
        preds = self._preds_of(ref_key, target=node)
        for i in range(node.height):
            if i < self._level and preds[i].next[i] is node:
                preds[i].next[i] = node.next[i]
        while self._level > 1 and self._head.next[self._level - 1] is None:
            self._level -= 1

    def remove(self, key: Key) -> Optional[Value]:
        node, _ = self._find_containing(key)
        if node is self._head:
            return None
        idx = bisect_left(node.keys, key)
        if idx >= len(node.keys) or node.keys[idx] != key:
            return None
        old = node.values.pop(idx)
        node.keys.pop(idx)
        self._size -= 1
        if not node.keys:
            self._excise(node, key)
        elif len(node.keys) < self._min_fill and node.next[0] is not None:
            self._rebalance(node)
        return old

    def _rebalance(self, node: _Node) -> None:
        right = node.next[0]
        assert right is not None
        need = self._min_fill - len(node.keys)
        if len(right.keys) - need >= self._min_fill:
            node.keys.extend(right.keys[:need])
            node.values.extend(right.values[:need])
            del right.keys[:need]
            del right.values[:need]
        else:
            ref = right.keys[0]
            node.keys.extend(right.keys)
            node.values.extend(right.values)
            right.keys = []
            right.values = []
            self._excise(right, ref)

    def get(self, key: Key) -> Optional[Value]:
        node, _ = self._find_containing(key)
        if node is self._head:
            return None
        idx = bisect_left(node.keys, key)
        if idx < len(node.keys) and node.keys[idx] == key:
            return node.values[idx]
        return None

    def get_traced(self, key: Key) -> tuple[Optional[Value], SearchStats]:
        """Same answer as get, with every comparison and link counted."""
        stats = SearchStats()
        cur = self._head
        for i in range(self._level - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None:
                stats.link_traversals += 1
                stats.comparisons += 1
                if nxt.keys[0] <= key:
                    cur = nxt
                    nxt = cur.next[i]
                else:
                    break
        if cur is self._head:
            return None, stats
        # Counted binary search inside the block.
        lo, hi = 0, len(cur.keys)
        while lo < hi:
            mid = (lo + hi) // 2
            stats.comparisons += 1
            if cur.keys[mid] < key:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(cur.keys):
            stats.comparisons += 1
            if cur.keys[lo] == key:
                return cur.values[lo], stats
        return None, stats

    def range_scan(self, lo: Key, hi: Key) -> list[tuple[Key, Value]]:
        """All entries with lo <= key <= hi, ascending; bounds are closed."""
        if lo > hi:
            raise InvalidRangeError(f"lo {lo!r} > hi {hi!r}")
        node, _ = self._find_containing(lo)
        if node is self._head:
            node = self._head.next[0]
        out: list[tuple[Key, Value]] = []
        while node is not None:
            if node.keys[0] > hi:
                break
            start = bisect_left(node.keys, lo)
            for i in range(start, len(node.keys)):
                if node.keys[i] > hi:
                    return out
                out.append((node.keys[i], node.values[i]))
            node = node.next[0]
        return out

    def items(self) -> Iterator[tuple[Key, Value]]:
        node = self._head.next[0]
        while node is not None:
            yield from zip(node.keys, node.values)
            node = node.next[0]

    def check_structure(self) -> list[str]:
        """Full structural sweep; returns human-readable violations."""
        violations: list[str] = []
        bottom: list[_Node] = []
        node = self._head.next[0]
        prev_key: Optional[Key] = None
        while node is not None:
            bottom.append(node)
            if not node.keys:
                violations.append("empty node on bottom level")
            if len(node.keys) != len(node.values):
                violations.append("key/value length mismatch")
            for i, k in enumerate(node.keys):
                if prev_key is not None and k <= prev_key:
                    violations.append(f"order violation at key {k!r}")
                prev_key = k
                if i and node.keys[i - 1] >= k:
                    violations.append("unsorted block")
            if len(node.keys) > self._cap:
                violations.append(f"node overfull: {len(node.keys)} > {self._cap}")
            if (
                self._cap > 1
                and node.next[0] is not None
                and len(node.keys) < self._min_fill
            ):
                violations.append(
                    f"non-last node underfull: {len(node.keys)} < {self._min_fill}"
                )
            node = node.next[0]
        total = sum(len(n.keys) for n in bottom)
        if total != self._size:
            violations.append(f"size mismatch: counted {total}, recorded {self._size}")
        for i in range(1, self._level):
            expected = [n for n in bottom if n.height > i]
            chain = []
            node = self._head.next[i]
            while node is not None:
                chain.append(node)
                node = node.next[i]
            if [id(n) for n in chain] != [id(n) for n in expected]:
                violations.append(f"level {i + 1} chain is not the height-filtered bottom chain")
        if self._level > 1 and self._head.next[self._level - 1] is None:
            violations.append("tracked level exceeds occupied levels")
        return violations
