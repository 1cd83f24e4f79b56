"""Deterministic 1-2-3 skiplist with worst-case bounded searches.

Structural rule: between any two consecutive nodes that reach height h
(the head sentinel and the end of a level both count as bounds), there
are at least 1 and at most 3 nodes of height exactly h - 1.  This is the
list-shaped twin of a 2-3-4 tree, and both mutations restructure top-down
on the search path the same way preemptive 2-3-4 splitting/merging does:

* insert splits any full (3-node) gap before descending into it by
  raising the gap's middle node one level;
* remove guarantees every gap it descends into holds at least 2 nodes,
  borrowing a node through a neighbouring separator (rotate) or pulling
  the separator down (merge) when it does not.

Removing a key whose node reaches above the bottom level copies the
in-order successor (always a height-1 node, forced by the gap rule) into
the tall node and deletes the successor instead, as in delete-by-copy
for search trees.

No randomness anywhere: a given operation sequence always produces the
identical structure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .core import InvalidRangeError, Key, SearchStats, Value


class _DNode:
    __slots__ = ("key", "value", "next")

    def __init__(self, key: Key, value: Value):
        self.key = key
        self.value = value
        self.next: list[Optional[_DNode]] = []


@dataclass
class InvariantReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


class DetSkiplist:
    def __init__(self):
        self._head = _DNode(b"", b"")
        self._head.next = [None]
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def size(self) -> int:
        return self._size

    @property
    def height(self) -> int:
        return len(self._head.next)

    # -- gap helpers -------------------------------------------------

    def _gap_members(self, bound: _DNode, i: int) -> list[_DNode]:
        """Nodes of height exactly i+1 between `bound` and the next node
        reaching above level index i (or the end of the level)."""
        members = []
        node = bound.next[i]
        while node is not None and len(node.next) == i + 1:
            members.append(node)
            node = node.next[i]
            if len(members) > 3:
                raise AssertionError("gap invariant already broken: > 3 members")
        return members

    def _trim_levels(self) -> None:
        head = self._head
        while len(head.next) > 1 and head.next[-1] is None:
            head.next.pop()

    # -- insert ------------------------------------------------------

    def insert(self, key: Key, value: Value) -> Optional[Value]:
        """Upsert. Full gaps on the way down are split before descending."""
        head = self._head
        top = self._gap_members(head, len(head.next) - 1)
        if len(top) == 3:
            # the root gap is full: raise its middle node, growing the list
            mid = top[1]
            mid.next.append(None)
            head.next.append(mid)
        height = len(head.next)
        cur = head
        for i in range(height - 1, 0, -1):
            nxt = cur.next[i]
            while nxt is not None and nxt.key < key:
                cur = nxt
                nxt = cur.next[i]
            if nxt is not None and nxt.key == key:
                old = nxt.value
                nxt.value = value
                return old
            members = self._gap_members(cur, i - 1)
            if len(members) == 3:
                mid = members[1]
                mid.next.append(cur.next[i])
                cur.next[i] = mid
                if mid.key == key:
                    old = mid.value
                    mid.value = value
                    return old
                if mid.key < key:
                    cur = mid
        nxt = cur.next[0]
        while nxt is not None and nxt.key < key:
            cur = nxt
            nxt = cur.next[0]
        if nxt is not None and nxt.key == key:
            old = nxt.value
            nxt.value = value
            return old
        node = _DNode(key, value)
        node.next = [nxt]
        cur.next[0] = node
        self._size += 1
        return None

    # -- remove ------------------------------------------------------

    def _fix_gap_for_remove(
        self, cur: _DNode, i: int, prev: Optional[_DNode]
    ) -> Optional[_DNode]:
        """Ensure the level-(i-1) gap left-bounded by `cur` holds >= 2 nodes.

        `prev` is cur's predecessor on level index i when cur is a
        separator there (tracked by the caller's scan or seeded by an
        earlier fix).  Returns cur's new predecessor at level i-1 when the
        fix demoted cur, so the caller can keep its bookkeeping exact.
        """
        members = self._gap_members(cur, i - 1)
        if len(members) >= 2:
            return None
        right = cur.next[i]
        if right is not None and len(right.next) == i + 1:
            rmembers = self._gap_members(right, i - 1)
            if len(rmembers) >= 2:
                # rotate left: separator drops into our gap, the right
                # gap's first node rises to replace it
                first = rmembers[0]
                first.next.append(right.next[i])
                cur.next[i] = first
                right.next.pop()
            else:
                # merge with the right gap: separator drops a level
                cur.next[i] = right.next[i]
                right.next.pop()
            return None
        if cur is not self._head and len(cur.next) == i + 1:
            # cur itself is the separator to its left sibling gap
            assert prev is not None, "separator without a tracked predecessor"
            lmembers = self._gap_members(prev, i - 1)
            last = lmembers[-1]
            if len(lmembers) >= 2:
                # rotate right: cur drops into the gap, the left gap's
                # last node rises to become the separator
                tail = cur.next[i]
                cur.next.pop()
                last.next.append(tail)
                prev.next[i] = last
            else:
                # merge with the left gap: cur drops a level
                prev.next[i] = cur.next[i]
                cur.next.pop()
            # either way `last` now directly precedes cur one level down
            return last
        raise AssertionError("gap with a single node and no sibling")

    def remove(self, key: Key) -> Optional[Value]:
        head = self._head
        height = len(head.next)
        cur = head
        victim: Optional[_DNode] = None
        seeded_prev: Optional[_DNode] = None
        for i in range(height - 1, 0, -1):
            prev = seeded_prev
            while True:
                nxt = cur.next[i]
                if nxt is None:
                    break
                if nxt.key < key:
                    prev = cur
                    cur = nxt
                    continue
                if victim is None and nxt.key == key:
                    victim = nxt
                    prev = cur
                    cur = nxt
                    continue
                break
            seeded_prev = self._fix_gap_for_remove(cur, i, prev)
        if victim is None:
            nxt = cur.next[0]
            while nxt is not None and nxt.key < key:
                cur = nxt
                nxt = cur.next[0]
            if nxt is None or nxt.key != key:
                self._trim_levels()
                return None
            old = nxt.value
            cur.next[0] = nxt.next[0]
        else:
            # delete-by-copy: pull the bottom successor into the tall node
            assert cur is victim
            succ = victim.next[0]
            assert succ is not None and len(succ.next) == 1
            old = victim.value
            victim.key = succ.key
            victim.value = succ.value
            victim.next[0] = succ.next[0]
        self._size -= 1
        self._trim_levels()
        return old

    # -- reads -------------------------------------------------------

    def get(self, key: Key) -> Optional[Value]:
        cur = self._head
        for i in range(len(self._head.next) - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None and nxt.key < key:
                cur = nxt
                nxt = cur.next[i]
            if nxt is not None and nxt.key == key:
                return nxt.value
        return None

    def get_traced(self, key: Key) -> tuple[Optional[Value], SearchStats]:
        stats = SearchStats()
        cur = self._head
        for i in range(len(self._head.next) - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None:
                stats.link_traversals += 1
                stats.comparisons += 1
                if nxt.key < key:
                    cur = nxt
                    nxt = cur.next[i]
                elif nxt.key == key:
                    return nxt.value, stats
                else:
                    break
        return None, stats

    def range_scan(self, lo: Key, hi: Key) -> list[tuple[Key, Value]]:
        if lo > hi:
            raise InvalidRangeError(f"lo {lo!r} > hi {hi!r}")
        cur = self._head
        for i in range(len(self._head.next) - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None and nxt.key < lo:
                cur = nxt
                nxt = cur.next[i]
        out = []
        node = cur.next[0]
        while node is not None and node.key <= hi:
            out.append((node.key, node.value))
            node = node.next[0]
        return out

    def items(self) -> Iterator[tuple[Key, Value]]:
        node = self._head.next[0]
        while node is not None:
            yield node.key, node.value
            node = node.next[0]

    def structure_signature(self) -> list[tuple[Key, Value, int]]:
        """Bottom-order (key, value, height) triples; together with the
        ordering these determine the full link topology."""
        sig = []
        node = self._head.next[0]
        while node is not None:
            sig.append((node.key, node.value, len(node.next)))
            node = node.next[0]
        return sig

    # -- validation ---------------------------------------------------

    def check_invariants(self) -> InvariantReport:
        """Validate gap bounds, sortedness, link coherence, and the height
        cap without mutating anything."""
        violations: list[str] = []
        head = self._head
        height = len(head.next)
        bottom: list[_DNode] = []
        node = head.next[0]
        while node is not None:
            bottom.append(node)
            node = node.next[0]
        for a, b in zip(bottom, bottom[1:]):
            if a.key >= b.key:
                violations.append(f"bottom order violation at {b.key!r}")
        if len(bottom) != self._size:
            violations.append(f"size mismatch: {len(bottom)} vs {self._size}")
        for node in bottom:
            if not 1 <= len(node.next) <= height:
                violations.append(f"node height {len(node.next)} outside [1, {height}]")
        for i in range(1, height):
            expected = [n for n in bottom if len(n.next) > i]
            chain = []
            node = head.next[i]
            while node is not None:
                chain.append(node)
                node = node.next[i]
            if [id(n) for n in chain] != [id(n) for n in expected]:
                violations.append(f"level {i + 1} chain inconsistent with node heights")
        if height > 1 and head.next[height - 1] is None:
            violations.append("empty top level")
        # gap rule, level by level: runs of height-h nodes between
        # consecutive taller bounds must have 1..3 nodes (vacuous when empty)
        for h in range(2, height + 2) if self._size else ():
            i = h - 2  # walk the level the members live on
            if i >= height:
                break
            run = 0
            pos = 0
            node = head.next[i]
            while True:
                if node is None or len(node.next) > h - 1:
                    if not 1 <= run <= 3:
                        violations.append(
                            f"gap of {run} height-{h - 1} nodes ending at "
                            f"position {pos} on level {h - 1}"
                        )
                    if node is None:
                        break
                    run = 0
                else:
                    run += 1
                node = node.next[i]
                pos += 1
        if self._size >= 1:
            bound = self._size.bit_length()  # floor(log2 n) + 1
            if height > bound:
                violations.append(f"height {height} exceeds floor(log2 n)+1 = {bound}")
        elif height != 1:
            violations.append("empty list must have height 1")
        return InvariantReport(ok=not violations, violations=violations)
