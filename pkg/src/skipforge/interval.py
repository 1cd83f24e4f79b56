"""Interval skiplist: stabbing queries answered along one search path.

The index is an ordinary probabilistic skiplist over the distinct
interval endpoints.  Each stored interval leaves markers behind: walking
from its low endpoint node to its high endpoint node, every hop takes
the highest-level link whose span still fits inside the interval and
marks that link (the maximal-cover rule); both endpoint nodes also carry
the interval in a node-level marker set, which is what catches a probe
that lands exactly on an endpoint whose outgoing marked link starts
there.

A stab for q then walks the standard search path for q and unions the
marker sets of the one link per level that spans q, plus q's own node
markers when q is an endpoint, so the work stays proportional to the
search path rather than to the number of stored intervals.

When an endpoint node is inserted it splits existing links; their
markers are copied to both halves (still contained, merely no longer
maximal).  When the last interval using an endpoint is removed the node
is excised, and since merging links can widen a span beyond what some
marker's interval covers, every interval marked on a touched link is
stripped and re-placed on the new topology instead.  A registry of every
marker's location makes both stripping and auditing cheap.
"""
from __future__ import annotations

from typing import Optional

from .core import (
    DEFAULT_MAX_LEVEL,
    DEFAULT_P,
    HeightSampler,
    Key,
    LevelGenConfig,
)


class InvalidIntervalError(ValueError):
    """Raised when an interval is given lo > hi."""


class _ENode:
    __slots__ = ("key", "next", "edge_marks", "node_marks", "refs")

    def __init__(self, key: Key, height: int):
        self.key = key
        self.next: list[Optional[_ENode]] = [None] * height
        self.edge_marks: list[set[int]] = [set() for _ in range(height)]
        self.node_marks: set[int] = set()
        self.refs = 0  # stored intervals using this key as an endpoint

    @property
    def height(self) -> int:
        return len(self.next)


class IntervalSkiplist:
    def __init__(self, p: float = DEFAULT_P, max_level: int = DEFAULT_MAX_LEVEL, seed: int = 0):
        self._sampler = HeightSampler(LevelGenConfig(p=p, max_level=max_level, seed=seed))
        self._max_level = max_level
        self._head = _ENode(b"", max_level)
        self._level = 1
        self._intervals: dict[int, tuple[Key, Key]] = {}
        # id -> [("edge", node, level)... , ("node", node)...]
        self._placements: dict[int, list[tuple]] = {}
        self._next_id = 1

    def __len__(self) -> int:
        return len(self._intervals)

    def intervals(self) -> dict[int, tuple[Key, Key]]:
        return dict(self._intervals)

    # -- endpoint index ------------------------------------------------

    def _preds(self, key: Key) -> list[_ENode]:
        preds = [self._head] * self._max_level
        cur = self._head
        for i in range(self._level - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None and nxt.key < key:
                cur = nxt
                nxt = cur.next[i]
            preds[i] = cur
        return preds

    def _lookup(self, key: Key) -> Optional[_ENode]:
        node = self._preds(key)[0].next[0]
        if node is not None and node.key == key:
            return node
        return None

    def _ensure_node(self, key: Key) -> _ENode:
        preds = self._preds(key)
        node = preds[0].next[0]
        if node is not None and node.key == key:
            return node
        height = self._sampler.random_height()
        node = _ENode(key, height)
        if height > self._level:
            self._level = height
        for i in range(height):
            # splitting link preds[i] -> old target: both halves inherit
            # the old link's markers (sub-spans stay contained)
            node.next[i] = preds[i].next[i]
            preds[i].next[i] = node
            inherited = set(preds[i].edge_marks[i])
            node.edge_marks[i] = inherited
            for mark_id in inherited:
                self._placements[mark_id].append(("edge", node, i))
        return node

    def _excise_node(self, node: _ENode) -> None:
        assert node.refs == 0 and not node.node_marks
        affected: set[int] = set()
        preds = self._preds(node.key)
        for i in range(node.height):
            affected |= preds[i].edge_marks[i]
            affected |= node.edge_marks[i]
        affected &= set(self._intervals)
        for mark_id in affected:
            self._strip(mark_id)
        for i in range(node.height):
            assert preds[i].next[i] is node
            preds[i].next[i] = node.next[i]
        while self._level > 1 and self._head.next[self._level - 1] is None:
            self._level -= 1
        for mark_id in affected:
            lo, hi = self._intervals[mark_id]
            self._place(mark_id, lo, hi)

    # -- marker maintenance ---------------------------------------------

    def _place(self, mark_id: int, lo: Key, hi: Key) -> None:
        entries: list[tuple] = []
        start = self._lookup(lo)
        end = self._lookup(hi)
        assert start is not None and end is not None
        start.node_marks.add(mark_id)
        entries.append(("node", start))
        if end is not start:
            end.node_marks.add(mark_id)
            entries.append(("node", end))
        node = start
        while node is not end:
            chosen = -1
            for i in range(node.height - 1, -1, -1):
                nxt = node.next[i]
                if nxt is not None and nxt.key <= hi:
                    chosen = i
                    break
            assert chosen >= 0, "marker walk lost its way"
            node.edge_marks[chosen].add(mark_id)
            entries.append(("edge", node, chosen))
            node = node.next[chosen]
        self._placements[mark_id] = entries

    def _strip(self, mark_id: int) -> None:
        for entry in self._placements.pop(mark_id, ()):
            if entry[0] == "edge":
                entry[1].edge_marks[entry[2]].discard(mark_id)
            else:
                entry[1].node_marks.discard(mark_id)

    # -- public API -------------------------------------------------------

    def add(self, lo: Key, hi: Key) -> int:
        """Store [lo, hi] (closed ends) and return its handle.  Duplicate
        coordinate pairs get distinct handles."""
        if lo > hi:
            raise InvalidIntervalError(f"lo {lo!r} > hi {hi!r}")
        interval_id = self._next_id
        self._next_id += 1
        lo_node = self._ensure_node(lo)
        lo_node.refs += 1
        hi_node = self._ensure_node(hi)
        hi_node.refs += 1
        self._intervals[interval_id] = (lo, hi)
        self._place(interval_id, lo, hi)
        return interval_id

    def remove(self, interval_id: int) -> bool:
        """Drop a stored interval; False when the handle is unknown."""
        bounds = self._intervals.pop(interval_id, None)
        if bounds is None:
            return False
        self._strip(interval_id)
        lo, hi = bounds
        for key in {lo, hi}:
            node = self._lookup(key)
            assert node is not None
            node.refs -= 2 if lo == hi else 1
            if node.refs == 0:
                self._excise_node(node)
        return True

    def stab(self, q: Key) -> set[int]:
        """All handles of stored intervals containing q."""
        result, _ = self._stab_with_cost(q)
        return result

    def _stab_with_cost(self, q: Key) -> tuple[set[int], int]:
        result: set[int] = set()
        links = 0
        cur = self._head
        for i in range(self._level - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None and nxt.key < q:
                cur = nxt
                nxt = cur.next[i]
                links += 1
            # the one link on this level whose span covers q
            result |= cur.edge_marks[i]
        node = cur.next[0]
        if node is not None and node.key == q:
            result |= node.node_marks
        return result, links

    # -- auditing ---------------------------------------------------------

    def check_markers(self) -> list[str]:
        """Sweep every marker: containment in its interval, no orphans, and
        agreement with the placement registry."""
        violations: list[str] = []
        seen: dict[int, set[tuple]] = {i: set() for i in self._intervals}
        node = self._head
        while node is not None:
            for i in range(node.height):
                nxt = node.next[i]
                for mark_id in node.edge_marks[i]:
                    bounds = self._intervals.get(mark_id)
                    if bounds is None:
                        violations.append(f"orphan edge marker {mark_id}")
                        continue
                    lo, hi = bounds
                    if node is not self._head and node.key < lo:
                        violations.append(f"marker {mark_id} link starts below lo")
                    if node is self._head:
                        violations.append(f"marker {mark_id} on an unbounded head link")
                    if nxt is None or nxt.key > hi:
                        violations.append(f"marker {mark_id} link ends above hi")
                    seen[mark_id].add(("edge", id(node), i))
            if node is not self._head:
                for mark_id in node.node_marks:
                    bounds = self._intervals.get(mark_id)
                    if bounds is None:
                        violations.append(f"orphan node marker {mark_id}")
                        continue
                    lo, hi = bounds
                    if not lo <= node.key <= hi:
                        violations.append(f"node marker {mark_id} outside its interval")
                    seen[mark_id].add(("node", id(node)))
                if node.refs == 0:
                    violations.append(f"endpoint node {node.key!r} with no referents")
            node = node.next[0]
        for mark_id, entries in self._placements.items():
            if mark_id not in self._intervals:
                violations.append(f"registry entry for unknown interval {mark_id}")
                continue
            normalized = {
                ("edge", id(e[1]), e[2]) if e[0] == "edge" else ("node", id(e[1]))
                for e in entries
            }
            if normalized != seen.get(mark_id, set()):
                violations.append(f"registry drift for interval {mark_id}")
        return violations
