"""Search-adaptive skiplist: expensive searches promote nodes, cold nodes
decay back down.

Every new node enters at height 1, so the hierarchy is built entirely by
the workload.  During a search, bottom-level pointer chases since the
final drop-down are counted; when they exceed the promote threshold the
node where the count crossed the line is raised one level, shortening
the next walk to that neighbourhood.  Each node also counts its hits; a
decay sweep (run on demand and automatically every `decay_period`
operations) halves all counters and demotes any promoted node whose
counter reached zero.  Adaptivity only ever changes tower heights, never
answers.
"""
from __future__ import annotations

from typing import Iterator, Optional

from .core import DEFAULT_MAX_LEVEL, InvalidRangeError, Key, SearchStats, Value


class _ANode:
    __slots__ = ("key", "value", "next", "hits")

    def __init__(self, key: Key, value: Value):
        self.key = key
        self.value = value
        self.next: list[Optional[_ANode]] = []
        self.hits = 0

    @property
    def height(self) -> int:
        return len(self.next)


class AdaptiveSkiplist:
    def __init__(
        self,
        promote_threshold: int = 8,
        decay_period: int = 4096,
        max_level: int = DEFAULT_MAX_LEVEL,
    ):
        if promote_threshold < 1:
            raise ValueError("promote_threshold must be >= 1")
        if decay_period < 1:
            raise ValueError("decay_period must be >= 1")
        self._t = promote_threshold
        self._period = decay_period
        self._max_level = max_level
        self._head = _ANode(b"", b"")
        self._head.next = [None] * max_level
        self._level = 1
        self._size = 0
        self._ops = 0

    def __len__(self) -> int:
        return self._size

    @property
    def size(self) -> int:
        return self._size

    def _tick(self) -> None:
        self._ops += 1
        if self._ops % self._period == 0:
            self.decay()

    def _search(self, key: Key, stats: Optional[SearchStats]):
        """Walk to `key`, tracking what promotion needs: the predecessor
        towers and the node one past the promote threshold on the raw
        bottom walk."""
        update: list[_ANode] = [self._head] * max(self._level, 2)
        cur = self._head
        for i in range(self._level - 1, 0, -1):
            nxt = cur.next[i]
            while nxt is not None:
                if stats is not None:
                    stats.link_traversals += 1
                    stats.comparisons += 1
                if nxt.key < key:
                    cur = nxt
                    nxt = cur.next[i]
                else:
                    break
            update[i] = cur
        steps = 0
        crossing: Optional[_ANode] = None
        nxt = cur.next[0]
        while nxt is not None:
            if stats is not None:
                stats.link_traversals += 1
                stats.comparisons += 1
            if nxt.key < key:
                cur = nxt
                steps += 1
                if steps == self._t + 1:
                    crossing = cur
                nxt = cur.next[0]
            else:
                break
        update[0] = cur
        found = nxt if nxt is not None and nxt.key == key else None
        if found is not None and stats is not None:
            stats.comparisons += 1  # equality confirmation
        return found, update, crossing

    def _raise_one_level(self, node: _ANode, update: list[_ANode]) -> None:
        idx = node.height
        if idx >= self._max_level:
            return
        pred = update[idx] if idx < len(update) else self._head
        node.next.append(pred.next[idx])
        pred.next[idx] = node
        if self._level < idx + 1:
            self._level = idx + 1

    def _adapt(self, found, update: list[_ANode], crossing) -> None:
        """An expensive bottom walk promotes two nodes: the searched-for
        node itself (the hot destination grows) and the node where the
        walk crossed the threshold (the next search drops closer).  The
        destination goes first so the crossing node, which always sits
        below it in key order, splices in front of it on the next level."""
        if crossing is None:
            return
        if found is not None:
            self._raise_one_level(found, update)
        self._raise_one_level(crossing, update)

    def insert(self, key: Key, value: Value) -> Optional[Value]:
        """Upsert; the search it performs feeds promotion like any other."""
        self._tick()
        found, update, crossing = self._search(key, None)
        self._adapt(found, update, crossing)
        if found is not None:
            old = found.value
            found.value = value
            return old
        node = _ANode(key, value)
        node.next = [update[0].next[0]]
        update[0].next[0] = node
        self._size += 1
        return None

    def get(self, key: Key) -> Optional[Value]:
        value, _ = self.get_traced(key)
        return value

    def get_traced(self, key: Key) -> tuple[Optional[Value], SearchStats]:
        self._tick()
        stats = SearchStats()
        found, update, crossing = self._search(key, stats)
        self._adapt(found, update, crossing)
        if found is None:
            return None, stats
        found.hits += 1
        return found.value, stats

    def remove(self, key: Key) -> Optional[Value]:
        # removal is plain ordered-map maintenance; it feeds no promotion
        self._tick()
        found, update, _ = self._search(key, None)
        if found is None:
            return None
        for i in range(found.height):
            if update[i].next[i] is found:
                update[i].next[i] = found.next[i]
        while self._level > 1 and self._head.next[self._level - 1] is None:
            self._level -= 1
        self._size -= 1
        return found.value

    def range_scan(self, lo: Key, hi: Key) -> list[tuple[Key, Value]]:
        if lo > hi:
            raise InvalidRangeError(f"lo {lo!r} > hi {hi!r}")
        self._tick()
        _, update, _ = self._search(lo, None)
        out = []
        node = update[0].next[0]
        while node is not None and node.key <= hi:
            out.append((node.key, node.value))
            node = node.next[0]
        return out

    def height_of(self, key: Key) -> Optional[int]:
        """Current tower height of the key's node; purely observational."""
        cur = self._head
        for i in range(self._level - 1, -1, -1):
            nxt = cur.next[i]
            while nxt is not None and nxt.key < key:
                cur = nxt
                nxt = cur.next[i]
            if nxt is not None and nxt.key == key:
                return len(nxt.next)
        return None

    def decay(self) -> int:
        """Halve all hit counters and demote one level every promoted node
        whose counter reached zero.  Returns the demotion count."""
        demoted = 0
        node = self._head.next[0]
        flagged = []
        while node is not None:
            node.hits //= 2
            if node.hits == 0 and node.height >= 2:
                flagged.append(node)
            node = node.next[0]
        flag_set = {id(n) for n in flagged}
        for i in range(self._level - 1, 0, -1):
            pred = self._head
            node = pred.next[i]
            while node is not None:
                if id(node) in flag_set and node.height == i + 1:
                    flag_set.discard(id(node))  # one level per sweep
                    pred.next[i] = node.next[i]
                    node.next.pop()
                    demoted += 1
                    node = pred.next[i]
                else:
                    pred = node
                    node = node.next[i]
        while self._level > 1 and self._head.next[self._level - 1] is None:
            self._level -= 1
        return demoted

    def items(self) -> Iterator[tuple[Key, Value]]:
        node = self._head.next[0]
        while node is not None:
            yield node.key, node.value
            node = node.next[0]
