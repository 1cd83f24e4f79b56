"""Non-blocking concurrent skiplist: atomic conditional link updates plus
logical deletion marks.

Every link slot holds one ``(successor, marked)`` pair that is replaced
atomically; a marked bottom link makes its node logically absent before
any physical unlinking happens.  Traversals help: when a search walks
onto a marked node it swings the predecessor's link past it with the
same conditional update and retries, so unlinking needs no coordination
beyond the link updates themselves.

The conditional update (compare the current pair, then swap it) is
emulated with one tiny per-node mutex held only for the compare and the
assignment; readers never take it, they just load the pair.  Membership
is defined at the bottom level, so a failed upper-level splice is simply
abandoned and the node keeps a shorter effective height.  Storage
reclamation is the runtime's garbage collector, which by construction
never recycles a node while any traversal can still reach it.

Inserting an existing key reports AlreadyPresent instead of overwriting;
multi-version semantics live in the memtable built on top of this.
"""
from __future__ import annotations

import threading
from typing import Iterator, Optional

from .core import (
    DEFAULT_MAX_LEVEL,
    DEFAULT_P,
    HeightSampler,
    Key,
    LevelGenConfig,
    SearchStats,
)

INSERTED = "inserted"
ALREADY_PRESENT = "already_present"


class _CNode:
    __slots__ = ("key", "value", "links", "lock")

    def __init__(self, key, value, height: int):
        self.key = key
        self.value = value
        # links[i] = (successor, marked); replaced as a whole
        self.links: list[tuple[Optional[_CNode], bool]] = [(None, False)] * height
        self.lock = threading.Lock()

    @property
    def height(self) -> int:
        return len(self.links)


def _cas(node: _CNode, level: int, expected: tuple, new: tuple) -> bool:
    with node.lock:
        cur = node.links[level]
        if cur[0] is expected[0] and cur[1] == expected[1]:
            node.links[level] = new
            return True
        return False


class ConcurrentSkiplist:
    """Linearizable insert/remove/get; weakly consistent ascending scans."""

    def __init__(self, p: float = DEFAULT_P, max_level: int = DEFAULT_MAX_LEVEL, seed: int = 0):
        self._max_level = max_level
        self._head = _CNode(None, None, max_level)
        self._sampler = HeightSampler(LevelGenConfig(p=p, max_level=max_level, seed=seed))
        self._height_lock = threading.Lock()

    def _random_height(self) -> int:
        with self._height_lock:
            return self._sampler.random_height()

    def _find(self, key: Key):
        """Predecessor/successor towers for `key`, unlinking marked nodes
        on the way.  Restarts whenever a helping update loses a race."""
        head = self._head
        while True:
            preds = [head] * self._max_level
            succs: list[Optional[_CNode]] = [None] * self._max_level
            pred = head
            retry = False
            for level in range(self._max_level - 1, -1, -1):
                curr = pred.links[level][0]
                while curr is not None:
                    succ, marked = curr.links[level]
                    if marked:
                        if not _cas(pred, level, (curr, False), (succ, False)):
                            retry = True
                            break
                        curr = succ
                        continue
                    if curr.key < key:
                        pred = curr
                        curr = succ
                    else:
                        break
                if retry:
                    break
                preds[level] = pred
                succs[level] = curr
            if retry:
                continue
            bottom = succs[0]
            found = bottom if bottom is not None and bottom.key == key else None
            return preds, succs, found

    def insert(self, key: Key, value) -> str:
        """Returns INSERTED or ALREADY_PRESENT; the successful bottom-level
        splice is the linearization point."""
        height = self._random_height()
        while True:
            preds, succs, found = self._find(key)
            if found is not None:
                return ALREADY_PRESENT
            node = _CNode(key, value, height)
            for i in range(height):
                node.links[i] = (succs[i], False)
            if not _cas(preds[0], 0, (succs[0], False), (node, False)):
                continue
            for i in range(1, height):
                if not _cas(preds[i], i, (succs[i], False), (node, False)):
                    break  # abandoned: the node keeps a shorter effective height
            return INSERTED

    def remove(self, key: Key):
        """Returns the removed value, or None when the key is absent.  The
        successful bottom-link mark is the linearization point."""
        preds, succs, found = self._find(key)
        if found is None:
            return None
        victim = found
        for level in range(victim.height - 1, 0, -1):
            succ, marked = victim.links[level]
            while not marked:
                _cas(victim, level, (succ, False), (succ, True))
                succ, marked = victim.links[level]
        while True:
            succ, marked = victim.links[0]
            if marked:
                return None  # another remover won the race
            if _cas(victim, 0, (succ, False), (succ, True)):
                self._find(key)  # help unlink the victim everywhere
                return victim.value

    def get(self, key: Key):
        """Wait-free read: skips marked nodes without helping."""
        pred = self._head
        curr = None
        for level in range(self._max_level - 1, -1, -1):
            curr = pred.links[level][0]
            while curr is not None:
                succ, marked = curr.links[level]
                if marked:
                    curr = succ
                    continue
                if curr.key < key:
                    pred = curr
                    curr = succ
                else:
                    break
        if curr is not None and curr.key == key and not curr.links[0][1]:
            return curr.value
        return None

    def get_traced(self, key: Key) -> tuple[Optional[object], SearchStats]:
        stats = SearchStats()
        pred = self._head
        curr = None
        for level in range(self._max_level - 1, -1, -1):
            curr = pred.links[level][0]
            while curr is not None:
                stats.link_traversals += 1
                succ, marked = curr.links[level]
                if marked:
                    curr = succ
                    continue
                stats.comparisons += 1
                if curr.key < key:
                    pred = curr
                    curr = succ
                else:
                    break
        if curr is not None and curr.key == key and not curr.links[0][1]:
            return curr.value, stats
        return None, stats

    def _first_at_least(self, key: Key) -> Optional[_CNode]:
        pred = self._head
        curr = None
        for level in range(self._max_level - 1, -1, -1):
            curr = pred.links[level][0]
            while curr is not None:
                succ, marked = curr.links[level]
                if marked or curr.key < key:
                    if not marked:
                        pred = curr
                    curr = succ
                else:
                    break
        return curr

    def iterate_ascending(
        self, lo: Optional[Key] = None, hi: Optional[Key] = None
    ) -> Iterator[tuple[Key, object]]:
        """Weakly consistent scan of unmarked nodes in key order.

        Keys present for the whole scan appear exactly once; keys mutated
        mid-scan may or may not.  Yields strictly ascending keys and
        raises if the walk ever observes otherwise.
        """
        node = self._head.links[0][0] if lo is None else self._first_at_least(lo)
        last: Optional[Key] = None
        while node is not None:
            succ, marked = node.links[0]
            if not marked:
                if hi is not None and node.key > hi:
                    return
                if last is not None and node.key <= last:
                    raise AssertionError("bottom level order violated during scan")
                last = node.key
                yield node.key, node.value
            node = succ

    def __len__(self) -> int:
        return sum(1 for _ in self.iterate_ascending())

    def check_quiescent(self) -> list[str]:
        """Structural sweep valid only with no in-flight operations."""
        violations: list[str] = []
        bottom_ids = set()
        keys = []
        node = self._head.links[0][0]
        while node is not None:
            succ, marked = node.links[0]
            if not marked:
                bottom_ids.add(id(node))
                keys.append(node.key)
            node = succ
        for a, b in zip(keys, keys[1:]):
            if a >= b:
                violations.append(f"bottom level unsorted or duplicated at {b!r}")
        for level in range(1, self._max_level):
            node = self._head.links[level][0]
            while node is not None:
                succ, marked = node.links[level]
                if not marked and not node.links[0][1] and id(node) not in bottom_ids:
                    violations.append(
                        f"level {level + 1} node {node.key!r} unreachable at bottom"
                    )
                node = succ
        return violations
