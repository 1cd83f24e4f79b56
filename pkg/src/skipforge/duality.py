"""Structural conversion between the 1-2-3 skiplist and a 2-3-4 tree.

The two shapes encode the same object: a gap of 1-3 height-(h-1) nodes
between consecutive taller bounds in the skiplist is exactly one tree
node holding those 1-3 keys, and a key's tree depth is the list height
minus its node height.  Values ride along so the conversion round-trips
whole maps, not just key sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import Key, Value
from .deterministic import DetSkiplist, _DNode


class InvalidInputError(ValueError):
    """Input structure fails its own validity check."""


@dataclass
class TreeNode:
    keys: list[Key]
    values: list[Value]
    children: list["TreeNode"] = field(default_factory=list)


@dataclass
class TwoThreeFourTree:
    root: Optional[TreeNode] = None


@dataclass
class TreeReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


def validate_tree(tree: TwoThreeFourTree) -> TreeReport:
    """Check node arity, uniform leaf depth, and strict key ordering."""
    violations: list[str] = []
    if tree.root is None:
        return TreeReport(ok=True)
    leaf_depths: set[int] = set()

    def walk(node: TreeNode, depth: int, lo: Optional[Key], hi: Optional[Key]) -> None:
        if not 1 <= len(node.keys) <= 3:
            violations.append(f"node with {len(node.keys)} keys at depth {depth}")
        if len(node.values) != len(node.keys):
            violations.append(f"key/value arity mismatch at depth {depth}")
        for a, b in zip(node.keys, node.keys[1:]):
            if a >= b:
                violations.append(f"unsorted keys {a!r} >= {b!r} at depth {depth}")
        for k in node.keys:
            if lo is not None and k <= lo:
                violations.append(f"key {k!r} not above left bound {lo!r}")
            if hi is not None and k >= hi:
                violations.append(f"key {k!r} not below right bound {hi!r}")
        if not node.children:
            leaf_depths.add(depth)
            return
        if len(node.children) != len(node.keys) + 1:
            violations.append(
                f"{len(node.children)} children for {len(node.keys)} keys at depth {depth}"
            )
            return
        bounds = [lo] + list(node.keys) + [hi]
        for i, child in enumerate(node.children):
            walk(child, depth + 1, bounds[i], bounds[i + 1])

    walk(tree.root, 0, None, None)
    if len(leaf_depths) > 1:
        violations.append(f"leaves at unequal depths {sorted(leaf_depths)}")
    return TreeReport(ok=not violations, violations=violations)


def to_tree(s: DetSkiplist) -> TwoThreeFourTree:
    """Read a valid 1-2-3 skiplist into its 2-3-4 tree twin."""
    report = s.check_invariants()
    if not report.ok:
        raise InvalidInputError("; ".join(report.violations))
    if len(s) == 0:
        return TwoThreeFourTree(root=None)
    head = s._head

    def build(bound: _DNode, i: int) -> TreeNode:
        members = s._gap_members(bound, i)
        node = TreeNode(
            keys=[m.key for m in members],
            values=[m.value for m in members],
        )
        if i > 0:
            node.children = [build(b, i - 1) for b in [bound] + members]
        return node

    return TwoThreeFourTree(root=build(head, len(head.next) - 1))


def from_tree(tree: TwoThreeFourTree) -> DetSkiplist:
    """Rebuild the skiplist whose gaps are the given tree's nodes."""
    report = validate_tree(tree)
    if not report.ok:
        raise InvalidInputError("; ".join(report.violations))
    s = DetSkiplist()
    if tree.root is None:
        return s
    depth = 0
    node = tree.root
    while node.children:
        node = node.children[0]
        depth += 1
    height = depth + 1

    entries: list[tuple[Key, Value, int]] = []

    def walk(node: TreeNode, depth: int) -> None:
        h = height - depth
        if not node.children:
            for k, v in zip(node.keys, node.values):
                entries.append((k, v, h))
            return
        for i, child in enumerate(node.children):
            walk(child, depth + 1)
            if i < len(node.keys):
                entries.append((node.keys[i], node.values[i], h))

    walk(tree.root, 0)
    head = s._head
    head.next = [None] * height
    tails: list[_DNode] = [head] * height
    for key, value, h in entries:
        fresh = _DNode(key, value)
        fresh.next = [None] * h
        for lvl in range(h):
            tails[lvl].next[lvl] = fresh
            tails[lvl] = fresh
    s._size = len(entries)
    check = s.check_invariants()
    if not check.ok:
        raise InvalidInputError("; ".join(check.violations))
    return s
