import pytest

from skipforge import DetSkiplist, InvalidRangeError, SplitMix64, encode_u64
from skipforge.deterministic import _DNode


def k(i):
    return encode_u64(i)


def test_single_insert():
    s = DetSkiplist()
    assert s.insert(k(1), b"v") is None
    assert len(s) == 1 and s.height == 1
    assert s.get(k(1)) == b"v"


def test_upsert_returns_previous():
    s = DetSkiplist()
    s.insert(k(1), b"a")
    assert s.insert(k(1), b"b") == b"a"
    assert len(s) == 1


def test_get_empty():
    assert DetSkiplist().get(k(0)) is None


def test_remove_from_empty():
    assert DetSkiplist().remove(k(0)) is None


def test_insert_then_full_drain():
    s = DetSkiplist()
    for i in range(1, 101):
        s.insert(k(i), k(i))
    for i in range(1, 101):
        assert s.remove(k(i)) == k(i)
    assert len(s) == 0 and s.height == 1
    assert s.check_invariants().ok


def test_random_inserts_keep_gap_invariant():
    s = DetSkiplist()
    rng = SplitMix64(17)
    for step in range(10_000):
        s.insert(k(rng.next_below(1 << 32)), k(step))
        if step % 100 == 99:
            report = s.check_invariants()
            assert report.ok, (step, report.violations)


def test_mixed_workload_matches_oracle():
    s = DetSkiplist()
    ref = {}
    rng = SplitMix64(23)
    for step in range(40_000):
        op = rng.next_below(3)
        key = k(rng.next_below(600))
        if op < 2:
            value = encode_u64(step)
            assert s.insert(key, value) == ref.get(key)
            ref[key] = value
        else:
            assert s.remove(key) == ref.pop(key, None)
        if step % 1000 == 999:
            assert s.check_invariants().ok
    assert list(s.items()) == sorted(ref.items())


def test_range_scan_and_errors():
    s = DetSkiplist()
    for i in (1, 3, 5, 7):
        s.insert(k(i), k(i))
    assert [a for a, _ in s.range_scan(k(2), k(6))] == [k(3), k(5)]
    with pytest.raises(InvalidRangeError):
        s.range_scan(k(4), k(2))


def test_height_bound_throughout():
    s = DetSkiplist()
    rng = SplitMix64(29)
    for step in range(1, 5001):
        s.insert(k(rng.next_below(1 << 40)), b"v")
        assert s.height <= len(s).bit_length()


def test_worst_case_search_bound():
    # bulk load 2^10 keys, search each: comparisons <= 4*log2(n) + 8
    s = DetSkiplist()
    n = 1 << 10
    for i in range(n):
        s.insert(k(i), k(i))
    assert s.check_invariants().ok
    worst = 0
    for i in range(n):
        value, stats = s.get_traced(k(i))
        assert value == k(i)
        worst = max(worst, stats.comparisons)
    assert worst <= 4 * 10 + 8, worst


def test_worst_case_bound_at_scale():
    # empirical ceiling over every present key at n = 2^16
    s = DetSkiplist()
    rng = SplitMix64(3)
    n = 1 << 16
    keys = set()
    while len(keys) < n:
        keys.add(rng.next_u64() >> 20)
    for v in keys:
        s.insert(k(v), b"v")
    assert s.check_invariants().ok
    worst = 0
    for v in keys:
        _, stats = s.get_traced(k(v))
        worst = max(worst, stats.comparisons)
    assert worst <= 4 * 16 + 8, worst


def test_determinism_bit_for_bit():
    def build():
        s = DetSkiplist()
        rng = SplitMix64(5)
        for step in range(3000):
            key = k(rng.next_below(300))
            if rng.next_below(3) == 0:
                s.remove(key)
            else:
                s.insert(key, encode_u64(step))
        return s.structure_signature(), s.height

    assert build() == build()


def test_check_invariants_empty_ok():
    assert DetSkiplist().check_invariants().ok


def test_check_invariants_reports_oversized_gap():
    # hand-build head -> four height-1 nodes (a 4-gap) under one level
    s = DetSkiplist()
    nodes = [_DNode(k(i), b"v") for i in range(4)]
    for i, node in enumerate(nodes):
        node.next = [nodes[i + 1] if i + 1 < 4 else None]
    s._head.next = [nodes[0]]
    s._size = 4
    report = s.check_invariants()
    assert not report.ok
    assert any("gap of 4" in v for v in report.violations)


def test_check_invariants_names_level_and_gap():
    s = DetSkiplist()
    for i in range(40):
        s.insert(k(i), b"v")
    # corrupt: demote a tall node's link array length without relinking
    node = s._head.next[0]
    while node is not None and len(node.next) < 2:
        node = node.next[0]
    assert node is not None
    node.next.append(None)  # claim an extra level it is not linked on
    report = s.check_invariants()
    assert not report.ok
