import threading

import pytest

from skipforge import (
    ABSENT,
    DELETED,
    InvalidRangeError,
    Memtable,
    Snapshot,
    SplitMix64,
    encode_u64,
)
from skipforge.memtable import AlreadyFrozenError, FrozenError


def k(i):
    return encode_u64(i)


def test_put_sequences_increase():
    m = Memtable()
    s1 = m.put(b"k", b"v1")
    s2 = m.put(b"k", b"v2")
    assert s2 > s1
    assert m.get(b"k", Snapshot(s1)) == b"v1"
    assert m.get(b"k", Snapshot(s2)) == b"v2"


def test_get_absent_and_below_first_seq():
    m = Memtable()
    assert m.get(b"nope", m.snapshot()) is ABSENT
    s = m.put(b"a", b"1")
    assert m.get(b"a", Snapshot(s - 1)) is ABSENT


def test_delete_never_written_key_records_tombstone():
    m = Memtable()
    seq = m.delete(b"ghost")
    assert m.get(b"ghost", Snapshot(seq)) is DELETED


def test_put_delete_visibility():
    m = Memtable()
    s1 = m.put(b"x", b"v")
    s2 = m.delete(b"x")
    assert m.get(b"x", Snapshot(s1)) == b"v"
    assert m.get(b"x", Snapshot(s2)) is DELETED


def test_snapshot_sees_nothing_on_fresh_table():
    m = Memtable()
    snap = m.snapshot()
    m.put(b"later", b"v")
    assert m.get(b"later", snap) is ABSENT


def test_writes_after_snapshot_invisible():
    m = Memtable()
    m.put(b"a", b"1")
    snap = m.snapshot()
    m.put(b"a", b"2")
    m.delete(b"a")
    assert m.get(b"a", snap) == b"1"


def test_scan_resolves_through_snapshot():
    m = Memtable()
    m.put(k(1), b"one")
    m.put(k(2), b"two")
    m.delete(k(1))
    snap_after_delete = m.snapshot()
    m.put(k(3), b"three")
    assert m.scan(k(0), k(9), snap_after_delete) == [(k(2), b"two")]
    assert m.scan(k(0), k(9), m.snapshot()) == [(k(2), b"two"), (k(3), b"three")]
    assert m.scan(k(5), k(9), m.snapshot()) == []
    with pytest.raises(InvalidRangeError):
        m.scan(k(2), k(1), m.snapshot())


def test_freeze_semantics():
    m = Memtable()
    m.put(b"a", b"1")
    snap = m.snapshot()
    m.freeze()
    with pytest.raises(FrozenError):
        m.put(b"b", b"2")
    with pytest.raises(FrozenError):
        m.delete(b"a")
    with pytest.raises(AlreadyFrozenError):
        m.freeze()
    assert m.get(b"a", snap) == b"1"
    assert m.scan(b"", b"z", m.snapshot()) == [(b"a", b"1")]


def test_approximate_bytes_upper_bounds_payload():
    m = Memtable()
    payload = 0
    rng = SplitMix64(4)
    for i in range(500):
        key = k(rng.next_below(50))
        value = bytes(rng.next_below(40))
        m.put(key, value)
        payload += len(key) + len(value)
    assert m.approximate_bytes >= payload


def test_sequential_fuzz_against_versioned_oracle():
    m = Memtable()
    rng = SplitMix64(99)
    history = {}  # key -> list of (seq, value-or-None)
    snaps = []
    for step in range(30_000):
        op = rng.next_below(10)
        key = k(rng.next_below(200))
        if op < 5:
            value = encode_u64(step)
            seq = m.put(key, value)
            history.setdefault(key, []).append((seq, value))
        elif op < 7:
            seq = m.delete(key)
            history.setdefault(key, []).append((seq, None))
        elif op == 7 and snaps:
            snap = snaps[rng.next_below(len(snaps))]
            got = m.get(key, snap)
            versions = [v for s, v in history.get(key, []) if s <= snap.visible_seq]
            if not versions:
                assert got is ABSENT
            elif versions[-1] is None:
                assert got is DELETED
            else:
                assert got == versions[-1]
        else:
            snaps.append(m.snapshot())
    # final full-range scan equals oracle resolution at the latest snapshot
    snap = m.snapshot()
    expected = []
    for key in sorted(history):
        versions = [v for s, v in history[key] if s <= snap.visible_seq]
        if versions and versions[-1] is not None:
            expected.append((key, versions[-1]))
    assert m.scan(k(0), k(10**6), snap) == expected


def test_snapshot_repeatable_under_concurrent_writers():
    m = Memtable(max_level=16)
    for i in range(200):
        m.put(k(i), b"base")
    stop = threading.Event()

    def writer(wid):
        rng = SplitMix64(wid)
        while not stop.is_set():
            key = k(rng.next_below(200))
            if rng.next_below(3) == 0:
                m.delete(key)
            else:
                m.put(key, encode_u64(rng.next_below(1000)))

    writers = [threading.Thread(target=writer, args=(i,)) for i in range(4)]
    for t in writers:
        t.start()
    try:
        for _ in range(40):
            snap = m.snapshot()
            first = [m.get(k(i), snap) for i in range(200)]
            first_scan = m.scan(k(0), k(199), snap)
            for _ in range(3):
                assert [m.get(k(i), snap) for i in range(200)] == first
                assert m.scan(k(0), k(199), snap) == first_scan
    finally:
        stop.set()
        for t in writers:
            t.join()


def test_concurrent_writers_monotone_distinct_seqs():
    m = Memtable(max_level=16)
    seqs = [[] for _ in range(6)]

    def writer(wid):
        rng = SplitMix64(wid + 50)
        for _ in range(2000):
            seqs[wid].append(m.put(k(rng.next_below(100)), b"v"))

    threads = [threading.Thread(target=writer, args=(i,)) for i in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for per_writer in seqs:
        assert per_writer == sorted(per_writer)  # issue order per writer
    merged = [s for per in seqs for s in per]
    assert len(merged) == len(set(merged))


def test_chain_sequences_strictly_descend():
    m = Memtable(max_level=16)

    def writer(wid):
        rng = SplitMix64(wid + 90)
        for _ in range(3000):
            key = k(rng.next_below(50))
            if rng.next_below(4) == 0:
                m.delete(key)
            else:
                m.put(key, b"v")

    threads = [threading.Thread(target=writer, args=(i,)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for _, chain in m._index.iterate_ascending():
        seqs = [s for s, _ in chain.versions()]
        assert seqs == sorted(seqs, reverse=True)
        assert len(seqs) == len(set(seqs))


def test_freeze_includes_writes_that_obtained_seqs():
    m = Memtable(max_level=16)
    started = threading.Barrier(5)
    results = []
    lock = threading.Lock()

    def writer(wid):
        started.wait()
        try:
            seq = m.put(k(wid), encode_u64(wid))
            with lock:
                results.append((wid, seq))
        except FrozenError:
            pass

    threads = [threading.Thread(target=writer, args=(i,)) for i in range(4)]
    for t in threads:
        t.start()
    started.wait()
    m.freeze()
    for t in threads:
        t.join()
    snap = m.snapshot()
    for wid, seq in results:
        assert seq <= snap.visible_seq
        assert m.get(k(wid), snap) == encode_u64(wid)
