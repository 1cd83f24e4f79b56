"""Multi-version memtable: per-key version chains over the concurrent
skiplist, snapshots, tombstones, freeze, and a bit-exact flush.

Each write allocates a fresh sequence number and prepends an immutable
version record to its key's chain, so a reader resolving through a
snapshot just walks the chain to the newest entry at or below its
horizon.  Snapshots capture the published watermark: the highest
sequence number below which every write has finished linking.  Reading
the raw allocation counter instead would let a snapshot claim a sequence
that some still-in-flight writer owns, breaking repeatable reads, so the
watermark (still a single O(1) read) is what a snapshot stores.

All versions are retained until flush; nothing is garbage collected, so
reads through any snapshot stay repeatable forever.

Flush serializes every version of every key, keys ascending and versions
newest-first, in the sorted-run layout below (integers little-endian):

    magic "SLR1" | record_count u64 | records... | crc32c u32

    record = key_len u32 | key | seq u64 | kind u8 | val_len u32 | value
    kind 0 = value, kind 1 = tombstone (val_len 0)

The checksum is CRC32C (Castagnoli) over every preceding byte.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Optional

from .concurrent import INSERTED, ConcurrentSkiplist
from .core import DEFAULT_MAX_LEVEL, DEFAULT_P, InvalidRangeError, Key, Value

MAGIC = b"SLR1"


class VersionKind(IntEnum):
    VALUE = 0
    TOMBSTONE = 1


class _Sentinel:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name


#: get() outcomes that are not a value
ABSENT = _Sentinel("ABSENT")
DELETED = _Sentinel("DELETED")


class FrozenError(RuntimeError):
    """Mutation attempted after freeze."""


class AlreadyFrozenError(FrozenError):
    """freeze() called twice."""


class NotFrozenError(RuntimeError):
    """flush() requires a frozen memtable."""


class SinkFailure(RuntimeError):
    """A flush sink refused a write; the memtable itself is unharmed."""


class CorruptFile(ValueError):
    pass


class BadMagic(CorruptFile):
    pass


class TruncatedFile(CorruptFile):
    pass


class ChecksumMismatch(CorruptFile):
    pass


# -- CRC32C (Castagnoli), reflected polynomial 0x82F63B78 ----------------

_CRC32C_TABLE = []
for _i in range(256):
    _c = _i
    for _ in range(8):
        _c = (_c >> 1) ^ 0x82F63B78 if _c & 1 else _c >> 1
    _CRC32C_TABLE.append(_c)


def crc32c(data: bytes, crc: int = 0) -> int:
    crc ^= 0xFFFFFFFF
    table = _CRC32C_TABLE
    for b in data:
        crc = table[(crc ^ b) & 0xFF] ^ (crc >> 8)
    return crc ^ 0xFFFFFFFF


class _Version:
    __slots__ = ("seq", "value", "older")

    def __init__(self, seq: int, value: Optional[Value], older: Optional["_Version"]):
        self.seq = seq
        self.value = value  # None encodes a tombstone
        self.older = older


class _Chain:
    __slots__ = ("head", "lock")

    def __init__(self):
        self.head: Optional[_Version] = None
        self.lock = threading.Lock()

    def link(self, seq: int, value: Optional[Value]) -> None:
        """Insert a version keeping sequence numbers strictly descending.

        Almost always a head prepend; when a slower writer arrives with an
        older sequence the prefix above its slot is rebuilt so concurrent
        readers only ever observe fully formed chains.
        """
        with self.lock:
            head = self.head
            if head is None or seq > head.seq:
                self.head = _Version(seq, value, head)
                return
            prefix = []
            node = head
            while node is not None and node.seq > seq:
                prefix.append(node)
                node = node.older
            assert node is None or node.seq != seq, "sequence reused within a chain"
            rebuilt = _Version(seq, value, node)
            for p in reversed(prefix):
                rebuilt = _Version(p.seq, p.value, rebuilt)
            self.head = rebuilt

    def resolve(self, visible_seq: int):
        node = self.head
        while node is not None and node.seq > visible_seq:
            node = node.older
        return node

    def versions(self) -> list[tuple[int, Optional[Value]]]:
        out = []
        node = self.head
        while node is not None:
            out.append((node.seq, node.value))
            node = node.older
        return out


@dataclass(frozen=True)
class Snapshot:
    """Immutable visibility horizon; reads through it are repeatable."""

    visible_seq: int


class Memtable:
    """Concurrent multi-version write buffer with snapshot reads."""

    def __init__(self, p: float = DEFAULT_P, max_level: int = DEFAULT_MAX_LEVEL, seed: int = 0):
        self._index = ConcurrentSkiplist(p=p, max_level=max_level, seed=seed)
        self._cond = threading.Condition()
        self._next_seq = 1
        self._inflight: set[int] = set()
        self._visible = 0
        self._frozen = False
        self._approx_bytes = 0

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def approximate_bytes(self) -> int:
        return self._approx_bytes

    def _begin_write(self, nbytes: int) -> int:
        with self._cond:
            if self._frozen:
                raise FrozenError("memtable is frozen")
            seq = self._next_seq
            self._next_seq += 1
            self._inflight.add(seq)
            self._approx_bytes += nbytes
            return seq

    def _end_write(self, seq: int) -> None:
        with self._cond:
            self._inflight.discard(seq)
            if self._inflight:
                self._visible = min(self._inflight) - 1
            else:
                self._visible = self._next_seq - 1
            self._cond.notify_all()

    def _chain_for(self, key: Key) -> _Chain:
        index = self._index
        while True:
            chain = index.get(key)
            if chain is not None:
                return chain
            fresh = _Chain()
            if index.insert(key, fresh) == INSERTED:
                return fresh

    def put(self, key: Key, value: Value) -> int:
        seq = self._begin_write(len(key) + len(value))
        try:
            self._chain_for(key).link(seq, value)
        finally:
            self._end_write(seq)
        return seq

    def delete(self, key: Key) -> int:
        """Record a tombstone; deleting a never-written key still succeeds,
        since lower storage levels may hold the key."""
        seq = self._begin_write(len(key))
        try:
            self._chain_for(key).link(seq, None)
        finally:
            self._end_write(seq)
        return seq

    def snapshot(self) -> Snapshot:
        with self._cond:
            return Snapshot(self._visible)

    def get(self, key: Key, snap: Snapshot):
        """Newest version at or below the snapshot: its value, DELETED for
        a tombstone, or ABSENT when nothing qualifies."""
        chain = self._index.get(key)
        if chain is None:
            return ABSENT
        version = chain.resolve(snap.visible_seq)
        if version is None:
            return ABSENT
        return DELETED if version.value is None else version.value

    def get_traced(self, key: Key, snap: Snapshot):
        """get() plus the index search cost, for benchmark metering."""
        chain, stats = self._index.get_traced(key)
        if chain is None:
            return ABSENT, stats
        version = chain.resolve(snap.visible_seq)
        if version is None:
            return ABSENT, stats
        return (DELETED if version.value is None else version.value), stats

    def scan(self, lo: Key, hi: Key, snap: Snapshot) -> list[tuple[Key, Value]]:
        if lo > hi:
            raise InvalidRangeError(f"lo {lo!r} > hi {hi!r}")
        out = []
        for key, chain in self._index.iterate_ascending(lo=lo, hi=hi):
            version = chain.resolve(snap.visible_seq)
            if version is not None and version.value is not None:
                out.append((key, version.value))
        return out

    def freeze(self) -> None:
        """One-way transition; returns once in-flight writes have drained,
        so everything that obtained a sequence number is linked."""
        with self._cond:
            if self._frozen:
                raise AlreadyFrozenError("memtable already frozen")
            self._frozen = True
            while self._inflight:
                self._cond.wait()

    def flush(self, sink) -> int:
        """Serialize the frozen memtable into `sink`; returns records written."""
        if not self._frozen:
            raise NotFrozenError("flush requires a frozen memtable")
        entries = [(key, chain.versions()) for key, chain in self._index.iterate_ascending()]
        count = sum(len(v) for _, v in entries)
        crc = 0

        def emit(chunk: bytes) -> None:
            nonlocal crc
            try:
                sink.write(chunk)
            except Exception as exc:
                raise SinkFailure(f"sink write failed: {exc}") from exc
            crc = crc32c(chunk, crc)

        emit(MAGIC)
        emit(count.to_bytes(8, "little"))
        for key, versions in entries:
            for seq, value in versions:
                kind = VersionKind.TOMBSTONE if value is None else VersionKind.VALUE
                payload = b"" if value is None else value
                emit(
                    len(key).to_bytes(4, "little")
                    + key
                    + seq.to_bytes(8, "little")
                    + bytes([kind])
                    + len(payload).to_bytes(4, "little")
                    + payload
                )
        final = crc.to_bytes(4, "little")
        try:
            sink.write(final)
        except Exception as exc:
            raise SinkFailure(f"sink write failed: {exc}") from exc
        return count


def load(data: bytes) -> Iterator[tuple[Key, int, VersionKind, Optional[Value]]]:
    """Parse sorted-run bytes back into (key, seq, kind, value) records.

    The whole file is validated, checksum included, before anything is
    yielded; bad magic, truncation, and checksum damage raise distinct
    CorruptFile subtypes.
    """
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic(f"expected magic {MAGIC!r}")
    if len(data) < 16:
        raise TruncatedFile("file shorter than header plus checksum")
    count = int.from_bytes(data[4:12], "little")
    pos = 12
    records = []
    for i in range(count):
        def take(n: int, what: str) -> bytes:
            nonlocal pos
            if pos + n > len(data) - 4:
                raise TruncatedFile(f"record {i}: truncated {what}")
            chunk = data[pos : pos + n]
            pos += n
            return chunk

        key_len = int.from_bytes(take(4, "key length"), "little")
        key = take(key_len, "key")
        seq = int.from_bytes(take(8, "sequence"), "little")
        kind_byte = take(1, "kind")[0]
        if kind_byte not in (0, 1):
            raise TruncatedFile(f"record {i}: unknown kind {kind_byte}")
        kind = VersionKind(kind_byte)
        val_len = int.from_bytes(take(4, "value length"), "little")
        if kind is VersionKind.TOMBSTONE and val_len != 0:
            raise TruncatedFile(f"record {i}: tombstone with value bytes")
        value = take(val_len, "value") if kind is VersionKind.VALUE else None
        records.append((key, seq, kind, value))
    if pos != len(data) - 4:
        raise TruncatedFile("trailing bytes before checksum")
    stored = int.from_bytes(data[-4:], "little")
    actual = crc32c(data[:-4])
    if stored != actual:
        raise ChecksumMismatch(f"stored {stored:#010x}, computed {actual:#010x}")
    return iter(records)
