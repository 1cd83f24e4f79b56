"""skipforge: a family of skiplist ordered-map variants behind one
contract, plus a seedable benchmark harness.

Variants: the classic probabilistic list (optionally unrolled), the
deterministic 1-2-3 list with its 2-3-4 tree converter, a lock-free
concurrent list, a multi-version memtable with a bit-exact flush format,
an interval list for stabbing queries, and a search-adaptive list.
"""

from .adaptive import AdaptiveSkiplist
from .bench import (
    MetricsRow,
    WorkloadSpec,
    ZipfSampler,
    emit_csv,
    generate,
    run,
)
from .classic import ClassicSkiplist
from .concurrent import ALREADY_PRESENT, INSERTED, ConcurrentSkiplist
from .core import (
    HeightSampler,
    InvalidRangeError,
    LevelGenConfig,
    Ordering,
    SearchStats,
    SplitMix64,
    compare,
    decode_u64,
    encode_u64,
)
from .deterministic import DetSkiplist
from .duality import (
    InvalidInputError,
    TreeNode,
    TwoThreeFourTree,
    from_tree,
    to_tree,
    validate_tree,
)
from .interval import IntervalSkiplist, InvalidIntervalError
from .memtable import (
    ABSENT,
    DELETED,
    Memtable,
    Snapshot,
    VersionKind,
    crc32c,
    load,
)
from .reference import ReferenceMap

__all__ = [
    "ABSENT",
    "ALREADY_PRESENT",
    "AdaptiveSkiplist",
    "ClassicSkiplist",
    "ConcurrentSkiplist",
    "DELETED",
    "DetSkiplist",
    "HeightSampler",
    "INSERTED",
    "IntervalSkiplist",
    "InvalidInputError",
    "InvalidIntervalError",
    "InvalidRangeError",
    "LevelGenConfig",
    "Memtable",
    "MetricsRow",
    "Ordering",
    "ReferenceMap",
    "SearchStats",
    "Snapshot",
    "SplitMix64",
    "TreeNode",
    "TwoThreeFourTree",
    "VersionKind",
    "WorkloadSpec",
    "ZipfSampler",
    "compare",
    "crc32c",
    "decode_u64",
    "emit_csv",
    "encode_u64",
    "from_tree",
    "generate",
    "load",
    "run",
    "to_tree",
    "validate_tree",
]
