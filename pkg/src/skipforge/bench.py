"""Seedable workload generation and the benchmark runner.

A workload spec expands into one deterministic operation sequence; the
runner drives any variant through it behind the shared ordered-map
contract, measures costs, and emits one CSV row.  Single-actor runs
double as correctness checks: every answer is compared against the
reference ordered map and a row is only produced when the oracle agrees.
Timing fields are measured but never asserted on; cost assertions belong
to comparison counts and structural checks.
"""
from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass
from typing import Iterable, Optional

from .adaptive import AdaptiveSkiplist
from .classic import ClassicSkiplist
from .concurrent import INSERTED, ConcurrentSkiplist
from .core import DEFAULT_MAX_LEVEL, DEFAULT_P, SplitMix64, encode_u64
from .deterministic import DetSkiplist
from .memtable import ABSENT, DELETED, Memtable
from .reference import ReferenceMap

VARIANTS = ("classic", "classic-unrolled", "deterministic", "concurrent", "adaptive", "mvcc")
MULTI_ACTOR_VARIANTS = ("concurrent", "mvcc")

CSV_HEADER = (
    "variant,workload,ops,actors,seed,elapsed_ns,throughput_ops_per_s,"
    "mean_search_comparisons,p50_latency_ns,p99_latency_ns,final_size"
)


class InvalidSpecError(ValueError):
    """Workload spec fails validation."""


class UnsupportedCombinationError(ValueError):
    """Actor count not permitted for the chosen variant."""


class OracleMismatchError(RuntimeError):
    """A benchmark answer disagreed with the reference map."""


class InvariantViolationError(RuntimeError):
    """Post-run structural validation failed."""


class SinkFailure(RuntimeError):
    """CSV sink refused a write."""


@dataclass(frozen=True)
class WorkloadSpec:
    op_count: int
    read_frac: float = 0.5
    insert_frac: float = 0.5
    remove_frac: float = 0.0
    scan_frac: float = 0.0
    key_space_size: int = 1 << 16
    distribution: str = "uniform"
    zipf_theta: float = 0.99
    scan_width: int = 16
    seed: int = 1

    def __post_init__(self) -> None:
        fracs = (self.read_frac, self.insert_frac, self.remove_frac, self.scan_frac)
        if any(f < 0 for f in fracs):
            raise InvalidSpecError("operation fractions must be nonnegative")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise InvalidSpecError(f"operation fractions must sum to 1, got {sum(fracs)}")
        if self.op_count < 0:
            raise InvalidSpecError("op_count must be nonnegative")
        if self.key_space_size < 1:
            raise InvalidSpecError("key_space_size must be positive")
        if self.distribution not in ("uniform", "zipf"):
            raise InvalidSpecError(f"unknown distribution {self.distribution!r}")
        if self.zipf_theta < 0:
            raise InvalidSpecError("zipf_theta must be nonnegative")
        if self.scan_width < 0:
            raise InvalidSpecError("scan_width must be nonnegative")


class ZipfSampler:
    """Zipf ranks on 1..n by rejection inversion with precomputed
    normalization constants; O(1) draws amortized, no CDF table."""

    def __init__(self, n: int, exponent: float, rng: SplitMix64):
        if n < 1:
            raise ValueError("n must be >= 1")
        if exponent <= 0:
            raise ValueError("exponent must be > 0")
        self._n = n
        self._e = exponent
        self._rng = rng
        self._h_x1 = self._h_integral(1.5) - 1.0
        self._h_n = self._h_integral(n + 0.5)
        self._s = 2.0 - self._h_integral_inverse(self._h_integral(2.5) - self._h(2.0))

    def _h_integral(self, x: float) -> float:
        log_x = math.log(x)
        return _helper2((1.0 - self._e) * log_x) * log_x

    def _h(self, x: float) -> float:
        return math.exp(-self._e * math.log(x))

    def _h_integral_inverse(self, x: float) -> float:
        t = x * (1.0 - self._e)
        if t < -1.0:
            t = -1.0
        return math.exp(_helper1(t) * x)

    def sample(self) -> int:
        while True:
            u = self._h_n + self._rng.next_float() * (self._h_x1 - self._h_n)
            x = self._h_integral_inverse(u)
            k = int(x + 0.5)
            if k < 1:
                k = 1
            elif k > self._n:
                k = self._n
            if k - x <= self._s or u >= self._h_integral(k + 0.5) - self._h(k):
                return k


def _helper1(x: float) -> float:
    if abs(x) > 1e-8:
        return math.log1p(x) / x
    return 1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x))


def _helper2(x: float) -> float:
    if abs(x) > 1e-8:
        return math.expm1(x) / x
    return 1.0 + x * 0.5 * (1.0 + x * (1.0 / 3.0) * (1.0 + 0.25 * x))


def generate(spec: WorkloadSpec) -> list[tuple]:
    """Expand a spec into its operation sequence.

    Ops are ("read", key), ("insert", key, value), ("remove", key), or
    ("scan", lo, hi) with encoded u64 keys.  A fixed spec always expands
    to the identical sequence; theta 0 degenerates to the uniform path.
    """
    rng = SplitMix64(spec.seed)
    zipf = (
        ZipfSampler(spec.key_space_size, spec.zipf_theta, rng)
        if spec.distribution == "zipf" and spec.zipf_theta > 0
        else None
    )
    t_read = spec.read_frac
    t_insert = t_read + spec.insert_frac
    t_remove = t_insert + spec.remove_frac
    keyspace = spec.key_space_size
    ops: list[tuple] = []
    for i in range(spec.op_count):
        x = rng.next_float()
        if zipf is not None:
            idx = zipf.sample() - 1
        else:
            idx = rng.next_below(keyspace)
        key = encode_u64(idx)
        if x < t_read:
            ops.append(("read", key))
        elif x < t_insert:
            ops.append(("insert", key, encode_u64(i)))
        elif x < t_remove:
            ops.append(("remove", key))
        else:
            hi = min(idx + spec.scan_width, keyspace - 1)
            ops.append(("scan", key, encode_u64(hi)))
    return ops


@dataclass
class MetricsRow:
    variant: str
    workload: str
    ops: int
    actors: int
    seed: int
    elapsed_ns: int
    throughput_ops_per_s: float
    mean_search_comparisons: float
    p50_latency_ns: int
    p99_latency_ns: int
    final_size: int


class _LatencyHistogram:
    """Power-of-two nanosecond buckets; percentile reports the lower bound
    of the bucket holding the requested rank."""

    def __init__(self):
        self.buckets = [0] * 64
        self.count = 0

    def record(self, ns: int) -> None:
        self.buckets[min(ns.bit_length(), 63)] += 1
        self.count += 1

    def merge(self, other: "_LatencyHistogram") -> None:
        for i, c in enumerate(other.buckets):
            self.buckets[i] += c
        self.count += other.count

    def percentile(self, q: float) -> int:
        if self.count == 0:
            return 0
        rank = max(1, math.ceil(q * self.count))
        seen = 0
        for i, c in enumerate(self.buckets):
            seen += c
            if seen >= rank:
                return 0 if i == 0 else 1 << (i - 1)
        return 1 << 62


class _SingleActorAdapter:
    """Uniform op surface over the single-writer variants, with the
    differential oracle wired into every answer."""

    def __init__(self, structure, kind: str):
        self.s = structure
        self.kind = kind
        self.ref = ReferenceMap()
        self.comparison_total = 0
        self.reads = 0

    def apply(self, op: tuple) -> None:
        tag = op[0]
        if tag == "read":
            if self.kind == "mvcc":
                snap = self.s.snapshot()
                got, stats = self.s.get_traced(op[1], snap)
                mine = None if got in (ABSENT, DELETED) else got
            elif self.kind == "concurrent":
                mine, stats = self.s.get_traced(op[1])
            else:
                mine, stats = self.s.get_traced(op[1])
            self.comparison_total += stats.comparisons
            self.reads += 1
            expect = self.ref.get(op[1])
            if mine != expect:
                raise OracleMismatchError(
                    f"read {op[1]!r}: got {mine!r}, oracle {expect!r}"
                )
        elif tag == "insert":
            _, key, value = op
            if self.kind == "mvcc":
                self.s.put(key, value)
                self.ref.insert(key, value)
            elif self.kind == "concurrent":
                outcome = self.s.insert(key, value)
                absent = self.ref.get(key) is None
                if (outcome == INSERTED) != absent:
                    raise OracleMismatchError(f"insert {key!r}: outcome {outcome}")
                if absent:
                    self.ref.insert(key, value)
            else:
                mine = self.s.insert(key, value)
                expect = self.ref.insert(key, value)
                if mine != expect:
                    raise OracleMismatchError(
                        f"insert {key!r}: got {mine!r}, oracle {expect!r}"
                    )
        elif tag == "remove":
            key = op[1]
            if self.kind == "mvcc":
                self.s.delete(key)
                self.ref.remove(key)
            else:
                mine = self.s.remove(key)
                expect = self.ref.remove(key)
                if mine != expect:
                    raise OracleMismatchError(
                        f"remove {key!r}: got {mine!r}, oracle {expect!r}"
                    )
        else:
            _, lo, hi = op
            if self.kind == "mvcc":
                snap = self.s.snapshot()
                mine = self.s.scan(lo, hi, snap)
            elif self.kind == "concurrent":
                mine = list(self.s.iterate_ascending(lo=lo, hi=hi))
            else:
                mine = self.s.range_scan(lo, hi)
            expect = self.ref.range_scan(lo, hi)
            if mine != expect:
                raise OracleMismatchError(f"scan [{lo!r}, {hi!r}] diverged")

    def final_contents(self) -> list:
        if self.kind == "mvcc":
            snap = self.s.snapshot()
            return self.s.scan(b"", b"\xff" * 9, snap)
        if self.kind == "concurrent":
            return list(self.s.iterate_ascending())
        return list(self.s.items())


def _build_structure(variant: str, spec: WorkloadSpec, p: float, max_level: int, node_capacity: int):
    if variant == "classic":
        return ClassicSkiplist(p=p, max_level=max_level, seed=spec.seed, node_capacity=1)
    if variant == "classic-unrolled":
        return ClassicSkiplist(
            p=p, max_level=max_level, seed=spec.seed, node_capacity=node_capacity
        )
    if variant == "deterministic":
        return DetSkiplist()
    if variant == "adaptive":
        return AdaptiveSkiplist(max_level=max_level)
    if variant == "concurrent":
        return ConcurrentSkiplist(p=p, max_level=max_level, seed=spec.seed)
    if variant == "mvcc":
        return Memtable(p=p, max_level=max_level, seed=spec.seed)
    raise InvalidSpecError(f"unknown variant {variant!r}")


def run(
    variant: str,
    spec: WorkloadSpec,
    actors: int = 1,
    workload_name: Optional[str] = None,
    p: float = DEFAULT_P,
    max_level: int = DEFAULT_MAX_LEVEL,
    node_capacity: int = 16,
    inject_oracle_fault: bool = False,
) -> MetricsRow:
    """Execute the workload and return one metrics row.

    Single-actor runs are gated by the reference oracle; multi-actor runs
    are permitted only for the concurrent-safe variants.
    """
    if variant not in VARIANTS:
        raise InvalidSpecError(f"unknown variant {variant!r}")
    if actors < 1:
        raise UnsupportedCombinationError("actor count must be >= 1")
    if actors > 1 and variant not in MULTI_ACTOR_VARIANTS:
        raise UnsupportedCombinationError(
            f"{variant} is single-writer; multi-actor runs need one of "
            f"{MULTI_ACTOR_VARIANTS}"
        )
    if workload_name is None:
        workload_name = (
            f"zipf{spec.zipf_theta:g}" if spec.distribution == "zipf" else "uniform"
        )
    ops = generate(spec)
    structure = _build_structure(variant, spec, p, max_level, node_capacity)
    hist = _LatencyHistogram()

    if actors == 1:
        adapter = _SingleActorAdapter(structure, _kind_of(variant))
        begin = time.perf_counter_ns()
        for op in ops:
            t0 = time.perf_counter_ns()
            adapter.apply(op)
            hist.record(time.perf_counter_ns() - t0)
        elapsed = max(time.perf_counter_ns() - begin, 1)
        if inject_oracle_fault:
            adapter.ref.insert(b"\xff" * 9 + b"injected", b"bogus")
        final = adapter.final_contents()
        if final != adapter.ref.items():
            raise OracleMismatchError("final contents diverge from the oracle")
        comparisons = adapter.comparison_total
        reads = adapter.reads
        final_size = len(final)
    else:
        shards: list[list[tuple]] = [ops[i::actors] for i in range(actors)]
        hists = [_LatencyHistogram() for _ in range(actors)]
        comp_totals = [0] * actors
        read_totals = [0] * actors
        errors: list[BaseException] = []

        def actor(idx: int) -> None:
            try:
                my_hist = hists[idx]
                comps = 0
                reads = 0
                for op in shards[idx]:
                    t0 = time.perf_counter_ns()
                    tag = op[0]
                    if tag == "read":
                        if variant == "mvcc":
                            snap = structure.snapshot()
                            _, stats = structure.get_traced(op[1], snap)
                        else:
                            _, stats = structure.get_traced(op[1])
                        comps += stats.comparisons
                        reads += 1
                    elif tag == "insert":
                        if variant == "mvcc":
                            structure.put(op[1], op[2])
                        else:
                            structure.insert(op[1], op[2])
                    elif tag == "remove":
                        if variant == "mvcc":
                            structure.delete(op[1])
                        else:
                            structure.remove(op[1])
                    else:
                        if variant == "mvcc":
                            snap = structure.snapshot()
                            structure.scan(op[1], op[2], snap)
                        else:
                            for _ in structure.iterate_ascending(lo=op[1], hi=op[2]):
                                pass
                    my_hist.record(time.perf_counter_ns() - t0)
                comp_totals[idx] = comps
                read_totals[idx] = reads
            except BaseException as exc:  # surfaced after join
                errors.append(exc)

        threads = [threading.Thread(target=actor, args=(i,)) for i in range(actors)]
        begin = time.perf_counter_ns()
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        elapsed = max(time.perf_counter_ns() - begin, 1)
        if errors:
            raise errors[0]
        for h in hists:
            hist.merge(h)
        comparisons = sum(comp_totals)
        reads = sum(read_totals)
        if variant == "mvcc":
            snap = structure.snapshot()
            final_size = len(structure.scan(b"", b"\xff" * 9, snap))
        else:
            final_size = len(structure)

    if variant == "deterministic":
        report = structure.check_invariants()
        if not report.ok:
            raise InvariantViolationError("; ".join(report.violations))

    return MetricsRow(
        variant=variant,
        workload=workload_name,
        ops=len(ops),
        actors=actors,
        seed=spec.seed,
        elapsed_ns=elapsed,
        throughput_ops_per_s=len(ops) / (elapsed * 1e-9),
        mean_search_comparisons=(comparisons / reads) if reads else 0.0,
        p50_latency_ns=hist.percentile(0.50),
        p99_latency_ns=hist.percentile(0.99),
        final_size=final_size,
    )


def _kind_of(variant: str) -> str:
    if variant == "mvcc":
        return "mvcc"
    if variant == "concurrent":
        return "concurrent"
    return "plain"


def emit_csv(rows: Iterable[MetricsRow], sink) -> None:
    """Write the header plus one line per row, no trailing whitespace."""
    try:
        sink.write(CSV_HEADER + "\n")
        for r in rows:
            sink.write(
                f"{r.variant},{r.workload},{r.ops},{r.actors},{r.seed},"
                f"{r.elapsed_ns},{r.throughput_ops_per_s!r},"
                f"{r.mean_search_comparisons!r},{r.p50_latency_ns},"
                f"{r.p99_latency_ns},{r.final_size}\n"
            )
    except Exception as exc:
        raise SinkFailure(f"csv sink failed: {exc}") from exc
