import io
import math

import pytest

from skipforge import SplitMix64, WorkloadSpec, ZipfSampler, emit_csv, generate, run
from skipforge.bench import (
    CSV_HEADER,
    InvalidSpecError,
    MetricsRow,
    OracleMismatchError,
    UnsupportedCombinationError,
)


def spec(**overrides):
    base = dict(
        op_count=5000,
        read_frac=0.4,
        insert_frac=0.4,
        remove_frac=0.1,
        scan_frac=0.1,
        key_space_size=1024,
        scan_width=8,
        seed=5,
    )
    base.update(overrides)
    return WorkloadSpec(**base)


def test_spec_validation():
    with pytest.raises(InvalidSpecError):
        spec(read_frac=0.9)  # fractions sum to 1.5
    with pytest.raises(InvalidSpecError):
        spec(read_frac=-0.1, insert_frac=0.9, remove_frac=0.1, scan_frac=0.1)
    with pytest.raises(InvalidSpecError):
        spec(zipf_theta=-1.0)
    with pytest.raises(InvalidSpecError):
        spec(key_space_size=0)
    with pytest.raises(InvalidSpecError):
        spec(distribution="normal")


def test_generation_deterministic():
    assert generate(spec()) == generate(spec())
    assert generate(spec(seed=6)) != generate(spec(seed=7))


def test_zipf_theta_zero_equals_uniform():
    a = generate(spec(distribution="zipf", zipf_theta=0.0))
    b = generate(spec(distribution="uniform"))
    assert a == b


def test_generated_ops_respect_fractions_roughly():
    ops = generate(spec(op_count=40_000))
    counts = {}
    for op in ops:
        counts[op[0]] = counts.get(op[0], 0) + 1
    assert abs(counts["read"] / 40_000 - 0.4) < 0.02
    assert abs(counts["scan"] / 40_000 - 0.1) < 0.02


def test_zipf_rank_frequency_slope():
    rng = SplitMix64(99)
    sampler = ZipfSampler(10_000, 0.99, rng)
    counts = {}
    for _ in range(1_000_000):
        r = sampler.sample()
        counts[r] = counts.get(r, 0) + 1
    xs, ys = [], []
    for rank in range(1, 101):
        xs.append(math.log(rank))
        ys.append(math.log(counts[rank]))
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    slope = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / sum(
        (x - mean_x) ** 2 for x in xs
    )
    assert abs(slope + 0.99) <= 0.05, slope


def test_run_every_single_actor_variant_agrees_with_oracle():
    sizes = set()
    for variant in ("classic", "classic-unrolled", "deterministic", "adaptive", "concurrent", "mvcc"):
        row = run(variant, spec())
        assert row.ops == 5000
        assert row.final_size > 0
        sizes.add(row.final_size)
    assert len(sizes) == 1  # identical workload, identical final membership


def test_run_rejects_multi_actor_single_writer():
    with pytest.raises(UnsupportedCombinationError):
        run("classic", spec(), actors=2)
    with pytest.raises(UnsupportedCombinationError):
        run("deterministic", spec(), actors=0)


def test_run_multi_actor_concurrent_smoke():
    row = run("concurrent", spec(op_count=8000), actors=8)
    assert row.actors == 8
    assert row.final_size > 0


def test_injected_fault_raises():
    with pytest.raises(OracleMismatchError):
        run("classic", spec(op_count=500), inject_oracle_fault=True)


def test_throughput_consistent_with_elapsed():
    row = run("classic", spec(op_count=2000))
    recomputed = row.ops / (row.elapsed_ns * 1e-9)
    assert abs(recomputed - row.throughput_ops_per_s) / recomputed < 1e-9


def test_emit_csv_header_and_roundtrip():
    rows = [run("classic", spec(op_count=1000)), run("deterministic", spec(op_count=1000))]
    buf = io.StringIO()
    emit_csv(rows, buf)
    text = buf.getvalue()
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert not any(line != line.rstrip() for line in lines)
    for line, row in zip(lines[1:], rows):
        fields = line.split(",")
        parsed = MetricsRow(
            variant=fields[0],
            workload=fields[1],
            ops=int(fields[2]),
            actors=int(fields[3]),
            seed=int(fields[4]),
            elapsed_ns=int(fields[5]),
            throughput_ops_per_s=float(fields[6]),
            mean_search_comparisons=float(fields[7]),
            p50_latency_ns=int(fields[8]),
            p99_latency_ns=int(fields[9]),
            final_size=int(fields[10]),
        )
        assert parsed == row


def test_emit_csv_zero_rows():
    buf = io.StringIO()
    emit_csv([], buf)
    assert buf.getvalue() == CSV_HEADER + "\n"
