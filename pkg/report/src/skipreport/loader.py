"""Strict reader for skipbench result CSVs.

The header must match the benchmark contract byte for byte; anything
else is rejected up front so silently-shifted columns can never reach a
report.  Malformed rows are reported with their line number.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

EXPECTED_HEADER = (
    "variant,workload,ops,actors,seed,elapsed_ns,throughput_ops_per_s,"
    "mean_search_comparisons,p50_latency_ns,p99_latency_ns,final_size"
)


class BadHeaderError(ValueError):
    """CSV header differs from the benchmark contract."""


class MalformedRowError(ValueError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number


@dataclass(frozen=True)
class ResultRow:
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

    @property
    def computed_throughput(self) -> float:
        return self.ops / (self.elapsed_ns * 1e-9)

    @property
    def throughput_consistent(self) -> bool:
        """True when the recorded throughput is within 1% of ops/elapsed."""
        computed = self.computed_throughput
        return abs(self.throughput_ops_per_s - computed) <= 0.01 * computed


def load(path: str | Path) -> list[ResultRow]:
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines or lines[0] != EXPECTED_HEADER:
        raise BadHeaderError(
            f"{path}: header does not match the skipbench contract"
        )
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        if not line:
            raise MalformedRowError(number, "blank line")
        fields = line.split(",")
        if len(fields) != 11:
            raise MalformedRowError(number, f"expected 11 fields, got {len(fields)}")
        try:
            rows.append(
                ResultRow(
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
            )
        except ValueError as exc:
            raise MalformedRowError(number, str(exc)) from exc
        if rows[-1].elapsed_ns <= 0:
            raise MalformedRowError(number, "elapsed_ns must be positive")
    return rows
