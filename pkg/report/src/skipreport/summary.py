"""Markdown summary table: one line per (variant, workload) group.

The output is a pure function of the input rows, so identical CSVs give
byte-identical summaries; golden tests pin the bytes.  Rows whose
recorded throughput strays more than 1% from ops/elapsed are flagged.
"""
from __future__ import annotations

from .loader import ResultRow

_HEADER = (
    "| variant | workload | runs | mean_throughput_ops_per_s "
    "| mean_search_comparisons | max_p99_latency_ns | flags |"
)
_RULE = "| --- | --- | --- | --- | --- | --- | --- |"


def summary(rows: list[ResultRow]) -> str:
    """Render the grouped summary as a markdown table."""
    groups: dict[tuple[str, str], list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.variant, row.workload), []).append(row)
    lines = ["# skipbench summary", "", _HEADER, _RULE]
    for variant, workload in sorted(groups):
        members = groups[(variant, workload)]
        throughput = sum(r.throughput_ops_per_s for r in members) / len(members)
        comparisons = sum(r.mean_search_comparisons for r in members) / len(members)
        p99 = max(r.p99_latency_ns for r in members)
        flagged = sum(1 for r in members if not r.throughput_consistent)
        flags = f"throughput-mismatch:{flagged}" if flagged else ""
        lines.append(
            f"| {variant} | {workload} | {len(members)} | {throughput:.2f} "
            f"| {comparisons:.2f} | {p99} | {flags} |"
        )
    return "\n".join(lines) + "\n"
