"""Comparison charts rendered to SVG (text output, diffable filenames).

Per variant: mean search comparisons against log2(ops) wherever a
variant was measured at two or more op counts, and throughput against
actor count wherever it ran at two or more actor counts.  Chart bytes
are backend-dependent and deliberately not golden-tested; only the
filenames are contractual.
"""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .loader import ResultRow


class InsufficientDataError(ValueError):
    """No variant has enough distinct measurements to chart."""


def _group_by_variant(rows: list[ResultRow]) -> dict[str, list[ResultRow]]:
    groups: dict[str, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault(row.variant, []).append(row)
    return groups


def plot_scaling(rows: list[ResultRow], out_dir: str | Path) -> list[Path]:
    """Emit `<variant>_scaling.svg` and `<variant>_actors.svg` files.

    Raises InsufficientDataError when not a single variant carries two
    distinct op counts.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    groups = _group_by_variant(rows)
    if not any(len({r.ops for r in g}) >= 2 for g in groups.values()):
        raise InsufficientDataError(
            "need at least one variant measured at two distinct op counts"
        )
    written: list[Path] = []
    for variant in sorted(groups):
        members = groups[variant]
        by_ops: dict[int, list[float]] = {}
        for r in members:
            by_ops.setdefault(r.ops, []).append(r.mean_search_comparisons)
        if len(by_ops) >= 2:
            xs = sorted(by_ops)
            ys = [sum(by_ops[x]) / len(by_ops[x]) for x in xs]
            fig, ax = plt.subplots(figsize=(5, 3.5))
            ax.plot([math.log2(x) for x in xs], ys, marker="o")
            ax.set_xlabel("log2(ops)")
            ax.set_ylabel("mean search comparisons")
            ax.set_title(f"{variant}: search cost scaling")
            path = out / f"{variant}_scaling.svg"
            fig.savefig(path, format="svg")
            plt.close(fig)
            written.append(path)
        by_actors: dict[int, list[float]] = {}
        for r in members:
            by_actors.setdefault(r.actors, []).append(r.throughput_ops_per_s)
        if len(by_actors) >= 2:
            xs = sorted(by_actors)
            ys = [sum(by_actors[x]) / len(by_actors[x]) for x in xs]
            fig, ax = plt.subplots(figsize=(5, 3.5))
            ax.plot(xs, ys, marker="o")
            ax.set_xlabel("actors")
            ax.set_ylabel("throughput (ops/s)")
            ax.set_title(f"{variant}: throughput vs actors")
            path = out / f"{variant}_actors.svg"
            fig.savefig(path, format="svg")
            plt.close(fig)
            written.append(path)
    return written
