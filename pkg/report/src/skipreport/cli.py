"""skipreport: turn skipbench CSVs into charts plus a summary table.

Exit codes: 0 success, 2 unusable input (missing file, bad header,
malformed row, or not enough data to chart).
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .charts import InsufficientDataError, plot_scaling
from .loader import BadHeaderError, MalformedRowError, ResultRow, load
from .summary import summary

EXIT_OK = 0
EXIT_BAD_INPUT = 2


@dataclass
class ReportConfig:
    inputs: list[Path]
    out_dir: Path
    charts: bool = True


def build_report(config: ReportConfig) -> list[Path]:
    """Load every input, write summary.md and charts; returns the files."""
    rows: list[ResultRow] = []
    for path in config.inputs:
        rows.extend(load(path))
    config.out_dir.mkdir(parents=True, exist_ok=True)
    summary_path = config.out_dir / "summary.md"
    summary_path.write_text(summary(rows), encoding="ascii")
    written = [summary_path]
    if config.charts:
        written.extend(plot_scaling(rows, config.out_dir))
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="skipreport")
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="CSV",
        help="skipbench result CSV (repeatable)",
    )
    parser.add_argument("--out-dir", required=True)
    parser.add_argument(
        "--no-charts",
        action="store_true",
        help="write only summary.md",
    )
    args = parser.parse_args(argv)
    config = ReportConfig(
        inputs=[Path(p) for p in args.inputs],
        out_dir=Path(args.out_dir),
        charts=not args.no_charts,
    )
    try:
        written = build_report(config)
    except (BadHeaderError, MalformedRowError, InsufficientDataError, OSError) as exc:
        print(f"skipreport: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
