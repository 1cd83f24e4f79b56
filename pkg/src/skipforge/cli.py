"""skipbench: drive any variant through a seeded workload and emit CSV.

Exit codes: 0 success, 2 invalid arguments, 3 oracle or invariant
failure, 4 sink failure.
"""
from __future__ import annotations

import argparse
import sys

from .bench import (
    InvalidSpecError,
    InvariantViolationError,
    MetricsRow,
    OracleMismatchError,
    SinkFailure,
    UnsupportedCombinationError,
    VARIANTS,
    WorkloadSpec,
    emit_csv,
    run,
)
from .core import DEFAULT_MAX_LEVEL, DEFAULT_P

EXIT_OK = 0
EXIT_INVALID_ARGS = 2
EXIT_CHECK_FAILED = 3
EXIT_SINK_FAILURE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skipbench")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run one benchmark and emit a CSV row")
    p.add_argument("--variant", required=True, choices=VARIANTS)
    p.add_argument("--ops", type=int, default=100_000)
    p.add_argument("--read-frac", type=float, default=0.5)
    p.add_argument("--insert-frac", type=float, default=0.5)
    p.add_argument("--remove-frac", type=float, default=0.0)
    p.add_argument("--scan-frac", type=float, default=0.0)
    p.add_argument("--keys", type=int, default=1 << 16)
    p.add_argument("--dist", choices=("uniform", "zipf"), default="uniform")
    p.add_argument("--zipf-theta", type=float, default=0.99)
    p.add_argument("--scan-width", type=int, default=16)
    p.add_argument("--actors", type=int, default=1)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--p", type=float, default=DEFAULT_P)
    p.add_argument("--max-level", type=int, default=DEFAULT_MAX_LEVEL)
    p.add_argument("--node-capacity", type=int, default=16)
    p.add_argument("--workload", default=None, help="workload name for the CSV row")
    p.add_argument("--out", default="-", help="output CSV path, or - for stdout")
    p.add_argument(
        "--inject-oracle-fault",
        action="store_true",
        help="testing hook: corrupt the oracle so the run fails its gate",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = WorkloadSpec(
            op_count=args.ops,
            read_frac=args.read_frac,
            insert_frac=args.insert_frac,
            remove_frac=args.remove_frac,
            scan_frac=args.scan_frac,
            key_space_size=args.keys,
            distribution=args.dist,
            zipf_theta=args.zipf_theta,
            scan_width=args.scan_width,
            seed=args.seed,
        )
    except InvalidSpecError as exc:
        print(f"skipbench: invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID_ARGS
    try:
        row: MetricsRow = run(
            args.variant,
            spec,
            actors=args.actors,
            workload_name=args.workload,
            p=args.p,
            max_level=args.max_level,
            node_capacity=args.node_capacity,
            inject_oracle_fault=args.inject_oracle_fault,
        )
    except (InvalidSpecError, UnsupportedCombinationError, ValueError) as exc:
        print(f"skipbench: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_INVALID_ARGS
    except (OracleMismatchError, InvariantViolationError) as exc:
        print(f"skipbench: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    try:
        if args.out == "-":
            emit_csv([row], sys.stdout)
        else:
            with open(args.out, "w", encoding="ascii") as fh:
                emit_csv([row], fh)
    except (SinkFailure, OSError) as exc:
        print(f"skipbench: sink failure: {exc}", file=sys.stderr)
        return EXIT_SINK_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
