"""
``qbgeom validate``: the release-gate invariant suite.
"""

import argparse
from typing import List

from ..exceptions import EXIT_OK, EXIT_VALIDATION_FAILED
from ..export import write_json
from ..validation import FAULTS, format_report, run_validation


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "validate",
        parents=parents,
        help="Run the invariant suite; exit 1 if a gating property fails",
    )
    parser.add_argument(
        "--quick", action="store_true", help="Smaller ensemble and shorter horizons"
    )
    parser.add_argument(
        "--inject-fault",
        choices=FAULTS,
        default=None,
        help="Deliberately break the solver to see which properties catch it",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, argv: List[str]) -> int:
    report = run_validation(
        seed=args.seed,
        quick=args.quick,
        fault=args.inject_fault,
        workers=args.workers,
    )
    print(format_report(report))
    if args.out:
        path = write_json(args.out, report.model_dump(mode="json"))
        print(f"📄 Report written to {path}")
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED
