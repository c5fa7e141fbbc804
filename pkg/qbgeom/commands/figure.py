"""
``qbgeom figure``: plot-ready datasets for the geometry figures.
"""

import argparse
import logging
from pathlib import Path
from typing import List

from ..exceptions import EXIT_OK
from ..export import write_columns, write_manifest, write_matrix
from ..figures import (
    DEFAULT_L_POINTS,
    DEFAULT_LAMBDA_POINTS,
    DEFAULT_T_POINTS,
    FIGURE_NAMES,
    ascii_preview,
    build_figure,
)
from . import invocation, params_from_args

logger = logging.getLogger(__name__)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "figure",
        parents=parents,
        help="Write the dataset behind a figure",
        description="fig2a/b: time-geometry maps; fig3a/b: channel configurations; "
        "fig4a/b/c: geometry-width maxima maps; all: every dataset.",
    )
    parser.add_argument("name", choices=FIGURE_NAMES + ("all",))
    parser.add_argument("--l-points", type=int, default=DEFAULT_L_POINTS)
    parser.add_argument("--t-points", type=int, default=DEFAULT_T_POINTS)
    parser.add_argument("--lambda-points", type=int, default=DEFAULT_LAMBDA_POINTS)
    parser.add_argument(
        "--ascii-preview",
        action="store_true",
        help="Print a coarse character heatmap of each dataset",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, argv: List[str]) -> int:
    params = params_from_args(args)
    out_dir = Path(args.out or "figure_data")
    names = FIGURE_NAMES if args.name == "all" else (args.name,)

    for name in names:
        dataset = build_figure(
            name,
            params,
            workers=args.workers,
            l_points=args.l_points,
            t_points=args.t_points,
            lambda_points=args.lambda_points,
            horizon_factor=args.horizon_factor,
        )
        target = out_dir / f"{name}.{args.format}"
        if dataset.result is not None:
            path = write_matrix(target, dataset.result, args.format)
        else:
            path = write_columns(target, dataset.columns, args.format)
        manifest = dataset.manifest.model_copy(
            update={"invocation": invocation(argv), "seed": args.seed}
        )
        write_manifest(path, manifest)
        logger.info("figure %s written to %s", name, path)
        print(f"✅ {name} written to {path}")
        if args.ascii_preview:
            print(ascii_preview(dataset.preview_matrix()))
    return EXIT_OK
