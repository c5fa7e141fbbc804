"""
``qbgeom sweep``: observable maps over geometry and time or bath width.
"""

import argparse
import logging
from typing import List

from ..exceptions import EXIT_OK, DomainError
from ..export import write_manifest, write_matrix
from ..models.params import GridSpec
from ..sweep import horizon_convergence, sweep_geometry_width, sweep_time_geometry
from . import invocation, params_from_args

logger = logging.getLogger(__name__)

OBSERVABLES = (
    "energy",
    "ergotropy",
    "power",
    "max_energy",
    "max_ergotropy",
    "max_power",
)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "sweep",
        parents=parents,
        help="Evaluate an observable over a parameter grid",
        description=(
            "time-geometry maps have rows l/lambda0 and columns gamma*t; "
            "geometry-width maps have rows lambda/gamma and columns l/lambda0 "
            "and hold time maxima."
        ),
    )
    parser.add_argument(
        "--mode", choices=("time-geometry", "geometry-width"), default="time-geometry"
    )
    parser.add_argument("--observable", choices=OBSERVABLES, default="energy")
    parser.add_argument("--l-min", type=float, default=0.0)
    parser.add_argument("--l-max", type=float, default=1.0)
    parser.add_argument("--l-points", type=int, default=201)
    parser.add_argument("--lambda-min", type=float, default=0.02)
    parser.add_argument("--lambda-max", type=float, default=1.0)
    parser.add_argument("--lambda-points", type=int, default=101)
    parser.add_argument(
        "--lambda-spacing", choices=("linear", "log"), default="log"
    )
    parser.add_argument(
        "--t-points",
        type=int,
        default=None,
        help="Time samples of a time-geometry map (default: --steps)",
    )
    parser.add_argument(
        "--check-horizon",
        action="store_true",
        help="Re-run with a 25%% longer horizon and report the largest change",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, argv: List[str]) -> int:
    params = params_from_args(args)
    l_grid = GridSpec(
        axis="l_over_lambda0", min=args.l_min, max=args.l_max, n_points=args.l_points
    )
    observable = args.observable

    if args.mode == "time-geometry":
        if observable.startswith("max_"):
            raise DomainError("time-geometry maps take energy, ergotropy or power")
        t_grid = GridSpec(
            axis="time",
            min=0.0,
            max=params.t_max,
            n_points=args.t_points or params.n_steps,
        )
        result = sweep_time_geometry(params, l_grid, t_grid, observable, args.workers)
    else:
        series = observable.removeprefix("max_")
        lambda_grid = GridSpec(
            axis="lambda_over_gamma",
            min=args.lambda_min,
            max=args.lambda_max,
            n_points=args.lambda_points,
            spacing=args.lambda_spacing,
        )
        result = sweep_geometry_width(
            params,
            l_grid,
            lambda_grid,
            observable=series,
            horizon_factor=args.horizon_factor,
            workers=args.workers,
        )
        if args.check_horizon:
            converged, change = horizon_convergence(
                params,
                l_grid,
                lambda_grid,
                observable=series,
                horizon_factor=args.horizon_factor,
                workers=args.workers,
            )
            mark = "✅" if converged else "⚠️"
            print(f"{mark} Horizon check: max change {change:.3e} (omega0)")

    out = args.out or f"sweep_{result.observable}.{args.format}"
    manifest = result.manifest.model_copy(
        update={"invocation": invocation(argv), "seed": args.seed}
    )
    path = write_matrix(out, result, args.format)
    write_manifest(path, manifest)
    logger.info("sweep %s (%s) written to %s", result.observable, args.mode, path)
    print(f"✅ {result.observable} map {result.values.shape} written to {path}")
    return EXIT_OK
