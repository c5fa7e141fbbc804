"""
``qbgeom simulate``: one trajectory with all battery observables.
"""

import argparse
import logging
from typing import List

from ..exceptions import EXIT_OK
from ..export import write_manifest, write_trajectory
from ..models.params import IntegratorConfig
from ..observables import compute_observables
from ..solver_analytic import propagate_analytic
from ..solver_numeric import propagate_numeric
from ..sweep import build_manifest
from . import invocation, params_from_args

logger = logging.getLogger(__name__)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "simulate",
        parents=parents,
        help="Propagate one parameter set and write the trajectory",
        description=(
            "Propagate the charger-battery amplitudes and write one row per time "
            "point with population, energy, ergotropy and power."
        ),
    )
    parser.add_argument(
        "--solver", choices=("analytic", "numeric"), default="analytic"
    )
    parser.add_argument(
        "--scheme",
        choices=("augmented-rk4", "volterra-trapezoid"),
        default="augmented-rk4",
        help="Numerical scheme (with --solver numeric)",
    )
    parser.add_argument(
        "--dt",
        type=float,
        default=0.005,
        help="Integrator step in units of 1/gamma (with --solver numeric)",
    )
    parser.add_argument(
        "--c1", type=complex, default=1 + 0j, help="Initial charger amplitude"
    )
    parser.add_argument(
        "--c2", type=complex, default=0j, help="Initial battery amplitude"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, argv: List[str]) -> int:
    params = params_from_args(args)
    integrator = None
    if args.solver == "numeric":
        integrator = IntegratorConfig(scheme=args.scheme, dt=args.dt)
        traj = propagate_numeric(params, args.c1, args.c2, integrator)
    else:
        traj = propagate_analytic(params, args.c1, args.c2)
    series = compute_observables(traj)

    out = args.out or f"trajectory.{args.format}"
    manifest = build_manifest(
        "simulate",
        params,
        invocation=invocation(argv),
        solver=args.solver,
        integrator=integrator,
        initial_c1=(args.c1.real, args.c1.imag),
        initial_c2=(args.c2.real, args.c2.imag),
        seed=args.seed,
    )
    path = write_trajectory(out, traj, series, params, args.format)
    write_manifest(path, manifest)
    logger.info("simulate: %d points, solver=%s", len(traj.t_grid), args.solver)
    print(f"✅ Trajectory written to {path}")
    return EXIT_OK
