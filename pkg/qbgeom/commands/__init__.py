"""
Subcommands of the qbgeom command line.

Each module exposes ``register(subparsers, parents)`` which adds its parser
and binds ``handler`` to a ``run(args, argv) -> int`` function.
"""

import argparse
from typing import List, Optional

from ..models.params import (
    DEFAULT_HORIZON_FACTOR,
    DEFAULT_L_OVER_LAMBDA0,
    DEFAULT_LAMBDA_OVER_GAMMA,
    DEFAULT_N_STEPS,
    DEFAULT_OMEGA0_OVER_GAMMA,
    DEFAULT_ZETA_OVER_OMEGA0,
    ModelParams,
)

FORMATS = ("csv", "json")


def common_options() -> argparse.ArgumentParser:
    """Flags shared by every subcommand."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--out", default=None, help="Output file or directory")
    parser.add_argument(
        "--format", choices=FORMATS, default="csv", help="Output file format"
    )
    parser.add_argument(
        "--workers", type=int, default=1, help="Worker processes for sweeps"
    )
    parser.add_argument(
        "--seed", type=int, default=42, help="Seed for randomized ensembles"
    )
    parser.add_argument(
        "--config",
        default=None,
        help="key = value config file (defaults to $QBGEOM_CONFIG)",
    )
    parser.add_argument(
        "--no-config",
        action="store_true",
        help="Ignore --config and $QBGEOM_CONFIG",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for INFO logging, -vv for DEBUG",
    )
    return parser


def physics_options() -> argparse.ArgumentParser:
    """Physical parameters as the dimensionless ratios quoted in the figures."""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("model parameters")
    group.add_argument(
        "--omega0-over-gamma", type=float, default=DEFAULT_OMEGA0_OVER_GAMMA
    )
    group.add_argument(
        "--zeta-over-omega0", type=float, default=DEFAULT_ZETA_OVER_OMEGA0
    )
    group.add_argument(
        "--zeta-over-gamma",
        type=float,
        default=None,
        help="Dipole-dipole coupling in units of gamma; overrides --zeta-over-omega0",
    )
    group.add_argument(
        "--lambda-over-gamma", type=float, default=DEFAULT_LAMBDA_OVER_GAMMA
    )
    group.add_argument("--l-over-lambda0", type=float, default=DEFAULT_L_OVER_LAMBDA0)
    group.add_argument(
        "--t-max",
        type=float,
        default=None,
        help="Final time in units of 1/gamma (default: horizon-factor / lambda)",
    )
    group.add_argument(
        "--steps", type=int, default=DEFAULT_N_STEPS, help="Time-grid points"
    )
    group.add_argument(
        "--horizon-factor",
        type=float,
        default=DEFAULT_HORIZON_FACTOR,
        help="Horizon in memory times when --t-max is not given",
    )
    return parser


def params_from_args(args: argparse.Namespace) -> ModelParams:
    zeta_over_omega0 = args.zeta_over_omega0
    if args.zeta_over_gamma is not None:
        zeta_over_omega0 = args.zeta_over_gamma / args.omega0_over_gamma
    return ModelParams.from_ratios(
        omega0_over_gamma=args.omega0_over_gamma,
        zeta_over_omega0=zeta_over_omega0,
        lambda_over_gamma=args.lambda_over_gamma,
        l_over_lambda0=args.l_over_lambda0,
        t_max=args.t_max,
        n_steps=args.steps,
        horizon_factor=args.horizon_factor,
    )


def invocation(argv: Optional[List[str]]) -> List[str]:
    return list(argv or [])
