"""
Plot-ready datasets for the geometry figures - just a switch from figure
names to sweep recipes.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .exceptions import DomainError
from .models.params import DEFAULT_HORIZON_FACTOR, GridSpec, ModelParams
from .models.results import RunManifest, SweepResult
from .observables import observable_series
from .solver_analytic import propagate_analytic
from .sweep import (
    build_manifest,
    channel_configurations,
    sweep_geometry_width,
    sweep_time_geometry,
)

logger = logging.getLogger(__name__)

FIGURE_NAMES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c")

DEFAULT_L_POINTS = 201
DEFAULT_T_POINTS = 1001
DEFAULT_LAMBDA_POINTS = 101
DEFAULT_LAMBDA_RANGE = (0.02, 1.0)

ASCII_RAMP = " .:-=+*#%@"


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    kind: str
    observable: str


@dataclass(frozen=True)
class FigureDataset:
    """Data behind one figure: a labelled matrix or a set of named columns."""

    recipe: FigureRecipe
    manifest: RunManifest
    result: Optional[SweepResult] = None
    columns: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.recipe.name

    def preview_matrix(self) -> np.ndarray:
        if self.result is not None:
            return self.result.values
        return np.array(
            [v for k, v in self.columns.items() if k not in ("t_gamma", "lambda_t")]
        )


def figure_recipe(name: str) -> FigureRecipe:
    """Simple switch from a figure name to the sweep behind it."""

    match name:
        case "fig2a":
            kind, observable = "time-geometry", "energy"
        case "fig2b":
            kind, observable = "time-geometry", "ergotropy"
        case "fig3a":
            kind, observable = "configurations", "energy"
        case "fig3b":
            kind, observable = "configurations", "ergotropy"
        case "fig4a":
            kind, observable = "geometry-width", "energy"
        case "fig4b":
            kind, observable = "geometry-width", "power"
        case "fig4c":
            kind, observable = "geometry-width", "ergotropy"
        case _:
            raise DomainError(
                f"unknown figure {name!r}; expected one of {', '.join(FIGURE_NAMES)}"
            )

    return FigureRecipe(name, kind, observable)


def build_figure(
    name: str,
    params: ModelParams,
    workers: int = 1,
    l_points: int = DEFAULT_L_POINTS,
    t_points: int = DEFAULT_T_POINTS,
    lambda_points: int = DEFAULT_LAMBDA_POINTS,
    horizon_factor: float = DEFAULT_HORIZON_FACTOR,
) -> FigureDataset:
    recipe = figure_recipe(name)
    l_grid = GridSpec(axis="l_over_lambda0", min=0.0, max=1.0, n_points=l_points)
    logger.info("building %s (%s)", name, recipe.kind)

    if recipe.kind == "time-geometry":
        t_grid = GridSpec(axis="time", min=0.0, max=params.t_max, n_points=t_points)
        result = sweep_time_geometry(params, l_grid, t_grid, recipe.observable, workers)
        manifest = result.manifest.model_copy(
            update={"command": "figure", "figure": name}
        )
        return FigureDataset(recipe, manifest, result=result)

    if recipe.kind == "geometry-width":
        lambda_grid = GridSpec(
            axis="lambda_over_gamma",
            min=DEFAULT_LAMBDA_RANGE[0],
            max=DEFAULT_LAMBDA_RANGE[1],
            n_points=lambda_points,
            spacing="log",
        )
        result = sweep_geometry_width(
            params,
            l_grid,
            lambda_grid,
            observable=recipe.observable,
            horizon_factor=horizon_factor,
            workers=workers,
        )
        manifest = result.manifest.model_copy(
            update={"command": "figure", "figure": name}
        )
        return FigureDataset(recipe, manifest, result=result)

    columns: Dict[str, np.ndarray] = {}
    for config in channel_configurations():
        geometry = params.with_updates(l_over_lambda0=config.l_over_lambda0)
        traj = propagate_analytic(geometry)
        if not columns:
            columns["t_gamma"] = traj.t_grid
            columns["lambda_t"] = params.lambda_ * traj.t_grid
        label = f"{recipe.observable}_{config.label}"
        columns[label] = observable_series(traj, recipe.observable)
    manifest = build_manifest(
        "figure", params, figure=name, observable=recipe.observable, workers=workers
    )
    return FigureDataset(recipe, manifest, columns=columns)


def ascii_preview(
    values, width: int = 64, height: int = 20, ramp: str = ASCII_RAMP
) -> str:
    """Coarse character heatmap of a matrix, low values blank, high values dense."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if values.size == 0:
        return ""
    n_rows, n_cols = values.shape
    rows = np.linspace(0, n_rows - 1, min(height, n_rows)).round().astype(int)
    cols = np.linspace(0, n_cols - 1, min(width, n_cols)).round().astype(int)
    sample = values[np.ix_(rows, cols)]

    finite = np.isfinite(sample)
    lo = sample[finite].min() if finite.any() else 0.0
    hi = sample[finite].max() if finite.any() else 0.0
    span = hi - lo if hi > lo else 1.0
    top = len(ramp) - 1
    levels = np.clip(((sample - lo) / span * top).round(), 0, top)

    lines = []
    for row_levels, row_finite in zip(levels, finite):
        cells = zip(row_levels, row_finite)
        lines.append("".join(ramp[int(v)] if ok else "?" for v, ok in cells))
    lines.append(f"min {lo:.4g}  max {hi:.4g}")
    return "\n".join(lines)
