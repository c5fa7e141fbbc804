"""
Deterministic parameter sweeps over geometry, bath width and time.

Work is split into cells; cells sharing a group key are evaluated together in
one vectorised closed-form batch, and groups are farmed out with joblib.
Results are placed by (row, col), never by completion order, so the output
does not depend on the worker count.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from .exceptions import DomainError
from .models.params import DEFAULT_HORIZON_FACTOR, GridSpec, ModelParams
from .models.results import AmplitudeTrajectory, RunManifest, SweepResult
from .observables import observable_series
from .reservoir import channel_weights, collective_couplings, geometric_phase
from .solver_analytic import battery_derivatives, propagate_on_grid

logger = logging.getLogger(__name__)

SERIES_OBSERVABLES = ("population", "energy", "ergotropy", "power", "average_power")
HORIZON_EXTENSION = 1.25
HORIZON_TOLERANCE = 1e-4
PEAK_SPACING = 0.25
PEAK_CANDIDATES = 8
BISECTION_STEPS = 48


@dataclass(frozen=True)
class SweepCell:
    """One independent unit of sweep work.

    Without ``times`` the cell is a single matrix entry: the time_maxima of
    ``observable`` over [0, ``params.t_max``]. With ``times`` it samples the
    observable at those instants and fills the entries (row, col),
    (row, col + 1), ... of its row.
    """

    row: int
    col: int
    params: ModelParams
    observable: str
    times: Optional[np.ndarray] = None
    group: int = 0


@dataclass(frozen=True)
class ChannelConfiguration:
    """A labelled geometry with its collective couplings."""

    label: str
    l_over_lambda0: float
    description: str

    @property
    def theta(self) -> float:
        return geometric_phase(self.l_over_lambda0)

    @property
    def couplings(self) -> Tuple[float, complex]:
        return collective_couplings(self.theta)


def channel_configurations() -> Tuple[ChannelConfiguration, ...]:
    """The symmetric-only, antisymmetric-only and mixed channel geometries."""
    return (
        ChannelConfiguration("gamma_a_zero", 0.0, "theta = 0, antisymmetric dark"),
        ChannelConfiguration("gamma_s_zero", 0.25, "theta = pi/2, symmetric dark"),
        ChannelConfiguration("mixed", 0.125, "theta = pi/4, Gamma_s = -i Gamma_a"),
    )


def build_manifest(command: str, params: ModelParams, **fields) -> RunManifest:
    return RunManifest(command=command, params=params, **fields)


def _check_observable(observable: str) -> None:
    if observable not in SERIES_OBSERVABLES:
        raise DomainError(
            f"unknown observable {observable!r}; expected one of {SERIES_OBSERVABLES}"
        )


def _check_axis(grid: GridSpec, expected: str) -> None:
    if grid.axis != expected:
        raise DomainError(f"expected a {expected} grid, got {grid.axis}")


def _series(traj: AmplitudeTrajectory, observable: str) -> np.ndarray:
    return observable_series(traj, observable)


def rate_bound(params: ModelParams) -> float:
    """Upper bound on |s| over the roots of both channels.

    Roots solve s² + (λ + iδ)s + (iδλ + gγλ/2) = 0 with g ≤ 2 and |δ| = |ζ|,
    so |s| ≤ λ + |ζ| + √(γλ).
    """
    lam = params.lambda_
    return lam + abs(params.zeta) + float(np.sqrt(params.gamma * lam))


def resolved_steps(params: ModelParams) -> int:
    """Grid length for a time maximum: at least ``params.n_steps`` points and a
    spacing no wider than PEAK_SPACING / rate_bound."""
    spacing = PEAK_SPACING / rate_bound(params)
    return max(params.n_steps, int(np.ceil(params.t_max / spacing)) + 1)


def _profile(observable, c2, dc2, d2c2, t):
    """Series (ω₀ = 1) and its time derivative from the analytic amplitudes."""
    p = np.abs(c2) ** 2
    dp = 2.0 * np.real(np.conj(c2) * dc2)
    match observable:
        case "power":
            d2p = 2.0 * (np.abs(dc2) ** 2 + np.real(np.conj(c2) * d2c2))
            return dp, d2p
        case "average_power":
            positive = t > 0
            safe = np.where(positive, t, 1.0)
            return (
                np.where(positive, p / safe, 0.0),
                np.where(positive, (dp * safe - p) / safe**2, 0.0),
            )
    return p, dp


def _hermite_peak(f0, f1, m0, m1):
    """Largest value of the cubic Hermite interpolant on an interval.

    Slopes are scaled to unit interval length. Used only to rank intervals,
    so non-finite estimates fall back to the endpoint values.
    """
    a = 6.0 * (f0 - f1) + 3.0 * (m0 + m1)
    b = 6.0 * (f1 - f0) - 4.0 * m0 - 2.0 * m1
    disc = np.sqrt(np.maximum(b * b - 4.0 * a * m0, 0.0))
    q = -0.5 * (b + np.where(b >= 0.0, 1.0, -1.0) * disc)
    near, far = m0 / q, q / a
    u = np.where((near >= 0.0) & (near <= 1.0), near, far)
    u = np.clip(np.nan_to_num(u, nan=0.0), 0.0, 1.0)
    u2, u3 = u * u, u * u * u
    value = (
        (2.0 * u3 - 3.0 * u2 + 1.0) * f0
        + (u3 - 2.0 * u2 + u) * m0
        + (3.0 * u2 - 2.0 * u3) * f1
        + (u3 - u2) * m1
    )
    return np.fmax(np.fmax(f0, f1), value)


def _refined_maxima(
    batch: Sequence[ModelParams], observable: str, n_points: int
) -> np.ndarray:
    """Maxima over [0, t_max] on ``n_points`` samples, the highest interior
    crests refined by bisecting the sign of the analytic slope."""
    weights = np.array(
        [channel_weights(geometric_phase(p.l_over_lambda0)) for p in batch]
    )
    coefficients = (
        weights[:, 0],
        weights[:, 1],
        np.array([p.zeta for p in batch]),
        np.array([p.lambda_ for p in batch]),
    )
    base = "population" if observable in ("energy", "ergotropy") else observable

    def profile(times):
        return _profile(base, *battery_derivatives(*coefficients, times), times)

    t = np.stack([np.linspace(0.0, p.t_max, n_points) for p in batch])
    f, slope = profile(t)
    peak = f.max(axis=-1)

    crest = (slope[:, :-1] > 0.0) & (slope[:, 1:] <= 0.0)
    if np.any(crest):
        h = np.diff(t, axis=-1)
        with np.errstate(all="ignore"):
            estimate = _hermite_peak(
                f[:, :-1], f[:, 1:], slope[:, :-1] * h, slope[:, 1:] * h
            )
        estimate = np.where(crest, estimate, -np.inf)
        count = min(PEAK_CANDIDATES, estimate.shape[-1])
        picks = np.argpartition(estimate, -count, axis=-1)[:, -count:]
        chosen = np.isfinite(np.take_along_axis(estimate, picks, axis=-1))
        lo = np.take_along_axis(t[:, :-1], picks, axis=-1)
        hi = np.take_along_axis(t[:, 1:], picks, axis=-1)
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            rising = profile(mid)[1] > 0.0
            lo = np.where(rising, mid, lo)
            hi = np.where(rising, hi, mid)
        refined = profile(0.5 * (lo + hi))[0]
        peak = np.maximum(peak, np.max(np.where(chosen, refined, -np.inf), axis=-1))

    if observable == "ergotropy":
        return np.where(peak > 0.5, 2.0 * peak - 1.0, 0.0)
    return peak


def time_maxima(batch: Sequence[ModelParams], observable: str) -> np.ndarray:
    """Maximum of ``observable`` over [0, t_max] for each parameter set.

    Each set is sampled on resolved_steps points and the PEAK_CANDIDATES
    highest sampled crests are located to machine precision on the analytic
    slope. Values are in units of ω₀.
    """
    _check_observable(observable)
    out = np.empty(len(batch))
    by_length: Dict[int, List[int]] = {}
    for index, params in enumerate(batch):
        by_length.setdefault(resolved_steps(params), []).append(index)
    for n_points, indices in by_length.items():
        subset = [batch[i] for i in indices]
        out[indices] = _refined_maxima(subset, observable, n_points)
    return out


def _evaluate_maxima(cells: Sequence[SweepCell]) -> List[Tuple[int, int, np.ndarray]]:
    """Reduce-over-time cells, deduplicated by parameter set."""
    unique: Dict[ModelParams, int] = {}
    for cell in cells:
        unique.setdefault(cell.params, len(unique))
    batch = list(unique)

    out = []
    peaks = {}
    for cell in cells:
        if cell.observable not in peaks:
            peaks[cell.observable] = time_maxima(batch, cell.observable)
        peak = peaks[cell.observable][unique[cell.params]]
        out.append((cell.row, cell.col, np.atleast_1d(peak)))
    return out


def _evaluate_group(cells: Sequence[SweepCell]) -> List[Tuple[int, int, np.ndarray]]:
    results = []
    maxima = []
    for cell in cells:
        if cell.times is None:
            maxima.append(cell)
        else:
            traj = propagate_on_grid(cell.params, cell.times)
            results.append((cell.row, cell.col, _series(traj, cell.observable)))
    if maxima:
        results.extend(_evaluate_maxima(maxima))
    return results


def _result_label(cells: Sequence[SweepCell]) -> str:
    if not cells:
        return "none"
    cell = cells[0]
    return cell.observable if cell.times is not None else f"max_{cell.observable}"


def run_parallel(
    cells: Sequence[SweepCell],
    worker_count: int = 1,
    shape: Optional[Tuple[int, int]] = None,
    manifest: Optional[RunManifest] = None,
    row_axis: Optional[GridSpec] = None,
    col_axis: Optional[GridSpec] = None,
) -> SweepResult:
    """Evaluate ``cells`` on ``worker_count`` processes and assemble the matrix."""
    if worker_count < 1:
        raise DomainError("worker_count must be >= 1")
    cells = list(cells)
    for cell in cells:
        _check_observable(cell.observable)

    if shape is None:
        rows = max((c.row + 1 for c in cells), default=0)
        cols = max(
            (c.col + (1 if c.times is None else len(c.times)) for c in cells), default=0
        )
        shape = (rows, cols)
    if manifest is None:
        params = cells[0].params if cells else ModelParams()
        manifest = build_manifest("run_parallel", params, workers=worker_count)

    groups: Dict[int, List[SweepCell]] = {}
    for cell in cells:
        groups.setdefault(cell.group, []).append(cell)
    keys = sorted(groups)

    logger.info(
        "sweep: %d cells in %d groups on %d workers",
        len(cells),
        len(keys),
        worker_count,
    )
    outputs = Parallel(n_jobs=worker_count)(
        delayed(_evaluate_group)(groups[key]) for key in keys
    )

    values = np.full(shape, np.nan)
    for group_output in outputs:
        for row, col, cell_values in group_output:
            values[row, col : col + len(cell_values)] = cell_values

    missing = int(np.count_nonzero(~np.isfinite(values)))
    if missing:
        logger.warning("sweep finished with %d non-finite cells", missing)

    return SweepResult(
        observable=_result_label(cells),
        values=values,
        manifest=manifest,
        row_axis=row_axis,
        col_axis=col_axis,
    )


def sweep_time_geometry(
    params: ModelParams,
    l_grid: GridSpec,
    t_grid: GridSpec,
    observable: str = "energy",
    workers: int = 1,
) -> SweepResult:
    """Observable on a geometry × time map; rows are l/λ₀, columns are γt."""
    _check_axis(l_grid, "l_over_lambda0")
    _check_axis(t_grid, "time")
    _check_observable(observable)
    if t_grid.min < 0:
        raise DomainError("time grid must start at t >= 0")

    times = t_grid.values()
    cells = [
        SweepCell(
            row=i,
            col=0,
            params=params.with_updates(l_over_lambda0=float(position)),
            observable=observable,
            times=times,
            group=i,
        )
        for i, position in enumerate(l_grid.values())
    ]
    manifest = build_manifest(
        "sweep",
        params,
        observable=observable,
        row_axis=l_grid,
        col_axis=t_grid,
        workers=workers,
    )
    return run_parallel(
        cells,
        workers,
        shape=(l_grid.n_points, t_grid.n_points),
        manifest=manifest,
        row_axis=l_grid,
        col_axis=t_grid,
    )


def sweep_geometry_width(
    params: ModelParams,
    l_grid: GridSpec,
    lambda_grid: GridSpec,
    reduce: Literal["max"] = "max",
    observable: str = "energy",
    horizon_factor: float = DEFAULT_HORIZON_FACTOR,
    workers: int = 1,
) -> SweepResult:
    """Time maxima on a bath-width × geometry map; rows are λ/γ, columns l/λ₀.

    Each cell runs to t_max = horizon_factor/λ and is reduced by time_maxima,
    on at least ``params.n_steps`` points.
    """
    _check_axis(l_grid, "l_over_lambda0")
    _check_axis(lambda_grid, "lambda_over_gamma")
    _check_observable(observable)
    if reduce != "max":
        raise DomainError(f"unsupported reduction {reduce!r}")
    if horizon_factor <= 0:
        raise DomainError("horizon_factor must be > 0")
    if lambda_grid.min <= 0:
        raise DomainError("bath widths must be > 0")

    widths = lambda_grid.values()
    cells = [
        SweepCell(
            row=i,
            col=j,
            params=params.with_updates(
                lambda_=float(lam),
                l_over_lambda0=float(position),
                t_max=horizon_factor / float(lam),
            ),
            observable=observable,
            group=j,
        )
        for j, position in enumerate(l_grid.values())
        for i, lam in enumerate(widths)
    ]
    manifest = build_manifest(
        "sweep",
        params,
        observable=f"max_{observable}",
        row_axis=lambda_grid,
        col_axis=l_grid,
        horizon_factor=horizon_factor,
        workers=workers,
    )
    return run_parallel(
        cells,
        workers,
        shape=(lambda_grid.n_points, l_grid.n_points),
        manifest=manifest,
        row_axis=lambda_grid,
        col_axis=l_grid,
    )


def horizon_convergence(
    params: ModelParams,
    l_grid: GridSpec,
    lambda_grid: GridSpec,
    observable: str = "energy",
    horizon_factor: float = DEFAULT_HORIZON_FACTOR,
    workers: int = 1,
    tolerance: float = HORIZON_TOLERANCE,
) -> Tuple[bool, float]:
    """Check that extending the horizon by 25% leaves every maximum in place.

    The extended run keeps the grid density by scaling ``n_steps`` along
    with the horizon. Values are in units of ω₀.
    """
    base = sweep_geometry_width(
        params, l_grid, lambda_grid, observable=observable,
        horizon_factor=horizon_factor, workers=workers,
    )
    longer = params.with_updates(
        n_steps=int(round((params.n_steps - 1) * HORIZON_EXTENSION)) + 1
    )
    extended = sweep_geometry_width(
        longer, l_grid, lambda_grid, observable=observable,
        horizon_factor=horizon_factor * HORIZON_EXTENSION, workers=workers,
    )
    max_change = float(np.max(np.abs(extended.values - base.values)))
    converged = max_change <= tolerance
    if converged:
        logger.info("reduction horizon converged: max change %.3g", max_change)
    else:
        logger.warning(
            "reduction horizon not converged: +%.0f%% changes a cell by %.3g",
            (HORIZON_EXTENSION - 1.0) * 100,
            max_change,
        )
    return converged, max_change
