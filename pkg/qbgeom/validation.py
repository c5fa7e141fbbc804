"""
Release-gate invariant suite.

Every check returns a PropertyOutcome with the measured quantity and its
threshold. Random parameter sets come from ``numpy.random.default_rng(seed)``,
so two runs with the same seed produce identical reports.

``fault="detuning-sign"`` flips the sign of the coherent detuning inside the
closed-form solver path used here, which documents which invariants catch
that class of bug.
"""

import itertools
import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from .exceptions import DomainError
from .models.params import ChannelSpec, GridSpec, IntegratorConfig, ModelParams
from .models.results import PropertyOutcome, ValidationReport
from .observables import (
    compute_observables,
    cumulative_work,
    ergotropy_general,
    ergotropy_qubit,
    finite_difference_power,
    spectral_pair_from_diagonal,
)
from .reservoir import collective_channels
from .solver_analytic import (
    channel_residual,
    channel_roots,
    propagate_analytic,
    propagate_on_grid,
)
from .solver_numeric import observed_order, propagate_numeric
from .sweep import (
    channel_configurations,
    sweep_geometry_width,
    sweep_time_geometry,
    time_maxima,
)

logger = logging.getLogger(__name__)

FAULTS = ("detuning-sign",)

NORM_TOLERANCE = 1e-9
SWAP_TOLERANCE = 1e-12
RESIDUAL_TOLERANCE = 1e-9
MONOTONE_TOLERANCE = 1e-3
PERIODICITY_TOLERANCE = 1e-12
WORK_TOLERANCE = 1e-6
ORACLE_ERGOTROPY_TOLERANCE = 1e-12
DARK_LIMIT_TOLERANCE = 1e-3

Check = Callable[["SuiteContext"], PropertyOutcome]


class SuiteContext:
    """Shared state of one validation run."""

    def __init__(self, seed: int, quick: bool, fault: Optional[str], workers: int):
        if fault is not None and fault not in FAULTS:
            raise DomainError(f"unknown fault {fault!r}; expected one of {FAULTS}")
        self.seed = seed
        self.quick = quick
        self.fault = fault
        self.workers = workers
        self.rng = np.random.default_rng(seed)
        self.ensemble_size = 5 if quick else 20
        self.t_max = 250.0 if quick else 2500.0
        self.ensemble = self._draw_ensemble()
        self.analytic_runs: List = []

    def _draw_ensemble(self) -> List[ModelParams]:
        ensemble = []
        for _ in range(self.ensemble_size):
            lam = self.rng.uniform(0.02, 2.0)
            zeta = self.rng.uniform(0.0, 2.0)
            l_over_lambda0 = self.rng.uniform(0.0, 1.0)
            ensemble.append(
                ModelParams(
                    zeta=zeta,
                    lambda_=lam,
                    l_over_lambda0=l_over_lambda0,
                    t_max=self.t_max,
                    n_steps=int(self.t_max) + 1,
                )
            )
        return ensemble

    def solver_params(self, params: ModelParams) -> ModelParams:
        """Parameters as seen by the closed form, with the fault applied."""
        if self.fault == "detuning-sign":
            return params.with_updates(zeta=-params.zeta)
        return params

    def solver_channel(self, channel: ChannelSpec) -> ChannelSpec:
        if self.fault == "detuning-sign":
            return ChannelSpec(weight=channel.weight, detuning=-channel.detuning)
        return channel


def _outcome(
    name: str, measured: float, threshold: float, detail: str = "", gating: bool = True
) -> PropertyOutcome:
    return PropertyOutcome(
        name=name,
        passed=bool(measured <= threshold),
        gating=gating,
        measured=float(measured),
        threshold=threshold,
        detail=detail,
    )


def check_oracle_equivalence(ctx: SuiteContext) -> PropertyOutcome:
    config = IntegratorConfig(scheme="augmented-rk4", dt=0.005)
    worst = 0.0
    for params in ctx.ensemble:
        analytic = propagate_analytic(ctx.solver_params(params))
        numeric = propagate_numeric(params, config=config)
        ctx.analytic_runs.append(analytic)
        worst = max(worst, float(np.max(np.abs(analytic.c2 - numeric.c2))))
    return _outcome(
        "oracle_equivalence",
        worst,
        config.abs_tol,
        f"max |c2_analytic - c2_numeric| over {len(ctx.ensemble)} sets, "
        f"t <= {ctx.t_max:g}",
    )


def check_norm_safety(ctx: SuiteContext) -> PropertyOutcome:
    runs = ctx.analytic_runs or [
        propagate_analytic(ctx.solver_params(p)) for p in ctx.ensemble
    ]
    excess = 0.0
    for traj in runs:
        excess = max(excess, float(np.max(-traj.bath_population)))
    return _outcome("norm_safety", excess, NORM_TOLERANCE, "max(|c1|^2 + |c2|^2 - 1)")


def check_channel_swap(ctx: SuiteContext) -> PropertyOutcome:
    worst = 0.0
    for zeta in (0.0, 1.0):
        base = ModelParams(zeta=zeta, t_max=ctx.t_max, n_steps=int(ctx.t_max) + 1)
        p0, p1 = (
            propagate_analytic(ctx.solver_params(base.with_updates(l_over_lambda0=x)))
            for x in (0.0, 0.25)
        )
        worst = max(worst, float(np.max(np.abs(p0.population - p1.population))))
    return _outcome(
        "channel_swap_symmetry",
        worst,
        SWAP_TOLERANCE,
        "max |p(theta=0) - p(theta=pi/2)| for zeta/gamma in {0, 1}",
    )


def check_residual(ctx: SuiteContext) -> PropertyOutcome:
    worst = 0.0
    for params in ctx.ensemble:
        t = np.linspace(0.0, min(params.t_max, 50.0), 201)
        for channel in collective_channels(params):
            roots = channel_roots(ctx.solver_channel(channel), params)
            residual = channel_residual(1.0, roots, channel, params, t)
            worst = max(worst, float(np.max(residual)))
    return _outcome(
        "closed_form_residual",
        worst,
        RESIDUAL_TOLERANCE,
        "max residual of the channel integro-differential equation",
    )


def check_mixed_enhancement(ctx: SuiteContext) -> PropertyOutcome:
    """Compare the mixed geometry against theta = 0 at the default parameters.

    Informational: the sign of the margin depends on zeta/gamma. At the
    defaults (zeta/gamma = 1) the mixed geometry stays slightly below.
    """
    params = ModelParams()
    labels = [config.label for config in channel_configurations()]
    batch = [
        ctx.solver_params(params.with_updates(l_over_lambda0=config.l_over_lambda0))
        for config in channel_configurations()
    ]
    w_peaks = dict(zip(labels, time_maxima(batch, "ergotropy")))
    e_peaks = dict(zip(labels, time_maxima(batch, "energy")))
    w_margin = float(w_peaks["mixed"] - w_peaks["gamma_a_zero"])
    e_margin = float(e_peaks["mixed"] - e_peaks["gamma_a_zero"])
    direction = "above" if min(w_margin, e_margin) > 0 else "not above"
    return PropertyOutcome(
        name="mixed_channel_enhancement",
        passed=bool(w_margin > 0 and e_margin > 0),
        gating=False,
        measured=min(w_margin, e_margin),
        threshold=0.0,
        detail=(
            f"mixed geometry {direction} theta = 0 at zeta/gamma = {params.zeta:g}: "
            f"max W(pi/4) - max W(0) = {w_margin:.3e}, "
            f"max E(pi/4) - max E(0) = {e_margin:.3e} (units of omega0)"
        ),
    )


def _small_time_geometry(ctx: SuiteContext, observable: str):
    params = ModelParams(t_max=400.0, n_steps=2001)
    l_grid = GridSpec(axis="l_over_lambda0", min=-0.5, max=1.0, n_points=16)
    t_grid = GridSpec(axis="time", min=0.0, max=params.t_max, n_points=params.n_steps)
    return sweep_time_geometry(
        ctx.solver_params(params), l_grid, t_grid, observable, ctx.workers
    )


def check_threshold_law(ctx: SuiteContext) -> PropertyOutcome:
    population = _small_time_geometry(ctx, "population").values
    ergotropy = _small_time_geometry(ctx, "ergotropy").values
    expected = np.where(population > 0.5, 2.0 * population - 1.0, 0.0)
    below = population <= 0.5
    leaked = float(np.max(np.abs(ergotropy[below]), initial=0.0))
    mismatch = float(np.max(np.abs(ergotropy - expected)))
    return _outcome(
        "ergotropy_threshold_law",
        max(leaked, mismatch),
        0.0,
        "W = 0 where p <= 1/2 and W = 2p - 1 elsewhere, exactly",
    )


def _width_maps(ctx: SuiteContext, observable: str, workers: int):
    n_lambda = 4 if ctx.quick else 8
    params = ModelParams()
    l_grid = GridSpec(
        axis="l_over_lambda0", min=0.0, max=0.5, n_points=6 if ctx.quick else 11
    )
    lambda_grid = GridSpec(
        axis="lambda_over_gamma", min=0.05, max=1.0, n_points=n_lambda, spacing="log"
    )
    return sweep_geometry_width(
        ctx.solver_params(params),
        l_grid,
        lambda_grid,
        observable=observable,
        horizon_factor=50.0,
        workers=workers,
    )


def check_monotone_memory(ctx: SuiteContext) -> PropertyOutcome:
    worst = 0.0
    for observable in ("energy", "ergotropy"):
        values = _width_maps(ctx, observable, ctx.workers).values
        # rows are increasing lambda/gamma
        worst = max(worst, float(np.max(np.diff(values, axis=0), initial=0.0)))
    return _outcome(
        "monotone_memory_degradation",
        worst,
        MONOTONE_TOLERANCE,
        "largest increase of max_energy / max_ergotropy along lambda/gamma",
    )


def check_geometry_periodicity(ctx: SuiteContext) -> PropertyOutcome:
    values = _small_time_geometry(ctx, "energy").values
    # rows are l = -0.5, -0.4, ..., 1.0
    shifted = float(np.max(np.abs(values[:-5] - values[5:])))
    mirrored = float(np.max(np.abs(values[:11] - values[10::-1])))
    return _outcome(
        "geometry_periodicity",
        max(shifted, mirrored),
        PERIODICITY_TOLERANCE,
        "rows at l, l + 1/2 and -l agree",
    )


def check_power_energy(ctx: SuiteContext) -> PropertyOutcome:
    base = ctx.solver_params(ModelParams(t_max=10.0, n_steps=20001))
    series = compute_observables(propagate_analytic(base))
    work = cumulative_work(series.power, series.t_grid)
    work_error = float(np.max(np.abs(work - (series.energy - series.energy[0]))))

    errors = []
    for n_steps in (401, 801, 1601):
        refined = base.with_updates(t_max=20.0, n_steps=n_steps)
        fine = compute_observables(propagate_analytic(refined))
        fd = finite_difference_power(fine.energy, fine.t_grid)
        errors.append(float(np.max(np.abs(fd - fine.power))))
    order = float(np.min(observed_order(errors)))

    outcome = _outcome(
        "power_energy_consistency",
        work_error,
        WORK_TOLERANCE,
        f"trapezoid of P vs E(t) - E(0); finite-difference order {order:.2f}",
    )
    if order < 1.7:
        return outcome.model_copy(update={"passed": False})
    return outcome


def check_ergotropy_oracle(ctx: SuiteContext) -> PropertyOutcome:
    worst = 0.0
    for p in ctx.rng.uniform(0.0, 1.0, size=1000):
        pair = spectral_pair_from_diagonal([1.0 - p, p], [0.0, 1.0])
        general = ergotropy_general(pair)
        worst = max(worst, abs(general - float(ergotropy_qubit(p, 1.0))))

    for _ in range(100):
        populations = ctx.rng.dirichlet(np.ones(3))
        energies = ctx.rng.uniform(-1.0, 3.0, size=3)
        stored = float(np.dot(populations, energies))
        passive = min(
            float(np.dot(populations[list(perm)], energies))
            for perm in itertools.permutations(range(3))
        )
        general = ergotropy_general(spectral_pair_from_diagonal(populations, energies))
        worst = max(worst, abs(general - (stored - passive)))
    return _outcome(
        "ergotropy_oracle",
        worst,
        ORACLE_ERGOTROPY_TOLERANCE,
        "qubit formula and brute-force permutations vs sorted spectra",
    )


def check_dark_limit(ctx: SuiteContext) -> PropertyOutcome:
    params = ctx.solver_params(ModelParams(zeta=0.0, l_over_lambda0=0.0))
    traj = propagate_on_grid(params, np.array([0.0, 2000.0]))
    error = abs(float(traj.population[-1]) - 0.25)
    return _outcome(
        "dark_channel_limit",
        error,
        DARK_LIMIT_TOLERANCE,
        "|p(t = 2000) - 1/4| at theta = 0, zeta = 0",
    )


def check_determinism(ctx: SuiteContext) -> PropertyOutcome:
    counts = (1, 2) if ctx.quick else (1, 4, 8)
    reference = _width_maps(ctx, "energy", counts[0]).values.tobytes()
    differing = sum(
        _width_maps(ctx, "energy", workers).values.tobytes() != reference
        for workers in counts[1:]
    )
    return _outcome(
        "sweep_determinism",
        float(differing),
        0.0,
        f"byte-identical maps for worker counts {counts}",
    )


CHECKS: Tuple[Check, ...] = (
    check_oracle_equivalence,
    check_norm_safety,
    check_channel_swap,
    check_residual,
    check_mixed_enhancement,
    check_threshold_law,
    check_monotone_memory,
    check_geometry_periodicity,
    check_power_energy,
    check_ergotropy_oracle,
    check_dark_limit,
    check_determinism,
)


def run_validation(
    seed: int = 42,
    quick: bool = False,
    fault: Optional[str] = None,
    workers: int = 1,
) -> ValidationReport:
    """Run every check and collect the outcomes."""
    ctx = SuiteContext(seed, quick, fault, workers)
    outcomes = []
    for check in CHECKS:
        outcome = check(ctx)
        logger.info(
            "%s: passed=%s measured=%s", outcome.name, outcome.passed, outcome.measured
        )
        outcomes.append(outcome)
    return ValidationReport(
        seed=seed,
        ensemble_size=ctx.ensemble_size,
        fault=fault,
        outcomes=outcomes,
    )


def format_report(report: ValidationReport) -> str:
    lines = []
    for outcome in report.outcomes:
        mark = "✅" if outcome.passed else ("❌" if outcome.gating else "⚠️ ")
        suffix = "" if outcome.gating else " (informational)"
        figures = ""
        if outcome.measured is not None:
            figures += f": measured {outcome.measured:.3e}"
        if outcome.threshold is not None:
            figures += f" threshold {outcome.threshold:.1e}"
        lines.append(f"{mark} {outcome.name}{figures}{suffix}")
        if outcome.detail:
            lines.append(f"   {outcome.detail}")
    lines.append("")
    if report.passed:
        lines.append("🎉 All gating properties passed")
    else:
        lines.append("💥 Validation failed")
    return "\n".join(lines)
