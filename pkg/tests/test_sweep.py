"""
Tests for the sweep engine.

This module checks map orientation, agreement with single trajectories,
byte-identical results across worker counts and the reduction horizon check.
"""

import time

import numpy as np
import pytest

from qbgeom import sweep
from qbgeom.exceptions import DomainError
from qbgeom.models import GridSpec, ModelParams
from qbgeom.observables import compute_observables, max_over_time
from qbgeom.solver_analytic import propagate_analytic
from qbgeom.sweep import (
    PEAK_SPACING,
    SweepCell,
    channel_configurations,
    horizon_convergence,
    rate_bound,
    resolved_steps,
    run_parallel,
    sweep_geometry_width,
    sweep_time_geometry,
    time_maxima,
)


class TestTimeGeometry:
    """Test cases for geometry × time maps."""

    def test_shape_and_axes(self, short_params, l_grid, time_grid):
        """Test rows along l/λ₀ and columns along γt."""
        result = sweep_time_geometry(short_params, l_grid, time_grid)
        assert result.values.shape == (5, short_params.n_steps)
        assert result.row_axis.axis == "l_over_lambda0"
        assert result.col_axis.axis == "time"
        assert result.observable == "energy"
        assert result.manifest.observable == "energy"

    def test_rows_are_single_trajectories(self, short_params, l_grid, time_grid):
        """Test each row against a direct closed-form run."""
        result = sweep_time_geometry(short_params, l_grid, time_grid, "ergotropy")
        for row, position in zip(result.values, l_grid.values()):
            traj = propagate_analytic(
                short_params.with_updates(l_over_lambda0=float(position))
            )
            np.testing.assert_array_equal(row, compute_observables(traj).ergotropy)

    def test_rows_half_a_wavelength_apart_agree(self, short_params, l_grid, time_grid):
        """Test that l = 0 and l = λ₀/2 give the same row."""
        values = sweep_time_geometry(short_params, l_grid, time_grid).values
        np.testing.assert_allclose(values[0], values[-1], atol=1e-12)

    def test_rejects_negative_times(self, short_params, l_grid):
        """Test that the time axis must start at t ≥ 0."""
        t_grid = GridSpec(axis="time", min=-1.0, max=1.0, n_points=3)
        with pytest.raises(DomainError):
            sweep_time_geometry(short_params, l_grid, t_grid)

    def test_rejects_swapped_axes(self, short_params, l_grid, time_grid):
        """Test that each grid must sweep the expected quantity."""
        with pytest.raises(DomainError):
            sweep_time_geometry(short_params, time_grid, l_grid)

    def test_rejects_unknown_observable(self, short_params, l_grid, time_grid):
        """Test the observable name check."""
        with pytest.raises(DomainError):
            sweep_time_geometry(short_params, l_grid, time_grid, "entropy")


class TestGeometryWidth:
    """Test cases for bath-width × geometry maxima maps."""

    def test_shape_and_axes(self, short_params, l_grid, lambda_grid):
        """Test rows along λ/γ and columns along l/λ₀."""
        result = sweep_geometry_width(
            short_params, l_grid, lambda_grid, horizon_factor=5.0
        )
        assert result.values.shape == (3, 5)
        assert result.row_axis.axis == "lambda_over_gamma"
        assert result.col_axis.axis == "l_over_lambda0"
        assert result.observable == "max_energy"
        assert result.manifest.horizon_factor == 5.0

    def test_cells_are_time_maxima(self, short_params, l_grid, lambda_grid):
        """Test one cell against the maximum of a dense direct run to factor/λ."""
        result = sweep_geometry_width(
            short_params, l_grid, lambda_grid, observable="power", horizon_factor=5.0
        )
        lam = float(lambda_grid.values()[1])
        position = float(l_grid.values()[2])
        params = short_params.with_updates(
            lambda_=lam, l_over_lambda0=position, t_max=5.0 / lam, n_steps=100001
        )
        series = compute_observables(propagate_analytic(params))
        expected = max_over_time(series.power, series.t_grid)[1]
        assert result.values[1, 2] >= expected - 1e-12
        assert result.values[1, 2] == pytest.approx(expected, abs=1e-6)

    def test_all_cells_are_finite(self, short_params, l_grid, lambda_grid):
        """Test that no cell is left unfilled."""
        result = sweep_geometry_width(
            short_params, l_grid, lambda_grid, observable="ergotropy",
            horizon_factor=5.0,
        )
        assert np.all(np.isfinite(result.values))
        assert np.all(result.values >= 0.0)

    @pytest.mark.parametrize("kwargs", [{"reduce": "mean"}, {"horizon_factor": 0.0}])
    def test_rejects_bad_options(self, short_params, l_grid, lambda_grid, kwargs):
        """Test unsupported reductions and non-positive horizons."""
        with pytest.raises(DomainError):
            sweep_geometry_width(short_params, l_grid, lambda_grid, **kwargs)


class TestTimeMaxima:
    """Test cases for closed-form peak refinement of time maxima."""

    def test_default_density_is_monotone_in_width(self):
        """Test narrowly spaced widths at the default grid density."""
        params = ModelParams()
        l_grid = GridSpec(axis="l_over_lambda0", min=0.035, max=0.535, n_points=2)
        lambda_grid = GridSpec(
            axis="lambda_over_gamma", min=0.0455, max=0.0473, n_points=2,
            spacing="log",
        )
        for observable in ("energy", "ergotropy"):
            values = sweep_geometry_width(
                params, l_grid, lambda_grid, observable=observable
            ).values
            assert np.all(np.diff(values, axis=0) <= 1e-3)
            np.testing.assert_allclose(values[:, 0], values[:, 1], atol=1e-9)

    def test_default_density_matches_a_dense_run(self):
        """Test a width cell against a run on a forty times finer grid."""
        params = ModelParams()
        l_grid = GridSpec(axis="l_over_lambda0", min=0.035, max=0.535, n_points=2)
        lambda_grid = GridSpec(
            axis="lambda_over_gamma", min=0.0455, max=0.0473, n_points=2,
            spacing="log",
        )
        values = sweep_geometry_width(params, l_grid, lambda_grid).values
        lam = float(lambda_grid.values()[0])
        dense = params.with_updates(
            lambda_=lam, l_over_lambda0=0.035, t_max=100.0 / lam, n_steps=400001
        )
        series = compute_observables(propagate_analytic(dense))
        expected = max_over_time(series.energy, series.t_grid)[1]
        assert values[0, 0] == pytest.approx(expected, abs=2e-4)
        assert values[0, 0] > 0.95

    def test_resolved_steps_caps_the_spacing(self, short_params):
        """Test that coarse grids are refined and fine ones are kept."""
        params = ModelParams()
        n_points = resolved_steps(params)
        assert n_points > params.n_steps
        assert params.t_max / (n_points - 1) <= PEAK_SPACING / rate_bound(params)
        assert resolved_steps(short_params) == short_params.n_steps

    def test_refined_maxima_bound_the_samples(self, short_params):
        """Test that refinement never reports less than the sampled maximum."""
        coarse = short_params.with_updates(n_steps=201, lambda_=0.1, t_max=60.0)
        series = compute_observables(propagate_analytic(coarse))
        for observable in ("energy", "power", "average_power"):
            sampled = max_over_time(getattr(series, observable), series.t_grid)[1]
            assert time_maxima([coarse], observable)[0] >= sampled - 1e-12

    def test_ergotropy_follows_the_energy_peak(self, short_params):
        """Test max W = max(0, 2·max E - 1) in units of ω₀."""
        batch = [short_params.with_updates(l_over_lambda0=x) for x in (0.0, 0.1, 0.25)]
        peak_e = time_maxima(batch, "energy")
        peak_w = time_maxima(batch, "ergotropy")
        np.testing.assert_array_equal(
            peak_w, np.where(peak_e > 0.5, 2.0 * peak_e - 1.0, 0.0)
        )

    def test_mixed_geometry_below_theta_zero_at_defaults(self):
        """Test the measured sign of the mixed-geometry margin at ζ/γ = 1."""
        params = ModelParams()
        batch = [
            params.with_updates(l_over_lambda0=0.125),
            params.with_updates(l_over_lambda0=0.0),
        ]
        w_mixed, w_zero = time_maxima(batch, "ergotropy")
        e_mixed, e_zero = time_maxima(batch, "energy")
        assert w_zero == pytest.approx(0.92865, abs=1e-3)
        assert -6e-3 < w_mixed - w_zero < -3e-3
        assert -3.5e-3 < e_mixed - e_zero < -1e-3

    def test_empty_batch(self):
        """Test that no parameter sets give no maxima."""
        assert time_maxima([], "energy").shape == (0,)

    def test_rejects_unknown_observable(self, short_params):
        """Test the observable name check."""
        with pytest.raises(DomainError):
            time_maxima([short_params], "entropy")


@pytest.mark.slow
class TestSweepScale:
    """Test cases for full-size default-parameter maps."""

    def test_200_by_200_width_map(self):
        """Test that a 200×200 width map at defaults finishes with finite cells."""
        l_grid = GridSpec(axis="l_over_lambda0", min=0.0, max=1.0, n_points=200)
        lambda_grid = GridSpec(
            axis="lambda_over_gamma", min=0.02, max=1.0, n_points=200, spacing="log"
        )
        start = time.perf_counter()
        result = sweep_geometry_width(ModelParams(), l_grid, lambda_grid, workers=4)
        elapsed = time.perf_counter() - start
        assert result.values.shape == (200, 200)
        assert np.all(np.isfinite(result.values))
        assert elapsed < 120.0

    @pytest.mark.parametrize("observable", sweep.SERIES_OBSERVABLES)
    def test_200_by_200_time_map(self, observable):
        """Test a 200×200 geometry × time map for each observable."""
        params = ModelParams(t_max=400.0)
        l_grid = GridSpec(axis="l_over_lambda0", min=0.0, max=1.0, n_points=200)
        t_grid = GridSpec(axis="time", min=0.0, max=400.0, n_points=200)
        start = time.perf_counter()
        result = sweep_time_geometry(params, l_grid, t_grid, observable, workers=4)
        elapsed = time.perf_counter() - start
        assert result.values.shape == (200, 200)
        assert np.all(np.isfinite(result.values))
        assert elapsed < 10.0


class TestDeterminism:
    """Test cases for worker-count independence."""

    def test_time_geometry_is_worker_independent(
        self, short_params, l_grid, time_grid
    ):
        """Test byte-identical maps for one and two workers."""
        one = sweep_time_geometry(short_params, l_grid, time_grid, workers=1)
        two = sweep_time_geometry(short_params, l_grid, time_grid, workers=2)
        assert one.values.tobytes() == two.values.tobytes()

    def test_geometry_width_is_worker_independent(
        self, short_params, l_grid, lambda_grid
    ):
        """Test byte-identical maxima maps for one and two workers."""
        kwargs = {"observable": "energy", "horizon_factor": 5.0}
        one = sweep_geometry_width(short_params, l_grid, lambda_grid, workers=1, **kwargs)
        two = sweep_geometry_width(short_params, l_grid, lambda_grid, workers=2, **kwargs)
        assert one.values.tobytes() == two.values.tobytes()

    def test_repeated_runs_are_identical(self, short_params, l_grid, lambda_grid):
        """Test that the same sweep twice gives the same bytes."""
        first = sweep_geometry_width(
            short_params, l_grid, lambda_grid, horizon_factor=5.0
        )
        second = sweep_geometry_width(
            short_params, l_grid, lambda_grid, horizon_factor=5.0
        )
        assert first.values.tobytes() == second.values.tobytes()


class TestRunParallel:
    """Test cases for the cell scheduler."""

    def test_cells_are_placed_by_position(self, short_params):
        """Test that results land at (row, col) regardless of group order."""
        cells = [
            SweepCell(row=1, col=0, params=short_params, observable="energy", group=0),
            SweepCell(
                row=0,
                col=1,
                params=short_params.with_updates(l_over_lambda0=0.0),
                observable="energy",
                group=1,
            ),
        ]
        result = run_parallel(cells, worker_count=1, shape=(2, 2))
        assert np.isnan(result.values[0, 0]) and np.isnan(result.values[1, 1])
        assert np.isfinite(result.values[1, 0]) and np.isfinite(result.values[0, 1])
        assert result.observable == "max_energy"

    def test_shape_is_inferred(self, short_params):
        """Test the matrix shape derived from the cells."""
        times = np.linspace(0.0, 1.0, 4)
        cells = [
            SweepCell(row=2, col=0, params=short_params, observable="power", times=times)
        ]
        result = run_parallel(cells)
        assert result.values.shape == (3, 4)
        assert result.observable == "power"

    def test_one_task_per_group(self, short_params, mocker):
        """Test that cells sharing a group key are dispatched together."""
        delayed = mocker.spy(sweep, "delayed")
        cells = [
            SweepCell(row=i, col=0, params=short_params, observable="energy", group=0)
            for i in range(3)
        ]
        run_parallel(cells, worker_count=1, shape=(3, 1))
        assert delayed.call_count == 1

    def test_rejects_zero_workers(self, short_params):
        """Test the worker-count check."""
        with pytest.raises(DomainError):
            run_parallel([], worker_count=0)

    def test_empty_sweep(self):
        """Test that no cells give an empty result."""
        result = run_parallel([])
        assert result.values.shape == (0, 0)
        assert result.observable == "none"


class TestChannelConfigurations:
    """Test cases for the labelled channel geometries."""

    def test_three_configurations(self):
        """Test the antisymmetric-dark, symmetric-dark and mixed geometries."""
        configs = {c.label: c for c in channel_configurations()}
        assert set(configs) == {"gamma_a_zero", "gamma_s_zero", "mixed"}
        assert configs["gamma_a_zero"].couplings[1] == 0.0
        assert configs["gamma_s_zero"].couplings[0] == pytest.approx(0.0, abs=1e-15)
        symmetric, antisymmetric = configs["mixed"].couplings
        assert symmetric == pytest.approx(-1j * antisymmetric)


class TestHorizonConvergence:
    """Test cases for the reduction horizon check."""

    def test_long_horizon_converges(self, short_params, l_grid, lambda_grid):
        """Test that maxima reached early do not move when the horizon grows."""
        params = short_params.with_updates(n_steps=2001)
        converged, change = horizon_convergence(
            params, l_grid, lambda_grid, observable="energy", horizon_factor=40.0
        )
        assert change >= 0.0
        assert converged

    def test_short_horizon_is_flagged(self, short_params, l_grid, lambda_grid):
        """Test that a horizon cutting the dynamics short is reported."""
        converged, change = horizon_convergence(
            short_params, l_grid, lambda_grid, observable="energy", horizon_factor=0.1
        )
        assert not converged
        assert change > 1e-4
