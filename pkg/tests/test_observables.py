"""
Tests for the battery observables.

This module checks energy, the ergotropy threshold law against the general
passive-state construction, charging power and time maxima.
"""

import itertools

import numpy as np
import pytest

from qbgeom import observables
from qbgeom.exceptions import DomainError
from qbgeom.models import AmplitudeTrajectory, SpectralPair
from qbgeom.observables import (
    average_power,
    compute_observables,
    cumulative_work,
    energy,
    ergotropy_from_matrices,
    ergotropy_general,
    ergotropy_qubit,
    finite_difference_power,
    instantaneous_power,
    max_over_time,
    observable_series,
    spectral_pair_from_diagonal,
)
from qbgeom.solver_analytic import propagate_analytic


class TestErgotropy:
    """Test cases for ergotropy."""

    @pytest.mark.parametrize(
        "p,expected", [(0.0, 0.0), (0.3, 0.0), (0.5, 0.0), (0.75, 0.5), (1.0, 1.0)]
    )
    def test_qubit_threshold_law(self, p, expected):
        """Test W = ω₀(2p - 1) above p = 1/2 and exactly 0 at or below."""
        assert ergotropy_qubit(p, 1.0) == pytest.approx(expected)

    def test_qubit_zero_is_exact(self):
        """Test that sub-threshold populations give an exact zero."""
        values = ergotropy_qubit(np.linspace(0.0, 0.5, 11), 100.0)
        assert np.all(values == 0.0)

    def test_qubit_formula_matches_general(self, rng):
        """Test the closed form against the sorted-spectrum construction."""
        for p in rng.uniform(0.0, 1.0, size=200):
            pair = spectral_pair_from_diagonal([1.0 - p, p], [0.0, 1.0])
            assert ergotropy_general(pair) == pytest.approx(
                float(ergotropy_qubit(p, 1.0)), abs=1e-12
            )

    def test_general_matches_brute_force(self, rng):
        """Test the sorted construction against a minimum over permutations."""
        for _ in range(50):
            populations = rng.dirichlet(np.ones(4))
            energies = rng.uniform(-1.0, 2.0, size=4)
            stored = float(np.dot(populations, energies))
            passive = min(
                float(np.dot(populations[list(perm)], energies))
                for perm in itertools.permutations(range(4))
            )
            pair = spectral_pair_from_diagonal(populations, energies)
            assert ergotropy_general(pair) == pytest.approx(stored - passive, abs=1e-12)

    def test_passive_state_has_no_ergotropy(self):
        """Test that a passive state with identity assignment gives zero."""
        pair = SpectralPair(
            state_eigenvalues=np.array([0.6, 0.3, 0.1]),
            energy_eigenvalues=np.array([0.0, 1.0, 2.5]),
        )
        assert ergotropy_general(pair) == 0.0

    def test_population_inversion(self):
        """Test a fully inverted three-level state."""
        pair = SpectralPair(
            state_eigenvalues=np.array([1.0, 0.0, 0.0]),
            energy_eigenvalues=np.array([0.0, 1.0, 2.0]),
            assignment=(2, 1, 0),
        )
        assert ergotropy_general(pair) == pytest.approx(2.0)

    @pytest.mark.parametrize(
        "state,levels,assignment",
        [
            ([0.4, 0.6], [0.0, 1.0], None),
            ([0.6, 0.3], [0.0, 1.0], None),
            ([0.6, 0.4], [1.0, 0.0], None),
            ([0.6, 0.4], [0.0, 1.0], (0, 0)),
            ([1.2, -0.2], [0.0, 1.0], None),
            ([], [], None),
        ],
    )
    def test_rejects_malformed_spectra(self, state, levels, assignment):
        """Test ordering, normalisation and permutation checks."""
        pair = SpectralPair(np.array(state), np.array(levels), assignment)
        with pytest.raises(DomainError):
            ergotropy_general(pair)

    def test_from_matrices_with_coherences(self):
        """Test a pure excited-state superposition, whose passive state is |0⟩."""
        psi = np.array([np.sqrt(0.2), np.sqrt(0.8)])
        rho = np.outer(psi, psi.conj())
        hamiltonian = np.diag([0.0, 1.0])
        assert ergotropy_from_matrices(rho, hamiltonian) == pytest.approx(0.8)

    def test_from_matrices_matches_qubit_formula_on_diagonal_states(self):
        """Test the eigendecomposition route on the battery's diagonal state."""
        for p in (0.1, 0.5, 0.9):
            rho = np.diag([1.0 - p, p])
            value = ergotropy_from_matrices(rho, np.diag([0.0, 1.0]))
            assert value == pytest.approx(float(ergotropy_qubit(p, 1.0)), abs=1e-12)

    def test_from_matrices_rejects_non_hermitian(self):
        """Test the Hermiticity check."""
        with pytest.raises(DomainError):
            ergotropy_from_matrices(np.array([[1.0, 1.0], [0.0, 0.0]]), np.eye(2))


class TestEnergyAndPower:
    """Test cases for energy and charging power."""

    def test_energy_scales_with_omega0(self):
        """Test E_B = ω₀·p."""
        np.testing.assert_allclose(energy([0.0, 0.5], 100.0), [0.0, 50.0])

    def test_power_is_the_derivative_of_energy(self, short_params):
        """Test P_B against second-order differences of E_B."""
        params = short_params.with_updates(n_steps=4001)
        series = compute_observables(propagate_analytic(params))
        fd = finite_difference_power(series.energy, series.t_grid)
        np.testing.assert_allclose(series.power, fd, atol=1e-4)

    def test_work_integrates_to_energy(self, short_params):
        """Test ∫P_B dt = E_B(t) - E_B(0) by the trapezoid rule."""
        params = short_params.with_updates(t_max=10.0, n_steps=20001)
        series = compute_observables(propagate_analytic(params))
        work = cumulative_work(series.power, series.t_grid)
        assert work[0] == 0.0
        np.testing.assert_allclose(work, series.energy - series.energy[0], atol=5e-6)

    def test_instantaneous_power_formula(self):
        """Test P_B = 2ω₀·Re[conj(c2)·dc2/dt]."""
        traj = AmplitudeTrajectory(
            t_grid=np.array([0.0]),
            c1=np.array([0.0j]),
            c2=np.array([0.5 + 0.5j]),
            dc2_dt=np.array([1.0 - 1.0j]),
        )
        # conj(c2)*dc2 = (0.5 - 0.5j)(1 - 1j) = -1j
        assert instantaneous_power(traj, 3.0)[0] == pytest.approx(0.0)

    def test_average_power(self):
        """Test P̄ = E/t with P̄(0) = 0."""
        np.testing.assert_allclose(
            average_power([0.0, 1.0, 3.0], [0.0, 2.0, 3.0]), [0.0, 0.5, 1.0]
        )

    def test_compute_observables_uses_unit_omega0(self, short_params):
        """Test that the exported series are in units of ω₀."""
        traj = propagate_analytic(short_params)
        series = compute_observables(traj)
        np.testing.assert_array_equal(series.energy, traj.population)
        scaled = compute_observables(traj, omega0=short_params.omega0)
        np.testing.assert_allclose(scaled.energy, 100.0 * series.energy)


class TestObservableSeries:
    """Test cases for computing a single named series."""

    @pytest.mark.parametrize(
        "name", ["population", "energy", "ergotropy", "power", "average_power"]
    )
    def test_matches_the_full_set(self, short_params, name):
        """Test each series against compute_observables."""
        traj = propagate_analytic(short_params)
        np.testing.assert_array_equal(
            observable_series(traj, name, 3.0),
            getattr(compute_observables(traj, 3.0), name),
        )

    def test_builds_only_the_requested_series(self, short_params, mocker):
        """Test that asking for energy leaves power and ergotropy alone."""
        traj = propagate_analytic(short_params)
        power = mocker.spy(observables, "instantaneous_power")
        ergotropy = mocker.spy(observables, "ergotropy_qubit")
        observable_series(traj, "energy")
        assert power.call_count == 0
        assert ergotropy.call_count == 0

    def test_unknown_name(self, short_params):
        """Test that an unknown series name is a domain error."""
        with pytest.raises(DomainError):
            observable_series(propagate_analytic(short_params), "entropy")


class TestMaxOverTime:
    """Test cases for time maxima."""

    def test_returns_time_and_value(self):
        """Test the location and value of a single maximum."""
        t_star, peak = max_over_time([0.0, 2.0, 1.0], [0.0, 0.5, 1.0])
        assert (t_star, peak) == (0.5, 2.0)

    def test_ties_go_to_the_earliest_time(self):
        """Test that the first of equal maxima wins."""
        t_star, _ = max_over_time([1.0, 3.0, 3.0], [0.0, 1.0, 2.0])
        assert t_star == 1.0

    def test_stacked_series(self):
        """Test row-wise maxima of a stack of series."""
        t_star, peak = max_over_time(
            np.array([[0.0, 1.0], [5.0, 2.0]]), np.array([0.0, 1.0])
        )
        np.testing.assert_array_equal(t_star, [1.0, 0.0])
        np.testing.assert_array_equal(peak, [1.0, 5.0])

    def test_rejects_empty_series(self):
        """Test that an empty series has no maximum."""
        with pytest.raises(DomainError):
            max_over_time([], [])
