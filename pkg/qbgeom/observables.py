"""
Battery figures of merit: stored energy, ergotropy and charging power.

The battery qubit is diagonal in its energy basis, diag(1 - p, p) with
p = |c2|^2, so the qubit formulas below are closed form. ``ergotropy_general``
and ``ergotropy_from_matrices`` work for any finite dimension and serve as the
reference the qubit formula is checked against.
"""

from typing import Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .exceptions import DomainError
from .models.results import AmplitudeTrajectory, ObservableSeries, SpectralPair

NORMALIZATION_TOLERANCE = 1e-12
ORDER_TOLERANCE = 1e-15


def _check_spectral_pair(
    spec: SpectralPair,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = np.asarray(spec.state_eigenvalues, dtype=float)
    levels = np.asarray(spec.energy_eigenvalues, dtype=float)
    if r.ndim != 1 or r.size == 0 or r.shape != levels.shape:
        raise DomainError("spectra must be non-empty and of equal length")
    if np.any(r < -ORDER_TOLERANCE):
        raise DomainError("state eigenvalues must be non-negative")
    if np.any(np.diff(r) > ORDER_TOLERANCE):
        raise DomainError("state eigenvalues must be sorted in non-increasing order")
    if np.any(np.diff(levels) < 0):
        raise DomainError("energy eigenvalues must be sorted in non-decreasing order")
    if abs(r.sum() - 1.0) > NORMALIZATION_TOLERANCE:
        raise DomainError(f"state eigenvalues sum to {r.sum():.15g}, expected 1")

    if spec.assignment is None:
        assignment = np.arange(r.size)
    else:
        assignment = np.asarray(spec.assignment, dtype=int)
        if sorted(assignment.tolist()) != list(range(r.size)):
            raise DomainError("assignment must be a permutation of the energy levels")
    return r, levels, assignment


def ergotropy_general(spec: SpectralPair) -> float:
    """Extractable work Σ_j r_j·(ℰ_π(j) - ℰ_j).

    The state holds population r_j on level π(j) (``spec.assignment``); the
    passive state puts the largest population on the lowest level.
    """
    r, levels, assignment = _check_spectral_pair(spec)
    return float(np.dot(r, levels[assignment] - levels))


def spectral_pair_from_diagonal(populations, energies) -> SpectralPair:
    """SpectralPair for a state diagonal in the energy eigenbasis.

    ``populations[i]`` is the occupation of the level with energy
    ``energies[i]``; neither needs to be sorted.
    """
    populations = np.asarray(populations, dtype=float)
    energies = np.asarray(energies, dtype=float)
    if populations.shape != energies.shape or populations.ndim != 1:
        raise DomainError("populations and energies must be 1-D arrays of equal length")

    by_energy = np.argsort(energies, kind="stable")
    level_populations = populations[by_energy]
    by_population = np.argsort(-level_populations, kind="stable")
    return SpectralPair(
        state_eigenvalues=level_populations[by_population],
        energy_eigenvalues=energies[by_energy],
        assignment=tuple(int(i) for i in by_population),
    )


def ergotropy_from_matrices(rho, hamiltonian) -> float:
    """Ergotropy of a Hermitian density matrix: tr(ρH) - tr(σ_ρH)."""
    rho = np.asarray(rho, dtype=complex)
    hamiltonian = np.asarray(hamiltonian, dtype=complex)
    if rho.shape != hamiltonian.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError("rho and hamiltonian must be square matrices of equal size")
    if not np.allclose(rho, rho.conj().T) or not np.allclose(
        hamiltonian, hamiltonian.conj().T
    ):
        raise DomainError("rho and hamiltonian must be Hermitian")

    r = np.linalg.eigh(rho)[0][::-1]
    levels = np.linalg.eigh(hamiltonian)[0]
    stored = float(np.real(np.trace(rho @ hamiltonian)))
    return stored - float(np.dot(r, levels))


def energy(p_series, omega0: float):
    """Stored energy E_B = ω₀·p."""
    return omega0 * np.asarray(p_series, dtype=float)


def ergotropy_qubit(p_series, omega0: float):
    """W = ω₀·(2p - 1) for p > 1/2 and exactly 0 otherwise."""
    p = np.asarray(p_series, dtype=float)
    return np.where(p > 0.5, omega0 * (2.0 * p - 1.0), 0.0)


def instantaneous_power(traj: AmplitudeTrajectory, omega0: float) -> np.ndarray:
    """P_B = 2ω₀·Re[conj(c2)·dc2/dt] = ω₀·d|c2|²/dt."""
    return 2.0 * omega0 * np.real(np.conj(traj.c2) * traj.dc2_dt)


def average_power(e_series, t_grid) -> np.ndarray:
    """P̄(t) = E_B(t)/t, with P̄ = 0 at t = 0."""
    e = np.asarray(e_series, dtype=float)
    t = np.broadcast_to(np.asarray(t_grid, dtype=float), e.shape)
    out = np.zeros_like(e)
    np.divide(e, t, out=out, where=t > 0)
    return out


def max_over_time(series, t_grid):
    """Grid time and value of the maximum along the last axis.

    Ties go to the earliest time. For stacked series both results are arrays
    with the leading shape of ``series``.
    """
    values = np.asarray(series, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    if values.size == 0 or values.shape[-1] == 0:
        raise DomainError("cannot take the maximum of an empty series")

    index = np.argmax(values, axis=-1)
    peak = np.take_along_axis(values, index[..., np.newaxis], axis=-1)[..., 0]
    t = np.broadcast_to(t, values.shape)
    t_star = np.take_along_axis(t, index[..., np.newaxis], axis=-1)[..., 0]
    if values.ndim == 1:
        return float(t_star), float(peak)
    return t_star, peak


def compute_observables(
    traj: AmplitudeTrajectory, omega0: float = 1.0
) -> ObservableSeries:
    """All battery observables along ``traj``.

    ``omega0`` sets the energy unit; the exported series use ω₀ = 1.
    """
    p = traj.population
    e = energy(p, omega0)
    return ObservableSeries(
        t_grid=traj.t_grid,
        population=p,
        energy=e,
        ergotropy=ergotropy_qubit(p, omega0),
        power=instantaneous_power(traj, omega0),
        average_power=average_power(e, traj.t_grid),
    )


def observable_series(
    traj: AmplitudeTrajectory, name: str, omega0: float = 1.0
) -> np.ndarray:
    """One named series of compute_observables, without building the others."""
    match name:
        case "population":
            return traj.population
        case "energy":
            return energy(traj.population, omega0)
        case "ergotropy":
            return ergotropy_qubit(traj.population, omega0)
        case "power":
            return instantaneous_power(traj, omega0)
        case "average_power":
            return average_power(energy(traj.population, omega0), traj.t_grid)
    raise DomainError(f"unknown observable {name!r}")


def finite_difference_power(e_series, t_grid) -> np.ndarray:
    """Second-order centred differences of E_B, one-sided at the ends."""
    return np.gradient(
        np.asarray(e_series, dtype=float), np.asarray(t_grid, dtype=float), edge_order=2
    )


def cumulative_work(power, t_grid) -> np.ndarray:
    """Running trapezoidal integral of P_B, zero at the first grid point."""
    return cumulative_trapezoid(
        np.asarray(power, dtype=float), np.asarray(t_grid, dtype=float), initial=0.0
    )
