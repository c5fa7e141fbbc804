"""
Geometry and reservoir: collective channel weights, the Lorentzian spectral
density and the exponential memory kernel it produces in the frame rotating
at ω₀.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import integrate

from .exceptions import DomainError
from .models.params import ChannelSpec, ModelParams

logger = logging.getLogger(__name__)


def geometric_phase(l_over_lambda0: float) -> float:
    """Spatial phase θ = k₀l = 2π·(l/λ₀), reduced to [0, π).

    The separation is reduced modulo one half before scaling, so large
    separations keep full precision.
    """
    reduced = float(np.mod(l_over_lambda0, 0.5))
    if reduced >= 0.5:
        reduced = 0.0
    return 2.0 * np.pi * reduced


def channel_weights(theta: float) -> Tuple[float, float]:
    """Kernel weights (g₊, g₋) = (1 + cos 2θ, 1 - cos 2θ) of the two channels."""
    c = float(np.cos(2.0 * theta))
    return 1.0 + c, 1.0 - c


def collective_couplings(theta: float) -> Tuple[float, complex]:
    """Collective couplings (Γ_s/ξ, Γ_a/ξ) = (cos θ, i·sin θ)."""
    return float(np.cos(theta)), 1j * float(np.sin(theta))


def collective_channels(params: ModelParams) -> Tuple[ChannelSpec, ChannelSpec]:
    """Symmetric and antisymmetric channels for the configured geometry."""
    g_plus, g_minus = channel_weights(geometric_phase(params.l_over_lambda0))
    return (
        ChannelSpec(weight=g_plus, detuning=params.zeta),
        ChannelSpec(weight=g_minus, detuning=-params.zeta),
    )


def spectral_density(omega, params: ModelParams):
    """Lorentzian J(ω) = (γ/2π)·λ²/((ω₀-ω)² + λ²)."""
    lam = params.lambda_
    detuning = params.omega0 - np.asarray(omega, dtype=float)
    density = params.gamma / (2.0 * np.pi) * lam**2 / (detuning**2 + lam**2)
    return density if density.ndim else float(density)


def memory_kernel(tau, params: ModelParams):
    """Bath correlation f(τ) = (γλ/2)·exp(-λτ) for τ ≥ 0."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("memory kernel is only defined for tau >= 0")
    kernel = 0.5 * params.gamma * params.lambda_ * np.exp(-params.lambda_ * tau)
    return kernel if kernel.ndim else float(kernel)


def integrated_density(params: ModelParams) -> float:
    """∫J(ω)dω over the real line by adaptive quadrature (exact value γλ/2)."""
    lower, _ = integrate.quad(
        spectral_density, -np.inf, params.omega0, args=(params,), epsrel=1e-12
    )
    upper, _ = integrate.quad(
        spectral_density, params.omega0, np.inf, args=(params,), epsrel=1e-12
    )
    return lower + upper


def kernel_from_density(tau: float, params: ModelParams) -> float:
    """Fourier transform ∫J(ω)·exp(-i(ω-ω₀)τ)dω evaluated numerically.

    J is even about ω₀, so the transform is real and equals twice the cosine
    transform over the half-line.
    """
    if tau < 0:
        raise DomainError("memory kernel is only defined for tau >= 0")
    if tau == 0:
        return integrated_density(params)

    def shifted(x: float) -> float:
        return spectral_density(params.omega0 + x, params)

    value, abserr = integrate.quad(
        shifted, 0.0, np.inf, weight="cos", wvar=tau, epsabs=1e-14
    )
    logger.debug("cosine quadrature at tau=%g: abserr=%.3g", tau, abserr)
    return 2.0 * value
