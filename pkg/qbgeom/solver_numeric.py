"""
Fixed-step numerical oracle for the channel dynamics.

Two structurally different schemes:

* ``augmented-rk4``: the exponential kernel turns each channel into the local
  linear system db/dt = -iδb - (gγλ/2)z, dz/dt = b - λz, z(0) = 0, integrated
  with classical fourth-order Runge-Kutta steps.
* ``volterra-trapezoid``: the memory integral is discretised directly with
  trapezoidal weights against an arbitrary kernel, and the resulting implicit
  trapezoidal step is solved exactly (it is linear in the new value).
"""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DomainError, StabilityError
from .models.params import ChannelSpec, IntegratorConfig, ModelParams
from .models.results import AmplitudeTrajectory
from .reservoir import collective_channels, memory_kernel
from .solver_analytic import check_initial_state

logger = logging.getLogger(__name__)

STABILITY_LIMIT = 0.5

_SQRT_HALF = np.sqrt(0.5)

Kernel = Callable[[np.ndarray], np.ndarray]


def stability_number(dt: float, channel: ChannelSpec, params: ModelParams) -> float:
    """dt·max(λ, |δ|, sqrt(gγλ/2)); steps above STABILITY_LIMIT are rejected."""
    rate = max(
        params.lambda_,
        abs(channel.detuning),
        math.sqrt(0.5 * channel.weight * params.gamma * params.lambda_),
    )
    return dt * rate


def _substeps(params: ModelParams, dt: float) -> Tuple[int, float]:
    """Split each output interval into m equal substeps no longer than dt."""
    spacing = params.dt_grid
    m = max(1, math.ceil(spacing / dt - 1e-9))
    h = spacing / m
    if h < dt * (1 - 1e-12):
        logger.warning(
            "integrator step rounded down from %.6g to %.6g to land on the output grid",
            dt,
            h,
        )
    return m, h


def _rk4_propagator(matrix: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step of the linear system y' = My as a matrix.

    For a linear autonomous right-hand side the four stages collapse to the
    degree-4 Taylor polynomial of exp(hM).
    """
    a = h * matrix
    identity = np.eye(matrix.shape[0], dtype=complex)
    a2 = a @ a
    a3 = a2 @ a
    a4 = a3 @ a
    return identity + a + a2 / 2.0 + a3 / 6.0 + a4 / 24.0


def _channel_rk4(
    b0: complex, channel: ChannelSpec, params: ModelParams, m: int, h: float
) -> Tuple[np.ndarray, np.ndarray]:
    kappa = 0.5 * channel.weight * params.gamma * params.lambda_
    matrix = np.array(
        [[-1j * channel.detuning, -kappa], [1.0, -params.lambda_]], dtype=complex
    )
    interval = np.linalg.matrix_power(_rk4_propagator(matrix, h), m)

    states = np.empty((params.n_steps, 2), dtype=complex)
    states[0] = (b0, 0.0)
    for k in range(1, params.n_steps):
        states[k] = interval @ states[k - 1]

    b = states[:, 0]
    db = -1j * channel.detuning * b - kappa * states[:, 1]
    return b, db


def _channel_trapezoid(
    b0: complex,
    channel: ChannelSpec,
    params: ModelParams,
    m: int,
    h: float,
    kernel: Kernel,
) -> Tuple[np.ndarray, np.ndarray]:
    n_fine = (params.n_steps - 1) * m + 1
    weights = channel.weight * np.asarray(kernel(h * np.arange(n_fine)), dtype=float)
    delta = channel.detuning

    b = np.empty(n_fine, dtype=complex)
    rhs = np.empty(n_fine, dtype=complex)
    b[0] = b0
    rhs[0] = -1j * delta * b0
    denominator = 1.0 + 0.5 * h * (1j * delta + 0.5 * h * weights[0])

    for n in range(n_fine - 1):
        # memory integral at t_{n+1} without the implicit b_{n+1} endpoint
        history = 0.5 * weights[n + 1] * b[0]
        if n:
            history += np.dot(weights[n:0:-1], b[1 : n + 1])
        history *= h
        b[n + 1] = (b[n] + 0.5 * h * (rhs[n] - history)) / denominator
        memory = history + 0.5 * h * weights[0] * b[n + 1]
        rhs[n + 1] = -1j * delta * b[n + 1] - memory

    return b[::m], rhs[::m]


def propagate_numeric(
    params: ModelParams,
    c1_0: complex = 1.0,
    c2_0: complex = 0.0,
    config: Optional[IntegratorConfig] = None,
    kernel: Optional[Kernel] = None,
) -> AmplitudeTrajectory:
    """Numerical trajectory on the uniform grid of ``params``.

    ``kernel`` is only used by the trapezoidal scheme and defaults to the
    Lorentzian memory kernel f(τ) = (γλ/2)exp(-λτ).
    """
    config = config or IntegratorConfig()
    check_initial_state(c1_0, c2_0)
    if config.dt > params.t_max / 10.0:
        raise DomainError(
            f"dt = {config.dt:g} exceeds t_max/10 = {params.t_max / 10.0:g}"
        )

    channels = collective_channels(params)
    for channel in channels:
        number = stability_number(config.dt, channel, params)
        if number > STABILITY_LIMIT:
            raise StabilityError(
                f"dt = {config.dt:g} is too large: dt*rate = {number:.3g} > "
                f"{STABILITY_LIMIT} for channel weight {channel.weight:.3g}, "
                f"detuning {channel.detuning:.3g}"
            )

    m, h = _substeps(params, config.dt)
    if kernel is None:

        def kernel(tau):
            return memory_kernel(tau, params)

    logger.info(
        "numeric run: scheme=%s h=%.6g substeps=%d n=%d",
        config.scheme,
        h,
        m,
        params.n_steps,
    )

    amplitudes = []
    for channel, b0 in zip(
        channels, ((c1_0 + c2_0) * _SQRT_HALF, (c1_0 - c2_0) * _SQRT_HALF)
    ):
        if config.scheme == "augmented-rk4":
            amplitudes.append(_channel_rk4(b0, channel, params, m, h))
        else:
            amplitudes.append(_channel_trapezoid(b0, channel, params, m, h, kernel))

    (bp, dbp), (bm, dbm) = amplitudes
    return AmplitudeTrajectory(
        t_grid=params.time_grid(),
        c1=(bp + bm) * _SQRT_HALF,
        c2=(bp - bm) * _SQRT_HALF,
        dc2_dt=(dbp - dbm) * _SQRT_HALF,
    )


def observed_order(errors: Sequence[float], ratio: float = 2.0) -> np.ndarray:
    """Convergence exponents log_ratio(e_k / e_{k+1}) along a refinement ladder."""
    errors = np.asarray(errors, dtype=float)
    if errors.size < 2 or np.any(errors <= 0):
        raise DomainError("need at least two positive errors to estimate an order")
    return np.log(errors[:-1] / errors[1:]) / np.log(ratio)
