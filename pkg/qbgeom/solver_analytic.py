"""
Closed-form single-excitation dynamics.

In the collective basis each channel b(t) obeys

    db/dt = -iδ·b(t) - g·(γλ/2)·∫₀ᵗ exp(-λ(t-t'))·b(t') dt'

whose Laplace transform B(s) = b(0)(s+λ)/((s+iδ)(s+λ) + gγλ/2) is inverted
by residues at the two roots of the denominator. Amplitudes are returned in
the frame rotating at ω₀.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from .exceptions import DomainError
from .models.params import ChannelSpec, ModelParams
from .models.results import AmplitudeTrajectory, ChannelRoots
from .reservoir import channel_weights, geometric_phase

logger = logging.getLogger(__name__)

DEGENERACY_THRESHOLD = 1e-9
NORM_TOLERANCE = 1e-12

_SQRT_HALF = np.sqrt(0.5)


def _quadratic_roots(weight, detuning, lam, gamma: float = 1.0):
    """Roots of s² + (λ + iδ)s + (iδλ + gγλ/2) for broadcastable inputs.

    The larger root comes from the quadratic formula with the sign that avoids
    cancellation, the smaller one from the product of the roots.
    """
    weight = np.asarray(weight, dtype=float)
    detuning = np.asarray(detuning, dtype=float)
    lam = np.asarray(lam, dtype=float)

    linear = lam + 1j * detuning
    constant = 1j * detuning * lam + 0.5 * weight * gamma * lam
    root = np.sqrt((lam - 1j * detuning) ** 2 - 2.0 * weight * gamma * lam)
    sign = np.where((np.conj(linear) * root).real >= 0.0, 1.0, -1.0)

    s_big = -0.5 * (linear + sign * root)
    s_small = constant / s_big
    scale = np.maximum(np.maximum(np.abs(s_big), np.abs(s_small)), lam)
    degenerate = np.abs(s_big - s_small) < DEGENERACY_THRESHOLD * scale
    return s_big, s_small, degenerate


def _closed_form(s1, s2, degenerate, lam, t):
    """b(t)/b(0) and its derivative; all arguments broadcast against ``t``."""
    e1 = np.exp(s1 * t)
    e2 = np.exp(s2 * t)
    diff = np.where(degenerate, 1.0, s1 - s2)
    b = ((s1 + lam) * e1 - (s2 + lam) * e2) / diff
    db = ((s1 + lam) * s1 * e1 - (s2 + lam) * s2 * e2) / diff

    if np.any(degenerate):
        s = 0.5 * (s1 + s2)
        es = np.exp(s * t)
        linear = 1.0 + (s + lam) * t
        b = np.where(degenerate, es * linear, b)
        db = np.where(degenerate, es * (s * linear + (s + lam)), db)
    return b, db


def channel_roots(channel: ChannelSpec, params: ModelParams) -> ChannelRoots:
    """Roots of the channel's Laplace-domain denominator."""
    s1, s2, degenerate = _quadratic_roots(
        channel.weight, channel.detuning, params.lambda_, params.gamma
    )
    return ChannelRoots(s1=complex(s1), s2=complex(s2), degenerate=bool(degenerate))


def propagate_channel(
    b0: complex,
    roots: Optional[ChannelRoots],
    channel: ChannelSpec,
    params: ModelParams,
    t_grid,
) -> Tuple[np.ndarray, np.ndarray]:
    """Channel amplitude b(t) and db/dt on ``t_grid``.

    ``roots`` may be omitted, in which case they are computed from ``channel``.
    """
    if roots is None:
        roots = channel_roots(channel, params)
    t = np.asarray(t_grid, dtype=float)
    b, db = _closed_form(roots.s1, roots.s2, roots.degenerate, params.lambda_, t)
    return b0 * b, b0 * db


def channel_residual(
    b0: complex,
    roots: ChannelRoots,
    channel: ChannelSpec,
    params: ModelParams,
    t_grid,
) -> np.ndarray:
    """|db/dt + iδb + g·(γλ/2)·∫exp(-λ(t-t'))b(t')dt'| for the closed form.

    The memory integral of an exponential response is itself closed form:
    b(0)·(exp(s₁t) - exp(s₂t))/(s₁ - s₂), or b(0)·t·exp(st) for a double root.
    """
    t = np.asarray(t_grid, dtype=float)
    b, db = propagate_channel(b0, roots, channel, params, t)
    if roots.degenerate:
        s = 0.5 * (roots.s1 + roots.s2)
        memory = b0 * t * np.exp(s * t)
    else:
        memory = (
            b0 * (np.exp(roots.s1 * t) - np.exp(roots.s2 * t)) / (roots.s1 - roots.s2)
        )
    kappa = 0.5 * channel.weight * params.gamma * params.lambda_
    return np.abs(db + 1j * channel.detuning * b + kappa * memory)


def check_initial_state(c1_0: complex, c2_0: complex) -> None:
    norm = abs(c1_0) ** 2 + abs(c2_0) ** 2
    if not np.isfinite(norm) or norm > 1.0 + NORM_TOLERANCE:
        raise DomainError(
            f"initial state has norm {norm:.15g} > 1; "
            "the single-excitation amplitudes must satisfy |c1|^2 + |c2|^2 <= 1"
        )


def propagate_batch(
    g_plus,
    g_minus,
    zeta,
    lam,
    t,
    c1_0: complex = 1.0,
    c2_0: complex = 0.0,
    gamma: float = 1.0,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised closed form for many parameter sets at once.

    ``g_plus``, ``g_minus``, ``zeta`` and ``lam`` have shape (k,) and ``t`` has
    shape (k, n), one time grid per parameter set. Returns c1, c2 and dc2/dt,
    each of shape (k, n).
    """
    (bp, dbp, _), (bm, dbm, _) = _collective_channels(
        g_plus, g_minus, zeta, lam, t, c1_0, c2_0, gamma
    )
    c1 = (bp + bm) * _SQRT_HALF
    c2 = (bp - bm) * _SQRT_HALF
    dc2 = (dbp - dbm) * _SQRT_HALF
    return c1, c2, dc2


def battery_derivatives(
    g_plus,
    g_minus,
    zeta,
    lam,
    t,
    c1_0: complex = 1.0,
    c2_0: complex = 0.0,
    gamma: float = 1.0,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """c2, dc2/dt and d²c2/dt² with the broadcasting rules of propagate_batch.

    ``t`` may have any number of columns per parameter set. The second
    derivative follows from the channel equation b'' = -(λ + iδ)b' -
    (iδλ + gγλ/2)b, so no differencing is involved.
    """
    channels = _collective_channels(g_plus, g_minus, zeta, lam, t, c1_0, c2_0, gamma)
    (bp, dbp, d2bp), (bm, dbm, d2bm) = channels
    c2 = (bp - bm) * _SQRT_HALF
    dc2 = (dbp - dbm) * _SQRT_HALF
    d2c2 = (d2bp - d2bm) * _SQRT_HALF
    return c2, dc2, d2c2


def _collective_channels(g_plus, g_minus, zeta, lam, t, c1_0, c2_0, gamma):
    """(b, db/dt, d²b/dt²) for the + and - channels, each of shape (k, n)."""
    check_initial_state(c1_0, c2_0)
    column = (slice(None), np.newaxis)
    g_plus = np.atleast_1d(np.asarray(g_plus, dtype=float))[column]
    g_minus = np.atleast_1d(np.asarray(g_minus, dtype=float))[column]
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float))[column]
    lam = np.atleast_1d(np.asarray(lam, dtype=float))[column]
    t = np.atleast_2d(np.asarray(t, dtype=float))

    channels = []
    for weight, detuning, b0 in (
        (g_plus, zeta, (c1_0 + c2_0) * _SQRT_HALF),
        (g_minus, -zeta, (c1_0 - c2_0) * _SQRT_HALF),
    ):
        s1, s2, degenerate = _quadratic_roots(weight, detuning, lam, gamma)
        b, db = _closed_form(s1, s2, degenerate, lam, t)
        b, db = b0 * b, b0 * db
        d2b = -(lam + 1j * detuning) * db - (
            1j * detuning * lam + 0.5 * weight * gamma * lam
        ) * b
        channels.append((b, db, d2b))
    return channels


def propagate_on_grid(
    params: ModelParams, t_grid, c1_0: complex = 1.0, c2_0: complex = 0.0
) -> AmplitudeTrajectory:
    """Closed-form trajectory sampled at arbitrary times."""
    t = np.asarray(t_grid, dtype=float)
    g_plus, g_minus = channel_weights(geometric_phase(params.l_over_lambda0))
    c1, c2, dc2 = propagate_batch(
        g_plus, g_minus, params.zeta, params.lambda_, t[np.newaxis, :],
        c1_0, c2_0, params.gamma,
    )
    # the closed form is exact at t = 0; pin the initial condition bitwise
    if t.size and t[0] == 0.0:
        c1[0, 0], c2[0, 0] = c1_0, c2_0
    return AmplitudeTrajectory(t_grid=t, c1=c1[0], c2=c2[0], dc2_dt=dc2[0])


def propagate_analytic(
    params: ModelParams, c1_0: complex = 1.0, c2_0: complex = 0.0
) -> AmplitudeTrajectory:
    """Closed-form trajectory on the uniform grid of ``params``.

    The charger starts excited (c1 = 1, c2 = 0) unless another single-excitation
    superposition is given.
    """
    logger.debug(
        "analytic run: theta=%.6g zeta=%.6g lambda=%.6g n=%d",
        geometric_phase(params.l_over_lambda0),
        params.zeta,
        params.lambda_,
        params.n_steps,
    )
    return propagate_on_grid(params, params.time_grid(), c1_0, c2_0)
