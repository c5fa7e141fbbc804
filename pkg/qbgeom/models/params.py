"""
Input models for qbgeom: physical parameters, channel specs, integrator
settings and sweep grids.

All rates and frequencies are expressed in units of the system-reservoir
coupling γ, which is fixed to 1.
"""

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DEFAULT_OMEGA0_OVER_GAMMA = 100.0
DEFAULT_ZETA_OVER_OMEGA0 = 0.01
DEFAULT_LAMBDA_OVER_GAMMA = 0.04
DEFAULT_L_OVER_LAMBDA0 = 0.125
DEFAULT_HORIZON_FACTOR = 100.0
DEFAULT_N_STEPS = 5000


class ModelParams(BaseModel):
    """Physical and numerical inputs of a single simulation."""

    model_config = ConfigDict(
        frozen=True,
        populate_by_name=True,
        allow_inf_nan=False,
        json_schema_extra={
            "example": {
                "omega0": 100.0,
                "zeta": 1.0,
                "gamma": 1.0,
                "lambda": 0.04,
                "l_over_lambda0": 0.125,
                "t_max": 2500.0,
                "n_steps": 5000,
            }
        },
    )

    omega0: float = Field(
        default=DEFAULT_OMEGA0_OVER_GAMMA,
        gt=0,
        description="Qubit transition frequency ω₀/γ",
    )
    zeta: float = Field(
        default=DEFAULT_ZETA_OVER_OMEGA0 * DEFAULT_OMEGA0_OVER_GAMMA,
        description="Coherent dipole-dipole coupling ζ/γ (resolved value, any sign)",
    )
    gamma: float = Field(
        default=1.0,
        description="System-reservoir coupling; the internal unit, always 1",
    )
    lambda_: float = Field(
        default=DEFAULT_LAMBDA_OVER_GAMMA,
        gt=0,
        alias="lambda",
        description="Lorentzian half-width λ/γ (inverse memory time)",
    )
    l_over_lambda0: float = Field(
        default=DEFAULT_L_OVER_LAMBDA0,
        description="Qubit position l/λ₀; qubits sit at ±l",
    )
    t_max: float = Field(
        default=DEFAULT_HORIZON_FACTOR / DEFAULT_LAMBDA_OVER_GAMMA,
        gt=0,
        description="Final time in units of 1/γ",
    )
    n_steps: int = Field(
        default=DEFAULT_N_STEPS,
        ge=2,
        description="Number of points of the uniform time grid, endpoints included",
    )

    @field_validator("gamma")
    @classmethod
    def _gamma_is_the_unit(cls, value: float) -> float:
        if value != 1.0:
            raise ValueError("gamma is the unit of all rates and must equal 1")
        return value

    @classmethod
    def from_ratios(
        cls,
        omega0_over_gamma: float = DEFAULT_OMEGA0_OVER_GAMMA,
        zeta_over_omega0: float = DEFAULT_ZETA_OVER_OMEGA0,
        lambda_over_gamma: float = DEFAULT_LAMBDA_OVER_GAMMA,
        l_over_lambda0: float = DEFAULT_L_OVER_LAMBDA0,
        t_max: Optional[float] = None,
        n_steps: int = DEFAULT_N_STEPS,
        horizon_factor: float = DEFAULT_HORIZON_FACTOR,
    ) -> "ModelParams":
        """Build parameters from the dimensionless ratios used on the command line.

        ζ is resolved as (ζ/ω₀)·(ω₀/γ). When ``t_max`` is omitted the horizon
        defaults to ``horizon_factor / λ``.
        """
        if t_max is None and lambda_over_gamma > 0:
            t_max = horizon_factor / lambda_over_gamma
        return cls(
            omega0=omega0_over_gamma,
            zeta=zeta_over_omega0 * omega0_over_gamma,
            lambda_=lambda_over_gamma,
            l_over_lambda0=l_over_lambda0,
            t_max=t_max,
            n_steps=n_steps,
        )

    @property
    def memory_time(self) -> float:
        return 1.0 / self.lambda_

    @property
    def dt_grid(self) -> float:
        """Spacing of the uniform output grid."""
        return self.t_max / (self.n_steps - 1)

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps)

    def with_updates(self, **fields) -> "ModelParams":
        """Return a re-validated copy with some fields replaced."""
        data = self.model_dump()
        data.update(fields)
        return type(self).model_validate(data)


class ChannelSpec(BaseModel):
    """One collective channel: kernel weight and coherent detuning."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    weight: float = Field(
        ...,
        ge=0.0,
        le=2.0,
        description="Dimensionless kernel weight g (1 ± cos 2θ)",
    )
    detuning: float = Field(
        ...,
        description="Coherent shift δ/γ (+ζ symmetric, -ζ antisymmetric)",
    )


class IntegratorConfig(BaseModel):
    """Settings of the numerical oracle."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    scheme: Literal["augmented-rk4", "volterra-trapezoid"] = Field(
        default="augmented-rk4",
        description="Augmented local ODE with RK4, or trapezoidal Volterra scheme",
    )
    dt: float = Field(default=0.005, gt=0, description="Step size in units of 1/γ")
    abs_tol: float = Field(
        default=1e-6,
        gt=0,
        description="Largest closed-form vs numeric amplitude gap accepted by validation",
    )


AxisName = Literal["l_over_lambda0", "lambda_over_gamma", "time"]


class GridSpec(BaseModel):
    """A one-dimensional sweep axis."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    axis: AxisName = Field(..., description="Swept quantity")
    min: float = Field(..., description="First grid value")
    max: float = Field(..., description="Last grid value")
    n_points: int = Field(..., ge=2, description="Number of grid points")
    spacing: Literal["linear", "log"] = Field(default="linear")

    @model_validator(mode="after")
    def _check_bounds(self) -> "GridSpec":
        if not self.min < self.max:
            raise ValueError(f"grid {self.axis}: min must be < max")
        if self.spacing == "log" and self.min <= 0:
            raise ValueError(f"grid {self.axis}: log spacing requires min > 0")
        return self

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.n_points)
        return np.linspace(self.min, self.max, self.n_points)
