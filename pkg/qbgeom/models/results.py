"""
Result containers and run manifests for qbgeom.

Array-valued results are frozen dataclasses around numpy arrays; everything
that is serialized to JSON is a pydantic model.
"""

from dataclasses import dataclass
from datetime import datetime
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .. import __version__
from ..utils import utc_now
from .params import GridSpec, IntegratorConfig, ModelParams

UNITS_NOTE = (
    "gamma = 1; times in 1/gamma; energy and ergotropy in units of omega0 "
    "(ergotropy = omega0*(2p-1)*Theta(p-1/2)); power in units of omega0*gamma"
)

@dataclass(frozen=True)
class ChannelRoots:
    """Roots of one channel's characteristic polynomial."""

    s1: complex
    s2: complex
    degenerate: bool


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Charger and battery amplitudes on a time grid (rotating frame)."""

    t_grid: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    dc2_dt: np.ndarray

    @property
    def population(self) -> np.ndarray:
        """Battery excitation probability |c2|^2."""
        return np.abs(self.c2) ** 2

    @property
    def charger_population(self) -> np.ndarray:
        return np.abs(self.c1) ** 2

    @property
    def bath_population(self) -> np.ndarray:
        return 1.0 - self.charger_population - self.population


@dataclass(frozen=True)
class ObservableSeries:
    """Battery figures of merit along a trajectory."""

    t_grid: np.ndarray
    population: np.ndarray
    energy: np.ndarray
    ergotropy: np.ndarray
    power: np.ndarray
    average_power: np.ndarray


@dataclass(frozen=True)
class SpectralPair:
    """Sorted state and Hamiltonian spectra.

    ``assignment[j]`` is the index of the energy level on which the state
    eigenvalue ``state_eigenvalues[j]`` sits. ``None`` means the identity, i.e.
    the state is already passive.
    """

    state_eigenvalues: np.ndarray
    energy_eigenvalues: np.ndarray
    assignment: Optional[Tuple[int, ...]] = None


class RunManifest(BaseModel):
    """Provenance record written next to every output file."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "artifact": "qbgeom",
                "version": "0.1.0",
                "created_at": "2026-01-15T10:30:00+00:00",
                "command": "simulate",
                "invocation": ["simulate", "--l-over-lambda0", "0.25"],
                "solver": "analytic",
                "params": {"omega0": 100.0, "zeta": 1.0, "lambda": 0.04},
            }
        },
    )

    artifact: str = Field(default="qbgeom")
    version: str = Field(default=__version__)
    created_at: datetime = Field(default_factory=utc_now)
    command: str = Field(..., description="Subcommand or library entry point")
    invocation: List[str] = Field(
        default_factory=list,
        description="Arguments that reproduce the output when passed to the CLI",
    )
    solver: Literal["analytic", "numeric"] = Field(default="analytic")
    integrator: Optional[IntegratorConfig] = Field(default=None)
    params: ModelParams
    initial_c1: Tuple[float, float] = Field(default=(1.0, 0.0))
    initial_c2: Tuple[float, float] = Field(default=(0.0, 0.0))
    observable: Optional[str] = Field(default=None)
    row_axis: Optional[GridSpec] = Field(default=None)
    col_axis: Optional[GridSpec] = Field(default=None)
    horizon_factor: Optional[float] = Field(default=None)
    workers: Optional[int] = Field(default=None)
    seed: Optional[int] = Field(default=None)
    figure: Optional[str] = Field(default=None)
    units: str = Field(default=UNITS_NOTE)


@dataclass(frozen=True)
class SweepResult:
    """A labelled matrix of one observable over a parameter grid."""

    observable: str
    values: np.ndarray
    manifest: RunManifest
    row_axis: Optional[GridSpec] = None
    col_axis: Optional[GridSpec] = None

    def row_values(self) -> np.ndarray:
        if self.row_axis is None:
            return np.empty(0)
        return self.row_axis.values()

    def col_values(self) -> np.ndarray:
        if self.col_axis is None:
            return np.empty(0)
        return self.col_axis.values()


class PropertyOutcome(BaseModel):
    """Outcome of one invariant checked by the validation suite."""

    name: str
    passed: bool
    gating: bool = True
    measured: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ""


class ValidationReport(BaseModel):
    """Full output of the validation suite."""

    seed: int
    ensemble_size: int
    fault: Optional[str] = None
    outcomes: List[PropertyOutcome] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes if o.gating)
