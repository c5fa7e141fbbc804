"""
Models for qbgeom.
"""

from .params import (
    ModelParams,
    ChannelSpec,
    IntegratorConfig,
    GridSpec,
)
from .results import (
    ChannelRoots,
    AmplitudeTrajectory,
    ObservableSeries,
    SpectralPair,
    RunManifest,
    SweepResult,
    PropertyOutcome,
    ValidationReport,
    UNITS_NOTE,
)

__all__ = [
    "ModelParams",
    "ChannelSpec",
    "IntegratorConfig",
    "GridSpec",
    "ChannelRoots",
    "AmplitudeTrajectory",
    "ObservableSeries",
    "SpectralPair",
    "RunManifest",
    "SweepResult",
    "PropertyOutcome",
    "ValidationReport",
    "UNITS_NOTE",
]
