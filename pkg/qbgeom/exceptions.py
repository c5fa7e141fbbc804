"""
Exception hierarchy and process exit codes for qbgeom.
"""

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class QBGeomError(Exception):
    """Base class for every error raised by qbgeom."""


class DomainError(QBGeomError, ValueError):
    """An input lies outside the domain of an operation."""


class StabilityError(DomainError):
    """The requested integrator step violates the stability bound."""


class OutputError(QBGeomError, OSError):
    """An output file could not be written."""
