"""
qbgeom: geometry-controlled charging of a two-qubit quantum battery coupled to
a common Lorentzian reservoir.
"""

__version__ = "0.1.0"
