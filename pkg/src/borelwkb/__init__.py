"""borelwkb: Stokes geometry and Borel-plane machinery for complex WKB.

Builds Stokes graphs for polynomial potentials, models the Borel-plane
fibers with their singularities, cuts and flaps, plans certified
integration paths, iterates the Volterra-type operators of the von
Neumann series, and Laplace-resums the result against direct ODE
oracles.
"""

from .potential import Potential, TurningPoint, find_turning_points
from .branch import ActionBranch, LiftedPoint

__all__ = [
    "Potential",
    "TurningPoint",
    "find_turning_points",
    "ActionBranch",
    "LiftedPoint",
]

__version__ = "0.1.0"
