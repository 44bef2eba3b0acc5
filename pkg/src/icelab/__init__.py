"""icelab: a numerical laboratory for six-vertex and dimer limit shapes.

Exact finite-size transfer matrices and enumeration oracles, surface
tensions with their Legendre machinery, a gradient-constrained variational
solver on the cylinder, and the commuting Hamiltonian / complex Burgers
flow with its conserved quantities.
"""

__version__ = "0.1.0"

from . import dimers, errors, flow, shapes, sixvertex, special, tension
from .errors import IceLabError

__all__ = ["dimers", "errors", "flow", "shapes", "sixvertex", "special",
           "tension", "IceLabError", "__version__"]
