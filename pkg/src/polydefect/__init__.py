"""Exact lattice-polytope invariants: Ehrhart data, the face-lattice sum c(P)
and the codegree test for dual defect of smooth toric embeddings."""

from .lattice_algebra import ConsistencyError
from .polytope import LatticePolytope, cayley, cube, dilate, from_vertices, product, pyramid, simplex

__all__ = [
    "ConsistencyError",
    "LatticePolytope",
    "cayley",
    "cube",
    "dilate",
    "from_vertices",
    "product",
    "pyramid",
    "simplex",
]
__version__ = "0.1.0"
