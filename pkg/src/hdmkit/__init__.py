"""Half-density-matrix calculus for Hermitian maps on finite quantum systems.

Any matrix T with rho = T T† is a half density matrix of rho and, flattened,
a bipartite pure state.  On top of that correspondence the package provides
Choi matrices for Hermitian maps, their signed Kraus representations,
positive-map classification by product-state minimization, and entanglement
detection, including the bound entanglement package built from unextendible
product bases.
"""

from ._backend import KERNEL_BACKEND
from . import catalog, chmap, hdm, linalg, matio, positivity, rand, teleport

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "catalog",
    "chmap",
    "hdm",
    "linalg",
    "matio",
    "positivity",
    "rand",
    "teleport",
]
