"""Ground-state energetics of dilute 1D quantum gases."""

from .potentials import Potential, make_hard_core, make_lieb_liniger, make_square_barrier
from .scattering import Channel, solve_scattering

__version__ = "0.1.0"

__all__ = [
    "Potential",
    "make_hard_core",
    "make_lieb_liniger",
    "make_square_barrier",
    "Channel",
    "solve_scattering",
    "__version__",
]
