"""Numerics for finite-energy qudit Gottesman-Kitaev-Preskill codes.

Subpackages are organised bottom-up: :mod:`gkpkit.theta` evaluates theta
functions, :mod:`gkpkit.params` converts between code parametrisations,
:mod:`gkpkit.states` builds wave functions, :mod:`gkpkit.wigner` and
:mod:`gkpkit.observables` compute phase-space and scalar quantities, and
:mod:`gkpkit.cli` exposes everything on the command line.
"""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
