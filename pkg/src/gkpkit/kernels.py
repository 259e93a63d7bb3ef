"""Backend selection for the lattice-sum kernels.

The compiled extension is used when it imports cleanly.  Setting the
environment variable ``GKPKIT_PURE_PYTHON=1`` forces the numpy fallback,
which is also used automatically when the extension was not built.

Attributes
----------
BACKEND : str
    ``"compiled"`` or ``"python"``.
"""

from __future__ import annotations

import os

from . import _fallback

_force_python = os.environ.get("GKPKIT_PURE_PYTHON", "").strip() not in ("", "0")

if _force_python:
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

theta_window = _impl.theta_window
poisson_window = _impl.poisson_window
riemann_window = _impl.riemann_window
gauss_comb = _impl.gauss_comb

__all__ = ["BACKEND", "theta_window", "poisson_window", "riemann_window", "gauss_comb"]
