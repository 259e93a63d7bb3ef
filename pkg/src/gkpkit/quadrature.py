"""Adaptive quadrature used by the oracle routes.

Integrands here are vectorised, so all pending segments are evaluated in one
call.  Each segment is integrated with Gauss-Legendre rules of order ``n`` and
``2n``; their difference is the error estimate, and segments that miss their
share of the tolerance are bisected.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .states import CombSpec

__all__ = ["QuadratureError", "adaptive_integrate", "comb_breakpoints", "comb_line_integral"]


class QuadratureError(ArithmeticError):
    """Raised when the adaptive rule cannot meet its tolerance."""


_RULES: dict = {}


def _rule(order: int):
    if order not in _RULES:
        _RULES[order] = np.polynomial.legendre.leggauss(order)
    return _RULES[order]


def adaptive_integrate(f: Callable[[np.ndarray], np.ndarray], edges: Sequence[float],
                       rtol: float = 1e-13, atol: float = 0.0, order: int = 24,
                       max_rounds: int = 40) -> float:
    """Integrate a vectorised real or complex function over ``[edges[0], edges[-1]]``.

    Parameters
    ----------
    f : callable
        Maps an array of abscissae to an array of values.
    edges : sequence of float
        Initial segment boundaries, ascending.  Put them where the integrand
        changes character (peaks, kinks) for best efficiency.
    rtol, atol : float
        Accept when the summed error estimate is below
        ``max(atol, rtol * |integral|)``.
    order : int
        Order of the lower Gauss-Legendre rule.

    Returns
    -------
    float or complex
    """
    x_lo, w_lo = _rule(order)
    x_hi, w_hi = _rule(2 * order)
    edges = np.asarray(edges, dtype=float)
    pending = list(zip(edges[:-1], edges[1:]))
    accepted = []
    total_len = float(edges[-1] - edges[0])
    for _ in range(max_rounds):
        if not pending:
            break
        a = np.array([s[0] for s in pending])
        b = np.array([s[1] for s in pending])
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        pts = np.concatenate([(mid[:, None] + half[:, None] * x_lo).ravel(),
                              (mid[:, None] + half[:, None] * x_hi).ravel()])
        vals = np.asarray(f(pts))
        k = len(pending)
        v_lo = vals[:k * order].reshape(k, order)
        v_hi = vals[k * order:].reshape(k, 2 * order)
        i_lo = half * (v_lo @ w_lo)
        i_hi = half * (v_hi @ w_hi)
        err = np.abs(i_hi - i_lo)
        # Rounding floor: a segment is converged once the rule difference is
        # at the level of double-precision noise in its own absolute integral.
        noise = 64.0 * np.finfo(float).eps * (half * (np.abs(v_hi) @ w_hi))
        estimate = abs(sum(v for _, v in accepted) + np.sum(i_hi))
        budget = max(atol, rtol * estimate)
        share = budget * (b - a) / total_len
        ok = err <= np.maximum(share, noise)
        accepted.extend(zip(err[ok], i_hi[ok]))
        pending = []
        for lo, m, hi in zip(a[~ok], mid[~ok], b[~ok]):
            pending.extend([(lo, m), (m, hi)])
    if pending:
        raise QuadratureError(f"{len(pending)} segments did not converge")
    values = [v for _, v in accepted]
    if np.iscomplexobj(values):
        return complex(math.fsum(np.real(values)), math.fsum(np.imag(values)))
    return math.fsum(values)


def comb_breakpoints(spec: CombSpec, nu: float, decay_tol: float = 1e-22) -> np.ndarray:
    """Segment edges covering the support of ``|E * G_nu|^2`` times ``x^2``.

    One edge sits midway between consecutive spikes, and the outer edges are
    placed where the squared envelope times ``x^2`` falls below
    ``decay_tol``.
    """
    width = spec.mu + nu
    cut = math.sqrt(width * (-math.log(decay_tol) + math.log(1.0 + 4.0 * width)))
    cut += 4.0 * math.sqrt(nu)
    offset = spec.shift * spec.period if spec.phase_mode == "plain" else 0.0
    s_lo = math.floor((-cut - offset) / spec.period)
    s_hi = math.ceil((cut - offset) / spec.period)
    mids = (np.arange(s_lo, s_hi + 1) + 0.5) * spec.period + offset
    return np.concatenate([[-cut], mids[(mids > -cut) & (mids < cut)], [cut]])


def comb_line_integral(f: Callable[[np.ndarray], np.ndarray], spec: CombSpec, nu: float,
                       rtol: float = 1e-13) -> float:
    """Integrate ``f`` over the real line using the comb's spike layout."""
    return adaptive_integrate(f, comb_breakpoints(spec, nu), rtol=rtol)
