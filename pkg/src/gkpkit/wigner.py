"""Wigner functions of outer products of standard-form codewords.

The Wigner function of an operator ``A`` is

``W_A(q, p) = (1/pi) int dx exp(2 i p x) <q - x| A |q + x>``.

For ``A = |j><j'|`` three closed forms are available:

``"comb"``
    a two-term sum of products of a position comb and a phased momentum
    comb, each convolved with a Gaussian; separable in ``q`` and ``p``.
``"theta"``
    the same with the momentum factor written as a theta function.
``"riemann"``
    a single genus-2 theta function times a two-dimensional Gaussian.

They are algebraically equal, so running more than one is a consistency
check on the implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .observables import RouteDisagreementError, normalization
from .params import StandardParams
from .states import CombSpec, comb_gauss
from .theta import DEFAULT_CONTROL, SeriesControl, riemann_theta2_log, theta_values

__all__ = [
    "WIGNER_ROUTES",
    "PhaseSpaceGrid",
    "WignerSample",
    "wigner_point",
    "wigner_grid",
    "wigner_samples",
    "wigner_riemann_matrix",
]

WIGNER_ROUTES = ("comb", "theta", "riemann")


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform rectangular grid in phase space, endpoints included."""

    q_min: float
    q_max: float
    p_min: float
    p_max: float
    nq: int
    np: int

    def __post_init__(self) -> None:
        if not (self.q_min < self.q_max and self.p_min < self.p_max):
            raise ValueError("grid bounds must satisfy q_min < q_max and p_min < p_max")
        if int(self.nq) != self.nq or int(self.np) != self.np or self.nq < 2 or self.np < 2:
            raise ValueError("grid sample counts nq and np must be integers >= 2")

    @property
    def q_values(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, int(self.nq))

    @property
    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, int(self.np))


@dataclass(frozen=True)
class WignerSample:
    """One evaluated phase-space point."""

    q: float
    p: float
    value: complex


def _characteristics(p: StandardParams, j: int, j_prime: int) -> Tuple[float, float]:
    d = p.label.d
    for name, idx in (("j", j), ("j_prime", j_prime)):
        if int(idx) != idx or not 0 <= idx < d:
            raise ValueError(f"{name} must be an integer in [0, {d - 1}], got {idx!r}")
    return (j + j_prime) / (2.0 * d), (j - j_prime) / (2.0 * d)


def _norm_factor(p: StandardParams, j: int, j_prime: int, ctrl: SeriesControl) -> float:
    return math.sqrt(normalization(p, ctrl, j) * normalization(p, ctrl, j_prime))


def _position_factors(p: StandardParams, A: float, q: np.ndarray, ctrl: SeriesControl,
                      comb_route: str):
    mu = p.Lambda / (4.0 * p.sigma_p2)
    return [np.real(comb_gauss(CombSpec(mu, p.gamma_spacing, A + k / 2.0, "plain"),
                               p.sigma_q2, q, ctrl, comb_route)) for k in (0, 1)]


def _momentum_factors(p: StandardParams, B: float, mom: np.ndarray, ctrl: SeriesControl):
    mu = p.Lambda / (4.0 * p.sigma_q2)
    period = math.pi * p.Lambda / p.gamma_spacing
    return [comb_gauss(CombSpec(mu, period, B + k / 2.0, "phased"), p.sigma_p2, mom, ctrl, "direct")
            for k in (0, 1)]


def _momentum_factors_theta(p: StandardParams, B: float, mom: np.ndarray, ctrl: SeriesControl):
    # Theta form of the phased momentum comb, with its Gaussian kept explicit:
    # Gamma/(pi sqrt(Lambda)) * exp(-2 sigma_q2 p^2) * theta[B + k/2; 0](-Gamma p / pi, t1).
    G = p.gamma_spacing
    t1 = 2j * G * G * p.sigma_p2 / (math.pi * p.Lambda)
    envelope = G / (math.pi * math.sqrt(p.Lambda)) * np.exp(-2.0 * p.sigma_q2 * mom * mom)
    return [envelope * theta_values(B + k / 2.0, 0.0, -G * mom / math.pi, t1, ctrl) for k in (0, 1)]


def wigner_riemann_matrix(p: StandardParams) -> np.ndarray:
    """Period matrix of the genus-2 form of the Wigner function."""
    D = np.diag([p.gamma_spacing / 2.0, math.pi * p.Lambda / p.gamma_spacing])
    inv_mu = np.array([[4.0 * p.sigma_p2, 2j], [2j, 4.0 * p.sigma_q2]]) / p.Lambda
    inv_nu = np.diag([1.0 / p.sigma_q2, 1.0 / p.sigma_p2])
    tau = (1j / (2.0 * math.pi)) * D @ (inv_mu + inv_nu) @ D
    return 0.5 * (tau + tau.T)


def _wigner_riemann(p: StandardParams, j: int, j_prime: int, q: np.ndarray, mom: np.ndarray,
                    ctrl: SeriesControl) -> np.ndarray:
    d = p.label.d
    tau = wigner_riemann_matrix(p)
    D1, D2 = p.gamma_spacing / 2.0, math.pi * p.Lambda / p.gamma_spacing
    z1 = -(1j / (2.0 * math.pi)) * D1 * q / p.sigma_q2
    z2 = -(1j / (2.0 * math.pi)) * D2 * mom / p.sigma_p2
    log_scale, value = riemann_theta2_log(((j + j_prime) / d, 0.0), (0.0, j_prime / d),
                                          z1, z2, tau, ctrl)
    gauss = -q * q / (2.0 * p.sigma_q2) - mom * mom / (2.0 * p.sigma_p2)
    pref = 1.0 / (2.0 * math.pi * math.sqrt(p.sigma_q2 * p.sigma_p2))
    return pref * np.exp(log_scale + gauss) * value / _norm_factor(p, j, j_prime, ctrl)


def _wigner_separable(p, j, j_prime, q, mom, ctrl, route, outer: bool):
    A, B = _characteristics(p, j, j_prime)
    # The comb route sums spikes directly; the theta route uses closed forms
    # for both factors, so the two share no series code.
    fq = _position_factors(p, A, q, ctrl, "direct" if route == "comb" else "theta")
    if route == "comb":
        fp = _momentum_factors(p, B, mom, ctrl)
    else:
        fp = _momentum_factors_theta(p, B, mom, ctrl)
    scale = _norm_factor(p, j, j_prime, ctrl)
    if outer:
        return (np.multiply.outer(fq[0], fp[0]) + np.multiply.outer(fq[1], fp[1])) / scale
    return (fq[0] * fp[0] + fq[1] * fp[1]) / scale


def wigner_point(p: StandardParams, j: int, j_prime: int, q, mom,
                 ctrl: Optional[SeriesControl] = None, route: str = "comb",
                 agreement_tol: float = 1e-11):
    """Wigner function of ``|j><j'|`` at phase-space points.

    Parameters
    ----------
    p : StandardParams
        Code parameters; ``p.label.j`` is ignored in favour of ``j``.
    j, j_prime : int
        Logical indices of the ket and the bra.
    q, mom : float or array_like
        Position and momentum; broadcast against each other.
    ctrl : SeriesControl, optional
    route : {"comb", "theta", "riemann", "check"}
        ``"check"`` evaluates all three routes and raises
        :class:`RouteDisagreementError` if any pair differs by more than
        ``10 * agreement_tol`` times ``max(1, |W|)``; it returns the comb
        value otherwise.

    Returns
    -------
    complex or ndarray of complex
        Real up to rounding when ``j == j_prime``.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    q_arr, p_arr = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(mom, dtype=float))
    scalar = q_arr.ndim == 0
    qf, pf = q_arr.ravel(), p_arr.ravel()
    if route in ("comb", "theta"):
        out = _wigner_separable(p, j, j_prime, qf, pf, ctrl, route, outer=False)
    elif route == "riemann":
        _characteristics(p, j, j_prime)
        out = _wigner_riemann(p, j, j_prime, qf, pf, ctrl)
    elif route == "check":
        values = [wigner_point(p, j, j_prime, qf, pf, ctrl, r) for r in WIGNER_ROUTES]
        ref = values[0]
        scale = np.maximum(1.0, np.abs(ref))
        worst = max(float(np.max(np.abs(v - ref) / scale)) for v in values[1:])
        if worst > 10.0 * agreement_tol:
            raise RouteDisagreementError(
                f"Wigner routes disagree: residual {worst:.3e} > {10.0 * agreement_tol:.1e}")
        out = ref
    else:
        raise ValueError(f"route must be one of {WIGNER_ROUTES + ('check',)}, got {route!r}")
    out = np.asarray(out).reshape(q_arr.shape)
    return complex(out) if scalar else out


def wigner_grid(p: StandardParams, j: int, j_prime: int, grid: PhaseSpaceGrid,
                ctrl: Optional[SeriesControl] = None, route: str = "comb") -> np.ndarray:
    """Wigner function on a rectangular grid.

    Returns
    -------
    ndarray of complex, shape (grid.nq, grid.np)
        Row ``k`` holds ``q = grid.q_values[k]`` and all momenta in ascending
        order.  Values are point samples; no cell-area weights are applied.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    qv, pv = grid.q_values, grid.p_values
    if route in ("comb", "theta"):
        return _wigner_separable(p, j, j_prime, qv, pv, ctrl, route, outer=True)
    Q, P = np.meshgrid(qv, pv, indexing="ij")
    return wigner_point(p, j, j_prime, Q, P, ctrl, route)


def wigner_samples(p: StandardParams, j: int, j_prime: int, grid: PhaseSpaceGrid,
                   ctrl: Optional[SeriesControl] = None, route: str = "comb"):
    """Row-major list of :class:`WignerSample` over ``grid``."""
    values = wigner_grid(p, j, j_prime, grid, ctrl, route)
    qv, pv = grid.q_values, grid.p_values
    return [[WignerSample(float(qv[a]), float(pv[b]), complex(values[a, b]))
             for b in range(len(pv))] for a in range(len(qv))]
