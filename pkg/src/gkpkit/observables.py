"""Normalisation constants, inner products and photon-number statistics.

Closed forms are products of one-dimensional theta constants at the two
modular parameters

``t1 = 2 i Gamma^2 sigma_p2 / (pi Lambda)`` and
``t2 = 2 pi i sigma_q2 Lambda / Gamma^2``,

with genus-2 alternatives at the period matrix
``[[i sigma_p2 Gamma^2 / (2 pi Lambda), -1/2], [-1/2, t2]]``.  Every
quantity also has an oracle route (quadrature or Fock-basis sums) so the
closed forms can be checked inside the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .params import StandardParams
from .theta import (DEFAULT_CONTROL, RiemannThetaArgs, SeriesControl, riemann_theta2,
                    riemann_theta2_dtau, theta_values)

__all__ = [
    "PHOTON_ROUTES",
    "RouteDisagreementError",
    "PhotonBreakdown",
    "normalization",
    "inner_product",
    "avg_photon",
    "asymptotic_normalization",
    "asymptotic_overlap",
    "riemann_variants",
    "riemann_period_matrix",
    "photon_estimate",
]

PHOTON_ROUTES = ("theta_formula", "moment_integral", "fock_sum", "riemann_theta")


class RouteDisagreementError(ArithmeticError):
    """Raised when independent evaluation routes disagree beyond tolerance."""


@dataclass(frozen=True)
class PhotonBreakdown:
    """Average photon number with the second moments it is built from.

    ``q2_moment + p2_moment == 2 * n_avg + 1`` holds by construction.
    """

    n_avg: float
    q2_moment: float
    p2_moment: float
    route: str


def _theta_params(p: StandardParams) -> Tuple[complex, complex]:
    G2 = p.gamma_spacing ** 2
    t1 = 2j * G2 * p.sigma_p2 / (math.pi * p.Lambda)
    t2 = 2j * math.pi * p.sigma_q2 * p.Lambda / G2
    return t1, t2


def _theta_const(a: float, b: float, tau: complex, ctrl: SeriesControl) -> float:
    # Theta constants at purely imaginary tau with one zero characteristic
    # are real; the imaginary part is rounding noise.
    return float(theta_values(a, b, np.zeros(1), tau, ctrl)[0].real)


def _index(p: StandardParams, j: Optional[int]) -> int:
    j = p.label.j if j is None else int(j)
    if not 0 <= j < p.label.d:
        raise ValueError(f"logical index must lie in [0, {p.label.d - 1}], got {j}")
    return j


def normalization(p: StandardParams, ctrl: Optional[SeriesControl] = None,
                  j: Optional[int] = None) -> float:
    """Normalisation constant ``N_j`` of the standard-form codeword.

    ``N_j = th[j/d; 0](t1) th[0; 0](t2) + th[j/d + 1/2; 0](t1) th[0; 1/2](t2)``.

    Examples
    --------
    >>> from gkpkit.params import SymmetricParams, CodeLabel
    >>> p = SymmetricParams(0.01, CodeLabel(2, 0)).to_standard()
    >>> round(normalization(p), 9)
    50.0
    """
    ctrl = ctrl or DEFAULT_CONTROL
    j = _index(p, j)
    t1, t2 = _theta_params(p)
    a = j / p.label.d
    return (_theta_const(a, 0.0, t1, ctrl) * _theta_const(0.0, 0.0, t2, ctrl)
            + _theta_const(a + 0.5, 0.0, t1, ctrl) * _theta_const(0.0, 0.5, t2, ctrl))


def inner_product(p: StandardParams, j: int, j_prime: int,
                  ctrl: Optional[SeriesControl] = None) -> complex:
    """Overlap ``<j'|j>`` of two codewords of the same code.

    With ``A = (j + j')/2d`` and ``B = (j - j')/2d``::

        <j'|j> = [th[A;0](t1) th[0;B](t2) + th[A+1/2;0](t1) th[0;B+1/2](t2)]
                 / sqrt(N_j N_j')
    """
    ctrl = ctrl or DEFAULT_CONTROL
    j = _index(p, j)
    jp = _index(p, j_prime)
    if j == jp:
        return complex(1.0)
    d = p.label.d
    t1, t2 = _theta_params(p)
    A = (j + jp) / (2.0 * d)
    B = (j - jp) / (2.0 * d)
    num = (_theta_const(A, 0.0, t1, ctrl) * _theta_const(0.0, B, t2, ctrl)
           + _theta_const(A + 0.5, 0.0, t1, ctrl) * _theta_const(0.0, B + 0.5, t2, ctrl))
    return complex(num / math.sqrt(normalization(p, ctrl, j) * normalization(p, ctrl, jp)))


def asymptotic_normalization(sigma_q2: float, sigma_p2: float) -> float:
    """Small-variance limit ``1 / sqrt(4 sigma_q2 sigma_p2)`` of ``N_j``."""
    return 1.0 / math.sqrt(4.0 * sigma_q2 * sigma_p2)


def asymptotic_overlap(p: StandardParams, j: int, j_prime: int) -> float:
    """Leading small-variance overlap ``exp(-(j'-j)^2 Gamma^2 / (8 d^2 sigma_q2))``.

    Valid when ``|j - j'| / 2d`` is well below ``1/2``.  Near that boundary
    (for instance ``d = 2`` with ``|j - j'| = 1``) two theta terms are of
    equal size and the true overlap is about twice this value.
    """
    d = p.label.d
    return math.exp(-((j_prime - j) ** 2) * p.gamma_spacing ** 2 / (8.0 * d * d * p.sigma_q2))


def photon_estimate(sigma2: float) -> float:
    """Large-squeezing estimate ``1/(4 sigma2) - 1/2`` of the photon number."""
    return 1.0 / (4.0 * sigma2) - 0.5


def _photon_theta(p: StandardParams, ctrl: SeriesControl) -> PhotonBreakdown:
    # N~(x, y) with tau_1 = i Gamma^2 x / 2 pi and tau_2 = pi i Lambda^2 y / (2 Gamma^2),
    # differentiated analytically and evaluated at x = 4 sigma_p2/Lambda, y = 4 sigma_q2/Lambda.
    G2, Lam = p.gamma_spacing ** 2, p.Lambda
    t1, t2 = _theta_params(p)
    dt1_dx = 1j * G2 / (2.0 * math.pi)
    dt2_dy = 1j * math.pi * Lam * Lam / (2.0 * G2)
    a = p.label.j / p.label.d
    zero = np.zeros(1)

    def val_and_dtau(ca, cb, tau):
        v, _, dv = theta_values(ca, cb, zero, tau, ctrl, derivatives=True)
        return complex(v[0]), complex(dv[0])

    f1, df1 = val_and_dtau(a, 0.0, t1)
    g1, dg1 = val_and_dtau(0.0, 0.0, t2)
    f2, df2 = val_and_dtau(a + 0.5, 0.0, t1)
    g2, dg2 = val_and_dtau(0.0, 0.5, t2)
    n_tilde = f1 * g1 + f2 * g2
    dlog_dx = (df1 * g1 + df2 * g2) * dt1_dx / n_tilde
    dlog_dy = (f1 * dg1 + f2 * dg2) * dt2_dy / n_tilde
    q2 = p.sigma_q2 - 2.0 * dlog_dx.real
    p2 = p.sigma_p2 - 2.0 * dlog_dy.real
    return PhotonBreakdown((q2 + p2 - 1.0) / 2.0, q2, p2, "theta_formula")


def riemann_period_matrix(p: StandardParams) -> np.ndarray:
    """Genus-2 period matrix whose theta constants give ``N_j`` and overlaps."""
    G2, Lam = p.gamma_spacing ** 2, p.Lambda
    return np.array([[1j * p.sigma_p2 * G2 / (2.0 * math.pi * Lam), -0.5],
                     [-0.5, 2j * math.pi * p.sigma_q2 * Lam / G2]])


def _riemann_args(p: StandardParams, j: int, j_prime: int) -> RiemannThetaArgs:
    d = p.label.d
    tau = riemann_period_matrix(p)
    return RiemannThetaArgs(((j + j_prime) / d, 0.0), (0.0, j_prime / d), (0j, 0j),
                            tuple(map(tuple, tau)))


def _photon_riemann(p: StandardParams, ctrl: SeriesControl) -> PhotonBreakdown:
    j = p.label.j
    th, d11, d22 = riemann_theta2_dtau(_riemann_args(p, j, j), ctrl)
    G2, Lam = p.gamma_spacing ** 2, p.Lambda
    scale = 1j / (2.0 * math.pi)
    q2 = p.sigma_q2 - 2.0 * (scale * (G2 / 4.0) * d11 / th).real
    p2 = p.sigma_p2 - 2.0 * (scale * (math.pi ** 2 * Lam * Lam / G2) * d22 / th).real
    return PhotonBreakdown((q2 + p2 - 1.0) / 2.0, q2, p2, "riemann_theta")


def _photon_moments(p: StandardParams, ctrl: SeriesControl) -> PhotonBreakdown:
    from .quadrature import comb_line_integral
    from .states import momentum_amplitude, momentum_comb, position_amplitude, position_comb

    spec_q, nu_q = position_comb(p)
    spec_p, nu_p = momentum_comb(p)
    q2 = comb_line_integral(lambda x: x * x * position_amplitude(p, x, True, ctrl) ** 2,
                            spec_q, nu_q)
    p2 = comb_line_integral(lambda x: x * x * np.abs(momentum_amplitude(p, x, True, ctrl)) ** 2,
                            spec_p, nu_p)
    return PhotonBreakdown((q2 + p2 - 1.0) / 2.0, q2, p2, "moment_integral")


def _photon_fock(p: StandardParams, ctrl: SeriesControl, tail_tol: float = 1e-12,
                 n_cap: int = 8192) -> PhotonBreakdown:
    from .states import fock_coefficients

    # Start near the large-squeezing estimate and double until the last
    # quarter of the coefficients carries negligible photon weight.
    guess = 0.25 / math.sqrt(p.sigma_q2 * p.sigma_p2)
    n_max = max(64, int(8 * guess))
    while True:
        c = fock_coefficients(p, n_max, ctrl)
        w = np.abs(c) ** 2
        n = np.arange(n_max + 1)
        n_avg = float(np.sum(n * w))
        tail = float(np.sum((n * w)[3 * n_max // 4:]))
        if tail <= tail_tol * max(n_avg, 1.0) or n_max >= n_cap:
            break
        n_max = min(2 * n_max, n_cap)
    a2 = np.sum(np.conj(c[:-2]) * c[2:] * np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0)))
    q2 = n_avg + 0.5 + float(a2.real)
    p2 = n_avg + 0.5 - float(a2.real)
    return PhotonBreakdown(n_avg, q2, p2, "fock_sum")


def avg_photon(p: StandardParams, route: str = "theta_formula",
               ctrl: Optional[SeriesControl] = None) -> PhotonBreakdown:
    """Average photon number of the codeword ``p`` by the selected route.

    Parameters
    ----------
    p : StandardParams
    route : {"theta_formula", "moment_integral", "fock_sum", "riemann_theta"}
        ``theta_formula`` differentiates the theta-constant form of the
        normalisation analytically; ``moment_integral`` integrates ``q^2``
        and ``p^2`` against the position and momentum densities;
        ``fock_sum`` sums ``n |c_n|^2`` over Fock coefficients;
        ``riemann_theta`` differentiates the genus-2 form.
    ctrl : SeriesControl, optional
    """
    ctrl = ctrl or DEFAULT_CONTROL
    handlers = {"theta_formula": _photon_theta, "moment_integral": _photon_moments,
                "fock_sum": _photon_fock, "riemann_theta": _photon_riemann}
    if route not in handlers:
        raise ValueError(f"route must be one of {PHOTON_ROUTES}, got {route!r}")
    return handlers[route](p, ctrl)


def riemann_variants(p: StandardParams, j: int, j_prime: int,
                     ctrl: Optional[SeriesControl] = None) -> Tuple[float, complex, float]:
    """Genus-2 evaluations of ``N_j``, ``<j'|j>`` and the photon number of ``|j>``.

    Each value is an independent counterpart of :func:`normalization`,
    :func:`inner_product` and :func:`avg_photon` with ``route="theta_formula"``.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    j = _index(p, j)
    jp = _index(p, j_prime)
    norm_j = riemann_theta2(_riemann_args(p, j, j), ctrl).real
    norm_jp = riemann_theta2(_riemann_args(p, jp, jp), ctrl).real
    overlap = riemann_theta2(_riemann_args(p, j, jp), ctrl) / math.sqrt(norm_j * norm_jp)
    n_avg = _photon_riemann(p.with_index(j), ctrl).n_avg
    return float(norm_j), complex(overlap), float(n_avg)
