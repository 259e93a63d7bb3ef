"""Wave functions of standard-form code states in several representations.

All representations are built from Gaussian-weighted Dirac combs convolved
with a Gaussian,

.. math::

    (E_{\\mu,\\Gamma,a} * G_\\nu)(x) = \\sum_s e^{-(s+a)^2\\Gamma^2/2\\mu}
        G_\\nu(x - (s+a)\\Gamma),

    (\\tilde E_{\\mu,\\Gamma,a} * G_\\nu)(x) = \\sum_s e^{2\\pi i a s}
        e^{-s^2\\Gamma^2/2\\mu} G_\\nu(x + s\\Gamma),

with ``G_v(x) = exp(-x^2/2v) / sqrt(2 pi v)``.  Each can be evaluated either
by a direct truncated sum or through a closed form in theta functions; both
routes are exposed so that each one checks the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import kernels
from .params import (Approx1Params, Approx2Params, Approx3Params, StandardParams,
                     standard_from_approx1, standard_from_approx2, standard_from_approx3)
from .theta import DEFAULT_CONTROL, SeriesControl, theta_values

__all__ = [
    "CombSpec",
    "AmplitudeSample",
    "gaussian_density",
    "comb_gauss",
    "position_comb",
    "momentum_comb",
    "position_amplitude",
    "momentum_amplitude",
    "approximation_comb",
    "approximation_amplitude",
    "grid_amplitude",
    "hermite_function_sums",
    "fock_coefficients",
    "fock_reconstruct",
]

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class CombSpec:
    """Gaussian-weighted Dirac comb.

    Parameters
    ----------
    mu : float
        Variance of the Gaussian weight envelope.
    period : float
        Spacing of the comb.
    shift : float
        Characteristic offset ``a``; spikes sit at ``(s + a) * period`` for the
        plain comb and carry phases ``exp(2 pi i a s)`` for the phased comb.
    phase_mode : {"plain", "phased"}
    """

    mu: float
    period: float
    shift: float = 0.0
    phase_mode: str = "plain"

    def __post_init__(self) -> None:
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ValueError(f"comb envelope variance must be positive, got {self.mu!r}")
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ValueError(f"comb period must be positive, got {self.period!r}")
        if self.phase_mode not in ("plain", "phased"):
            raise ValueError(f"phase_mode must be 'plain' or 'phased', got {self.phase_mode!r}")

    def scaled(self, factor: float) -> "CombSpec":
        """Comb describing ``x -> factor * x`` (envelope and period shrink)."""
        return CombSpec(self.mu / factor ** 2, self.period / factor, self.shift, self.phase_mode)


@dataclass(frozen=True)
class AmplitudeSample:
    """One evaluated wave-function point."""

    x: float
    value: complex


def gaussian_density(x: ArrayLike, var: float) -> ArrayLike:
    """Normal density with zero mean and variance ``var``."""
    return np.exp(-np.square(x) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _comb_theta(spec: CombSpec, nu: float, x: np.ndarray, ctrl: SeriesControl) -> np.ndarray:
    mu, period, a = spec.mu, spec.period, spec.shift
    stretch = 1.0 + nu / mu
    tau = 2j * math.pi * nu / (stretch * period ** 2)
    z = -x / (stretch * period)
    if spec.phase_mode == "plain":
        th = theta_values(0.0, a, z, tau, ctrl)
    else:
        th = theta_values(a, 0.0, z, tau, ctrl)
    return math.sqrt(2.0 * math.pi * mu) / period * gaussian_density(x, mu + nu) * th


def _comb_direct(spec: CombSpec, nu: float, x: np.ndarray, ctrl: SeriesControl) -> np.ndarray:
    mu, period, a = spec.mu, spec.period, spec.shift
    log_tol = -math.log(ctrl.tol)
    # Spikes whose envelope weight is below tol are dropped, except those
    # close enough to a requested point to matter at that point.
    env = math.sqrt(2.0 * mu * log_tol)
    reach = math.sqrt(2.0 * nu * log_tol)
    lo = -env
    hi = env
    if x.size:
        lo = min(lo, max(float(x.min()) - reach, -env - reach))
        hi = max(hi, min(float(x.max()) + reach, env + reach))
    if spec.phase_mode == "plain":
        s = np.arange(math.floor(lo / period - a) - 1, math.ceil(hi / period - a) + 2)
        centers = (s + a) * period
        weights = np.exp(-centers ** 2 / (2.0 * mu)).astype(complex)
    else:
        s = np.arange(math.floor(-hi / period) - 1, math.ceil(-lo / period) + 2)
        centers = -s * period
        weights = np.exp(2j * math.pi * a * s) * np.exp(-centers ** 2 / (2.0 * mu))
    if len(s) > 2 * ctrl.max_terms + 1:
        from .theta import ThetaConvergenceError
        raise ThetaConvergenceError(f"direct comb sum needs {len(s)} spikes (max_terms={ctrl.max_terms})")
    return kernels.gauss_comb(np.ascontiguousarray(centers, dtype=float),
                              np.ascontiguousarray(weights, dtype=complex), nu, x.ravel()).reshape(x.shape)


def comb_gauss(spec: CombSpec, nu: float, x: ArrayLike, ctrl: Optional[SeriesControl] = None,
               route: str = "theta"):
    """Gaussian convolution of a weighted Dirac comb.

    Parameters
    ----------
    spec : CombSpec
    nu : float
        Variance of the Gaussian each spike is convolved with.
    x : float or array_like
        Evaluation points.
    ctrl : SeriesControl, optional
    route : {"theta", "direct"}
        ``"theta"`` uses the closed form
        ``sqrt(2 pi mu)/Gamma * G_{mu+nu}(x) * theta(-x/((1+nu/mu) Gamma), tau)``
        with ``tau = 2 pi i nu / ((1+nu/mu) Gamma^2)`` and characteristics
        ``[0; a]`` (plain) or ``[a; 0]`` (phased).  ``"direct"`` sums the comb.

    Returns
    -------
    complex or ndarray of complex
        Real-valued (up to rounding) for plain combs.

    Examples
    --------
    >>> spec = CombSpec(mu=1.0, period=1.0, shift=0.0)
    >>> v1 = comb_gauss(spec, 0.1, 0.37)
    >>> v2 = comb_gauss(spec, 0.1, 0.37, route="direct")
    >>> abs(v1 - v2) < 1e-14
    True
    """
    if not (nu > 0 and math.isfinite(nu)):
        raise ValueError(f"nu must be positive, got {nu!r}")
    ctrl = ctrl or DEFAULT_CONTROL
    arr, scalar = _as_array(x)
    if route == "theta":
        out = _comb_theta(spec, nu, arr, ctrl)
    elif route == "direct":
        out = _comb_direct(spec, nu, arr, ctrl)
    else:
        raise ValueError(f"unknown route {route!r}")
    return complex(out) if scalar else out


def position_comb(p: StandardParams, j: Optional[int] = None) -> tuple:
    """Comb and spike variance of the standard-form position wave function."""
    j = p.label.j if j is None else j
    return (CombSpec(p.Lambda / (2.0 * p.sigma_p2), p.gamma_spacing, j / p.label.d, "plain"),
            2.0 * p.sigma_q2)


def momentum_comb(p: StandardParams, j: Optional[int] = None) -> tuple:
    """Comb and spike variance of the standard-form momentum wave function."""
    j = p.label.j if j is None else j
    return (CombSpec(p.Lambda / (2.0 * p.sigma_q2), 2.0 * math.pi * p.Lambda / p.gamma_spacing,
                     j / p.label.d, "phased"),
            2.0 * p.sigma_p2)


def position_amplitude(p: StandardParams, q: ArrayLike, normalized: bool = True,
                       ctrl: Optional[SeriesControl] = None, route: str = "theta"):
    """Position wave function of the standard-form state ``p``.

    The bare amplitude is ``(E_{Lambda/2 sigma_p2, Gamma, j/d} * G_{2 sigma_q2})(q)``;
    the normalised one carries the extra factor
    ``sqrt(2 Gamma / (sqrt(Lambda) N_j))``.

    Returns
    -------
    float or ndarray of float
        The amplitude is real in this representation.
    """
    from .observables import normalization

    spec, nu = position_comb(p)
    val = comb_gauss(spec, nu, q, ctrl, route)
    val = np.real(val)
    if normalized:
        val = val * math.sqrt(2.0 * p.gamma_spacing / (math.sqrt(p.Lambda) * normalization(p, ctrl)))
    return float(val) if np.ndim(val) == 0 else val


def momentum_amplitude(p: StandardParams, mom: ArrayLike, normalized: bool = True,
                       ctrl: Optional[SeriesControl] = None, route: str = "theta"):
    """Momentum wave function of the standard-form state ``p``.

    Uses the phased comb ``E~_{Lambda/2 sigma_q2, 2 pi Lambda/Gamma, j/d}``
    convolved with ``G_{2 sigma_p2}`` and, when normalised, the factor
    ``sqrt(4 pi sqrt(Lambda) / (Gamma N_j))``.  The Fourier convention is
    ``psi(p) = (2 pi)^{-1/2} int exp(-i p q) psi(q) dq``.
    """
    from .observables import normalization

    spec, nu = momentum_comb(p)
    val = comb_gauss(spec, nu, mom, ctrl, route)
    if normalized:
        val = val * math.sqrt(4.0 * math.pi * math.sqrt(p.Lambda) / (p.gamma_spacing * normalization(p, ctrl)))
    return val


def approximation_comb(params) -> tuple:
    """Comb and spike variance of an approximation in its own parameters.

    Approximation 1 uses envelope ``1/kappa^2``, period ``alpha d`` and spike
    variance ``Delta^2``; Approximation 2 uses ``lambda r^2 / gamma^2``,
    ``alpha d r`` and ``delta^2 / lambda`` with the narrowing factor ``r``;
    Approximation 3 uses ``1 / (sinh beta cosh beta)``, ``alpha d / cosh beta``
    and ``tanh beta``.  The comb shift is always ``j / d``.
    """
    if isinstance(params, Approx1Params):
        d, j = params.label.d, params.label.j
        return CombSpec(1.0 / params.kappa ** 2, params.alpha * d, j / d), params.delta_sq_param ** 2
    if isinstance(params, Approx2Params):
        d, j = params.label.d, params.label.j
        r, lam = params.narrowing, params.lam
        return (CombSpec(lam * r * r / params.gamma ** 2, params.alpha * d * r, j / d),
                params.delta ** 2 / lam)
    if isinstance(params, Approx3Params):
        d, j = params.label.d, params.label.j
        b = params.beta
        return (CombSpec(1.0 / (math.sinh(b) * math.cosh(b)), params.alpha * d / math.cosh(b), j / d),
                math.tanh(b))
    raise TypeError(f"unsupported parametrisation {type(params).__name__}")


def approximation_amplitude(params, q: ArrayLike, squeeze: float = 1.0,
                            ctrl: Optional[SeriesControl] = None, route: str = "theta"):
    """Normalised position amplitude computed from an approximation's own comb.

    With ``squeeze != 1`` the squeezed wave function
    ``sqrt(squeeze) * psi(squeeze * q)`` is returned.  The normalisation
    constant comes from the equivalent standard form.
    """
    from .observables import normalization

    to_standard = {Approx1Params: standard_from_approx1, Approx2Params: standard_from_approx2,
                   Approx3Params: standard_from_approx3}[type(params)]
    std = to_standard(params)
    spec, nu = approximation_comb(params)
    prefactor = math.sqrt(2.0 * spec.period / (math.sqrt(std.Lambda) * normalization(std, ctrl)))
    arr, scalar = _as_array(q)
    val = np.real(comb_gauss(spec, nu, squeeze * arr, ctrl, route)) * prefactor * math.sqrt(squeeze)
    return float(val) if scalar else val


def _cell_length(p: StandardParams) -> float:
    return p.label.alpha_d * p.label.d


def grid_amplitude(p: StandardParams, u: ArrayLike, v: ArrayLike,
                   ctrl: Optional[SeriesControl] = None):
    """Grid (Zak) representation over the unit cell.

    ``phi(u, v) = sqrt(L) * sum_s exp(-2 pi i v (s + u/2)) * psi(L (u + s))``
    with ``L = alpha_d d``.  The sum is truncated where the position
    envelope ``exp(-sigma_p2 q^2)`` falls below ``ctrl.tol``.
    ``u`` and ``v`` broadcast against each other.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    u_arr = np.asarray(u, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    u_b, v_b = np.broadcast_arrays(u_arr, v_arr)
    L = _cell_length(p)
    q_cut = math.sqrt(-math.log(ctrl.tol) / p.sigma_p2) + 4.0 * math.sqrt(p.sigma_q2)
    u_lo = float(u_b.min()) if u_b.size else 0.0
    u_hi = float(u_b.max()) if u_b.size else 0.0
    s_vals = np.arange(math.floor(-q_cut / L - u_hi) - 1, math.ceil(q_cut / L - u_lo) + 2)
    # Evaluate psi once on every needed (u + s) and combine with the phases.
    qs = L * (u_b[..., None] + s_vals)
    psi = position_amplitude(p, qs, True, ctrl)
    phases = np.exp(-2j * math.pi * v_b[..., None] * (s_vals + u_b[..., None] / 2.0))
    out = math.sqrt(L) * np.sum(phases * psi, axis=-1)
    return complex(out) if out.ndim == 0 else out


def hermite_function_sums(q: np.ndarray, weights: np.ndarray, n_max: int) -> np.ndarray:
    """Weighted sums ``sum_k psi_n(q_k) weights_k`` for ``n = 0..n_max``.

    ``psi_n`` are the normalised harmonic-oscillator eigenfunctions, built by
    the three-term recurrence
    ``psi_{n+1} = sqrt(2/(n+1)) q psi_n - sqrt(n/(n+1)) psi_{n-1}``.  A
    per-point logarithmic scale keeps the recurrence finite where
    ``exp(-q^2/2)`` underflows.
    """
    q = np.asarray(q, dtype=float)
    w = np.asarray(weights)
    out = np.empty(n_max + 1, dtype=np.result_type(w, float))
    log_scale = -q * q / 2.0 - 0.25 * math.log(math.pi)
    prev = np.zeros_like(q)
    cur = np.ones_like(q)
    big = 1e150
    log_big = math.log(big)
    for n in range(n_max + 1):
        out[n] = np.sum(cur * np.exp(log_scale) * w)
        nxt = math.sqrt(2.0 / (n + 1)) * q * cur - math.sqrt(n / (n + 1.0)) * prev
        prev, cur = cur, nxt
        over = np.abs(cur) > big
        if over.any():
            cur[over] /= big
            prev[over] /= big
            log_scale[over] += log_big
    return out


def _fock_quadrature_grid(p: StandardParams, n_max: int, tol: float):
    eps = max(tol, 1e-300)
    log_eps = -math.log(eps)
    q_extent = math.sqrt(log_eps / p.sigma_p2) + 1.0
    k_extent = math.sqrt(log_eps / p.sigma_q2) + 1.0
    k_fock = math.sqrt(2.0 * n_max + 1.0) + 12.0
    # Trapezoid on a uniform grid is exact for band-limited integrands once
    # 2 pi / h exceeds the spectral width; use half that step for margin.
    h = math.pi / (k_extent + k_fock)
    n_half = int(math.ceil(q_extent / h))
    return h * np.arange(-n_half, n_half + 1), h


def fock_coefficients(p: StandardParams, n_max: int, ctrl: Optional[SeriesControl] = None) -> np.ndarray:
    """Overlaps ``c_n = <n|psi>`` with the Fock states for ``n = 0..n_max``.

    The overlaps are integrated with the trapezoid rule on a uniform grid
    whose step resolves both the state's momentum spectrum and the Hermite
    functions up to ``n_max``; for such rapidly decaying analytic integrands
    the rule converges geometrically.

    Returns
    -------
    ndarray of complex, shape (n_max + 1,)
    """
    if int(n_max) != n_max or n_max < 0:
        raise ValueError(f"n_max must be a non-negative integer, got {n_max!r}")
    ctrl = ctrl or DEFAULT_CONTROL
    q, h = _fock_quadrature_grid(p, int(n_max), ctrl.tol)
    psi = position_amplitude(p, q, True, ctrl)
    return hermite_function_sums(q, h * psi, int(n_max)).astype(complex)


def fock_reconstruct(coeffs: np.ndarray, q: ArrayLike) -> np.ndarray:
    """Evaluate ``sum_n c_n psi_n(q)`` at the points ``q``."""
    q_arr = np.atleast_1d(np.asarray(q, dtype=float))
    coeffs = np.asarray(coeffs)
    out = np.zeros(q_arr.shape, dtype=complex)
    log_scale = -q_arr * q_arr / 2.0 - 0.25 * math.log(math.pi)
    prev = np.zeros_like(q_arr)
    cur = np.ones_like(q_arr)
    big = 1e150
    for n, c in enumerate(coeffs):
        out += c * cur * np.exp(log_scale)
        nxt = math.sqrt(2.0 / (n + 1)) * q_arr * cur - math.sqrt(n / (n + 1.0)) * prev
        prev, cur = cur, nxt
        over = np.abs(cur) > big
        if over.any():
            cur[over] /= big
            prev[over] /= big
            log_scale[over] += math.log(big)
    return out if np.ndim(q) else out[0]
