"""Jacobi theta functions with rational characteristics.

The one-dimensional function evaluated here is

.. math::

    \\vartheta[a; b](z, \\tau) = \\sum_{s \\in \\mathbb{Z}}
        \\exp\\left(\\pi i \\tau (s + a)^2 + 2 \\pi i (z + b)(s + a)\\right)

for ``Im(tau) > 0``, together with its genus-2 analogue.  Before summing,
the modular parameter is moved into the region ``|Re tau| <= 1/2``,
``|tau| >= 1`` by integer shifts and the inversion ``tau -> -1/tau``, and the
characteristics are reduced to ``[-1/2, 1/2)``.  The remaining series is
summed over a window centred on its largest term.  Scale factors are carried
as complex logarithms, so very large cancelling exponentials never
materialise.

Accuracy contract: the discarded tail is below ``tol`` times the magnitude of
the largest retained term.  Whenever the largest term dominates the sum (the
usual case) this is a relative error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import kernels

__all__ = [
    "ThetaDomainError",
    "ThetaConvergenceError",
    "SeriesControl",
    "ThetaArgs",
    "RiemannThetaArgs",
    "series_radius",
    "jacobi_transform",
    "theta_char",
    "theta_char_dtau",
    "theta_values",
    "riemann_theta2",
    "riemann_theta2_log",
    "riemann_theta2_dtau",
]

_TWO_PI_I = 2j * math.pi
_PI_I = 1j * math.pi
_MAX_REDUCTIONS = 64


class ThetaDomainError(ValueError):
    """Raised when the modular parameter is outside the upper half plane."""


class ThetaConvergenceError(ArithmeticError):
    """Raised when a series window would exceed the allowed number of terms."""


@dataclass(frozen=True)
class SeriesControl:
    """Truncation controls shared by every series evaluation.

    Parameters
    ----------
    tol : float
        Target size of the discarded tail relative to the largest term.
    max_terms : int
        Largest allowed one-sided window length.  Evaluations that need more
        raise :class:`ThetaConvergenceError`.
    """

    tol: float = 1e-16
    max_terms: int = 2000

    def __post_init__(self) -> None:
        if not (0.0 < self.tol < 1.0):
            raise ValueError(f"tol must lie in (0, 1), got {self.tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"max_terms must be a positive integer, got {self.max_terms!r}")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class ThetaArgs:
    """Arguments of a one-dimensional theta function with characteristics.

    Parameters
    ----------
    a, b : float
        Characteristics.  Any real values are accepted.
    z : complex
        Argument.
    tau : complex
        Modular parameter with strictly positive imaginary part.
    """

    a: float
    b: float
    z: complex
    tau: complex

    def __post_init__(self) -> None:
        _check_tau(complex(self.tau))


@dataclass(frozen=True)
class RiemannThetaArgs:
    """Arguments of a genus-2 theta function with characteristics.

    Parameters
    ----------
    a, b : tuple of float
        Characteristic vectors.
    z : tuple of complex
        Argument vector.
    tau : tuple of tuple of complex
        Symmetric 2x2 period matrix whose imaginary part is positive definite.
    """

    a: Tuple[float, float]
    b: Tuple[float, float]
    z: Tuple[complex, complex]
    tau: Tuple[Tuple[complex, complex], Tuple[complex, complex]]

    def __post_init__(self) -> None:
        t = np.asarray(self.tau, dtype=complex)
        if t.shape != (2, 2):
            raise ThetaDomainError("period matrix must be 2x2")
        if abs(t[0, 1] - t[1, 0]) > 1e-12 * (1.0 + abs(t[0, 1])):
            raise ThetaDomainError("period matrix must be symmetric")
        im = t.imag
        if not (im[0, 0] > 0 and np.linalg.det(im) > 0):
            raise ThetaDomainError("imaginary part of the period matrix must be positive definite")


def _check_tau(tau: complex) -> None:
    if not math.isfinite(tau.real) or not math.isfinite(tau.imag):
        raise ThetaDomainError(f"tau must be finite, got {tau!r}")
    if tau.imag <= 0.0:
        raise ThetaDomainError(f"tau must lie in the upper half plane, got {tau!r}")


def series_radius(im_tau: float, im_z: float, a: float, tol: float,
                  cap: int = 10**7) -> int:
    """Smallest window radius whose discarded tail is below ``tol``.

    The terms of the series have modulus ``f(x) = exp(-pi T x^2 - 2 pi Z x)``
    at ``x = s + a``.  The bound used is the geometric majorant
    ``f(x0) / (1 - rho(x0))`` on each side, where ``x0`` is the first
    discarded point and ``rho`` the ratio of consecutive terms there.

    Parameters
    ----------
    im_tau : float
        ``Im(tau)``, strictly positive.
    im_z : float
        ``Im(z)``; shifts the peak of the terms.
    a : float
        Characteristic offset.
    tol : float
        Tail target, in units of the unit-height term at ``x = 0``.
    cap : int, optional
        Returned unchanged if the bound cannot be met below it.

    Returns
    -------
    int
        Radius ``S >= 1`` such that the terms with ``|s| > S`` are negligible.

    Examples
    --------
    >>> series_radius(1.0, 0.0, 0.0, 1e-16)
    3
    >>> series_radius(100.0, 0.0, 0.0, 1e-16)
    1
    """
    if im_tau <= 0:
        raise ThetaDomainError("im_tau must be positive")
    if not (0.0 < tol < 1.0):
        raise ValueError("tol must lie in (0, 1)")
    T, Z = float(im_tau), float(im_z)
    log_tol = math.log(tol)

    def side_log_bound(x0: float, sign: float) -> float:
        # Tail of exp(-pi T x^2 - 2 pi Z sign x) for x = x0, x0 + 1, ...
        log_f = -math.pi * T * x0 * x0 - 2.0 * math.pi * Z * sign * x0
        log_rho = -math.pi * T * (2.0 * x0 + 1.0) - 2.0 * math.pi * Z * sign
        if log_rho >= 0.0:
            return math.inf
        return log_f - math.log1p(-math.exp(log_rho))

    # Exponential search followed by bisection keeps this cheap for huge caps.
    def ok(S: int) -> bool:
        right = math.floor(S - a) + 1 + a
        left = math.floor(S + a) + 1 - a
        lr = side_log_bound(right, 1.0)
        ll = side_log_bound(left, -1.0)
        return np.logaddexp(lr, ll) <= log_tol

    if ok(1):
        return 1
    hi = 2
    while not ok(hi):
        if hi >= cap:
            return cap
        hi = min(2 * hi, cap)
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def jacobi_transform(args: ThetaArgs) -> Tuple[ThetaArgs, complex]:
    """Apply the inversion ``tau -> -1/tau`` to a theta function.

    Returns transformed arguments and a prefactor such that
    ``theta(transformed) == prefactor * theta(args)``.  The transformed
    characteristics are ``(-b, a)``, the argument ``z/tau``, and the
    prefactor ``sqrt(-i tau) * exp(pi i z^2 / tau) * exp(-2 pi i a b)``
    using the principal square root.

    Examples
    --------
    >>> new, pref = jacobi_transform(ThetaArgs(0.0, 0.0, 0.0, 2j))
    >>> new.tau, round(abs(pref), 12)
    ((-0+0.5j), 1.414213562373)
    """
    tau = complex(args.tau)
    z = complex(args.z)
    new = ThetaArgs(-args.b, args.a, z / tau, -1.0 / tau)
    log_pref = 0.5 * np.log(-1j * tau) + _PI_I * z * z / tau - _TWO_PI_I * args.a * args.b
    return new, complex(np.exp(log_pref))


class _Scaled:
    """Theta values written as ``exp(log_scale) * value`` plus derivatives."""

    __slots__ = ("log_scale", "value", "d_z", "d_tau")

    def __init__(self, log_scale, value, d_z, d_tau):
        self.log_scale = log_scale
        self.value = value
        self.d_z = d_z
        self.d_tau = d_tau


def _base_sum(a: float, b: float, z: np.ndarray, tau: complex,
              ctrl: SeriesControl, derivatives: bool) -> _Scaled:
    T = tau.imag
    peak = -z.imag / T - a
    centers = np.rint(peak).astype(np.int64)
    tol = ctrl.tol
    radius = series_radius(T, 0.0, 0.5, tol)
    if derivatives:
        # The derivative terms carry (s + a)^2, so tighten the tail target.
        spread = float(np.max(np.abs(peak))) + radius + 2.0 if peak.size else radius + 2.0
        radius = series_radius(T, 0.0, 0.5, tol / (spread * spread))
    if radius > ctrl.max_terms:
        raise ThetaConvergenceError(
            f"theta series needs {radius} terms per side (max_terms={ctrl.max_terms}); "
            f"Im(tau)={T:.3g} after reduction")
    m, s0, s1, s2 = kernels.theta_window(a, b, z, tau, centers, radius)
    if derivatives:
        return _Scaled(m.astype(complex), s0, _TWO_PI_I * s1, _PI_I * s2)
    return _Scaled(m.astype(complex), s0, None, None)


def _poisson_sum(a: float, b: float, z: np.ndarray, tau: complex,
                 ctrl: SeriesControl, derivatives: bool) -> _Scaled:
    """Theta via its inverted form ``(-i tau)^(-1/2) sum_s e^{2 pi i a s} e^{-(pi i/tau)(s-b-z)^2}``.

    Algebraically identical to one inversion step followed by the direct sum,
    but the exponents stay of order one near the peak, so no large
    cancelling scale factors appear.
    """
    coef = -_PI_I / tau
    curvature = -coef.real / math.pi  # equals Im(-1/tau)
    peak = b + z.real - coef.imag * z.imag / coef.real
    centers = np.rint(peak).astype(np.int64)
    radius = series_radius(curvature, 0.0, 0.5, ctrl.tol)
    if derivatives:
        spread = float(np.max(np.abs(peak - b - z.real))) + float(np.max(np.abs(z.imag))) + radius + 2.0
        radius = series_radius(curvature, 0.0, 0.5, ctrl.tol / (spread * spread))
    if radius > ctrl.max_terms:
        raise ThetaConvergenceError(
            f"theta series needs {radius} terms per side (max_terms={ctrl.max_terms}); "
            f"Im(-1/tau)={curvature:.3g}")
    m, s0, s1, s2 = kernels.poisson_window(a, b, z, tau, centers, radius)
    log_scale = m.astype(complex) - 0.5 * np.log(-1j * tau)
    if not derivatives:
        return _Scaled(log_scale, s0, None, None)
    d_z = (_TWO_PI_I / tau) * s1
    d_tau = -0.5 / tau * s0 + (_PI_I / tau**2) * s2
    return _Scaled(log_scale, s0, d_z, d_tau)


def _evaluate(a: float, b: float, z: np.ndarray, tau: complex, ctrl: SeriesControl,
              derivatives: bool, depth: int = 0) -> _Scaled:
    # Characteristic reduction: theta[a+n; b+m] = exp(2 pi i m a) theta[a; b].
    a_red = a - math.floor(a + 0.5)
    m_shift = math.floor(b + 0.5)
    b_red = b - m_shift
    log_phase = _TWO_PI_I * m_shift * a_red
    # Argument reduction: theta[a; b](z + n) = exp(2 pi i a n) theta[a; b](z).
    # The subtraction is exact, and it keeps z / tau small in the inversion.
    z_shift = np.rint(z.real)
    if np.any(z_shift):
        z = z - z_shift
        log_phase = log_phase + _TWO_PI_I * a_red * z_shift

    n_shift = round(tau.real)
    if depth < _MAX_REDUCTIONS and n_shift != 0:
        # theta[a; b](z, t0 + n) = exp(-pi i n a (1 + a)) theta[a; b + n (a + 1/2)](z, t0)
        inner = _evaluate(a_red, b_red + n_shift * (a_red + 0.5), z, tau - n_shift,
                          ctrl, derivatives, depth + 1)
        inner.log_scale = inner.log_scale + log_phase - _PI_I * n_shift * a_red * (1.0 + a_red)
        return inner

    if depth < _MAX_REDUCTIONS and abs(tau) < 1.0:
        inv_tau = -1.0 / tau
        if round(inv_tau.real) == 0:
            # The inverted series needs no further reduction: sum it in the
            # fused form where the Gaussian prefactor is merged into each term.
            out = _poisson_sum(a_red, b_red, z, tau, ctrl, derivatives)
            out.log_scale = out.log_scale + log_phase
            return out
        # theta[a; b](z, t) = P * theta[-b; a](z/t, -1/t)
        zt = z / tau
        inner = _evaluate(-b_red, a_red, zt, inv_tau, ctrl, derivatives, depth + 1)
        log_p = -0.5 * np.log(-1j * tau) - _PI_I * z * z / tau + _TWO_PI_I * a_red * b_red
        out = _Scaled(inner.log_scale + log_p + log_phase, inner.value, None, None)
        if derivatives:
            h, hz, ht = inner.value, inner.d_z, inner.d_tau
            out.d_z = (-_TWO_PI_I * z / tau) * h + hz / tau
            out.d_tau = ((-0.5 / tau + _PI_I * z * z / tau**2) * h
                         - (z / tau**2) * hz + ht / tau**2)
        return out

    out = _base_sum(a_red, b_red, z, tau, ctrl, derivatives)
    out.log_scale = out.log_scale + log_phase
    return out


def theta_values(a: float, b: float, z, tau: complex, ctrl: SeriesControl | None = None,
                 derivatives: bool = False):
    """Vectorised theta function over an array of arguments.

    Parameters
    ----------
    a, b : float
        Characteristics.
    z : array_like of complex
        Arguments; any shape.
    tau : complex
        Modular parameter, ``Im(tau) > 0``.
    ctrl : SeriesControl, optional
        Truncation controls.
    derivatives : bool, optional
        Also return the derivatives with respect to ``z`` and ``tau``.

    Returns
    -------
    ndarray or tuple of ndarray
        ``theta`` values with the shape of ``z``; with ``derivatives=True``
        the tuple ``(theta, d theta/dz, d theta/dtau)``.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    tau = complex(tau)
    _check_tau(tau)
    z_arr = np.asarray(z, dtype=complex)
    flat = np.ascontiguousarray(z_arr.ravel())
    res = _evaluate(float(a), float(b), flat, tau, ctrl, derivatives)
    scale = np.exp(res.log_scale)
    value = (scale * res.value).reshape(z_arr.shape)
    if not derivatives:
        return value
    return (value, (scale * res.d_z).reshape(z_arr.shape),
            (scale * res.d_tau).reshape(z_arr.shape))


def theta_char(args: ThetaArgs, ctrl: SeriesControl | None = None) -> complex:
    """Theta function with characteristics at a single point.

    Examples
    --------
    >>> round(theta_char(ThetaArgs(0.0, 0.0, 0.0, 1j)).real, 15)
    1.086434811213308
    """
    return complex(theta_values(args.a, args.b, [args.z], args.tau, ctrl)[0])


def theta_char_dtau(args: ThetaArgs, ctrl: SeriesControl | None = None) -> complex:
    """Derivative of :func:`theta_char` with respect to ``tau``.

    The derivative is propagated analytically through every reduction step,
    so it inherits the same truncation contract as the value.
    """
    _, _, dtau = theta_values(args.a, args.b, [args.z], args.tau, ctrl, derivatives=True)
    return complex(dtau[0])


def _riemann_eval(args_a, args_b, z1, z2, tau, ctrl: SeriesControl):
    t = np.asarray(tau, dtype=complex)
    im = t.imag
    lam_min = float(np.linalg.eigvalsh(im)[0])
    if lam_min <= 0:
        raise ThetaDomainError("imaginary part of the period matrix must be positive definite")
    a1, a2 = (float(v) for v in args_a)
    b1, b2 = (float(v) for v in args_b)
    # Peak of the term moduli: x* = -Im(tau)^{-1} Im(z).
    inv = np.linalg.inv(im)
    p1 = -(inv[0, 0] * z1.imag + inv[0, 1] * z2.imag) - a1
    p2 = -(inv[1, 0] * z1.imag + inv[1, 1] * z2.imag) - a2
    c1 = np.rint(p1).astype(np.int64)
    c2 = np.rint(p2).astype(np.int64)
    # Outside the square window at least one coordinate is far from the peak;
    # the other coordinate contributes at most a one-dimensional theta sum.
    tol = ctrl.tol / (2.0 * (1.0 + 1.0 / math.sqrt(lam_min)))
    radius = series_radius(lam_min, 0.0, 0.5, tol)
    spread = float(max(np.max(np.abs(p1)), np.max(np.abs(p2)))) + radius + 2.0
    radius = series_radius(lam_min, 0.0, 0.5, tol / (spread * spread))
    if radius > ctrl.max_terms:
        raise ThetaConvergenceError(
            f"genus-2 theta needs {radius} terms per side (max_terms={ctrl.max_terms})")
    return kernels.riemann_window(a1, a2, b1, b2, z1, z2, complex(t[0, 0]),
                                  complex(t[0, 1]), complex(t[1, 1]), c1, c2, radius)


def riemann_theta2(args: RiemannThetaArgs, ctrl: SeriesControl | None = None) -> complex:
    """Genus-2 theta function with characteristics.

    .. math::

        \\Theta[a; b](z, \\tau) = \\sum_{s \\in \\mathbb{Z}^2}
            \\exp\\left(\\pi i (s+a)^T \\tau (s+a) + 2 \\pi i (s+a)^T (z+b)\\right)

    The sum runs over a square window centred on the largest term.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    z1 = np.array([complex(args.z[0])])
    z2 = np.array([complex(args.z[1])])
    m, s0, _, _ = _riemann_eval(args.a, args.b, z1, z2, args.tau, ctrl)
    return complex(np.exp(m[0]) * s0[0])


def riemann_theta2_log(a, b, z1, z2, tau, ctrl: SeriesControl | None = None):
    """Vectorised genus-2 theta in split form ``exp(log_scale) * value``.

    ``z1`` and ``z2`` broadcast against each other.  Keeping the scale
    separate lets callers merge it with other large exponentials before
    exponentiating.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    RiemannThetaArgs(tuple(a), tuple(b), (0j, 0j), tuple(map(tuple, np.asarray(tau))))
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    shape = np.broadcast(z1, z2).shape
    f1 = np.ascontiguousarray(np.broadcast_to(z1, shape).ravel())
    f2 = np.ascontiguousarray(np.broadcast_to(z2, shape).ravel())
    m, s0, _, _ = _riemann_eval(a, b, f1, f2, tau, ctrl)
    return m.reshape(shape), s0.reshape(shape)


def riemann_theta2_dtau(args: RiemannThetaArgs,
                        ctrl: SeriesControl | None = None) -> Tuple[complex, complex, complex]:
    """Value and diagonal period-matrix derivatives of :func:`riemann_theta2`.

    Returns
    -------
    tuple of complex
        ``(Theta, dTheta/dtau_11, dTheta/dtau_22)``.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    z1 = np.array([complex(args.z[0])])
    z2 = np.array([complex(args.z[1])])
    m, s0, s11, s22 = _riemann_eval(args.a, args.b, z1, z2, args.tau, ctrl)
    scale = np.exp(m[0])
    return (complex(scale * s0[0]), complex(_PI_I * scale * s11[0]),
            complex(_PI_I * scale * s22[0]))
