# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice-sum kernels.

Every routine here has a numpy twin in ``_fallback`` with the same signature
and semantics; ``gkpkit.kernels`` picks one at import time.

The exponents are quadratic in the summation index, so consecutive terms
differ by a ratio that itself changes by a constant factor.  Each window is
summed by walking outward from its largest term with these two
multiplicative updates, which needs a handful of complex exponentials per
window instead of one per term.  Starting at the largest term keeps every
partial product at most 1 in magnitude, so the walk cannot overflow.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin, sqrt, floor, M_PI

cnp.import_array()


cdef inline Py_ssize_t _nearest_offset(double vertex, Py_ssize_t half_width) noexcept nogil:
    """Window offset closest to a continuous maximiser, clamped to the window."""
    cdef double r = floor(vertex + 0.5)
    if r > half_width:
        return half_width
    if r < -half_width:
        return -half_width
    return <Py_ssize_t>r


cdef inline void _cexp(double re, double im, double* out_re, double* out_im) noexcept nogil:
    cdef double w = exp(re)
    out_re[0] = w * cos(im)
    out_im[0] = w * sin(im)


cdef inline void _cmul(double* ar, double* ai, double br, double bi) noexcept nogil:
    """In-place ``a *= b`` for complex numbers held as real pairs."""
    cdef double t = ar[0] * br - ai[0] * bi
    ai[0] = ar[0] * bi + ai[0] * br
    ar[0] = t


def theta_window(double a, double b, z, double complex tau,
                 const cnp.int64_t[::1] centers, Py_ssize_t half_width):
    """Log-scaled one-dimensional theta sums over per-point windows.

    For each ``z[k]`` sum ``s`` over ``centers[k] +- half_width`` of
    ``exp(E_s - m_k)`` with ``E_s = pi i tau (s+a)^2 + 2 pi i (z+b)(s+a)``
    and ``m_k = max_s Re E_s``.  Returns ``(m, S0, S1, S2)`` where ``S1`` and
    ``S2`` carry the extra factors ``(s+a)`` and ``(s+a)**2``.
    """
    cdef const double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t n = zv.shape[0]
    cdef double[::1] m_out = np.empty(n)
    cdef double complex[::1] s0 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] s1 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] s2 = np.empty(n, dtype=np.complex128)
    cdef double tr = tau.real, ti = tau.imag
    cdef double qr, qi
    cdef Py_ssize_t k, i, peak
    cdef double x0, xs, x, yr, yi, m, t_re, t_im, u_re, u_im, r_re, r_im
    cdef double a0r, a0i, a1r, a1i, a2r, a2i
    # Second-difference factor exp(2 pi i tau), shared by every window.
    _cexp(-2.0 * M_PI * ti, 2.0 * M_PI * tr, &qr, &qi)
    with nogil:
        for k in range(n):
            yr = zv[k].real + b
            yi = zv[k].imag
            x0 = centers[k] + a
            peak = _nearest_offset(-yi / ti - x0, half_width)
            xs = x0 + peak
            m = -M_PI * ti * xs * xs - 2.0 * M_PI * yi * xs
            _cexp(0.0, M_PI * tr * xs * xs + 2.0 * M_PI * yr * xs, &t_re, &t_im)
            a0r = t_re; a0i = t_im
            a1r = xs * t_re; a1i = xs * t_im
            a2r = xs * xs * t_re; a2i = xs * xs * t_im
            # Upward: ratio exp(E(x+1) - E(x)) starting at x = xs.
            _cexp(-M_PI * ti * (2.0 * xs + 1.0) - 2.0 * M_PI * yi,
                  M_PI * tr * (2.0 * xs + 1.0) + 2.0 * M_PI * yr, &r_re, &r_im)
            u_re = t_re; u_im = t_im
            for i in range(peak + 1, half_width + 1):
                _cmul(&u_re, &u_im, r_re, r_im)
                x = x0 + i
                a0r += u_re; a0i += u_im
                a1r += x * u_re; a1i += x * u_im
                a2r += x * x * u_re; a2i += x * x * u_im
                _cmul(&r_re, &r_im, qr, qi)
            # Downward: ratio exp(E(x-1) - E(x)) starting at x = xs.
            _cexp(-M_PI * ti * (1.0 - 2.0 * xs) + 2.0 * M_PI * yi,
                  M_PI * tr * (1.0 - 2.0 * xs) - 2.0 * M_PI * yr, &r_re, &r_im)
            u_re = t_re; u_im = t_im
            for i in range(peak - 1, -half_width - 1, -1):
                _cmul(&u_re, &u_im, r_re, r_im)
                x = x0 + i
                a0r += u_re; a0i += u_im
                a1r += x * u_re; a1i += x * u_im
                a2r += x * x * u_re; a2i += x * x * u_im
                _cmul(&r_re, &r_im, qr, qi)
            m_out[k] = m
            s0[k] = a0r + 1j * a0i
            s1[k] = a1r + 1j * a1i
            s2[k] = a2r + 1j * a2i
    return np.asarray(m_out), np.asarray(s0), np.asarray(s1), np.asarray(s2)


def poisson_window(double a, double b, z, double complex tau,
                   const cnp.int64_t[::1] centers, Py_ssize_t half_width):
    """Log-scaled sums of the inverted (Poisson) form of the theta series.

    Terms are ``exp(2 pi i a s - (pi i / tau) y^2)`` with ``y = s - b - z``.
    Returns ``(m, S0, S1, S2)`` with ``S1``/``S2`` carrying ``y`` and ``y**2``.
    """
    cdef const double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t n = zv.shape[0]
    cdef double[::1] m_out = np.empty(n)
    cdef double complex[::1] s0 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] s1 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] s2 = np.empty(n, dtype=np.complex128)
    cdef double complex c = -1j * M_PI / tau
    cdef double cr = c.real, ci = c.imag
    cdef double qr, qi
    cdef Py_ssize_t k, i, peak
    cdef double s, ss, yr, yi, m, t_re, t_im, u_re, u_im, r_re, r_im, w_re, w_im
    cdef double a0r, a0i, a1r, a1i, a2r, a2i
    # Second-difference factor exp(2c).
    _cexp(2.0 * cr, 2.0 * ci, &qr, &qi)
    with nogil:
        for k in range(n):
            yi = -zv[k].imag
            # Re(c y^2) is maximal at Re y = ci yi / cr.
            peak = _nearest_offset(ci * yi / cr + b + zv[k].real - centers[k], half_width)
            ss = centers[k] + peak
            yr = ss - b - zv[k].real
            m = cr * (yr * yr - yi * yi) - 2.0 * ci * yr * yi
            _cexp(0.0, ci * (yr * yr - yi * yi) + 2.0 * cr * yr * yi + 2.0 * M_PI * a * ss,
                  &t_re, &t_im)
            a0r = t_re; a0i = t_im
            w_re = yr * t_re - yi * t_im; w_im = yr * t_im + yi * t_re
            a1r = w_re; a1i = w_im
            a2r = yr * w_re - yi * w_im; a2i = yr * w_im + yi * w_re
            # Upward ratio exp(2 pi i a + c (2 y + 1)).
            _cexp(cr * (2.0 * yr + 1.0) - 2.0 * ci * yi,
                  ci * (2.0 * yr + 1.0) + 2.0 * cr * yi + 2.0 * M_PI * a, &r_re, &r_im)
            u_re = t_re; u_im = t_im
            for i in range(peak + 1, half_width + 1):
                _cmul(&u_re, &u_im, r_re, r_im)
                yr = centers[k] + i - b - zv[k].real
                a0r += u_re; a0i += u_im
                w_re = yr * u_re - yi * u_im; w_im = yr * u_im + yi * u_re
                a1r += w_re; a1i += w_im
                a2r += yr * w_re - yi * w_im; a2i += yr * w_im + yi * w_re
                _cmul(&r_re, &r_im, qr, qi)
            # Downward ratio exp(-2 pi i a + c (1 - 2 y)).
            yr = ss - b - zv[k].real
            _cexp(cr * (1.0 - 2.0 * yr) + 2.0 * ci * yi,
                  ci * (1.0 - 2.0 * yr) - 2.0 * cr * yi - 2.0 * M_PI * a, &r_re, &r_im)
            u_re = t_re; u_im = t_im
            for i in range(peak - 1, -half_width - 1, -1):
                _cmul(&u_re, &u_im, r_re, r_im)
                yr = centers[k] + i - b - zv[k].real
                a0r += u_re; a0i += u_im
                w_re = yr * u_re - yi * u_im; w_im = yr * u_im + yi * u_re
                a1r += w_re; a1i += w_im
                a2r += yr * w_re - yi * w_im; a2i += yr * w_im + yi * w_re
                _cmul(&r_re, &r_im, qr, qi)
            m_out[k] = m
            s0[k] = a0r + 1j * a0i
            s1[k] = a1r + 1j * a1i
            s2[k] = a2r + 1j * a2i
    return np.asarray(m_out), np.asarray(s0), np.asarray(s1), np.asarray(s2)


cdef inline double _row_real(double x1, double x2, double t11i, double t12i, double t22i,
                             double y1i, double y2i) noexcept nogil:
    return (-M_PI * (t11i * x1 * x1 + 2.0 * t12i * x1 * x2 + t22i * x2 * x2)
            - 2.0 * M_PI * (y1i * x1 + y2i * x2))


def riemann_window(double a1, double a2, double b1, double b2, z1, z2,
                   double complex t11, double complex t12, double complex t22,
                   const cnp.int64_t[::1] c1, const cnp.int64_t[::1] c2, Py_ssize_t half_width):
    """Log-scaled genus-2 theta sums over per-point square windows.

    Returns ``(m, S0, S11, S22)``; ``S11``/``S22`` carry ``x1**2``/``x2**2``.
    Each row of fixed ``x1`` is walked outward from its own largest term.
    """
    cdef const double complex[::1] z1v = np.ascontiguousarray(z1, dtype=np.complex128)
    cdef const double complex[::1] z2v = np.ascontiguousarray(z2, dtype=np.complex128)
    cdef Py_ssize_t n = z1v.shape[0]
    cdef double[::1] m_out = np.empty(n)
    cdef double complex[::1] s0 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] s11 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] s22 = np.empty(n, dtype=np.complex128)
    cdef double t11r = t11.real, t11i = t11.imag, t12r = t12.real, t12i = t12.imag
    cdef double t22r = t22.real, t22i = t22.imag
    cdef double qr, qi
    cdef Py_ssize_t k, i, j, peak
    cdef double x1, x2, x20, xs, lin_r, lin_i, m, row_m, t_re, t_im, u_re, u_im, r_re, r_im
    cdef double y1r, y1i, y2r, y2i
    cdef double a0r, a0i, b1r, b1i, b2r, b2i, w1
    _cexp(-2.0 * M_PI * t22i, 2.0 * M_PI * t22r, &qr, &qi)
    with nogil:
        for k in range(n):
            y1r = z1v[k].real + b1; y1i = z1v[k].imag
            y2r = z2v[k].real + b2; y2i = z2v[k].imag
            x20 = c2[k] + a2
            m = -1e308
            for i in range(-half_width, half_width + 1):
                x1 = c1[k] + i + a1
                peak = _nearest_offset(-(t12i * x1 + y2i) / t22i - x20, half_width)
                row_m = _row_real(x1, x20 + peak, t11i, t12i, t22i, y1i, y2i)
                if row_m > m:
                    m = row_m
            a0r = 0.0; a0i = 0.0; b1r = 0.0; b1i = 0.0; b2r = 0.0; b2i = 0.0
            for i in range(-half_width, half_width + 1):
                x1 = c1[k] + i + a1
                peak = _nearest_offset(-(t12i * x1 + y2i) / t22i - x20, half_width)
                xs = x20 + peak
                _cexp(_row_real(x1, xs, t11i, t12i, t22i, y1i, y2i) - m,
                      M_PI * (t11r * x1 * x1 + 2.0 * t12r * x1 * xs + t22r * xs * xs)
                      + 2.0 * M_PI * (y1r * x1 + y2r * xs), &t_re, &t_im)
                w1 = x1 * x1
                a0r += t_re; a0i += t_im
                b1r += w1 * t_re; b1i += w1 * t_im
                b2r += xs * xs * t_re; b2i += xs * xs * t_im
                # Linear coefficient of the row exponent in x2, divided by 2 pi i.
                lin_r = t12r * x1 + y2r
                lin_i = t12i * x1 + y2i
                _cexp(-M_PI * t22i * (2.0 * xs + 1.0) - 2.0 * M_PI * lin_i,
                      M_PI * t22r * (2.0 * xs + 1.0) + 2.0 * M_PI * lin_r, &r_re, &r_im)
                u_re = t_re; u_im = t_im
                for j in range(peak + 1, half_width + 1):
                    _cmul(&u_re, &u_im, r_re, r_im)
                    x2 = x20 + j
                    a0r += u_re; a0i += u_im
                    b1r += w1 * u_re; b1i += w1 * u_im
                    b2r += x2 * x2 * u_re; b2i += x2 * x2 * u_im
                    _cmul(&r_re, &r_im, qr, qi)
                _cexp(-M_PI * t22i * (1.0 - 2.0 * xs) + 2.0 * M_PI * lin_i,
                      M_PI * t22r * (1.0 - 2.0 * xs) - 2.0 * M_PI * lin_r, &r_re, &r_im)
                u_re = t_re; u_im = t_im
                for j in range(peak - 1, -half_width - 1, -1):
                    _cmul(&u_re, &u_im, r_re, r_im)
                    x2 = x20 + j
                    a0r += u_re; a0i += u_im
                    b1r += w1 * u_re; b1i += w1 * u_im
                    b2r += x2 * x2 * u_re; b2i += x2 * x2 * u_im
                    _cmul(&r_re, &r_im, qr, qi)
            m_out[k] = m
            s0[k] = a0r + 1j * a0i
            s11[k] = b1r + 1j * b1i
            s22[k] = b2r + 1j * b2i
    return np.asarray(m_out), np.asarray(s0), np.asarray(s11), np.asarray(s22)


def gauss_comb(const double[::1] centers, const double complex[::1] weights, double nu, x):
    """Sum ``weights[s] * G_nu(x - centers[s])`` for every point of ``x``.

    Equally spaced centres (the only kind the package produces) are summed
    by the ratio walk from the nearest centre; other layouts fall back to
    one exponential per term.
    """
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], ns = centers.shape[0]
    cdef double complex[::1] out = np.empty(n, dtype=np.complex128)
    cdef double norm = 1.0 / sqrt(2.0 * M_PI * nu)
    cdef double inv = 0.5 / nu
    cdef Py_ssize_t k, s, near
    cdef double d, g, r, accr, acci, h = 0.0, step_factor
    cdef bint uniform = ns >= 2
    if uniform:
        spacing = np.diff(np.asarray(centers))
        h = float(spacing[0])
        uniform = h != 0.0 and bool(np.all(np.abs(spacing - h) <= 1e-13 * abs(h)))
    step_factor = exp(-2.0 * h * h * inv)
    with nogil:
        for k in range(n):
            accr = 0.0; acci = 0.0
            if uniform:
                near = <Py_ssize_t>floor((xv[k] - centers[0]) / h + 0.5)
                if near < 0:
                    near = 0
                elif near > ns - 1:
                    near = ns - 1
                d = xv[k] - centers[near]
                g = exp(-d * d * inv)
                accr = weights[near].real * g
                acci = weights[near].imag * g
                # G(d - h) / G(d) = exp((2 d h - h^2) inv), and the ratio
                # itself shrinks by exp(-2 h^2 inv) per step.
                r = exp((2.0 * d * h - h * h) * inv)
                g = exp(-d * d * inv)
                for s in range(near + 1, ns):
                    g = g * r
                    r = r * step_factor
                    accr += weights[s].real * g
                    acci += weights[s].imag * g
                g = exp(-d * d * inv)
                r = exp((-2.0 * d * h - h * h) * inv)
                for s in range(near - 1, -1, -1):
                    g = g * r
                    r = r * step_factor
                    accr += weights[s].real * g
                    acci += weights[s].imag * g
            else:
                for s in range(ns):
                    d = xv[k] - centers[s]
                    g = exp(-d * d * inv)
                    accr += weights[s].real * g
                    acci += weights[s].imag * g
            out[k] = norm * (accr + 1j * acci)
    return np.asarray(out)
