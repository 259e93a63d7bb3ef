"""Pure numpy implementations of the lattice-sum kernels.

Signatures and return values mirror the compiled ``_kernels`` module so the
two are interchangeable.  Windows are evaluated as dense ``(points, terms)``
arrays, which keeps the code short at the price of memory for very wide
windows.
"""

from __future__ import annotations

import numpy as np


def theta_window(a, b, z, tau, centers, half_width):
    z = np.ascontiguousarray(z, dtype=np.complex128)
    offsets = np.arange(-half_width, half_width + 1)
    x = np.asarray(centers, dtype=np.float64)[:, None] + offsets[None, :] + a
    y = (z + b)[:, None]
    re = -np.pi * tau.imag * x * x - 2.0 * np.pi * y.imag * x
    im = np.pi * tau.real * x * x + 2.0 * np.pi * y.real * x
    m = re.max(axis=1)
    terms = np.exp(re - m[:, None]) * (np.cos(im) + 1j * np.sin(im))
    return m, terms.sum(axis=1), (x * terms).sum(axis=1), (x * x * terms).sum(axis=1)


def poisson_window(a, b, z, tau, centers, half_width):
    z = np.ascontiguousarray(z, dtype=np.complex128)
    offsets = np.arange(-half_width, half_width + 1)
    s = np.asarray(centers, dtype=np.float64)[:, None] + offsets[None, :]
    y = s - b - z[:, None]
    expo = (-1j * np.pi / tau) * (y * y)
    m = expo.real.max(axis=1)
    phase = expo.imag + 2.0 * np.pi * a * s
    terms = np.exp(expo.real - m[:, None]) * (np.cos(phase) + 1j * np.sin(phase))
    return m, terms.sum(axis=1), (y * terms).sum(axis=1), (y * y * terms).sum(axis=1)


def riemann_window(a1, a2, b1, b2, z1, z2, t11, t12, t22, c1, c2, half_width):
    z1 = np.ascontiguousarray(z1, dtype=np.complex128)
    z2 = np.ascontiguousarray(z2, dtype=np.complex128)
    offsets = np.arange(-half_width, half_width + 1)
    x1 = (np.asarray(c1, dtype=np.float64)[:, None] + offsets[None, :] + a1)[:, :, None]
    x2 = (np.asarray(c2, dtype=np.float64)[:, None] + offsets[None, :] + a2)[:, None, :]
    y1 = (z1 + b1)[:, None, None]
    y2 = (z2 + b2)[:, None, None]
    re = (-np.pi * (t11.imag * x1 * x1 + 2.0 * t12.imag * x1 * x2 + t22.imag * x2 * x2)
          - 2.0 * np.pi * (y1.imag * x1 + y2.imag * x2))
    im = (np.pi * (t11.real * x1 * x1 + 2.0 * t12.real * x1 * x2 + t22.real * x2 * x2)
          + 2.0 * np.pi * (y1.real * x1 + y2.real * x2))
    m = re.max(axis=(1, 2))
    terms = np.exp(re - m[:, None, None]) * (np.cos(im) + 1j * np.sin(im))
    return (m, terms.sum(axis=(1, 2)), (x1 * x1 * terms).sum(axis=(1, 2)),
            (x2 * x2 * terms).sum(axis=(1, 2)))


def gauss_comb(centers, weights, nu, x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(x.shape[0], dtype=np.complex128)
    norm = 1.0 / np.sqrt(2.0 * np.pi * nu)
    # Chunk over points so the dense block stays around a few MB.
    step = max(1, 2**18 // max(1, len(centers)))
    for start in range(0, x.shape[0], step):
        d = x[start:start + step, None] - centers[None, :]
        out[start:start + step] = norm * (np.exp(-d * d / (2.0 * nu)) @ weights)
    return out
