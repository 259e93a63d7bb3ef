import math

import numpy as np
import pytest

from gkpkit.quadrature import QuadratureError, adaptive_integrate, comb_breakpoints, comb_line_integral
from gkpkit.states import CombSpec


@pytest.mark.parametrize("f, edges, exact", [
    (lambda x: np.exp(-x ** 2), [-12.0, 12.0], math.sqrt(math.pi)),
    (lambda x: np.cos(x), [0.0, math.pi / 2], 1.0),
    (lambda x: x ** 7 - 3 * x, [-1.0, 2.0], 2.0 ** 8 / 8 - 1 / 8 - 1.5 * 3),
    (lambda x: np.abs(x - 0.3), [-1.0, 0.3, 1.0], (1.3 ** 2 + 0.7 ** 2) / 2),
])
def test_known_integrals(f, edges, exact):
    assert adaptive_integrate(f, edges) == pytest.approx(exact, rel=1e-13)


def test_complex_integrand():
    val = adaptive_integrate(lambda x: np.exp(2j * x - x ** 2), [-12.0, 0.0, 12.0])
    assert isinstance(val, complex)
    assert val == pytest.approx(math.sqrt(math.pi) * math.exp(-1.0), rel=1e-13)


def test_bisection_resolves_a_narrow_peak():
    # A spike of width 1e-3 that the initial single segment cannot see well.
    val = adaptive_integrate(lambda x: np.exp(-((x - 0.123) / 1e-3) ** 2), [-1.0, 1.0], rtol=1e-12)
    assert val == pytest.approx(1e-3 * math.sqrt(math.pi), rel=1e-11)


def test_non_convergence_raises():
    with pytest.raises(QuadratureError):
        adaptive_integrate(lambda x: 1.0 / np.sqrt(np.abs(x)), [-1.0, 1.0], max_rounds=3)


@pytest.mark.parametrize("spec, nu", [(CombSpec(4.0, 2.5, 0.5), 0.05),
                                      (CombSpec(30.0, 1.2, 0.0, "phased"), 0.2)])
def test_comb_breakpoints_cover_the_support(spec, nu):
    edges = comb_breakpoints(spec, nu)
    assert np.all(np.diff(edges) > 0)
    assert edges[0] == -edges[-1]
    width = spec.mu + nu
    # The squared envelope times x^2 is negligible at the outer edges.
    assert edges[-1] ** 2 * math.exp(-edges[-1] ** 2 / width) < 1e-22


def test_comb_line_integral_of_gaussian_sum():
    spec = CombSpec(4.0, 2.5, 0.25)
    nu = 0.05
    s = np.arange(-40, 41)
    centers = (s + spec.shift) * spec.period
    weights = np.exp(-centers ** 2 / (2 * spec.mu))
    # Each spike of G_nu integrates to one.
    f = lambda x: (weights * np.exp(-(x[:, None] - centers) ** 2 / (2 * nu))).sum(axis=1) / math.sqrt(2 * math.pi * nu)
    assert comb_line_integral(f, spec, nu) == pytest.approx(weights.sum(), rel=1e-13)
