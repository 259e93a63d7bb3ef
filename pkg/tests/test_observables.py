import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkpkit.observables import (PHOTON_ROUTES, PhotonBreakdown, asymptotic_normalization,
                                asymptotic_overlap, avg_photon, inner_product, normalization,
                                photon_estimate, riemann_period_matrix, riemann_variants)
from gkpkit.params import CodeLabel, StandardParams, SymmetricParams, sigma2_from_db
from gkpkit.states import momentum_amplitude, position_amplitude, position_comb

from oracles import trapezoid


def symmetric(sigma2, d=2, j=0):
    return SymmetricParams(sigma2, CodeLabel(d, j)).to_standard()


def direct_position(p, q):
    """Unnormalised position amplitude summed spike by spike."""
    spec, nu = position_comb(p)
    s = np.arange(-80, 81)
    centers = (s + spec.shift) * spec.period
    w = np.exp(-centers ** 2 / (2 * spec.mu))
    return (w * np.exp(-(q[:, None] - centers) ** 2 / (2 * nu))).sum(axis=1) / math.sqrt(2 * math.pi * nu)


Q = np.linspace(-45.0, 45.0, 36001)

params_st = st.builds(
    lambda sq, sp, g, d: StandardParams(sq, sp, math.sqrt(2 * math.pi / d) * d * g, CodeLabel(d, 0)),
    st.floats(0.02, 0.3), st.floats(0.02, 0.3), st.floats(0.7, 1.3), st.sampled_from([1, 2, 3, 4, 6]))


# -- normalisation ---------------------------------------------------------------

def test_normalization_small_variance_example():
    assert normalization(symmetric(0.01)) == pytest.approx(50.0, rel=1e-12)
    assert asymptotic_normalization(0.01, 0.01) == pytest.approx(50.0, rel=1e-15)
    assert asymptotic_normalization(0.05, 0.05) == pytest.approx(10.0, rel=1e-15)


@pytest.mark.parametrize("p", [symmetric(0.05, 2), symmetric(0.3, 6, 2),
                               StandardParams(0.1, 0.04, 4.0, CodeLabel(3, 1)),
                               StandardParams(0.02, 0.2, 2.0, CodeLabel(1, 0))])
def test_normalization_matches_brute_force_integral(p):
    integral = trapezoid(direct_position(p, Q) ** 2, Q)
    closed = integral * 2 * p.gamma_spacing / math.sqrt(p.Lambda)
    assert closed == pytest.approx(normalization(p), rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(p=params_st)
def test_normalization_positive_and_index_symmetric(p):
    d = p.label.d
    for j in range(d):
        n_j = normalization(p, None, j)
        assert n_j > 0 and math.isfinite(n_j)
        assert n_j == pytest.approx(normalization(p, None, (d - j) % d), rel=1e-12)


# -- inner products -----------------------------------------------------------------

def test_inner_product_of_equal_indices_is_one():
    assert inner_product(symmetric(0.2, 3), 1, 1) == 1.0


@pytest.mark.parametrize("p, j, jp", [(symmetric(0.05, 2), 0, 1), (symmetric(0.2, 3), 2, 0),
                                      (StandardParams(0.15, 0.1, 3.0, CodeLabel(4, 0)), 1, 3)])
def test_inner_product_matches_brute_force_integral(p, j, jp):
    a = direct_position(p.with_index(j), Q)
    b = direct_position(p.with_index(jp), Q)
    ref = trapezoid(a * b, Q) / math.sqrt(trapezoid(a * a, Q) * trapezoid(b * b, Q))
    assert abs(inner_product(p, j, jp) - ref) < 1e-10


@settings(max_examples=60, deadline=None)
@given(sigma2=st.floats(0.005, 0.45), d=st.sampled_from([2, 3, 4, 6]), data=st.data())
def test_symmetric_overlaps_are_real(sigma2, d, data):
    j = data.draw(st.integers(0, d - 1))
    jp = data.draw(st.integers(0, d - 1))
    ov = inner_product(symmetric(sigma2, d), j, jp)
    assert abs(ov.imag) < 1e-12
    assert abs(ov) <= 1 + 1e-12


def test_overlap_decay_at_15db():
    p = symmetric(sigma2_from_db(15), 2)
    decay = -math.log(abs(inner_product(p, 0, 1)))
    leading = p.gamma_spacing ** 2 / (32 * p.sigma_q2)
    assert leading == pytest.approx(-math.log(asymptotic_overlap(p, 0, 1)), rel=1e-14)
    # |j - j'| / 2d = 1/4 sits where two theta terms tie, so the overlap is
    # about twice the leading form.
    assert abs(decay / leading - 1) < 0.03
    assert abs((decay - (leading - math.log(2))) / decay) < 2e-3


def test_asymptotic_overlap_at_12db_d3():
    p = symmetric(sigma2_from_db(12), 3)
    exact = abs(inner_product(p, 0, 1))
    assert asymptotic_overlap(p, 0, 0) == 1.0
    assert asymptotic_overlap(p, 0, 1) / exact - 1 == pytest.approx(0.03346, abs=1e-4)


@pytest.mark.parametrize("d", [2, 3, 6])
def test_overlap_decay_is_monotone(d):
    decay = [-math.log(abs(inner_product(symmetric(sigma2_from_db(db), d), 0, 1)))
             for db in np.arange(1.0, 18.5, 0.5)]
    assert np.all(np.diff(decay) > 0)


# -- photon number ----------------------------------------------------------------------

@pytest.mark.parametrize("db", [6.0, 8.0, 10.0, 14.0])
def test_photon_routes_agree(db):
    p = symmetric(sigma2_from_db(db), 2)
    values = [avg_photon(p, route).n_avg for route in PHOTON_ROUTES]
    assert (max(values) - min(values)) / values[0] < 1e-6


@pytest.mark.parametrize("p", [symmetric(0.05, 2), StandardParams(0.08, 0.03, 3.1, CodeLabel(3, 2))])
def test_photon_moments_match_brute_force(p):
    psi = position_amplitude(p, Q, route="direct")
    phi = momentum_amplitude(p, Q, route="direct")
    q2 = trapezoid(Q ** 2 * psi ** 2, Q)
    p2 = trapezoid(Q ** 2 * np.abs(phi) ** 2, Q)
    b = avg_photon(p)
    assert b.q2_moment == pytest.approx(q2, rel=1e-9)
    assert b.p2_moment == pytest.approx(p2, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(p=params_st)
def test_photon_breakdown_identity(p):
    for route in ("theta_formula", "riemann_theta"):
        b = avg_photon(p, route)
        assert isinstance(b, PhotonBreakdown) and b.route == route
        assert b.q2_moment + b.p2_moment - 1 == pytest.approx(2 * b.n_avg, rel=1e-10, abs=1e-12)


def test_photon_at_18db_close_to_estimate():
    p = symmetric(sigma2_from_db(18), 2)
    n_avg = avg_photon(p).n_avg
    assert abs(n_avg - photon_estimate(p.sigma_q2)) / n_avg < 0.005


def test_position_and_momentum_moments_equal_only_for_single_level_code():
    assert avg_photon(symmetric(0.05, 1)).q2_moment == pytest.approx(
        avg_photon(symmetric(0.05, 1)).p2_moment, rel=1e-10)
    # For d > 1 the Fourier transform maps |j> to a superposition of
    # codewords, so the two moments of |j> differ.
    for d in (2, 3):
        b = avg_photon(symmetric(0.05, d))
        assert abs(b.q2_moment - b.p2_moment) > 1e-2
    # Equal spike variances with the square-lattice period also differ.
    b = avg_photon(StandardParams(0.05, 0.05, math.sqrt(2 * math.pi), CodeLabel(1, 0)))
    assert abs(b.q2_moment - b.p2_moment) > 1e-6


def test_photon_decreases_with_sigma2():
    values = [avg_photon(symmetric(s, 2)).n_avg for s in np.linspace(0.01, 0.15, 29)]
    assert np.all(np.diff(values) < 0)


def test_photon_estimate_deviation_trend():
    def deviation(db):
        p = symmetric(sigma2_from_db(db), 2)
        n_avg = avg_photon(p).n_avg
        return abs(n_avg - photon_estimate(p.sigma_q2)) / n_avg

    assert deviation(15) < 0.01
    assert deviation(5) > 0.05
    devs = [deviation(db) for db in np.arange(4.0, 18.5, 0.5)]
    scale = np.maximum(np.abs(devs[1:]), 1.0)
    assert np.all(np.diff(devs) <= 1e-15 * scale)


def test_normalization_approaches_asymptote():
    devs = [abs(2 * s * normalization(symmetric(s, 2)) - 1)
            for s in (sigma2_from_db(db) for db in np.arange(8.0, 18.5, 0.5))]
    assert devs[np.argmin(np.abs(np.arange(8.0, 18.5, 0.5) - 15))] < 1e-3
    assert np.all(np.diff(devs) <= 1e-15)


def test_unknown_route_and_index():
    with pytest.raises(ValueError):
        avg_photon(symmetric(0.1), "monte_carlo")
    with pytest.raises(ValueError):
        normalization(symmetric(0.1), None, 2)


# -- genus-2 alternatives -------------------------------------------------------------

def test_period_matrix_is_valid():
    tau = riemann_period_matrix(symmetric(0.1, 2))
    assert np.allclose(tau, tau.T)
    assert np.all(np.linalg.eigvalsh(tau.imag) > 0)


@pytest.mark.parametrize("sigma2, d", [(0.1, 2), (0.05, 3), (0.2, 6)])
def test_riemann_variants_match_one_dimensional_forms(sigma2, d):
    p = symmetric(sigma2, d)
    for j, jp in ((0, 0), (0, 1), (1, 0), (0, d - 1)):
        norm, overlap, n_avg = riemann_variants(p, j, jp)
        assert norm == pytest.approx(normalization(p, None, j), rel=1e-10)
        assert abs(overlap - inner_product(p, j, jp)) < 1e-10
        assert n_avg == pytest.approx(avg_photon(p.with_index(j)).n_avg, rel=1e-8)
        if j == jp:
            assert abs(overlap - 1) < 1e-13
