import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkpkit.params import (Approx1Params, Approx2Params, Approx3Params, CodeLabel, ParameterRangeError,
                           StandardParams, SymmetricParams, apply_squeeze, approx1_from_standard,
                           approx2_from_approx1, db_from_sigma2, remark1_convert, sigma2_from_db,
                           square_lattice_unit, standard_from_approx1, standard_from_approx2,
                           standard_from_approx3, theorem1_parameters, theorem1_states)
from gkpkit.states import approximation_amplitude

from oracles import approx1_brute, approx2_brute, approx3_brute, normalise_on_grid

ALPHA2 = math.sqrt(math.pi)


# -- examples -----------------------------------------------------------------

def test_approx1_example():
    s = standard_from_approx1(Approx1Params(0.1, 0.1, ALPHA2, CodeLabel(2, 0)))
    assert s.sigma_q2 == pytest.approx(0.005, rel=1e-15)
    assert s.sigma_p2 == pytest.approx(0.01 / (2 * 1.0001), rel=1e-15)
    assert s.gamma_spacing == pytest.approx(2 * ALPHA2, rel=1e-15)


def test_approx1_small_kappa_limit():
    s = standard_from_approx1(Approx1Params(1e-8, 0.2))
    assert s.sigma_q2 == pytest.approx(0.02, rel=1e-15)
    assert s.sigma_p2 < 1e-15


@pytest.mark.parametrize("kappa, Delta", [(0.3, 0.3), (0.1, 0.5), (0.7, 0.2)])
def test_approx1_lambda_identity(kappa, Delta):
    s = standard_from_approx1(Approx1Params(kappa, Delta))
    assert s.Lambda == pytest.approx(1.0 / (1.0 + kappa ** 2 * Delta ** 2), rel=1e-14)


def test_approx2_example():
    s = standard_from_approx2(Approx2Params(0.2, 0.2, ALPHA2, CodeLabel(2, 0)))
    lam = 1.0004
    assert s.sigma_q2 == pytest.approx(0.02 / lam, rel=1e-14)
    assert s.sigma_p2 == pytest.approx(0.02 / lam, rel=1e-14)
    # Narrowing factor 1 - gamma^2 delta^2 / (2 lambda) with gamma^2 delta^2 = 0.0016.
    assert s.gamma_spacing == pytest.approx(2 * ALPHA2 * (1 - 0.0008 / lam), rel=1e-14)


def test_approx2_small_product_limit():
    s = standard_from_approx2(Approx2Params(1e-5, 0.3))
    assert s.gamma_spacing == pytest.approx(2 * ALPHA2, rel=1e-10)
    assert s.sigma_q2 == pytest.approx(0.045, rel=1e-10)
    assert s.sigma_p2 == pytest.approx(0.5e-10, rel=1e-9)


@pytest.mark.parametrize("gamma, delta", [(0.2, 0.2), (0.1, 0.3), (0.9, 0.5), (0.95, 0.4)])
def test_approx2_envelope_identity(gamma, delta):
    # 1/(2 sigma_p2) equals the envelope variance plus twice the spike variance.
    a2 = Approx2Params(gamma, delta)
    lam = a2.lam
    envelope = lam / gamma ** 2 * (1 - gamma ** 2 * delta ** 2 / (2 * lam)) ** 2
    s = standard_from_approx2(a2)
    assert 1.0 / (2.0 * s.sigma_p2) == pytest.approx(envelope + 2.0 * s.sigma_q2, rel=1e-14)


def test_approx3_example():
    s = standard_from_approx3(Approx3Params(0.2, ALPHA2, CodeLabel(2, 0)))
    assert s.sigma_q2 == s.sigma_p2 == pytest.approx(math.tanh(0.2) / 2, rel=1e-15)
    assert s.gamma_spacing == pytest.approx(2 * ALPHA2 / math.cosh(0.2), rel=1e-15)
    assert s.gamma_spacing == pytest.approx(2 * ALPHA2 * math.sqrt(s.Lambda), rel=1e-14)


def test_approx3_ideal_limit():
    s = standard_from_approx3(Approx3Params(1e-9))
    assert s.sigma_q2 < 1e-9
    assert s.gamma_spacing == pytest.approx(2 * ALPHA2, rel=1e-15)


def test_theorem1_parameters_example():
    kappa, Delta, gamma, delta = theorem1_parameters(0.2)
    assert kappa ** 2 == pytest.approx(math.tanh(0.2), rel=1e-15)
    assert Delta ** 2 == pytest.approx(math.sinh(0.4) / 2, rel=1e-15)
    assert gamma ** 2 == delta ** 2 == pytest.approx(2 * math.tanh(0.1), rel=1e-15)


@pytest.mark.parametrize("beta", [0.01, 0.2, 1.0, 3.0])
def test_theorem1_kappa_matches_approx2_envelope(beta):
    kappa, Delta, gamma, delta = theorem1_parameters(beta)
    lam = 1 + (gamma * delta) ** 2 / 4
    assert kappa ** 2 == pytest.approx(gamma ** 2 / lam, rel=1e-14)
    assert Delta ** 2 == pytest.approx(delta ** 2 / lam / (1 - (gamma * delta) ** 2 / (2 * lam)) ** 2, rel=1e-14)


def test_theorem1_ideal_limit():
    assert max(theorem1_parameters(1e-12)) < 1e-5


def test_squeeze_identity():
    p = StandardParams(0.03, 0.07, 4.0)
    assert apply_squeeze(p, 1.0) == p


def test_squeezed_approx1_matches_approx2():
    # Approximation 1 and its Approximation-2 counterpart share one standard form.
    a1 = Approx1Params(0.3, 0.3)
    a2 = approx2_from_approx1(a1)
    s1 = standard_from_approx1(a1)
    s2 = standard_from_approx2(a2)
    assert np.allclose(s1.as_tuple(), s2.as_tuple(), rtol=1e-13, atol=0)


@pytest.mark.parametrize("beta", [0.05, 0.2, 0.5])
def test_theorem1_squeeze_maps_approx1_onto_approx2(beta):
    kappa, Delta, gamma, delta = theorem1_parameters(beta)
    squeezed = apply_squeeze(standard_from_approx1(Approx1Params(kappa, Delta)),
                             math.sqrt(1 + kappa ** 2 * Delta ** 2))
    target = standard_from_approx2(Approx2Params(gamma, delta))
    assert np.allclose(squeezed.as_tuple(), target.as_tuple(), rtol=1e-14, atol=0)


def test_symmetric_remark1_recovers_theorem1_squeeze():
    for beta in (0.05, 0.2, 0.5):
        _, a2, a3, squeeze = theorem1_states(beta, CodeLabel(2, 0))
        t1 = theorem1_states(beta, CodeLabel(2, 0))[0]
        a1, zeta, a3_out = remark1_convert(a2)
        # Equal spike variances already: no squeeze, and kappa and Delta trade places.
        assert zeta == pytest.approx(1.0, rel=1e-14)
        assert a1.kappa == pytest.approx(t1.delta_sq_param, rel=1e-13)
        assert a1.delta_sq_param == pytest.approx(t1.kappa, rel=1e-13)
        assert squeeze == pytest.approx(math.sqrt(1 + (t1.kappa * t1.delta_sq_param) ** 2), rel=1e-14)
        assert a3_out.beta == pytest.approx(beta, rel=1e-13)
        assert a3_out.alpha == pytest.approx(a2.alpha, rel=1e-14)


@pytest.mark.parametrize("gamma, delta", [(0.1, 0.3), (0.6, 1.1), (1.3, 0.2)])
def test_remark1_product_consistency(gamma, delta):
    a2 = Approx2Params(gamma, delta)
    a1, _, _ = remark1_convert(a2)
    lam = a2.lam
    expected = (gamma * delta) ** 2 / (lam - (gamma * delta) ** 2 / 2) ** 2
    assert (a1.kappa * a1.delta_sq_param) ** 2 == pytest.approx(expected, rel=1e-14)
    assert a1.delta_sq_param ** 2 == pytest.approx(delta ** 2 / lam, rel=1e-14)


def test_db_examples():
    assert sigma2_from_db(10.0) == pytest.approx(0.05, rel=1e-15)
    assert sigma2_from_db(8.0) == pytest.approx(10 ** -0.8 / 2, rel=1e-15)
    with pytest.raises(ParameterRangeError):
        sigma2_from_db(0.0)
    with pytest.raises(ParameterRangeError):
        db_from_sigma2(0.5)


def test_narrowing_at_8db():
    p = SymmetricParams(sigma2_from_db(8.0)).to_standard()
    narrowing = 1 - p.gamma_spacing / (2 * ALPHA2)
    assert narrowing == pytest.approx(1 - math.sqrt(1 - 4 * p.sigma_q2 ** 2), rel=1e-12)
    assert 0.010 <= narrowing <= 0.015


# -- range checks ---------------------------------------------------------------

@pytest.mark.parametrize("factory", [
    lambda: Approx2Params(2.0, 1.0),
    lambda: Approx2Params(1.5, 1.5),
    lambda: Approx2Params(-0.1, 0.2),
    lambda: Approx1Params(0.0, 0.2),
    lambda: Approx3Params(0.0),
    lambda: StandardParams(0.5, 0.1, 1.0),
    lambda: StandardParams(0.1, 0.0, 1.0),
    lambda: StandardParams(0.1, 0.1, -1.0),
    lambda: SymmetricParams(0.5),
    lambda: CodeLabel(0, 0),
    lambda: CodeLabel(3, 3),
    lambda: CodeLabel(2, -1),
    lambda: apply_squeeze(StandardParams(0.1, 0.1, 1.0), 0.0),
    lambda: theorem1_parameters(0.0),
])
def test_out_of_range_inputs_raise(factory):
    with pytest.raises(ParameterRangeError):
        factory()


def test_default_alpha_is_square_lattice_unit():
    assert Approx3Params(0.1, label=CodeLabel(3, 1)).alpha == square_lattice_unit(3)
    assert square_lattice_unit(2) == pytest.approx(ALPHA2, rel=1e-15)


# -- invariants -------------------------------------------------------------------

positive = st.floats(0.05, 1.5)


@settings(max_examples=200, deadline=None)
@given(kappa=positive, Delta=st.floats(0.05, 0.9))
def test_approx1_standard_round_trip(kappa, Delta):
    a1 = Approx1Params(kappa, Delta)
    if kappa ** 2 / (1 + kappa ** 2 * Delta ** 2) >= 1:
        return  # momentum spike variance would leave (0, 1/2)
    back = approx1_from_standard(standard_from_approx1(a1))
    assert back.kappa == pytest.approx(kappa, rel=1e-14)
    assert back.delta_sq_param == pytest.approx(Delta, rel=1e-14)
    assert back.alpha == pytest.approx(a1.alpha, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(sq=st.floats(0.001, 0.49), sp=st.floats(0.001, 0.49), gamma=st.floats(0.5, 10.0),
       zeta=st.floats(0.5, 2.0))
def test_squeeze_round_trip_and_lambda_invariance(sq, sp, gamma, zeta):
    p = StandardParams(sq, sp, gamma)
    try:
        squeezed = apply_squeeze(p, zeta)
    except ParameterRangeError:
        return
    assert squeezed.Lambda == pytest.approx(p.Lambda, rel=1e-14)
    back = apply_squeeze(squeezed, 1.0 / zeta)
    assert np.allclose(back.as_tuple(), p.as_tuple(), rtol=1e-14, atol=0)


@settings(max_examples=200, deadline=None)
@given(gamma=st.floats(0.01, 3.0), delta=st.floats(0.01, 3.0))
def test_approx2_comb_is_narrowed(gamma, delta):
    if gamma * delta >= 2 or max(gamma, delta) ** 2 >= 1 + (gamma * delta) ** 2 / 4:
        return
    a2 = Approx2Params(gamma, delta)
    s = standard_from_approx2(a2)
    assert s.gamma_spacing < a2.alpha * a2.label.d


@pytest.mark.parametrize("beta", [0.05, 0.1, 0.2, 0.5])
@pytest.mark.parametrize("d", [2, 3])
def test_theorem1_standard_forms_coincide(beta, d):
    a1, a2, a3, squeeze = theorem1_states(beta, CodeLabel(d, 0))
    ref = np.array(standard_from_approx3(a3).as_tuple())
    for s in (apply_squeeze(standard_from_approx1(a1), squeeze), standard_from_approx2(a2)):
        assert np.max(np.abs(np.array(s.as_tuple()) - ref) / ref) < 1e-13


@settings(max_examples=100, deadline=None)
@given(kappa=st.floats(1e-4, 1.0), Delta=st.floats(1e-4, 0.9))
def test_approx1_to_approx2_round_trip(kappa, Delta):
    a1 = Approx1Params(kappa, Delta)
    a2 = approx2_from_approx1(a1)
    back, _, _ = remark1_convert(a2)
    assert back.kappa == pytest.approx(kappa, rel=1e-13)
    assert back.delta_sq_param == pytest.approx(Delta, rel=1e-13)
    assert back.alpha == pytest.approx(a1.alpha, rel=1e-13)


# -- amplitudes against the definitions ---------------------------------------------

def _compare_to_definition(params, q, brute):
    impl = approximation_amplitude(params, q, route="direct")
    ref = normalise_on_grid(brute, q)
    # The definition fixes the sign only up to a global phase.
    ref = ref * np.sign(ref[np.argmax(np.abs(ref))].real) * np.sign(impl[np.argmax(np.abs(impl))])
    return float(np.max(np.abs(impl - ref)) / np.max(np.abs(ref)))


@pytest.mark.parametrize("kappa, Delta, d, j", [(0.3, 0.25, 2, 0), (0.5, 0.4, 3, 2), (0.2, 0.2, 1, 0)])
def test_approx1_matches_definition(kappa, Delta, d, j):
    a1 = Approx1Params(kappa, Delta, label=CodeLabel(d, j))
    q = np.linspace(-25.0, 25.0, 20001)
    brute = approx1_brute(kappa, Delta, a1.alpha, d, j, q)
    assert _compare_to_definition(a1, q, brute) < 1e-10


@pytest.mark.parametrize("gamma, delta, d, j", [(0.3, 0.3, 2, 0), (0.4, 0.7, 3, 1), (0.9, 0.35, 2, 1)])
def test_approx2_matches_definition(gamma, delta, d, j):
    a2 = Approx2Params(gamma, delta, label=CodeLabel(d, j))
    q = np.linspace(-22.0, 22.0, 8001)
    brute = approx2_brute(gamma, delta, a2.alpha, d, j, q)
    assert np.max(np.abs(brute.imag)) < 1e-10 * np.max(np.abs(brute))
    assert _compare_to_definition(a2, q, brute.real) < 1e-9


@pytest.mark.parametrize("beta, d, j", [(0.2, 2, 0), (0.5, 3, 1), (0.1, 2, 1)])
def test_approx3_matches_definition(beta, d, j):
    a3 = Approx3Params(beta, label=CodeLabel(d, j))
    q = np.linspace(-20.0, 20.0, 8001)
    brute = approx3_brute(beta, a3.alpha, d, j, q)
    assert _compare_to_definition(a3, q, brute) < 1e-9
