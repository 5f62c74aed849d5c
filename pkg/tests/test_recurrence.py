"""Recurrence parameters: closed forms, Stieltjes extraction, monic scaling."""

import numpy as np
import pytest

from freejacobi import (
    JacobiParams,
    JacobiSzego,
    PositivityError,
    SpectralMeasure,
    build_P_lambda,
    build_Q_lambda,
    chebyshev_U,
    eval_three_term,
    extract_from_measure,
    monicize,
    moments,
    mu_lambda_theta,
    nu_lambda,
    nu_lambda_theta,
    stated_params,
    xi_lambda,
    xi_shift,
)


# ---------------------------------------------------------------------------
# Containers and closed forms


def test_jacobi_szego_rejects_nonpositive_weights():
    with pytest.raises(ValueError):
        JacobiSzego(np.zeros(3), np.array([0.25, 0.0]))
    js = JacobiSzego(np.zeros(3), np.array([0.25, 0.25]))
    assert js.n_levels() == 3


def test_stated_params_Q_lambda():
    js = stated_params("Q_lambda", lam=0.5)
    assert np.all(js.alpha == 0.0)
    assert js.omega[0] == pytest.approx(1.0 / 3.0)
    assert np.all(js.omega[1:] == 0.25)
    # At lam = 1 the first weight is 1/2, twice the tail value.
    assert stated_params("Q_lambda", lam=1.0).omega[0] == 0.5


def test_stated_params_P_lambda():
    js = stated_params("P_lambda", lam=0.5)
    assert js.alpha[0] == pytest.approx(xi_shift(0.5))
    assert np.all(js.alpha[1:] == 0.0)
    assert js.omega[0] == 0.5
    assert np.all(js.omega[1:] == 0.25)


def test_stated_params_Q_lambda_theta():
    js = stated_params("Q_lambda_theta", lam=0.6, theta=0.4)
    b = np.sqrt(0.6 / (0.6 * (1.0 - 0.24))) * (-0.2)
    assert js.alpha[0] == pytest.approx(b)
    assert js.omega[0] == pytest.approx(1.0 / (4.0 * 0.76))
    # theta = 1/2 collapses onto the Q_lambda parameters.
    half = stated_params("Q_lambda_theta", lam=0.7, theta=0.5)
    q = stated_params("Q_lambda", lam=0.7)
    np.testing.assert_allclose(half.alpha, q.alpha, atol=1e-15)
    np.testing.assert_allclose(half.omega, q.omega, atol=1e-15)


def test_stated_params_errors():
    with pytest.raises(ValueError):
        stated_params("cubic", lam=0.5)
    with pytest.raises(ValueError):
        stated_params("Q_lambda", lam=1.5)
    with pytest.raises(ValueError):
        stated_params("Q_lambda_theta", lam=0.5, theta=0.7)


# ---------------------------------------------------------------------------
# Extraction round trips


def test_extract_nu_lambda_matches_stated():
    for lam in (0.3, 0.7, 1.0):
        got = extract_from_measure(nu_lambda(lam), 6)
        want = stated_params("Q_lambda", lam=lam, n_max=6)
        np.testing.assert_allclose(got.alpha, want.alpha, atol=1e-9)
        np.testing.assert_allclose(got.omega, want.omega, atol=1e-9)


def test_extract_xi_lambda_matches_stated():
    for lam in (0.4, 0.8):
        got = extract_from_measure(xi_lambda(lam), 6)
        want = stated_params("P_lambda", lam=lam, n_max=6)
        np.testing.assert_allclose(got.alpha, want.alpha, atol=1e-9)
        np.testing.assert_allclose(got.omega, want.omega, atol=1e-9)


def test_extract_nu_lambda_theta_shift_is_half_tabulated():
    # The extracted alpha_0 is the measure's first moment; the tabulated
    # value is twice that whenever theta != 1/2.  Weights agree throughout.
    p = JacobiParams(0.5, 0.4)
    got = extract_from_measure(nu_lambda_theta(p), 5)
    want = stated_params("Q_lambda_theta", lam=p.lam, theta=p.theta, n_max=5)
    np.testing.assert_allclose(got.omega, want.omega, atol=1e-9)
    assert got.alpha[0] == pytest.approx(0.5 * want.alpha[0], abs=1e-9)
    assert got.alpha[0] == pytest.approx(
        moments(nu_lambda_theta(p), 1)[1], abs=1e-9)
    np.testing.assert_allclose(got.alpha[1:], 0.0, atol=1e-9)


def test_extract_mu_matches_affine_image():
    # mu and its symmetric image differ by x -> (2x-s)/d, so alpha maps
    # affinely and omega by d^2/4.
    p = JacobiParams(0.6, 0.35)
    s = p.x_plus + p.x_minus
    d = p.x_plus - p.x_minus
    mu_js = extract_from_measure(mu_lambda_theta(p), 4)
    nu_js = extract_from_measure(nu_lambda_theta(p), 4)
    np.testing.assert_allclose((2.0 * mu_js.alpha - s) / d, nu_js.alpha,
                               atol=1e-8)
    np.testing.assert_allclose(mu_js.omega * 4.0 / d ** 2, nu_js.omega,
                               rtol=1e-7)


def test_extract_zero_levels():
    js = extract_from_measure(nu_lambda(0.5), 0)
    assert js.alpha.shape == (1,)
    assert js.omega.shape == (0,)
    assert js.alpha[0] == pytest.approx(0.0, abs=1e-12)


def test_extract_rejects_negative_levels():
    with pytest.raises(ValueError):
        extract_from_measure(nu_lambda(0.5), -1)


def test_extract_positivity_collapse():
    # A single point mass supports only the degree-0 polynomial: the first
    # Stieltjes step annihilates p_1 and positivity is lost immediately.
    m = SpectralMeasure((0.3, 0.3), lambda x: np.zeros_like(x),
                        atoms=((0.3, 1.0),))
    with pytest.raises(PositivityError) as exc:
        extract_from_measure(m, 2)
    assert exc.value.last_reliable == 0


def test_extracted_params_evaluate_like_built_family():
    # eval_three_term on extracted parameters reproduces the monic built
    # family pointwise.
    lam = 0.5
    js = extract_from_measure(nu_lambda(lam), 5)
    monic, _ = monicize([build_Q_lambda(lam, n) for n in range(6)])
    xs = np.linspace(-0.9, 0.9, 7)
    for n in range(6):
        got = eval_three_term(js.alpha, js.omega, n, xs)
        np.testing.assert_allclose(got, monic[n](xs), atol=1e-8)


# ---------------------------------------------------------------------------
# Monic scaling


def test_monicize_chebyshev_scales():
    monic, scales = monicize([chebyshev_U(n) for n in range(6)])
    np.testing.assert_allclose(scales, 2.0 ** np.arange(6))
    for p in monic:
        assert p.leading == pytest.approx(1.0)


def test_monicize_family_scales():
    _, (s,) = monicize([build_Q_lambda(0.5, 5)])
    assert s == pytest.approx(32.0)
    _, (s,) = monicize([build_P_lambda(0.7, 3)])
    assert s == pytest.approx(8.0)


def test_monicize_rejects_zero():
    from freejacobi import Poly

    with pytest.raises(ValueError):
        monicize([Poly([0.0])])
