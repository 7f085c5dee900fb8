"""Tests for weak-value extraction, contrast correction and reconstruction."""

import math

import numpy as np
import pytest

from pathtomo.errors import (
    ContrastTooLowError,
    DomainError,
    NormalizationVanishesError,
    StrengthOutOfRangeError,
)
from pathtomo.extract import (
    PointEstimate,
    WeakValue,
    contrast_correct,
    estimate_from_dict,
    estimate_to_dict,
    extract_weak_value,
    propagate_errors,
    reconstruct_state,
)
from pathtomo.protocol import (
    IntensitySet,
    closed_form_fringes,
    ideal_intensities,
    normalization_factor,
    projector_weak_values,
    weak_value_sigma_z,
)
from pathtomo.qcore import make_path_state, path_x_plus, wrap_angle


def test_extraction_at_quarter_turn():
    wv = extract_weak_value(ideal_intensities(math.pi / 2, math.pi / 2, math.pi / 2), math.pi / 2)
    assert wv.re == pytest.approx(0.0, abs=1e-9)
    assert wv.im == pytest.approx(-1.0, abs=1e-9)
    assert wv.modulus == pytest.approx(1.0, abs=1e-9)


def test_extraction_is_strength_independent():
    weak_alpha = math.radians(15.0)
    wv = extract_weak_value(ideal_intensities(math.pi / 2, math.pi / 2, weak_alpha), weak_alpha)
    assert wv.re == pytest.approx(0.0, abs=1e-9)
    assert wv.im == pytest.approx(-1.0, abs=1e-9)
    assert wv.modulus == pytest.approx(1.0, abs=1e-9)


def test_symmetric_intensities_give_zero():
    i = IntensitySet(0.5, 0.0, 0.25, 0.25, 0.25, 0.25)
    wv = extract_weak_value(i, 0.8)
    assert wv.re == 0.0 and wv.im == 0.0 and wv.modulus == 0.0


def test_extraction_errors():
    i = ideal_intensities(math.pi / 2, 0.5, 0.5)
    with pytest.raises(StrengthOutOfRangeError):
        extract_weak_value(i, math.radians(0.5))
    with pytest.raises(StrengthOutOfRangeError):
        extract_weak_value(i, math.pi + 0.01)
    bad = IntensitySet(0.0, 0.1, 0.2, 0.2, 0.2, 0.2)
    with pytest.raises(NormalizationVanishesError):
        extract_weak_value(bad, 0.5)


def test_contrast_correct_identity_and_bounds():
    i = ideal_intensities(math.pi / 2, 0.7, 0.9)
    assert contrast_correct(i, 1.0) == i
    with pytest.raises(ContrastTooLowError):
        contrast_correct(i, 0.05)
    with pytest.raises(DomainError):
        contrast_correct(i, 1.2)


def test_contrast_correct_inverts_visibility_model_with_offsets():
    """With per-direction fringe offsets the correction is exact for every alpha."""
    contrast = 0.7
    for alpha in (math.radians(15.0), 0.9, math.pi / 2):
        for phi in np.linspace(-2.5, 2.5, 9):
            dimmed = closed_form_fringes(phi, 0.0, alpha, contrast)
            full = closed_form_fringes(phi, 0.0, alpha, 1.0)
            c2, s2 = math.cos(alpha / 2) ** 2, math.sin(alpha / 2) ** 2
            offsets = IntensitySet(c2 / 2, s2 / 2, 0.25, 0.25, 0.25, 0.25)
            corrected = contrast_correct(dimmed, contrast, offsets=offsets)
            np.testing.assert_allclose(corrected.as_array(), full.as_array(), atol=1e-12)


def test_contrast_correct_pair_mean_fallback():
    contrast = 0.7
    # exact at alpha = 90 deg, where the pair sums carry no fringe
    dimmed = closed_form_fringes(0.8, 0.0, math.pi / 2, contrast)
    full = closed_form_fringes(0.8, 0.0, math.pi / 2, 1.0)
    corrected = contrast_correct(dimmed, contrast)
    np.testing.assert_allclose(corrected.as_array(), full.as_array(), atol=1e-12)
    # pair means preserved by construction, at any alpha
    dimmed = closed_form_fringes(0.8, 0.0, 0.4, contrast)
    corrected = contrast_correct(dimmed, contrast)
    np.testing.assert_allclose(corrected.pair_sums(), dimmed.pair_sums(), atol=1e-12)


def test_reconstruct_state_examples():
    est = reconstruct_state(WeakValue(0.0, -1.0, 1.0))
    assert est.nu == pytest.approx(1.0, abs=1e-12)
    assert est.theta_m == pytest.approx(math.pi / 2, abs=1e-12)
    assert est.phi_m == pytest.approx(math.pi / 2, abs=1e-12)
    plus, minus = projector_weak_values(-1j)
    assert plus == pytest.approx((1 - 1j) / 2) and minus == pytest.approx((1 + 1j) / 2)

    est = reconstruct_state(WeakValue(0.0, 0.0, 0.0))
    assert est.nu == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert est.theta_m == pytest.approx(math.pi / 2, abs=1e-12)
    assert est.phi_m == pytest.approx(0.0, abs=1e-12)

    est = reconstruct_state(WeakValue(1.0, 0.0, 1.0))
    assert est.c_plus == pytest.approx(1.0)
    assert est.c_minus == pytest.approx(0.0)
    assert est.theta_m == pytest.approx(0.0)


def test_reconstructed_amplitudes_are_normalized_with_real_c_plus():
    rng = np.random.default_rng(20)
    for _ in range(100):
        wv = WeakValue(rng.normal(scale=2.0), rng.normal(scale=2.0), 0.0)
        est = reconstruct_state(wv)
        assert abs(est.c_plus) ** 2 + abs(est.c_minus) ** 2 == pytest.approx(1.0, abs=1e-9)
        assert est.c_plus.imag == pytest.approx(0.0, abs=1e-12)
        assert est.c_plus.real >= 0.0
        assert est.phi_m == pytest.approx(
            wrap_angle(np.angle(est.c_minus) - np.angle(est.c_plus)), abs=1e-9
        )


def test_round_trip_recovers_the_preselected_state():
    rng = np.random.default_rng(21)
    for _ in range(200):
        theta = rng.uniform(0.1, math.pi - 0.1)
        phi = rng.uniform(-math.pi + 0.1, math.pi - 0.1)
        alpha = rng.uniform(math.radians(5.0), math.pi / 2)
        wv = extract_weak_value(ideal_intensities(theta, phi, alpha), alpha)
        est = reconstruct_state(wv)
        assert est.theta_m == pytest.approx(theta, abs=1e-9)
        assert abs(wrap_angle(est.phi_m - phi)) < 1e-9
        assert est.nu == pytest.approx(normalization_factor(theta, phi), abs=1e-9)
        # noiseless modulus channel agrees with |re + i im|
        assert math.hypot(wv.re, wv.im) == pytest.approx(wv.modulus, abs=1e-9)
        # and both match the defining formula
        analytic = weak_value_sigma_z(make_path_state(theta, phi), path_x_plus())
        assert wv.re == pytest.approx(analytic.real, abs=1e-9)
        assert wv.im == pytest.approx(analytic.imag, abs=1e-9)


def test_propagation_zero_in_zero_out():
    i = ideal_intensities(math.pi / 2, 0.9, 0.7)
    zeros = IntensitySet(0, 0, 0, 0, 0, 0)
    wv, est = propagate_errors(i, zeros, 0.7)
    assert (wv.sigma_re, wv.sigma_im, wv.sigma_modulus) == (0.0, 0.0, 0.0)
    assert (est.sigma_nu, est.sigma_theta, est.sigma_phi) == (0.0, 0.0, 0.0)


def test_propagation_is_first_order_linear_in_sigmas():
    i = ideal_intensities(math.pi / 2, 0.9, 0.7)
    sig = IntensitySet(0.01, 0.012, 0.008, 0.009, 0.011, 0.01)
    scaled = IntensitySet(*(3.0 * s for s in sig.as_array()))
    wv1, est1 = propagate_errors(i, sig, 0.7)
    wv3, est3 = propagate_errors(i, scaled, 0.7)
    assert wv3.sigma_re == pytest.approx(3.0 * wv1.sigma_re, rel=1e-12)
    assert wv3.sigma_im == pytest.approx(3.0 * wv1.sigma_im, rel=1e-12)
    assert wv3.sigma_modulus == pytest.approx(3.0 * wv1.sigma_modulus, rel=1e-12)
    assert est3.sigma_nu == pytest.approx(3.0 * est1.sigma_nu, rel=1e-12)
    assert est3.sigma_theta == pytest.approx(3.0 * est1.sigma_theta, rel=1e-12)
    assert est3.sigma_phi == pytest.approx(3.0 * est1.sigma_phi, rel=1e-12)


def _numeric_sigmas(i: IntensitySet, sigmas: IntensitySet, alpha: float) -> dict:
    """Independent oracle: central-difference Jacobian through the exact maps."""

    def outputs(vec):
        wv = extract_weak_value(IntensitySet(*vec), alpha)
        est = reconstruct_state(wv)
        return np.array([wv.re, wv.im, wv.modulus, est.nu, est.theta_m, est.phi_m])

    base = i.as_array()
    sig = sigmas.as_array()
    jac = np.zeros((6, 6))
    for j in range(6):
        h = 1e-7 * max(base[j], 0.01)
        up, down = base.copy(), base.copy()
        up[j] += h
        down[j] -= h
        jac[:, j] = (outputs(up) - outputs(down)) / (2.0 * h)
    out = np.sqrt((jac**2) @ sig**2)
    return dict(zip(["re", "im", "modulus", "nu", "theta", "phi"], out))


def test_analytic_jacobian_matches_finite_differences():
    rng = np.random.default_rng(22)
    for _ in range(25):
        theta = rng.uniform(0.4, math.pi - 0.4)
        phi = rng.uniform(-2.4, 2.4)
        alpha = rng.uniform(math.radians(10.0), math.pi / 2)
        i = ideal_intensities(theta, phi, alpha)
        sig = IntensitySet(*(rng.uniform(0.001, 0.01, size=6)))
        wv, est = propagate_errors(i, sig, alpha)
        oracle = _numeric_sigmas(i, sig, alpha)
        assert wv.sigma_re == pytest.approx(oracle["re"], rel=1e-4)
        assert wv.sigma_im == pytest.approx(oracle["im"], rel=1e-4)
        if i.ix_minus > 1e-6:  # analytic gradient floors the dark point
            assert wv.sigma_modulus == pytest.approx(oracle["modulus"], rel=1e-4)
        assert est.sigma_nu == pytest.approx(oracle["nu"], rel=1e-4, abs=1e-12)
        assert est.sigma_theta == pytest.approx(oracle["theta"], rel=1e-4)
        assert est.sigma_phi == pytest.approx(oracle["phi"], rel=1e-4)


def test_weak_point_noisier_than_strong_point():
    """sigma_im at alpha = 15 deg exceeds the 90 deg value for equal count totals."""
    total = 1000.0
    sigmas_by_alpha = {}
    for alpha in (math.radians(15.0), math.pi / 2):
        i = ideal_intensities(math.pi / 2, math.pi / 2, alpha)
        sig = IntensitySet(*np.sqrt(i.as_array() * total) / total)
        wv, _ = propagate_errors(i, sig, alpha)
        sigmas_by_alpha[alpha] = wv.sigma_im
    ratio = sigmas_by_alpha[math.radians(15.0)] / sigmas_by_alpha[math.pi / 2]
    assert 1.5 < ratio < 4.0


def test_projector_weak_values_sum_to_one():
    rng = np.random.default_rng(23)
    for _ in range(500):
        w = complex(rng.normal(scale=3), rng.normal(scale=3))
        plus, minus = projector_weak_values(w)
        total = plus + minus
        assert total.imag == 0.0  # complement construction cancels exactly
        assert abs(total.real - 1.0) <= 2.0**-52 * (1.0 + abs(w))


def test_point_estimate_json_round_trip():
    wv = extract_weak_value(ideal_intensities(math.pi / 2, 0.8, 0.9), 0.9)
    est = reconstruct_state(wv)
    record = PointEstimate(
        phi=0.8, alpha=0.9, weak_value=wv, state=est, contrast=0.74, contrast_sigma=0.01,
        regime_label="weak",
    )
    assert estimate_from_dict(estimate_to_dict(record)) == record
