import math

import numpy as np
import pytest

from qscissor.analysis import (
    FringeScan,
    QutritPathState,
    amplified_path_state,
    fit_visibility,
    fringe_scan,
    hom_coincidence,
    log_negativity,
    log_negativity_schmidt,
    negativity_curve,
    path_entangled_state,
)
from qscissor.scissor import SUCCESS_PATTERNS, herald_phase


def wrapped_angle_difference(a, b):
    return (a - b + np.pi) % (2 * np.pi) - np.pi


# ---------------------------------------------------------------------------
# path states
# ---------------------------------------------------------------------------


def test_path_state_extremes():
    assert path_entangled_state(0.0).coefficients == (1.0, 0.0, 0.0)
    assert path_entangled_state(1.0).coefficients[2] == 1.0


def test_path_state_balanced_split():
    c = path_entangled_state(0.5).coefficients
    assert np.allclose(np.abs(c), [0.5, math.sqrt(0.5), 0.5])


def test_path_state_ninety_ten():
    c = path_entangled_state(0.1).coefficients
    assert np.allclose(np.abs(c), [0.9, 0.42426406871192845, 0.1])


def test_path_state_is_normalized_for_all_sigma():
    for sigma in np.linspace(0.0, 1.0, 21):
        c = path_entangled_state(sigma).coefficients
        assert sum(abs(x) ** 2 for x in c) == pytest.approx(1.0, abs=1e-12)


def test_amplified_path_state_unit_gain():
    for sigma in (0.1, 0.25, 0.5):
        assert np.allclose(
            amplified_path_state(sigma, 1.0).coefficients,
            path_entangled_state(sigma).coefficients,
        )


@pytest.mark.parametrize("sigma,g", [(0.1, 3.0), (0.2, 2.0), (0.5, 1.0)])
def test_amplified_path_state_balanced_at_matched_gain(sigma, g):
    assert g**2 == pytest.approx((1 - sigma) / sigma)
    c = np.abs(amplified_path_state(sigma, g).coefficients)
    assert np.allclose(c, [0.5, math.sqrt(0.5), 0.5], atol=1e-12)


def test_qutrit_state_rejects_unnormalized():
    with pytest.raises(ValueError, match="normalized"):
        QutritPathState((1.0, 1.0, 0.0))


# ---------------------------------------------------------------------------
# logarithmic negativity
# ---------------------------------------------------------------------------


def test_negativity_zero_for_product_states():
    assert log_negativity(path_entangled_state(0.0)) == pytest.approx(0.0, abs=1e-12)
    assert log_negativity(path_entangled_state(1.0)) == pytest.approx(0.0, abs=1e-12)


def test_negativity_reference_values():
    assert log_negativity(path_entangled_state(0.1)) == pytest.approx(
        1.0204, abs=5e-4
    )
    assert log_negativity(amplified_path_state(0.1, 3.0)) == pytest.approx(
        1.5431, abs=5e-4
    )


def test_partial_transpose_matches_schmidt_shortcut():
    rng = np.random.default_rng(19)
    for _ in range(25):
        c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        c = c / np.linalg.norm(c)
        state = QutritPathState(tuple(c))
        assert log_negativity(state) == pytest.approx(
            log_negativity_schmidt(state), abs=1e-10
        )


def test_balanced_peak_value_is_sigma_independent():
    expected = 2.0 * np.log2(1.0 + math.sqrt(0.5))
    for sigma in (0.1, 0.2, 0.5):
        g_star = math.sqrt((1 - sigma) / sigma)
        assert log_negativity(amplified_path_state(sigma, g_star)) == pytest.approx(
            expected, abs=1e-12
        )


def test_negativity_curve_peaks_at_matched_gain():
    g_grid = np.linspace(0.5, 4.0, 141)
    for sigma, g_star in [(0.2, 2.0), (0.1, 3.0)]:
        curve = negativity_curve(sigma, g_grid)
        post = np.array([row[2] for row in curve])
        peak_g = g_grid[np.argmax(post)]
        assert abs(peak_g - g_star) <= g_grid[1] - g_grid[0]
        pre = {row[1] for row in curve}
        assert len(pre) == 1  # pre-amplification value is constant in g


def test_negativity_curve_sigma_half_peaks_at_unit_gain():
    curve = negativity_curve(0.5, np.linspace(0.5, 2.0, 151))
    g, pre, post = max(curve, key=lambda row: row[2])
    assert g == pytest.approx(1.0, abs=0.011)
    assert post == pytest.approx(pre, abs=1e-9)


def test_negativity_monotone_below_matched_gain():
    sigma = 0.1
    grid = np.linspace(1.0, 3.0, 50)
    values = [log_negativity(amplified_path_state(sigma, g)) for g in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# HOM curve
# ---------------------------------------------------------------------------


def test_hom_values():
    assert hom_coincidence(0.0) == pytest.approx(1.0)
    assert hom_coincidence(math.pi / 8) == pytest.approx(0.0, abs=1e-15)
    assert hom_coincidence(math.pi / 16) == pytest.approx(0.5)


def test_hom_identity_on_grid():
    thetas = np.linspace(0.0, np.pi, 1000)
    for theta in thetas:
        assert abs(hom_coincidence(theta) - math.cos(4 * theta) ** 2) < 1e-15


# ---------------------------------------------------------------------------
# fringes
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("sigma,g", [(0.5, 1.0), (0.2, 2.0), (0.1, 3.0)])
def test_balanced_gain_gives_unit_visibility(sigma, g):
    fit = fit_visibility(fringe_scan(sigma, g))
    assert not fit.degenerate
    assert fit.visibility == pytest.approx(1.0, abs=1e-9)


def test_under_amplified_visibility_matches_imbalance():
    # with sigma = 0.1 and g = 2 the outer path amplitudes are 0.9 and 0.4,
    # so the expected contrast is 2ab / (a^2 + b^2)
    a, b = 0.9, 4.0 * 0.1
    expected = 2 * a * b / (a**2 + b**2)
    fit = fit_visibility(fringe_scan(0.1, 2.0))
    assert fit.visibility == pytest.approx(expected, abs=1e-9)
    assert fit.visibility < 1.0


def test_fringe_offsets_step_by_two_thirds_pi():
    offsets = [
        fit_visibility(fringe_scan(0.1, 3.0, pattern)).offset
        for pattern in SUCCESS_PATTERNS
    ]
    d01 = wrapped_angle_difference(offsets[1], offsets[0])
    d12 = wrapped_angle_difference(offsets[2], offsets[1])
    assert abs(abs(d01) - 2 * np.pi / 3) < 1e-6
    assert abs(abs(d12) - 2 * np.pi / 3) < 1e-6
    # offsets track twice the herald phase (two-photon fringe)
    for pattern, offset in zip(SUCCESS_PATTERNS, offsets):
        predicted = (2.0 * herald_phase(pattern) + offsets[0]) % (2 * np.pi)
        assert abs(wrapped_angle_difference(offset, predicted)) < 1e-6


def test_fringe_scan_validates_arguments():
    with pytest.raises(ValueError):
        fringe_scan(0.0, 1.0)
    with pytest.raises(ValueError):
        fringe_scan(0.5, 1.0, (1, 1, 1))


def test_fringe_values_nonnegative_and_periodic():
    scan = fringe_scan(0.3, 1.0)
    assert np.all(scan.values >= -1e-12)
    assert scan.values[0] == pytest.approx(scan.values[-1], abs=1e-10)


# ---------------------------------------------------------------------------
# visibility fitting
# ---------------------------------------------------------------------------


def test_fit_recovers_synthetic_full_contrast():
    phases = np.linspace(0.0, 2 * np.pi, 61)
    scan = FringeScan(phases, 0.5 + 0.5 * np.cos(phases), (1, 1, 0), wavenumber=1)
    fit = fit_visibility(scan)
    assert fit.visibility == pytest.approx(1.0, abs=1e-12)
    assert fit.offset == pytest.approx(0.0, abs=1e-9)


def test_fit_recovers_synthetic_half_contrast_with_offset():
    phases = np.linspace(0.0, 2 * np.pi, 61)
    scan = FringeScan(
        phases, 0.5 + 0.25 * np.cos(phases - 1.0), (1, 1, 0), wavenumber=1
    )
    fit = fit_visibility(scan)
    assert fit.visibility == pytest.approx(0.5, abs=1e-12)
    assert wrapped_angle_difference(fit.offset, -1.0) == pytest.approx(0.0, abs=1e-9)
    assert fit.mean == pytest.approx(0.5, abs=1e-12)
    assert fit.amplitude == pytest.approx(0.25, abs=1e-12)


def test_fit_flags_constant_scan():
    phases = np.linspace(0.0, 2 * np.pi, 20)
    fit = fit_visibility(FringeScan(phases, np.full(20, 0.3), (1, 1, 0), wavenumber=1))
    assert fit.degenerate
    assert fit.visibility == 0.0


def test_fit_needs_a_full_period():
    phases = np.linspace(0.0, 1.0, 30)
    scan = FringeScan(phases, np.cos(phases) + 2.0, (1, 1, 0), wavenumber=1)
    with pytest.raises(ValueError, match="period"):
        fit_visibility(scan)


def test_fringe_scan_validates_grid():
    with pytest.raises(ValueError, match="increasing"):
        FringeScan(np.array([0.0, 0.0, 1.0]), np.zeros(3), (1, 1, 0))
