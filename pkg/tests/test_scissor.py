import math

import numpy as np
import pytest

from qscissor.fock import MixedState, PureState, fidelity, fock_state, vacuum
from qscissor.scissor import (
    SUCCESS_PATTERNS,
    GainSetting,
    amplified_mixture_closed_form,
    gain_to_transmittance,
    herald_phase,
    heralded_amplify,
    ideal_scissor_transform,
    lossy_two_photon_input,
    measured_two_photon_gain,
    pnr_coincidence_probability,
    run_two_scissor,
    simulate_gain_measurement,
    two_photon_gain,
)


def random_qutrit_input(rng):
    amps = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    return PureState(1, {(k,): amps[k] for k in range(3)}, cutoff=2).normalized()


def expected_output(input_state, g, pattern):
    """Closed-form prediction with the pattern's herald phase applied."""
    coeffs = np.array([input_state.amplitude((k,)) for k in range(3)])
    ideal = ideal_scissor_transform(coeffs, g)
    phase = herald_phase(pattern)
    phased = ideal * np.exp(1j * phase * np.arange(3))
    return PureState(1, {(k,): phased[k] for k in range(3)}, cutoff=2, prune=0.0)


# ---------------------------------------------------------------------------
# gain setting
# ---------------------------------------------------------------------------


def test_gain_to_transmittance_values():
    assert gain_to_transmittance(0.0) == pytest.approx(1.0)
    assert gain_to_transmittance(1.0) == pytest.approx(0.5)
    assert gain_to_transmittance(3.0) == pytest.approx(0.1)


def test_gain_to_transmittance_rejects_negative():
    with pytest.raises(ValueError):
        gain_to_transmittance(-0.5)


def test_gain_setting_round_trip():
    for g in (0.25, 1.0, 2.5, 7.0):
        eta = GainSetting(g).transmittance
        assert g**2 == pytest.approx((1 - eta) / eta, abs=1e-12)


# ---------------------------------------------------------------------------
# herald phases
# ---------------------------------------------------------------------------


def test_herald_phase_table():
    assert herald_phase((1, 1, 0)) == 0.0
    assert herald_phase((1, 0, 1)) == pytest.approx(2 * math.pi / 3)
    assert herald_phase((0, 1, 1)) == pytest.approx(4 * math.pi / 3)


def test_herald_phase_rejects_failure_patterns():
    with pytest.raises(ValueError):
        herald_phase((2, 0, 0))
    with pytest.raises(ValueError):
        herald_phase((1, 1, 1))


def wrapped_angle_difference(a, b):
    """Signed difference between two angles folded into (-pi, pi]."""
    return (a - b + np.pi) % (2 * np.pi) - np.pi


def test_simulated_herald_phases_match_table():
    psi = PureState(1, {(0,): 1.0, (1,): 1.0, (2,): 1.0}, cutoff=2).normalized()
    for pattern in SUCCESS_PATTERNS:
        outcome = run_two_scissor(psi, 2.0, pattern)
        out = outcome.output.components[0][1]
        c = [out.amplitude((k,)) for k in range(3)]
        step = herald_phase(pattern)
        assert abs(wrapped_angle_difference(np.angle(c[1] / c[0]), step)) < 1e-9
        assert abs(wrapped_angle_difference(np.angle(c[2] / c[1]), step)) < 1e-9


# ---------------------------------------------------------------------------
# ideal transform
# ---------------------------------------------------------------------------


def test_ideal_transform_unit_gain_is_identity():
    c = np.array([0.5, 0.5j, -0.5, 0.5])[:3]
    c = c / np.linalg.norm(c)
    out = ideal_scissor_transform(c, 1.0)
    assert np.allclose(out, c)


def test_ideal_transform_scales_by_gain_powers():
    out = ideal_scissor_transform([1.0, 1.0, 1.0], 3.0)
    expected = np.array([1.0, 3.0, 9.0]) / np.linalg.norm([1.0, 3.0, 9.0])
    assert np.allclose(out, expected)


def test_ideal_transform_truncates_high_components():
    out = ideal_scissor_transform([1.0, 0.0, 0.0, 5.0], 2.0)
    assert out.shape == (3,)
    assert np.allclose(out, [1.0, 0.0, 0.0])


def test_ideal_transform_degenerate_input():
    with pytest.raises(ValueError, match="no support"):
        ideal_scissor_transform([0.0, 0.0, 0.0, 1.0], 2.0)


def test_ideal_transform_zero_gain_keeps_vacuum_only():
    out = ideal_scissor_transform([0.6, 0.8, 0.0], 0.0)
    assert np.allclose(out, [1.0, 0.0, 0.0])


# ---------------------------------------------------------------------------
# full circuit vs closed form
# ---------------------------------------------------------------------------


def test_vacuum_is_fixed_point():
    outcome = run_two_scissor(vacuum(1, cutoff=2), 2.0)
    out = outcome.output.components[0][1]
    assert abs(out.amplitude((0,))) == pytest.approx(1.0)
    assert outcome.truncation_weight == 0.0


def test_equal_superposition_gain_two():
    psi = PureState(1, {(0,): 1.0, (1,): 1.0, (2,): 1.0}, cutoff=2).normalized()
    outcome = run_two_scissor(psi, 2.0, (1, 1, 0))
    out = outcome.output.components[0][1]
    mags = np.array([abs(out.amplitude((k,))) for k in range(3)])
    assert mags / mags[0] == pytest.approx([1.0, 2.0, 4.0], abs=1e-10)
    assert fidelity(out, expected_output(psi, 2.0, (1, 1, 0))) > 1 - 1e-10


@pytest.mark.parametrize("g", [0.5, 1.0, 2.0, 3.0])
def test_oracle_equivalence_random_inputs(g):
    rng = np.random.default_rng(int(g * 100))
    for _ in range(25):
        psi = random_qutrit_input(rng)
        for pattern in SUCCESS_PATTERNS:
            outcome = run_two_scissor(psi, g, pattern)
            out = outcome.output.components[0][1]
            assert fidelity(out, expected_output(psi, g, pattern)) > 1 - 1e-9


def test_success_probability_symmetric_across_patterns():
    rng = np.random.default_rng(61)
    psi = random_qutrit_input(rng)
    probs = [run_two_scissor(psi, 1.7, p).success_probability for p in SUCCESS_PATTERNS]
    assert probs[0] == pytest.approx(probs[1], abs=1e-12)
    assert probs[0] == pytest.approx(probs[2], abs=1e-12)
    mags = [
        [abs(run_two_scissor(psi, 1.7, p).output.components[0][1].amplitude((k,)))
         for k in range(3)]
        for p in SUCCESS_PATTERNS
    ]
    assert np.allclose(mags[0], mags[1], atol=1e-10)
    assert np.allclose(mags[0], mags[2], atol=1e-10)


def test_rejects_failure_pattern_and_bad_cutoff():
    with pytest.raises(ValueError, match="success pattern"):
        run_two_scissor(vacuum(1, cutoff=2), 1.0, (2, 0, 0))
    with pytest.raises(ValueError, match="cutoff"):
        run_two_scissor(vacuum(1, cutoff=6), 1.0)


def test_three_photon_component_cannot_herald():
    # a pure |3> can never satisfy a two-photon herald
    with pytest.raises(ValueError, match="zero probability"):
        run_two_scissor(fock_state((3,), cutoff=3), 2.0)


def test_truncation_weight_reported_and_output_clean():
    psi = PureState(
        1, {(0,): 1.0, (1,): 1.0, (3,): 1.0}, cutoff=3
    ).normalized()
    outcome = run_two_scissor(psi, 1.5)
    assert outcome.truncation_weight == pytest.approx(1.0 / 3.0)
    out = outcome.output.components[0][1]
    assert out.amplitude((3,)) == 0.0
    # the conditional output is the renormalized amplified 0..2 part
    expected = ideal_scissor_transform([1.0, 1.0, 0.0], 1.5)
    mags = [abs(out.amplitude((k,))) for k in range(3)]
    assert mags == pytest.approx(list(np.abs(expected)), abs=1e-10)


def test_mixture_linearity():
    rng = np.random.default_rng(71)
    pure_a = random_qutrit_input(rng)
    pure_b = random_qutrit_input(rng)
    mix = MixedState([(0.3, pure_a), (0.7, pure_b)])
    outcome = run_two_scissor(mix, 2.0)
    pa = run_two_scissor(pure_a, 2.0)
    pb = run_two_scissor(pure_b, 2.0)
    assert outcome.success_probability == pytest.approx(
        0.3 * pa.success_probability + 0.7 * pb.success_probability, abs=1e-12
    )
    expected = (
        0.3 * pa.success_probability * pa.output.density_matrix()
        + 0.7 * pb.success_probability * pb.output.density_matrix()
    ) / outcome.success_probability
    assert np.max(np.abs(outcome.output.density_matrix() - expected)) < 1e-10


def test_success_probability_prefactor_scales_as_inverse_g4():
    # the vacuum success probability carries the protocol's g^-4 price tag
    p20 = run_two_scissor(vacuum(1, cutoff=2), 20.0).success_probability
    p40 = run_two_scissor(vacuum(1, cutoff=2), 40.0).success_probability
    assert p20 * 20.0**4 == pytest.approx(2.0 / 9.0, rel=2e-2)
    assert abs(p40 * 40.0**4 - p20 * 20.0**4) / (p20 * 20.0**4) < 0.01


def test_g_zero_edge_truncates_to_vacuum():
    psi = PureState(1, {(0,): 0.6, (1,): 0.8}, cutoff=2)
    outcome = run_two_scissor(psi, 0.0)
    out = outcome.output.components[0][1]
    assert abs(out.amplitude((0,))) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# closed-form mixture, gain and purification
# ---------------------------------------------------------------------------


def test_lossy_input_weights():
    mix = lossy_two_photon_input(0.3)
    weights = mix.photon_number_weights(0)
    assert weights == pytest.approx([0.49, 0.42, 0.09])


def test_amplified_mixture_unit_gain_matches_input():
    tau = 0.37
    weights, normalization = amplified_mixture_closed_form(tau, 1.0)
    assert normalization == pytest.approx(1.0, abs=1e-12)
    assert weights == pytest.approx(
        [(1 - tau) ** 2, 2 * tau * (1 - tau), tau**2], abs=1e-12
    )


def test_amplified_mixture_lossless_channel():
    weights, _ = amplified_mixture_closed_form(1.0, 2.5)
    assert weights == pytest.approx([0.0, 0.0, 1.0])


def test_amplified_mixture_frozen_values():
    weights, normalization = amplified_mixture_closed_form(0.05, 3.0)
    assert normalization == pytest.approx(1.0 / 1.96, abs=1e-12)
    assert weights * 1.96 == pytest.approx([0.9025, 0.855, 0.2025], abs=1e-12)


def test_two_photon_gain_values():
    assert two_photon_gain(0.4, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert two_photon_gain(0.05, 3.0) == pytest.approx(81.0 / 1.96, abs=1e-12)
    assert two_photon_gain(0.05, 1e6) == pytest.approx(400.0, rel=1e-9)


def test_two_photon_gain_rejects_tau_zero():
    with pytest.raises(ValueError, match="two-photon"):
        two_photon_gain(0.0, 2.0)


def test_gain_monotone_in_g():
    gains = [two_photon_gain(0.05, g) for g in np.linspace(0.0, 50.0, 200)]
    assert all(b >= a - 1e-12 for a, b in zip(gains, gains[1:]))


def test_gain_ordering_in_tau():
    for g in np.linspace(1.0, 30.0, 30):
        assert two_photon_gain(0.05, g) >= two_photon_gain(0.1, g) - 1e-12


def test_purification_two_photon_weight_monotone():
    weights = [amplified_mixture_closed_form(0.05, g)[0][2] for g in np.linspace(0, 80, 161)]
    assert all(b >= a - 1e-15 for a, b in zip(weights, weights[1:]))
    assert weights[-1] > 0.99


def test_simulated_mixture_matches_closed_form():
    tau, g = 0.05, 2.0
    outcome = run_two_scissor(lossy_two_photon_input(tau), g)
    simulated = outcome.output.photon_number_weights(0, max_n=2)
    expected, _ = amplified_mixture_closed_form(tau, g)
    assert simulated == pytest.approx(list(expected), abs=1e-12)


# ---------------------------------------------------------------------------
# counting-model gain measurement
# ---------------------------------------------------------------------------


def test_pnr_pair_separates_half_the_time():
    assert pnr_coincidence_probability(fock_state((2,), cutoff=2)) == pytest.approx(0.5)
    assert pnr_coincidence_probability(fock_state((1,), cutoff=2)) == 0.0


def test_measured_gain_unit_gain_is_one():
    assert measured_two_photon_gain(0.2, 1.0) == pytest.approx(1.0, abs=1e-9)


def test_measured_gain_matches_closed_form():
    for tau, g in [(0.05, 2.0), (0.1, 3.0), (0.5, 1.5)]:
        assert measured_two_photon_gain(tau, g) == pytest.approx(
            two_photon_gain(tau, g), abs=1e-9 * two_photon_gain(tau, g)
        )


def test_gain_measurement_off_normalization_cancels_heralds():
    off = simulate_gain_measurement(0.3, 2.0, with_amplifier=False)
    assert off.rho22_estimate == pytest.approx(0.09, abs=1e-12)
    assert off.herald_probability == pytest.approx(2.0 / 9.0, abs=1e-12)
