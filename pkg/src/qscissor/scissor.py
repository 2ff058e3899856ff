"""The two-photon quantum-scissor heralded amplifier.

The amplifier teleports a single-mode field onto the reflected arm of a
two-photon resource state while multiplying every photon-number amplitude
by a programmable gain: ``c_k -> g^k c_k`` for k = 0, 1, 2 (components above
two photons cannot satisfy the herald and are cut off).  The circuit is

* resource |2> split on a beam splitter with transmittance ``eta(g)``;
  the reflected arm becomes the output mode,
* transmitted arm, the input field, and one vacuum port mixed in a
  three-mode Fourier interferometer,
* success heralded by detecting exactly two photons across the three
  interferometer outputs in one of the patterns (1,1,0), (1,0,1), (0,1,1).

Each success pattern imprints a fixed extra phase per photon-number step
(0, 2pi/3 or 4pi/3 under this package's splitter convention) that a
receiver can undo locally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import (
    beam_splitter_unitary,
    embed_unitary,
    qft_unitary,
    apply_mode_unitary,
)
from .fock import (
    MixedState,
    PureState,
    fock_state,
    project_pattern,
    tensor,
    vacuum,
)

#: Herald patterns that flag a successful two-photon amplification.
SUCCESS_PATTERNS = ((1, 1, 0), (1, 0, 1), (0, 1, 1))

#: Phase of the resource splitter.  This choice makes the (1,1,0) herald
#: phase exactly zero; the other two patterns then land on 2pi/3 and 4pi/3.
_RESOURCE_SPLITTER_PHASE = -math.pi / 3.0

#: Largest input-state cutoff the full simulation accepts by default.
MAX_INPUT_CUTOFF = 4


def gain_to_transmittance(g: float) -> float:
    """Splitter transmittance eta = 1 / (1 + g^2) that programs gain g."""
    if g < 0.0:
        raise ValueError(f"gain must be non-negative, got {g}")
    return 1.0 / (1.0 + g * g)


@dataclass(frozen=True)
class GainSetting:
    """Amplitude gain together with the derived splitter transmittance."""

    g: float

    def __post_init__(self):
        if self.g < 0.0:
            raise ValueError(f"gain must be non-negative, got {self.g}")

    @property
    def transmittance(self) -> float:
        return gain_to_transmittance(self.g)


def herald_phase(pattern: Sequence[int]) -> float:
    """Phase acquired per photon-number step for a given success pattern."""
    pattern = tuple(int(n) for n in pattern)
    phases = {
        (1, 1, 0): 0.0,
        (1, 0, 1): 2.0 * math.pi / 3.0,
        (0, 1, 1): 4.0 * math.pi / 3.0,
    }
    if pattern not in phases:
        raise ValueError(f"{pattern} is not a success pattern {SUCCESS_PATTERNS}")
    return phases[pattern]


def ideal_scissor_transform(
    coefficients: Sequence[complex], g: float, order: int = 2
) -> np.ndarray:
    """Closed-form amplifier action: keep c_0..c_order, scale c_k by g^k.

    Components above ``order`` are cut off.  Returns the renormalized
    coefficient vector of length order + 1; raises if nothing survives the
    cut (a degenerate input for the protocol).
    """
    if order < 1:
        raise ValueError("amplifier order must be >= 1")
    if g < 0.0:
        raise ValueError(f"gain must be non-negative, got {g}")
    kept = np.asarray(list(coefficients[: order + 1]), dtype=complex)
    if kept.size < order + 1:
        kept = np.concatenate([kept, np.zeros(order + 1 - kept.size)])
    # 0^0 = 1 handles g = 0: only the vacuum component survives
    kept = kept * np.array([g**k for k in range(order + 1)], dtype=complex)
    norm = np.linalg.norm(kept)
    if norm == 0.0:
        raise ValueError(
            "input has no support on the retained photon numbers; the "
            "amplifier output would be the zero state"
        )
    return kept / norm


def _amplifier_unitary(modes: int, signal_mode: int, g: float):
    """Composed mode unitary of the amplifier on a ``modes + 3`` system.

    Appended modes: resource = modes, output = modes + 1, aux = modes + 2.
    The splitter acts on (resource, output); the Fourier mixer on
    (signal, resource, aux); the herald detectors watch those three ports.
    """
    total = modes + 3
    res, out, aux = modes, modes + 1, modes + 2
    splitter = embed_unitary(
        beam_splitter_unitary(gain_to_transmittance(g), _RESOURCE_SPLITTER_PHASE),
        (res, out),
        total,
    )
    mixer = embed_unitary(qft_unitary(3), (signal_mode, res, aux), total)
    return mixer @ splitter, (signal_mode, res, aux), out


def heralded_amplify(
    state: PureState, signal_mode: int, g: float, pattern: Sequence[int]
) -> tuple[PureState, float]:
    """Run the amplifier on one mode of a pure state.

    Returns the *unnormalized* conditional state (the signal mode replaced in
    place by the amplifier output mode) and the herald probability.  Input
    components with more than two photons in the signal mode can never
    produce a two-photon herald, so they only dilute the success
    probability.
    """
    pattern = tuple(int(n) for n in pattern)
    if pattern not in SUCCESS_PATTERNS:
        raise ValueError(f"{pattern} is not a success pattern {SUCCESS_PATTERNS}")
    if not 0 <= signal_mode < state.modes:
        raise ValueError(f"signal mode {signal_mode} out of range")
    unitary, detector_modes, out_mode = _amplifier_unitary(
        state.modes, signal_mode, g
    )
    extended = tensor(state, fock_state((2, 0, 0), cutoff=2))
    evolved = apply_mode_unitary(extended, unitary)
    residual, probability = project_pattern(evolved, detector_modes, pattern)
    # after removing the three detected modes the output sits last; move it
    # back to the signal mode's slot so callers see an unchanged mode layout
    p = signal_mode
    amps = {
        occ[:p] + (occ[-1],) + occ[p:-1]: amp
        for occ, amp in residual.amplitudes.items()
    }
    return PureState(state.modes, amps, cutoff=state.cutoff, prune=0.0), probability


@dataclass
class ScissorOutcome:
    """Post-herald output of the amplifier, conditioned on one pattern."""

    output: MixedState
    success_probability: float
    pattern: tuple
    truncation_weight: float


def run_two_scissor(
    input_state: MixedState | PureState,
    g: float,
    pattern: Sequence[int] = (1, 1, 0),
    max_input_cutoff: int = MAX_INPUT_CUTOFF,
) -> ScissorOutcome:
    """Full circuit simulation of the amplifier on a single-mode input.

    The output mixture is normalized (trace one); ``success_probability`` is
    the raw herald-pattern probability; ``truncation_weight`` reports how
    much input probability sat above two photons and therefore could not be
    heralded.
    """
    if isinstance(input_state, PureState):
        input_state = MixedState.from_pure(input_state)
    if input_state.modes != 1:
        raise ValueError("the amplifier acts on a single-mode input")
    if input_state.cutoff > max_input_cutoff:
        raise ValueError(
            f"input cutoff {input_state.cutoff} exceeds the supported maximum "
            f"{max_input_cutoff}; truncate the state first"
        )
    pattern = tuple(int(n) for n in pattern)
    components: list[tuple[float, PureState]] = []
    success_probability = 0.0
    truncation_weight = 0.0
    for weight, pure in input_state.components:
        truncation_weight += weight * pure.total_photon_weight(3)
        conditional, p = heralded_amplify(pure, 0, g, pattern)
        success_probability += weight * p
        if p > 0.0:
            components.append((weight * p, conditional.normalized()))
    if not components:
        raise ValueError(
            "herald pattern has zero probability for this input; the "
            "conditional output state is undefined"
        )
    total = sum(w for w, _ in components)
    output = MixedState([(w / total, s) for w, s in components])
    return ScissorOutcome(
        output=output,
        success_probability=success_probability,
        pattern=pattern,
        truncation_weight=truncation_weight,
    )


# ---------------------------------------------------------------------------
# closed forms for the lossy two-photon input
# ---------------------------------------------------------------------------


def lossy_two_photon_input(tau: float) -> MixedState:
    """|2> degraded by a channel with intensity transmission tau.

    The result is the photon-number mixture with weights
    ((1-tau)^2, 2 tau (1-tau), tau^2) on |0>, |1>, |2>.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmission {tau} outside [0, 1]")
    weights = [(1 - tau) ** 2, 2 * tau * (1 - tau), tau**2]
    components = [
        (w, fock_state((n,), cutoff=2)) for n, w in enumerate(weights) if w > 0.0
    ]
    return MixedState(components)


def amplified_mixture_closed_form(tau: float, g: float) -> tuple[np.ndarray, float]:
    """Heralded output of the amplifier on the lossy two-photon mixture.

    Returns the normalized weights on (|0>, |1>, |2>) and the normalization
    constant N = 1 / [(1-tau)^2 + 2 g^2 tau (1-tau) + g^4 tau^2]; the
    two-photon intensity gain is N g^4.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmission {tau} outside [0, 1]")
    if g < 0.0:
        raise ValueError(f"gain must be non-negative, got {g}")
    raw = np.array(
        [(1 - tau) ** 2, 2 * g**2 * tau * (1 - tau), g**4 * tau**2]
    )
    normalization = 1.0 / raw.sum()
    return raw * normalization, normalization


def two_photon_gain(tau: float, g: float) -> float:
    """Two-photon intensity gain N g^4 of the heralded amplifier.

    Monotone non-decreasing in g and saturating at 1 / tau^2 because of the
    output normalization.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(
            f"transmission must be in (0, 1], got {tau}; at tau = 0 the input "
            "has no two-photon component and the gain is undefined"
        )
    _, normalization = amplified_mixture_closed_form(tau, g)
    return normalization * g**4


# ---------------------------------------------------------------------------
# photon-counting gain measurement model
# ---------------------------------------------------------------------------


def pnr_coincidence_probability(state: MixedState | PureState) -> float:
    """Coincidence probability of the probabilistic photon-number stage.

    The single-mode state is split on a balanced splitter onto two click
    detectors; a photon pair separates (and registers a coincidence) with
    probability one half.
    """
    if isinstance(state, PureState):
        state = MixedState.from_pure(state)
    if state.modes != 1:
        raise ValueError("the counting stage takes a single-mode state")
    splitter = beam_splitter_unitary(0.5)
    probability = 0.0
    for weight, pure in state.components:
        split = apply_mode_unitary(tensor(pure, vacuum(1, cutoff=0)), splitter)
        _, p = project_pattern(split, (0, 1), (1, 1))
        probability += weight * p
    return probability


@dataclass
class GainMeasurement:
    """Expected counting rates for one amplifier configuration."""

    herald_probability: float
    fourfold_probability: float
    rho22_estimate: float


def simulate_gain_measurement(
    tau: float, g: float, with_amplifier: bool, pattern: Sequence[int] = (1, 1, 0)
) -> GainMeasurement:
    """Expected coincidence rates of the intensity-gain measurement.

    With the amplifier on, the attenuated two-photon input is amplified and
    the output mode is counted; four-fold rates normalized by the herald
    rate estimate the output two-photon population.  With the amplifier off
    the input goes straight to the counting stage while the resource alone
    (full transmittance, no interference) still fires the heralds, so the
    same conditioning applies but the heralds carry no information about
    the input and cancel from the normalized estimate.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"transmission must be in (0, 1], got {tau}")
    input_mixture = lossy_two_photon_input(tau)
    if with_amplifier:
        outcome = run_two_scissor(input_mixture, g, pattern)
        herald = outcome.success_probability
        coincidence = pnr_coincidence_probability(outcome.output)
        fourfold = herald * coincidence
    else:
        # eta = 1 (g = 0) sends the whole resource through the mixer; the
        # input is diverted to the counting stage and never interferes
        herald = run_two_scissor(
            vacuum(1, cutoff=2), 0.0, pattern
        ).success_probability
        coincidence = pnr_coincidence_probability(input_mixture)
        fourfold = herald * coincidence
    return GainMeasurement(
        herald_probability=herald,
        fourfold_probability=fourfold,
        rho22_estimate=2.0 * fourfold / herald,
    )


def measured_two_photon_gain(
    tau: float, g: float, pattern: Sequence[int] = (1, 1, 0)
) -> float:
    """Gain estimate from the counting model: on/off ratio of rho_22."""
    on = simulate_gain_measurement(tau, g, with_amplifier=True, pattern=pattern)
    off = simulate_gain_measurement(tau, g, with_amplifier=False, pattern=pattern)
    return on.rho22_estimate / off.rho22_estimate
