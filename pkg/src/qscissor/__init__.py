"""Truncated-Fock-space simulator of a two-photon quantum-scissor heralded amplifier."""

from .analysis import (
    FringeScan,
    QutritPathState,
    VisibilityFit,
    amplified_path_state,
    fit_visibility,
    fringe_scan,
    hom_coincidence,
    log_negativity,
    negativity_curve,
    path_entangled_state,
)
from .circuit import (
    BeamSplitter,
    Loss,
    ModeUnitary,
    PhaseShift,
    apply_loss,
    apply_mode_unitary,
    beam_splitter_unitary,
    compile_circuit,
    fock_amplitude,
    permanent,
    qft_unitary,
    spdc_two_mode_squeezed,
    tritter_elements,
)
from .fock import (
    DEFAULT_CUTOFF,
    MixedState,
    PureState,
    basis_dimension,
    basis_enumerate,
    fidelity,
    fock_state,
    inner_product,
    project_photon_number,
    tensor,
    vacuum,
)
from .scissor import (
    SUCCESS_PATTERNS,
    GainSetting,
    ScissorOutcome,
    amplified_mixture_closed_form,
    gain_to_transmittance,
    herald_phase,
    heralded_amplify,
    ideal_scissor_transform,
    lossy_two_photon_input,
    measured_two_photon_gain,
    run_two_scissor,
    simulate_gain_measurement,
    two_photon_gain,
)
from .sensitivity import (
    LossLayout,
    LossPoint,
    SobolResult,
    default_loss_layout,
    first_order_indices,
    lossy_gain_model,
    make_gain_model,
    saltelli_sample,
    sensitivity_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BeamSplitter",
    "DEFAULT_CUTOFF",
    "FringeScan",
    "GainSetting",
    "Loss",
    "LossLayout",
    "LossPoint",
    "MixedState",
    "ModeUnitary",
    "PhaseShift",
    "PureState",
    "QutritPathState",
    "ScissorOutcome",
    "SobolResult",
    "SUCCESS_PATTERNS",
    "VisibilityFit",
    "amplified_mixture_closed_form",
    "amplified_path_state",
    "apply_loss",
    "apply_mode_unitary",
    "basis_dimension",
    "basis_enumerate",
    "beam_splitter_unitary",
    "compile_circuit",
    "default_loss_layout",
    "fidelity",
    "first_order_indices",
    "fit_visibility",
    "fock_amplitude",
    "fock_state",
    "fringe_scan",
    "gain_to_transmittance",
    "herald_phase",
    "heralded_amplify",
    "hom_coincidence",
    "ideal_scissor_transform",
    "inner_product",
    "log_negativity",
    "lossy_gain_model",
    "lossy_two_photon_input",
    "make_gain_model",
    "measured_two_photon_gain",
    "negativity_curve",
    "path_entangled_state",
    "permanent",
    "project_photon_number",
    "qft_unitary",
    "run_two_scissor",
    "saltelli_sample",
    "sensitivity_sweep",
    "simulate_gain_measurement",
    "spdc_two_mode_squeezed",
    "tensor",
    "tritter_elements",
    "two_photon_gain",
    "vacuum",
]
