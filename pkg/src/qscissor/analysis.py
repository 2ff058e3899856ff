"""Physics analyses built on the amplifier simulation.

Covers the coherence-fringe interferometer (a photon pair split unevenly
into a reference arm and an amplified arm, then recombined with a scanned
phase), path-entanglement quantified by logarithmic negativity, and the
polarization Hong-Ou-Mandel curve of the mixer's internal splitters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import apply_mode_unitary, beam_splitter_unitary, compile_circuit
from .circuit import PhaseShift, BeamSplitter
from .fock import PureState, fock_state, project_pattern, tensor, vacuum
from .scissor import SUCCESS_PATTERNS, heralded_amplify


@dataclass(frozen=True)
class QutritPathState:
    """Two-photon path state: coefficients on (|2,0>, |1,1>, |0,2>)."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) != 3:
            raise ValueError("a two-photon path state has three coefficients")
        norm2 = sum(abs(c) ** 2 for c in coeffs)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"coefficients are not normalized (|c|^2 = {norm2})")
        object.__setattr__(self, "coefficients", coeffs)


def path_entangled_state(sigma: float) -> QutritPathState:
    """Photon pair split on a beam splitter with transmission ``sigma``.

    The reflected/transmitted amplitudes are ((1-sigma), sqrt(2 sigma
    (1-sigma)), sigma), which is already unit norm for every sigma.
    """
    if not 0.0 <= sigma <= 1.0:
        raise ValueError(f"splitting ratio {sigma} outside [0, 1]")
    return QutritPathState(
        (
            1.0 - sigma,
            math.sqrt(2.0) * math.sqrt(sigma) * math.sqrt(1.0 - sigma),
            sigma,
        )
    )


def amplified_path_state(sigma: float, g: float) -> QutritPathState:
    """Path state after amplifying the transmitted arm with gain ``g``.

    The transmitted-arm photon number k picks up g^k, so the state becomes
    balanced (maximally entangled) exactly when g^2 = (1 - sigma) / sigma.
    """
    if not 0.0 <= sigma <= 1.0:
        raise ValueError(f"splitting ratio {sigma} outside [0, 1]")
    if g < 0.0:
        raise ValueError(f"gain must be non-negative, got {g}")
    base = path_entangled_state(sigma).coefficients
    raw = np.array([base[k] * g**k for k in range(3)], dtype=complex)
    return QutritPathState(tuple(raw / np.linalg.norm(raw)))


def _path_density_matrix(state: QutritPathState) -> np.ndarray:
    """Density matrix on the (mode r) x (mode t) product space, 0..2 each."""
    vec = np.zeros(9, dtype=complex)
    for k, c in enumerate(state.coefficients):
        vec[(2 - k) * 3 + k] = c  # index = n_r * 3 + n_t
    return np.outer(vec, vec.conj()).reshape(3, 3, 3, 3)


def log_negativity(state: QutritPathState) -> float:
    """Logarithmic negativity E_N = log2 of the partial-transpose trace norm.

    Computed by explicit partial transpose of the two-mode density matrix
    and summing the absolute eigenvalues.
    """
    rho = _path_density_matrix(state)
    rho_pt = rho.transpose(0, 3, 2, 1).reshape(9, 9)  # transpose the t factor
    eigenvalues = np.linalg.eigvalsh(rho_pt)
    return float(np.log2(np.sum(np.abs(eigenvalues))))


def log_negativity_schmidt(state: QutritPathState) -> float:
    """Pure-state shortcut: E_N = log2((sum of Schmidt coefficients)^2).

    The path state is already Schmidt-diagonal in the photon-number basis,
    so the Schmidt coefficients are just the coefficient magnitudes.  Kept
    as an independent cross-check of :func:`log_negativity`.
    """
    return float(2.0 * np.log2(sum(abs(c) for c in state.coefficients)))


def negativity_curve(
    sigma: float, g_grid: Sequence[float]
) -> list[tuple[float, float, float]]:
    """(g, E_N before amplification, E_N after) over a gain grid."""
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"splitting ratio {sigma} outside (0, 1)")
    before = log_negativity(path_entangled_state(sigma))
    return [
        (float(g), before, log_negativity(amplified_path_state(sigma, g)))
        for g in g_grid
    ]


def hom_coincidence(theta: float) -> float:
    """Two-fold coincidence after a half-wave-plate splitter at angle theta.

    A wave plate rotated by theta acts as a splitter with transmittance
    cos^2(2 theta); for an incident photon pair the coincidence probability
    is |sin^2(2 theta) - cos^2(2 theta)|^2, i.e. cos^2(4 theta), with the
    deepest interference dip at 22.5 degrees.
    """
    s = math.sin(2.0 * theta) ** 2
    c = math.cos(2.0 * theta) ** 2
    return abs(s - c) ** 2


@dataclass
class FringeScan:
    """Expected coincidence rate versus the scanned recombination phase."""

    phases: np.ndarray
    values: np.ndarray
    pattern: tuple
    wavenumber: int = 2  # fringes oscillate in (wavenumber * phase)

    def __post_init__(self):
        self.phases = np.asarray(self.phases, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.phases.ndim != 1 or self.phases.shape != self.values.shape:
            raise ValueError("phase grid and values must be 1-d and equal length")
        if np.any(np.diff(self.phases) <= 0):
            raise ValueError("phase grid must be strictly increasing")
        if np.any(self.values < -1e-12):
            raise ValueError("coincidence rates must be non-negative")


def fringe_scan(
    sigma: float,
    g: float,
    pattern: Sequence[int] = (1, 1, 0),
    phases: Sequence[float] | None = None,
) -> FringeScan:
    """Simulate the coherence interferometer end to end.

    A photon pair is split with transmission ``sigma``; the transmitted arm
    is amplified (conditioned on ``pattern``), then reference and output
    are recombined on a balanced splitter after the output arm picks up a
    variable phase.  The value at each phase is the conditional probability
    of a coincidence across the two recombiner outputs.

    Only the |2,0> and |0,2> path components reach the coincidence outcome
    (the |1,1> part bunches), so the fringe oscillates at twice the scanned
    phase and its visibility measures the |2,0| / |0,2| balance.
    """
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"splitting ratio {sigma} outside (0, 1)")
    if phases is None:
        phases = np.linspace(0.0, 2.0 * np.pi, 101)
    phases = np.asarray(list(phases), dtype=float)

    # modes: 0 = reference (reflected), 1 = transmitted -> amplified
    split = beam_splitter_unitary(1.0 - sigma, 0.0)
    path_state = apply_mode_unitary(
        tensor(fock_state((2,), cutoff=2), vacuum(1, cutoff=0)), split
    )
    amplified, herald_probability = heralded_amplify(path_state, 1, g, pattern)
    if herald_probability <= 0.0:
        raise ValueError("herald pattern has zero probability in this setup")
    amplified = amplified.normalized()

    values = np.empty(len(phases))
    for i, phase in enumerate(phases):
        recombiner = compile_circuit(
            [PhaseShift(1, float(phase)), BeamSplitter(0, 1, 0.5)], 2
        )
        mixed = apply_mode_unitary(amplified, recombiner)
        _, coincidence = project_pattern(mixed, (0, 1), (1, 1))
        values[i] = coincidence
    return FringeScan(phases=phases, values=values, pattern=tuple(pattern))


@dataclass
class VisibilityFit:
    """Least-squares cosine fit of a fringe scan."""

    visibility: float
    offset: float
    amplitude: float
    mean: float
    degenerate: bool = False


def fit_visibility(scan: FringeScan) -> VisibilityFit:
    """Fit a * cos(k phi + offset) + m with the model-fixed wavenumber k.

    Visibility is the fitted contrast a / m clipped to [0, 1].  A constant
    scan has no defined offset and is flagged as degenerate with zero
    visibility.  The fit is linear least squares, hence deterministic.
    """
    if len(scan.phases) < 4:
        raise ValueError("need at least 4 points to fit a fringe")
    span = scan.phases[-1] - scan.phases[0]
    if span * scan.wavenumber < 2.0 * np.pi - 1e-9:
        raise ValueError("phase grid must span at least one fringe period")
    k = scan.wavenumber
    design = np.column_stack(
        [np.ones_like(scan.phases), np.cos(k * scan.phases), np.sin(k * scan.phases)]
    )
    (mean, a_cos, a_sin), *_ = np.linalg.lstsq(design, scan.values, rcond=None)
    amplitude = math.hypot(a_cos, a_sin)
    scale = max(abs(mean), float(np.max(np.abs(scan.values))), 1e-300)
    if amplitude < 1e-12 * scale:
        return VisibilityFit(0.0, 0.0, 0.0, float(mean), degenerate=True)
    offset = math.atan2(-a_sin, a_cos) % (2.0 * math.pi)
    visibility = float(np.clip(amplitude / mean, 0.0, 1.0)) if mean > 0 else 0.0
    return VisibilityFit(visibility, offset, float(amplitude), float(mean))
