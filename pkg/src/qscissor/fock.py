"""Fock-basis state containers and primitives.

States live in a truncated multimode Fock space: every basis label is an
occupation vector (one photon count per optical mode, stored as a plain tuple
of ints) and every state caps the *total* photon number at a configurable
cutoff.  Amplitude maps are kept sparse because the experiments populate only
a handful of occupations out of a combinatorially large basis.

All containers are treated as immutable values: operations return new states
and never mutate their inputs, so everything here is safe to evaluate
concurrently.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping

import numpy as np

#: Default cap on the total photon number of a state (two photon pairs).
DEFAULT_CUTOFF = 4

#: Amplitudes with magnitude below this are dropped when states are built.
#: Purely numerical hygiene; retained amplitudes are never altered.
PRUNE_THRESHOLD = 1e-15

#: Tolerance used for normalization checks.
NORM_TOL = 1e-12

OccupationVector = tuple  # photon counts per mode, e.g. (1, 1, 0)


def basis_dimension(modes: int, max_total: int) -> int:
    """Number of occupation vectors on `modes` modes with total <= max_total."""
    return math.comb(max_total + modes, modes)


def basis_enumerate(modes: int, max_total: int) -> list[OccupationVector]:
    """Enumerate all occupation vectors with total photons <= max_total.

    The order is lexicographic and therefore deterministic; it defines the
    index convention used by every dense-matrix export in the package.
    """
    if modes < 1:
        raise ValueError(f"modes must be >= 1, got {modes}")
    if max_total < 0:
        raise ValueError(f"max_total must be >= 0, got {max_total}")

    def _build(remaining_modes: int, budget: int) -> Iterator[tuple]:
        if remaining_modes == 1:
            for n in range(budget + 1):
                yield (n,)
            return
        for n in range(budget + 1):
            for tail in _build(remaining_modes - 1, budget - n):
                yield (n,) + tail

    return list(_build(modes, max_total))


def _validate_occupation(occ: tuple, modes: int) -> None:
    if len(occ) != modes:
        raise ValueError(f"occupation {occ} has {len(occ)} modes, expected {modes}")
    if any((not isinstance(n, (int, np.integer))) or n < 0 for n in occ):
        raise ValueError(f"occupation {occ} must contain non-negative integers")


class PureState:
    """Sparse complex amplitude map over occupation vectors.

    Parameters
    ----------
    modes:
        Number of optical modes; every key must have this length.
    amplitudes:
        Mapping occupation vector -> complex amplitude.  Not necessarily
        normalized; see :meth:`normalized`.
    cutoff:
        Maximum total photon number.  Keys exceeding it are rejected rather
        than silently renormalized.
    prune:
        Magnitude below which amplitudes are dropped at construction.
    """

    def __init__(
        self,
        modes: int,
        amplitudes: Mapping[tuple, complex],
        cutoff: int = DEFAULT_CUTOFF,
        prune: float = PRUNE_THRESHOLD,
    ):
        if modes < 0:
            raise ValueError("modes must be non-negative")
        if cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        amps: dict[tuple, complex] = {}
        for occ, amp in amplitudes.items():
            occ = tuple(int(n) for n in occ)
            _validate_occupation(occ, modes)
            if sum(occ) > cutoff:
                raise ValueError(
                    f"occupation {occ} exceeds the total-photon cutoff {cutoff}"
                )
            amp = complex(amp)
            if abs(amp) > prune:
                amps[occ] = amps.get(occ, 0.0) + amp
        self.modes = modes
        self.cutoff = cutoff
        self.amplitudes = amps

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def normalized(self) -> "PureState":
        """Return the unit-norm version of this state."""
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return PureState(
            self.modes,
            {occ: a / n for occ, a in self.amplitudes.items()},
            cutoff=self.cutoff,
            prune=0.0,
        )

    def amplitude(self, occ: Iterable[int]) -> complex:
        return self.amplitudes.get(tuple(int(n) for n in occ), 0.0 + 0.0j)

    def total_photon_weight(self, min_total: int) -> float:
        """Probability weight carried by components with >= min_total photons."""
        return sum(
            abs(a) ** 2 for occ, a in self.amplitudes.items() if sum(occ) >= min_total
        )

    def to_vector(self, basis: list[tuple] | None = None) -> np.ndarray:
        """Dense amplitude vector in the canonical (lexicographic) basis order."""
        if basis is None:
            basis = basis_enumerate(self.modes, self.cutoff)
        vec = np.zeros(len(basis), dtype=complex)
        index = {occ: i for i, occ in enumerate(basis)}
        for occ, amp in self.amplitudes.items():
            vec[index[occ]] = amp
        return vec

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        terms = ", ".join(f"{occ}: {amp:.4g}" for occ, amp in sorted(self.amplitudes.items()))
        return f"PureState(modes={self.modes}, cutoff={self.cutoff}, {{{terms}}})"


def fock_state(occ: Iterable[int], cutoff: int | None = None) -> PureState:
    """Basis state |occ> with amplitude 1."""
    occ = tuple(int(n) for n in occ)
    if cutoff is None:
        cutoff = max(DEFAULT_CUTOFF, sum(occ))
    return PureState(len(occ), {occ: 1.0}, cutoff=cutoff)


def vacuum(modes: int, cutoff: int = DEFAULT_CUTOFF) -> PureState:
    return PureState(modes, {(0,) * modes: 1.0}, cutoff=cutoff)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; the cutoffs add so product states always fit."""
    amps = {
        occ_a + occ_b: amp_a * amp_b
        for occ_a, amp_a in a.amplitudes.items()
        for occ_b, amp_b in b.amplitudes.items()
    }
    return PureState(a.modes + b.modes, amps, cutoff=a.cutoff + b.cutoff, prune=0.0)


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b> over the shared occupation basis."""
    if a.modes != b.modes:
        raise ValueError(f"mode mismatch: {a.modes} vs {b.modes}")
    if len(a.amplitudes) > len(b.amplitudes):
        return complex(np.conj(inner_product(b, a)))
    return sum(
        np.conj(amp) * b.amplitudes.get(occ, 0.0) for occ, amp in a.amplitudes.items()
    )


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 for normalized a, b (it is the caller's job to normalize)."""
    return abs(inner_product(a, b)) ** 2


def project_photon_number(
    state: PureState, mode: int, n: int
) -> tuple[PureState, float]:
    """Project one mode onto a definite photon number and drop that mode.

    Returns the unnormalized residual state on the remaining modes together
    with the projection probability (squared norm of the kept amplitudes,
    assuming the input was normalized).  Chaining over distinct modes is
    order-independent.
    """
    if not 0 <= mode < state.modes:
        raise ValueError(f"mode {mode} out of range for a {state.modes}-mode state")
    kept: dict[tuple, complex] = {}
    for occ, amp in state.amplitudes.items():
        if occ[mode] == n:
            kept[occ[:mode] + occ[mode + 1 :]] = amp
    residual = PureState(state.modes - 1, kept, cutoff=state.cutoff, prune=0.0)
    probability = sum(abs(a) ** 2 for a in kept.values())
    return residual, probability


def project_pattern(
    state: PureState, modes: Iterable[int], counts: Iterable[int]
) -> tuple[PureState, float]:
    """Project several distinct modes at once (all removed from the labels)."""
    modes = list(modes)
    counts = list(counts)
    if len(set(modes)) != len(modes):
        raise ValueError("projection modes must be distinct")
    residual, probability = state, None
    # project from the highest index down so earlier indices stay valid
    for mode, count in sorted(zip(modes, counts), reverse=True):
        residual, p = project_photon_number(residual, mode, count)
        probability = p  # the last projection already accounts for all previous ones
    if probability is None:
        probability = state.norm() ** 2
    return residual, probability


class MixedState:
    """Convex mixture of pure states on a common mode count and cutoff.

    The decomposition into pure components is not unique; all observables
    computed here (projections, diagonal weights, density matrices) depend
    only on the density operator the mixture represents.
    """

    def __init__(self, components: Iterable[tuple[float, PureState]]):
        comps = []
        modes = cutoff = None
        for weight, state in components:
            weight = float(weight)
            if weight < -NORM_TOL:
                raise ValueError(f"negative component weight {weight}")
            if weight <= 0.0:
                continue
            if modes is None:
                modes, cutoff = state.modes, state.cutoff
            elif state.modes != modes or state.cutoff != cutoff:
                raise ValueError("all components must share modes and cutoff")
            comps.append((weight, state))
        if not comps:
            raise ValueError("a mixed state needs at least one component")
        self.components = comps
        self.modes = modes
        self.cutoff = cutoff

    @classmethod
    def from_pure(cls, state: PureState) -> "MixedState":
        return cls([(1.0, state)])

    def trace(self) -> float:
        return sum(w * s.norm() ** 2 for w, s in self.components)

    def normalized(self) -> "MixedState":
        """Normalize component states and rescale weights to sum to one."""
        comps = []
        for w, s in self.components:
            n2 = s.norm() ** 2
            if n2 > 0.0:
                comps.append((w * n2, s.normalized()))
        total = sum(w for w, _ in comps)
        if total <= 0.0:
            raise ValueError("cannot normalize a zero-trace mixture")
        return MixedState([(w / total, s) for w, s in comps])

    def density_matrix(self, basis: list[tuple] | None = None) -> np.ndarray:
        """Dense density matrix in the canonical basis order."""
        if basis is None:
            basis = basis_enumerate(self.modes, self.cutoff)
        dim = len(basis)
        rho = np.zeros((dim, dim), dtype=complex)
        for w, s in self.components:
            vec = s.to_vector(basis)
            rho += w * np.outer(vec, vec.conj())
        return rho

    def photon_number_weights(self, mode: int, max_n: int | None = None) -> np.ndarray:
        """Diagonal photon-number distribution of one mode (modes traced out)."""
        if max_n is None:
            max_n = self.cutoff
        weights = np.zeros(max_n + 1)
        for w, s in self.components:
            for occ, amp in s.amplitudes.items():
                if occ[mode] <= max_n:
                    weights[occ[mode]] += w * abs(amp) ** 2
        return weights

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"MixedState({len(self.components)} components, modes={self.modes})"
