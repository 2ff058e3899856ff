"""Loss-sensitivity model and variance-based (Sobol) analysis.

``lossy_gain_model`` evolves the gain-measurement experiment through the
full circuit with a pure-loss channel inserted at each of fourteen tagged
locations and returns the conditioned two-photon intensity ratio, i.e. the
gain an experimenter would actually measure.  ``first_order_indices``
estimates each location's first-order Sobol index S_i = V_i / Var(G) from
N (D + 2) model evaluations arranged in the usual Saltelli design.

The model is evaluated in batches: amplitudes are carried as arrays with a
leading sample axis, so one pass through the circuit prices every sampled
loss vector at once.  All reductions run in a fixed order, which makes the
estimates bitwise reproducible for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .circuit import (
    BeamSplitter,
    PhaseShift,
    beam_splitter_unitary,
    compile_circuit,
    embed_unitary,
    fock_transfer_matrix,
)
from .fock import basis_enumerate
from .scissor import SUCCESS_PATTERNS, gain_to_transmittance

# ---------------------------------------------------------------------------
# loss layout
# ---------------------------------------------------------------------------

#: Roles a loss variable can play, i.e. where its channel sits in the setup.
LOSS_ROLES = (
    "input_post_prep",  # input beam right after preparation (both configs)
    "input_size_path",  # input path to the counting stage (amplifier off)
    "input_pre_qft",  # input arm entering the mixer (amplifier on)
    "ancilla_post_prep",  # resource beam before the gain splitter
    "ancilla_pre_qft",  # transmitted resource arm entering the mixer
    "output_post_amp",  # amplified output before the counting stage
    "qft_internal_0",  # between the two halves of the mixer, per mode
    "qft_internal_1",
    "qft_internal_2",
    "detector_0",  # herald detector efficiencies, per mixer output
    "detector_1",
    "detector_2",
)

#: Report regions, matching how the loss points group in the setup.
LOSS_REGIONS = (
    "post_prep",
    "size_measurement",
    "pre_qft",
    "within_qft",
    "detection",
)


@dataclass(frozen=True)
class LossPoint:
    name: str
    region: str
    role: str

    def __post_init__(self):
        if self.region not in LOSS_REGIONS:
            raise ValueError(f"unknown region {self.region!r}")
        if self.role not in LOSS_ROLES:
            raise ValueError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class LossLayout:
    """Ordered list of loss points; several points may share a role
    (their transmissions then compose multiplicatively)."""

    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def dims(self) -> int:
        return len(self.points)

    def role_columns(self) -> dict[str, list[int]]:
        columns: dict[str, list[int]] = {}
        for i, point in enumerate(self.points):
            columns.setdefault(point.role, []).append(i)
        return columns


def default_loss_layout() -> LossLayout:
    """The fourteen-point layout used for the reported sensitivity analysis.

    Two post-preparation points (input and resource), two on the paths to
    the photon counting stage (input-side and output-side), four on the
    arms entering the mixer, three inside the mixer, three on the herald
    detectors.
    """
    return LossLayout(
        (
            LossPoint("L1", "post_prep", "input_post_prep"),
            LossPoint("L2", "size_measurement", "input_size_path"),
            LossPoint("L3", "pre_qft", "input_pre_qft"),
            LossPoint("L4", "post_prep", "ancilla_post_prep"),
            LossPoint("L5", "pre_qft", "ancilla_pre_qft"),
            LossPoint("L6", "size_measurement", "output_post_amp"),
            LossPoint("L7", "pre_qft", "input_pre_qft"),
            LossPoint("L8", "pre_qft", "ancilla_pre_qft"),
            LossPoint("L9", "within_qft", "qft_internal_0"),
            LossPoint("L10", "within_qft", "qft_internal_1"),
            LossPoint("L11", "within_qft", "qft_internal_2"),
            LossPoint("L12", "detection", "detector_0"),
            LossPoint("L13", "detection", "detector_1"),
            LossPoint("L14", "detection", "detector_2"),
        )
    )


# ---------------------------------------------------------------------------
# batched circuit engine
#
# Modes: 0 = signal, 1 = resource, 2 = output, 3 = aux.  The mixer acts on
# (0, 1, 3) and is split into its two element halves so losses can sit
# inside it.  Amplitude vectors are kept sector-local (fixed total photon
# number) with a leading sample axis.
# ---------------------------------------------------------------------------

_ENGINE_MODES = 4
_MAX_PHOTONS = 4
_QFT_MODES = (0, 1, 3)
_OUT_MODE = 2
_CHUNK = 4096


def _mixer_halves():
    first = compile_circuit(
        [BeamSplitter(0, 1, 0.5), BeamSplitter(1, 2, 1.0 / 3.0)], 3
    )
    second = compile_circuit(
        [PhaseShift(0, 3.0 * math.pi / 2.0), BeamSplitter(0, 1, 0.5)], 3
    )
    return first, second


class _Sectors:
    """Fixed-total-photon sectors of the four-mode truncated basis."""

    def __init__(self):
        basis = basis_enumerate(_ENGINE_MODES, _MAX_PHOTONS)
        self.occ_by_total: list[np.ndarray] = []
        self.index_by_total: list[dict[tuple, int]] = []
        self.global_index: dict[tuple, tuple[int, int]] = {}
        for total in range(_MAX_PHOTONS + 1):
            occs = [occ for occ in basis if sum(occ) == total]
            self.occ_by_total.append(np.array(occs, dtype=int))
            self.index_by_total.append({occ: i for i, occ in enumerate(occs)})
            for i, occ in enumerate(occs):
                self.global_index[occ] = (total, i)

    def dim(self, total: int) -> int:
        return len(self.occ_by_total[total])


_SECTORS: _Sectors | None = None


def _sectors() -> _Sectors:
    global _SECTORS
    if _SECTORS is None:
        _SECTORS = _Sectors()
    return _SECTORS


def _sector_blocks(unitary) -> list[np.ndarray]:
    """Per-sector transfer blocks of a four-mode unitary."""
    sectors = _sectors()
    transfer = fock_transfer_matrix(unitary, _MAX_PHOTONS)
    basis = basis_enumerate(_ENGINE_MODES, _MAX_PHOTONS)
    flat_index = {occ: i for i, occ in enumerate(basis)}
    blocks = []
    for total in range(_MAX_PHOTONS + 1):
        idx = [flat_index[tuple(occ)] for occ in sectors.occ_by_total[total]]
        blocks.append(transfer[np.ix_(idx, idx)])
    return blocks


@dataclass
class _LowerMap:
    """Index map of the k-photon-lowering operator on one mode, per sector."""

    src: np.ndarray  # indices in sector T
    dst: np.ndarray  # indices in sector T - k
    comb_sqrt: np.ndarray  # sqrt(C(n, k)) per source term
    n_src: np.ndarray  # photon number at the lossy mode per source term


def _build_lower_maps() -> dict[tuple[int, int, int], _LowerMap]:
    sectors = _sectors()
    maps: dict[tuple[int, int, int], _LowerMap] = {}
    for mode in range(_ENGINE_MODES):
        for total in range(_MAX_PHOTONS + 1):
            occs = sectors.occ_by_total[total]
            for k in range(0, total + 1):
                src, dst, comb, n_src = [], [], [], []
                for i, occ in enumerate(occs):
                    n = occ[mode]
                    if n < k:
                        continue
                    lowered = tuple(occ)
                    lowered = lowered[:mode] + (n - k,) + lowered[mode + 1 :]
                    src.append(i)
                    dst.append(sectors.index_by_total[total - k][lowered])
                    comb.append(math.sqrt(math.comb(n, k)))
                    n_src.append(n)
                if src:
                    maps[(mode, k, total)] = _LowerMap(
                        np.array(src),
                        np.array(dst),
                        np.array(comb),
                        np.array(n_src),
                    )
    return maps


@dataclass
class _PatternPovm:
    """Per-sector data for heralding a detector pattern with inefficiency."""

    valid: np.ndarray  # term indices compatible with the pattern
    comb: np.ndarray  # product of C(n_m, p_m) over detector modes
    excess: np.ndarray  # photons lost at each detector mode, [n_valid, 3]
    out_is_two: np.ndarray  # bool: does the term leave 2 photons in the output


def _build_povm(pattern: tuple) -> list[_PatternPovm]:
    sectors = _sectors()
    out = []
    for total in range(_MAX_PHOTONS + 1):
        occs = sectors.occ_by_total[total]
        valid, comb, excess, out2 = [], [], [], []
        for i, occ in enumerate(occs):
            detected = [occ[m] for m in _QFT_MODES]
            if any(n < p for n, p in zip(detected, pattern)):
                continue
            valid.append(i)
            comb.append(
                math.prod(math.comb(n, p) for n, p in zip(detected, pattern))
            )
            excess.append([n - p for n, p in zip(detected, pattern)])
            out2.append(occ[_OUT_MODE] == 2)
        out.append(
            _PatternPovm(
                np.array(valid, dtype=int),
                np.array(comb, dtype=float),
                np.array(excess, dtype=int).reshape(len(valid), 3),
                np.array(out2, dtype=bool),
            )
        )
    return out


@dataclass
class _EngineContext:
    g: float
    pattern: tuple
    base_vectors: dict  # (a, b) -> (total, complex vector after the splitter)
    h1_blocks: list
    h2_blocks: list
    povm: list
    lower: dict


_ENGINE_CACHE: dict[tuple, _EngineContext] = {}
_STATIC_CACHE: dict[str, object] = {}


def _engine_context(g: float, pattern: tuple) -> _EngineContext:
    key = (float(g), tuple(pattern))
    ctx = _ENGINE_CACHE.get(key)
    if ctx is not None:
        return ctx
    if "h1" not in _STATIC_CACHE:
        first, second = _mixer_halves()
        _STATIC_CACHE["h1"] = _sector_blocks(
            embed_unitary(first, _QFT_MODES, _ENGINE_MODES)
        )
        _STATIC_CACHE["h2"] = _sector_blocks(
            embed_unitary(second, _QFT_MODES, _ENGINE_MODES)
        )
        _STATIC_CACHE["lower"] = _build_lower_maps()
    povm_key = ("povm", tuple(pattern))
    if povm_key not in _STATIC_CACHE:
        _STATIC_CACHE[povm_key] = _build_povm(tuple(pattern))

    # initial |a, b, 0, 0> through the resource splitter, per photon numbers
    from .scissor import _RESOURCE_SPLITTER_PHASE  # single source of truth

    sectors = _sectors()
    eta = gain_to_transmittance(g)
    splitter = embed_unitary(
        beam_splitter_unitary(eta, _RESOURCE_SPLITTER_PHASE), (1, 2), _ENGINE_MODES
    )
    split_blocks = _sector_blocks(splitter)
    base_vectors = {}
    for a in range(3):
        for b in range(3):
            total = a + b
            vec = np.zeros(sectors.dim(total), dtype=complex)
            vec[sectors.index_by_total[total][(a, b, 0, 0)]] = 1.0
            base_vectors[(a, b)] = (total, split_blocks[total] @ vec)

    ctx = _EngineContext(
        g=float(g),
        pattern=tuple(pattern),
        base_vectors=base_vectors,
        h1_blocks=_STATIC_CACHE["h1"],
        h2_blocks=_STATIC_CACHE["h2"],
        povm=_STATIC_CACHE[povm_key],
        lower=_STATIC_CACHE["lower"],
    )
    _ENGINE_CACHE[key] = ctx
    return ctx


def _sqrt_power_table(t: np.ndarray, max_power: int = _MAX_PHOTONS) -> np.ndarray:
    """[samples, max_power + 1] table of sqrt(t)^n."""
    table = np.empty((t.shape[0], max_power + 1))
    table[:, 0] = 1.0
    root = np.sqrt(t)
    for n in range(1, max_power + 1):
        table[:, n] = table[:, n - 1] * root
    return table


def _power_table(t: np.ndarray, max_power: int = _MAX_PHOTONS) -> np.ndarray:
    table = np.empty((t.shape[0], max_power + 1))
    table[:, 0] = 1.0
    for n in range(1, max_power + 1):
        table[:, n] = table[:, n - 1] * t
    return table


def _loss_branch(ctx, amp, total, mode, k, s_t, s_one_minus_t):
    """Apply the k-loss Kraus branch on one mode of a sector-local batch."""
    lower = ctx.lower.get((mode, k, total))
    if lower is None:
        return None
    out = np.zeros((amp.shape[0], _sectors().dim(total - k)), dtype=complex)
    factors = (
        lower.comb_sqrt[None, :]
        * s_t[:, lower.n_src - k]
        * s_one_minus_t[:, k][:, None]
    )
    out[:, lower.dst] = amp[:, lower.src] * factors
    return out


def _internal_loss_branches(ctx, amp, total, mode_tables):
    """Yield every Kraus-branch combination of the three in-mixer losses."""
    mode, tables = mode_tables[0]
    rest = mode_tables[1:]
    for k in range(total + 1):
        branch = _loss_branch(ctx, amp, total, mode, k, *tables)
        if branch is None or not branch.any():
            continue
        if rest:
            yield from _internal_loss_branches(ctx, branch, total - k, rest)
        else:
            yield branch, total - k


def _herald_sums(ctx, amp, total, det_t_tables, det_omt_tables):
    """Pattern probability and two-photon-output weight of one branch."""
    povm = ctx.povm[total]
    if povm.valid.size == 0:
        return 0.0, 0.0
    weights = np.abs(amp[:, povm.valid]) ** 2
    factor = povm.comb[None, :].copy()
    common = 1.0
    for m in range(3):
        p = ctx.pattern[m]
        common = common * det_t_tables[m][:, p]
        factor = factor * det_omt_tables[m][:, povm.excess[:, m]]
    weighted = weights * factor
    p_pattern = common * weighted.sum(axis=1)
    rho22 = common * weighted[:, povm.out_is_two].sum(axis=1)
    return p_pattern, rho22


def _conditioned_counting_ratio(ctx, w_in, w_res, t_ancilla, t_internal, t_detect):
    """(pattern probability, conditional rho_22 numerator) for one config.

    ``w_in`` / ``w_res`` are per-sample photon-number weights of the input
    and resource beams entering the circuit; the remaining arguments are
    per-sample transmissions of the in-circuit loss points.
    """
    n = w_in.shape[0]
    s_anc = _sqrt_power_table(t_ancilla)
    s_anc_m = _sqrt_power_table(1.0 - t_ancilla)
    internal_tables = [
        (mode, (_sqrt_power_table(t), _sqrt_power_table(1.0 - t)))
        for mode, t in zip(_QFT_MODES, t_internal)
    ]
    det_t = [_power_table(t) for t in t_detect]
    det_omt = [_power_table(1.0 - t) for t in t_detect]

    p_pattern = np.zeros(n)
    rho22 = np.zeros(n)
    for (a, b), (total, base) in ctx.base_vectors.items():
        weight = w_in[:, a] * w_res[:, b]
        if not weight.any():
            continue
        base_batch = np.broadcast_to(base, (n, base.shape[0]))
        for k_anc in range(b + 1):
            amp = _loss_branch(ctx, base_batch, total, 1, k_anc, s_anc, s_anc_m)
            if amp is None or not amp.any():
                continue
            t_mid = total - k_anc
            amp = amp @ ctx.h1_blocks[t_mid].T
            for branch, t_end in _internal_loss_branches(
                ctx, amp, t_mid, internal_tables
            ):
                final = branch @ ctx.h2_blocks[t_end].T
                p_b, r_b = _herald_sums(ctx, final, t_end, det_t, det_omt)
                p_pattern += weight * p_b
                rho22 += weight * r_b
    return p_pattern, rho22


def _pair_weights(transmission: np.ndarray) -> np.ndarray:
    """Photon-number weights of |2> after an intensity-transmission channel."""
    t = transmission
    return np.stack([(1.0 - t) ** 2, 2.0 * t * (1.0 - t), t * t], axis=1)


def _role_transmission(tr: np.ndarray, columns: dict, role: str) -> np.ndarray:
    cols = columns.get(role, [])
    out = np.ones(tr.shape[0])
    for c in cols:
        out = out * tr[:, c]
    return out


def _evaluate_batch(
    g: float,
    tau: float,
    losses: np.ndarray,
    layout: LossLayout,
    pattern: tuple,
) -> np.ndarray:
    columns = layout.role_columns()
    tr = 1.0 - losses
    role = lambda name: _role_transmission(tr, columns, name)

    t_internal = [role(f"qft_internal_{i}") for i in range(3)]
    t_detect = [role(f"detector_{i}") for i in range(3)]
    t_anc_post = role("ancilla_post_prep")
    t_anc_pre = role("ancilla_pre_qft")

    # amplifier on: input crosses its post-prep and pre-mixer losses, the
    # output crosses the post-amplification loss before being counted
    tau_on = tau * role("input_post_prep") * role("input_pre_qft")
    ctx_on = _engine_context(g, pattern)
    p2_on, rho22_on = _conditioned_counting_ratio(
        ctx_on, _pair_weights(tau_on), _pair_weights(t_anc_post),
        t_anc_pre, t_internal, t_detect,
    )
    ratio_on = 0.5 * role("output_post_amp") ** 2 * rho22_on / p2_on

    # amplifier off: full splitter transmission routes the resource through
    # the mixer alone; the input goes straight to the counting stage, so the
    # heralds are statistically independent of it and cancel in the ratio
    tau_off = tau * role("input_post_prep") * role("input_size_path")
    ctx_off = _engine_context(0.0, pattern)
    vacuum_in = np.zeros((losses.shape[0], 3))
    vacuum_in[:, 0] = 1.0
    p2_off, _ = _conditioned_counting_ratio(
        ctx_off, vacuum_in, _pair_weights(t_anc_post),
        t_anc_pre, t_internal, t_detect,
    )
    fourfold_off = p2_off * 0.5 * tau_off**2
    ratio_off = fourfold_off / p2_off

    return ratio_on / ratio_off


def lossy_gain_model(
    g: float,
    tau: float,
    losses: Sequence[float] | np.ndarray,
    layout: LossLayout | None = None,
    pattern: Sequence[int] = (1, 1, 0),
) -> float | np.ndarray:
    """Measured two-photon gain with losses inserted across the setup.

    ``losses`` is either a single loss vector (length = layout size, each
    entry in [0, 1]) or a batch of them stacked along the first axis.  With
    all losses zero this reduces exactly to the closed-form gain N g^4.
    """
    if layout is None:
        layout = default_loss_layout()
    pattern = tuple(int(p) for p in pattern)
    if pattern not in SUCCESS_PATTERNS:
        raise ValueError(f"{pattern} is not a success pattern {SUCCESS_PATTERNS}")
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"transmission must be in (0, 1], got {tau}")
    if g < 0.0:
        raise ValueError(f"gain must be non-negative, got {g}")
    arr = np.asarray(losses, dtype=float)
    scalar = arr.ndim == 1
    if scalar:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != layout.dims:
        raise ValueError(
            f"loss vectors must have {layout.dims} entries, got shape {arr.shape}"
        )
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("loss fractions must lie in [0, 1]")
    out = np.empty(arr.shape[0])
    for start in range(0, arr.shape[0], _CHUNK):
        block = arr[start : start + _CHUNK]
        out[start : start + _CHUNK] = _evaluate_batch(
            g, tau, block, layout, pattern
        )
    return float(out[0]) if scalar else out


def make_gain_model(
    g: float,
    tau: float,
    layout: LossLayout | None = None,
    pattern: Sequence[int] = (1, 1, 0),
) -> Callable[[np.ndarray], np.ndarray]:
    """Batched loss -> gain callable for the sensitivity estimator."""

    def model(losses: np.ndarray) -> np.ndarray:
        return lossy_gain_model(g, tau, losses, layout=layout, pattern=pattern)

    return model


# ---------------------------------------------------------------------------
# Saltelli sampling and first-order index estimation
# ---------------------------------------------------------------------------

DEFAULT_LOSS_RANGE = (0.0, 0.5)


def saltelli_sample(
    n_base: int,
    dims: int,
    seed: int,
    bounds: tuple[float, float] = DEFAULT_LOSS_RANGE,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample matrices A, B and the column-swapped hybrids A_B^(i).

    A and B are independent uniform draws on ``bounds`` of shape
    (n_base, dims); the i-th hybrid equals A with column i replaced by B's.
    Evaluating a model on all of them costs n_base * (dims + 2) calls.
    Deterministic for a fixed seed.
    """
    if n_base < 2:
        raise ValueError("need at least 2 base samples")
    if dims < 1:
        raise ValueError("need at least one input dimension")
    lo, hi = bounds
    if not hi > lo:
        raise ValueError(f"empty sampling range {bounds}")
    rng = np.random.default_rng(seed)
    a = rng.uniform(lo, hi, size=(n_base, dims))
    b = rng.uniform(lo, hi, size=(n_base, dims))
    hybrids = np.empty((dims, n_base, dims))
    for i in range(dims):
        hybrids[i] = a
        hybrids[i][:, i] = b[:, i]
    return a, b, hybrids


@dataclass
class SobolResult:
    """First-order indices with bootstrap confidence half-widths."""

    indices: np.ndarray
    ci: np.ndarray
    n_base: int
    evaluations: int


def _evaluate_model(model, points: np.ndarray, vectorized: bool) -> np.ndarray:
    if vectorized:
        return np.asarray(model(points), dtype=float)
    return np.array([float(model(p)) for p in points])


def first_order_indices(
    model: Callable,
    n_base: int,
    seed: int,
    dims: int = 14,
    bounds: tuple[float, float] = DEFAULT_LOSS_RANGE,
    vectorized: bool = False,
    bootstrap_resamples: int = 1000,
) -> SobolResult:
    """Estimate first-order Sobol indices of ``model`` by Saltelli sampling.

    The estimator is V_i = mean(f(B) * (f(A_B^i) - f(A))), normalized by the
    sample variance of all evaluations.  Confidence half-widths (95%) come
    from a paired bootstrap over sample rows.  Identical seeds give bitwise
    identical results.
    """
    a, b, hybrids = saltelli_sample(n_base, dims, seed, bounds)
    f_a = _evaluate_model(model, a, vectorized)
    f_b = _evaluate_model(model, b, vectorized)
    f_hyb = np.stack(
        [_evaluate_model(model, hybrids[i], vectorized) for i in range(dims)]
    )

    all_values = np.concatenate([f_a[None, :], f_b[None, :], f_hyb], axis=0)
    mean_all = float(all_values.mean())
    variance = float(np.var(all_values, ddof=1))
    if not np.isfinite(variance) or variance <= 0.0:
        raise ValueError(
            "model output has zero variance over the sampled inputs; "
            "first-order indices are undefined"
        )

    # evaluations are centered on the overall mean first: the estimator is
    # shift invariant in expectation, and centering removes most of the
    # mean-level sampling noise from the cross products
    diff = f_hyb - f_a[None, :]  # [dims, n], independent of the centering
    cross = (f_b - mean_all)[None, :] * diff
    indices = cross.mean(axis=1) / variance

    # paired bootstrap over rows; mean and variance are recomputed per
    # resample from per-row sums so the loop stays O(resamples * n)
    rng = np.random.default_rng([int(seed), 0xB00])
    rows = all_values.shape[0]
    col_sum = all_values.sum(axis=0)
    col_sq_sum = (all_values**2).sum(axis=0)
    raw_cross = f_b[None, :] * diff
    boot = np.empty((bootstrap_resamples, dims))
    for r in range(bootstrap_resamples):
        idx = rng.integers(0, n_base, size=n_base)
        total = rows * n_base
        mean_r = col_sum[idx].sum() / total
        mean_sq_r = col_sq_sum[idx].sum() / total
        var_r = (mean_sq_r - mean_r**2) * total / (total - 1)
        if var_r <= 0.0:
            boot[r] = 0.0
            continue
        boot[r] = (
            raw_cross[:, idx].mean(axis=1) - mean_r * diff[:, idx].mean(axis=1)
        ) / var_r
    ci = 1.96 * boot.std(axis=0, ddof=1)

    return SobolResult(
        indices=indices,
        ci=ci,
        n_base=n_base,
        evaluations=n_base * (dims + 2),
    )


@dataclass
class SweepEntry:
    g: float
    result: SobolResult


def sensitivity_sweep(
    g_grid: Sequence[float],
    tau: float = 0.05,
    n_base: int = 3840,
    seed: int = 0,
    bounds: tuple[float, float] = DEFAULT_LOSS_RANGE,
    layout: LossLayout | None = None,
    pattern: Sequence[int] = (1, 1, 0),
    bootstrap_resamples: int = 1000,
) -> tuple[LossLayout, list[SweepEntry]]:
    """First-order indices of the loss model at each gain on the grid.

    The same seed (hence the same loss samples) is reused at every gain so
    the per-variable curves are directly comparable across g.
    """
    if layout is None:
        layout = default_loss_layout()
    entries = []
    for g in g_grid:
        model = make_gain_model(float(g), tau, layout=layout, pattern=pattern)
        result = first_order_indices(
            model,
            n_base,
            seed,
            dims=layout.dims,
            bounds=bounds,
            vectorized=True,
            bootstrap_resamples=bootstrap_resamples,
        )
        entries.append(SweepEntry(g=float(g), result=result))
    return layout, entries
