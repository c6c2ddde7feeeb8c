"""Single purification steps: recurrence sub-protocols P1/P2 and the localized
auxiliary step, with gate noise, MCNOT bit-string maps, and post-selection.

The heavy lifting runs in the Walsh (parity-character) domain, where every
XOR-convolution channel is an elementwise multiply, the MCNOT acts as the
transposed bit permutation, conditioning a bit to zero is an axis mean, and
marginalizing a bit is an axis slice.  The joint spectrum factorizes as the
outer product of the two copies' spectra, so nothing ever transforms at full
joint size.  This is an exact reformulation, not an approximation; the dense
oracle checks it against a literal gate-by-gate realization.

All steps are pure functions over immutable states; concurrent evaluation of
candidate steps (for virtual target scans) is safe.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graphs import (
    Graph,
    Star,
    TargetPartition,
    TwoColoring,
    ghz_star,
    pauli_flip_mask,
    two_coloring,
    vertex_set_mask,
)
from .states import (
    MAX_JOINT_BITS,
    DiagonalState,
    ImpossiblePostSelectionError,
    NoiseSpec,
    prepare_initial,
)

ZERO_MASS_TOL = 1e-12
_NEG_CLAMP_TOL = 1e-11


class SubProtocol(enum.Enum):
    P1 = "P1"
    P2 = "P2"


@dataclass(frozen=True)
class StepOutcome:
    """Retained main copy after a successful step, plus the step's success
    probability (the kept probability mass before renormalization)."""

    state: DiagonalState
    success_prob: float


@dataclass(frozen=True)
class BitPermutation:
    """Invertible GF(2)-linear map on bit strings, given as `dst ^= src` pairs
    with pairwise-independent sources/destinations (an involution)."""

    nbits: int
    pairs: tuple[tuple[int, int], ...]

    def apply_index(self, x: int) -> int:
        out = x
        for dst, src in self.pairs:
            out ^= ((x >> src) & 1) << dst
        return out

    def as_array(self) -> np.ndarray:
        ix = np.arange(1 << self.nbits, dtype=np.int64)
        out = ix.copy()
        for dst, src in self.pairs:
            out ^= ((ix >> src) & 1) << dst
        return out

    def transposed(self) -> "BitPermutation":
        return BitPermutation(
            nbits=self.nbits, pairs=tuple((src, dst) for dst, src in self.pairs)
        )


def _wht(vec: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform (involution up to 1/size)."""
    a = np.array(vec, dtype=np.float64, copy=True)
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(-1, 2 * h)
        x = a[:, :h].copy()
        y = a[:, h:].copy()
        a[:, :h] = x + y
        a[:, h:] = x - y
        h *= 2
    return a.ravel()


def _qubit_masks(g: Graph, qubit: int, shift: int) -> tuple[int, int]:
    mx = pauli_flip_mask(g, qubit, "X").bits << shift
    mz = pauli_flip_mask(g, qubit, "Z").bits << shift
    return mx, mz


@lru_cache(maxsize=32)
def _gate_noise_counts(nbits: int, mask_pairs: tuple[tuple[int, int], ...]) -> np.ndarray:
    """Per-spectrum-index count of noised qubits whose white-noise factor is
    p_g there (those where the index fails either parity condition)."""
    ix = np.arange(1 << nbits, dtype=np.int32)
    counts = np.zeros(1 << nbits, dtype=np.uint8)
    for mx, mz in mask_pairs:
        bad = np.bitwise_count(ix & np.int32(mx)) & 1
        if mz:
            bad |= np.bitwise_count(ix & np.int32(mz)) & 1
        counts += bad
    counts.flags.writeable = False
    return counts


def _apply_gate_noise_spectrum(
    spec: np.ndarray, nbits: int, mask_pairs: tuple[tuple[int, int], ...], p_g: float
) -> None:
    if p_g >= 1.0 or not mask_pairs:
        return
    counts = _gate_noise_counts(nbits, mask_pairs)
    powers = np.power(p_g, np.arange(len(mask_pairs) + 1))
    spec *= powers[counts]


def _walsh_reduce(
    spec: np.ndarray, nbits: int, zero_bits: tuple[int, ...], drop_bits: tuple[int, ...]
) -> np.ndarray:
    """Condition zero_bits to 0 and marginalize the whole aux block, in the
    spectral domain: slice dropped bits at parity index 0, average zeroed ones."""
    t = spec.reshape((2,) * nbits)
    index: list = [slice(None)] * nbits
    for b in drop_bits:
        index[nbits - 1 - b] = 0
    t = t[tuple(index)]
    remaining = [b for b in range(nbits - 1, -1, -1) if b not in drop_bits]
    zero_axes = tuple(remaining.index(b) for b in zero_bits)
    if zero_axes:
        t = t.mean(axis=zero_axes)
    return np.ascontiguousarray(t).ravel()


def _finish_step(graph_main: Graph, reduced_spec: np.ndarray) -> StepOutcome:
    success = float(reduced_spec[0])
    if success <= ZERO_MASS_TOL:
        raise ImpossiblePostSelectionError(
            f"post-selection keeps zero probability mass (got {success:g})"
        )
    out = _wht(reduced_spec) / (success * reduced_spec.size)
    low = float(out.min())
    if low < -_NEG_CLAMP_TOL:
        raise ArithmeticError(f"probability entry {low} below clamp tolerance")
    if low < 0.0:
        out = np.maximum(out, 0.0)
    return StepOutcome(
        state=DiagonalState(graph=graph_main, lambdas=out),
        success_prob=min(success, 1.0),
    )


def mcnot_map_tcp(g: Graph, coloring: TwoColoring, sub: SubProtocol) -> BitPermutation:
    """Joint-index action of the multilateral CNOT layer for a recurrence round:
    the retained copy's measured-color block picks up the second copy's, and
    the second copy's post-selected block picks up the retained copy's."""
    n = g.n
    if sub is SubProtocol.P1:
        xor_into_main, xor_into_aux = coloring.set_b, coloring.set_a
    else:
        xor_into_main, xor_into_aux = coloring.set_a, coloring.set_b
    pairs = [(v - 1, n + v - 1) for v in sorted(xor_into_main)]
    pairs += [(n + v - 1, v - 1) for v in sorted(xor_into_aux)]
    return BitPermutation(nbits=2 * n, pairs=tuple(pairs))


def mcnot_map_lep(g_main: Graph, part: TargetPartition) -> BitPermutation:
    """Joint-index action of the localized step's CNOT layer: the main copy's
    neighborhood bits pick up the auxiliary's, the auxiliary's target bit picks
    up the main target bit, and the remainder block is untouched."""
    star = ghz_star(part.target, part.neighbors)
    n = g_main.n
    pairs = [
        (v - 1, n + star.aux_label(v) - 1) for v in sorted(part.neighbors)
    ]
    pairs.append((n + star.center - 1, part.target - 1))
    return BitPermutation(nbits=n + star.graph.n, pairs=tuple(pairs))


def _check_gate_param(p_g: float) -> None:
    if not 0.0 <= p_g <= 1.0:
        raise ValueError(f"p_g = {p_g} outside [0, 1]")


def tcp_step(s: DiagonalState, sub: SubProtocol, p_g: float) -> StepOutcome:
    """One recurrence round consuming an identical second copy of `s`.

    Gate noise is one white-noise layer (parameter p_g) on every qubit of both
    copies: the per-CNOT depolarizing layers act on disjoint qubit pairs, so
    they commute to the front of the ideal MCNOT exactly.
    """
    _check_gate_param(p_g)
    g = s.graph
    coloring = two_coloring(g)
    n = g.n
    nbits = 2 * n
    if nbits > MAX_JOINT_BITS:
        raise ValueError(f"joint of two {n}-qubit copies exceeds the {MAX_JOINT_BITS}-bit cap")
    mask_a = vertex_set_mask(coloring.set_a)
    mask_b = vertex_set_mask(coloring.set_b)

    wh = _wht(s.lambdas)
    spec = np.multiply.outer(wh, wh).ravel()

    if p_g < 1.0:
        mask_pairs = tuple(
            _qubit_masks(g, v, 0) for v in range(1, n + 1)
        ) + tuple(_qubit_masks(g, v, n) for v in range(1, n + 1))
        _apply_gate_noise_spectrum(spec, nbits, mask_pairs, p_g)

    # Transposed MCNOT map, in aligned-block form (both copies share labels).
    ix = np.arange(1 << nbits, dtype=np.int32)
    if sub is SubProtocol.P1:
        perm_t = ix ^ ((ix >> n) & mask_a) ^ ((ix & mask_b) << n)
        selected = coloring.set_a
    else:
        perm_t = ix ^ ((ix >> n) & mask_b) ^ ((ix & mask_a) << n)
        selected = coloring.set_b
    spec = spec[perm_t]

    zero_bits = tuple(n + v - 1 for v in sorted(selected))
    drop_bits = tuple(
        n + v - 1 for v in range(1, n + 1) if v not in selected
    )
    reduced = _walsh_reduce(spec, nbits, zero_bits, drop_bits)
    return _finish_step(g, reduced)


@lru_cache(maxsize=256)
def _lep_perm_t(g: Graph, target: int) -> np.ndarray:
    from .graphs import partition_for_target

    arr = mcnot_map_lep(g, partition_for_target(g, target)).transposed().as_array()
    arr.flags.writeable = False
    return arr


def lep_step(
    main: DiagonalState, aux: DiagonalState, part: TargetPartition, p_g: float
) -> StepOutcome:
    """One localized step consuming a GHZ auxiliary spanning the target and its
    neighborhood; post-selects the single transformed target-bit condition and
    discards the auxiliary.  Gate noise touches only the CNOT participants."""
    _check_gate_param(p_g)
    g = main.graph
    star = ghz_star(part.target, part.neighbors)
    if aux.graph != star.graph:
        raise ValueError(
            "auxiliary state does not match the star graph for this partition"
        )
    n = g.n
    k = star.graph.n
    nbits = n + k
    if nbits > MAX_JOINT_BITS:
        raise ValueError(f"{n}+{k}-qubit joint exceeds the {MAX_JOINT_BITS}-bit cap")

    wh_main = _wht(main.lambdas)
    wh_aux = _wht(aux.lambdas)
    spec = np.multiply.outer(wh_aux, wh_main).ravel()

    if p_g < 1.0:
        touched_main = sorted({part.target, *part.neighbors})
        mask_pairs = tuple(
            _qubit_masks(g, v, 0) for v in touched_main
        ) + tuple(_qubit_masks(star.graph, w, n) for w in range(1, k + 1))
        _apply_gate_noise_spectrum(spec, nbits, mask_pairs, p_g)

    spec = spec[_lep_perm_t(g, part.target)]

    zero_bits = (n + star.center - 1,)
    drop_bits = tuple(n + w - 1 for w in range(1, k + 1) if w != star.center)
    reduced = _walsh_reduce(spec, nbits, zero_bits, drop_bits)
    return _finish_step(g, reduced)


def prepurify_aux(
    aux_initial: DiagonalState,
    alpha: int,
    p_g: float,
    start: SubProtocol = SubProtocol.P1,
) -> tuple[DiagonalState, float, list[float]]:
    """Alpha recurrence rounds (alternating P1, P2, ... starting with `start`,
    P1 by default) on the auxiliary before it meets the main state; the cost
    multiplier is the product of the per-round 2/q factors.

    On a star, P1 post-selects the center's color set and P2 the leaves', so
    the phase decides which residual errors the final round cleans: leftover
    leaf errors are injected into the main state by the MCNOT, while leftover
    center errors only cause false accepts.  Strategy scans therefore evaluate
    both phases as separate candidates.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    other = SubProtocol.P2 if start is SubProtocol.P1 else SubProtocol.P1
    state = aux_initial
    multiplier = 1.0
    probs: list[float] = []
    for k in range(alpha):
        outcome = tcp_step(state, start if k % 2 == 0 else other, p_g)
        state = outcome.state
        probs.append(outcome.success_prob)
        multiplier *= 2.0 / outcome.success_prob
    return state, multiplier, probs


def build_aux(
    g: Graph,
    noise: NoiseSpec,
    target: int,
    alpha: int,
    start: SubProtocol = SubProtocol.P1,
) -> tuple[DiagonalState, Star, float, list[float]]:
    """Noisy (optionally pre-purified) auxiliary for one target: the GHZ star
    inherits the scenario noise restricted to the physical qubits it spans."""
    star = ghz_star(target, g.neighbors(target))
    aux0 = prepare_initial(star.graph, noise.restricted_to(star))
    aux, multiplier, probs = prepurify_aux(aux0, alpha, noise.gate, start)
    return aux, star, multiplier, probs
