"""Diagonal graph-state-basis representation and Pauli noise channels.

A noisy graph state is a probability vector over 2^N syndrome bit strings;
every channel is a convex combination of XOR relabelings of that vector.
All arithmetic is double precision and fully analytic: probabilities are
propagated, never sampled.

States are immutable values (the coefficient array is frozen on
construction); every operation returns a new state, so concurrent use over
disjoint or shared states is safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, Star, pauli_flip_mask

SUM_TOL = 1e-12
MAX_JOINT_BITS = 26


class ImpossiblePostSelectionError(RuntimeError):
    """Post-selection condition has zero kept mass (step fails with certainty)."""


def _check_prob_vector(lambdas: np.ndarray, nbits: int) -> None:
    if lambdas.shape != (1 << nbits,):
        raise ValueError(
            f"probability vector has length {lambdas.shape}, expected 2^{nbits}"
        )
    if lambdas.min(initial=0.0) < 0.0:
        raise ValueError(f"negative probability entry: {lambdas.min()}")
    total = float(lambdas.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"probability vector sums to {total!r}, not 1")


@dataclass(frozen=True)
class DiagonalState:
    """Mixture over the graph-state basis of `graph`, as coefficients lambda_mu."""

    graph: Graph
    lambdas: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_prob_vector(self.lambdas, self.graph.n)
        self.lambdas.flags.writeable = False

    def fidelity(self) -> float:
        return float(self.lambdas[0])

    def dump_text(self) -> str:
        """Debug dump: one `bitstring coefficient` line per basis state."""
        n = self.graph.n
        lines = []
        for idx, lam in enumerate(self.lambdas):
            bits = "".join("1" if (idx >> i) & 1 else "0" for i in range(n))
            lines.append(f"{bits} {lam:.17g}")
        return "\n".join(lines)


@dataclass(frozen=True)
class JointState:
    """Product state of two copies: main copy in the low bits, second copy
    (full copy or auxiliary) in the high bits."""

    graph_main: Graph
    graph_aux: Graph
    lambdas: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_prob_vector(self.lambdas, self.nbits)
        self.lambdas.flags.writeable = False

    @property
    def nbits(self) -> int:
        return self.graph_main.n + self.graph_aux.n


@dataclass(frozen=True)
class NoiseSpec:
    """Initial-state noise (per-qubit white + selective dephasing) and gate noise.

    `white` is either a scalar applied uniformly or a map vertex -> parameter;
    a vertex absent from `dephasing` gets no dephasing (parameter 1).
    """

    white: float | dict[int, float] = 1.0
    dephasing: dict[int, float] = field(default_factory=dict)
    gate: float = 1.0

    def __post_init__(self):
        for name, value in self._all_params():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} = {value} outside [0, 1]")

    def _all_params(self):
        if isinstance(self.white, dict):
            for q, v in self.white.items():
                yield f"white[{q}]", v
        else:
            yield "white", self.white
        for q, v in self.dephasing.items():
            yield f"dephasing[{q}]", v
        yield "gate", self.gate

    def white_for(self, qubit: int) -> float:
        if isinstance(self.white, dict):
            return self.white.get(qubit, 1.0)
        return self.white

    def restricted_to(self, star: Star) -> "NoiseSpec":
        """Noise spec for an auxiliary state, rekeyed to its aux labels."""
        white = {
            aux + 1: self.white_for(phys) for aux, phys in enumerate(star.physical)
        }
        dephasing = {
            aux + 1: self.dephasing[phys]
            for aux, phys in enumerate(star.physical)
            if phys in self.dephasing
        }
        return NoiseSpec(white=white, dephasing=dephasing, gate=self.gate)

    def describe(self) -> str:
        if isinstance(self.white, dict):
            white = ",".join(f"{q}:{self.white[q]:g}" for q in sorted(self.white))
        else:
            white = f"{self.white:g}"
        z = ",".join(f"{q}:{self.dephasing[q]:g}" for q in sorted(self.dephasing))
        return f"pw={white};pz={{{z}}};pg={self.gate:g}"


def xor_relabel(lambdas: np.ndarray, mask: int) -> np.ndarray:
    """Vector with entry at index mu taken from index mu XOR mask."""
    if mask == 0:
        return lambdas
    ix = np.arange(lambdas.size, dtype=np.int64)
    return lambdas[ix ^ mask]


def pure_graph_state(g: Graph) -> DiagonalState:
    lam = np.zeros(1 << g.n)
    lam[0] = 1.0
    return DiagonalState(graph=g, lambdas=lam)


def apply_dephasing(s: DiagonalState, qubit: int, p_z: float) -> DiagonalState:
    if not 0.0 <= p_z <= 1.0:
        raise ValueError(f"p_z = {p_z} outside [0, 1]")
    mask = pauli_flip_mask(s.graph, qubit, "Z").bits
    lam = p_z * s.lambdas + (1.0 - p_z) * xor_relabel(s.lambdas, mask)
    return DiagonalState(graph=s.graph, lambdas=lam)


def apply_white_noise(s: DiagonalState, qubit: int, p_w: float) -> DiagonalState:
    if not 0.0 <= p_w <= 1.0:
        raise ValueError(f"p_w = {p_w} outside [0, 1]")
    g = s.graph
    mx = pauli_flip_mask(g, qubit, "X").bits
    my = pauli_flip_mask(g, qubit, "Y").bits
    mz = pauli_flip_mask(g, qubit, "Z").bits
    q = (1.0 - p_w) / 4.0
    lam = (p_w + q) * s.lambdas + q * (
        xor_relabel(s.lambdas, mx)
        + xor_relabel(s.lambdas, my)
        + xor_relabel(s.lambdas, mz)
    )
    return DiagonalState(graph=g, lambdas=lam)


def prepare_initial(g: Graph, noise: NoiseSpec) -> DiagonalState:
    """Pure graph state, then white noise on every qubit, then dephasing on the
    selected qubits, each in ascending label order (the maps commute)."""
    s = pure_graph_state(g)
    for qubit in range(1, g.n + 1):
        p_w = noise.white_for(qubit)
        if p_w < 1.0:
            s = apply_white_noise(s, qubit, p_w)
    for qubit in sorted(noise.dephasing):
        if qubit > g.n:
            raise ValueError(f"dephasing on qubit {qubit} outside 1..{g.n}")
        p_z = noise.dephasing[qubit]
        if p_z < 1.0:
            s = apply_dephasing(s, qubit, p_z)
    return s


def fidelity(s: DiagonalState) -> float:
    return s.fidelity()


def joint(main: DiagonalState, aux: DiagonalState, max_bits: int = MAX_JOINT_BITS) -> JointState:
    nbits = main.graph.n + aux.graph.n
    if nbits > max_bits:
        raise ValueError(
            f"joint state needs {nbits} bits, above the {max_bits}-bit cap"
        )
    lam = np.multiply.outer(aux.lambdas, main.lambdas).ravel()
    return JointState(graph_main=main.graph, graph_aux=aux.graph, lambdas=lam)


def post_select_and_marginalize(
    j: JointState, zero_bits, drop_bits
) -> tuple[DiagonalState, float]:
    """Condition on `zero_bits` being 0, sum out `drop_bits`, renormalize.

    Bits are 0-based positions in the joint index; both sets must lie in the
    second (high) block and together cover it, so the result is indexed by
    exactly the main block.  The kept mass is returned as the success
    probability.
    """
    zero_bits = sorted(zero_bits)
    drop_bits = sorted(drop_bits)
    n_main = j.graph_main.n
    nbits = j.nbits
    aux_bits = set(range(n_main, nbits))
    if set(zero_bits) & set(drop_bits):
        raise ValueError("zero_bits and drop_bits must be disjoint")
    if set(zero_bits) | set(drop_bits) != aux_bits:
        raise ValueError("zero_bits and drop_bits must cover the aux block exactly")

    t = j.lambdas.reshape((2,) * nbits)  # axis a <-> bit nbits-1-a
    index: list = [slice(None)] * nbits
    for b in zero_bits:
        index[nbits - 1 - b] = 0
    kept = t[tuple(index)]
    remaining = [b for b in range(nbits - 1, -1, -1) if b not in zero_bits]
    drop_axes = tuple(remaining.index(d) for d in drop_bits)
    reduced = kept.sum(axis=drop_axes) if drop_axes else kept
    success = float(reduced.sum())
    if success <= 0.0:
        raise ImpossiblePostSelectionError(
            "post-selection keeps zero probability mass"
        )
    out = (reduced / success).ravel()
    return DiagonalState(graph=j.graph_main, lambdas=out), success
