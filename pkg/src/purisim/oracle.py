"""Brute-force reference simulator: full density-matrix evolution of graph
states, Kraus noise channels, explicit CNOT gates, and post-selected stabilizer
measurements.

This module deliberately shares no formalism with the diagonal engine: gate
noise is applied literally per CNOT (noise layer, then that gate, in sequence)
rather than commuted to a front layer, and states are full complex matrices.
Agreement between the two paths is therefore evidence, not tautology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, TargetPartition, ghz_star, two_coloring
from .protocols import SubProtocol

MAX_DENSE_QUBITS = 13
MAX_STEP_QUBITS = 12
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class DenseState:
    """Full density matrix on n qubits (bit v-1 of the index <-> vertex v)."""

    n: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dim = 1 << self.n
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {self.matrix.shape}, expected {dim}x{dim}")

    def check(self, psd: bool = False) -> None:
        m = self.matrix
        if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise ValueError(f"density matrix trace {np.trace(m)} differs from 1")
        if psd:
            low = float(np.linalg.eigvalsh(m).min())
            if low < -1e-10:
                raise ValueError(f"density matrix has negative eigenvalue {low}")


@dataclass(frozen=True)
class KrausChannel:
    """Single-qubit channel given by explicit 2x2 Kraus operators.

    When every operator is a scaled Pauli, `pauli_weights` records the channel
    as a Pauli mixture (weight, kind); the application routine then evaluates
    the identical Kraus sum via exact conjugation arithmetic instead of dense
    2x2 block multiplies.
    """

    operators: tuple[np.ndarray, ...]
    pauli_weights: tuple[tuple[float, str], ...] | None = None

    def check_complete(self) -> None:
        acc = np.zeros((2, 2), dtype=complex)
        for k in self.operators:
            acc += k.conj().T @ k
        if np.abs(acc - np.eye(2)).max() > COMPLETENESS_TOL:
            raise ValueError("Kraus operators do not satisfy completeness")


_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def white_noise_channel(p_w: float) -> KrausChannel:
    a = np.sqrt(p_w + (1.0 - p_w) / 4.0)
    b = np.sqrt((1.0 - p_w) / 4.0)
    return KrausChannel(
        operators=(a * _I, b * _X, b * _Y, b * _Z),
        pauli_weights=(
            (a * a, "I"),
            (b * b, "X"),
            (b * b, "Y"),
            (b * b, "Z"),
        ),
    )


def dephasing_channel(p_z: float) -> KrausChannel:
    return KrausChannel(
        operators=(np.sqrt(p_z) * _I, np.sqrt(1.0 - p_z) * _Z),
        pauli_weights=((p_z, "I"), (1.0 - p_z, "Z")),
    )


def graph_state_vector(g: Graph) -> np.ndarray:
    """|+>^n followed by a CZ on every edge (sign flip where both bits are 1)."""
    if g.n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense representation capped at {MAX_DENSE_QUBITS} qubits")
    dim = 1 << g.n
    psi = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    ix = np.arange(dim)
    for u, v in sorted(g.edges):
        mask = (1 << (u - 1)) | (1 << (v - 1))
        psi[(ix & mask) == mask] *= -1.0
    return psi


def dense_graph_state(g: Graph) -> DenseState:
    psi = graph_state_vector(g)
    return DenseState(n=g.n, matrix=np.outer(psi, psi.conj()))


def _mat_on_rows(rho: np.ndarray, n: int, qubit: int, k: np.ndarray) -> np.ndarray:
    """Left-multiply by a single-qubit operator: out = (k on `qubit`) rho."""
    pre = 1 << (n - qubit)
    dim = 1 << n
    v = rho.reshape(pre, 2, -1)
    out = np.empty_like(v)
    out[:, 0, :] = k[0, 0] * v[:, 0, :] + k[0, 1] * v[:, 1, :]
    out[:, 1, :] = k[1, 0] * v[:, 0, :] + k[1, 1] * v[:, 1, :]
    return out.reshape(dim, dim)


def _mat_on_cols(rho: np.ndarray, n: int, qubit: int, k: np.ndarray) -> np.ndarray:
    """Right-multiply by the dagger: out = rho (k on `qubit`)^dagger."""
    pre = 1 << (n - qubit)
    dim = 1 << n
    v = rho.reshape(dim, pre, 2, -1)
    out = np.empty_like(v)
    kc = k.conj()
    out[:, :, 0, :] = kc[0, 0] * v[:, :, 0, :] + kc[0, 1] * v[:, :, 1, :]
    out[:, :, 1, :] = kc[1, 0] * v[:, :, 0, :] + kc[1, 1] * v[:, :, 1, :]
    return out.reshape(dim, dim)


def _pauli_conjugate(rho: np.ndarray, n: int, qubit: int, kind: str) -> np.ndarray:
    """sigma rho sigma for a single-qubit Pauli (the Y phases cancel)."""
    if kind == "I":
        return rho
    dim = 1 << n
    ix = np.arange(dim)
    flip = ix ^ (1 << (qubit - 1))
    sign = 1.0 - 2.0 * ((ix >> (qubit - 1)) & 1)
    if kind == "X":
        return rho[flip][:, flip]
    if kind == "Z":
        return sign[:, None] * rho * sign[None, :]
    flipped = rho[flip][:, flip]
    return sign[:, None] * flipped * sign[None, :]


def apply_kraus_1q(rho: np.ndarray, n: int, qubit: int, channel: KrausChannel) -> np.ndarray:
    """Sum_k K rho K^dagger with each K acting on one qubit."""
    if channel.pauli_weights is not None:
        out = np.zeros_like(rho)
        for weight, kind in channel.pauli_weights:
            if weight != 0.0:
                out += weight * _pauli_conjugate(rho, n, qubit, kind)
        return out
    out = np.zeros_like(rho)
    for k in channel.operators:
        out += _mat_on_cols(_mat_on_rows(rho, n, qubit, k), n, qubit, k)
    return out


def apply_cnot(rho: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    dim = 1 << n
    ix = np.arange(dim)
    perm = ix ^ (((ix >> (control - 1)) & 1) << (target - 1))
    return rho[perm][:, perm]


def _project_stabilizer(rho: np.ndarray, n: int, x_qubit: int, z_qubits) -> np.ndarray:
    """(I+K)/2 rho (I+K)/2 for the correlation operator K = X on x_qubit and Z
    on z_qubits.  Keeping only the +1 outcome patterns of the per-qubit X/Z
    measurements is exactly this projection: the product basis diagonalizes K,
    with eigenvalue (-1)^(transformed syndrome bit) on each product vector."""
    dim = 1 << n
    ix = np.arange(dim)
    xmask = 1 << (x_qubit - 1)
    zmask = 0
    for q in z_qubits:
        zmask |= 1 << (q - 1)
    sign = 1.0 - 2.0 * (np.bitwise_count(ix & zmask) & 1).astype(float)
    k_rho = sign[:, None] * rho[ix ^ xmask, :]
    rho_k = sign[None, :] * rho[:, ix ^ xmask]
    k_rho_k = sign[:, None] * sign[None, :] * rho[ix ^ xmask][:, ix ^ xmask]
    return 0.25 * (rho + k_rho + rho_k + k_rho_k)


def _trace_out_high_block(rho: np.ndarray, n_keep: int, n_drop: int) -> np.ndarray:
    view = rho.reshape(1 << n_drop, 1 << n_keep, 1 << n_drop, 1 << n_keep)
    return np.einsum("aman->mn", view)


def dense_joint(main: DenseState, second: DenseState) -> DenseState:
    """Tensor product with the main copy in the low bits of the joint index."""
    n = main.n + second.n
    if n > MAX_STEP_QUBITS:
        raise ValueError(f"oracle steps capped at {MAX_STEP_QUBITS} total qubits")
    return DenseState(n=n, matrix=np.kron(second.matrix, main.matrix))


def oracle_prepare_initial(g: Graph, noise) -> DenseState:
    """Same channel sequence as the engine's initial-state model, realized with
    dense Kraus applications."""
    rho = dense_graph_state(g).matrix
    for qubit in range(1, g.n + 1):
        p_w = noise.white_for(qubit)
        if p_w < 1.0:
            rho = apply_kraus_1q(rho, g.n, qubit, white_noise_channel(p_w))
    for qubit in sorted(noise.dephasing):
        p_z = noise.dephasing[qubit]
        if p_z < 1.0:
            rho = apply_kraus_1q(rho, g.n, qubit, dephasing_channel(p_z))
    return DenseState(n=g.n, matrix=rho)


def _noisy_cnot(rho: np.ndarray, n: int, control: int, target: int, p_g: float) -> np.ndarray:
    if p_g < 1.0:
        ch = white_noise_channel(p_g)
        rho = apply_kraus_1q(rho, n, control, ch)
        rho = apply_kraus_1q(rho, n, target, ch)
    return apply_cnot(rho, n, control, target)


def oracle_tcp_step(
    rho_main: DenseState, rho_second: DenseState, g: Graph, sub: SubProtocol, p_g: float
) -> tuple[DenseState, float]:
    """Literal recurrence round: per-qubit noisy CNOTs in the sub-protocol's
    directions, stabilizer post-selection on the second copy, partial trace."""
    coloring = two_coloring(g)
    n = g.n
    j = dense_joint(rho_main, rho_second)
    rho = j.matrix
    selected = coloring.set_a if sub is SubProtocol.P1 else coloring.set_b
    for v in range(1, n + 1):
        if v in selected:
            control, target = n + v, v
        else:
            control, target = v, n + v
        rho = _noisy_cnot(rho, j.n, control, target, p_g)
    for i in sorted(selected):
        rho = _project_stabilizer(
            rho, j.n, n + i, [n + w for w in g.neighbors(i)]
        )
    reduced = _trace_out_high_block(rho, n_keep=n, n_drop=n)
    prob = float(np.trace(reduced).real)
    if prob <= 1e-12:
        raise ValueError("oracle post-selection keeps zero probability mass")
    return DenseState(n=n, matrix=reduced / prob), prob


def oracle_lep_step(
    rho_main: DenseState,
    rho_aux: DenseState,
    g: Graph,
    part: TargetPartition,
    p_g: float,
) -> tuple[DenseState, float]:
    """Literal localized step: noisy CNOT from the auxiliary center onto the
    target, noisy CNOTs from each neighbor onto its auxiliary leaf, one
    stabilizer post-selection on the auxiliary, partial trace."""
    star = ghz_star(part.target, part.neighbors)
    n = g.n
    j = dense_joint(rho_main, rho_aux)
    rho = j.matrix
    rho = _noisy_cnot(rho, j.n, n + star.center, part.target, p_g)
    for v in sorted(part.neighbors):
        rho = _noisy_cnot(rho, j.n, v, n + star.aux_label(v), p_g)
    rho = _project_stabilizer(
        rho,
        j.n,
        n + star.center,
        [n + star.aux_label(v) for v in sorted(part.neighbors)],
    )
    reduced = _trace_out_high_block(rho, n_keep=n, n_drop=star.graph.n)
    prob = float(np.trace(reduced).real)
    if prob <= 1e-12:
        raise ValueError("oracle post-selection keeps zero probability mass")
    return DenseState(n=n, matrix=reduced / prob), prob


def _fwht_2d(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along both axes."""
    out = a.copy()
    for axis in (0, 1):
        n = out.shape[axis]
        h = 1
        while h < n:
            if axis == 0:
                v = out.reshape(-1, 2, h, out.shape[1])
                x = v[:, 0, :, :].copy()
                y = v[:, 1, :, :].copy()
                v[:, 0, :, :] = x + y
                v[:, 1, :, :] = x - y
            else:
                v = out.reshape(out.shape[0], -1, 2, h)
                x = v[:, :, 0, :].copy()
                y = v[:, :, 1, :].copy()
                v[:, :, 0, :] = x + y
                v[:, :, 1, :] = x - y
            h *= 2
    return out


def graph_basis_diagonal(rho: DenseState, g: Graph) -> tuple[np.ndarray, float]:
    """Diagonal of rho in the graph-state basis of g, plus the Frobenius norm
    of the off-diagonal remainder in that basis."""
    if rho.n != g.n:
        raise ValueError("state and graph dimensions differ")
    psi = graph_state_vector(g)
    a = psi.conj()[:, None] * rho.matrix * psi[None, :]
    r = _fwht_2d(a)
    diag = np.real(np.diagonal(r)).copy()
    off = r.copy()
    np.fill_diagonal(off, 0.0)
    residual = float(np.linalg.norm(off))
    return diag, residual
