"""Self-contained correctness suite behind the `validate` CLI verb.

Includes probability-space reference implementations of both protocol steps
(joint build, mask-form noise, index permutation, post-selection through the
public marginalization op) used to cross-check the spectral fast path, plus a
condensed version of the invariant and oracle-equivalence suites.
"""

from __future__ import annotations

import numpy as np

from . import oracle as orc
from .graphs import (
    ghz_star,
    grid_cluster,
    linear_cluster,
    partition_for_target,
    pauli_flip_mask,
    two_coloring,
)
from .protocols import (
    SubProtocol,
    build_aux,
    lep_step,
    mcnot_map_lep,
    mcnot_map_tcp,
    tcp_step,
)
from .resources import (
    interpolate_to_fidelity,
    interpolate_to_resources,
    new_ledger,
    tcp_round_update,
)
from .states import (
    DiagonalState,
    JointState,
    NoiseSpec,
    apply_dephasing,
    apply_white_noise,
    joint,
    post_select_and_marginalize,
    prepare_initial,
    xor_relabel,
)
from .strategies import StopRule, run_s_alpha, run_tcp, virtual_best_target


def _joint_white_noise(lam: np.ndarray, mx: int, my: int, mz: int, p: float) -> np.ndarray:
    q = (1.0 - p) / 4.0
    return (p + q) * lam + q * (
        xor_relabel(lam, mx) + xor_relabel(lam, my) + xor_relabel(lam, mz)
    )


def _gate_noise_probability_space(j: JointState, qubits_main, qubits_aux, p_g: float) -> JointState:
    lam = j.lambdas
    n = j.graph_main.n
    for v in qubits_main:
        mx = pauli_flip_mask(j.graph_main, v, "X").bits
        mz = pauli_flip_mask(j.graph_main, v, "Z").bits
        lam = _joint_white_noise(lam, mx, mx ^ mz, mz, p_g)
    for w in qubits_aux:
        mx = pauli_flip_mask(j.graph_aux, w, "X").bits << n
        mz = pauli_flip_mask(j.graph_aux, w, "Z").bits << n
        lam = _joint_white_noise(lam, mx, mx ^ mz, mz, p_g)
    return JointState(graph_main=j.graph_main, graph_aux=j.graph_aux, lambdas=lam)


def naive_tcp_step(s: DiagonalState, sub: SubProtocol, p_g: float):
    """Reference recurrence round built from the public probability-space ops."""
    g = s.graph
    coloring = two_coloring(g)
    n = g.n
    j = joint(s, s)
    if p_g < 1.0:
        j = _gate_noise_probability_space(
            j, range(1, n + 1), range(1, n + 1), p_g
        )
    perm = mcnot_map_tcp(g, coloring, sub).as_array()
    j = JointState(graph_main=g, graph_aux=g, lambdas=j.lambdas[perm])
    selected = coloring.set_a if sub is SubProtocol.P1 else coloring.set_b
    zero_bits = [n + v - 1 for v in sorted(selected)]
    drop_bits = [n + v - 1 for v in range(1, n + 1) if v not in selected]
    return post_select_and_marginalize(j, zero_bits, drop_bits)


def naive_lep_step(main: DiagonalState, aux: DiagonalState, part, p_g: float):
    """Reference localized step built from the public probability-space ops."""
    g = main.graph
    star = ghz_star(part.target, part.neighbors)
    n = g.n
    j = joint(main, aux)
    if p_g < 1.0:
        j = _gate_noise_probability_space(
            j, sorted({part.target, *part.neighbors}), range(1, star.graph.n + 1), p_g
        )
    perm = mcnot_map_lep(g, part).as_array()
    j = JointState(graph_main=g, graph_aux=star.graph, lambdas=j.lambdas[perm])
    zero_bits = [n + star.center - 1]
    drop_bits = [n + w - 1 for w in range(1, star.graph.n + 1) if w != star.center]
    return post_select_and_marginalize(j, zero_bits, drop_bits)


def _random_noise(g, rng, p_g: float) -> NoiseSpec:
    white = {q: float(rng.uniform(0.8, 1.0)) for q in range(1, g.n + 1)}
    count = int(rng.integers(0, g.n + 1))
    qubits = rng.choice(np.arange(1, g.n + 1), size=count, replace=False)
    dephasing = {int(q): float(rng.uniform(0.6, 1.0)) for q in qubits}
    return NoiseSpec(white=white, dephasing=dephasing, gate=p_g)


def _random_state(g, rng) -> DiagonalState:
    lam = rng.random(1 << g.n)
    lam /= lam.sum()
    return DiagonalState(graph=g, lambdas=lam)


Check = tuple[str, bool, str]


def check_channel_identities(rng) -> Check:
    g = linear_cluster(5)
    for _ in range(200):
        s = _random_state(g, rng)
        q = int(rng.integers(1, 6))
        if np.abs(apply_white_noise(s, q, 1.0).lambdas - s.lambdas).max() > 0:
            return ("channel identities", False, "white p=1 not identity")
        if np.abs(apply_dephasing(s, q, 1.0).lambdas - s.lambdas).max() > 0:
            return ("channel identities", False, "dephasing p=1 not identity")
        p1, p2 = rng.uniform(0, 1, size=2)
        a = apply_dephasing(apply_dephasing(s, q, p1), q, p2)
        b = apply_dephasing(s, q, p1 * p2 + (1 - p1) * (1 - p2))
        if np.abs(a.lambdas - b.lambdas).max() > 1e-12:
            return ("channel identities", False, "semigroup law violated")
        q2 = int(rng.integers(1, 6))
        if q2 != q:
            ab = apply_white_noise(apply_dephasing(s, q, p1), q2, p2)
            ba = apply_dephasing(apply_white_noise(s, q2, p2), q, p1)
            if np.abs(ab.lambdas - ba.lambdas).max() > 1e-12:
                return ("channel identities", False, "distinct-qubit channels do not commute")
    return ("channel identities", True, "identity/semigroup/commutation on 200 random states")


def check_mask_composition(rng) -> Check:
    for g in (linear_cluster(6), grid_cluster(2, 3), ghz_star(1, [2, 3, 4]).graph):
        for v in range(1, g.n + 1):
            x = pauli_flip_mask(g, v, "X").bits
            y = pauli_flip_mask(g, v, "Y").bits
            z = pauli_flip_mask(g, v, "Z").bits
            if x ^ z != y:
                return ("mask composition", False, f"X^Z != Y at vertex {v}")
    return ("mask composition", True, "X xor Z = Y on the graph zoo")


def check_mcnot_bijectivity(rng) -> Check:
    cases = []
    for g in (linear_cluster(2), linear_cluster(4), linear_cluster(6), grid_cluster(2, 3)):
        coloring = two_coloring(g)
        for sub in SubProtocol:
            cases.append(mcnot_map_tcp(g, coloring, sub))
    for g, t in ((linear_cluster(8), 4), (grid_cluster(2, 3), 2), (linear_cluster(8), 1)):
        cases.append(mcnot_map_lep(g, partition_for_target(g, t)))
    for perm in cases:
        arr = perm.as_array()
        if not np.array_equal(np.sort(arr), np.arange(arr.size)):
            return ("mcnot bijectivity", False, f"map on {perm.nbits} bits not bijective")
        if not np.array_equal(arr[arr], np.arange(arr.size)):
            return ("mcnot bijectivity", False, f"map on {perm.nbits} bits not involutive")
    return ("mcnot bijectivity", True, f"{len(cases)} instances up to 12 bits")


def check_step_reference(rng) -> Check:
    graphs = [linear_cluster(3), linear_cluster(4), grid_cluster(2, 2)]
    for trial in range(30):
        g = graphs[int(rng.integers(len(graphs)))]
        p_g = [1.0, 0.99][int(rng.integers(2))]
        s = _random_state(g, rng)
        sub = [SubProtocol.P1, SubProtocol.P2][int(rng.integers(2))]
        fast = tcp_step(s, sub, p_g)
        ref_state, ref_p = naive_tcp_step(s, sub, p_g)
        if (
            np.abs(fast.state.lambdas - ref_state.lambdas).max() > 1e-12
            or abs(fast.success_prob - ref_p) > 1e-12
        ):
            return ("step reference", False, f"tcp mismatch on trial {trial}")
        t = int(rng.integers(1, g.n + 1))
        part = partition_for_target(g, t)
        aux = _random_state(ghz_star(t, part.neighbors).graph, rng)
        fast = lep_step(s, aux, part, p_g)
        ref_state, ref_p = naive_lep_step(s, aux, part, p_g)
        if (
            np.abs(fast.state.lambdas - ref_state.lambdas).max() > 1e-12
            or abs(fast.success_prob - ref_p) > 1e-12
        ):
            return ("step reference", False, f"lep mismatch on trial {trial}")
    return ("step reference", True, "spectral path equals probability-space path, 30 trials")


def check_oracle_equivalence(rng) -> Check:
    graphs = [linear_cluster(3), linear_cluster(4), grid_cluster(2, 2), ghz_star(1, [2, 3]).graph]
    for trial in range(16):
        g = graphs[int(rng.integers(len(graphs)))]
        p_g = [1.0, 0.99][int(rng.integers(2))]
        noise = _random_noise(g, rng, p_g)
        s = prepare_initial(g, noise)
        rho = orc.oracle_prepare_initial(g, noise)
        if trial % 2 == 0:
            sub = [SubProtocol.P1, SubProtocol.P2][int(rng.integers(2))]
            out = tcp_step(s, sub, p_g)
            dense, prob = orc.oracle_tcp_step(rho, rho, g, sub, p_g)
        else:
            t = int(rng.integers(1, g.n + 1))
            if not g.neighbors(t):
                continue
            part = partition_for_target(g, t)
            aux, star, _, _ = build_aux(g, noise, t, 0)
            out = lep_step(s, aux, part, p_g)
            aux_rho = orc.oracle_prepare_initial(star.graph, noise.restricted_to(star))
            dense, prob = orc.oracle_lep_step(rho, aux_rho, g, part, p_g)
        diag, residual = orc.graph_basis_diagonal(dense, g)
        if np.abs(diag - out.state.lambdas).max() > 1e-9:
            return ("oracle equivalence", False, f"lambda mismatch on trial {trial}")
        if abs(prob - out.success_prob) > 1e-9:
            return ("oracle equivalence", False, f"probability mismatch on trial {trial}")
        if residual > 1e-12:
            return ("oracle equivalence", False, f"off-diagonal residual {residual}")
    return ("oracle equivalence", True, "engine matches dense oracle on 16 random scenarios")


def check_resources(rng) -> Check:
    for _ in range(100):
        probs = rng.uniform(0.05, 1.0, size=int(rng.integers(1, 8)))
        ledger = new_ledger(7.0)
        for p in probs:
            ledger = tcp_round_update(ledger, float(p))
        closed = 7.0 * float(np.prod(2.0 / probs))
        if abs(ledger.current - closed) > 1e-12 * max(1.0, closed):
            return ("resource accounting", False, "recurrence and product forms disagree")
    return ("resource accounting", True, "recurrence equals product form, 100 sequences")


class _FakeTrace:
    def __init__(self, rows):
        self.rounds = rows


def check_interpolation(rng) -> Check:
    from .strategies import TraceRound

    for _ in range(200):
        count = int(rng.integers(2, 8))
        fids = np.sort(rng.uniform(0.3, 0.999, size=count))
        res = np.sort(rng.uniform(10, 1e5, size=count))
        rows = [
            TraceRound(i, "x", float(fids[i]), 1.0, float(res[i]))
            for i in range(count)
        ]
        trace = _FakeTrace(rows)
        target = float(rng.uniform(fids[0], fids[-1]))
        tf = interpolate_to_fidelity(trace, target)
        if tf.status == "interpolated":
            back = interpolate_to_resources(trace, tf.value)
            if abs(back.value - target) > 1e-10:
                return ("interpolation round-trip", False, f"{back.value} != {target}")
    return ("interpolation round-trip", True, "fidelity->resources->fidelity to 1e-10")


def check_virtual_purity(rng) -> Check:
    g = linear_cluster(6)
    noise = NoiseSpec(white=0.97, dephasing={2: 0.8}, gate=0.998)
    s = prepare_initial(g, noise)
    before = s.lambdas.tobytes()
    virtual_best_target(s, noise, alpha=1)
    if s.lambdas.tobytes() != before:
        return ("virtual purity", False, "main state mutated by virtual evaluation")
    return ("virtual purity", True, "virtual scan leaves the main state bit-identical")


def check_first_round_equality(rng) -> Check:
    g = linear_cluster(8)
    noise = NoiseSpec(white=1.0, dephasing={1: 0.7}, gate=1.0)
    stop = StopRule(max_rounds=1)
    tcp = run_tcp(g, noise, stop)
    lep = run_s_alpha(g, noise, 0, stop)
    df = abs(tcp.rounds[1].fidelity - lep.rounds[1].fidelity)
    dp = abs(tcp.rounds[1].success_prob - lep.rounds[1].success_prob)
    if df > 1e-12 or dp > 1e-12:
        return ("first-round equality", False, f"dF={df} dp={dp}")
    return ("first-round equality", True, "recurrence and single-step pumping agree")


ALL_CHECKS = (
    check_channel_identities,
    check_mask_composition,
    check_mcnot_bijectivity,
    check_step_reference,
    check_oracle_equivalence,
    check_resources,
    check_interpolation,
    check_virtual_purity,
    check_first_round_equality,
)


def run_all(verbose: bool = True) -> bool:
    rng = np.random.default_rng(20240817)
    ok = True
    for fn in ALL_CHECKS:
        name, passed, detail = fn(rng)
        ok &= passed
        if verbose:
            print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    return ok
