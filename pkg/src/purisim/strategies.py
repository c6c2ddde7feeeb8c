"""Strategy zoo: adaptive single-step pumping, two-step look-ahead, plain
recurrence, and the pumping-then-recurrence hybrid, all emitting round traces.

Candidate evaluation is always virtual (pure computation on value types); a
round is committed by adopting the winning candidate's output state and
updating the resource ledger.  Two commit policies exist:

* ``improving`` (default): halt with status ``saturated`` as soon as no
  candidate strictly increases fidelity by more than the stagnation threshold.
* ``always``: commit the best candidate even when it lowers fidelity, halting
  only when the best candidate no longer changes fidelity at all.  This mode
  reproduces budget-limited behavior, where purification may run past its
  optimum and de-purify near-pure states.

Candidate evaluations within a round are independent pure computations, as
are whole-strategy runs over different scenarios; only trace construction is
sequential.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .graphs import Graph, describe, partition_for_target
from .protocols import (
    StepOutcome,
    SubProtocol,
    build_aux,
    lep_step,
    tcp_step,
)
from .resources import lep_round_update, new_ledger, tcp_round_update
from .states import DiagonalState, ImpossiblePostSelectionError, NoiseSpec, prepare_initial

STAGNATION_TOL = 1e-12
PAIR_PREFERENCE_TOL = 1e-12


@dataclass(frozen=True)
class StrategyKind:
    kind: str  # one of tcp, s, c, hybrid
    alpha: int = 0
    lep_rounds: int | str = "auto"  # hybrid only: round count or "auto"

    def __post_init__(self):
        if self.kind not in ("tcp", "s", "c", "hybrid"):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")

    @property
    def id(self) -> str:
        if self.kind == "tcp":
            return "tcp"
        if self.kind == "hybrid":
            return f"hybrid-{self.alpha}:{self.lep_rounds}"
        return f"{self.kind}-{self.alpha}"


_STRATEGY_RE = re.compile(
    r"^(?:(tcp)|([sc])-(\d+)|hybrid-(\d+)(?::(auto|\d+))?)$"
)


def parse_strategy(text: str) -> StrategyKind:
    """Parse a strategy id: tcp | s-<a> | c-<a> | hybrid-<a>[:rounds|auto]."""
    m = _STRATEGY_RE.match(text.strip().lower())
    if not m:
        raise ValueError(f"unrecognized strategy {text!r}")
    if m.group(1):
        return StrategyKind(kind="tcp")
    if m.group(2):
        return StrategyKind(kind=m.group(2), alpha=int(m.group(3)))
    rounds: int | str = m.group(5) or "auto"
    if rounds != "auto":
        rounds = int(rounds)
    return StrategyKind(kind="hybrid", alpha=int(m.group(4)), lep_rounds=rounds)


@dataclass(frozen=True)
class StopRule:
    """Halting conditions checked after every committed round; any one stops
    the run.  All are optional, but every run should carry a resource cap."""

    max_rounds: int | None = None
    target_fidelity: float | None = None
    resource_cap: float | None = None


@dataclass(frozen=True)
class TraceRound:
    index: int
    action: str
    fidelity: float
    success_prob: float
    resources: float


@dataclass
class StrategyTrace:
    strategy: str
    graph_desc: str
    noise_desc: str
    initial_fidelity: float
    rounds: list[TraceRound] = field(default_factory=list)
    status: str = "running"

    @property
    def final_fidelity(self) -> float:
        return self.rounds[-1].fidelity

    @property
    def final_resources(self) -> float:
        return self.rounds[-1].resources

    @property
    def max_fidelity(self) -> float:
        return max(r.fidelity for r in self.rounds)


@dataclass(frozen=True)
class _AuxEntry:
    target: int
    state: DiagonalState
    aux_edges: int
    multiplier: float
    prepurify_probs: tuple[float, ...]
    action: str


def _aux_table(g: Graph, noise: NoiseSpec, alpha: int) -> dict[int, list[_AuxEntry]]:
    """Pre-purified auxiliary variants per candidate target (independent of the
    evolving main state, so built once per run).

    For alpha >= 1 both alternation phases are offered as candidates: which
    residual error ends up cleaned last (center vs leaves) depends on the
    phase, and which of the two helps more depends on the scenario, so the
    scan decides by resulting fidelity.
    """
    starts = (SubProtocol.P1,) if alpha == 0 else (SubProtocol.P1, SubProtocol.P2)
    table: dict[int, list[_AuxEntry]] = {}
    for t in range(1, g.n + 1):
        nbrs = g.neighbors(t)
        if not nbrs:
            continue
        variants = []
        for start in starts:
            aux, star, mult, probs = build_aux(g, noise, t, alpha, start)
            variants.append(
                _AuxEntry(
                    target=t,
                    state=aux,
                    aux_edges=len(nbrs),
                    multiplier=mult,
                    prepurify_probs=tuple(probs),
                    action=_lep_action(t, alpha, start),
                )
            )
        table[t] = variants
    return table


def _scan_targets(
    main: DiagonalState, g: Graph, noise: NoiseSpec, table: dict[int, list[_AuxEntry]]
) -> tuple[_AuxEntry, StepOutcome] | None:
    """Best single localized step over all auxiliary candidates; ties go to the
    lowest vertex label, then to the default alternation phase.  Returns None
    when no candidate is feasible."""
    best: tuple[_AuxEntry, StepOutcome] | None = None
    for t in sorted(table):
        part = partition_for_target(g, t)
        for entry in table[t]:
            try:
                out = lep_step(main, entry.state, part, noise.gate)
            except ImpossiblePostSelectionError:
                continue
            if best is None or out.state.fidelity() > best[1].state.fidelity():
                best = (entry, out)
    return best


def virtual_best_target(
    main: DiagonalState, noise: NoiseSpec, alpha: int
) -> tuple[int, StepOutcome, float]:
    """Virtually evaluate one localized step for every candidate auxiliary and
    return the fidelity-maximizing target with its effective auxiliary cost
    (edge count times the pre-purification multiplier).  The input state is
    never modified."""
    g = main.graph
    table = _aux_table(g, noise, alpha)
    best = _scan_targets(main, g, noise, table)
    if best is None:
        raise ValueError("no candidate target has a feasible auxiliary")
    entry, out = best
    return entry.target, out, entry.aux_edges * entry.multiplier


def _new_trace(kind_id: str, g: Graph, noise: NoiseSpec, main: DiagonalState) -> StrategyTrace:
    trace = StrategyTrace(
        strategy=kind_id,
        graph_desc=describe(g),
        noise_desc=noise.describe(),
        initial_fidelity=main.fidelity(),
    )
    trace.rounds.append(
        TraceRound(
            index=0,
            action="init",
            fidelity=main.fidelity(),
            success_prob=1.0,
            resources=float(g.edge_count),
        )
    )
    return trace


def _stop_status(trace: StrategyTrace, stop: StopRule) -> str | None:
    last = trace.rounds[-1]
    if stop.target_fidelity is not None and last.fidelity >= stop.target_fidelity:
        return "reached_target"
    if stop.resource_cap is not None and last.resources > stop.resource_cap:
        return "cap_exceeded"
    if stop.max_rounds is not None and last.index >= stop.max_rounds:
        return "max_rounds"
    return None


def run_s_alpha(
    g: Graph,
    noise: NoiseSpec,
    alpha: int,
    stop: StopRule,
    commit: str = "improving",
) -> StrategyTrace:
    """Single-auxiliary pumping: every round commits the virtually best target."""
    _check_commit(commit)
    main = prepare_initial(g, noise)
    ledger = new_ledger(g.edge_count)
    trace = _new_trace(StrategyKind("s", alpha).id, g, noise, main)
    status = _stop_status(trace, stop)
    if status:
        trace.status = status
        return trace
    table = _aux_table(g, noise, alpha)
    while True:
        best = _scan_targets(main, g, noise, table)
        if best is None or _is_stagnant(main.fidelity(), best[1].state.fidelity(), commit):
            trace.status = "saturated"
            return trace
        entry, out = best
        ledger = lep_round_update(
            ledger, entry.aux_edges, entry.multiplier, out.success_prob
        )
        main = out.state
        trace.rounds.append(
            TraceRound(
                index=len(trace.rounds),
                action=entry.action,
                fidelity=main.fidelity(),
                success_prob=out.success_prob,
                resources=ledger.current,
            )
        )
        status = _stop_status(trace, stop)
        if status:
            trace.status = status
            return trace


def run_c_alpha(
    g: Graph,
    noise: NoiseSpec,
    alpha: int,
    stop: StopRule,
    commit: str = "improving",
) -> StrategyTrace:
    """Two-step look-ahead pumping: each composite round scans all single
    targets and all ordered target pairs, committing the pair only when it
    strictly beats the best single step."""
    _check_commit(commit)
    main = prepare_initial(g, noise)
    ledger = new_ledger(g.edge_count)
    trace = _new_trace(StrategyKind("c", alpha).id, g, noise, main)
    status = _stop_status(trace, stop)
    if status:
        trace.status = status
        return trace
    table = _aux_table(g, noise, alpha)
    targets = sorted(table)
    while True:
        # Best variant per target against the current state; the pair scan
        # below reuses each target's chosen variant.
        singles: dict[int, tuple[_AuxEntry, StepOutcome]] = {}
        for t in targets:
            part = partition_for_target(g, t)
            for entry in table[t]:
                try:
                    out = lep_step(main, entry.state, part, noise.gate)
                except ImpossiblePostSelectionError:
                    continue
                if t not in singles or out.state.fidelity() > singles[t][1].state.fidelity():
                    singles[t] = (entry, out)
        if not singles:
            trace.status = "saturated"
            return trace
        best1 = max(singles, key=lambda t: (singles[t][1].state.fidelity(), -t))
        best_pair: tuple[tuple[_AuxEntry, StepOutcome], tuple[_AuxEntry, StepOutcome]] | None = None
        for t1 in targets:
            if t1 not in singles:
                continue
            mid = singles[t1][1].state
            for t2 in targets:
                if t2 not in singles:
                    continue
                entry2 = singles[t2][0]
                try:
                    out2 = lep_step(
                        mid, entry2.state, partition_for_target(g, t2), noise.gate
                    )
                except ImpossiblePostSelectionError:
                    continue
                if (
                    best_pair is None
                    or out2.state.fidelity() > best_pair[1][1].state.fidelity()
                ):
                    best_pair = (singles[t1], (entry2, out2))

        take_pair = (
            best_pair is not None
            and best_pair[1][1].state.fidelity()
            > singles[best1][1].state.fidelity() + PAIR_PREFERENCE_TOL
        )
        new_fid = (
            best_pair[1][1].state.fidelity()
            if take_pair
            else singles[best1][1].state.fidelity()
        )
        if _is_stagnant(main.fidelity(), new_fid, commit):
            trace.status = "saturated"
            return trace

        if take_pair:
            legs = best_pair
        else:
            legs = (singles[best1],)
        prob = 1.0
        for entry, out in legs:
            ledger = lep_round_update(
                ledger, entry.aux_edges, entry.multiplier, out.success_prob
            )
            prob *= out.success_prob
        main = legs[-1][1].state
        action = "+".join(entry.action for entry, _ in legs)
        trace.rounds.append(
            TraceRound(
                index=len(trace.rounds),
                action=action,
                fidelity=main.fidelity(),
                success_prob=prob,
                resources=ledger.current,
            )
        )
        status = _stop_status(trace, stop)
        if status:
            trace.status = status
            return trace


def run_tcp(
    g: Graph,
    noise: NoiseSpec,
    stop: StopRule,
    start_sub: SubProtocol = SubProtocol.P1,
) -> StrategyTrace:
    """Plain recurrence: alternate the two sub-protocols, committing every
    round.  Saturation requires two consecutive unchanged rounds so that an
    idle half of the alternation cannot mask progress by the other half."""
    main = prepare_initial(g, noise)
    ledger = new_ledger(g.edge_count)
    trace = _new_trace("tcp", g, noise, main)
    status = _stop_status(trace, stop)
    if status:
        trace.status = status
        return trace
    sub = start_sub
    stagnant = 0
    while True:
        out = tcp_step(main, sub, noise.gate)
        if abs(out.state.fidelity() - main.fidelity()) <= STAGNATION_TOL:
            stagnant += 1
        else:
            stagnant = 0
        ledger = tcp_round_update(ledger, out.success_prob)
        main = out.state
        trace.rounds.append(
            TraceRound(
                index=len(trace.rounds),
                action=f"tcp:{sub.value}",
                fidelity=main.fidelity(),
                success_prob=out.success_prob,
                resources=ledger.current,
            )
        )
        sub = SubProtocol.P2 if sub is SubProtocol.P1 else SubProtocol.P1
        status = _stop_status(trace, stop)
        if status:
            trace.status = status
            return trace
        if stagnant >= 2:
            trace.status = "saturated"
            return trace


def run_hybrid(
    g: Graph,
    noise: NoiseSpec,
    alpha: int,
    lep_rounds: int | str,
    stop: StopRule,
    commit: str = "improving",
) -> StrategyTrace:
    """Pumping-then-recurrence composite: a fixed count (or rate-adaptive
    number) of localized steps followed by one recurrence round using the
    virtually better sub-protocol; each composite is one trace round."""
    _check_commit(commit)
    if lep_rounds != "auto" and (not isinstance(lep_rounds, int) or lep_rounds < 0):
        raise ValueError(f"lep_rounds must be a count or 'auto', got {lep_rounds!r}")
    main = prepare_initial(g, noise)
    ledger = new_ledger(g.edge_count)
    trace = _new_trace(StrategyKind("hybrid", alpha, lep_rounds).id, g, noise, main)
    status = _stop_status(trace, stop)
    if status:
        trace.status = status
        return trace
    table = _aux_table(g, noise, alpha)
    inner_cap = max(16, 2 * g.n)
    while True:
        state = main
        led = ledger
        actions: list[str] = []
        prob = 1.0

        if lep_rounds == "auto":
            for _ in range(inner_cap):
                best = _scan_targets(state, g, noise, table)
                if best is None:
                    break
                entry, out = best
                led_lep = lep_round_update(
                    led, entry.aux_edges, entry.multiplier, out.success_prob
                )
                gain_lep = out.state.fidelity() - state.fidelity()
                rate_lep = gain_lep / (led_lep.current - led.current)
                tcp_out, _ = _best_tcp(state, noise.gate)
                led_tcp = tcp_round_update(led, tcp_out.success_prob)
                gain_tcp = tcp_out.state.fidelity() - state.fidelity()
                rate_tcp = gain_tcp / (led_tcp.current - led.current)
                if rate_lep <= rate_tcp:
                    break
                state, led = out.state, led_lep
                prob *= out.success_prob
                actions.append(entry.action)
        else:
            for _ in range(lep_rounds):
                best = _scan_targets(state, g, noise, table)
                if best is None:
                    break
                entry, out = best
                led = lep_round_update(
                    led, entry.aux_edges, entry.multiplier, out.success_prob
                )
                state = out.state
                prob *= out.success_prob
                actions.append(entry.action)

        tcp_out, sub = _best_tcp(state, noise.gate)
        led = tcp_round_update(led, tcp_out.success_prob)
        state = tcp_out.state
        prob *= tcp_out.success_prob
        actions.append(f"tcp:{sub.value}")

        if _is_stagnant(main.fidelity(), state.fidelity(), commit):
            trace.status = "saturated"
            return trace
        main, ledger = state, led
        trace.rounds.append(
            TraceRound(
                index=len(trace.rounds),
                action="+".join(actions),
                fidelity=main.fidelity(),
                success_prob=prob,
                resources=ledger.current,
            )
        )
        status = _stop_status(trace, stop)
        if status:
            trace.status = status
            return trace


def run_strategy(
    kind: StrategyKind,
    g: Graph,
    noise: NoiseSpec,
    stop: StopRule,
    commit: str = "improving",
) -> StrategyTrace:
    if kind.kind == "tcp":
        return run_tcp(g, noise, stop)
    if kind.kind == "s":
        return run_s_alpha(g, noise, kind.alpha, stop, commit)
    if kind.kind == "c":
        return run_c_alpha(g, noise, kind.alpha, stop, commit)
    return run_hybrid(g, noise, kind.alpha, kind.lep_rounds, stop, commit)


def replay_trace(g: Graph, noise: NoiseSpec, trace: StrategyTrace) -> list[float]:
    """Re-execute a trace's recorded actions and return the fidelity after each
    round (index 0 holds the initial fidelity)."""
    main = prepare_initial(g, noise)
    fidelities = [main.fidelity()]
    for row in trace.rounds[1:]:
        for act in row.action.split("+"):
            main = _apply_action(main, g, noise, act)
        fidelities.append(main.fidelity())
    return fidelities


def _apply_action(
    main: DiagonalState, g: Graph, noise: NoiseSpec, action: str
) -> DiagonalState:
    m = re.match(r"^lep:t(\d+):a(\d+)(?::(P[12]))?$", action)
    if m:
        t, alpha = int(m.group(1)), int(m.group(2))
        start = SubProtocol[m.group(3)] if m.group(3) else SubProtocol.P1
        aux, star, _, _ = build_aux(g, noise, t, alpha, start)
        return lep_step(main, aux, partition_for_target(g, t), noise.gate).state
    m = re.match(r"^tcp:(P[12])$", action)
    if m:
        return tcp_step(main, SubProtocol[m.group(1)], noise.gate).state
    raise ValueError(f"unparseable trace action {action!r}")


def _best_tcp(state: DiagonalState, p_g: float) -> tuple[StepOutcome, SubProtocol]:
    out1 = tcp_step(state, SubProtocol.P1, p_g)
    out2 = tcp_step(state, SubProtocol.P2, p_g)
    if out2.state.fidelity() > out1.state.fidelity():
        return out2, SubProtocol.P2
    return out1, SubProtocol.P1


def _lep_action(target: int, alpha: int, start: SubProtocol) -> str:
    if alpha == 0:
        return f"lep:t{target}:a0"
    return f"lep:t{target}:a{alpha}:{start.value}"


def _check_commit(commit: str) -> None:
    if commit not in ("improving", "always"):
        raise ValueError(f"commit policy must be 'improving' or 'always', got {commit!r}")


def _is_stagnant(current: float, best: float, commit: str) -> bool:
    if commit == "improving":
        return best <= current + STAGNATION_TOL
    return abs(best - current) <= STAGNATION_TOL
