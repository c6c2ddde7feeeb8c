"""Channel-use accounting and the two round-mixing interpolation frameworks.

Resources are expected channel uses (real-valued): preparing a graph state
costs one channel use per edge, a recurrence round doubles the accumulated
cost and divides by its success probability, and a localized round adds the
auxiliary's (possibly pre-purified) cost before dividing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class RoundCost:
    """Per-round accounting record: effective auxiliary cost, success
    probability, and which update rule was applied."""

    m_eff: float
    success_prob: float
    rule: str


@dataclass(frozen=True)
class ResourceLedger:
    base: float
    current: float
    history: tuple[RoundCost, ...] = field(default_factory=tuple)


def new_ledger(base: float) -> ResourceLedger:
    if base < 0:
        raise ValueError(f"base resources must be >= 0, got {base}")
    return ResourceLedger(base=float(base), current=float(base))


def tcp_round_update(ledger: ResourceLedger, success_prob: float) -> ResourceLedger:
    """Recurrence round: current <- 2 * current / p."""
    if not 0.0 < success_prob <= 1.0:
        raise ValueError(f"success probability {success_prob} outside (0, 1]")
    return replace(
        ledger,
        current=2.0 * ledger.current / success_prob,
        history=ledger.history
        + (RoundCost(m_eff=ledger.current, success_prob=success_prob, rule="tcp"),),
    )


def lep_round_update(
    ledger: ResourceLedger,
    aux_edges: int,
    prepurify_multiplier: float,
    success_prob: float,
) -> ResourceLedger:
    """Pumping round: current <- (current + M * multiplier) / p, with M the
    auxiliary star's edge count and the multiplier the pre-purification
    product of 2/q factors."""
    if not 0.0 < success_prob <= 1.0:
        raise ValueError(f"success probability {success_prob} outside (0, 1]")
    if aux_edges < 1:
        raise ValueError(f"auxiliary edge count must be >= 1, got {aux_edges}")
    if prepurify_multiplier < 1.0:
        raise ValueError(
            f"pre-purification multiplier must be >= 1, got {prepurify_multiplier}"
        )
    m_eff = aux_edges * prepurify_multiplier
    return replace(
        ledger,
        current=(ledger.current + m_eff) / success_prob,
        history=ledger.history
        + (RoundCost(m_eff=m_eff, success_prob=success_prob, rule="lep"),),
    )


@dataclass(frozen=True)
class InterpolationResult:
    """Round-mixing result: status is one of interpolated / same / unreachable /
    capped; p is the mixing ratio onto the earlier round when interpolated."""

    status: str
    value: float | None = None
    p: float | None = None
    bracket: tuple[int, int] | None = None


def interpolate_to_fidelity(trace, target_fidelity: float) -> InterpolationResult:
    """Expected resources to reach `target_fidelity` by probabilistically mixing
    the two consecutive rounds that bracket it (first bracket in round order)."""
    rounds = trace.rounds
    if not rounds:
        raise ValueError("trace is empty")
    if rounds[0].fidelity >= target_fidelity:
        return InterpolationResult(status="same", value=rounds[0].resources)
    for i in range(len(rounds) - 1):
        f_lo, f_hi = rounds[i].fidelity, rounds[i + 1].fidelity
        if f_lo <= target_fidelity <= f_hi:
            if f_hi == f_lo:
                p = 1.0
            else:
                p = (f_hi - target_fidelity) / (f_hi - f_lo)
            value = p * rounds[i].resources + (1.0 - p) * rounds[i + 1].resources
            return InterpolationResult(
                status="interpolated", value=value, p=p, bracket=(i, i + 1)
            )
    return InterpolationResult(status="unreachable")


def interpolate_to_resources(trace, total_resources: float) -> InterpolationResult:
    """Fidelity achievable within a resource budget: mix the two consecutive
    rounds bracketing the budget; a trace ending under budget is capped at its
    final fidelity."""
    rounds = trace.rounds
    if not rounds:
        raise ValueError("trace is empty")
    if total_resources < rounds[0].resources:
        raise ValueError(
            f"budget {total_resources} is below the preparation cost "
            f"{rounds[0].resources}"
        )
    for i in range(len(rounds) - 1):
        r_lo, r_hi = rounds[i].resources, rounds[i + 1].resources
        if r_lo <= total_resources <= r_hi:
            if r_hi == r_lo:
                p = 1.0
            else:
                p = (r_hi - total_resources) / (r_hi - r_lo)
            value = p * rounds[i].fidelity + (1.0 - p) * rounds[i + 1].fidelity
            return InterpolationResult(
                status="interpolated", value=value, p=p, bracket=(i, i + 1)
            )
    return InterpolationResult(status="capped", value=rounds[-1].fidelity)


def relative_gain(f_k: float, f_l: float) -> float:
    """Percent increase from f_k to f_l; also applicable to resources."""
    if f_k <= 0.0:
        raise ValueError(f"reference value must be positive, got {f_k}")
    return (f_l - f_k) / f_k * 100.0
