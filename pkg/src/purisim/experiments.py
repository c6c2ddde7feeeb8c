"""Scenario and sweep runners with deterministic CSV/JSON emission.

Cells of a sweep grid and strategies within a cell are independent pure
computations; this runner executes them sequentially and assembles results in
(pw, pz) lexicographic cell order, so output bytes depend only on the config.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .config import Scenario
from .graphs import NotTwoColorableError
from .resources import interpolate_to_fidelity, interpolate_to_resources
from .states import NoiseSpec, prepare_initial
from .strategies import StopRule, StrategyKind, StrategyTrace, run_strategy

TRACE_CSV_HEADER = "round,action,fidelity,success_prob,resources"


def fmt(x: float) -> str:
    return f"{x:.15g}"


def strategy_slug(kind: StrategyKind) -> str:
    return kind.id.replace(":", "_")


def stop_rule_for(scenario: Scenario) -> StopRule:
    if scenario.mode.kind == "fixed_fidelity":
        return StopRule(
            max_rounds=scenario.max_rounds,
            target_fidelity=scenario.mode.value,
            resource_cap=scenario.resource_cap,
        )
    if scenario.mode.kind == "fixed_resources":
        return StopRule(
            max_rounds=scenario.max_rounds, resource_cap=scenario.mode.value
        )
    return StopRule(max_rounds=scenario.max_rounds, resource_cap=scenario.resource_cap)


def trace_csv(trace: StrategyTrace) -> str:
    lines = [TRACE_CSV_HEADER]
    for row in trace.rounds:
        lines.append(
            f"{row.index},{row.action},{fmt(row.fidelity)},"
            f"{fmt(row.success_prob)},{fmt(row.resources)}"
        )
    return "\n".join(lines) + "\n"


def run_scenario(scenario: Scenario, outdir: str | Path, name: str) -> dict:
    """Run every strategy of a trace-mode scenario; write per-strategy trace
    CSVs and a JSON summary.  Infeasible strategies are reported in the summary
    without aborting the rest."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stop = stop_rule_for(scenario)
    summary: dict = {
        "config": {
            "graph": scenario.graph_desc,
            "noise": scenario.noise.describe(),
            "mode": scenario.mode.kind
            + ("" if scenario.mode.value is None else f":{fmt(scenario.mode.value)}"),
            "cap": fmt(scenario.resource_cap),
            "commit": scenario.commit,
        },
        "strategies": {},
    }
    for kind in scenario.strategies:
        entry: dict = {}
        try:
            trace = run_strategy(
                kind, scenario.graph, scenario.noise, stop, scenario.commit
            )
        except NotTwoColorableError as exc:
            entry = {"status": f"infeasible: {exc}"}
        else:
            csv_name = f"{name}_{strategy_slug(kind)}.csv"
            (outdir / csv_name).write_text(trace_csv(trace), encoding="utf-8")
            entry = {
                "status": trace.status,
                "initial_fidelity": fmt(trace.initial_fidelity),
                "final_fidelity": fmt(trace.final_fidelity),
                "max_fidelity": fmt(trace.max_fidelity),
                "rounds": len(trace.rounds) - 1,
                "final_resources": fmt(trace.final_resources),
                "csv": csv_name,
            }
        summary["strategies"][kind.id] = entry
    out = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    (outdir / f"{name}_summary.json").write_text(out, encoding="utf-8")
    return summary


@dataclass(frozen=True)
class WinnerCell:
    pw: float
    pz: float
    f0: float
    status: str  # same | ok | none
    winner: str
    value: float | None
    per_strategy: dict[str, float | None]


def _cell_noise(scenario: Scenario, pw: float, pz: float) -> NoiseSpec:
    return NoiseSpec(
        white=pw,
        dephasing={q: pz for q in scenario.sweep.z_qubits},
        gate=scenario.noise.gate,
    )


def _evaluate_cell(scenario: Scenario, pw: float, pz: float) -> WinnerCell:
    mode = scenario.mode
    noise = _cell_noise(scenario, pw, pz)
    f0 = prepare_initial(scenario.graph, noise).fidelity()
    base = float(scenario.graph.edge_count)
    ids = [k.id for k in scenario.strategies]

    if mode.kind == "fixed_fidelity" and f0 >= mode.value:
        return WinnerCell(
            pw=pw, pz=pz, f0=f0, status="same", winner="same", value=base,
            per_strategy={i: base for i in ids},
        )

    stop = stop_rule_for(scenario)
    values: dict[str, float | None] = {}
    for kind in scenario.strategies:
        try:
            trace = run_strategy(kind, scenario.graph, noise, stop, scenario.commit)
        except NotTwoColorableError:
            values[kind.id] = None
            continue
        if mode.kind == "fixed_fidelity":
            res = interpolate_to_fidelity(trace, mode.value)
            feasible = (
                res.status in ("interpolated", "same")
                and res.value is not None
                and res.value <= scenario.resource_cap
            )
            values[kind.id] = res.value if feasible else None
        else:
            res = interpolate_to_resources(trace, mode.value)
            values[kind.id] = res.value

    winner, value, status = "none", None, "none"
    for kind in scenario.strategies:
        v = values[kind.id]
        if v is None:
            continue
        if value is None or (
            v < value if mode.kind == "fixed_fidelity" else v > value
        ):
            winner, value, status = kind.id, v, "ok"
    return WinnerCell(
        pw=pw, pz=pz, f0=f0, status=status, winner=winner, value=value,
        per_strategy=values,
    )


def run_sweep(scenario: Scenario, outdir: str | Path, name: str) -> list[WinnerCell]:
    """Evaluate the sweep grid cell by cell; emit a cell-wise CSV and a JSON
    grid.  Per-cell strategy failures appear as empty values, never aborting
    the remaining cells."""
    if scenario.sweep is None:
        raise ValueError("scenario has no sweep axes")
    if scenario.mode.kind not in ("fixed_fidelity", "fixed_resources"):
        raise ValueError("sweeps need mode fixed_fidelity or fixed_resources")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    cells = [
        _evaluate_cell(scenario, pw, pz)
        for pw in scenario.sweep.pw_values
        for pz in scenario.sweep.pz_values
    ]

    ids = [k.id for k in scenario.strategies]
    header = "pw,pz,f0,status,winner,winner_value," + ",".join(ids)
    lines = [header]
    for c in cells:
        per = [
            "" if c.per_strategy[i] is None else fmt(c.per_strategy[i]) for i in ids
        ]
        lines.append(
            f"{fmt(c.pw)},{fmt(c.pz)},{fmt(c.f0)},{c.status},{c.winner},"
            + ("" if c.value is None else fmt(c.value))
            + ","
            + ",".join(per)
        )
    (outdir / f"{name}_sweep.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    grid = {
        "mode": scenario.mode.kind,
        "mode_value": None if scenario.mode.value is None else fmt(scenario.mode.value),
        "strategies": ids,
        "pw_values": [fmt(v) for v in scenario.sweep.pw_values],
        "pz_values": [fmt(v) for v in scenario.sweep.pz_values],
        "z_qubits": list(scenario.sweep.z_qubits),
        "cells": [
            {
                "pw": fmt(c.pw),
                "pz": fmt(c.pz),
                "f0": fmt(c.f0),
                "status": c.status,
                "winner": c.winner,
                "value": None if c.value is None else fmt(c.value),
                "per_strategy": {
                    i: (None if c.per_strategy[i] is None else fmt(c.per_strategy[i]))
                    for i in ids
                },
            }
            for c in cells
        ],
    }
    out = json.dumps(grid, indent=2, sort_keys=True) + "\n"
    (outdir / f"{name}_sweep.json").write_text(out, encoding="utf-8")
    return cells
