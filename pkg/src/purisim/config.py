"""Flat key-value scenario configs.

Grammar (one `key = value` per line, `#` comments):

    graph = linear:<n> | grid:<rows>x<cols> | ghz:<center>;<leaf,leaf,...>
            | explicit:<u-v,u-v,...>
    noise.white = <p>          scalar white-noise parameter for all qubits
    noise.white.<q> = <p>      per-qubit override
    noise.z.<q> = <p>          dephasing parameter on qubit q
    noise.gate = <p>           gate-noise parameter
    strategies = tcp, s-0, c-1, hybrid-1:3, hybrid-0:auto, ...
    mode = trace | fixed_fidelity:<F> | fixed_resources:<R>
    cap = <max expected channel uses, default 1e9>
    max_rounds = <safety bound per strategy run, default 400>
    commit = improving | always   (default: always for fixed_resources, else improving)
    sweep.pw = <a>:<b>:<count> | <v,v,...> | <v>
    sweep.pz = likewise
    sweep.z_qubits = <q,q,...>
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph, ghz_star, grid_cluster, linear_cluster, make_graph
from .states import NoiseSpec
from .strategies import StrategyKind, parse_strategy

DEFAULT_RESOURCE_CAP = 1e9
DEFAULT_MAX_ROUNDS = 400


class ConfigError(ValueError):
    """Config parse or validation failure, with line diagnostics when known."""


@dataclass(frozen=True)
class Mode:
    kind: str  # trace | fixed_fidelity | fixed_resources
    value: float | None = None


@dataclass(frozen=True)
class SweepSpec:
    pw_values: tuple[float, ...]
    pz_values: tuple[float, ...]
    z_qubits: tuple[int, ...]


@dataclass(frozen=True)
class Scenario:
    graph: Graph
    graph_desc: str
    noise: NoiseSpec
    strategies: tuple[StrategyKind, ...]
    mode: Mode
    resource_cap: float = DEFAULT_RESOURCE_CAP
    max_rounds: int = DEFAULT_MAX_ROUNDS
    commit: str = "improving"
    sweep: SweepSpec | None = None


def _err(line_no: int, key: str, message: str) -> ConfigError:
    where = f"line {line_no}" + (f", key {key!r}" if key else "")
    return ConfigError(f"{where}: {message}")


def parse_graph_spec(spec: str) -> Graph:
    kind, _, params = spec.partition(":")
    kind = kind.strip().lower()
    params = params.strip()
    if kind == "linear":
        return linear_cluster(int(params))
    if kind == "grid":
        rows, _, cols = params.partition("x")
        return grid_cluster(int(rows), int(cols))
    if kind == "ghz":
        center, _, leaves = params.partition(";")
        leaf_set = [int(v) for v in leaves.split(",") if v.strip()]
        return ghz_star(int(center), leaf_set).graph
    if kind == "explicit":
        edges = []
        vertices = set()
        for item in params.split(","):
            u, _, v = item.strip().partition("-")
            edges.append((int(u), int(v)))
            vertices.update((int(u), int(v)))
        return make_graph(max(vertices), edges)
    raise ValueError(f"unknown graph kind {kind!r}")


def _parse_values(text: str) -> tuple[float, ...]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:count, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError(f"range count must be >= 1, got {count}")
        if count == 1:
            raw = [start]
        else:
            step = (stop - start) / (count - 1)
            raw = [start + i * step for i in range(count)]
        return tuple(float(f"{v:.12g}") for v in raw)
    return tuple(float(v) for v in text.split(",") if v.strip())


def parse_config(text: str, name: str = "<config>") -> Scenario:
    entries: list[tuple[int, str, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _err(line_no, "", f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        entries.append((line_no, key.strip().lower(), value.strip()))

    graph: Graph | None = None
    graph_desc = ""
    white_scalar: float | None = None
    white_map: dict[int, float] = {}
    dephasing: dict[int, float] = {}
    gate = 1.0
    strategies: tuple[StrategyKind, ...] | None = None
    mode = Mode(kind="trace")
    cap = DEFAULT_RESOURCE_CAP
    max_rounds = DEFAULT_MAX_ROUNDS
    commit: str | None = None
    sweep_pw: tuple[float, ...] | None = None
    sweep_pz: tuple[float, ...] | None = None
    sweep_zq: tuple[int, ...] | None = None

    def _probability(value: str) -> float:
        p = float(value)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"noise parameter {p} outside [0, 1]")
        return p

    for line_no, key, value in entries:
        try:
            if key == "graph":
                graph = parse_graph_spec(value)
                graph_desc = value
            elif key == "noise.white":
                white_scalar = _probability(value)
            elif key.startswith("noise.white."):
                white_map[int(key.rsplit(".", 1)[1])] = _probability(value)
            elif key.startswith("noise.z."):
                dephasing[int(key.rsplit(".", 1)[1])] = _probability(value)
            elif key == "noise.gate":
                gate = _probability(value)
            elif key == "strategies":
                items = [s.strip() for s in value.split(",") if s.strip()]
                strategies = tuple(parse_strategy(s) for s in items)
            elif key == "mode":
                kind, _, param = value.partition(":")
                kind = kind.strip().lower()
                if kind == "trace":
                    mode = Mode(kind="trace")
                elif kind in ("fixed_fidelity", "fixed_resources"):
                    mode = Mode(kind=kind, value=float(param))
                else:
                    raise ValueError(f"unknown mode {kind!r}")
            elif key == "cap":
                cap = float(value)
            elif key == "max_rounds":
                max_rounds = int(value)
            elif key == "commit":
                if value not in ("improving", "always"):
                    raise ValueError(f"commit must be improving or always, got {value!r}")
                commit = value
            elif key == "sweep.pw":
                sweep_pw = _parse_values(value)
            elif key == "sweep.pz":
                sweep_pz = _parse_values(value)
            elif key == "sweep.z_qubits":
                sweep_zq = tuple(int(v) for v in value.split(",") if v.strip())
            else:
                raise ValueError(f"unknown key {key!r}")
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise _err(line_no, key, str(exc)) from exc

    if graph is None:
        raise ConfigError(f"{name}: missing required key 'graph'")
    if strategies is None or not strategies:
        raise ConfigError(f"{name}: 'strategies' must list at least one strategy")

    white: float | dict[int, float]
    if white_map:
        white = {q: white_scalar if white_scalar is not None else 1.0
                 for q in range(1, graph.n + 1)}
        white.update(white_map)
    else:
        white = white_scalar if white_scalar is not None else 1.0
    try:
        noise = NoiseSpec(white=white, dephasing=dephasing, gate=gate)
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from exc
    for q in dephasing:
        if not 1 <= q <= graph.n:
            raise ConfigError(f"{name}: dephasing qubit {q} outside 1..{graph.n}")

    sweep = None
    if sweep_pw or sweep_pz or sweep_zq:
        if not (sweep_pw and sweep_pz and sweep_zq):
            raise ConfigError(
                f"{name}: sweep needs all of sweep.pw, sweep.pz, sweep.z_qubits"
            )
        for q in sweep_zq:
            if not 1 <= q <= graph.n:
                raise ConfigError(f"{name}: sweep qubit {q} outside 1..{graph.n}")
        sweep = SweepSpec(pw_values=sweep_pw, pz_values=sweep_pz, z_qubits=sweep_zq)

    if commit is None:
        commit = "always" if mode.kind == "fixed_resources" else "improving"

    if mode.kind == "fixed_resources" and mode.value < graph.edge_count:
        raise ConfigError(
            f"{name}: resource budget {mode.value} below preparation cost "
            f"{graph.edge_count}"
        )

    return Scenario(
        graph=graph,
        graph_desc=graph_desc,
        noise=noise,
        strategies=strategies,
        mode=mode,
        resource_cap=cap,
        max_rounds=max_rounds,
        commit=commit,
        sweep=sweep,
    )
