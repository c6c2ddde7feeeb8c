import json

import pytest

from purisim.cli import main as cli_main
from purisim.config import ConfigError, parse_config, parse_graph_spec
from purisim.experiments import run_scenario, run_sweep

GOOD = """
# demo scenario
graph = linear:4
noise.white = 0.97
noise.z.1 = 0.8
noise.gate = 0.999
strategies = tcp, s-0
mode = trace
cap = 1e6
max_rounds = 3
"""


def test_parse_config_basics():
    sc = parse_config(GOOD, "demo")
    assert sc.graph.n == 4
    assert sc.noise.white == 0.97
    assert sc.noise.dephasing == {1: 0.8}
    assert sc.noise.gate == 0.999
    assert [k.id for k in sc.strategies] == ["tcp", "s-0"]
    assert sc.mode.kind == "trace"
    assert sc.resource_cap == 1e6
    assert sc.max_rounds == 3
    assert sc.commit == "improving"


def test_parse_config_per_qubit_white_override():
    text = GOOD + "noise.white.3 = 0.9\n"
    sc = parse_config(text, "override")
    assert sc.noise.white_for(3) == 0.9
    assert sc.noise.white_for(1) == 0.97


def test_parse_graph_specs():
    assert parse_graph_spec("linear:5").n == 5
    assert parse_graph_spec("grid:2x3").edge_count == 7
    g = parse_graph_spec("ghz:2;1,3")
    assert g.n == 3 and g.degree(1) == 2
    g = parse_graph_spec("explicit:1-2,2-3,3-4")
    assert g.edges == parse_graph_spec("linear:4").edges
    with pytest.raises(ValueError):
        parse_graph_spec("ring:5")


def test_parse_config_error_reports_line():
    bad = "graph = linear:4\nnoise.z.1 = 1.4\nstrategies = tcp\n"
    with pytest.raises(ConfigError) as err:
        parse_config(bad, "bad")
    assert "line 2" in str(err.value)


def test_parse_config_requires_strategies():
    with pytest.raises(ConfigError):
        parse_config("graph = linear:4\nstrategies =\n", "empty")
    with pytest.raises(ConfigError):
        parse_config("graph = linear:4\n", "missing")


def test_parse_config_sweep_needs_all_axes():
    text = GOOD + "sweep.pw = 0.9:1.0:2\n"
    with pytest.raises(ConfigError):
        parse_config(text, "partial")


def test_parse_config_budget_below_preparation_cost():
    text = "graph = linear:4\nstrategies = tcp\nmode = fixed_resources:2\n"
    with pytest.raises(ConfigError):
        parse_config(text, "tiny")


def test_parse_config_mode_and_commit_defaults():
    text = "graph = linear:4\nstrategies = tcp\nmode = fixed_resources:100\n"
    sc = parse_config(text, "tr")
    assert sc.mode.kind == "fixed_resources" and sc.mode.value == 100.0
    assert sc.commit == "always"
    text = "graph = linear:4\nstrategies = tcp\nmode = fixed_fidelity:0.9\n"
    assert parse_config(text, "tf").commit == "improving"


def test_parse_config_dephasing_out_of_range():
    text = "graph = linear:4\nnoise.z.9 = 0.8\nstrategies = tcp\n"
    with pytest.raises(ConfigError):
        parse_config(text, "range")


def test_run_scenario_outputs_are_byte_stable(tmp_path):
    sc = parse_config(GOOD, "demo")
    first = tmp_path / "a"
    second = tmp_path / "b"
    run_scenario(sc, first, "demo")
    run_scenario(sc, second, "demo")
    for name in ("demo_tcp.csv", "demo_s-0.csv", "demo_summary.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    header = (first / "demo_tcp.csv").read_text().splitlines()[0]
    assert header == "round,action,fidelity,success_prob,resources"


def test_run_scenario_reports_infeasible_strategy_in_band(tmp_path):
    text = """
graph = explicit:1-2,2-3,1-3
strategies = tcp, s-0
mode = trace
max_rounds = 2
"""
    sc = parse_config(text, "tri")
    summary = run_scenario(sc, tmp_path, "tri")
    assert summary["strategies"]["tcp"]["status"].startswith("infeasible")
    assert "status" in summary["strategies"]["s-0"]
    assert (tmp_path / "tri_s-0.csv").exists()
    assert not (tmp_path / "tri_tcp.csv").exists()


SWEEP = """
graph = linear:4
noise.gate = 0.999
strategies = s-0, s-1, tcp
mode = fixed_fidelity:0.9
sweep.pw = 0.9,1.0
sweep.pz = 0.85,1.0
sweep.z_qubits = 1
max_rounds = 60
"""


def test_run_sweep_structure_and_winners(tmp_path):
    sc = parse_config(SWEEP, "mini")
    cells = run_sweep(sc, tmp_path, "mini")
    assert len(cells) == 4
    csv_lines = (tmp_path / "mini_sweep.csv").read_text().splitlines()
    assert csv_lines[0] == "pw,pz,f0,status,winner,winner_value,s-0,s-1,tcp"
    pure = [c for c in cells if c.pw == 1.0 and c.pz == 1.0][0]
    assert pure.status == "same" and pure.winner == "same"
    for c in cells:
        if c.status != "ok":
            continue
        feasible = {k: v for k, v in c.per_strategy.items() if v is not None}
        assert c.winner == min(feasible, key=lambda k: feasible[k])
        assert c.value == feasible[c.winner]
    grid = json.loads((tmp_path / "mini_sweep.json").read_text())
    assert grid["strategies"] == ["s-0", "s-1", "tcp"]
    assert len(grid["cells"]) == 4


def test_run_sweep_byte_stable(tmp_path):
    sc = parse_config(SWEEP, "mini")
    run_sweep(sc, tmp_path / "x", "mini")
    run_sweep(sc, tmp_path / "y", "mini")
    assert (tmp_path / "x/mini_sweep.csv").read_bytes() == (
        tmp_path / "y/mini_sweep.csv"
    ).read_bytes()
    assert (tmp_path / "x/mini_sweep.json").read_bytes() == (
        tmp_path / "y/mini_sweep.json"
    ).read_bytes()


def test_run_sweep_requires_axes():
    sc = parse_config(GOOD, "demo")
    with pytest.raises(ValueError):
        run_sweep(sc, "/tmp/nowhere", "demo")


def test_cli_run_bundled_smoke(tmp_path, capsys):
    code = cli_main(["run", "fig3", "-o", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "tcp:" in out
    for sid in ("tcp", "s-0", "s-1", "s-5"):
        assert (tmp_path / f"fig3_{sid}.csv").exists()
    summary = json.loads((tmp_path / "fig3_summary.json").read_text())
    assert set(summary["strategies"]) == {"tcp", "s-0", "s-1", "s-5"}


def test_cli_sweep_smoke(tmp_path, capsys):
    cfg = tmp_path / "mini.cfg"
    cfg.write_text(SWEEP)
    code = cli_main(["sweep", str(cfg), "-o", str(tmp_path / "out")])
    assert code == 0
    out = capsys.readouterr().out
    assert "winner=" in out
    assert (tmp_path / "out/mini_sweep.csv").exists()
    assert (tmp_path / "out/mini_sweep.json").exists()


def test_cli_rejects_unknown_config(tmp_path, capsys):
    code = cli_main(["run", "no-such-config", "-o", str(tmp_path)])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_cli_rejects_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("graph = linear:4\nstrategies = warp-9\n")
    code = cli_main(["run", str(cfg), "-o", str(tmp_path)])
    assert code == 1
    err = capsys.readouterr().err
    assert "line 2" in err


def test_pinned_table_is_present_and_typed():
    from purisim.pinning import load_pinned

    pins = load_pinned()
    assert pins["grid34_prepare_fidelity"]["source"] == "oracle"
    for key in ("fig3_s1", "fig3_tcp", "fig4_s5", "fig6_hybrid"):
        assert pins[key]["source"] == "engine"
        assert pins[key]["rounds"][0][0] == "init"
