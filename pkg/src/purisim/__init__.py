"""Exact simulator and strategy optimizer for multipartite entanglement
purification of graph states under Pauli-diagonal noise."""

from .graphs import (
    FlipMask,
    Graph,
    NotTwoColorableError,
    Star,
    TargetPartition,
    TwoColoring,
    ghz_star,
    grid_cluster,
    linear_cluster,
    make_graph,
    partition_for_target,
    pauli_flip_mask,
    two_coloring,
)
from .states import (
    DiagonalState,
    ImpossiblePostSelectionError,
    JointState,
    NoiseSpec,
    apply_dephasing,
    apply_white_noise,
    fidelity,
    joint,
    post_select_and_marginalize,
    prepare_initial,
    pure_graph_state,
)
from .protocols import (
    BitPermutation,
    StepOutcome,
    SubProtocol,
    build_aux,
    lep_step,
    mcnot_map_lep,
    mcnot_map_tcp,
    prepurify_aux,
    tcp_step,
)
from .resources import (
    InterpolationResult,
    ResourceLedger,
    interpolate_to_fidelity,
    interpolate_to_resources,
    lep_round_update,
    new_ledger,
    relative_gain,
    tcp_round_update,
)
from .strategies import (
    StopRule,
    StrategyKind,
    StrategyTrace,
    TraceRound,
    parse_strategy,
    replay_trace,
    run_c_alpha,
    run_hybrid,
    run_s_alpha,
    run_strategy,
    run_tcp,
    virtual_best_target,
)
from .config import ConfigError, Mode, Scenario, SweepSpec, parse_config
from .experiments import WinnerCell, run_scenario, run_sweep

__version__ = "0.1.0"
