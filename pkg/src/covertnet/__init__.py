"""Covert-capacity planning for multi-modal wireless networks.

Plan maximum-capacity routes under an end-to-end detectability budget,
configure per-mode link powers, and reproduce Monte Carlo capacity
sweeps over random networks.
"""

from .channels import ChannelSpec, ModeChannel, fourth_moment_tau, sample_gain, sample_uncertain_gain
from .errors import (
    CoLocatedEntities,
    CovertNetError,
    DuplicateId,
    InstanceTooLarge,
    InvalidGain,
    InvalidRoutePlan,
    MissingGainEntry,
    NetworkValidationError,
    NoFeasiblePath,
    NonPositiveBudget,
    NonPositiveNoise,
    PlacementInfeasible,
    SourceEqualsDest,
    UnusableLink,
)
from .fileio import (
    load_network,
    load_plan,
    save_network,
    save_plan,
    write_graph_description,
)
from .harness import (
    ExperimentResult,
    ExperimentSpec,
    GeometryOverrides,
    TrialRecord,
    generate_network,
    place_adversaries,
    run_experiment,
    single_link_study,
)
from .metrics import (
    CovertBudget,
    GammaTable,
    LinkMetric,
    allocate_delta,
    covert_surrogate,
    exact_gaussian_kl,
    gamma_table,
    linearized_capacity,
    link_capacity,
    link_gamma_multi,
    link_gamma_single,
    link_gamma_uncertain,
    link_metric_general,
    optimal_mode_powers,
    path_capacity,
    per_symbol_delta,
    pinsker_bound,
)
from .model import (
    Adversary,
    CsiEntry,
    FriendlyNode,
    GainTable,
    NetworkInstance,
    Position,
    RoutePlan,
    build_network,
    distance,
    validate_route_plan,
)
from .routing import (
    WeightedGraph,
    brute_force_best_route,
    graph_from_gammas,
    het_opt,
    hop_limited_route,
    per_link_dep,
    shortest_path,
    single_mode_baseline,
)
from .verify import VerifyReport, verify_plan

__version__ = "0.1.0"
