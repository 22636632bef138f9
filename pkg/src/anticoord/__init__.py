"""Anti-coordination games on graphs: equilibria, dynamics, price of anarchy and hardness gadgets."""

from .exceptions import *  # noqa: F401,F403
from .game import (
    DynamicsTrace,
    Stability,
    StabilityReport,
    best_response_set,
    classify,
    is_unhappy,
    payoff,
    potential,
    run_dynamics,
    social_welfare,
)
from .graph import (
    Coloring,
    Graph,
    VertexRoleMap,
    build_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    path_graph,
    random_graph,
    star_graph,
)
from .io import emit_dot, format_coloring, format_graph, parse_cnf, parse_coloring, parse_graph
from .reductions import (
    MixedGameSpec,
    ReductionOutput,
    clause_gadget,
    coordination_proxy_transform,
    extract_assignment,
    negation_gadget,
    persistence_gadget,
    poa_tight_instance,
    reduce_3sat_to_strict2,
    reduce_bup_to_directed2,
    reduce_directed2_to_directedk,
    reduce_kcolor_to_strict,
    undirected_to_directed,
)
from .search import (
    Cnf,
    PoaResult,
    balanced_unfriendly_exists,
    enumerate_stable,
    max_welfare,
    price_of_anarchy,
    proper_colorable,
    sat_brute_force,
    search_stable,
)

__version__ = "0.1.0"
