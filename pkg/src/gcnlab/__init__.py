"""Numerical lab for step-graphon random graphs, GCN embeddings, and
two-model hypothesis tests."""

__version__ = "0.1.0"

from .graphon import (
    DegreeProfile,
    FamilyPoint,
    SbmParams,
    StepGraphon,
    degree_function,
    delta_separation,
    dump_graphon,
    family_point_to_sbm,
    graphon_from_dict,
    graphon_to_dict,
    load_graphon,
    normalized_degree_profile,
    profile_l1,
    sbm_to_graphon,
    total_degree,
)
from .sampling import (
    IsolatedVertexError,
    LatentPoints,
    SampleGraph,
    random_walk_matrix,
    read_edge_list,
    read_latents,
    rng_stream,
    sample_coupled_pair,
    sample_graph,
    sample_latents,
    write_edge_list,
    write_latents,
)
from .gcn import (
    Activation,
    EmbeddingVector,
    GcnSpec,
    NormBudgetError,
    PerturbationError,
    check_norm_budget,
    embedding_vector,
    gcn_embedding,
    gcn_forward,
    gcn_spec_from_dict,
    gcn_spec_to_dict,
    op_inf_norm,
    perturb,
    walk_profile_gcn_spec,
)
from .analysis import (
    BoundValue,
    CutNormResult,
    DiffStats,
    DisconnectedGraphError,
    connected_component_sizes,
    cut_distance_graphs,
    cut_norm,
    cut_norm_exact,
    cut_norm_heuristic,
    cut_norm_value,
    diff_stats,
    error_lb_delta_pos,
    error_lb_delta_zero,
    linf_distance,
    stationary_distribution,
)
from .hypotest import (
    ConvergenceResult,
    TestConfig,
    TrialRecord,
    TrialRunResult,
    coupled_convergence_experiment,
    default_layer_count,
    profile_test,
    run_trials,
    wilson_ci,
)

__all__ = [name for name in dir() if not name.startswith("_")]
