"""Spanning-tree growth and first-passage percolation experiments."""

from treegrowth.counting import (
    BoundRow,
    CountRow,
    bound_matrix,
    bound_paths_genus,
    bound_walks_degenerate,
    count_report,
    count_simple_paths_from,
    count_simple_paths_upto,
    count_walks,
    count_walks_from,
    height_cutoff_plan,
)
from treegrowth.families import (
    ConstructionMeta,
    DecompositionReport,
    FamilyError,
    FamilySpec,
    TreeDecomposition,
    build_family,
    build_tree_decomposition_degenerate,
    gen_complete,
    gen_degenerate_lower,
    gen_glued,
    gen_grid,
    gen_ladder,
    gen_planar_lower,
    gen_subdivided_tree,
    plan_family,
    verify_tree_decomposition,
)
from treegrowth.graphs import (
    BudgetExceededError,
    DegeneracyOrdering,
    ExpansionProfile,
    Graph,
    GraphError,
)
from treegrowth.growth import (
    FppResult,
    GrowthCertificateError,
    LawComparison,
    RootedTree,
    exact_discrete_law,
    grow_discrete,
    grow_fpp,
    law_equivalence_test,
    sample_edge_weights,
    sample_height,
)
from treegrowth.harness import (
    ExperimentSpec,
    HarnessError,
    MetricSummary,
    Summary,
    TrialRecord,
    Verdict,
    run_experiment,
    run_lower_bound_experiment,
    summarize,
)
from treegrowth.randomness import (
    TailCheckReport,
    check_erlang_head,
    check_erlang_tail,
    check_two_stage_sum,
    check_two_stage_tail,
    sample_erlang,
    sample_exponential,
    sample_two_stage_min,
    stream_for,
)

__all__ = [
    "BoundRow",
    "BudgetExceededError",
    "ConstructionMeta",
    "CountRow",
    "DecompositionReport",
    "DegeneracyOrdering",
    "ExpansionProfile",
    "ExperimentSpec",
    "FamilyError",
    "FamilySpec",
    "FppResult",
    "Graph",
    "GraphError",
    "GrowthCertificateError",
    "HarnessError",
    "LawComparison",
    "MetricSummary",
    "RootedTree",
    "Summary",
    "TailCheckReport",
    "TreeDecomposition",
    "TrialRecord",
    "Verdict",
    "bound_matrix",
    "bound_paths_genus",
    "bound_walks_degenerate",
    "build_family",
    "build_tree_decomposition_degenerate",
    "check_erlang_head",
    "check_erlang_tail",
    "check_two_stage_sum",
    "check_two_stage_tail",
    "count_report",
    "count_simple_paths_from",
    "count_simple_paths_upto",
    "count_walks",
    "count_walks_from",
    "exact_discrete_law",
    "gen_complete",
    "gen_degenerate_lower",
    "gen_glued",
    "gen_grid",
    "gen_ladder",
    "gen_planar_lower",
    "gen_subdivided_tree",
    "grow_discrete",
    "grow_fpp",
    "height_cutoff_plan",
    "law_equivalence_test",
    "plan_family",
    "run_experiment",
    "run_lower_bound_experiment",
    "sample_edge_weights",
    "sample_erlang",
    "sample_exponential",
    "sample_height",
    "sample_two_stage_min",
    "stream_for",
    "summarize",
    "verify_tree_decomposition",
]
