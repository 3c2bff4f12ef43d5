"""k-threshold cascades on small-world tori: python surface of the C++ core."""

from swcc._core import (
    BoundParams,
    ContagionTrace,
    Coord,
    DagEdge,
    EitherOrResult,
    EitherOrVerdict,
    ExperimentRecord,
    ExperimentSpec,
    FitResult,
    HeavySubsetBound,
    InfectionDag,
    LongTieFloorReport,
    P5Chain,
    PathTimeReport,
    Rational,
    Regime,
    RegimeVerdict,
    SmallWorldGraph,
    TieClass,
    TieKind,
    TorusGeometry,
    TrialEstimate,
    Variant,
    WideBridgeCensus,
    ZBounds,
    alpha_k,
    beta_k,
    build_dag,
    canonical_seed_cluster,
    check_either_or,
    check_long_tie_floor,
    check_path_time_consistency,
    classify_regime,
    fit_scaling_exponent,
    generate,
    heavy_subset_probability_bound,
    long_tie_count,
    long_tie_floor,
    long_tie_threshold,
    median_rounds,
    normalization_constant,
    p5_lower_bound_I,
    p5_lower_bound_W,
    recursive_spreading_trial,
    rounds_to_full,
    run_contagion,
    run_sweep,
    seed_mix,
    short_closure,
    spec_from_json,
    spec_to_json,
    wide_bridge_census,
    wilson_interval,
    z_expectation_bounds,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
