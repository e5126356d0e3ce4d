//! Facility location on random shortest path metrics.
//!
//! Edge weights on the complete graph are i.i.d. `Exp(1)`; distances are the
//! induced shortest-path metric. On top of that model this crate provides the
//! kappa-cheapest-facilities heuristic, exact enumeration solvers, the
//! distributional identities the heuristic's cost obeys, closed-form bounds on
//! the optimum and on the expected approximation ratio, and a seeded Monte
//! Carlo harness that checks all of them against each other.
//!
//! Module map:
//!
//! * [`metric`]: edge weights, shortest-path metric construction and validation.
//! * [`flp`]: cost profiles, instances, solutions, kappa, ALG and OPT.
//! * [`stochastics`]: samplers, closed-form CDFs, KS tests, dominance checks.
//! * [`bounds`]: exponential-integral oracle, Padé sandwiches, moment bounds,
//!   the assembled ratio bound and the OPT lower-tail bound.
//! * [`experiments`]: reproducible replication driver and verdicts.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod flp;
pub mod metric;
pub mod numfmt;
pub mod rng;
pub mod stochastics;

pub use bounds::{
    corollary_regime, exp_integral, moment_bounds, normalized_exp_integral, opt_lower_tail_bound,
    pade_bounds, sample_opt_nk_lb, theorem2_bound, BoundReport, MomentBounds, PadeSandwich, Regime,
};
pub use error::{Error, Result};
pub use experiments::{
    run_bound_suite, run_distribution_suite, run_ratio_experiment, run_sweep, CostSpec,
    ExperimentConfig, ExperimentKind, ExperimentResult, ReplicationRecord, SweepTable, Verdict,
};
pub use flp::{
    alg_moments, alg_solve, kappa, opt_exact, opt_exact_k, opt_exact_by_size, solution_cost,
    CostProfile, Instance, KappaInfo, Solution,
};
pub use metric::{build_metric, sample_edge_weights, validate_metric, EdgeWeights, Metric, Violation};
pub use rng::{derive_seed, stream_from_seed, Stream};
pub use stochastics::{
    dominance_check, gamma_dominance_condition, harmonic, ks_one_sample, ks_two_sample,
    sample_alg_direct, sample_exp_sum, sample_gamma_int, scaled_max_cdf, sum_exp_range_cdf,
    DominanceResult, GammaSpec, KsResult, RateList,
};
