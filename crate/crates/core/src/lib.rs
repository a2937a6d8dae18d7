//! Searching for a hidden point of `R^d` when the only information is a
//! prediction `λ(p)` with `|pt| <= λ(p) <= c·|pt|`.
//!
//! The crate covers the geometric substrate ([`geometry`], [`nets`]), the
//! prediction sources ([`oracles`]), the search strategies ([`strategies`])
//! and the bound checks plus lower-bound adversary ([`verification`]).

pub mod error;
pub mod geometry;
pub mod nets;
pub mod oracles;
pub mod strategies;
pub mod verification;

pub use error::{Error, Result};
pub use geometry::{distance, path_length, Ball, Point, PolyPath, SphericalShell};
pub use nets::{build_net, check_covering, check_separation, visit_order, CoverReport, Net};
pub use oracles::{
    infer_lipschitz, refined_query, validate_oracle, Oracle, OracleKind, OracleSpec,
    PredictionOracle, QueryHistory, RefinedOracle,
};
pub use strategies::{
    one_step, search, search_exact, search_known_c, search_unknown_c, trilaterate, SearchTrace,
    StepOutcome, StepVariant, StrategyConfig, StrategyKind,
};
pub use verification::{
    adversary_query, audit_trace, bound_lower, bound_upper_known, bound_upper_unknown,
    build_adversarial_instance, tsp_ball_lower_bound, AdversarialInstance, ExperimentReport,
};
