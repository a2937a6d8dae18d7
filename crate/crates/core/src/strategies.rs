//! Search strategies driven by a prediction oracle.
//!
//! * [`one_step`] scans an ε-net of `B(p, λ(p))` with `ε = λ(p)/(2c)` and
//!   either halves the prediction or certifies that the guess `c` is too small.
//! * [`search_known_c`] repeats it with a fixed guess.
//! * [`search_unknown_c`] starts at guess 2 and doubles on every certified failure.
//! * [`search_exact`] handles exact distances by trilateration.
//!
//! Every search starts at the origin and stops once `λ <= delta_stop`
//! (or, with `snap_integral`, once `λ < 1/2` and the rounded point is visited).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Ball, Point, PolyPath};
use crate::nets::{build_net, visit_order, NET_SIZE_CONSTANT};
use crate::oracles::Oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    KnownC,
    UnknownC,
    ExactC1,
}

fn default_c_guess() -> f64 {
    1.0
}
fn default_delta_stop() -> f64 {
    1e-3
}
fn default_epsilon_ratio() -> f64 {
    0.01
}
fn default_max_queries() -> usize {
    10_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    #[serde(default = "default_c_guess")]
    pub c_guess: f64,
    #[serde(default = "default_delta_stop")]
    pub delta_stop: f64,
    #[serde(default = "default_epsilon_ratio")]
    pub epsilon_ratio: f64,
    #[serde(default)]
    pub snap_integral: bool,
    #[serde(default = "default_max_queries")]
    pub max_queries: usize,
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind) -> Self {
        StrategyConfig {
            kind,
            c_guess: default_c_guess(),
            delta_stop: default_delta_stop(),
            epsilon_ratio: default_epsilon_ratio(),
            snap_integral: false,
            max_queries: default_max_queries(),
        }
    }

    pub fn known_c(c_guess: f64, delta_stop: f64) -> Self {
        StrategyConfig {
            c_guess,
            delta_stop,
            ..Self::new(StrategyKind::KnownC)
        }
    }

    pub fn unknown_c(delta_stop: f64) -> Self {
        StrategyConfig {
            delta_stop,
            ..Self::new(StrategyKind::UnknownC)
        }
    }

    pub fn exact(epsilon_ratio: f64) -> Self {
        StrategyConfig {
            epsilon_ratio,
            ..Self::new(StrategyKind::ExactC1)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.delta_stop > 0.0) {
            return bad(format!(
                "delta_stop must be positive, got {}",
                self.delta_stop
            ));
        }
        if !(self.epsilon_ratio > 0.0) {
            return bad(format!(
                "epsilon_ratio must be positive, got {}",
                self.epsilon_ratio
            ));
        }
        if !(self.c_guess >= 1.0) || !self.c_guess.is_finite() {
            return bad(format!(
                "c_guess must be finite and >= 1, got {}",
                self.c_guess
            ));
        }
        if self.max_queries == 0 {
            return bad("max_queries must be positive".into());
        }
        Ok(())
    }
}

/// Counts oracle calls against a hard limit.
#[derive(Debug, Clone, Copy)]
pub struct QueryBudget {
    used: usize,
    limit: usize,
}

impl QueryBudget {
    pub fn new(limit: usize) -> Self {
        QueryBudget { used: 0, limit }
    }

    pub fn unlimited() -> Self {
        Self::new(usize::MAX)
    }

    pub fn used(&self) -> usize {
        self.used
    }

    fn ask<O: Oracle + ?Sized>(&mut self, oracle: &mut O, p: &Point) -> Result<f64> {
        if self.used >= self.limit {
            return Err(Error::QueryBudgetExceeded { limit: self.limit });
        }
        self.used += 1;
        oracle.query(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepVariant {
    Advanced { point: Point, lambda: f64 },
    GuessTooSmall,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub variant: StepVariant,
    /// Walk from the step origin through the visited net points (and back
    /// to the origin on failure).
    pub segment: PolyPath,
    pub queries: Vec<(Point, f64)>,
    pub net_size: usize,
}

impl StepOutcome {
    pub fn advanced(&self) -> bool {
        matches!(self.variant, StepVariant::Advanced { .. })
    }
}

/// `2·(4.5·2c)^d·λ = 2·(9c)^d·λ`: hard ceiling on a step's walk length for
/// the lattice-greedy net.
pub fn step_length_bound(c_guess: f64, d: usize, lambda: f64) -> f64 {
    2.0 * (NET_SIZE_CONSTANT * 2.0 * c_guess).powi(d as i32) * lambda
}

/// `2·(6c)^d·λ`, the same ceiling for an idealized `(3r/ε)^d` net.
pub fn ideal_step_length_bound(c_guess: f64, d: usize, lambda: f64) -> f64 {
    2.0 * (6.0 * c_guess).powi(d as i32) * lambda
}

pub fn one_step<O: Oracle + ?Sized>(
    p_i: &Point,
    lambda_i: f64,
    c_guess: f64,
    oracle: &mut O,
) -> Result<StepOutcome> {
    one_step_budgeted(
        p_i,
        lambda_i,
        c_guess,
        oracle,
        &mut QueryBudget::unlimited(),
    )
}

pub fn one_step_budgeted<O: Oracle + ?Sized>(
    p_i: &Point,
    lambda_i: f64,
    c_guess: f64,
    oracle: &mut O,
    budget: &mut QueryBudget,
) -> Result<StepOutcome> {
    if !(lambda_i > 0.0) || !lambda_i.is_finite() {
        return Err(Error::NonPositivePrediction(lambda_i));
    }
    if !(c_guess >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "c_guess must be >= 1, got {c_guess}"
        )));
    }
    let ball = Ball::new(p_i.clone(), lambda_i)?;
    let net = build_net(&ball, lambda_i / (2.0 * c_guess))?;
    let order = visit_order(&net, p_i)?;
    let threshold = lambda_i / 2.0;

    let mut segment = PolyPath::start(p_i.clone());
    let mut queries = Vec::new();
    for q in order {
        let v = budget.ask(oracle, &q)?;
        segment.push(q.clone())?;
        queries.push((q.clone(), v));
        if v <= threshold {
            return Ok(StepOutcome {
                variant: StepVariant::Advanced {
                    point: q,
                    lambda: v,
                },
                segment,
                queries,
                net_size: net.len(),
            });
        }
    }
    segment.push(p_i.clone())?;
    Ok(StepOutcome {
        variant: StepVariant::GuessTooSmall,
        segment,
        queries,
        net_size: net.len(),
    })
}

/// Per-step bookkeeping kept alongside a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub j: u32,
    pub i: u32,
    pub c_guess: f64,
    pub start: Point,
    pub start_lambda: f64,
    /// Prediction at the new point when the step advanced.
    pub end_lambda: Option<f64>,
    pub length: f64,
    pub net_size: usize,
    /// Largest distance from `start` reached by the step's walk.
    pub reach: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    pub vertices: PolyPath,
    pub lambda_values: Vec<f64>,
    pub phase_labels: Vec<(u32, u32)>,
    pub total_length: f64,
    pub reached: bool,
    /// Largest doubling index `j` used; 0 for strategies without doubling.
    pub doublings: u32,
    pub queries: usize,
    pub steps: Vec<StepRecord>,
}

impl SearchTrace {
    fn begin(start: Point, lambda: f64, label: (u32, u32)) -> Self {
        SearchTrace {
            vertices: PolyPath::start(start),
            lambda_values: vec![lambda],
            phase_labels: vec![label],
            total_length: 0.0,
            reached: false,
            doublings: 0,
            queries: 0,
            steps: Vec::new(),
        }
    }

    fn push(&mut self, p: Point, lambda: f64, label: (u32, u32)) -> Result<()> {
        self.total_length += distance(self.vertices.last(), &p)?;
        self.vertices.push(p)?;
        self.lambda_values.push(lambda);
        self.phase_labels.push(label);
        Ok(())
    }

    pub fn final_point(&self) -> &Point {
        self.vertices.last()
    }

    pub fn final_lambda(&self) -> f64 {
        *self.lambda_values.last().expect("trace is never empty")
    }

    pub fn origin_lambda(&self) -> f64 {
        self.lambda_values[0]
    }

    pub fn dim(&self) -> usize {
        self.vertices.dim()
    }
}

pub fn search<O: Oracle + ?Sized>(oracle: &mut O, config: &StrategyConfig) -> Result<SearchTrace> {
    match config.kind {
        StrategyKind::KnownC => search_known_c(oracle, config),
        StrategyKind::UnknownC => search_unknown_c(oracle, config),
        StrategyKind::ExactC1 => search_exact(oracle, config),
    }
}

pub fn search_known_c<O: Oracle + ?Sized>(
    oracle: &mut O,
    config: &StrategyConfig,
) -> Result<SearchTrace> {
    expect_kind(config, StrategyKind::KnownC)?;
    contraction_search(oracle, config, Some(config.c_guess))
}

pub fn search_unknown_c<O: Oracle + ?Sized>(
    oracle: &mut O,
    config: &StrategyConfig,
) -> Result<SearchTrace> {
    expect_kind(config, StrategyKind::UnknownC)?;
    contraction_search(oracle, config, None)
}

fn expect_kind(config: &StrategyConfig, kind: StrategyKind) -> Result<()> {
    config.validate()?;
    if config.kind != kind {
        return Err(Error::InvalidParameter(format!(
            "strategy config is {:?}, expected {kind:?}",
            config.kind
        )));
    }
    Ok(())
}

/// Shared loop of the known and unknown factor strategies. With a fixed
/// guess a failed step is an error; without one the guess starts at 2 and
/// doubles while the point stays put.
fn contraction_search<O: Oracle + ?Sized>(
    oracle: &mut O,
    config: &StrategyConfig,
    fixed_guess: Option<f64>,
) -> Result<SearchTrace> {
    let mut budget = QueryBudget::new(config.max_queries);
    let origin = Point::origin(oracle.dim());
    let mut j: u32 = 1;
    let mut i: u32 = 0;
    let mut c_guess = fixed_guess.unwrap_or(2.0);
    let mut p = origin.clone();
    let mut lambda = budget.ask(oracle, &origin)?;
    let mut trace = SearchTrace::begin(origin, lambda, (j, i));

    loop {
        if lambda <= config.delta_stop {
            trace.reached = true;
            break;
        }
        if config.snap_integral && lambda < 0.5 {
            let q = p.round();
            let v = budget.ask(oracle, &q)?;
            trace.push(q, v, (j, i))?;
            trace.reached = v <= config.delta_stop;
            break;
        }
        let step = one_step_budgeted(&p, lambda, c_guess, oracle, &mut budget)?;
        let reach = step
            .segment
            .vertices()
            .iter()
            .map(|v| distance(&p, v))
            .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))?;
        let mut record = StepRecord {
            j,
            i,
            c_guess,
            start: p.clone(),
            start_lambda: lambda,
            end_lambda: None,
            length: step.segment.length(),
            net_size: step.net_size,
            reach,
        };
        let visited = step.queries.len();
        match step.variant {
            StepVariant::Advanced { point, lambda: v } => {
                for (q, qv) in &step.queries[..visited - 1] {
                    trace.push(q.clone(), *qv, (j, i))?;
                }
                record.end_lambda = Some(v);
                i += 1;
                trace.push(point.clone(), v, (j, i))?;
                p = point;
                lambda = v;
            }
            StepVariant::GuessTooSmall => {
                for (q, qv) in &step.queries {
                    trace.push(q.clone(), *qv, (j, i))?;
                }
                if fixed_guess.is_some() {
                    return Err(Error::GuessTooSmall { c_guess });
                }
                j += 1;
                c_guess *= 2.0;
                trace.push(p.clone(), lambda, (j, i))?;
            }
        }
        trace.steps.push(record);
    }
    trace.doublings = j;
    trace.queries = budget.used();
    Ok(trace)
}

/// Exact-distance strategy: probe `δ = λ(o)·ε/(2d)` out and back along each
/// axis, trilaterate, then walk straight to the target.
pub fn search_exact<O: Oracle + ?Sized>(
    oracle: &mut O,
    config: &StrategyConfig,
) -> Result<SearchTrace> {
    expect_kind(config, StrategyKind::ExactC1)?;
    let mut budget = QueryBudget::new(config.max_queries);
    let d = oracle.dim();
    let origin = Point::origin(d);
    let lambda_o = budget.ask(oracle, &origin)?;
    let mut trace = SearchTrace::begin(origin.clone(), lambda_o, (0, 0));
    trace.doublings = 0;
    if lambda_o == 0.0 {
        trace.reached = true;
        trace.queries = budget.used();
        return Ok(trace);
    }

    let offset = lambda_o * config.epsilon_ratio / (2.0 * d as f64);
    let mut readings = vec![(origin.clone(), lambda_o)];
    for axis in 0..d {
        let q = Point::axis(d, axis, offset);
        let v = budget.ask(oracle, &q)?;
        trace.push(q.clone(), v, (0, 0))?;
        trace.push(origin.clone(), lambda_o, (0, 0))?;
        readings.push((q, v));
    }
    let target = trilaterate(&readings, d).map_err(|e| match e {
        Error::SingularSystem => {
            Error::Construction("axis probes produced a singular trilateration system".into())
        }
        other => other,
    })?;
    let v = budget.ask(oracle, &target)?;
    trace.push(target, v, (0, 1))?;
    trace.reached = v <= config.delta_stop;
    trace.queries = budget.used();
    Ok(trace)
}

/// Recovers the common point of `d + 1` spheres `|x - center_k| = r_k`.
/// Subtracting the first sphere from the others leaves the linear system
/// `2 (c_k - c_0)·u = r_0² - r_k² + |c_k - c_0|²` in `u = x - c_0`.
pub fn trilaterate(queries: &[(Point, f64)], d: usize) -> Result<Point> {
    if queries.len() != d + 1 {
        return Err(Error::InvalidParameter(format!(
            "trilateration in dimension {d} needs {} readings, got {}",
            d + 1,
            queries.len()
        )));
    }
    let (base, r0) = &queries[0];
    if base.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: base.dim(),
        });
    }
    let mut a = DMatrix::<f64>::zeros(d, d);
    let mut b = DVector::<f64>::zeros(d);
    for (row, (center, r)) in queries[1..].iter().enumerate() {
        let diff = center.sub(base)?;
        for (col, x) in diff.coords().iter().enumerate() {
            a[(row, col)] = 2.0 * x;
        }
        let diff2: f64 = diff.coords().iter().map(|x| x * x).sum();
        b[row] = (r0 - r) * (r0 + r) + diff2;
    }
    // scale-aware rank test: |det| against the product of row norms
    let row_norms: f64 = a.row_iter().map(|r| r.norm()).product();
    let lu = a.lu();
    if !(lu.determinant().abs() > 1e-12 * row_norms) {
        return Err(Error::SingularSystem);
    }
    let u = lu.solve(&b).ok_or(Error::SingularSystem)?;
    base.add(&Point::new(u.iter().copied().collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{OracleKind, OracleSpec, PredictionOracle};

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn oracle(spec: OracleSpec) -> PredictionOracle {
        PredictionOracle::new(spec).unwrap()
    }

    #[test]
    fn trilaterate_planar() {
        let readings = vec![
            (pt(&[0.0, 0.0]), 5.0),
            (pt(&[1.0, 0.0]), 20f64.sqrt()),
            (pt(&[0.0, 1.0]), 18f64.sqrt()),
        ];
        let t = trilaterate(&readings, 2).unwrap();
        // substitute back into all three sphere equations
        for (c, r) in &readings {
            assert!((distance(c, &t).unwrap() - r).abs() < 1e-12);
        }
        assert!(distance(&t, &pt(&[3.0, 4.0])).unwrap() < 1e-12);
    }

    #[test]
    fn trilaterate_line_and_errors() {
        let t = trilaterate(&[(pt(&[0.0]), 2.0), (pt(&[1.0]), 3.0)], 1).unwrap();
        assert_eq!(t, pt(&[-2.0]));
        let collinear = [
            (pt(&[0.0, 0.0]), 1.0),
            (pt(&[1.0, 0.0]), 1.0),
            (pt(&[2.0, 0.0]), 1.0),
        ];
        assert_eq!(trilaterate(&collinear, 2), Err(Error::SingularSystem));
        assert!(trilaterate(&collinear[..2], 2).is_err());
    }

    #[test]
    fn one_step_affine_halves() {
        let t = pt(&[0.6, 0.8]);
        let mut o = oracle(OracleSpec::new(OracleKind::Affine, t, 2.0).with_alpha(2.0));
        let p = Point::origin(2);
        let lambda = o.query(&p).unwrap();
        assert_eq!(lambda, 2.0);
        // normalize to lambda_i = 1 by starting at a point one half from t
        let p = pt(&[0.3, 0.4]);
        let lambda = o.query(&p).unwrap();
        assert!((lambda - 1.0).abs() < 1e-12);
        let out = one_step(&p, lambda, 2.0, &mut o).unwrap();
        match &out.variant {
            StepVariant::Advanced { lambda: v, .. } => assert!(*v <= lambda / 2.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(out.segment.length() <= step_length_bound(2.0, 2, lambda));
        assert!(step_length_bound(2.0, 2, 1.0) == 648.0);
    }

    #[test]
    fn one_step_exact_always_advances() {
        for c_guess in [1.0, 1.5, 3.0] {
            let mut o = oracle(OracleSpec::new(
                OracleKind::Exact,
                pt(&[-0.7, 0.2, 0.1]),
                1.0,
            ));
            let p = Point::origin(3);
            let lambda = o.query(&p).unwrap();
            assert!(one_step(&p, lambda, c_guess, &mut o).unwrap().advanced());
        }
    }

    #[test]
    fn one_step_postconditions_under_noise() {
        for seed in 0..100u64 {
            let t = pt(&[(seed as f64 * 0.37).sin(), (seed as f64 * 0.91).cos()]);
            let mut o =
                oracle(OracleSpec::new(OracleKind::SeededNoise, t.clone(), 8.0).with_seed(seed));
            let p = Point::origin(2);
            let lambda = o.query(&p).unwrap();
            let out = one_step(&p, lambda, 1.0, &mut o).unwrap();
            let ball = Ball::new(p.clone(), lambda).unwrap();
            for v in out.segment.vertices() {
                assert!(ball.contains(v).unwrap());
                assert!(distance(v, &t).unwrap() <= 2.0 * lambda);
            }
            match &out.variant {
                StepVariant::Advanced { point, lambda: v } => {
                    assert!(*v <= lambda / 2.0);
                    assert_eq!(out.segment.last(), point);
                }
                StepVariant::GuessTooSmall => assert_eq!(out.segment.last(), &p),
            }
            assert!(out.segment.length() <= step_length_bound(1.0, 2, lambda));
        }
    }

    #[test]
    fn one_step_rejects_zero_prediction() {
        let mut o = oracle(OracleSpec::new(OracleKind::Exact, Point::origin(2), 1.0));
        assert_eq!(
            one_step(&Point::origin(2), 0.0, 2.0, &mut o),
            Err(Error::NonPositivePrediction(0.0))
        );
    }

    #[test]
    fn known_c_at_target() {
        let mut o =
            oracle(OracleSpec::new(OracleKind::Affine, Point::origin(2), 2.0).with_alpha(2.0));
        let tr = search_known_c(&mut o, &StrategyConfig::known_c(2.0, 1e-3)).unwrap();
        assert_eq!(tr.vertices.len_vertices(), 1);
        assert_eq!(tr.total_length, 0.0);
        assert!(tr.reached);
    }

    #[test]
    fn known_c_affine_run() {
        let t = pt(&[0.6, 0.8]);
        let mut o = oracle(OracleSpec::new(OracleKind::Affine, t.clone(), 2.0).with_alpha(2.0));
        let tr = search_known_c(&mut o, &StrategyConfig::known_c(2.0, 1e-3)).unwrap();
        assert!(tr.reached);
        assert!(tr.total_length <= 2304.0);
        assert!(tr.steps.len() <= 11);
        assert!((tr.total_length - tr.vertices.length()).abs() <= 1e-9 * tr.total_length);
        assert!(distance(tr.final_point(), &t).unwrap() <= 1e-3);
        // recorded predictions replay identically
        for (v, &l) in tr.vertices.vertices().iter().zip(&tr.lambda_values) {
            assert_eq!(o.query(v).unwrap().to_bits(), l.to_bits());
        }
    }

    #[test]
    fn known_c_with_small_guess_fails() {
        // factor 8 with guess 1 cannot always halve; the run must either
        // reach the target or report the violated precondition
        let t = pt(&[0.9, -0.4]);
        let mut saw_error = false;
        for seed in 0..20 {
            let mut o =
                oracle(OracleSpec::new(OracleKind::SeededNoise, t.clone(), 8.0).with_seed(seed));
            match search_known_c(&mut o, &StrategyConfig::known_c(1.0, 1e-2)) {
                Ok(tr) => assert!(tr.reached),
                Err(Error::GuessTooSmall { c_guess }) => {
                    assert_eq!(c_guess, 1.0);
                    saw_error = true;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(saw_error);
    }

    #[test]
    fn query_budget_is_enforced() {
        let mut o =
            oracle(OracleSpec::new(OracleKind::Affine, pt(&[3.0, 1.0]), 2.0).with_alpha(2.0));
        let cfg = StrategyConfig {
            max_queries: 5,
            ..StrategyConfig::known_c(2.0, 1e-6)
        };
        assert_eq!(
            search_known_c(&mut o, &cfg),
            Err(Error::QueryBudgetExceeded { limit: 5 })
        );
    }

    #[test]
    fn wrong_kind_rejected() {
        let mut o = oracle(OracleSpec::new(OracleKind::Exact, pt(&[1.0]), 1.0));
        assert!(search_known_c(&mut o, &StrategyConfig::unknown_c(1e-3)).is_err());
        assert!(search_exact(&mut o, &StrategyConfig::known_c(1.0, 1e-3)).is_err());
    }

    #[test]
    fn unknown_c_exact_never_doubles() {
        let mut o = oracle(OracleSpec::new(OracleKind::Exact, pt(&[-1.2, 0.5]), 1.0));
        let tr = search_unknown_c(&mut o, &StrategyConfig::unknown_c(1e-3)).unwrap();
        assert!(tr.reached);
        assert_eq!(tr.doublings, 1);
        assert!(tr.steps.iter().all(|s| s.end_lambda.is_some()));
    }

    #[test]
    fn unknown_c_noisy_run() {
        let t = pt(&[0.6, -0.8]);
        let mut o = oracle(OracleSpec::new(OracleKind::SeededNoise, t.clone(), 8.0).with_seed(5));
        let tr = search_unknown_c(&mut o, &StrategyConfig::unknown_c(1e-3)).unwrap();
        assert!(tr.reached);
        assert!(tr.doublings <= 3);
        assert!(tr.total_length <= 884_736.0);
        let lo = tr.origin_lambda();
        for s in &tr.steps {
            assert!(s.start_lambda <= lo / 2f64.powi(s.i as i32));
        }
    }

    #[test]
    fn integral_snap() {
        let t = pt(&[3.0, -2.0]);
        let mut o = oracle(OracleSpec::new(OracleKind::SeededNoise, t.clone(), 4.0).with_seed(8));
        let cfg = StrategyConfig {
            snap_integral: true,
            ..StrategyConfig::known_c(4.0, 1e-9)
        };
        let tr = search_known_c(&mut o, &cfg).unwrap();
        assert!(tr.reached);
        assert_eq!(tr.final_point(), &t);
        assert_eq!(tr.final_lambda(), 0.0);
    }

    #[test]
    fn exact_strategy_examples() {
        let mut o = oracle(OracleSpec::new(OracleKind::Exact, pt(&[3.0, 4.0]), 1.0));
        let tr = search_exact(&mut o, &StrategyConfig::exact(0.01)).unwrap();
        assert!(tr.total_length <= 5.05 + 1e-12);
        assert!(distance(tr.final_point(), &pt(&[3.0, 4.0])).unwrap() <= 1e-9 * 5.0);

        let mut o = oracle(OracleSpec::new(OracleKind::Exact, Point::origin(2), 1.0));
        let tr = search_exact(&mut o, &StrategyConfig::exact(0.01)).unwrap();
        assert_eq!(tr.total_length, 0.0);
        assert!(tr.reached);

        let mut o = oracle(OracleSpec::new(OracleKind::Exact, pt(&[-2.0]), 1.0));
        let tr = search_exact(&mut o, &StrategyConfig::exact(0.1)).unwrap();
        assert!(tr.total_length <= 2.2 + 1e-12);
        assert!(tr.reached);
    }
}
