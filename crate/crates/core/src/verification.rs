//! Bound formulas, the adaptive lower-bound adversary and trace auditing.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Ball, Point};
use crate::nets::{separated_set, DEFAULT_CANDIDATE_CAP};
use crate::oracles::{piecewise_common_value, piecewise_value, Oracle};
use crate::strategies::{step_length_bound, SearchTrace, StrategyConfig, StrategyKind};

/// Minimum length of a path meeting `n` pairwise interior-disjoint balls of
/// radius `delta` in `R^d`: `max(0, (n/2^d - 1)·delta·√(π/d))`.
pub fn tsp_ball_lower_bound(n: usize, delta: f64, d: usize) -> f64 {
    let base = n as f64 / 2f64.powi(d as i32) - 1.0;
    (base * delta * (PI / d as f64).sqrt()).max(0.0)
}

/// `2·6^d·c^(d+1)`
pub fn bound_upper_known(c: f64, d: usize) -> f64 {
    2.0 * 6f64.powi(d as i32) * c.powi(d as i32 + 1)
}

/// `(12c)^(d+1)`
pub fn bound_upper_unknown(c: f64, d: usize) -> f64 {
    (12.0 * c).powi(d as i32 + 1)
}

fn sqrt_pi_over_d_capped(d: usize) -> f64 {
    (PI / d as f64).sqrt().min(1.0)
}

/// Competitive-ratio floor `(1/4)·(c/16)^(d-1)·min(√(π/d), 1)`, valid for `c >= 4`.
pub fn bound_lower(c: f64, d: usize) -> Result<f64> {
    if !(c >= 4.0) {
        return Err(Error::Hypothesis(format!(
            "lower bound needs c >= 4, got {c}"
        )));
    }
    Ok(0.25 * (c / 16.0).powi(d as i32 - 1) * sqrt_pi_over_d_capped(d))
}

/// Path-length floor `(c^(d-1)/16^d)·min(√(π/d), 1)` of the lower-bound game.
pub fn lower_bound_length(c: f64, d: usize) -> Result<f64> {
    if !(c >= 4.0) {
        return Err(Error::Hypothesis(format!(
            "lower bound needs c >= 4, got {c}"
        )));
    }
    Ok(c.powi(d as i32 - 1) / 16f64.powi(d as i32) * sqrt_pi_over_d_capped(d))
}

/// `⌈log2 c⌉`, floored at 1 because the doubling search starts at `j = 1`.
pub fn doubling_cap(c: f64) -> u32 {
    (c.log2().ceil() as u32).max(1)
}

/// Candidate targets for the lower-bound game and the adversary's state.
///
/// Targets form a `2/c`-separated set in `B(o, 1/4)`, so the balls
/// `B(t, 1/c)` are pairwise interior disjoint. Every live target is a
/// consistent explanation of all answers given so far.
#[derive(Debug, Clone)]
pub struct AdversarialInstance {
    c: f64,
    d: usize,
    targets: Vec<Point>,
    live: Vec<usize>,
    log: Vec<(Point, f64)>,
}

impl AdversarialInstance {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn ball_radius(&self) -> f64 {
        1.0 / self.c
    }

    pub fn targets(&self) -> &[Point] {
        &self.targets
    }

    pub fn live(&self) -> &[usize] {
        &self.live
    }

    pub fn query_log(&self) -> &[(Point, f64)] {
        &self.log
    }

    /// The target once a single candidate is left.
    pub fn committed(&self) -> Option<&Point> {
        match self.live.as_slice() {
            [only] => Some(&self.targets[*only]),
            _ => None,
        }
    }

    pub fn balls(&self) -> Vec<Ball> {
        self.targets
            .iter()
            .map(|t| Ball::new(t.clone(), self.ball_radius()).expect("positive radius"))
            .collect()
    }

    /// Re-evaluates every logged query against the committed target's
    /// piecewise prediction and reports whether all answers match bit for bit.
    pub fn replay_matches(&self) -> Result<bool> {
        let t = self
            .committed()
            .ok_or_else(|| Error::InvalidParameter("adversary has not committed".into()))?;
        for (p, v) in &self.log {
            if piecewise_value(t, self.c, p)?.to_bits() != v.to_bits() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn build_adversarial_instance(c: f64, d: usize) -> Result<AdversarialInstance> {
    if !(c > 4.0) || !c.is_finite() {
        return Err(Error::Hypothesis(format!(
            "adversarial instance needs c > 4, got {c}"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    let region = Ball::new(Point::origin(d), 0.25)?;
    let set = separated_set(&region, 2.0 / c, DEFAULT_CANDIDATE_CAP)?;
    let floor = (c / 8.0).powi(d as i32);
    if (set.len() as f64) < floor {
        return Err(Error::Construction(format!(
            "separated set has {} points, need at least {floor}",
            set.len()
        )));
    }
    let targets = set.points().to_vec();
    let live = (0..targets.len()).collect();
    Ok(AdversarialInstance {
        c,
        d,
        targets,
        live,
        log: Vec::new(),
    })
}

/// Answers a query while keeping every live target consistent.
///
/// Outside all live balls the family agrees, so the common value is
/// returned. Live balls containing `p` are eliminated while some other live
/// ball does not contain `p`; when every live ball contains `p`, the
/// adversary commits to the highest-index one and answers `c·|pt|`.
pub fn adversary_query(inst: &mut AdversarialInstance, p: &Point) -> Result<f64> {
    if p.dim() != inst.d {
        return Err(Error::DimensionMismatch {
            expected: inst.d,
            found: p.dim(),
        });
    }
    let r = inst.ball_radius();
    let mut hit = Vec::new();
    for &i in &inst.live {
        if distance(p, &inst.targets[i])? <= r {
            hit.push(i);
        }
    }
    let value = if hit.is_empty() {
        piecewise_common_value(p)
    } else if hit.len() < inst.live.len() {
        inst.live.retain(|i| !hit.contains(i));
        piecewise_common_value(p)
    } else {
        let keep = *hit.iter().max().expect("nonempty");
        inst.live = vec![keep];
        piecewise_value(&inst.targets[keep], inst.c, p)?
    };
    inst.log.push((p.clone(), value));
    Ok(value)
}

impl Oracle for AdversarialInstance {
    fn dim(&self) -> usize {
        self.d
    }

    fn query(&mut self, p: &Point) -> Result<f64> {
        adversary_query(self, p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub strategy: StrategyKind,
    pub dim: usize,
    pub c_star: f64,
    pub total_length: f64,
    pub dist_ot: f64,
    /// `total_length / dist_ot`; absent when the target is the origin.
    pub ratio: Option<f64>,
    pub degenerate: bool,
    pub reached: bool,
    pub final_distance: f64,
    pub queries: usize,
    pub doublings: u32,
    pub steps: usize,
    pub bound_upper_known: f64,
    pub bound_upper_unknown: f64,
    pub bound_lower_ratio: Option<f64>,
    pub max_step_ratio: Option<f64>,
    pub tsp_floor: Option<f64>,
    pub lower_bound_length: Option<f64>,
    pub balls_total: Option<usize>,
    pub balls_visited: Option<usize>,
    pub violations: Vec<String>,
}

impl ExperimentReport {
    pub fn ok(&self) -> bool {
        self.reached && self.violations.is_empty()
    }
}

/// Audits a finished trace against the hidden target and the applicable bounds.
///
/// `c_star` is the true prediction factor (the oracle's `c_hi`), `c_lo` the
/// underestimate factor. For adversarial runs pass the instance; its
/// committed target should equal `target`.
pub fn audit_trace(
    trace: &SearchTrace,
    target: &Point,
    c_star: f64,
    c_lo: f64,
    config: &StrategyConfig,
    instance: Option<&AdversarialInstance>,
) -> Result<ExperimentReport> {
    let d = trace.dim();
    let origin = Point::origin(d);
    let dist_ot = distance(&origin, target)?;
    let total_length = trace.total_length;
    let degenerate = dist_ot == 0.0;
    let ratio = (!degenerate).then(|| total_length / dist_ot);
    let final_distance = distance(trace.final_point(), target)?;
    let mut violations = Vec::new();

    let recomputed = trace.vertices.length();
    if (recomputed - total_length).abs() > 1e-9 * recomputed.max(1.0) {
        violations.push(format!(
            "recorded length {total_length} differs from polyline length {recomputed}"
        ));
    }
    if trace.reached {
        let limit = match config.kind {
            StrategyKind::ExactC1 => config.delta_stop.max(1e-9 * trace.origin_lambda()),
            _ => config.delta_stop,
        } / c_lo;
        if final_distance > limit * (1.0 + 1e-12) {
            violations.push(format!(
                "reached but final distance {final_distance} exceeds {limit}"
            ));
        }
    }

    let known = bound_upper_known(c_star, d);
    let unknown = bound_upper_unknown(c_star, d);
    let lambda_o = trace.origin_lambda();
    match config.kind {
        StrategyKind::KnownC => {
            let b = bound_upper_known(config.c_guess, d);
            if let Some(r) = ratio.filter(|&r| r > b) {
                violations.push(format!("ratio {r} exceeds known-c bound {b}"));
            }
        }
        StrategyKind::UnknownC => {
            if instance.is_none() {
                if let Some(r) = ratio.filter(|&r| r > unknown) {
                    violations.push(format!("ratio {r} exceeds unknown-c bound {unknown}"));
                }
            }
            let cap = doubling_cap(c_star);
            if trace.doublings > cap {
                violations.push(format!("doublings {} exceed cap {cap}", trace.doublings));
            }
        }
        StrategyKind::ExactC1 => {
            let b = (1.0 + config.epsilon_ratio) * dist_ot + 1e-9;
            if total_length > b {
                violations.push(format!("length {total_length} exceeds (1+eps)|ot| = {b}"));
            }
        }
    }

    let mut max_step_ratio: Option<f64> = None;
    for s in &trace.steps {
        let b = step_length_bound(s.c_guess, d, s.start_lambda);
        if s.length > b {
            violations.push(format!(
                "step (j={}, i={}) length {} exceeds {b}",
                s.j, s.i, s.length
            ));
        }
        let rel = s.length / s.start_lambda;
        max_step_ratio = Some(max_step_ratio.map_or(rel, |m: f64| m.max(rel)));
        if s.reach > s.start_lambda {
            violations.push(format!("step (j={}, i={}) leaves B(p_i, λ(p_i))", s.j, s.i));
        }
        let halving = lambda_o / 2f64.powi(s.i as i32);
        if s.start_lambda > halving {
            violations.push(format!(
                "λ at phase point (j={}, i={}) is {}, above λ(o)/2^i = {halving}",
                s.j, s.i, s.start_lambda
            ));
        }
        if let Some(e) = s.end_lambda {
            if e > s.start_lambda / 2.0 {
                violations.push(format!("step (j={}, i={}) did not halve λ", s.j, s.i));
            }
        }
    }

    let mut report = ExperimentReport {
        strategy: config.kind,
        dim: d,
        c_star,
        total_length,
        dist_ot,
        ratio,
        degenerate,
        reached: trace.reached,
        final_distance,
        queries: trace.queries,
        doublings: trace.doublings,
        steps: trace.steps.len(),
        bound_upper_known: known,
        bound_upper_unknown: unknown,
        bound_lower_ratio: bound_lower(c_star, d).ok(),
        max_step_ratio,
        tsp_floor: None,
        lower_bound_length: None,
        balls_total: None,
        balls_visited: None,
        violations,
    };

    if let Some(inst) = instance {
        let balls = inst.balls();
        let verts = trace.vertices.vertices();
        let mut visited = 0usize;
        for ball in &balls {
            let mut met = verts.len() == 1 && ball.contains(&verts[0])?;
            for w in verts.windows(2) {
                if met {
                    break;
                }
                met = ball.meets_segment(&w[0], &w[1])?;
            }
            visited += usize::from(met);
        }
        let n = inst.targets().len();
        let floor = tsp_ball_lower_bound(n, inst.ball_radius(), d);
        let figure = lower_bound_length(inst.c(), d)?;
        let combined =
            n as f64 / 2f64.powi(d as i32) * inst.ball_radius() * sqrt_pi_over_d_capped(d);
        if trace.reached {
            if visited != n {
                report
                    .violations
                    .push(format!("visited {visited} of {n} target balls"));
            }
            if total_length < floor {
                report
                    .violations
                    .push(format!("length {total_length} below TSP floor {floor}"));
            }
            if total_length < figure {
                report.violations.push(format!(
                    "length {total_length} below lower-bound figure {figure}"
                ));
            }
            if total_length < combined {
                report.violations.push(format!(
                    "length {total_length} below combined floor {combined}"
                ));
            }
            if let (Some(r), Ok(lb)) = (ratio, bound_lower(inst.c(), d)) {
                if r < lb {
                    report
                        .violations
                        .push(format!("ratio {r} below the lower-bound ratio {lb}"));
                }
            }
            if !inst.replay_matches()? {
                report
                    .violations
                    .push("adversary answers do not replay".into());
            }
        }
        report.tsp_floor = Some(floor);
        report.lower_bound_length = Some(figure);
        report.balls_total = Some(n);
        report.balls_visited = Some(visited);
    }
    Ok(report)
}
