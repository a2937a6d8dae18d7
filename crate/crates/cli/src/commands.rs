//! The four harness commands as library functions. Each returns its
//! rendered outputs; writing files and mapping to exit codes is left to the
//! binary.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use predsearch_core::nets::{self, CoverReport};
use predsearch_core::strategies::step_length_bound;
use predsearch_core::verification::{doubling_cap, AdversarialInstance};
use predsearch_core::{
    audit_trace, build_adversarial_instance, build_net, check_covering, check_separation, search,
    Ball, ExperimentReport, OracleKind, OracleSpec, Point, PredictionOracle, SearchTrace,
    StrategyConfig, StrategyKind,
};

use crate::config::{random_direction, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::output::{fmt_num, report_json, to_json, trace_csv};
use crate::svg::{render_svg, Scene};

pub struct RunOutput {
    pub report: ExperimentReport,
    pub trace: SearchTrace,
    pub trace_csv: String,
    pub report_json: String,
    pub svg: Option<String>,
}

/// One search from `config` (trial 0), audited.
pub fn cmd_run(config: &ExperimentConfig, want_svg: bool) -> Result<RunOutput> {
    config.validate()?;
    let spec = config.oracle_spec(0)?;
    if config.strategy.kind == StrategyKind::ExactC1 && !(spec.c_lo == 1.0 && spec.c_hi == 1.0) {
        return Err(HarnessError::Config(
            "exact_c1 strategy needs an exact oracle (c_lo = c_hi = 1)".into(),
        ));
    }
    if want_svg && config.d != 2 {
        return Err(HarnessError::Config(format!(
            "SVG output needs d = 2, got {}",
            config.d
        )));
    }
    let mut oracle = PredictionOracle::new(spec.clone())?;
    let trace = search(&mut oracle, &config.strategy)?;
    let report = audit_trace(
        &trace,
        &spec.target,
        spec.c_hi,
        spec.c_lo,
        &config.strategy,
        None,
    )?;
    let svg = if want_svg {
        let scene = Scene {
            target: Some(spec.target.clone()),
            balls: Vec::new(),
        };
        Some(render_svg(&trace, &scene)?)
    } else {
        None
    };
    Ok(RunOutput {
        trace_csv: trace_csv(&trace),
        report_json: report_json(&report)?,
        report,
        trace,
        svg,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub dims: Vec<usize>,
    pub cs: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub delta_stop: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl SweepParams {
    pub fn new(dims: Vec<usize>, cs: Vec<f64>, trials: usize, seed: u64) -> Self {
        SweepParams {
            dims,
            cs,
            trials,
            seed,
            delta_stop: 1e-3,
            r_min: 0.5,
            r_max: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub c: f64,
    pub trial: usize,
    pub strategy: StrategyKind,
    pub target: Point,
    pub report: ExperimentReport,
    /// Ratio ceiling for this strategy: `2·6^d·c^(d+1)` or `(12c)^(d+1)`.
    pub bound: f64,
    pub doubling_cap: u32,
    /// `λ` at every phase point divided by `λ(o)/2^i`; at most 1.
    pub worst_phase_ratio: f64,
    /// Every step walk is at most `2·(9c)^d·λ(p_i)` for its guess `c`.
    pub step_bound_ok: bool,
    /// Every phase point satisfies `λ(p_i) <= λ(o)/2^i`.
    pub phase_halving_ok: bool,
}

impl SweepRow {
    pub fn ok(&self) -> bool {
        self.report.ok()
            && self.step_bound_ok
            && self.phase_halving_ok
            && self.report.doublings <= self.doubling_cap
            && self.report.ratio.is_none_or(|r| r <= self.bound)
    }
}

pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub csv: String,
}

impl SweepOutput {
    pub fn failures(&self) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| !r.ok()).collect()
    }
}

fn sweep_trial(
    params: &SweepParams,
    d: usize,
    c: f64,
    trial: usize,
    stream: u64,
) -> Result<Vec<SweepRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(stream);
    let radius = rng.random_range(params.r_min..=params.r_max);
    let target = random_direction(d, &mut rng).scale(radius);
    let oracle_seed: u64 = rng.random();
    let spec = OracleSpec::new(OracleKind::SeededNoise, target.clone(), c).with_seed(oracle_seed);

    let strategies = [
        StrategyConfig::known_c(c, params.delta_stop),
        StrategyConfig::unknown_c(params.delta_stop),
    ];
    let mut rows = Vec::with_capacity(strategies.len());
    for config in strategies {
        let mut oracle = PredictionOracle::new(spec.clone())?;
        let trace = search(&mut oracle, &config)?;
        let report = audit_trace(&trace, &target, c, 1.0, &config, None)?;
        let bound = match config.kind {
            StrategyKind::KnownC => report.bound_upper_known,
            _ => report.bound_upper_unknown,
        };
        let lambda_o = trace.origin_lambda();
        let worst_phase_ratio = trace
            .steps
            .iter()
            .map(|s| s.start_lambda / (lambda_o / 2f64.powi(s.i as i32)))
            .fold(0.0, f64::max);
        let step_bound_ok = trace
            .steps
            .iter()
            .all(|s| s.length <= step_length_bound(s.c_guess, d, s.start_lambda));
        let phase_halving_ok = trace
            .steps
            .iter()
            .all(|s| s.start_lambda <= lambda_o / 2f64.powi(s.i as i32));
        rows.push(SweepRow {
            d,
            c,
            trial,
            strategy: config.kind,
            target: target.clone(),
            report,
            bound,
            doubling_cap: doubling_cap(c),
            worst_phase_ratio,
            step_bound_ok,
            phase_halving_ok,
        });
    }
    Ok(rows)
}

fn strategy_name(kind: StrategyKind) -> &'static str {
    match kind {
        StrategyKind::KnownC => "known_c",
        StrategyKind::UnknownC => "unknown_c",
        StrategyKind::ExactC1 => "exact_c1",
    }
}

const SWEEP_HEADER: &str = "kind,d,c,trial,strategy,dist_ot,total_length,ratio,bound,doublings,doubling_cap,queries,steps,max_step_ratio,reached,ok\n";

fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn sweep_csv(rows: &[SweepRow], params: &SweepParams) -> String {
    let mut out = String::from(SWEEP_HEADER);
    for r in rows {
        let _ = writeln!(
            out,
            "trial,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.d,
            fmt_num(r.c),
            r.trial,
            strategy_name(r.strategy),
            fmt_num(r.report.dist_ot),
            fmt_num(r.report.total_length),
            opt_num(r.report.ratio),
            fmt_num(r.bound),
            r.report.doublings,
            r.doubling_cap,
            r.report.queries,
            r.report.steps,
            opt_num(r.report.max_step_ratio),
            r.report.reached,
            r.ok(),
        );
    }
    for &d in &params.dims {
        for &c in &params.cs {
            for kind in [StrategyKind::KnownC, StrategyKind::UnknownC] {
                let cell: Vec<&SweepRow> = rows
                    .iter()
                    .filter(|r| r.d == d && r.c == c && r.strategy == kind)
                    .collect();
                let ratios: Vec<f64> = cell.iter().filter_map(|r| r.report.ratio).collect();
                if ratios.is_empty() {
                    continue;
                }
                let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
                let max = ratios.iter().copied().fold(f64::MIN, f64::max);
                let bound = cell[0].bound;
                let all_ok = cell.iter().all(|r| r.ok());
                for (label, value) in [("mean", mean), ("max", max)] {
                    let _ = writeln!(
                        out,
                        "{label},{d},{},,{},,,{},{},,{},,,,,{all_ok}",
                        fmt_num(c),
                        strategy_name(kind),
                        fmt_num(value),
                        fmt_num(bound),
                        cell[0].doubling_cap,
                    );
                }
            }
        }
    }
    out
}

/// Seeded-noise trials over the `(d, c)` grid, both contraction strategies
/// per trial. Trials run in parallel; rows come back in `(d, c, trial)` order.
pub fn cmd_sweep(params: &SweepParams) -> Result<SweepOutput> {
    if params.dims.is_empty() || params.cs.is_empty() || params.trials == 0 {
        return Err(HarnessError::Config(
            "sweep needs dimensions, factors and trials".into(),
        ));
    }
    if let Some(c) = params.cs.iter().find(|&&c| !(c >= 1.0)) {
        return Err(HarnessError::Config(format!(
            "prediction factors must be >= 1, got {c}"
        )));
    }
    if params.dims.contains(&0) {
        return Err(HarnessError::Config("dimensions must be >= 1".into()));
    }
    let mut jobs = Vec::new();
    for &d in &params.dims {
        for &c in &params.cs {
            for trial in 0..params.trials {
                jobs.push((d, c, trial, jobs.len() as u64));
            }
        }
    }
    let nested: Vec<Vec<SweepRow>> = jobs
        .par_iter()
        .map(|&(d, c, trial, stream)| sweep_trial(params, d, c, trial, stream))
        .collect::<Result<_>>()?;
    let rows: Vec<SweepRow> = nested.into_iter().flatten().collect();
    let csv = sweep_csv(&rows, params);
    Ok(SweepOutput { rows, csv })
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundSummary {
    pub c: f64,
    pub d: usize,
    pub strategy: StrategyKind,
    pub targets: usize,
    pub min_targets: f64,
    pub committed_target: Option<Point>,
    pub replay_ok: bool,
    pub report: ExperimentReport,
}

pub struct LowerBoundOutput {
    pub summary: LowerBoundSummary,
    pub trace: SearchTrace,
    pub instance: AdversarialInstance,
    pub json: String,
}

impl LowerBoundOutput {
    pub fn ok(&self) -> bool {
        self.summary.replay_ok && self.summary.report.ok()
    }
}

/// Plays `strategy` against the adaptive adversary and audits the outcome.
pub fn cmd_lowerbound(
    c: f64,
    d: usize,
    strategy: StrategyKind,
    delta_stop: f64,
) -> Result<LowerBoundOutput> {
    let config = match strategy {
        StrategyKind::KnownC => StrategyConfig::known_c(c, delta_stop),
        StrategyKind::UnknownC => StrategyConfig::unknown_c(delta_stop),
        StrategyKind::ExactC1 => {
            return Err(HarnessError::Config(
                "the lower-bound game needs known_c or unknown_c".into(),
            ))
        }
    };
    let mut instance = build_adversarial_instance(c, d).map_err(|e| match e {
        predsearch_core::Error::Hypothesis(m) => HarnessError::Config(m),
        other => other.into(),
    })?;
    let trace = search(&mut instance, &config)?;
    let committed = instance.committed().cloned();
    let (report, replay_ok) = match &committed {
        Some(t) => (
            audit_trace(&trace, t, c, 1.0, &config, Some(&instance))?,
            instance.replay_matches()?,
        ),
        None => {
            // the search stopped without forcing a commitment; audit against
            // the first live candidate so the report still has numbers
            let t = instance.targets()[instance.live()[0]].clone();
            let mut rep = audit_trace(&trace, &t, c, 1.0, &config, Some(&instance))?;
            rep.violations
                .push("adversary never committed to a target".into());
            (rep, false)
        }
    };
    let summary = LowerBoundSummary {
        c,
        d,
        strategy,
        targets: instance.targets().len(),
        min_targets: (c / 8.0).powi(d as i32),
        committed_target: committed,
        replay_ok,
        report,
    };
    let json = to_json(&summary)?;
    Ok(LowerBoundOutput {
        summary,
        trace,
        instance,
        json,
    })
}

pub fn lowerbound_scene(instance: &AdversarialInstance) -> Scene {
    Scene {
        target: instance.committed().cloned(),
        balls: instance.balls(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NetSummary {
    pub d: usize,
    pub r: f64,
    pub eps: f64,
    pub size: usize,
    pub min_size: f64,
    pub max_size: f64,
    pub ideal_max_size: f64,
    pub within_bounds: bool,
    pub covering: Option<CoverReport>,
    pub separated: Option<bool>,
}

pub const NET_CHECK_SAMPLES: usize = 10_000;

pub fn cmd_net(
    d: usize,
    r: f64,
    eps: f64,
    check: bool,
    seed: u64,
) -> Result<(NetSummary, Vec<Point>)> {
    if d == 0 {
        return Err(HarnessError::Config("d must be at least 1".into()));
    }
    let ball = Ball::new(Point::origin(d), r).map_err(|e| HarnessError::Config(e.to_string()))?;
    let net = build_net(&ball, eps).map_err(|e| match e {
        predsearch_core::Error::InvalidParameter(m) => HarnessError::Config(m),
        other => other.into(),
    })?;
    let size = net.len();
    let min_size = nets::min_cover_size(r, eps, d);
    let max_size = nets::max_net_size(r, eps, d);
    let summary = NetSummary {
        d,
        r,
        eps,
        size,
        min_size,
        max_size,
        ideal_max_size: nets::ideal_net_size(r, eps, d),
        within_bounds: min_size <= size as f64 && size as f64 <= max_size,
        covering: check.then(|| check_covering(&net, NET_CHECK_SAMPLES, seed)),
        separated: check.then(|| check_separation(&net)),
    };
    Ok((summary, net.points().to_vec()))
}

pub fn points_csv(points: &[Point]) -> String {
    let Some(first) = points.first() else {
        return String::new();
    };
    let mut out = (0..first.dim())
        .map(|k| format!("x{k}"))
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for p in points {
        let row: Vec<String> = p.coords().iter().map(|&x| fmt_num(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
