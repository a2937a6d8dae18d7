//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "d": 2,
//!   "target": [0.6, 0.8],
//!   "oracle": { "kind": "affine", "c_hi": 2.0, "alpha": 2.0 },
//!   "strategy": { "kind": "known_c", "c_guess": 2.0, "delta_stop": 0.001 },
//!   "seed": 7
//! }
//! ```
//!
//! `target` may instead be `{"random": {"r_min": 0.5, "r_max": 2.0}}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use predsearch_core::{Ball, OracleKind, OracleSpec, Point, StrategyConfig};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomTarget {
    pub r_min: f64,
    pub r_max: f64,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Fixed(Point),
    Random { random: RandomTarget },
}

/// Oracle parameters without the target, which comes from [`TargetSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSettings {
    pub kind: OracleKind,
    pub c_hi: f64,
    #[serde(default)]
    pub c_lo: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    #[serde(default)]
    pub trace: Option<String>,
    #[serde(default)]
    pub report: Option<String>,
    #[serde(default)]
    pub svg: Option<String>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub target: TargetSpec,
    pub oracle: OracleSettings,
    pub strategy: StrategyConfig,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.d == 0 {
            return bad("d must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        match &self.target {
            TargetSpec::Fixed(p) if p.dim() != self.d => {
                return bad(format!(
                    "target has dimension {}, config says {}",
                    p.dim(),
                    self.d
                ));
            }
            TargetSpec::Random { random } => {
                if !(0.0 <= random.r_min
                    && random.r_min <= random.r_max
                    && random.r_max.is_finite())
                {
                    return bad(format!(
                        "random target radii must satisfy 0 <= r_min <= r_max, got {} and {}",
                        random.r_min, random.r_max
                    ));
                }
            }
            _ => {}
        }
        self.strategy
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        self.oracle_spec(0)?
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }

    /// Target for trial `trial`; random targets draw from a stream keyed by
    /// the seed and the trial index.
    pub fn resolve_target(&self, trial: usize) -> Point {
        match &self.target {
            TargetSpec::Fixed(p) => p.clone(),
            TargetSpec::Random { random } => {
                let mut rng = ChaCha8Rng::seed_from_u64(random.seed.unwrap_or(self.seed));
                rng.set_stream(trial as u64);
                let radius = if random.r_max > random.r_min {
                    rng.random_range(random.r_min..=random.r_max)
                } else {
                    random.r_min
                };
                random_direction(self.d, &mut rng).scale(radius)
            }
        }
    }

    pub fn oracle_spec(&self, trial: usize) -> Result<OracleSpec> {
        let o = &self.oracle;
        let mut spec = OracleSpec::new(o.kind, self.resolve_target(trial), o.c_hi)
            .with_c_lo(o.c_lo.unwrap_or(1.0))
            .with_seed(o.seed.unwrap_or(self.seed));
        spec.alpha = o.alpha;
        if o.kind == OracleKind::Affine && o.alpha.is_none() {
            spec.alpha = Some(o.c_hi);
        }
        Ok(spec)
    }
}

/// Uniform direction on the unit sphere (normalized uniform ball sample).
pub fn random_direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Point {
    let ball = Ball::new(Point::origin(d), 1.0).expect("unit ball");
    loop {
        let p = ball.sample_uniform(rng);
        let n = p.norm();
        if n > 1e-6 {
            return p.scale(1.0 / n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fixed_and_random_targets() {
        let fixed = r#"{"d":2,"target":[0.6,0.8],
            "oracle":{"kind":"affine","c_hi":2.0,"alpha":2.0},
            "strategy":{"kind":"known_c","c_guess":2.0,"delta_stop":0.001}}"#;
        let cfg = ExperimentConfig::from_json(fixed).unwrap();
        assert_eq!(cfg.trials, 1);
        assert_eq!(cfg.resolve_target(0).coords(), &[0.6, 0.8]);

        let random = r#"{"d":3,"target":{"random":{"r_min":0.5,"r_max":2.0}},
            "oracle":{"kind":"seeded_noise","c_hi":4.0},
            "strategy":{"kind":"unknown_c"},"seed":11}"#;
        let cfg = ExperimentConfig::from_json(random).unwrap();
        let t = cfg.resolve_target(3);
        assert!((0.5..=2.0).contains(&t.norm()));
        assert_eq!(t, cfg.resolve_target(3));
        assert_ne!(t, cfg.resolve_target(4));
    }

    #[test]
    fn rejects_inconsistent_configs() {
        let wrong_dim = r#"{"d":3,"target":[0.6,0.8],
            "oracle":{"kind":"exact","c_hi":1.0},"strategy":{"kind":"exact_c1"}}"#;
        assert!(ExperimentConfig::from_json(wrong_dim).is_err());
        let bad_alpha = r#"{"d":2,"target":[0.6,0.8],
            "oracle":{"kind":"affine","c_hi":2.0,"alpha":3.0},"strategy":{"kind":"known_c"}}"#;
        assert!(ExperimentConfig::from_json(bad_alpha).is_err());
        let zero_trials = r#"{"d":1,"target":[1.0],"trials":0,
            "oracle":{"kind":"exact","c_hi":1.0},"strategy":{"kind":"exact_c1"}}"#;
        assert!(ExperimentConfig::from_json(zero_trials).is_err());
        let unknown_field = r#"{"d":1,"target":[1.0],"bogus":1,
            "oracle":{"kind":"exact","c_hi":1.0},"strategy":{"kind":"exact_c1"}}"#;
        assert!(ExperimentConfig::from_json(unknown_field).is_err());
        assert!(ExperimentConfig::from_json("{").is_err());
    }
}
