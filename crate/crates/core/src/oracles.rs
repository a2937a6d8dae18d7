//! Prediction oracles: functions `λ` with `c_lo·|pt| <= λ(p) <= c_hi·|pt|`
//! for a hidden target `t`, plus the Lipschitz inference wrapper.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Ball, Point};

/// Relative slack allowed by [`validate_oracle`].
pub const VALIDITY_SLACK: f64 = 1e-9;

/// Anything the search strategies can ask for a prediction.
pub trait Oracle {
    fn dim(&self) -> usize;
    fn query(&mut self, p: &Point) -> Result<f64>;
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn query(&mut self, p: &Point) -> Result<f64> {
        (**self).query(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    /// `λ(p) = |pt|`
    Exact,
    /// `λ(p) = alpha·|pt|`
    Affine,
    /// `λ(p) = ((1 + c)/2)·|pt|`
    MidpointOpen,
    /// `λ(p) = u(p)·|pt|`, `u(p)` a seeded hash of the exact coordinates,
    /// uniform in `[c_lo, c_hi]`
    SeededNoise,
    /// The three-piece family used by the lower-bound construction.
    PiecewiseLowerBound,
}

impl OracleKind {
    pub const ALL: [OracleKind; 5] = [
        OracleKind::Exact,
        OracleKind::Affine,
        OracleKind::MidpointOpen,
        OracleKind::SeededNoise,
        OracleKind::PiecewiseLowerBound,
    ];
}

fn default_c_lo() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub kind: OracleKind,
    pub target: Point,
    pub c_hi: f64,
    #[serde(default = "default_c_lo")]
    pub c_lo: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub alpha: Option<f64>,
}

impl OracleSpec {
    pub fn new(kind: OracleKind, target: Point, c_hi: f64) -> Self {
        OracleSpec {
            kind,
            target,
            c_hi,
            c_lo: 1.0,
            seed: 0,
            alpha: None,
        }
    }

    pub fn with_c_lo(mut self, c_lo: f64) -> Self {
        self.c_lo = c_lo;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.c_lo > 0.0 && self.c_lo <= 1.0) {
            return bad(format!("c_lo must lie in (0, 1], got {}", self.c_lo));
        }
        if !(self.c_hi >= 1.0) || !self.c_hi.is_finite() {
            return bad(format!("c_hi must be finite and >= 1, got {}", self.c_hi));
        }
        match self.kind {
            OracleKind::Affine => match self.alpha {
                Some(a) if self.c_lo <= a && a <= self.c_hi => {}
                Some(a) => return bad(format!("alpha {a} outside [{}, {}]", self.c_lo, self.c_hi)),
                None => return bad("affine oracle needs alpha".into()),
            },
            OracleKind::PiecewiseLowerBound => {
                if !(self.c_hi > 2.0) {
                    return bad(format!("piecewise family needs c > 2, got {}", self.c_hi));
                }
                let ot = self.target.norm();
                if ot > 0.5 - 1.0 / self.c_hi {
                    return bad(format!(
                        "piecewise family needs |ot| <= 1/2 - 1/c, got |ot| = {ot}"
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// The lower-bound prediction for target `t` at factor `c`:
/// `c·|pt|` on `B(t, 1/c)`, `1` on the rest of `B(o, 1/2)`, `2·|po|` outside.
/// Cases are tested in that order, closed balls.
pub fn piecewise_value(target: &Point, c: f64, p: &Point) -> Result<f64> {
    let pt = distance(p, target)?;
    if pt <= 1.0 / c {
        return Ok(c * pt);
    }
    Ok(piecewise_common_value(p))
}

/// Value of every member of the piecewise family outside its own target ball.
pub fn piecewise_common_value(p: &Point) -> f64 {
    let po = p.norm();
    if po <= 0.5 {
        1.0
    } else {
        2.0 * po
    }
}

fn noise_factor(seed: u64, p: &Point, c_lo: f64, c_hi: f64) -> f64 {
    // FNV-1a over the coordinate bit patterns, then a ChaCha stream
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for bits in p.bits_key() {
        for byte in bits.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h);
    let x: f64 = rng.random();
    (c_lo + (c_hi - c_lo) * x).clamp(c_lo, c_hi)
}

/// Stateful oracle: memoizes on exact coordinates and logs every query.
#[derive(Debug, Clone)]
pub struct PredictionOracle {
    spec: OracleSpec,
    log: Vec<(Point, f64)>,
    memo: HashMap<Vec<u64>, f64>,
}

impl PredictionOracle {
    pub fn new(spec: OracleSpec) -> Result<Self> {
        spec.validate()?;
        Ok(PredictionOracle {
            spec,
            log: Vec::new(),
            memo: HashMap::new(),
        })
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }

    pub fn target(&self) -> &Point {
        &self.spec.target
    }

    pub fn query_log(&self) -> &[(Point, f64)] {
        &self.log
    }

    fn evaluate(&self, p: &Point) -> Result<f64> {
        let s = &self.spec;
        let pt = distance(p, &s.target)?;
        Ok(match s.kind {
            OracleKind::Exact => pt,
            OracleKind::Affine => s.alpha.expect("validated") * pt,
            OracleKind::MidpointOpen => 0.5 * (1.0 + s.c_hi) * pt,
            OracleKind::SeededNoise => noise_factor(s.seed, p, s.c_lo, s.c_hi) * pt,
            OracleKind::PiecewiseLowerBound => piecewise_value(&s.target, s.c_hi, p)?,
        })
    }

    /// Checks this oracle against its own spec; see [`validate_oracle`].
    pub fn validate(&mut self, probes: usize, radius: f64, seed: u64) -> Result<bool> {
        let (t, lo, hi) = (self.spec.target.clone(), self.spec.c_lo, self.spec.c_hi);
        validate_oracle(self, &t, lo, hi, probes, radius, seed)
    }
}

impl Oracle for PredictionOracle {
    fn dim(&self) -> usize {
        self.spec.target.dim()
    }

    fn query(&mut self, p: &Point) -> Result<f64> {
        let key = p.bits_key();
        let value = match self.memo.get(&key) {
            // keys carry the dimension, so a hit is always well-formed
            Some(&v) => v,
            None => {
                let v = self.evaluate(p)?;
                self.memo.insert(key, v);
                v
            }
        };
        self.log.push((p.clone(), value));
        Ok(value)
    }
}

/// Probes `probes` uniform points of `B(t, radius)` plus `o` and `t`, and
/// checks `c_lo·|pt| <= λ(p) <= c_hi·|pt|` up to [`VALIDITY_SLACK`] relative.
pub fn validate_oracle<O: Oracle + ?Sized>(
    oracle: &mut O,
    target: &Point,
    c_lo: f64,
    c_hi: f64,
    probes: usize,
    radius: f64,
    seed: u64,
) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ball = Ball::new(target.clone(), radius)?;
    let fixed = [Point::origin(target.dim()), target.clone()];
    let random = (0..probes)
        .map(|_| ball.sample_uniform(&mut rng))
        .collect::<Vec<_>>();
    for p in fixed.iter().chain(&random) {
        let v = oracle.query(p)?;
        let pt = distance(p, target)?;
        let lo = c_lo * pt * (1.0 - VALIDITY_SLACK);
        let hi = c_hi * pt * (1.0 + VALIDITY_SLACK);
        if !(lo <= v && v <= hi) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The explored set `X` with its recorded predictions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QueryHistory {
    points: Vec<Point>,
    values: Vec<f64>,
}

impl QueryHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, p: Point, value: f64) -> Result<()> {
        if !(value >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "negative prediction {value}"
            )));
        }
        if let Some(first) = self.points.first() {
            if first.dim() != p.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: p.dim(),
                });
            }
        }
        self.points.push(p);
        self.values.push(value);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.points.iter().zip(self.values.iter().copied())
    }
}

/// `min over (p', λ(p')) in history of |pp'| + λ(p')`, a 1-Lipschitz upper
/// estimate of `|pt|`.
pub fn infer_lipschitz(history: &QueryHistory, p: &Point) -> Result<f64> {
    if history.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let mut best = f64::INFINITY;
    for (q, v) in history.iter() {
        best = best.min(distance(p, q)? + v);
    }
    Ok(best)
}

/// `min(λ(p), λ̃(p))`, still a valid prediction with the same factors.
pub fn refined_query<O: Oracle + ?Sized>(
    oracle: &mut O,
    history: &QueryHistory,
    p: &Point,
) -> Result<f64> {
    let direct = oracle.query(p)?;
    Ok(direct.min(infer_lipschitz(history, p)?))
}

/// An oracle answering with [`refined_query`] against a fixed history.
pub struct RefinedOracle<O> {
    inner: O,
    history: QueryHistory,
}

impl<O: Oracle> RefinedOracle<O> {
    pub fn new(inner: O, history: QueryHistory) -> Result<Self> {
        if history.is_empty() {
            return Err(Error::EmptyHistory);
        }
        Ok(RefinedOracle { inner, history })
    }

    pub fn history(&self) -> &QueryHistory {
        &self.history
    }
}

impl<O: Oracle> Oracle for RefinedOracle<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn query(&mut self, p: &Point) -> Result<f64> {
        refined_query(&mut self.inner, &self.history, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn oracle(spec: OracleSpec) -> PredictionOracle {
        PredictionOracle::new(spec).unwrap()
    }

    #[test]
    fn piecewise_cases() {
        let mut o = oracle(OracleSpec::new(
            OracleKind::PiecewiseLowerBound,
            Point::origin(2),
            4.0,
        ));
        // expected values by hand: 4·0.2, the plateau, 2·0.6
        assert!((o.query(&pt(&[0.2, 0.0])).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(o.query(&pt(&[0.0, 0.4])).unwrap(), 1.0);
        assert!((o.query(&pt(&[0.6, 0.0])).unwrap() - 1.2).abs() < 1e-15);
        // boundaries: first matching case wins
        assert_eq!(o.query(&pt(&[0.25, 0.0])).unwrap(), 1.0);
        assert_eq!(o.query(&pt(&[0.5, 0.0])).unwrap(), 1.0);
    }

    #[test]
    fn simple_kinds() {
        let t = pt(&[0.0, 0.0]);
        let mut exact = oracle(OracleSpec::new(OracleKind::Exact, t.clone(), 1.0));
        assert_eq!(exact.query(&t).unwrap(), 0.0);
        let mut aff = oracle(OracleSpec::new(OracleKind::Affine, t.clone(), 2.0).with_alpha(2.0));
        assert_eq!(aff.query(&pt(&[3.0, 4.0])).unwrap(), 10.0);
        let mut mid = oracle(OracleSpec::new(OracleKind::MidpointOpen, t, 3.0));
        assert_eq!(mid.query(&pt(&[3.0, 4.0])).unwrap(), 10.0);
        assert!(exact.query(&pt(&[1.0])).is_err());
        assert_eq!(exact.query_log().len(), 1);
    }

    #[test]
    fn spec_validation() {
        let t = Point::origin(2);
        assert!(
            PredictionOracle::new(OracleSpec::new(OracleKind::Affine, t.clone(), 2.0)).is_err()
        );
        assert!(PredictionOracle::new(
            OracleSpec::new(OracleKind::Affine, t.clone(), 2.0).with_alpha(3.0)
        )
        .is_err());
        assert!(PredictionOracle::new(OracleSpec::new(OracleKind::Exact, t.clone(), 0.5)).is_err());
        assert!(PredictionOracle::new(
            OracleSpec::new(OracleKind::Exact, t.clone(), 1.0).with_c_lo(0.0)
        )
        .is_err());
        assert!(PredictionOracle::new(OracleSpec::new(
            OracleKind::PiecewiseLowerBound,
            t.clone(),
            2.0
        ))
        .is_err());
        let far = pt(&[0.3, 0.0]);
        assert!(
            PredictionOracle::new(OracleSpec::new(OracleKind::PiecewiseLowerBound, far, 4.0))
                .is_err()
        );
        assert!(PredictionOracle::new(OracleSpec::new(
            OracleKind::PiecewiseLowerBound,
            pt(&[0.25, 0.0]),
            4.0
        ))
        .is_ok());
    }

    #[test]
    fn seeded_noise_is_memoized_and_seed_dependent() {
        let t = pt(&[1.0, -1.0]);
        let mut a = oracle(OracleSpec::new(OracleKind::SeededNoise, t.clone(), 8.0).with_seed(1));
        let mut b = oracle(OracleSpec::new(OracleKind::SeededNoise, t.clone(), 8.0).with_seed(2));
        let p = pt(&[0.3, 0.7]);
        let v1 = a.query(&p).unwrap();
        let v2 = a.query(&p).unwrap();
        assert_eq!(v1.to_bits(), v2.to_bits());
        // a fresh instance with the same seed agrees bit for bit
        let mut a2 = oracle(OracleSpec::new(OracleKind::SeededNoise, t, 8.0).with_seed(1));
        assert_eq!(a2.query(&p).unwrap().to_bits(), v1.to_bits());
        assert_ne!(b.query(&p).unwrap(), v1);
    }

    #[test]
    fn validation_catches_underestimates() {
        struct Halving(Point);
        impl Oracle for Halving {
            fn dim(&self) -> usize {
                self.0.dim()
            }
            fn query(&mut self, p: &Point) -> Result<f64> {
                Ok(0.5 * distance(p, &self.0)?)
            }
        }
        let t = pt(&[0.1, 0.2]);
        let mut bad = Halving(t.clone());
        assert!(!validate_oracle(&mut bad, &t, 1.0, 1.0, 100, 1.0, 0).unwrap());
        let mut exact = oracle(OracleSpec::new(OracleKind::Exact, t, 1.0));
        assert!(exact.validate(1000, 2.0, 4).unwrap());
    }

    #[test]
    fn piecewise_valid_for_c4() {
        let t = pt(&[0.15, -0.2]);
        let mut o = oracle(OracleSpec::new(OracleKind::PiecewiseLowerBound, t, 4.0));
        assert!(o.validate(10_000, 3.0, 17).unwrap());
    }

    #[test]
    fn lipschitz_inference() {
        let mut h = QueryHistory::new();
        assert_eq!(infer_lipschitz(&h, &pt(&[0.0])), Err(Error::EmptyHistory));
        h.push(pt(&[0.0]), 1.0).unwrap();
        assert_eq!(infer_lipschitz(&h, &pt(&[2.0])).unwrap(), 3.0);
        h.push(pt(&[5.0]), 0.25).unwrap();
        assert!(infer_lipschitz(&h, &pt(&[5.0])).unwrap() <= 0.25);
        assert!(h.push(pt(&[1.0, 1.0]), 1.0).is_err());
        assert!(h.push(pt(&[1.0]), -1.0).is_err());
    }

    #[test]
    fn refined_query_cases() {
        let t = pt(&[0.4, -0.3]);
        let spec = OracleSpec::new(OracleKind::SeededNoise, t.clone(), 8.0).with_seed(99);
        let mut o = oracle(spec.clone());
        let p = pt(&[2.0, 1.0]);

        let mut self_only = QueryHistory::new();
        let lp = o.query(&p).unwrap();
        self_only.push(p.clone(), lp).unwrap();
        assert_eq!(refined_query(&mut o, &self_only, &p).unwrap(), lp);

        // a reading taken right next to the target shortcuts a noisy reading
        let near = pt(&[0.4 + 1e-3, -0.3]);
        let mut h = QueryHistory::new();
        h.push(near.clone(), o.query(&near).unwrap()).unwrap();
        let inferred = infer_lipschitz(&h, &p).unwrap();
        let direct = o.query(&p).unwrap();
        assert!(inferred < direct, "inferred {inferred} direct {direct}");
        assert_eq!(refined_query(&mut o, &h, &p).unwrap(), inferred);

        assert_eq!(refined_query(&mut o, &h, &t).unwrap(), 0.0);
    }
}
