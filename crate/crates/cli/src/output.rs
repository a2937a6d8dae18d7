//! Deterministic text outputs: trace CSV and report JSON.

use std::fmt::Write as _;

use predsearch_core::{ExperimentReport, SearchTrace};
use serde::Serialize;

use crate::error::Result;

/// Twelve significant digits in scientific notation, locale independent.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

/// `step,j,i,x0..x{d-1},lambda,cum_length`, one row per trace vertex.
pub fn trace_csv(trace: &SearchTrace) -> String {
    let d = trace.dim();
    let mut out = String::from("step,j,i");
    for k in 0..d {
        let _ = write!(out, ",x{k}");
    }
    out.push_str(",lambda,cum_length\n");

    let mut cum = 0.0;
    let verts = trace.vertices.vertices();
    for (step, v) in verts.iter().enumerate() {
        if step > 0 {
            cum += predsearch_core::distance(&verts[step - 1], v).expect("same dimension");
        }
        let (j, i) = trace.phase_labels[step];
        let _ = write!(out, "{step},{j},{i}");
        for x in v.coords() {
            let _ = write!(out, ",{}", fmt_num(*x));
        }
        let _ = writeln!(
            out,
            ",{},{}",
            fmt_num(trace.lambda_values[step]),
            fmt_num(cum)
        );
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn report_json(report: &ExperimentReport) -> Result<String> {
    to_json(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(1.0), "1.00000000000e0");
        assert_eq!(fmt_num(-0.000123456789012345), "-1.23456789012e-4");
        assert_eq!(fmt_num(576.0), "5.76000000000e2");
    }
}
