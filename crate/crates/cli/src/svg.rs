//! SVG 1.1 rendering of planar search traces.

use std::fmt::Write as _;

use predsearch_core::{Ball, Point, SearchTrace};

use crate::error::{HarnessError, Result};

pub const CANVAS: f64 = 1000.0;
const MARGIN: f64 = 0.05;

/// Extra geometry drawn under the path.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub target: Option<Point>,
    pub balls: Vec<Ball>,
}

struct Viewport {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Viewport {
    fn fit(xs: &[(f64, f64)]) -> Self {
        let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in xs {
            lo_x = lo_x.min(x);
            lo_y = lo_y.min(y);
            hi_x = hi_x.max(x);
            hi_y = hi_y.max(y);
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
        let pad = span * MARGIN;
        let side = span + 2.0 * pad;
        // center the shorter axis
        let cx = 0.5 * (lo_x + hi_x);
        let cy = 0.5 * (lo_y + hi_y);
        Viewport {
            min_x: cx - 0.5 * side,
            max_y: cy + 0.5 * side,
            scale: CANVAS / side,
        }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let c = p.coords();
        (
            (c[0] - self.min_x) * self.scale,
            (self.max_y - c[1]) * self.scale,
        )
    }
}

fn xy(p: &Point) -> (f64, f64) {
    (p.coords()[0], p.coords()[1])
}

pub fn render_svg(trace: &SearchTrace, scene: &Scene) -> Result<String> {
    if trace.dim() != 2 {
        return Err(HarnessError::Config(format!(
            "SVG rendering needs d = 2, trace has d = {}",
            trace.dim()
        )));
    }
    let verts = trace.vertices.vertices();
    let mut extent: Vec<(f64, f64)> = verts.iter().map(xy).collect();
    if let Some(t) = &scene.target {
        extent.push(xy(t));
    }
    for b in &scene.balls {
        let (x, y) = xy(b.center());
        let r = b.radius();
        extent.push((x - r, y - r));
        extent.push((x + r, y + r));
    }
    let vp = Viewport::fit(&extent);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
    );
    let _ = writeln!(
        s,
        "<rect width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"white\"/>"
    );
    if !scene.balls.is_empty() {
        s.push_str("<g id=\"balls\" fill=\"#fdd\" stroke=\"#c33\" stroke-width=\"0.5\">\n");
        for b in &scene.balls {
            let (x, y) = vp.map(b.center());
            let _ = writeln!(
                s,
                "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{:.3}\"/>",
                b.radius() * vp.scale
            );
        }
        s.push_str("</g>\n");
    }
    let pts: Vec<String> = verts
        .iter()
        .map(|v| {
            let (x, y) = vp.map(v);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        s,
        "<polyline id=\"path\" points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.75\"/>",
        pts.join(" ")
    );
    let (sx, sy) = vp.map(&verts[0]);
    let _ = writeln!(
        s,
        "<circle id=\"start\" cx=\"{sx:.3}\" cy=\"{sy:.3}\" r=\"5\" fill=\"#2ca02c\"/>"
    );
    if let Some(t) = &scene.target {
        let (tx, ty) = vp.map(t);
        let _ = writeln!(
            s,
            "<circle id=\"target\" cx=\"{tx:.3}\" cy=\"{ty:.3}\" r=\"5\" fill=\"#d62728\"/>"
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Number of vertices in the rendered path polyline.
pub fn polyline_vertex_count(svg: &str) -> Option<usize> {
    let start =
        svg.find("<polyline id=\"path\" points=\"")? + "<polyline id=\"path\" points=\"".len();
    let end = start + svg[start..].find('"')?;
    Some(svg[start..end].split_whitespace().count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use predsearch_core::{search_exact, OracleKind, OracleSpec, PredictionOracle, StrategyConfig};

    fn exact_trace(t: &[f64]) -> SearchTrace {
        let spec = OracleSpec::new(OracleKind::Exact, Point::new(t.to_vec()).unwrap(), 1.0);
        let mut o = PredictionOracle::new(spec).unwrap();
        search_exact(&mut o, &StrategyConfig::exact(0.1)).unwrap()
    }

    #[test]
    fn single_vertex_trace() {
        let tr = exact_trace(&[0.0, 0.0]);
        let svg = render_svg(&tr, &Scene::default()).unwrap();
        assert_eq!(polyline_vertex_count(&svg), Some(1));
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn vertex_count_and_determinism() {
        let tr = exact_trace(&[3.0, -1.0]);
        let scene = Scene {
            target: Some(Point::new(vec![3.0, -1.0]).unwrap()),
            balls: vec![Ball::new(Point::new(vec![1.0, 1.0]).unwrap(), 0.5).unwrap()],
        };
        let a = render_svg(&tr, &scene).unwrap();
        assert_eq!(polyline_vertex_count(&a), Some(tr.vertices.len_vertices()));
        assert_eq!(a, render_svg(&tr, &scene).unwrap());
    }

    #[test]
    fn rejects_other_dimensions() {
        assert!(render_svg(&exact_trace(&[1.0]), &Scene::default()).is_err());
    }
}
