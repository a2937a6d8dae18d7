//! Euclidean primitives in runtime dimension: points, closed balls,
//! spherical shells and polygonal paths.
//!
//! Membership tests use exact `<=`; every guarantee downstream is stated
//! with closed inequalities, so no epsilon is introduced here.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `R^d` with finite coordinates, `d >= 1`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("dimension must be at least 1".into()));
        }
        if let Some(bad) = coords.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate {bad}")));
        }
        Ok(Point(coords))
    }

    pub fn origin(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Point(vec![0.0; dim])
    }

    /// Unit vector along `axis`, scaled by `len`.
    pub fn axis(dim: usize, axis: usize, len: f64) -> Self {
        let mut p = Point::origin(dim);
        p.0[axis] = len;
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Point) -> Result<Point> {
        check_dims(self, other)?;
        Ok(Point(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        check_dims(self, other)?;
        Ok(Point(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|x| x * s).collect())
    }

    /// Coordinate-wise rounding to the nearest integer point.
    pub fn round(&self) -> Point {
        Point(self.0.iter().map(|x| x.round()).collect())
    }

    /// Lexicographic comparison of coordinates (total order on finite points).
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    /// Bit pattern of every coordinate; used as an exact identity key.
    pub fn bits_key(&self) -> Vec<u64> {
        self.0.iter().map(|x| x.to_bits()).collect()
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.0)
    }
}

fn check_dims(p: &Point, q: &Point) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(())
}

/// Squared Euclidean distance, no dimension check.
#[inline]
pub(crate) fn dist2_unchecked(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Euclidean distance `|pq|`.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    check_dims(p, q)?;
    Ok(dist2_unchecked(&p.0, &q.0).sqrt())
}

/// Closed ball `B(center, radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    center: Point,
    radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be finite and nonnegative, got {radius}"
            )));
        }
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        Ok(distance(&self.center, p)? <= self.radius)
    }

    /// Whether the closed segment `[a, b]` meets the closed ball.
    pub fn meets_segment(&self, a: &Point, b: &Point) -> Result<bool> {
        check_dims(a, b)?;
        check_dims(a, &self.center)?;
        let ab: Vec<f64> = b.0.iter().zip(&a.0).map(|(x, y)| x - y).collect();
        let ac: Vec<f64> = self.center.0.iter().zip(&a.0).map(|(x, y)| x - y).collect();
        let len2: f64 = ab.iter().map(|x| x * x).sum();
        let t = if len2 > 0.0 {
            (ab.iter().zip(&ac).map(|(x, y)| x * y).sum::<f64>() / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let closest: Vec<f64> = a.0.iter().zip(&ab).map(|(x, v)| x + t * v).collect();
        Ok(dist2_unchecked(&closest, &self.center.0).sqrt() <= self.radius)
    }

    /// Uniform sample by rejection from the bounding cube.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let d = self.dim();
        if self.radius == 0.0 {
            return self.center.clone();
        }
        loop {
            let offset: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
            if offset.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                let coords = self
                    .center
                    .0
                    .iter()
                    .zip(&offset)
                    .map(|(c, o)| c + self.radius * o)
                    .collect();
                return Point(coords);
            }
        }
    }
}

/// Closed shell `S(center, r_inner, r_outer) = { p : r_inner <= |p center| <= r_outer }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalShell {
    center: Point,
    r_inner: f64,
    r_outer: f64,
}

impl SphericalShell {
    pub fn new(center: Point, r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(0.0 <= r_inner && r_inner <= r_outer) || !r_outer.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "shell radii must satisfy 0 <= {r_inner} <= {r_outer} < inf"
            )));
        }
        Ok(SphericalShell {
            center,
            r_inner,
            r_outer,
        })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.r_inner, self.r_outer)
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        let r = distance(&self.center, p)?;
        Ok(self.r_inner <= r && r <= self.r_outer)
    }
}

/// Polygonal path through at least one vertex, all of equal dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyPath {
    vertices: Vec<Point>,
}

impl PolyPath {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidParameter("path needs at least one vertex".into()))?;
        for v in &vertices[1..] {
            check_dims(first, v)?;
        }
        Ok(PolyPath { vertices })
    }

    pub fn start(start: Point) -> Self {
        PolyPath {
            vertices: vec![start],
        }
    }

    pub fn push(&mut self, p: Point) -> Result<()> {
        check_dims(&self.vertices[0], &p)?;
        self.vertices.push(p);
        Ok(())
    }

    /// Appends `other`, skipping its first vertex when it repeats our last one.
    pub fn extend_from(&mut self, other: &PolyPath) -> Result<()> {
        let skip = usize::from(other.vertices[0] == *self.last());
        for v in &other.vertices[skip..] {
            self.push(v.clone())?;
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn last(&self) -> &Point {
        self.vertices.last().expect("path is never empty")
    }

    pub fn len_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn length(&self) -> f64 {
        path_length(self)
    }
}

/// Sum of consecutive vertex distances; a single vertex has length zero.
pub fn path_length(path: &PolyPath) -> f64 {
    path.vertices
        .windows(2)
        .map(|w| dist2_unchecked(&w[0].0, &w[1].0).sqrt())
        .sum()
}
