//! Constructive ε-nets for closed balls.
//!
//! A net is built in two passes. First, a cubic lattice of spacing
//! `(ε/3)/√d` aligned with the ball center is clipped to the ball; every
//! point of the ball lies within `ε/3` of some lattice candidate. Second,
//! candidates are scanned in lexicographic order and kept when they are at
//! least `2ε/3` away from everything kept so far. The kept set is
//! `2ε/3`-separated and, by maximality over the candidates, covers the ball
//! within `ε/3 + 2ε/3 = ε`.
//!
//! Packing balls of radius `ε/3` inside `B(center, r + ε/3)` gives
//! `|N| <= (3r/ε + 1)^d <= (4.5 r/ε)^d` for `ε <= r`; the covering gives
//! `|N| >= (r/ε)^d`.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist2_unchecked, distance, Ball, Point};

pub const DEFAULT_CANDIDATE_CAP: usize = 5_000_000;

/// Upper cardinality constant of the lattice-greedy construction.
pub const NET_SIZE_CONSTANT: f64 = 4.5;
/// Upper cardinality constant for an exact maximal separated set.
pub const IDEAL_NET_SIZE_CONSTANT: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Net {
    points: Vec<Point>,
    ball: Ball,
    cover_radius: f64,
    separation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub max_gap: f64,
    pub ok: bool,
}

impl Net {
    /// Wraps an arbitrary point set. The certificates are checked by
    /// [`check_covering`] / [`check_separation`], not here; only ball
    /// membership is enforced.
    pub fn from_points(
        points: Vec<Point>,
        ball: Ball,
        cover_radius: f64,
        separation: f64,
    ) -> Result<Self> {
        if !(cover_radius > 0.0) || !(separation > 0.0) {
            return Err(Error::InvalidParameter(
                "cover radius and separation must be positive".into(),
            ));
        }
        for p in &points {
            if !ball.contains(p)? {
                return Err(Error::InvalidParameter(format!(
                    "{p:?} lies outside {ball:?}"
                )));
            }
        }
        Ok(Net {
            points,
            ball,
            cover_radius,
            separation,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn cover_radius(&self) -> f64 {
        self.cover_radius
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }
}

/// `(r/ε)^d`: every ε-cover of a radius-`r` ball has at least this many points.
pub fn min_cover_size(r: f64, eps: f64, d: usize) -> f64 {
    (r / eps).powi(d as i32)
}

/// `(4.5 r/ε)^d`, the cardinality ceiling of [`build_net`].
pub fn max_net_size(r: f64, eps: f64, d: usize) -> f64 {
    (NET_SIZE_CONSTANT * r / eps).powi(d as i32)
}

/// `(3r/ε)^d`, the ceiling for an exact maximal ε-separated set.
pub fn ideal_net_size(r: f64, eps: f64, d: usize) -> f64 {
    (IDEAL_NET_SIZE_CONSTANT * r / eps).powi(d as i32)
}

pub fn build_net(ball: &Ball, eps: f64) -> Result<Net> {
    build_net_with_cap(ball, eps, DEFAULT_CANDIDATE_CAP)
}

/// ε-net of `ball` with covering radius `eps` and separation `2·eps/3`.
pub fn build_net_with_cap(ball: &Ball, eps: f64, cap: usize) -> Result<Net> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if eps > ball.radius() {
        return Err(Error::InvalidParameter(format!(
            "eps {eps} exceeds ball radius {}",
            ball.radius()
        )));
    }
    let d = ball.dim() as f64;
    let spacing = (eps / 3.0) / d.sqrt();
    let separation = 2.0 * eps / 3.0;
    let points = lattice_greedy(ball, spacing, separation, cap)?;
    Ok(Net {
        points,
        ball: ball.clone(),
        cover_radius: eps,
        separation,
    })
}

/// A `separation`-separated subset of `ball` from the same lattice-greedy
/// routine. Candidates are spaced `(s/2)/√d`, so the result also covers the
/// ball within `1.5·s`, which is recorded as its cover radius.
pub fn separated_set(ball: &Ball, separation: f64, cap: usize) -> Result<Net> {
    if !(separation > 0.0) || !separation.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "separation must be positive, got {separation}"
        )));
    }
    let d = ball.dim() as f64;
    let spacing = (separation / 2.0) / d.sqrt();
    let points = lattice_greedy(ball, spacing, separation, cap)?;
    Ok(Net {
        points,
        ball: ball.clone(),
        cover_radius: 1.5 * separation,
        separation,
    })
}

/// Lattice points `center + k·spacing` inside the ball, in lexicographic order.
fn lattice_candidates(ball: &Ball, spacing: f64, cap: usize) -> Result<Vec<Point>> {
    let d = ball.dim();
    let r = ball.radius();
    let center = ball.center().coords();
    let kmax = (r / spacing).floor() as i64;
    // loose pruning; the exact closed test is done on the final coordinates
    let prune = r * r * (1.0 + 1e-9);

    let mut out = Vec::new();
    let mut idx = vec![-kmax; d];
    let mut partial = vec![0.0f64; d + 1];
    let mut axis = 0usize;
    loop {
        if axis == d {
            let coords: Vec<f64> = center
                .iter()
                .zip(&idx)
                .map(|(c, &k)| c + k as f64 * spacing)
                .collect();
            if dist2_unchecked(&coords, center).sqrt() <= r {
                if out.len() == cap {
                    return Err(Error::CandidateCapExceeded {
                        count: cap + 1,
                        cap,
                    });
                }
                out.push(Point::new(coords)?);
            }
            axis -= 1;
            idx[axis] += 1;
            continue;
        }
        if idx[axis] > kmax {
            if axis == 0 {
                break;
            }
            idx[axis] = -kmax;
            axis -= 1;
            idx[axis] += 1;
            continue;
        }
        let off = idx[axis] as f64 * spacing;
        let s = partial[axis] + off * off;
        if s > prune {
            // offsets are symmetric: past the positive edge nothing remains
            if idx[axis] > 0 {
                idx[axis] = kmax + 1;
            } else {
                idx[axis] += 1;
            }
            continue;
        }
        partial[axis + 1] = s;
        axis += 1;
    }
    Ok(out)
}

type CellKey = Vec<i64>;

fn cell_of(coords: &[f64], origin: &[f64], size: f64) -> CellKey {
    coords
        .iter()
        .zip(origin)
        .map(|(x, o)| ((x - o) / size).floor() as i64)
        .collect()
}

/// All integer offsets in `[-k, k]^d` (Chebyshev ball of radius k).
fn cube_offsets(d: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(d)];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-k..=k).map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    out
}

fn lattice_greedy(ball: &Ball, spacing: f64, separation: f64, cap: usize) -> Result<Vec<Point>> {
    let candidates = lattice_candidates(ball, spacing, cap)?;
    let origin = ball.center().coords().to_vec();
    let neighbours = cube_offsets(ball.dim(), 1);
    let mut grid: HashMap<CellKey, Vec<usize>> = HashMap::new();
    let mut kept: Vec<Point> = Vec::new();

    'cand: for q in candidates {
        let cell = cell_of(q.coords(), &origin, separation);
        for off in &neighbours {
            let key: CellKey = cell.iter().zip(off).map(|(a, b)| a + b).collect();
            if let Some(members) = grid.get(&key) {
                for &m in members {
                    if dist2_unchecked(kept[m].coords(), q.coords()).sqrt() < separation {
                        continue 'cand;
                    }
                }
            }
        }
        grid.entry(cell).or_default().push(kept.len());
        kept.push(q);
    }
    Ok(kept)
}

/// Greedy nearest-neighbour tour over the net: begins at the net point
/// nearest `start`, then repeatedly moves to the nearest unvisited point.
/// Distance ties go to the lexicographically smaller point.
pub fn visit_order(net: &Net, start: &Point) -> Result<Vec<Point>> {
    if net.is_empty() {
        return Err(Error::EmptyNet);
    }
    if start.dim() != net.ball().dim() {
        return Err(Error::DimensionMismatch {
            expected: net.ball().dim(),
            found: start.dim(),
        });
    }
    let pts = net.points();
    let mut index = NearestIndex::new(pts, net.separation());
    let mut order = Vec::with_capacity(pts.len());
    let mut cursor = start.clone();
    while let Some(next) = index.pop_nearest(&cursor) {
        cursor = pts[next].clone();
        order.push(cursor.clone());
    }
    Ok(order)
}

/// Grid bucket index supporting nearest-remaining queries with removal.
struct NearestIndex<'a> {
    points: &'a [Point],
    origin: Vec<f64>,
    cell: f64,
    cells: HashMap<CellKey, Vec<usize>>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    remaining: usize,
}

const BRUTE_FORCE_BELOW: usize = 128;

impl<'a> NearestIndex<'a> {
    fn new(points: &'a [Point], cell: f64) -> Self {
        let d = points[0].dim();
        let origin = points[0].coords().to_vec();
        let mut cells: HashMap<CellKey, Vec<usize>> = HashMap::new();
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for (i, p) in points.iter().enumerate() {
            let key = cell_of(p.coords(), &origin, cell);
            for a in 0..d {
                lo[a] = lo[a].min(key[a]);
                hi[a] = hi[a].max(key[a]);
            }
            cells.entry(key).or_default().push(i);
        }
        NearestIndex {
            points,
            origin,
            cell,
            cells,
            lo,
            hi,
            remaining: points.len(),
        }
    }

    fn better(&self, cand: usize, d2: f64, best: Option<(usize, f64)>) -> bool {
        match best {
            None => true,
            Some((b, bd2)) => {
                d2 < bd2 || (d2 == bd2 && self.points[cand].lex_cmp(&self.points[b]).is_lt())
            }
        }
    }

    fn pop_nearest(&mut self, from: &Point) -> Option<usize> {
        if self.remaining == 0 {
            return None;
        }
        let best = if self.remaining <= BRUTE_FORCE_BELOW {
            self.scan_all(from)
        } else {
            self.scan_rings(from)
        }?;
        let key = cell_of(self.points[best].coords(), &self.origin, self.cell);
        let bucket = self.cells.get_mut(&key).expect("indexed point");
        bucket.retain(|&i| i != best);
        if bucket.is_empty() {
            self.cells.remove(&key);
        }
        self.remaining -= 1;
        Some(best)
    }

    fn scan_all(&self, from: &Point) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for &i in self.cells.values().flatten() {
            let d2 = dist2_unchecked(self.points[i].coords(), from.coords());
            if self.better(i, d2, best) {
                best = Some((i, d2));
            }
        }
        best.map(|(i, _)| i)
    }

    fn scan_rings(&self, from: &Point) -> Option<usize> {
        let d = from.dim();
        let home = cell_of(from.coords(), &self.origin, self.cell);
        // ring radius beyond which no occupied cell can exist
        let kmax = (0..d)
            .map(|a| {
                (home[a] - self.lo[a])
                    .abs()
                    .max((self.hi[a] - home[a]).abs())
            })
            .max()
            .unwrap_or(0);
        let mut best: Option<(usize, f64)> = None;
        for k in 0..=kmax {
            if let Some((_, bd2)) = best {
                // any cell on ring k is at least (k-1) cells away
                let reach = (k - 1) as f64 * self.cell;
                if reach > 0.0 && reach * reach > bd2 {
                    break;
                }
            }
            for off in ring_offsets(d, k) {
                let key: CellKey = home.iter().zip(&off).map(|(a, b)| a + b).collect();
                if let Some(bucket) = self.cells.get(&key) {
                    for &i in bucket {
                        let d2 = dist2_unchecked(self.points[i].coords(), from.coords());
                        if self.better(i, d2, best) {
                            best = Some((i, d2));
                        }
                    }
                }
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Integer offsets with Chebyshev norm exactly `k`.
fn ring_offsets(d: usize, k: i64) -> impl Iterator<Item = Vec<i64>> {
    cube_offsets(d, k)
        .into_iter()
        .filter(move |o| o.iter().any(|x| x.abs() == k))
}

/// Monte-Carlo covering check: `samples` uniform points of the net's ball,
/// each measured against its nearest net point by brute force.
pub fn check_covering(net: &Net, samples: usize, seed: u64) -> CoverReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_gap = 0.0f64;
    for _ in 0..samples.max(1) {
        let x = net.ball().sample_uniform(&mut rng);
        let gap = net
            .points()
            .iter()
            .map(|p| dist2_unchecked(p.coords(), x.coords()))
            .fold(f64::INFINITY, f64::min)
            .sqrt();
        max_gap = max_gap.max(gap);
    }
    CoverReport {
        max_gap,
        ok: max_gap <= net.cover_radius(),
    }
}

/// Exact all-pairs separation check.
pub fn check_separation(net: &Net) -> bool {
    let pts = net.points();
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            match distance(p, q) {
                Ok(dist) if dist >= net.separation() => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn unit_ball(d: usize) -> Ball {
        Ball::new(Point::origin(d), 1.0).unwrap()
    }

    #[test]
    fn one_dimensional_unit_net() {
        let net = build_net(&unit_ball(1), 1.0).unwrap();
        assert!((1..=4).contains(&net.len()), "|N| = {}", net.len());
        assert!(check_separation(&net));
        assert!(check_covering(&net, 1000, 3).ok);
    }

    #[test]
    fn planar_half_net_meets_volume_floor() {
        let net = build_net(&unit_ball(2), 0.5).unwrap();
        assert!(net.len() >= 4);
        assert!(net.len() as f64 <= max_net_size(1.0, 0.5, 2));
    }

    #[test]
    fn planar_quarter_net_covers() {
        let net = build_net(&unit_ball(2), 0.25).unwrap();
        let rep = check_covering(&net, 10_000, 11);
        assert!(rep.ok, "max gap {}", rep.max_gap);
        assert!(check_separation(&net));
    }

    #[test]
    fn off_center_ball_stays_inside() {
        let ball = Ball::new(pt(&[3.25, -1.5]), 0.7).unwrap();
        let net = build_net(&ball, 0.2).unwrap();
        for p in net.points() {
            assert!(ball.contains(p).unwrap());
        }
        assert!(check_covering(&net, 5_000, 5).ok);
    }

    #[test]
    fn bad_parameters() {
        let b = unit_ball(2);
        assert!(build_net(&b, 0.0).is_err());
        assert!(build_net(&b, -1.0).is_err());
        assert!(build_net(&b, 1.5).is_err());
        assert!(matches!(
            build_net_with_cap(&b, 0.1, 100),
            Err(Error::CandidateCapExceeded { cap: 100, .. })
        ));
    }

    #[test]
    fn deterministic_construction() {
        let b = Ball::new(pt(&[0.1, 0.2, -0.3]), 1.0).unwrap();
        let a = build_net(&b, 0.3).unwrap();
        let c = build_net(&b, 0.3).unwrap();
        let bits = |n: &Net| n.points().iter().map(Point::bits_key).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&c));
    }

    #[test]
    fn cardinality_window() {
        for d in 1..=3 {
            for eps in [0.1, 0.25, 0.5, 1.0] {
                if d == 3 && eps < 0.25 {
                    continue; // exercised in the acceptance suite
                }
                let n = build_net(&unit_ball(d), eps).unwrap().len() as f64;
                assert!(min_cover_size(1.0, eps, d) <= n, "d={d} eps={eps} n={n}");
                assert!(n <= max_net_size(1.0, eps, d), "d={d} eps={eps} n={n}");
            }
        }
    }

    #[test]
    fn visit_order_examples() {
        let ball = Ball::new(pt(&[0.0]), 5.0).unwrap();
        let net =
            Net::from_points(vec![pt(&[3.0]), pt(&[0.0]), pt(&[1.0])], ball, 1.0, 0.5).unwrap();
        assert_eq!(
            visit_order(&net, &pt(&[0.1])).unwrap(),
            vec![pt(&[0.0]), pt(&[1.0]), pt(&[3.0])]
        );

        let single = Net::from_points(
            vec![pt(&[0.5])],
            Ball::new(pt(&[0.0]), 1.0).unwrap(),
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(
            visit_order(&single, &pt(&[-1.0])).unwrap(),
            vec![pt(&[0.5])]
        );

        let empty =
            Net::from_points(vec![], Ball::new(pt(&[0.0]), 1.0).unwrap(), 1.0, 1.0).unwrap();
        assert_eq!(visit_order(&empty, &pt(&[0.0])), Err(Error::EmptyNet));
    }

    #[test]
    fn visit_order_planar_matches_greedy_brute_force() {
        let pts = vec![pt(&[0.0, 0.0]), pt(&[0.0, 2.0]), pt(&[5.0, 0.0])];
        let net = Net::from_points(
            pts.clone(),
            Ball::new(pt(&[0.0, 0.0]), 6.0).unwrap(),
            1.0,
            1.0,
        )
        .unwrap();
        let order = visit_order(&net, &pt(&[0.0, 0.0])).unwrap();
        assert_eq!(order, pts);

        // enumerate all 6 orders starting anywhere; greedy must pick, at each
        // position, the closest remaining point
        let mut perms = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        perms.push([a, b, c]);
                    }
                }
            }
        }
        let start = pt(&[0.0, 0.0]);
        let greedy_ok = |perm: &[usize; 3]| {
            let mut cur = start.clone();
            let mut left: Vec<usize> = vec![0, 1, 2];
            for &k in perm {
                let dk = distance(&cur, &pts[k]).unwrap();
                if left.iter().any(|&o| distance(&cur, &pts[o]).unwrap() < dk) {
                    return false;
                }
                left.retain(|&o| o != k);
                cur = pts[k].clone();
            }
            true
        };
        let greedy: Vec<_> = perms.iter().filter(|p| greedy_ok(p)).collect();
        assert_eq!(greedy, vec![&[0, 1, 2]]);
    }

    #[test]
    fn visit_order_is_permutation_on_large_net() {
        let net = build_net(&unit_ball(2), 0.05).unwrap();
        assert!(net.len() > BRUTE_FORCE_BELOW);
        let order = visit_order(&net, &pt(&[0.3, -0.2])).unwrap();
        let mut a: Vec<_> = order.iter().map(Point::bits_key).collect();
        let mut b: Vec<_> = net.points().iter().map(Point::bits_key).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_nearest_agrees_with_brute_force() {
        let net = build_net(&unit_ball(2), 0.1).unwrap();
        let pts = net.points();
        let mut brute = Vec::new();
        let mut left: Vec<usize> = (0..pts.len()).collect();
        let mut cur = pt(&[0.9, 0.1]);
        while !left.is_empty() {
            let (pos, _) = left
                .iter()
                .enumerate()
                .min_by(|(_, &a), (_, &b)| {
                    let da = dist2_unchecked(pts[a].coords(), cur.coords());
                    let db = dist2_unchecked(pts[b].coords(), cur.coords());
                    da.total_cmp(&db).then(pts[a].lex_cmp(&pts[b]))
                })
                .unwrap();
            let k = left.remove(pos);
            cur = pts[k].clone();
            brute.push(cur.clone());
        }
        assert_eq!(visit_order(&net, &pt(&[0.9, 0.1])).unwrap(), brute);
    }

    #[test]
    fn covering_and_separation_negative_cases() {
        let lonely = Net::from_points(vec![Point::origin(2)], unit_ball(2), 0.1, 1.0).unwrap();
        assert!(!check_covering(&lonely, 1000, 1).ok);
        assert!(check_separation(&lonely));

        let close = Net::from_points(vec![pt(&[0.0]), pt(&[0.1])], unit_ball(1), 1.0, 0.5).unwrap();
        assert!(!check_separation(&close));

        let tiny = Net::from_points(
            vec![Point::origin(2)],
            Ball::new(Point::origin(2), 0.0).unwrap(),
            1.0,
            1.0,
        )
        .unwrap();
        let rep = check_covering(&tiny, 1, 0);
        assert_eq!(rep.max_gap, 0.0);
    }

    #[test]
    fn separated_set_certificates() {
        let ball = Ball::new(Point::origin(2), 0.25).unwrap();
        let set = separated_set(&ball, 2.0 / 16.0, DEFAULT_CANDIDATE_CAP).unwrap();
        assert!(set.len() >= 4);
        assert!(check_separation(&set));
        assert!(check_covering(&set, 2000, 9).ok);
    }
}
