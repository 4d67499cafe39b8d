//! Planar convex polygon kernel.
//!
//! Polygons are stored counterclockwise with strictly convex turns and cached
//! outward unit edge normals. Edge `i` runs from vertex `i` to vertex `i + 1`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative sine threshold below which a vertex is treated as collinear.
const COLLINEAR_EPS: f64 = 1e-14;
/// Normals closer than this (radians) are merged before intersecting.
const PARALLEL_EPS: f64 = 1e-10;
/// Relative area below which an offset is reported as empty.
const DEGENERATE_AREA: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        Point::new(r * theta.cos(), r * theta.sin())
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn unit(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// The closed half-plane `{x : x·n <= c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub n: Point,
    pub c: f64,
}

impl HalfPlane {
    /// Normalizes `n` to unit length, rescaling `c` accordingly.
    pub fn new(n: Point, c: f64) -> Self {
        let len = n.norm();
        HalfPlane { n: n * (1.0 / len), c: c / len }
    }

    fn excess(&self, p: Point) -> f64 {
        p.dot(self.n) - self.c
    }
}

fn line_intersection(a: &HalfPlane, b: &HalfPlane) -> Point {
    let det = a.n.cross(b.n);
    Point::new(
        (a.c * b.n.y - b.c * a.n.y) / det,
        (a.n.x * b.c - b.n.x * a.c) / det,
    )
}

/// Counterclockwise strictly convex polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    normals: Vec<Point>,
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        s += v[i].cross(v[(i + 1) % n]);
    }
    0.5 * s
}

impl ConvexPolygon {
    /// Validates a vertex chain. Clockwise input is reversed; collinear or
    /// reflex vertices are rejected.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateInput(format!(
                "{} vertices, need at least 3",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput(format!("vertex {i} is not finite")));
        }
        let a = signed_area(&vertices);
        if !(a.abs() > 0.0) {
            return Err(Error::DegenerateInput("zero area".into()));
        }
        if a < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let p = vertices[(i + n - 1) % n];
            let q = vertices[i];
            let r = vertices[(i + 1) % n];
            if (q - p).cross(r - q) <= 0.0 {
                return Err(Error::DegenerateInput(format!(
                    "vertex {i} is not a strict left turn"
                )));
            }
        }
        Ok(Self::from_ccw(vertices))
    }

    fn from_ccw(vertices: Vec<Point>) -> Self {
        let n = vertices.len();
        let normals = (0..n)
            .map(|i| {
                let e = vertices[(i + 1) % n] - vertices[i];
                Point::new(e.y, -e.x).unit()
            })
            .collect();
        ConvexPolygon { vertices, normals }
    }

    /// Builds a polygon from a counterclockwise boundary walk that may contain
    /// repeated or (nearly) collinear points, dropping them first.
    pub fn from_boundary(points: Vec<Point>) -> Result<Self> {
        let cleaned = clean_chain(points);
        Self::new(cleaned)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Outward unit normal of each edge.
    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edge(&self, i: usize) -> Point {
        self.vertex(i + 1) - self.vertex(i)
    }

    /// Supporting half-planes, one per edge.
    pub fn halfplanes(&self) -> Vec<HalfPlane> {
        self.normals
            .iter()
            .zip(&self.vertices)
            .map(|(&n, &v)| HalfPlane { n, c: v.dot(n) })
            .collect()
    }

    /// Homothety about the origin; `s` must be positive.
    pub fn scale(&self, s: f64) -> Self {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| p * s).collect(),
            normals: self.normals.clone(),
        }
    }

    pub fn translate(&self, v: Point) -> Self {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| p + v).collect(),
            normals: self.normals.clone(),
        }
    }

    /// Rotates the vertex list so that it starts at `i`.
    pub fn rotated_start(&self, i: usize) -> Self {
        let mut v = self.vertices.clone();
        let k = i % v.len();
        v.rotate_left(k);
        Self::from_ccw(v)
    }

    /// True when `p` lies in the polygon up to an outward tolerance `tol`.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.halfplanes().iter().all(|h| h.excess(p) <= tol)
    }

    /// Polygon JSON: `{"vertices": [[x, y], ...]}`.
    pub fn to_json(&self) -> String {
        let doc = PolygonDoc {
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
        };
        serde_json::to_string(&doc).expect("finite coordinates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolygonDoc = serde_json::from_str(text)?;
        Self::new(doc.vertices.into_iter().map(|[x, y]| Point::new(x, y)).collect())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonDoc {
    vertices: Vec<[f64; 2]>,
}

fn clean_chain(points: Vec<Point>) -> Vec<Point> {
    let scale = points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
        .max(f64::MIN_POSITIVE);
    let mut v: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if v.last().is_none_or(|q: &Point| q.dist(p) > 1e-14 * scale) {
            v.push(p);
        }
    }
    while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= 1e-14 * scale {
        v.pop();
    }
    // drop collinear or reflex vertices until stable
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let keep: Vec<bool> = (0..n)
            .map(|i| {
                let a = v[(i + n - 1) % n];
                let b = v[i];
                let c = v[(i + 1) % n];
                let e1 = b - a;
                let e2 = c - b;
                e1.cross(e2) > COLLINEAR_EPS * e1.norm() * e2.norm()
            })
            .collect();
        if keep.iter().all(|&k| k) {
            return v;
        }
        // never drop two neighbours in one sweep; it can skip a genuine corner
        let mut out = Vec::with_capacity(n);
        let mut dropped_prev = false;
        for i in 0..n {
            if !keep[i] && !dropped_prev && !(i == n - 1 && !keep[0]) {
                dropped_prev = true;
            } else {
                out.push(v[i]);
                dropped_prev = false;
            }
        }
        v = out;
    }
}

/// Andrew's monotone chain. Points on hull edges are dropped.
pub fn convex_hull(points: &[Point]) -> Result<ConvexPolygon> {
    let mut pts: Vec<Point> = points.to_vec();
    if pts.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput("non-finite point".into()));
    }
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateInput("fewer than 3 distinct points".into()));
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - b) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::DegenerateInput("all points collinear".into()));
    }
    ConvexPolygon::from_boundary(hull)
        .map_err(|_| Error::DegenerateInput("all points collinear".into()))
}

/// Support function `max over vertices of v·dir`.
pub fn support(poly: &ConvexPolygon, dir: Point) -> f64 {
    poly.vertices
        .iter()
        .map(|v| v.dot(dir))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn normalize_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a < 0.0 {
        a += 2.0 * PI;
    }
    a
}

/// Intersection of half-planes. `Ok(None)` means the interior is empty.
pub fn halfplane_intersection(planes: &[HalfPlane]) -> Result<Option<ConvexPolygon>> {
    if planes.is_empty() {
        return Err(Error::Unbounded);
    }
    let mut hs: Vec<(f64, HalfPlane)> = planes
        .iter()
        .map(|h| (normalize_angle(h.n.angle()), *h))
        .collect();
    hs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.c.total_cmp(&b.1.c)));
    let mut merged: Vec<(f64, HalfPlane)> = Vec::with_capacity(hs.len());
    for (a, h) in hs {
        match merged.last() {
            Some(&(b, _)) if a - b < PARALLEL_EPS => {}
            _ => merged.push((a, h)),
        }
    }
    if merged.len() > 1 {
        let first = merged[0].0;
        let last = merged[merged.len() - 1];
        if first + 2.0 * PI - last.0 < PARALLEL_EPS {
            // wrap-around duplicate; keep the tighter constraint at the front
            if last.1.c < merged[0].1.c {
                merged[0].1 = last.1;
            }
            merged.pop();
        }
    }
    let mut max_gap: f64 = 0.0;
    for i in 0..merged.len() {
        let next = if i + 1 < merged.len() {
            merged[i + 1].0
        } else {
            merged[0].0 + 2.0 * PI
        };
        max_gap = max_gap.max(next - merged[i].0);
    }
    let bounded = merged.len() >= 3 && max_gap < PI - 1e-12;
    if bounded {
        return Ok(clip(&merged));
    }
    // Probe with a large box: if even the boxed region is empty the answer is
    // Empty, otherwise the intersection is unbounded.
    let big = 1e6 * (1.0 + merged.iter().fold(0.0f64, |m, h| m.max(h.1.c.abs())));
    let mut boxed = merged.clone();
    for k in 0..4 {
        let a = k as f64 * PI / 2.0;
        let n = Point::polar(1.0, a);
        let n = Point::new(n.x.round(), n.y.round());
        boxed.push((a, HalfPlane { n, c: big }));
    }
    boxed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.c.total_cmp(&b.1.c)));
    let mut dedup: Vec<(f64, HalfPlane)> = Vec::new();
    for (a, h) in boxed {
        match dedup.last() {
            Some(&(b, _)) if a - b < PARALLEL_EPS => {}
            _ => dedup.push((a, h)),
        }
    }
    match clip(&dedup) {
        None => Ok(None),
        Some(_) => Err(Error::Unbounded),
    }
}

/// Deque sweep over half-planes sorted by strictly increasing normal angle
/// whose normals positively span the plane.
fn clip(hs: &[(f64, HalfPlane)]) -> Option<ConvexPolygon> {
    let scale = hs.iter().fold(1e-300f64, |m, h| m.max(h.1.c.abs()));
    let tol = 1e-13 * scale;
    let outside = |h: &HalfPlane, p: Point| h.excess(p) > tol;
    let mut dq: std::collections::VecDeque<HalfPlane> = std::collections::VecDeque::new();
    for &(_, h) in hs {
        while dq.len() >= 2 && outside(&h, line_intersection(&dq[dq.len() - 1], &dq[dq.len() - 2]))
        {
            dq.pop_back();
        }
        while dq.len() >= 2 && outside(&h, line_intersection(&dq[0], &dq[1])) {
            dq.pop_front();
        }
        if let Some(b) = dq.back() {
            // an antiparallel neighbour means an empty slab or an open strip
            if b.n.cross(h.n).abs() < 1e-15 && b.n.dot(h.n) < 0.0
                && b.c + h.c < 0.0 {
                    return None;
                }
        }
        dq.push_back(h);
    }
    while dq.len() >= 3 && outside(&dq[0], line_intersection(&dq[dq.len() - 1], &dq[dq.len() - 2]))
    {
        dq.pop_back();
    }
    while dq.len() >= 3 && outside(&dq[dq.len() - 1], line_intersection(&dq[0], &dq[1])) {
        dq.pop_front();
    }
    if dq.len() < 3 {
        return None;
    }
    let m = dq.len();
    let pts: Vec<Point> = (0..m)
        .map(|i| line_intersection(&dq[i], &dq[(i + 1) % m]))
        .collect();
    if pts.iter().any(|p| !p.is_finite()) || signed_area(&pts) <= 0.0 {
        return None;
    }
    let cleaned = clean_chain(pts);
    if cleaned.len() < 3 || signed_area(&cleaned) <= 0.0 {
        return None;
    }
    ConvexPolygon::new(cleaned).ok()
}

/// Inner parallel set: every edge half-plane pushed inward by `t`.
/// `None` once the set has no interior.
pub fn inner_parallel(poly: &ConvexPolygon, t: f64) -> Option<ConvexPolygon> {
    if t <= 0.0 {
        return Some(poly.clone());
    }
    let planes: Vec<HalfPlane> = poly
        .halfplanes()
        .into_iter()
        .map(|h| HalfPlane { n: h.n, c: h.c - t })
        .collect();
    let out = halfplane_intersection(&planes).ok().flatten()?;
    let a0 = signed_area(&poly.vertices);
    if signed_area(&out.vertices) < DEGENERATE_AREA * a0 {
        return None;
    }
    Some(out)
}

/// Minkowski sum by merging the two edge sequences in angular order.
pub fn minkowski_sum(p: &ConvexPolygon, q: &ConvexPolygon) -> ConvexPolygon {
    let lowest = |poly: &ConvexPolygon| {
        let v = &poly.vertices;
        (0..v.len())
            .min_by(|&i, &j| v[i].y.total_cmp(&v[j].y).then(v[i].x.total_cmp(&v[j].x)))
            .unwrap()
    };
    let a = p.rotated_start(lowest(p));
    let b = q.rotated_start(lowest(q));
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut out = Vec::with_capacity(n + m);
    while i < n || j < m {
        out.push(a.vertex(i) + b.vertex(j));
        let c = a.edge(i).cross(b.edge(j));
        if j == m || (i < n && c > 0.0) {
            i += 1;
        } else if i == n || c < 0.0 {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    ConvexPolygon::from_boundary(out).expect("sum of valid polygons is valid")
}

/// `t·p + (1 − t)·q` in the Minkowski sense.
pub fn interpolate(p: &ConvexPolygon, q: &ConvexPolygon, t: f64) -> ConvexPolygon {
    if t >= 1.0 {
        return p.clone();
    }
    if t <= 0.0 {
        return q.clone();
    }
    minkowski_sum(&p.scale(t), &q.scale(1.0 - t))
}

/// Turn angle in `(0, 2π)` from unit vector `a` to unit vector `b`.
pub(crate) fn turn(a: Point, b: Point) -> f64 {
    let t = a.cross(b).atan2(a.dot(b));
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

/// Inscribed approximation of `poly ⊕ tB₁`: each corner arc is replaced by
/// chords subtending at most `2π / arc_segments`.
pub fn dilate(poly: &ConvexPolygon, t: f64, arc_segments: usize) -> ConvexPolygon {
    let n = poly.len();
    let step = 2.0 * PI / arc_segments as f64;
    let mut out = Vec::new();
    for i in 0..n {
        let v = poly.vertices[i];
        let n_prev = poly.normals[(i + n - 1) % n];
        let n_next = poly.normals[i];
        let phi = turn(n_prev, n_next);
        let k = (phi / step).ceil().max(1.0) as usize;
        let a0 = n_prev.angle();
        out.push(v + n_prev * t);
        for j in 1..k {
            out.push(v + Point::polar(t, a0 + phi * j as f64 / k as f64));
        }
        out.push(v + n_next * t);
    }
    ConvexPolygon::from_boundary(out).expect("dilation of a valid polygon is valid")
}

/// Form body: `∩ {x·u <= 1}` over the outward edge normals `u`.
pub fn form_body(poly: &ConvexPolygon) -> ConvexPolygon {
    let planes: Vec<HalfPlane> = poly.normals.iter().map(|&n| HalfPlane { n, c: 1.0 }).collect();
    halfplane_intersection(&planes)
        .ok()
        .flatten()
        .expect("edge normals of a polygon positively span the plane")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn area(p: &ConvexPolygon) -> f64 {
        signed_area(p.vertices())
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let p = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(area(&p) > 0.0);
    }

    #[test]
    fn rejects_collinear_vertex() {
        let r = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ]);
        assert!(matches!(r, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn hull_examples() {
        let t = convex_hull(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
        assert_eq!(t.len(), 3);
        let s = convex_hull(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.5),
        ])
        .unwrap();
        assert_eq!(s.len(), 4);
        assert!((area(&s) - 1.0).abs() < 1e-15);
        let c = convex_hull(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)]);
        assert!(matches!(c, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn support_examples() {
        let s = square();
        assert_eq!(support(&s, Point::new(1.0, 0.0)), 1.0);
        assert_eq!(support(&s, Point::new(-1.0, 0.0)), 0.0);
        let t = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
        let u = Point::new(1.0, 1.0).unit();
        assert!((support(&t, u) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn halfplane_examples() {
        let sq = halfplane_intersection(&square().halfplanes()).unwrap().unwrap();
        assert!((area(&sq) - 1.0).abs() < 1e-14);
        let slab = [
            HalfPlane::new(Point::new(1.0, 0.0), 0.0),
            HalfPlane::new(Point::new(-1.0, 0.0), -1.0),
        ];
        assert_eq!(halfplane_intersection(&slab), Ok(None));
        let wedge = [
            HalfPlane::new(Point::new(1.0, 0.0), 1.0),
            HalfPlane::new(Point::new(0.0, 1.0), 1.0),
        ];
        assert_eq!(halfplane_intersection(&wedge), Err(Error::Unbounded));
    }

    #[test]
    fn inner_parallel_examples() {
        let s = square();
        let q = inner_parallel(&s, 0.25).unwrap();
        assert!((area(&q) - 0.25).abs() < 1e-14);
        assert!(inner_parallel(&s, 0.5).is_none());
        assert!(inner_parallel(&s, 0.7).is_none());
        assert_eq!(inner_parallel(&s, 0.0).unwrap(), s);
    }

    #[test]
    fn minkowski_examples() {
        let s = square();
        let d = minkowski_sum(&s, &s);
        assert_eq!(d.len(), 4);
        assert!((area(&d) - 4.0).abs() < 1e-13);
        let hex: Vec<Point> = (0..6).map(|k| Point::polar(1.0, k as f64 * PI / 3.0)).collect();
        let hex = ConvexPolygon::new(hex).unwrap();
        let rot: Vec<Point> = (0..6)
            .map(|k| Point::polar(1.0, k as f64 * PI / 3.0 + PI / 6.0))
            .collect();
        let rot = ConvexPolygon::new(rot).unwrap();
        let sum = minkowski_sum(&hex, &rot);
        // brute-force oracle: hull of all pairwise vertex sums
        let mut pts = Vec::new();
        for &a in hex.vertices() {
            for &b in rot.vertices() {
                pts.push(a + b);
            }
        }
        let oracle = convex_hull(&pts).unwrap();
        assert_eq!(sum.len(), 12);
        assert_eq!(oracle.len(), 12);
        let per: f64 = (0..12).map(|i| sum.edge(i).norm()).sum();
        assert!((per - 12.0).abs() < 1e-12);
        assert!((area(&sum) - area(&oracle)).abs() < 1e-12);
    }

    #[test]
    fn interpolate_endpoints_and_homothets() {
        let s = square();
        let t = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
        assert_eq!(interpolate(&s, &t, 1.0), s);
        assert_eq!(interpolate(&s, &t, 0.0), t);
        let m = interpolate(&s, &s, 0.3);
        assert_eq!(m.len(), 4);
        assert!((area(&m) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dilate_steiner() {
        let s = square();
        let d = dilate(&s, 1.0, 1 << 14);
        assert!((area(&d) - (5.0 + PI)).abs() < 1e-6);
        assert!(area(&d) <= 5.0 + PI);
        let t = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
        let d = dilate(&t, 1.0, 4096);
        let per: f64 = (0..d.len()).map(|i| d.edge(i).norm()).sum();
        assert!((per - (2.0 + 2f64.sqrt() + 2.0 * PI)).abs() < 1e-6);
    }

    #[test]
    fn form_body_examples() {
        let f = form_body(&square());
        assert!((area(&f) - 4.0).abs() < 1e-14);
        let rect = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(form_body(&rect).len(), 4);
        assert!((area(&form_body(&rect)) - 4.0).abs() < 1e-14);
        let eq: Vec<Point> = (0..3)
            .map(|k| Point::polar(5.0, PI / 2.0 + k as f64 * 2.0 * PI / 3.0))
            .collect();
        let fb = form_body(&ConvexPolygon::new(eq).unwrap());
        // equilateral triangle with inradius 1 has area 3√3
        assert!((area(&fb) - 3.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let s = square();
        let back = ConvexPolygon::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let err = ConvexPolygon::from_json("{\"vertices\": [[0,0],[1,0]]}").unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
        let err = ConvexPolygon::from_json("{\"vertices\": [[0,0],").unwrap_err();
        match err {
            Error::Json(m) => assert!(!m.contains("line")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
