//! The six geometric functionals of a convex polygon.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{turn, ConvexPolygon, Point};

/// Identifies one functional; `degree` is its homogeneity under scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionalId {
    #[serde(rename = "A")]
    Area,
    #[serde(rename = "P")]
    Perimeter,
    #[serde(rename = "r")]
    Inradius,
    #[serde(rename = "R")]
    Circumradius,
    #[serde(rename = "d")]
    Diameter,
    #[serde(rename = "w")]
    Width,
}

impl FunctionalId {
    pub fn degree(self) -> i32 {
        match self {
            FunctionalId::Area => 2,
            _ => 1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FunctionalId::Area => "A",
            FunctionalId::Perimeter => "P",
            FunctionalId::Inradius => "r",
            FunctionalId::Circumradius => "R",
            FunctionalId::Diameter => "d",
            FunctionalId::Width => "w",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Functionals {
    pub area: f64,
    pub perimeter: f64,
    pub inradius: f64,
    pub circumradius: f64,
    pub diameter: f64,
    pub width: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_star: Option<f64>,
}

impl Functionals {
    pub fn get(&self, id: FunctionalId) -> f64 {
        match id {
            FunctionalId::Area => self.area,
            FunctionalId::Perimeter => self.perimeter,
            FunctionalId::Inradius => self.inradius,
            FunctionalId::Circumradius => self.circumradius,
            FunctionalId::Diameter => self.diameter,
            FunctionalId::Width => self.width,
        }
    }

    /// Values of the body scaled by `s`.
    pub fn scaled(&self, s: f64) -> Functionals {
        Functionals {
            area: self.area * s * s,
            perimeter: self.perimeter * s,
            inradius: self.inradius * s,
            circumradius: self.circumradius * s,
            diameter: self.diameter * s,
            width: self.width * s,
            h: self.h.map(|h| h / s),
            t_star: self.t_star.map(|t| t * s),
        }
    }

    pub fn with_h(mut self, h: f64) -> Functionals {
        self.h = Some(h);
        self.t_star = Some(1.0 / h);
        self
    }
}

pub fn area(poly: &ConvexPolygon) -> f64 {
    let v = poly.vertices();
    let n = v.len();
    // shoelace about the first vertex keeps large offsets from cancelling
    let o = v[0];
    let mut s = 0.0;
    for i in 1..n - 1 {
        s += (v[i] - o).cross(v[i + 1] - o);
    }
    0.5 * s
}

pub fn perimeter(poly: &ConvexPolygon) -> f64 {
    (0..poly.len()).map(|i| poly.edge(i).norm()).sum()
}

/// Distance of vertex `j` from the supporting line of edge `i`.
fn edge_height(poly: &ConvexPolygon, i: usize, j: usize) -> f64 {
    -(poly.vertex(j) - poly.vertex(i)).dot(poly.normals()[i])
}

/// Rotating calipers over antipodal vertex pairs.
pub fn diameter(poly: &ConvexPolygon) -> (f64, Point, Point) {
    let n = poly.len();
    let mut j = 1;
    let mut best = (0.0, poly.vertex(0), poly.vertex(1));
    let consider = |a: Point, b: Point, best: &mut (f64, Point, Point)| {
        let d = a.dist(b);
        if d > best.0 {
            *best = (d, a, b);
        }
    };
    for i in 0..n {
        let mut guard = 0;
        while edge_height(poly, i, j + 1) > edge_height(poly, i, j) && guard < n {
            j = (j + 1) % n;
            guard += 1;
        }
        consider(poly.vertex(i), poly.vertex(j), &mut best);
        consider(poly.vertex(i + 1), poly.vertex(j), &mut best);
        // parallel opposite edge: both of its endpoints are antipodal
        consider(poly.vertex(i), poly.vertex(j + 1), &mut best);
        consider(poly.vertex(i + 1), poly.vertex(j + 1), &mut best);
    }
    best
}

/// Minimal width and the outward normal of the first attaining edge.
pub fn min_width(poly: &ConvexPolygon) -> (f64, Point) {
    let n = poly.len();
    let mut j = 1;
    let mut best = (f64::INFINITY, poly.normals()[0]);
    for i in 0..n {
        let mut guard = 0;
        while edge_height(poly, i, j + 1) > edge_height(poly, i, j) && guard < n {
            j = (j + 1) % n;
            guard += 1;
        }
        let w = edge_height(poly, i, j);
        if w < best.0 {
            best = (w, poly.normals()[i]);
        }
    }
    best
}

#[derive(PartialEq)]
struct Event {
    time: f64,
    edge: usize,
    version: u32,
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on time, ties by edge index
        other
            .time
            .total_cmp(&self.time)
            .then(other.edge.cmp(&self.edge))
    }
}

/// Chebyshev center by simulating the inward wavefront: edges shrink at rate
/// `tan(a/2) + tan(b/2)` (a, b the exterior angles at their ends) and vanish in
/// time order until the offset polygon degenerates.
pub fn inradius(poly: &ConvexPolygon) -> (f64, Point) {
    let n = poly.len();
    let normals = poly.normals();
    let planes = poly.halfplanes();
    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    // turn_right[i]: exterior angle between edge i and its current successor
    let mut turn_right: Vec<f64> = (0..n).map(|i| turn(normals[i], normals[(i + 1) % n])).collect();
    let mut len_ref: Vec<f64> = (0..n).map(|i| poly.edge(i).norm()).collect();
    let mut t_ref = vec![0.0; n];
    let mut rate = vec![0.0; n];
    let mut version = vec![0u32; n];
    let mut alive = vec![true; n];
    let mut heap = BinaryHeap::with_capacity(2 * n);

    let rate_of = |i: usize, prev: &[usize], turn_right: &[f64]| {
        (turn_right[prev[i]] / 2.0).tan() + (turn_right[i] / 2.0).tan()
    };
    for i in 0..n {
        rate[i] = rate_of(i, &prev, &turn_right);
        heap.push(Event { time: len_ref[i] / rate[i], edge: i, version: 0 });
    }
    let mut active = n;
    let mut now = 0.0f64;
    while let Some(ev) = heap.pop() {
        let i = ev.edge;
        if !alive[i] || ev.version != version[i] {
            continue;
        }
        now = now.max(ev.time);
        let p = prev[i];
        let q = next[i];
        if active <= 3 || turn_right[p] + turn_right[i] >= PI {
            let shifted = |k: usize| crate::geom::HalfPlane { n: planes[k].n, c: planes[k].c - now };
            let (a, b) = (shifted(i), shifted(p));
            let det = a.n.cross(b.n);
            let (a, b) = if det.abs() > 1e-12 { (a, b) } else { (a, shifted(q)) };
            let det = a.n.cross(b.n);
            let center = Point::new(
                (a.c * b.n.y - b.c * a.n.y) / det,
                (a.n.x * b.c - b.n.x * a.c) / det,
            );
            return (now, center);
        }
        alive[i] = false;
        active -= 1;
        for &k in &[p, q] {
            len_ref[k] -= (now - t_ref[k]) * rate[k];
            t_ref[k] = now;
        }
        turn_right[p] += turn_right[i];
        next[p] = q;
        prev[q] = p;
        for &k in &[p, q] {
            rate[k] = rate_of(k, &prev, &turn_right);
            version[k] += 1;
            let time = (t_ref[k] + len_ref[k].max(0.0) / rate[k]).max(now);
            heap.push(Event { time, edge: k, version: version[k] });
        }
    }
    unreachable!("wavefront always terminates for a valid polygon")
}

fn circle_two(a: Point, b: Point) -> (Point, f64) {
    let c = (a + b) * 0.5;
    (c, c.dist(a))
}

fn circle_three(a: Point, b: Point, c: Point) -> (Point, f64) {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    if d.abs() < 1e-300 {
        // collinear: the farthest pair spans the circle
        let cands = [circle_two(a, b), circle_two(a, c), circle_two(b, c)];
        return cands
            .into_iter()
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
    }
    let ux = (ac.y * ab.dot(ab) - ab.y * ac.dot(ac)) / d;
    let uy = (ab.x * ac.dot(ac) - ac.x * ab.dot(ab)) / d;
    let center = a + Point::new(ux, uy);
    (center, center.dist(a).max(center.dist(b)).max(center.dist(c)))
}

/// Minimal enclosing circle of the vertices (Welzl, iterative, fixed shuffle).
pub fn circumradius(poly: &ConvexPolygon) -> (f64, Point) {
    let mut pts = poly.vertices().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c1c1e);
    pts.shuffle(&mut rng);
    let scale = pts.iter().fold(0.0f64, |m, p| m.max(p.norm()));
    let inside = |c: Point, r: f64, p: Point| c.dist(p) <= r * (1.0 + 1e-12) + 1e-15 * scale;
    let (mut c, mut r) = (pts[0], 0.0);
    for i in 1..pts.len() {
        if inside(c, r, pts[i]) {
            continue;
        }
        c = pts[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, pts[j]) {
                continue;
            }
            (c, r) = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if !inside(c, r, pts[k]) {
                    (c, r) = circle_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    (r, c)
}

/// All six functionals; `h` is left unset.
pub fn measure(poly: &ConvexPolygon) -> Functionals {
    Functionals {
        area: area(poly),
        perimeter: perimeter(poly),
        inradius: inradius(poly).0,
        circumradius: circumradius(poly).0,
        diameter: diameter(poly).0,
        width: min_width(poly).0,
        h: None,
        t_star: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[(f64, f64)]) -> ConvexPolygon {
        ConvexPolygon::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn regular(n: usize, r: f64) -> ConvexPolygon {
        ConvexPolygon::new((0..n).map(|k| Point::polar(r, 2.0 * PI * k as f64 / n as f64)).collect()).unwrap()
    }

    fn equilateral() -> ConvexPolygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)])
    }

    #[test]
    fn area_and_perimeter() {
        let sq = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(area(&sq), 1.0);
        assert_eq!(perimeter(&sq), 4.0);
        let t = poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(area(&t), 0.5);
        assert!((perimeter(&t) - (2.0 + 2f64.sqrt())).abs() < 1e-15);
        let hex = regular(6, 1.0);
        assert!((area(&hex) - 1.5 * 3f64.sqrt()).abs() < 1e-14);
        assert!((perimeter(&hex) - 6.0).abs() < 1e-14);
    }

    #[test]
    fn diameter_examples() {
        let sq = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let (d, a, b) = diameter(&sq);
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert!((a.dist(b) - d).abs() < 1e-15);
        assert!((diameter(&equilateral()).0 - 1.0).abs() < 1e-15);
        assert!((diameter(&regular(64, 1.0)).0 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn width_examples() {
        let sq = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!((min_width(&sq).0 - 1.0).abs() < 1e-15);
        assert!((min_width(&equilateral()).0 - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let rect = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]);
        let (w, n) = min_width(&rect);
        assert!((w - 1.0).abs() < 1e-15);
        assert!(n.x.abs() < 1e-15 && (n.y.abs() - 1.0).abs() < 1e-15);
        // first attaining edge in index order is the bottom edge
        assert!(n.y < 0.0);
    }

    #[test]
    fn inradius_examples() {
        let sq = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let (r, c) = inradius(&sq);
        assert!((r - 0.5).abs() < 1e-15);
        assert!(c.dist(Point::new(0.5, 0.5)) < 1e-15);
        assert!((inradius(&equilateral()).0 - 3f64.sqrt() / 6.0).abs() < 1e-15);
        let t = poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let s = (2.0 + 2f64.sqrt()) / 2.0;
        assert!((inradius(&t).0 - 0.5 / s).abs() < 1e-15);
        let rect = poly(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (0.0, 1.0)]);
        let (r, c) = inradius(&rect);
        assert!((r - 0.5).abs() < 1e-15);
        assert!((c.y - 0.5).abs() < 1e-15 && c.x >= 0.5 - 1e-15 && c.x <= 2.5 + 1e-15);
        let big = regular(8192, 1.0);
        assert!((inradius(&big).0 - (PI / 8192.0).cos()).abs() < 1e-13);
    }

    #[test]
    fn circumradius_examples() {
        let sq = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let (r, c) = circumradius(&sq);
        assert!((r - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(c.dist(Point::new(0.5, 0.5)) < 1e-15);
        assert!((circumradius(&equilateral()).0 - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let ob = poly(&[(0.0, 0.0), (4.0, 0.0), (1.0, 1.0)]);
        let (r, c) = circumradius(&ob);
        assert!((r - 2.0).abs() < 1e-15);
        assert!(c.dist(Point::new(2.0, 0.0)) < 1e-15);
    }

    #[test]
    fn measure_scales() {
        let t = poly(&[(0.1, 0.0), (1.3, 0.2), (0.7, 0.9), (0.0, 0.5)]);
        let m = measure(&t);
        let m2 = measure(&t.scale(3.0));
        let s = m.scaled(3.0);
        for id in [
            FunctionalId::Area,
            FunctionalId::Perimeter,
            FunctionalId::Inradius,
            FunctionalId::Circumradius,
            FunctionalId::Diameter,
            FunctionalId::Width,
        ] {
            assert!((m2.get(id) - s.get(id)).abs() <= 1e-12 * s.get(id));
        }
    }
}
