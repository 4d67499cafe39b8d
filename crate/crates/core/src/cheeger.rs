//! Cheeger constant and Cheeger set of a convex polygon, and the generic
//! root machinery behind the implicit bounds.
//!
//! For planar convex bodies `h = 1/t*` where `t*` is the unique solution of
//! `|Ω₋ₜ| = πt²`, and the Cheeger set is `Ω₋ₜ* ⊕ t*B₁`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functionals::{area, inradius};
use crate::geom::{dilate, inner_parallel, ConvexPolygon};

pub const DEFAULT_ARC_SEGMENTS: usize = 4096;
pub const DEFAULT_SCAN_GRID: usize = 1024;
const BISECTION_REL_WIDTH: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct CheegerResult {
    pub h: f64,
    pub t_star: f64,
    pub cheeger_set: ConvexPolygon,
    pub inner_core: ConvexPolygon,
}

fn offset_area(poly: &ConvexPolygon, t: f64) -> f64 {
    inner_parallel(poly, t).map_or(0.0, |p| area(&p))
}

/// `t*` only, skipping the Cheeger set construction.
pub fn cheeger_t(poly: &ConvexPolygon) -> f64 {
    let r = inradius(poly).0;
    let (mut lo, mut hi) = (0.0, r);
    while hi - lo >= BISECTION_REL_WIDTH * r {
        let mid = 0.5 * (lo + hi);
        if offset_area(poly, mid) - PI * mid * mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn cheeger_h(poly: &ConvexPolygon) -> f64 {
    1.0 / cheeger_t(poly)
}

pub fn cheeger_constant(poly: &ConvexPolygon) -> CheegerResult {
    cheeger_constant_with(poly, DEFAULT_ARC_SEGMENTS)
}

pub fn cheeger_constant_with(poly: &ConvexPolygon, arc_segments: usize) -> CheegerResult {
    let t = cheeger_t(poly);
    let core = inner_parallel(poly, t).expect("t* lies strictly below the inradius");
    CheegerResult {
        h: 1.0 / t,
        t_star: t,
        cheeger_set: dilate(&core, t, arc_segments),
        inner_core: core,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMode {
    Smallest,
    Largest,
}

/// The equation `g(t) = πt²` on `[0, upper]`.
#[derive(Clone)]
pub struct ImplicitRootProblem {
    pub g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub upper: f64,
    pub mode: RootMode,
    pub grid: usize,
}

impl std::fmt::Debug for ImplicitRootProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImplicitRootProblem")
            .field("upper", &self.upper)
            .field("mode", &self.mode)
            .field("grid", &self.grid)
            .finish()
    }
}

impl ImplicitRootProblem {
    pub fn new(g: impl Fn(f64) -> f64 + Send + Sync + 'static, upper: f64) -> Self {
        ImplicitRootProblem {
            g: Arc::new(g),
            upper,
            mode: RootMode::Smallest,
            grid: DEFAULT_SCAN_GRID,
        }
    }

    pub fn with_mode(mut self, mode: RootMode) -> Self {
        self.mode = mode;
        self
    }

    fn residual(&self, t: f64) -> f64 {
        (self.g)(t) - PI * t * t
    }

    fn samples(&self) -> Vec<(f64, f64)> {
        (0..=self.grid)
            .map(|k| {
                let t = self.upper * k as f64 / self.grid as f64;
                (t, self.residual(t))
            })
            .collect()
    }

    /// Grid cells `[t_{k-1}, t_k]` on which the residual changes sign or hits zero.
    fn crossing_cells(&self) -> Vec<usize> {
        let s = self.samples();
        (1..s.len())
            .filter(|&k| s[k].1 == 0.0 || (s[k - 1].1 != 0.0 && (s[k - 1].1 < 0.0) != (s[k].1 < 0.0)))
            .collect()
    }

    /// Number of crossings seen on the scan grid. The extremal families have
    /// exactly one; more is reported, not resolved.
    pub fn crossing_count(&self) -> usize {
        self.crossing_cells().len()
    }
}

pub fn smallest_crossing(problem: &ImplicitRootProblem) -> Result<f64> {
    let cells = problem.crossing_cells();
    let k = match problem.mode {
        RootMode::Smallest => cells.first(),
        RootMode::Largest => cells.last(),
    }
    .copied()
    .ok_or(Error::NoRoot)?;
    let step = problem.upper / problem.grid as f64;
    let mut hi = problem.upper * k as f64 / problem.grid as f64;
    let mut lo = hi - step;
    let f_hi = problem.residual(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    let neg_hi = f_hi < 0.0;
    while hi - lo >= BISECTION_REL_WIDTH * problem.upper {
        let mid = 0.5 * (lo + hi);
        let f = problem.residual(mid);
        if f == 0.0 {
            return Ok(mid);
        }
        if (f < 0.0) == neg_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `1 / t_g`: a lower bound on h in smallest mode, an upper bound in largest mode.
pub fn implicit_bound_value(problem: &ImplicitRootProblem) -> Result<f64> {
    smallest_crossing(problem).map(|t| 1.0 / t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_closed_form() {
        let res = cheeger_constant(&square());
        // (1 − 2t)² = πt²  ⇒  t = 1/(2 + √π)
        let t = 1.0 / (2.0 + PI.sqrt());
        assert!((res.t_star - t).abs() < 1e-12);
        assert!((res.h - (2.0 + PI.sqrt())).abs() < 1e-9);
        assert!((area(&res.inner_core) - PI * t * t).abs() < 1e-9 * PI * t * t);
    }

    #[test]
    fn regular_polygon_near_ball() {
        let p = ConvexPolygon::new(
            (0..256)
                .map(|k| Point::polar(1.0, 2.0 * PI * k as f64 / 256.0))
                .collect(),
        )
        .unwrap();
        let res = cheeger_constant(&p);
        assert!((res.h - 2.0).abs() < 2e-3);
        assert!((res.h * res.t_star - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equilateral_triangle() {
        let t = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap();
        let expect = 2.0 * 3f64.sqrt() + 2.0 * (PI / 3f64.sqrt()).sqrt();
        assert!((cheeger_h(&t) - expect).abs() < 1e-10);
    }

    #[test]
    fn crossing_examples() {
        let p = ImplicitRootProblem::new(|t| PI * (1.0 - t) * (1.0 - t), 1.0);
        assert!((smallest_crossing(&p).unwrap() - 0.5).abs() < 1e-12);
        assert!((implicit_bound_value(&p).unwrap() - 2.0).abs() < 1e-11);
        let sq = square();
        let q = ImplicitRootProblem::new(move |t| offset_area(&sq, t), 0.5);
        assert!((smallest_crossing(&q).unwrap() - 1.0 / (2.0 + PI.sqrt())).abs() < 1e-12);
        let neg = ImplicitRootProblem::new(|_| -1.0, 1.0);
        assert_eq!(smallest_crossing(&neg), Err(Error::NoRoot));
        let touch = ImplicitRootProblem::new(|t| PI * t * t - t, 1.0);
        assert_eq!(implicit_bound_value(&touch), Err(Error::NoRoot));
    }

    #[test]
    fn largest_mode_picks_last_crossing() {
        // residual (t − 0.2)(t − 0.7) changes sign twice
        let p = ImplicitRootProblem::new(|t| PI * t * t + (t - 0.2) * (t - 0.7), 1.0);
        assert_eq!(p.crossing_count(), 2);
        assert!((smallest_crossing(&p).unwrap() - 0.2).abs() < 1e-12);
        let p = p.with_mode(RootMode::Largest);
        assert!((smallest_crossing(&p).unwrap() - 0.7).abs() < 1e-12);
    }
}
