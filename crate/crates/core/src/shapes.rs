//! Extremal shape families, discretized with inscribed arcs.
//!
//! Every family is built centered at the origin. Families with an obvious
//! diameter direction (stadium, two-cup, slice) have it along the x-axis;
//! the subequilateral triangle has its symmetry axis along the x-axis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{measure, FunctionalId, Functionals};
use crate::geom::{convex_hull, ConvexPolygon, Point};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Tagged parametric description of one shape.
///
/// JSON form: `{"family": "two_cup", "params": {"r": 1.0, "k": 2.0}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Ball { radius: f64 },
    /// Hull of two disks of radius `r` whose centers are `l` apart.
    Stadium { r: f64, l: f64 },
    /// Hull of the disk of radius `r` and the points `(±k, 0)`.
    TwoCup { r: f64, k: f64 },
    /// Disk of diameter `d` cut by the strip `|y| <= r`.
    Slice { r: f64, d: f64 },
    SubequilateralTriangle { base: f64, height: f64 },
    /// Hull of an equilateral triangle of side `side` and the three arcs of
    /// radius `arc_radius` centered at its vertices.
    Yamanouti { side: f64, arc_radius: f64 },
    SmoothedNonagon { r: f64, d: f64 },
    /// Constant width `w`; `r` is the inradius, the circumradius is `w − r`.
    ConstantWidthNonagon { w: f64, r: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ball,
    Stadium,
    TwoCup,
    Slice,
    SubequilateralTriangle,
    Yamanouti,
    SmoothedNonagon,
    ConstantWidthNonagon,
    Polygon,
}

/// Chords per full turn used when sampling arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution(usize);

impl Resolution {
    pub fn new(arc_segments: usize) -> Result<Self> {
        if arc_segments < 16 {
            return Err(Error::InvalidParam(format!(
                "resolution {arc_segments} below the minimum of 16"
            )));
        }
        Ok(Resolution(arc_segments))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution(4096)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ShapeSpec {
    pub fn family(&self) -> Family {
        match self {
            ShapeSpec::Ball { .. } => Family::Ball,
            ShapeSpec::Stadium { .. } => Family::Stadium,
            ShapeSpec::TwoCup { .. } => Family::TwoCup,
            ShapeSpec::Slice { .. } => Family::Slice,
            ShapeSpec::SubequilateralTriangle { .. } => Family::SubequilateralTriangle,
            ShapeSpec::Yamanouti { .. } => Family::Yamanouti,
            ShapeSpec::SmoothedNonagon { .. } => Family::SmoothedNonagon,
            ShapeSpec::ConstantWidthNonagon { .. } => Family::ConstantWidthNonagon,
            ShapeSpec::Polygon { .. } => Family::Polygon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ShapeSpec::Ball { radius } => positive("radius", radius),
            ShapeSpec::Stadium { r, l } => {
                positive("r", r)?;
                if !(l.is_finite() && l >= 0.0) {
                    return Err(Error::InvalidParam(format!("l must be >= 0, got {l}")));
                }
                Ok(())
            }
            ShapeSpec::TwoCup { r, k } => {
                positive("r", r)?;
                if !(k.is_finite() && k >= r) {
                    return Err(Error::InvalidParam(format!("k must be >= r = {r}, got {k}")));
                }
                Ok(())
            }
            ShapeSpec::Slice { r, d } => {
                positive("r", r)?;
                if !(d.is_finite() && d >= 2.0 * r) {
                    return Err(Error::InvalidParam(format!("d must be >= 2r = {}, got {d}", 2.0 * r)));
                }
                Ok(())
            }
            ShapeSpec::SubequilateralTriangle { base, height } => {
                positive("base", base)?;
                positive("height", height)?;
                if height < SQRT3 / 2.0 * base * (1.0 - 1e-15) {
                    return Err(Error::InvalidParam(format!(
                        "height must be >= sqrt(3)/2 base = {}, got {height}",
                        SQRT3 / 2.0 * base
                    )));
                }
                Ok(())
            }
            ShapeSpec::Yamanouti { side, arc_radius } => {
                positive("side", side)?;
                positive("arc_radius", arc_radius)?;
                if arc_radius > side {
                    return Err(Error::InvalidParam(format!(
                        "arc_radius must be <= side = {side}, got {arc_radius}"
                    )));
                }
                Ok(())
            }
            ShapeSpec::SmoothedNonagon { r, d } => {
                positive("r", r)?;
                if !(d > 2.0 * r && d < 2.0 * SQRT3 * r) {
                    return Err(Error::InvalidParam(format!(
                        "d must lie in (2r, 2 sqrt(3) r) = ({}, {}), got {d}",
                        2.0 * r,
                        2.0 * SQRT3 * r
                    )));
                }
                Ok(())
            }
            ShapeSpec::ConstantWidthNonagon { w, r } => {
                positive("w", w)?;
                let lo = w * (1.0 - 1.0 / SQRT3);
                if !(r >= lo * (1.0 - 1e-15) && r < w / 2.0) {
                    return Err(Error::InvalidParam(format!(
                        "r must lie in [w (1 - 1/sqrt(3)), w/2) = [{lo}, {}), got {r}",
                        w / 2.0
                    )));
                }
                Ok(())
            }
            ShapeSpec::Polygon { ref vertices } => {
                ConvexPolygon::new(vertices.iter().map(|&[x, y]| Point::new(x, y)).collect())
                    .map(|_| ())
                    .map_err(|e| Error::InvalidParam(e.to_string()))
            }
        }
    }

    /// The same shape scaled by `s > 0`.
    pub fn scaled(&self, s: f64) -> ShapeSpec {
        match *self {
            ShapeSpec::Ball { radius } => ShapeSpec::Ball { radius: radius * s },
            ShapeSpec::Stadium { r, l } => ShapeSpec::Stadium { r: r * s, l: l * s },
            ShapeSpec::TwoCup { r, k } => ShapeSpec::TwoCup { r: r * s, k: k * s },
            ShapeSpec::Slice { r, d } => ShapeSpec::Slice { r: r * s, d: d * s },
            ShapeSpec::SubequilateralTriangle { base, height } => {
                ShapeSpec::SubequilateralTriangle { base: base * s, height: height * s }
            }
            ShapeSpec::Yamanouti { side, arc_radius } => {
                ShapeSpec::Yamanouti { side: side * s, arc_radius: arc_radius * s }
            }
            ShapeSpec::SmoothedNonagon { r, d } => ShapeSpec::SmoothedNonagon { r: r * s, d: d * s },
            ShapeSpec::ConstantWidthNonagon { w, r } => {
                ShapeSpec::ConstantWidthNonagon { w: w * s, r: r * s }
            }
            ShapeSpec::Polygon { ref vertices } => ShapeSpec::Polygon {
                vertices: vertices.iter().map(|&[x, y]| [x * s, y * s]).collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("shape specs serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ShapeSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Samples the counterclockwise arc from `a0` to `a1` (radians, `a1 >= a0`)
/// with both endpoints on the circle.
fn arc(out: &mut Vec<Point>, c: Point, radius: f64, a0: f64, a1: f64, res: usize) {
    let step = 2.0 * PI / res as f64;
    let k = ((a1 - a0) / step).ceil().max(1.0) as usize;
    for j in 0..=k {
        out.push(c + Point::polar(radius, a0 + (a1 - a0) * j as f64 / k as f64));
    }
}

/// Counterclockwise angle span from `a` to `b` in `[0, 2π)`.
fn ccw_span(a: f64, b: f64) -> f64 {
    (b - a).rem_euclid(2.0 * PI)
}

/// The shorter of the two arcs between directions `a` and `b`.
fn short_arc(out: &mut Vec<Point>, c: Point, radius: f64, a: f64, b: f64, res: usize) {
    let s = ccw_span(a, b);
    if s <= PI {
        arc(out, c, radius, a, a + s, res);
    } else {
        arc(out, c, radius, b, b + (2.0 * PI - s), res);
    }
}

pub fn build(spec: &ShapeSpec, res: Resolution) -> Result<ConvexPolygon> {
    spec.validate()?;
    let m = res.get();
    let mut pts = Vec::new();
    match *spec {
        ShapeSpec::Ball { radius } => {
            let v = (0..m)
                .map(|k| Point::polar(radius, 2.0 * PI * k as f64 / m as f64))
                .collect();
            return ConvexPolygon::new(v);
        }
        ShapeSpec::Stadium { r, l } => {
            arc(&mut pts, Point::new(l / 2.0, 0.0), r, -PI / 2.0, PI / 2.0, m);
            arc(&mut pts, Point::new(-l / 2.0, 0.0), r, PI / 2.0, 1.5 * PI, m);
        }
        ShapeSpec::TwoCup { r, k } => {
            let a = (r / k).min(1.0).acos();
            pts.push(Point::new(k, 0.0));
            pts.push(Point::new(-k, 0.0));
            if a == 0.0 {
                arc(&mut pts, Point::default(), r, 0.0, 2.0 * PI, m);
            } else {
                arc(&mut pts, Point::default(), r, a, PI - a, m);
                arc(&mut pts, Point::default(), r, PI + a, 2.0 * PI - a, m);
            }
        }
        ShapeSpec::Slice { r, d } => {
            let b = (2.0 * r / d).min(1.0).asin();
            arc(&mut pts, Point::default(), d / 2.0, -b, b, m);
            arc(&mut pts, Point::default(), d / 2.0, PI - b, PI + b, m);
        }
        ShapeSpec::SubequilateralTriangle { base, height } => {
            let v = vec![
                Point::new(-height / 3.0, -base / 2.0),
                Point::new(2.0 * height / 3.0, 0.0),
                Point::new(-height / 3.0, base / 2.0),
            ];
            return ConvexPolygon::new(v);
        }
        ShapeSpec::Yamanouti { side, arc_radius } => {
            let verts = triangle_vertices(side / SQRT3);
            pts.extend_from_slice(&verts);
            let c = arc_radius / side;
            if c > SQRT3 / 2.0 {
                let half = PI / 6.0 - c.min(1.0).acos();
                for v in verts {
                    let mid = (-v).angle();
                    arc(&mut pts, v, arc_radius, mid - half, mid + half, m);
                }
            }
        }
        ShapeSpec::SmoothedNonagon { r, d } => {
            return Ok(smoothed_nonagon_unit(d / r, m)?.scale(r));
        }
        ShapeSpec::ConstantWidthNonagon { w, r } => {
            constant_width_points(&mut pts, w, r, m);
        }
        ShapeSpec::Polygon { ref vertices } => {
            return ConvexPolygon::new(vertices.iter().map(|&[x, y]| Point::new(x, y)).collect());
        }
    }
    convex_hull(&pts)
}

/// Equilateral triangle with circumradius `rc`, one vertex on the +y axis.
fn triangle_vertices(rc: f64) -> [Point; 3] {
    [
        Point::polar(rc, PI / 2.0),
        Point::polar(rc, PI / 2.0 + 2.0 * PI / 3.0),
        Point::polar(rc, PI / 2.0 + 4.0 * PI / 3.0),
    ]
}

/// Smoothed nonagon of inradius 1 and diameter `d`: inside the equilateral
/// triangle of inradius 1, three segments `AᵢBᵢ` on the sides and six arcs of
/// diameter `d`, each pairing a segment endpoint with a point `Mᵢ` on the
/// opposite side of the center.
fn smoothed_nonagon_unit(d: f64, m: usize) -> Result<ConvexPolygon> {
    let tau = (3.0 + (d * d - 3.0).sqrt()) / 2.0;
    let hh = (d * d - tau * tau).max(0.0).sqrt();
    let etas = [PI / 2.0, 7.0 * PI / 6.0, 11.0 * PI / 6.0];
    let mut a = [Point::default(); 3];
    let mut b = [Point::default(); 3];
    let mut mm = [Point::default(); 3];
    for (i, &eta) in etas.iter().enumerate() {
        let (s, c) = eta.sin_cos();
        a[i] = Point::new(c + hh * s, s - hh * c);
        b[i] = Point::new(c - hh * s, s + hh * c);
        mm[i] = Point::new(c, s) * (1.0 - tau);
    }
    let mut pts = Vec::new();
    let sweep = |pts: &mut Vec<Point>, from: Point, to: Point, center: Point| {
        let a0 = (from - center).angle();
        let a1 = a0 + ccw_span(a0, (to - center).angle());
        arc(pts, center, d / 2.0, a0, a1, m);
    };
    for i in 0..3 {
        let prev = (i + 2) % 3;
        let next = (i + 1) % 3;
        pts.push(a[i]);
        pts.push(b[i]);
        sweep(&mut pts, b[i], mm[prev], (b[i] + mm[i]) * 0.5);
        sweep(&mut pts, mm[prev], a[next], (a[next] + mm[next]) * 0.5);
    }
    convex_hull(&pts)
}

fn constant_width_points(pts: &mut Vec<Point>, w: f64, r: f64, m: usize) {
    let big_r = w - r;
    let v = triangle_vertices(big_r);
    let side = v[0].dist(v[1]);
    let offset = ((w / 2.0).powi(2) - (side / 2.0).powi(2)).max(0.0).sqrt();
    // centers of the circles of radius w/2 through each pair of vertices
    let center = |i: usize, j: usize| {
        let mid = (v[i] + v[j]) * 0.5;
        mid - mid.unit() * offset
    };
    let pairs = [(0, 1), (1, 2), (2, 0)];
    pts.extend_from_slice(&v);
    for &(i, j) in &pairs {
        let c = center(i, j);
        // arc leaving vertex i that ends where the big arc about j takes over,
        // and its antipodal copy
        short_arc(pts, c, w / 2.0, (v[i] - c).angle(), (c - v[j]).angle(), m);
        short_arc(pts, c, w / 2.0, (c - v[i]).angle(), (v[j] - c).angle(), m);
    }
    for k in 0..3 {
        let others: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(i, j)| i == k || j == k).collect();
        let c1 = center(others[0].0, others[0].1);
        let c2 = center(others[1].0, others[1].1);
        short_arc(pts, v[k], w, (c1 - v[k]).angle(), (c2 - v[k]).angle(), m);
    }
}

/// Exact functionals for families with closed forms.
pub fn closed_form(spec: &ShapeSpec) -> Result<Functionals> {
    spec.validate()?;
    match *spec {
        ShapeSpec::Ball { radius } => Ok(Functionals {
            area: PI * radius * radius,
            perimeter: 2.0 * PI * radius,
            inradius: radius,
            circumradius: radius,
            diameter: 2.0 * radius,
            width: 2.0 * radius,
            h: None,
            t_star: None,
        }
        .with_h(2.0 / radius)),
        ShapeSpec::Stadium { r, l } => {
            let a = PI * r * r + 2.0 * r * l;
            let p = 2.0 * PI * r + 2.0 * l;
            Ok(Functionals {
                area: a,
                perimeter: p,
                inradius: r,
                circumradius: r + l / 2.0,
                diameter: 2.0 * r + l,
                width: 2.0 * r,
                h: None,
                t_star: None,
            }
            .with_h(p / a))
        }
        ShapeSpec::TwoCup { r, k } => {
            let s = (k * k - r * r).max(0.0).sqrt();
            let a = 2.0 * r * s + r * r * (PI - 2.0 * (r / k).min(1.0).acos());
            let p = 4.0 * s + 4.0 * r * (r / k).min(1.0).asin();
            Ok(Functionals {
                area: a,
                perimeter: p,
                inradius: r,
                circumradius: k,
                diameter: 2.0 * k,
                width: 2.0 * r,
                h: None,
                t_star: None,
            }
            .with_h(1.0 / r + (PI / a).sqrt()))
        }
        ShapeSpec::Slice { r, d } => {
            let s = (d * d - 4.0 * r * r).max(0.0).sqrt();
            let b = (2.0 * r / d).min(1.0).asin();
            Ok(Functionals {
                area: r * s + d * d / 2.0 * b,
                perimeter: 2.0 * s + 2.0 * d * b,
                inradius: r,
                circumradius: d / 2.0,
                diameter: d,
                width: 2.0 * r,
                h: None,
                t_star: None,
            })
        }
        _ => Err(Error::Unsupported(format!("no closed form for {:?}", spec.family()))),
    }
}

/// Functionals of an isosceles triangle with the given base and height.
pub(crate) fn triangle_functionals(base: f64, height: f64) -> Functionals {
    let l = (height * height + base * base / 4.0).sqrt();
    let a = base * height / 2.0;
    let p = base + 2.0 * l;
    let long = l.max(base);
    // base angles exceed π/3 here, so the triangle is acute
    Functionals {
        area: a,
        perimeter: p,
        inradius: 2.0 * a / p,
        circumradius: l * l / (2.0 * height),
        diameter: long,
        width: 2.0 * a / long,
        h: None,
        t_star: None,
    }
}

/// Cheeger constant of a triangle: triangles are homothetic to their form
/// bodies, so `h = 1/r + √(π/A)`.
pub fn triangle_h(f: &Functionals) -> f64 {
    1.0 / f.inradius + (PI / f.area).sqrt()
}

const SOLVE_RES: usize = 8192;

fn functionals_for_solve(spec: &ShapeSpec) -> Result<Functionals> {
    if let ShapeSpec::SubequilateralTriangle { base, height } = *spec {
        return Ok(triangle_functionals(base, height));
    }
    match closed_form(spec) {
        Ok(f) => Ok(f),
        Err(Error::Unsupported(_)) => Ok(measure(&build(spec, Resolution(SOLVE_RES))?)),
        Err(e) => Err(e),
    }
}

/// Unit-scale member of `family` at free parameter `u ∈ [0, 1]`.
fn template(family: Family, u: f64) -> Result<ShapeSpec> {
    // unbounded ratios are swept as q = lo + expm1(u ln(1 + span))
    let unbounded = |lo: f64, span: f64| lo + (u * span.ln_1p()).exp_m1();
    let bounded = |lo: f64, hi: f64| lo + (hi - lo) * u;
    Ok(match family {
        Family::Stadium => ShapeSpec::Stadium { r: 1.0, l: unbounded(0.0, 1e4) },
        Family::TwoCup => ShapeSpec::TwoCup { r: 1.0, k: unbounded(1.0, 1e4) },
        Family::Slice => ShapeSpec::Slice { r: 1.0, d: unbounded(2.0, 2e4) },
        Family::SubequilateralTriangle => ShapeSpec::SubequilateralTriangle {
            base: 1.0,
            height: unbounded(SQRT3 / 2.0, 1e4),
        },
        Family::Yamanouti => ShapeSpec::Yamanouti { side: 1.0, arc_radius: bounded(SQRT3 / 2.0, 1.0) },
        Family::SmoothedNonagon => ShapeSpec::SmoothedNonagon {
            r: 1.0,
            d: bounded(2.0 + 1e-9, 2.0 * SQRT3 - 1e-9),
        },
        Family::ConstantWidthNonagon => ShapeSpec::ConstantWidthNonagon {
            w: 1.0,
            r: bounded(1.0 - 1.0 / SQRT3, 0.5 - 1e-9),
        },
        Family::Ball | Family::Polygon => {
            return Err(Error::InvalidParam(format!(
                "{family:?} has no free shape parameter"
            )))
        }
    })
}

const SCAN_POINTS: usize = 64;

/// Finds the member of `family` with `fixed.0 = fixed.1` and `target.0 = target.1`.
///
/// The shape ratio is scanned for monotonicity and bracketing, then bisected
/// until the target matches to 1e-10 relative (or the ratio stops moving).
pub fn solve_param(
    family: Family,
    target: (FunctionalId, f64),
    fixed: (FunctionalId, f64),
) -> Result<ShapeSpec> {
    let (tid, tval) = target;
    let (fid, fval) = fixed;
    if !(tval > 0.0 && fval > 0.0 && tval.is_finite() && fval.is_finite()) {
        return Err(Error::InvalidParam("target and fixed values must be positive".into()));
    }
    let expo = tid.degree() as f64 / fid.degree() as f64;
    let desired = tval / fval.powf(expo);
    let ratio = |u: f64| -> Result<f64> {
        let f = functionals_for_solve(&template(family, u)?)?;
        Ok(f.get(tid) / f.get(fid).powf(expo))
    };
    let scan: Vec<f64> = (0..=SCAN_POINTS)
        .map(|k| ratio(k as f64 / SCAN_POINTS as f64))
        .collect::<Result<_>>()?;
    let span = scan.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * span;
    let increasing = scan.windows(2).all(|w| w[1] - w[0] >= -tol);
    let decreasing = scan.windows(2).all(|w| w[1] - w[0] <= tol);
    if !(increasing ^ decreasing) {
        return Err(Error::NonMonotone);
    }
    let (lo_v, hi_v) = if increasing {
        (scan[0], scan[SCAN_POINTS])
    } else {
        (scan[SCAN_POINTS], scan[0])
    };
    let slack = 1e-12 * desired.abs();
    if desired < lo_v - slack || desired > hi_v + slack {
        return Err(Error::Unreachable(format!(
            "{}/{}^{expo} = {desired} outside [{lo_v}, {hi_v}] for {family:?}",
            tid.symbol(),
            fid.symbol()
        )));
    }
    // bracket on the scan grid, then bisect in u
    let sign = if increasing { 1.0 } else { -1.0 };
    let k = (1..=SCAN_POINTS)
        .find(|&k| sign * (scan[k] - desired) >= 0.0)
        .unwrap_or(SCAN_POINTS);
    let (mut lo, mut hi) = ((k - 1) as f64 / SCAN_POINTS as f64, k as f64 / SCAN_POINTS as f64);
    let mut u = hi;
    for _ in 0..200 {
        u = 0.5 * (lo + hi);
        let v = ratio(u)?;
        if (v - desired).abs() <= 1e-12 * desired.abs() || hi - lo < 1e-16 {
            break;
        }
        if sign * (v - desired) < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
    }
    let spec = template(family, u)?;
    let f = functionals_for_solve(&spec)?;
    let s = (fval / f.get(fid)).powf(1.0 / fid.degree() as f64);
    Ok(spec.scaled(s))
}

/// The subequilateral triangle matching two functionals, with its exact
/// functionals (h included).
pub fn subequilateral_match(
    target: (FunctionalId, f64),
    fixed: (FunctionalId, f64),
) -> Result<Functionals> {
    match solve_param(Family::SubequilateralTriangle, target, fixed)? {
        ShapeSpec::SubequilateralTriangle { base, height } => {
            let f = triangle_functionals(base, height);
            Ok(f.with_h(triangle_h(&f)))
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{area, perimeter};

    fn res(n: usize) -> Resolution {
        Resolution::new(n).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn stadium_converges() {
        let p = build(&ShapeSpec::Stadium { r: 1.0, l: 2.0 }, res(4096)).unwrap();
        assert!(rel(area(&p), PI + 4.0) < 1e-5);
        assert!(rel(perimeter(&p), 2.0 * PI + 4.0) < 1e-5);
    }

    #[test]
    fn degenerate_families_are_balls() {
        let ball = measure(&build(&ShapeSpec::Ball { radius: 1.0 }, res(1024)).unwrap());
        for spec in [ShapeSpec::TwoCup { r: 1.0, k: 1.0 }, ShapeSpec::Slice { r: 1.0, d: 2.0 }] {
            let f = measure(&build(&spec, res(1024)).unwrap());
            assert!(rel(f.area, ball.area) < 1e-5, "{spec:?}");
            assert!(rel(f.diameter, 2.0) < 1e-5);
        }
    }

    #[test]
    fn closed_form_examples() {
        let f = closed_form(&ShapeSpec::TwoCup { r: 1.0, k: 2.0 }).unwrap();
        assert!((f.perimeter - 9.022_598_332_668_704).abs() < 1e-12);
        assert!((f.area - 4.511_299_166_334_352).abs() < 1e-12);
        assert!((f.h.unwrap() - 1.834_495_736_587_467).abs() < 1e-12);
        let f = closed_form(&ShapeSpec::Stadium { r: 1.0, l: 2.0 }).unwrap();
        assert!((f.h.unwrap() - 1.439_900_846_488_442_6).abs() < 1e-12);
        let f = closed_form(&ShapeSpec::Ball { radius: 2.0 }).unwrap();
        assert_eq!((f.area, f.perimeter, f.inradius, f.diameter, f.h), (4.0 * PI, 4.0 * PI, 2.0, 4.0, Some(1.0)));
        assert!(matches!(
            closed_form(&ShapeSpec::Yamanouti { side: 1.0, arc_radius: 1.0 }),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn closed_forms_match_builds() {
        let specs = [
            ShapeSpec::Ball { radius: 1.5 },
            ShapeSpec::Stadium { r: 0.7, l: 3.0 },
            ShapeSpec::TwoCup { r: 1.0, k: 1.7 },
            ShapeSpec::TwoCup { r: 2.0, k: 9.0 },
            ShapeSpec::Slice { r: 1.0, d: 3.1 },
            ShapeSpec::Slice { r: 0.5, d: 9.0 },
        ];
        for spec in specs {
            let c = closed_form(&spec).unwrap();
            let m = measure(&build(&spec, res(8192)).unwrap());
            for id in [
                FunctionalId::Area,
                FunctionalId::Perimeter,
                FunctionalId::Inradius,
                FunctionalId::Circumradius,
                FunctionalId::Diameter,
                FunctionalId::Width,
            ] {
                assert!(rel(m.get(id), c.get(id)) < 5e-5, "{spec:?} {id:?}: {} vs {}", m.get(id), c.get(id));
            }
        }
    }

    #[test]
    fn triangle_formulas_match_measure() {
        for (b, h) in [(1.0, SQRT3 / 2.0), (1.0, 2.0), (0.3, 5.0)] {
            let p = build(&ShapeSpec::SubequilateralTriangle { base: b, height: h }, res(16)).unwrap();
            let m = measure(&p);
            let c = triangle_functionals(b, h);
            for id in [
                FunctionalId::Area,
                FunctionalId::Perimeter,
                FunctionalId::Inradius,
                FunctionalId::Circumradius,
                FunctionalId::Diameter,
                FunctionalId::Width,
            ] {
                assert!(rel(m.get(id), c.get(id)) < 1e-12, "{id:?}");
            }
        }
    }

    #[test]
    fn yamanouti_endpoints() {
        let reuleaux = measure(&build(&ShapeSpec::Yamanouti { side: 1.0, arc_radius: 1.0 }, res(8192)).unwrap());
        assert!(rel(reuleaux.area, (PI - SQRT3) / 2.0) < 1e-6);
        assert!(rel(reuleaux.width, 1.0) < 1e-6);
        assert!(rel(reuleaux.diameter, 1.0) < 1e-12);
        let tri = build(&ShapeSpec::Yamanouti { side: 1.0, arc_radius: 0.5 }, res(256)).unwrap();
        assert_eq!(tri.len(), 3);
        assert!(rel(area(&tri), SQRT3 / 4.0) < 1e-14);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(
            build(&ShapeSpec::TwoCup { r: 1.0, k: 0.5 }, res(64)),
            Err(Error::InvalidParam(_))
        ));
        assert!(matches!(
            build(&ShapeSpec::SmoothedNonagon { r: 1.0, d: 4.0 }, res(64)),
            Err(Error::InvalidParam(_))
        ));
        assert!(Resolution::new(8).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = ShapeSpec::TwoCup { r: 1.0, k: 2.0 };
        let j = s.to_json();
        assert_eq!(j, r#"{"family":"two_cup","params":{"r":1.0,"k":2.0}}"#);
        assert_eq!(ShapeSpec::from_json(&j).unwrap(), s);
    }

    #[test]
    fn solve_param_examples() {
        let s = solve_param(Family::TwoCup, (FunctionalId::Diameter, 4.0), (FunctionalId::Inradius, 1.0)).unwrap();
        match s {
            ShapeSpec::TwoCup { r, k } => {
                assert!(rel(r, 1.0) < 1e-12);
                assert!(rel(k, 2.0) < 1e-9);
            }
            _ => panic!(),
        }
        let s = solve_param(Family::Slice, (FunctionalId::Width, 1.0), (FunctionalId::Diameter, 2.0)).unwrap();
        match s {
            ShapeSpec::Slice { r, d } => {
                assert!(rel(r, 0.5) < 1e-9);
                assert!(rel(d, 2.0) < 1e-12);
            }
            _ => panic!(),
        }
        let s = solve_param(
            Family::SubequilateralTriangle,
            (FunctionalId::Width, 1.0),
            (FunctionalId::Diameter, 3.0),
        )
        .unwrap();
        let m = measure(&build(&s, res(16)).unwrap());
        assert!(rel(m.width, 1.0) < 1e-8);
        assert!(rel(m.diameter, 3.0) < 1e-8);
        assert!(matches!(
            solve_param(Family::SubequilateralTriangle, (FunctionalId::Width, 1.0), (FunctionalId::Diameter, 1.0)),
            Err(Error::Unreachable(_))
        ));
    }

    #[test]
    fn smoothed_nonagon_functionals() {
        for d in [2.1, 2.38873, 3.3] {
            let f = measure(&build(&ShapeSpec::SmoothedNonagon { r: 2.0, d: 2.0 * d }, res(8192)).unwrap());
            assert!(rel(f.inradius, 2.0) < 1e-6, "d={d} r={}", f.inradius);
            assert!(rel(f.diameter, 2.0 * d) < 1e-6, "d={d} diam={}", f.diameter);
        }
    }

    #[test]
    fn constant_width_nonagon_functionals() {
        for r in [1.0 - 1.0 / SQRT3, 0.45, 0.499] {
            let f = measure(&build(&ShapeSpec::ConstantWidthNonagon { w: 1.0, r }, res(8192)).unwrap());
            assert!(rel(f.width, 1.0) < 1e-6, "r={r} w={}", f.width);
            assert!(rel(f.diameter, 1.0) < 1e-6, "r={r} d={}", f.diameter);
            assert!(rel(f.inradius, r) < 1e-6, "r={r} got {}", f.inradius);
            assert!(rel(f.circumradius, 1.0 - r) < 1e-6, "r={r} R={}", f.circumradius);
        }
    }
}
