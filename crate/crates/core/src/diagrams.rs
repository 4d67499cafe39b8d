//! Boundary curves of the diagrams `(x, h)` at a fixed normalizing
//! functional, membership tests, and CSV/SVG output.
//!
//! `D1_PHR`, `D2_RHR` and `D3_DHR` are fully described by their two curves.
//! The remaining diagrams only have proven bounds, so points between them
//! are reported as unknown.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, d0, BoundId, ImplicitFamily};
use crate::cheeger::implicit_bound_value;
use crate::error::{Error, Result};
use crate::functionals::{FunctionalId, Functionals};
use crate::sampler::Triplet;

const SQRT3: f64 = 1.732_050_807_568_877_2;
pub const MEMBERSHIP_TOL: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagramId {
    #[serde(rename = "D1_PHR")]
    D1Phr,
    #[serde(rename = "D2_RHR")]
    D2Rhr,
    #[serde(rename = "D3_DHR")]
    D3Dhr,
    #[serde(rename = "HWD")]
    Hwd,
    #[serde(rename = "HWR_CIRC")]
    HwrCirc,
    #[serde(rename = "HWP")]
    Hwp,
    #[serde(rename = "HWA")]
    Hwa,
    #[serde(rename = "HRD")]
    Hrd,
    #[serde(rename = "HWR_IN")]
    HwrIn,
}

impl DiagramId {
    pub const ALL: [DiagramId; 9] = [
        DiagramId::D1Phr,
        DiagramId::D2Rhr,
        DiagramId::D3Dhr,
        DiagramId::Hwd,
        DiagramId::HwrCirc,
        DiagramId::Hwp,
        DiagramId::Hwa,
        DiagramId::Hrd,
        DiagramId::HwrIn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiagramId::D1Phr => "D1_PHR",
            DiagramId::D2Rhr => "D2_RHR",
            DiagramId::D3Dhr => "D3_DHR",
            DiagramId::Hwd => "HWD",
            DiagramId::HwrCirc => "HWR_CIRC",
            DiagramId::Hwp => "HWP",
            DiagramId::Hwa => "HWA",
            DiagramId::Hrd => "HRD",
            DiagramId::HwrIn => "HWR_IN",
        }
    }

    /// Abscissa functional and the functional held at 1.
    pub fn triplet(self) -> Triplet {
        use FunctionalId::*;
        match self {
            DiagramId::D1Phr => Triplet::new(Perimeter, Inradius),
            DiagramId::D2Rhr => Triplet::new(Circumradius, Inradius),
            DiagramId::D3Dhr => Triplet::new(Diameter, Inradius),
            DiagramId::Hwd => Triplet::new(Width, Diameter),
            DiagramId::HwrCirc => Triplet::new(Width, Circumradius),
            DiagramId::Hwp => Triplet::new(Width, Perimeter),
            DiagramId::Hwa => Triplet::new(Width, Area),
            DiagramId::Hrd => Triplet::new(Circumradius, Diameter),
            DiagramId::HwrIn => Triplet::new(Width, Inradius),
        }
    }

    pub fn is_complete(self) -> bool {
        matches!(self, DiagramId::D1Phr | DiagramId::D2Rhr | DiagramId::D3Dhr)
    }

    /// Admissible abscissae `(lo, hi, lo_open)`.
    fn domain(self) -> (f64, f64, bool) {
        match self {
            DiagramId::D1Phr => (2.0 * PI, f64::INFINITY, false),
            DiagramId::D2Rhr => (1.0, f64::INFINITY, false),
            DiagramId::D3Dhr => (2.0, f64::INFINITY, false),
            DiagramId::Hwd => (0.0, 1.0, true),
            DiagramId::HwrCirc => (0.0, 2.0, true),
            DiagramId::Hwp => (0.0, 1.0 / PI, true),
            DiagramId::Hwa => (0.0, 3f64.powf(0.25), true),
            DiagramId::Hrd => (0.5, 1.0 / SQRT3, false),
            DiagramId::HwrIn => (2.0, 3.0, false),
        }
    }

    fn admissible(self, x: f64) -> bool {
        let (lo, hi, open) = self.domain();
        x.is_finite() && (if open { x > lo } else { x >= lo }) && x <= hi
    }
}

impl FromStr for DiagramId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DiagramId::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s) || d.name().split('_').next() == Some(s))
            .ok_or_else(|| Error::InvalidParam(format!("unknown diagram {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub id: DiagramId,
    pub x_min: f64,
    pub x_max: f64,
    pub grid: usize,
}

impl DiagramSpec {
    /// Default ranges: complete diagrams run to 100 times their left end on a
    /// log grid; open left ends start at a small fraction of the range.
    pub fn new(id: DiagramId) -> Self {
        let (lo, hi, open) = id.domain();
        let (x_min, x_max) = if hi.is_infinite() {
            (lo, 100.0 * lo)
        } else if open {
            (hi * 1e-2, hi)
        } else {
            (lo, hi)
        };
        DiagramSpec { id, x_min, x_max, grid: DEFAULT_GRID }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::InvalidParam("grid needs at least 2 points".into()));
        }
        if !(self.x_min < self.x_max && self.id.admissible(self.x_min) && self.id.admissible(self.x_max)) {
            return Err(Error::InvalidParam(format!(
                "x range [{}, {}] outside the admissible range of {}",
                self.x_min,
                self.x_max,
                self.id.name()
            )));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        let m = self.grid - 1;
        (0..=m)
            .map(|k| {
                let u = k as f64 / m as f64;
                if k == m {
                    self.x_max
                } else if self.id.is_complete() {
                    self.x_min * (self.x_max / self.x_min).powf(u)
                } else {
                    self.x_min + (self.x_max - self.x_min) * u
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub x: f64,
    pub y: f64,
    pub provenance: String,
}

/// One sampled piece of a boundary, labeled by the extremal family or bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub lower: Vec<Curve>,
    pub upper: Vec<Curve>,
}

impl Boundary {
    pub fn curves(&self) -> impl Iterator<Item = &Curve> {
        self.lower.iter().chain(&self.upper)
    }
}

/// Functionals record with only the named fields set.
fn partial(fields: &[(FunctionalId, f64)]) -> Functionals {
    let mut f = Functionals {
        area: f64::NAN,
        perimeter: f64::NAN,
        inradius: f64::NAN,
        circumradius: f64::NAN,
        diameter: f64::NAN,
        width: f64::NAN,
        h: None,
        t_star: None,
    };
    for &(id, v) in fields {
        match id {
            FunctionalId::Area => f.area = v,
            FunctionalId::Perimeter => f.perimeter = v,
            FunctionalId::Inradius => f.inradius = v,
            FunctionalId::Circumradius => f.circumradius = v,
            FunctionalId::Diameter => f.diameter = v,
            FunctionalId::Width => f.width = v,
        }
    }
    f
}

fn bound(id: BoundId, fields: &[(FunctionalId, f64)]) -> Option<f64> {
    bounds::evaluate(id, &partial(fields)).value()
}

fn implicit(fam: ImplicitFamily) -> Option<f64> {
    bounds::implicit_g(fam).and_then(|p| implicit_bound_value(&p)).ok()
}

/// Lower curve at `x` with its label, `None` where no bound is known.
pub fn lower_at(id: DiagramId, x: f64) -> Option<(f64, &'static str)> {
    use FunctionalId::*;
    if !id.admissible(x) {
        return None;
    }
    match id {
        DiagramId::D1Phr => Some((1.0 + PI / (x - PI), "stadium")),
        DiagramId::D2Rhr => implicit(ImplicitFamily::G2 { big_r: x, r: 1.0 }).map(|v| (v, "slice")),
        DiagramId::D3Dhr => {
            let label = if x < d0() { "smoothed_nonagon" } else { "slice" };
            implicit(ImplicitFamily::G1 { d: x, r: 1.0 }).map(|v| (v, label))
        }
        DiagramId::Hwd => implicit(ImplicitFamily::G3 { d: 1.0, w: x }).map(|v| (v, "slice")),
        DiagramId::HwrCirc => implicit(ImplicitFamily::G4 { w: x, big_r: 1.0 }).map(|v| (v, "slice")),
        DiagramId::Hwp => bound(BoundId::HwpLo, &[(Width, x), (Perimeter, 1.0)]).map(|v| (v, "stadium")),
        DiagramId::Hwa => bound(BoundId::HawLo, &[(Width, x), (Area, 1.0)]).map(|v| (v, "stadium")),
        DiagramId::Hrd => Some(((2.0 / x).max(4.0), "single_functional")),
        DiagramId::HwrIn => bound(BoundId::HwrLo, &[(Width, x), (Inradius, 1.0)]).map(|v| (v, "subequilateral_triangle")),
    }
}

/// Upper curve at `x` with its label, `None` where no bound is known.
pub fn upper_at(id: DiagramId, x: f64) -> Option<(f64, &'static str)> {
    use FunctionalId::*;
    if !id.admissible(x) {
        return None;
    }
    match id {
        DiagramId::D1Phr => Some((1.0 + (2.0 * PI / x).sqrt(), "two_cup")),
        DiagramId::D2Rhr => bound(BoundId::HrrUp, &[(Circumradius, x), (Inradius, 1.0)]).map(|v| (v, "two_cup")),
        DiagramId::D3Dhr => bound(BoundId::HdrUp, &[(Diameter, x), (Inradius, 1.0)]).map(|v| (v, "two_cup")),
        DiagramId::Hwd => {
            if x <= SQRT3 / 2.0 {
                bound(BoundId::HdwUpTri, &[(Width, x), (Diameter, 1.0)]).map(|v| (v, "subequilateral_triangle"))
            } else {
                bound(BoundId::HdwUpYam, &[(Width, x), (Diameter, 1.0)]).map(|v| (v, "explicit_bound"))
            }
        }
        DiagramId::HwrCirc => {
            if x <= 1.5 {
                bound(BoundId::HrwUpTri, &[(Width, x), (Circumradius, 1.0)]).map(|v| (v, "subequilateral_triangle"))
            } else {
                bound(BoundId::HrwUpExplicit, &[(Width, x), (Circumradius, 1.0)]).map(|v| (v, "explicit_bound"))
            }
        }
        DiagramId::Hwp => bound(BoundId::HwpUpTri, &[(Width, x), (Perimeter, 1.0)]).map(|v| (v, "subequilateral_triangle")),
        DiagramId::Hwa => bound(BoundId::HawUpTri, &[(Width, x), (Area, 1.0)]).map(|v| (v, "subequilateral_triangle")),
        DiagramId::Hrd => bound(BoundId::HrdUp, &[(Circumradius, x), (Diameter, 1.0)]).map(|v| (v, "subequilateral_triangle")),
        DiagramId::HwrIn => bound(BoundId::HwrUp, &[(Width, x), (Inradius, 1.0)]).map(|v| (v, "explicit_bound")),
    }
}

fn pieces(samples: Vec<(f64, Option<(f64, &'static str)>)>) -> Vec<Curve> {
    let mut out: Vec<Curve> = Vec::new();
    let mut open = false;
    for (x, s) in samples {
        match s {
            Some((y, label)) if y.is_finite() => {
                match out.last_mut() {
                    Some(c) if open && c.label == label => c.points.push([x, y]),
                    _ => out.push(Curve { label: label.to_string(), points: vec![[x, y]] }),
                }
                open = true;
            }
            _ => open = false,
        }
    }
    out
}

pub fn boundary(spec: &DiagramSpec) -> Result<Boundary> {
    spec.validate()?;
    let xs = spec.xs();
    if spec.id == DiagramId::D3Dhr {
        d0();
    }
    let lower = xs.par_iter().map(|&x| (x, lower_at(spec.id, x))).collect();
    let upper = xs.par_iter().map(|&x| (x, upper_at(spec.id, x))).collect();
    Ok(Boundary { lower: pieces(lower), upper: pieces(upper) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Outside,
    Unknown,
}

pub fn membership(id: DiagramId, x: f64, y: f64) -> Membership {
    if !id.admissible(x) || !y.is_finite() {
        return Membership::Outside;
    }
    let lo = lower_at(id, x).map(|v| v.0);
    let hi = upper_at(id, x).map(|v| v.0);
    let tol = |v: f64| MEMBERSHIP_TOL * v.abs().max(1.0);
    if lo.is_some_and(|l| y < l - tol(l)) || hi.is_some_and(|u| y > u + tol(u)) {
        return Membership::Outside;
    }
    if id.is_complete() {
        Membership::Inside
    } else {
        Membership::Unknown
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::InvalidParam(format!("unknown format {s:?}"))),
        }
    }
}

/// CSV rows `x,y,provenance`; curve points carry `lower:<label>` or `upper:<label>`.
pub fn render_csv(cloud: &[DiagramPoint], curves: Option<&Boundary>) -> String {
    let mut out = String::from("x,y,provenance\n");
    if let Some(b) = curves {
        for (side, set) in [("lower", &b.lower), ("upper", &b.upper)] {
            for c in set {
                for p in &c.points {
                    let _ = writeln!(out, "{:.16e},{:.16e},{side}:{}", p[0], p[1], c.label);
                }
            }
        }
    }
    for p in cloud {
        let _ = writeln!(out, "{:.16e},{:.16e},{}", p.x, p.y, p.provenance);
    }
    out
}

const W: f64 = 1000.0;
const H: f64 = 700.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 50.0); // left, right, top, bottom

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-12 * span {
        out.push(if t.abs() < 1e-12 * span { 0.0 } else { t });
        t += step;
    }
    out
}

fn label(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// SVG 1.1 plot, 1000×700 viewBox: dots for the cloud, polylines for curves.
pub fn render_svg(cloud: &[DiagramPoint], curves: Option<&Boundary>, title: &str) -> String {
    let mut xs: Vec<f64> = cloud.iter().map(|p| p.x).collect();
    let mut ys: Vec<f64> = cloud.iter().map(|p| p.y).collect();
    if let Some(b) = curves {
        for c in b.curves() {
            xs.extend(c.points.iter().map(|p| p[0]));
            ys.extend(c.points.iter().map(|p| p[1]));
        }
    }
    let range = |v: &[f64]| {
        let lo = v.iter().copied().filter(|x| x.is_finite()).fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo <= 1e-12 * lo.abs().max(1.0) {
            (lo - 0.5, hi + 0.5)
        } else {
            let pad = 0.03 * (hi - lo);
            (lo - pad, hi + pad)
        }
    };
    let (x0, x1) = range(&xs);
    let (y0, y1) = range(&ys);
    let (ml, mr, mt, mb) = MARGIN;
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (W - ml - mr);
    let py = |y: f64| H - mb - (y - y0) / (y1 - y0) * (H - mt - mb);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {W} {H}" width="{W}" height="{H}">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1" fill="none"><line x1="{ml}" y1="{}" x2="{}" y2="{}"/><line x1="{ml}" y1="{mt}" x2="{ml}" y2="{}"/></g>"#,
        H - mb,
        W - mr,
        H - mb,
        H - mb
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12" fill="black">"#);
    for t in nice_ticks(x0, x1) {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
            H - mb,
            H - mb + 5.0,
            H - mb + 20.0,
            label(t)
        );
    }
    for t in nice_ticks(y0, y1) {
        let y = py(t);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y:.2}" x2="{ml}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            ml - 5.0,
            ml - 8.0,
            y + 4.0,
            label(t)
        );
    }
    let _ = writeln!(s, "</g>");
    if let Some(b) = curves {
        for (color, set) in [("#1f5fbf", &b.lower), ("#bf1f1f", &b.upper)] {
            for c in set {
                let pts: Vec<String> = c.points.iter().map(|p| format!("{:.2},{:.2}", px(p[0]), py(p[1]))).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
                    pts.join(" "),
                    escape(&c.label)
                );
            }
        }
    }
    if !cloud.is_empty() {
        let _ = writeln!(s, r#"<g fill="black">"#);
        for p in cloud {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1"/>"#, px(p.x), py(p.y));
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(
    cloud: &[DiagramPoint],
    curves: Option<&Boundary>,
    format: Format,
    path: &Path,
) -> Result<()> {
    if cloud.is_empty() && curves.is_none_or(|b| b.curves().next().is_none()) {
        return Err(Error::InvalidParam("nothing to render".into()));
    }
    let text = match format {
        Format::Csv => render_csv(cloud, curves),
        Format::Svg => render_svg(cloud, curves, "diagram"),
    };
    std::fs::write(path, text)?;
    Ok(())
}
