//! Random convex polygons (Valtr's construction) and batch measurement.
//!
//! Record `i` of a cloud with master seed `s` uses its own ChaCha8 stream
//! seeded with [`mix`]`(s, i)`, so records can be generated in any order.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cheeger::cheeger_t;
use crate::error::{Error, Result};
use crate::functionals::{measure, FunctionalId, Functionals};
use crate::geom::{ConvexPolygon, Point};

pub type RngSeed = u64;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-record seed: `splitmix64(seed ^ splitmix64(i))`.
pub fn mix(seed: RngSeed, i: u64) -> RngSeed {
    splitmix64(seed ^ splitmix64(i))
}

/// Splits sorted coordinates into two monotone chains and returns the
/// increments of the closed walk min → max → min.
fn increments(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    c.sort_by(f64::total_cmp);
    let (lo, hi) = (c[0], c[n - 1]);
    let mut out = Vec::with_capacity(n);
    let (mut last_a, mut last_b) = (lo, lo);
    for &v in &c[1..n - 1] {
        if rng.gen::<bool>() {
            out.push(v - last_a);
            last_a = v;
        } else {
            out.push(last_b - v);
            last_b = v;
        }
    }
    out.push(hi - last_a);
    out.push(last_b - hi);
    out
}

fn valtr_attempt(rng: &mut ChaCha8Rng, n: usize) -> Option<ConvexPolygon> {
    let xs = increments(rng, n);
    let mut ys = increments(rng, n);
    ys.shuffle(rng);
    let mut vecs: Vec<Point> = xs.iter().zip(&ys).map(|(&x, &y)| Point::new(x, y)).collect();
    vecs.sort_by(|a, b| a.angle().total_cmp(&b.angle()).then(a.norm().total_cmp(&b.norm())));
    let mut pts = Vec::with_capacity(n);
    let mut cur = Point::default();
    for v in &vecs {
        pts.push(cur);
        cur = cur + *v;
    }
    // shift into the unit square
    let min_x = pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let min_y = pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let max_x = pts.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    let max_y = pts.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let shift = Point::new(-min_x, -min_y);
    let pts: Vec<Point> = pts.into_iter().map(|p| p + shift).collect();
    if max_x - min_x > 1.0 || max_y - min_y > 1.0 {
        return None;
    }
    let start = (0..n)
        .min_by(|&i, &j| pts[i].y.total_cmp(&pts[j].y).then(pts[i].x.total_cmp(&pts[j].x)))
        .expect("n >= 3");
    let mut ordered = pts;
    ordered.rotate_left(start);
    ConvexPolygon::new(ordered).ok().filter(|p| p.len() == n)
}

pub fn valtr_with_rng(n: usize, rng: &mut ChaCha8Rng) -> Result<ConvexPolygon> {
    if n < 3 {
        return Err(Error::InvalidParam(format!("need at least 3 vertices, got {n}")));
    }
    // parallel increments (a measure-zero event in exact arithmetic) can make
    // a vertex collinear; redraw in that case
    loop {
        if let Some(p) = valtr_attempt(rng, n) {
            return Ok(p);
        }
    }
}

/// Random convex `n`-gon in the unit square; deterministic in `(n, seed)`.
pub fn valtr(n: usize, seed: RngSeed) -> Result<ConvexPolygon> {
    valtr_with_rng(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Normalization {
    #[serde(rename = "unit-area")]
    UnitArea,
    #[serde(rename = "unit-inradius")]
    UnitInradius,
    #[serde(rename = "unit-diameter")]
    UnitDiameter,
    #[serde(rename = "none")]
    None,
}

impl Normalization {
    pub fn functional(self) -> Option<FunctionalId> {
        match self {
            Normalization::UnitArea => Some(FunctionalId::Area),
            Normalization::UnitInradius => Some(FunctionalId::Inradius),
            Normalization::UnitDiameter => Some(FunctionalId::Diameter),
            Normalization::None => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Normalization::UnitArea => "unit-area",
            Normalization::UnitInradius => "unit-inradius",
            Normalization::UnitDiameter => "unit-diameter",
            Normalization::None => "none",
        }
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit-area" => Ok(Normalization::UnitArea),
            "unit-inradius" => Ok(Normalization::UnitInradius),
            "unit-diameter" => Ok(Normalization::UnitDiameter),
            "none" => Ok(Normalization::None),
            _ => Err(Error::InvalidParam(format!("unknown normalization {s:?}"))),
        }
    }
}

/// Scales `poly` about the origin so the tagged functional equals 1.
pub fn normalize(poly: &ConvexPolygon, tag: Normalization) -> ConvexPolygon {
    match tag.functional() {
        None => poly.clone(),
        Some(id) => {
            let v = measure(poly).get(id);
            poly.scale(1.0 / v.powf(1.0 / id.degree() as f64))
        }
    }
}

/// Diagram axes: `x` is a functional, `y` is `h`, both made scale-free by
/// the normalizing functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triplet {
    pub x: FunctionalId,
    pub norm: FunctionalId,
}

impl Triplet {
    pub fn new(x: FunctionalId, norm: FunctionalId) -> Self {
        Triplet { x, norm }
    }

    /// `(J_x / J_n^{deg x / deg n}, h · J_n^{1 / deg n})`.
    pub fn coords(&self, f: &Functionals, h: f64) -> (f64, f64) {
        let jn = f.get(self.norm);
        let dn = self.norm.degree() as f64;
        let x = f.get(self.x) / jn.powf(self.x.degree() as f64 / dn);
        (x, h * jn.powf(1.0 / dn))
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},h,{}", self.x.symbol(), self.norm.symbol())
    }
}

pub(crate) fn functional_from_symbol(s: &str) -> Result<FunctionalId> {
    Ok(match s {
        "A" => FunctionalId::Area,
        "P" => FunctionalId::Perimeter,
        "r" => FunctionalId::Inradius,
        "R" => FunctionalId::Circumradius,
        "d" => FunctionalId::Diameter,
        "w" => FunctionalId::Width,
        _ => return Err(Error::InvalidParam(format!("unknown functional {s:?}"))),
    })
}

impl FromStr for Triplet {
    type Err = Error;

    /// Parses `"P,h,r"`: abscissa, `h`, normalizing functional.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match parts.as_slice() {
            [x, "h", n] => Ok(Triplet::new(functional_from_symbol(x)?, functional_from_symbol(n)?)),
            _ => Err(Error::InvalidParam(format!("triplet must look like \"P,h,r\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub seed: RngSeed,
    pub vertex_count: usize,
    pub functionals: Functionals,
    pub normalization: Normalization,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudParams {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub tag: Normalization,
    pub triplet: Triplet,
    pub seed: RngSeed,
}

fn record(p: &CloudParams, index: u64) -> Result<SampleRecord> {
    let seed = mix(p.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(p.n_min..=p.n_max);
    let poly = normalize(&valtr_with_rng(n, &mut rng)?, p.tag);
    let h = 1.0 / cheeger_t(&poly);
    let f = measure(&poly).with_h(h);
    let (x, y) = p.triplet.coords(&f, h);
    Ok(SampleRecord { index, seed, vertex_count: n, functionals: f, normalization: p.tag, x, y })
}

/// Measured records in index order; runs on the current rayon pool.
pub fn sample_records(p: &CloudParams) -> Result<Vec<SampleRecord>> {
    if p.count == 0 || p.n_min < 3 || p.n_min > p.n_max {
        return Err(Error::InvalidParam(format!(
            "need count >= 1 and 3 <= n_min <= n_max, got count {}, n in [{}, {}]",
            p.count, p.n_min, p.n_max
        )));
    }
    (0..p.count as u64).into_par_iter().map(|i| record(p, i)).collect()
}

/// The cloud as diagram points, provenance `seed:<seed>`.
pub fn sample_cloud(p: &CloudParams) -> Result<Vec<crate::diagrams::DiagramPoint>> {
    Ok(sample_records(p)?
        .into_iter()
        .map(|r| crate::diagrams::DiagramPoint {
            x: r.x,
            y: r.y,
            provenance: format!("seed:{}", r.seed),
        })
        .collect())
}

/// CSV with columns `index,seed,n,A,P,r,R,d,w,h,x,y`.
pub fn cloud_csv(records: &[SampleRecord]) -> String {
    let mut out = String::from("index,seed,n,A,P,r,R,d,w,h,x,y\n");
    for r in records {
        let f = &r.functionals;
        let vals = [
            f.area,
            f.perimeter,
            f.inradius,
            f.circumradius,
            f.diameter,
            f.width,
            f.h.unwrap_or(f64::NAN),
            r.x,
            r.y,
        ];
        out.push_str(&format!("{},{},{}", r.index, r.seed, r.vertex_count));
        for v in vals {
            out.push_str(&format!(",{v:.16e}"));
        }
        out.push('\n');
    }
    out
}
