//! Bounds on the Cheeger constant in terms of two geometric functionals,
//! the auxiliary area functions they are built from, and the constants
//! `D*` and `D₀`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::cheeger::{implicit_bound_value, ImplicitRootProblem};
use crate::error::{Error, Result};
use crate::functionals::{FunctionalId, Functionals};
use crate::shapes::{build, subequilateral_match, Resolution, ShapeSpec};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping when the
/// bracket is narrower than `rel · max(|lo|, |hi|)`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rel: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if (flo < 0.0) == (fhi < 0.0) || flo.is_nan() || fhi.is_nan() {
        return None;
    }
    let scale = lo.abs().max(hi.abs());
    for _ in 0..400 {
        if hi - lo <= rel * scale {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

fn domain(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::DomainError(msg()))
    }
}

// ψ's two branches at inradius r; the first is the smoothed-nonagon area,
// the second the slice area.
fn psi_nonagon(d: f64, r: f64) -> f64 {
    1.5 * SQRT3 * r * ((d * d - 3.0 * r * r).max(0.0).sqrt() - r)
        + 1.5 * d * d * (PI / 3.0 - clamp_unit(SQRT3 * r / d).acos())
}

fn psi_slice(d: f64, r: f64) -> f64 {
    r * (d * d - 4.0 * r * r).max(0.0).sqrt() + 0.5 * d * d * clamp_unit(2.0 * r / d).asin()
}

fn psi_raw(d: f64, r: f64) -> f64 {
    if r <= 0.0 || d <= 0.0 {
        return 0.0;
    }
    let d = d.max(2.0 * r);
    if d <= r * dstar() {
        psi_nonagon(d, r)
    } else {
        psi_slice(d, r)
    }
}

/// Largest area of a convex body with diameter `d` and inradius `r`.
pub fn psi(d: f64, r: f64) -> Result<f64> {
    domain(r > 0.0 && d >= 2.0 * r && d.is_finite(), || {
        format!("psi needs d >= 2r > 0, got d = {d}, r = {r}")
    })?;
    Ok(psi_raw(d, r))
}

fn chi_raw(w: f64, big_r: f64) -> f64 {
    if w <= 0.0 || big_r <= 0.0 {
        return 0.0;
    }
    let w = w.min(2.0 * big_r);
    0.5 * w * (4.0 * big_r * big_r - w * w).max(0.0).sqrt()
        + 2.0 * big_r * big_r * clamp_unit(w / (2.0 * big_r)).asin()
}

/// Area of the slice of width `omega` in a disk of radius `big_r`: the largest
/// area for given width and circumradius.
pub fn chi(omega: f64, big_r: f64) -> Result<f64> {
    domain(omega > 0.0 && omega <= 2.0 * big_r && big_r.is_finite(), || {
        format!("chi needs 0 < omega <= 2R, got omega = {omega}, R = {big_r}")
    })?;
    Ok(chi_raw(omega, big_r))
}

fn phi_raw(big_r: f64, r: f64) -> f64 {
    if r <= 0.0 || big_r <= 0.0 {
        return 0.0;
    }
    let r = r.min(big_r);
    2.0 * (r * (big_r * big_r - r * r).max(0.0).sqrt() + big_r * big_r * clamp_unit(r / big_r).asin())
}

/// Largest area for given circumradius and inradius.
pub fn phi(big_r: f64, r: f64) -> Result<f64> {
    domain(r > 0.0 && r <= big_r && big_r.is_finite(), || {
        format!("phi needs 0 < r <= R, got R = {big_r}, r = {r}")
    })?;
    Ok(phi_raw(big_r, r))
}

/// Largest area for given diameter and width, `χ(w, d/2)`.
pub fn f_dw(d: f64, w: f64) -> Result<f64> {
    chi(w, d / 2.0)
}

/// Inverse of `sin(y)/y` on `[0, π)`.
pub fn arcsinc(x: f64) -> Result<f64> {
    domain(x > 0.0 && x <= 1.0, || format!("arcsinc needs x in (0, 1], got {x}"))?;
    if x == 1.0 {
        return Ok(0.0);
    }
    let sinc = |y: f64| if y == 0.0 { 1.0 } else { y.sin() / y };
    let (mut lo, mut hi) = (0.0f64, PI);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if sinc(mid) > x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The diameter-to-inradius ratio at which the two branches of ψ meet.
pub fn dstar() -> f64 {
    static D: OnceLock<f64> = OnceLock::new();
    *D.get_or_init(|| {
        // the branches also agree at 2 (both are the disk), so stay clear of it
        bisect(|x| psi_nonagon(x, 1.0) - psi_slice(x, 1.0), 2.05, 2.0 * SQRT3, 1e-16)
            .expect("branches cross on (2, 2√3)")
    })
}

const D0_TOL: f64 = 1e-10;

/// `D₀` at the default resolution of 8192 arc segments.
pub fn d0() -> f64 {
    d0_at(Resolution::new(8192).expect("valid"))
}

/// Ratio `d/r` below which smoothed nonagons, rather than slices, give the
/// lower boundary of the (d, h, r) diagram. Computed from measured Cheeger
/// constants of nonagons built at `res`; memoized per resolution.
pub fn d0_at(res: Resolution) -> f64 {
    static MEMO: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = memo.lock().expect("d0 memo").get(&res.get()) {
        return v;
    }
    let ds = dstar();
    let v = bisect(|x| d0_residual(x, res), 2.0 + 1e-9, ds - 1e-9, D0_TOL)
        .expect("d0 residual changes sign on (2, D*)");
    *memo.lock().expect("d0 memo").entry(res.get()).or_insert(v)
}

/// `(D* − x)/(D* − 2) − 1/h(N₁,ₓ)`.
pub fn d0_residual(x: f64, res: Resolution) -> f64 {
    let ds = dstar();
    let poly = build(&ShapeSpec::SmoothedNonagon { r: 1.0, d: x }, res).expect("x in (2, 2√3)");
    (ds - x) / (ds - 2.0) - crate::cheeger::cheeger_t(&poly)
}

/// The four implicit families `gᵢ(t) = πt²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ImplicitFamily {
    /// diameter and inradius
    G1 { d: f64, r: f64 },
    /// circumradius and inradius
    G2 { big_r: f64, r: f64 },
    /// diameter and width
    G3 { d: f64, w: f64 },
    /// width and circumradius
    G4 { w: f64, big_r: f64 },
}

pub fn implicit_g(family: ImplicitFamily) -> Result<ImplicitRootProblem> {
    let bad = || Error::DomainError(format!("parameters outside the domain of {family:?}"));
    let fin = |v: &[f64]| v.iter().all(|x| x.is_finite() && *x > 0.0);
    Ok(match family {
        ImplicitFamily::G1 { d, r } => {
            if !(fin(&[d, r]) && d >= 2.0 * r) {
                return Err(bad());
            }
            ImplicitRootProblem::new(move |t| psi_raw(d - 2.0 * t, r - t), r)
        }
        ImplicitFamily::G2 { big_r, r } => {
            if !(fin(&[big_r, r]) && big_r >= r) {
                return Err(bad());
            }
            ImplicitRootProblem::new(move |t| phi_raw(big_r - t, r - t), r)
        }
        ImplicitFamily::G3 { d, w } => {
            if !(fin(&[d, w]) && d >= w) {
                return Err(bad());
            }
            ImplicitRootProblem::new(move |t| chi_raw(w - 2.0 * t, (d - 2.0 * t) / 2.0), w / 2.0)
        }
        ImplicitFamily::G4 { w, big_r } => {
            if !(fin(&[w, big_r]) && 2.0 * big_r >= w) {
                return Err(bad());
            }
            ImplicitRootProblem::new(move |t| chi_raw(w - 2.0 * t, big_r - t), w / 2.0)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        })
    }
}

macro_rules! bound_ids {
    ($($v:ident = $name:literal, $dir:ident, $cond:literal, $formula:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum BoundId {
            $(#[serde(rename = $name)] $v,)*
        }

        impl BoundId {
            pub const ALL: &'static [BoundId] = &[$(BoundId::$v,)*];

            pub fn name(self) -> &'static str {
                match self { $(BoundId::$v => $name,)* }
            }

            pub fn direction(self) -> Direction {
                match self { $(BoundId::$v => Direction::$dir,)* }
            }

            /// Applicability condition, empty when always applicable.
            pub fn condition(self) -> &'static str {
                match self { $(BoundId::$v => $cond,)* }
            }

            pub fn formula(self) -> &'static str {
                match self { $(BoundId::$v => $formula,)* }
            }

            pub fn from_name(s: &str) -> Option<BoundId> {
                match s { $($name => Some(BoundId::$v),)* _ => None }
            }
        }
    };
}

bound_ids! {
    HraLo = "HRA_LO", Lower, "", "1/r + pi r/A";
    HraUp = "HRA_UP", Upper, "", "1/r + sqrt(pi/A)";
    HpaLo = "HPA_LO", Lower, "", "(P + sqrt(4 pi A))/(2A)";
    HpaUp = "HPA_UP", Upper, "", "P/A";
    OneqA = "ONEQ_A", Lower, "", "2 sqrt(pi/A)";
    OneqP = "ONEQ_P", Lower, "", "4 pi/P";
    OneqD = "ONEQ_D", Lower, "", "4/d";
    OneqRLo = "ONEQ_R_LO", Lower, "", "2/R";
    OneqRUp2 = "ONEQ_R_UP2", Upper, "", "2/r";
    OneqInrLo = "ONEQ_INR_LO", Lower, "", "1/r";
    HrpLo = "HRP_LO", Lower, "", "1/r + pi/(P - pi r)";
    HrpUp = "HRP_UP", Upper, "", "1/r + sqrt(2 pi/(P r))";
    HdrUp = "HDR_UP", Upper, "", "1/r + sqrt(pi/(r sqrt(d^2-4r^2) + r^2 (pi - 2 acos(2r/d))))";
    HdrLoImplicit = "HDR_LO_IMPLICIT", Lower, "", "1/t, psi(d-2t, r-t) = pi t^2";
    HdrLoExplicit = "HDR_LO_EXPLICIT", Lower, "", "(4-pi)/(d + 2r - sqrt((d+2r)^2 - 2(4-pi) d r))";
    HrrLoImplicit = "HRR_LO_IMPLICIT", Lower, "", "1/t, phi(R-t, r-t) = pi t^2";
    HrrUp = "HRR_UP", Upper, "", "1/r + sqrt(pi/(2r (sqrt(R^2-r^2) + r asin(r/R))))";
    HrrLoExplicit = "HRR_LO_EXPLICIT", Lower, "", "(4-pi)/(2(R+r) - sqrt(4(R+r)^2 - 4(4-pi) R r))";
    HdwLoImplicit = "HDW_LO_IMPLICIT", Lower, "", "1/t, chi(w-2t, (d-2t)/2) = pi t^2";
    HdwUpTri = "HDW_UP_TRI", Upper, "w <= sqrt(3)/2 d", "h(T), T subequilateral with w(T) = w, d(T) = d";
    HdwUpYam = "HDW_UP_YAM", Upper, "sqrt(3)/2 d <= w <= d", "sqrt(3)/(sqrt(3) w - d) + sqrt(2 pi/(pi w^2 - sqrt(3) d^2 + 6 w^2 (tan a - a))), a = acos(w/d)";
    HdwLoExplicit = "HDW_LO_EXPLICIT", Lower, "", "1/w + 1/d + sqrt((1/w + 1/d)^2 - (4-pi)/(w d))";
    HrwLoImplicit = "HRW_LO_IMPLICIT", Lower, "", "1/t, chi(w-2t, R-t) = pi t^2";
    HrwUpTri = "HRW_UP_TRI", Upper, "w <= 3/2 R", "h(T), T subequilateral with w(T) = w, R(T) = R";
    HrwUpExplicit = "HRW_UP_EXPLICIT", Upper, "", "3/w + sqrt(2 pi/(sqrt(3) R w))";
    HrwLoExplicit = "HRW_LO_EXPLICIT", Lower, "", "(4-pi)/((2R+w) - sqrt((2R+w)^2 - 2(4-pi) R w))";
    HawLo = "HAW_LO", Lower, "", "2/w + pi w/(2A)";
    HawUpTri = "HAW_UP_TRI", Upper, "", "h(T), T subequilateral with w(T) = w, A(T) = A";
    HawUp1 = "HAW_UP1", Upper, "", "2/w + w/(sqrt(3) A) + sqrt(pi/A)";
    HawUp2 = "HAW_UP2", Upper, "", "2/(w - w^3/(4A)) + sqrt(pi/A)";
    HwpLo = "HWP_LO", Lower, "", "2/w + 2 pi/(2P - pi w)";
    HwpUpTri = "HWP_UP_TRI", Upper, "P >= 2 sqrt(3) w", "h(T), T subequilateral with w(T) = w, P(T) = P";
    HrdUp = "HRD_UP", Upper, "d < 2R", "2R(2R + s)/(d^2 s) + sqrt(4 pi R^2/(d^3 s)), s = sqrt(4R^2 - d^2)";
    HwrLo = "HWR_LO", Lower, "", "1/r + (1/r) sqrt(pi (1 - 2r/w) sqrt(4r/w - 1))";
    HwrUp = "HWR_UP", Upper, "", "1/r + sqrt(pi sqrt(3))/w";
    RhaUp = "RHA_UP", Upper, "", "1/R + 4R/A";
    RhaLo = "RHA_LO", Lower, "", "1/(2R) + pi R/(2A) + sqrt(pi/A)";
    PhrUp = "PHR_UP", Upper, "P > 4R", "P/(R(P - 4R))";
    PhrLo = "PHR_LO", Lower, "", "4a/(P - 4R cos a) + sqrt(8 pi a/(P (P - 4R cos a))), a = arcsinc(4R/P)";
    PhdUp1 = "PHD_UP1", Upper, "2d < P <= 3d", "4/(P - 2d) + sqrt(4 pi/((P - 2d) sqrt(P (4d - P))))";
    PhdUp2 = "PHD_UP2", Upper, "3d <= P <= pi d", "4/(P - 2d) + sqrt(4 pi/(sqrt(3) d (P - 2d)))";
    PhdLo = "PHD_LO", Lower, "", "4a/(P - 2d cos a) + sqrt(8 pi a/(P (P - 2d cos a))), a = arcsinc(2d/P)";
    DhaUp1 = "DHA_UP1", Upper, "", "4/d + 2d/A";
    DhaUp2 = "DHA_UP2", Upper, "", "2d/A + sqrt(pi/A)";
    DhaLo = "DHA_LO", Lower, "", "d/A + sqrt(pi/A)";
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum BoundValue {
    Value(f64),
    NotApplicable,
    NoRoot,
}

impl BoundValue {
    pub fn value(self) -> Option<f64> {
        match self {
            BoundValue::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub id: BoundId,
    pub direction: Direction,
    pub value: BoundValue,
    pub slack: Option<f64>,
}

fn finite(v: f64) -> BoundValue {
    if v.is_finite() {
        BoundValue::Value(v)
    } else {
        BoundValue::NotApplicable
    }
}

fn when(cond: bool, v: impl FnOnce() -> f64) -> BoundValue {
    if cond {
        finite(v())
    } else {
        BoundValue::NotApplicable
    }
}

fn implicit(family: ImplicitFamily) -> BoundValue {
    match implicit_g(family).and_then(|p| implicit_bound_value(&p)) {
        Ok(v) => finite(v),
        Err(Error::NoRoot) => BoundValue::NoRoot,
        Err(_) => BoundValue::NotApplicable,
    }
}

fn triangle(fixed: (FunctionalId, f64), w: f64) -> BoundValue {
    match subequilateral_match((FunctionalId::Width, w), fixed) {
        Ok(t) => t.h.map_or(BoundValue::NotApplicable, finite),
        Err(_) => BoundValue::NotApplicable,
    }
}

/// Value of one bound at the given functionals.
pub fn evaluate(id: BoundId, f: &Functionals) -> BoundValue {
    let (a, p, r, big_r, d, w) = (f.area, f.perimeter, f.inradius, f.circumradius, f.diameter, f.width);
    let k = 4.0 - PI;
    match id {
        BoundId::HraLo => finite(1.0 / r + PI * r / a),
        BoundId::HraUp => finite(1.0 / r + (PI / a).sqrt()),
        BoundId::HpaLo => finite((p + (4.0 * PI * a).sqrt()) / (2.0 * a)),
        BoundId::HpaUp => finite(p / a),
        BoundId::OneqA => finite(2.0 * (PI / a).sqrt()),
        BoundId::OneqP => finite(4.0 * PI / p),
        BoundId::OneqD => finite(4.0 / d),
        BoundId::OneqRLo => finite(2.0 / big_r),
        BoundId::OneqRUp2 => finite(2.0 / r),
        BoundId::OneqInrLo => finite(1.0 / r),
        BoundId::HrpLo => when(p > PI * r, || 1.0 / r + PI / (p - PI * r)),
        BoundId::HrpUp => finite(1.0 / r + (2.0 * PI / (p * r)).sqrt()),
        BoundId::HdrUp => when(d >= 2.0 * r, || {
            let base = r * (d * d - 4.0 * r * r).max(0.0).sqrt()
                + r * r * (PI - 2.0 * clamp_unit(2.0 * r / d).acos());
            1.0 / r + (PI / base).sqrt()
        }),
        BoundId::HdrLoImplicit => implicit(ImplicitFamily::G1 { d, r }),
        BoundId::HdrLoExplicit => {
            let s = d + 2.0 * r;
            finite(k / (s - (s * s - 2.0 * k * d * r).sqrt()))
        }
        BoundId::HrrLoImplicit => implicit(ImplicitFamily::G2 { big_r, r }),
        BoundId::HrrUp => when(big_r >= r, || {
            let q = (big_r * big_r - r * r).max(0.0).sqrt() + r * clamp_unit(r / big_r).asin();
            1.0 / r + (PI / (2.0 * r * q)).sqrt()
        }),
        BoundId::HrrLoExplicit => {
            let s = big_r + r;
            finite(k / (2.0 * s - (4.0 * s * s - 4.0 * k * big_r * r).sqrt()))
        }
        BoundId::HdwLoImplicit => implicit(ImplicitFamily::G3 { d, w }),
        BoundId::HdwUpTri => {
            if w <= SQRT3 / 2.0 * d {
                triangle((FunctionalId::Diameter, d), w)
            } else {
                BoundValue::NotApplicable
            }
        }
        BoundId::HdwUpYam => when(SQRT3 / 2.0 * d <= w && w <= d, || {
            let th = clamp_unit(w / d).acos();
            SQRT3 / (SQRT3 * w - d)
                + (2.0 * PI / (PI * w * w - SQRT3 * d * d + 6.0 * w * w * (th.tan() - th))).sqrt()
        }),
        BoundId::HdwLoExplicit => {
            let s = 1.0 / w + 1.0 / d;
            finite(s + (s * s - k / (w * d)).sqrt())
        }
        BoundId::HrwLoImplicit => implicit(ImplicitFamily::G4 { w, big_r }),
        BoundId::HrwUpTri => {
            if w <= 1.5 * big_r {
                triangle((FunctionalId::Circumradius, big_r), w)
            } else {
                BoundValue::NotApplicable
            }
        }
        BoundId::HrwUpExplicit => finite(3.0 / w + (2.0 * PI / (SQRT3 * big_r * w)).sqrt()),
        BoundId::HrwLoExplicit => {
            let s = 2.0 * big_r + w;
            finite(k / (s - (s * s - 2.0 * k * big_r * w).sqrt()))
        }
        BoundId::HawLo => finite(2.0 / w + PI * w / (2.0 * a)),
        BoundId::HawUpTri => triangle((FunctionalId::Area, a), w),
        BoundId::HawUp1 => finite(2.0 / w + w / (SQRT3 * a) + (PI / a).sqrt()),
        BoundId::HawUp2 => when(w * w < 4.0 * a, || 2.0 / (w - w.powi(3) / (4.0 * a)) + (PI / a).sqrt()),
        BoundId::HwpLo => finite(2.0 / w + 2.0 * PI / (2.0 * p - PI * w)),
        BoundId::HwpUpTri => {
            if p >= 2.0 * SQRT3 * w {
                triangle((FunctionalId::Perimeter, p), w)
            } else {
                BoundValue::NotApplicable
            }
        }
        BoundId::HrdUp => when(d < 2.0 * big_r, || {
            let s = (4.0 * big_r * big_r - d * d).sqrt();
            2.0 * big_r * (2.0 * big_r + s) / (d * d * s) + (4.0 * PI * big_r * big_r / (d.powi(3) * s)).sqrt()
        }),
        BoundId::HwrLo => {
            let x = r / w;
            finite(1.0 / r + (PI * (1.0 - 2.0 * x).max(0.0) * (4.0 * x - 1.0).max(0.0).sqrt()).sqrt() / r)
        }
        BoundId::HwrUp => finite(1.0 / r + (PI * SQRT3).sqrt() / w),
        BoundId::RhaUp => finite(1.0 / big_r + 4.0 * big_r / a),
        BoundId::RhaLo => finite(1.0 / (2.0 * big_r) + PI * big_r / (2.0 * a) + (PI / a).sqrt()),
        BoundId::PhrUp => when(p > 4.0 * big_r, || p / (big_r * (p - 4.0 * big_r))),
        BoundId::PhrLo => arcsinc_bound(p, 4.0 * big_r),
        BoundId::PhdUp1 => when(2.0 * d < p && p <= 3.0 * d, || {
            4.0 / (p - 2.0 * d) + (4.0 * PI / ((p - 2.0 * d) * (p * (4.0 * d - p)).sqrt())).sqrt()
        }),
        BoundId::PhdUp2 => when(3.0 * d <= p && p <= PI * d, || {
            4.0 / (p - 2.0 * d) + (4.0 * PI / (SQRT3 * d * (p - 2.0 * d))).sqrt()
        }),
        BoundId::PhdLo => arcsinc_bound(p, 2.0 * d),
        BoundId::DhaUp1 => finite(4.0 / d + 2.0 * d / a),
        BoundId::DhaUp2 => finite(2.0 * d / a + (PI / a).sqrt()),
        BoundId::DhaLo => finite(d / a + (PI / a).sqrt()),
    }
}

/// `4a/(P − L cos a) + √(8πa/(P(P − L cos a)))` with `a = arcsinc(L/P)`.
fn arcsinc_bound(p: f64, l: f64) -> BoundValue {
    match arcsinc(l / p) {
        Ok(a) => {
            let den = p - l * a.cos();
            finite(4.0 * a / den + (8.0 * PI * a / (p * den)).sqrt())
        }
        Err(_) => BoundValue::NotApplicable,
    }
}

/// Every registered bound at `f`, with slack against `f.h` when known.
pub fn evaluate_all(f: &Functionals) -> Vec<BoundResult> {
    BoundId::ALL
        .iter()
        .map(|&id| {
            let value = evaluate(id, f);
            let slack = match (f.h, value) {
                (Some(h), BoundValue::Value(v)) if h.is_finite() => Some(match id.direction() {
                    Direction::Lower => h - v,
                    Direction::Upper => v - h,
                }),
                _ => None,
            };
            BoundResult { id, direction: id.direction(), value, slack }
        })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Registry export with columns `id,direction,condition,formula_id,value,slack`.
pub fn registry_csv(results: &[BoundResult]) -> String {
    let mut out = String::from("id,direction,condition,formula_id,value,slack\n");
    for b in results {
        let value = match b.value {
            BoundValue::Value(v) => format!("{v:.16e}"),
            BoundValue::NotApplicable => "NotApplicable".into(),
            BoundValue::NoRoot => "NoRoot".into(),
        };
        let slack = b.slack.map_or(String::new(), |s| format!("{s:.16e}"));
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            b.id,
            b.direction,
            csv_field(b.id.condition()),
            csv_field(b.id.formula()),
            value,
            slack
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubeqKind {
    AreaFrom,
    PerimFrom,
}

/// Largest area (or perimeter) of a body with width `omega` and inradius `r`,
/// attained by subequilateral triangles; increasing on `[ω/3, ω/2)`.
pub fn subeq_forward(kind: SubeqKind, omega: f64, r: f64) -> f64 {
    let den = (omega - 2.0 * r).powi(2) * (4.0 * r - omega);
    match kind {
        SubeqKind::AreaFrom => (r.powi(4) * omega.powi(3) / den).sqrt(),
        SubeqKind::PerimFrom => (4.0 * r * r * omega.powi(3) / den).sqrt(),
    }
}

/// The inradius `r ∈ [ω/3, ω/2)` with `subeq_forward(kind, ω, r) = x`.
pub fn subeq_inverse(kind: SubeqKind, omega: f64, x: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::OutOfRange(format!("width must be positive, got {omega}")));
    }
    let lo = omega / 3.0;
    let f0 = subeq_forward(kind, omega, lo);
    if !(x.is_finite() && x >= f0 * (1.0 - 1e-14)) {
        return Err(Error::OutOfRange(format!(
            "{x} below the minimum {f0} over [w/3, w/2)"
        )));
    }
    if x <= f0 {
        return Ok(lo);
    }
    // f blows up at ω/2; pull the right end in until it clears x
    let mut gap = omega / 6.0;
    let mut hi = omega / 2.0 - gap;
    while subeq_forward(kind, omega, hi) < x {
        gap *= 0.5;
        hi = omega / 2.0 - gap;
        if gap < omega * 1e-300 {
            return Err(Error::OutOfRange(format!("{x} too large")));
        }
    }
    bisect(|r| subeq_forward(kind, omega, r) - x, lo, hi, 1e-15)
        .ok_or_else(|| Error::OutOfRange(format!("{x} not bracketed")))
}

/// Inradius of the subequilateral triangle with width `w` and circumradius
/// `big_r`, from `(4r − ω)(ω − 2r) = 2r³/R`. Needs `w <= 3R/2`.
pub fn subeq_r_from_width_circumradius(w: f64, big_r: f64) -> Result<f64> {
    endpoint_root(|r| (4.0 * r - w) * (w - 2.0 * r) - 2.0 * r.powi(3) / big_r, w, w * w)
        .ok_or_else(|| Error::OutOfRange(format!("no inradius for w = {w}, R = {big_r}")))
}

/// Inradius of the subequilateral triangle with width `w` and diameter `d`,
/// from `d²(ω − 2r)²(4r − ω) = 4r⁴ω`. Needs `w <= √3 d/2`.
pub fn subeq_r_from_width_diameter(w: f64, d: f64) -> Result<f64> {
    endpoint_root(
        |r| d * d * (w - 2.0 * r).powi(2) * (4.0 * r - w) - 4.0 * r.powi(4) * w,
        w,
        w.powi(5),
    )
    .ok_or_else(|| Error::OutOfRange(format!("no inradius for w = {w}, d = {d}")))
}

/// Root of `f` on `[ω/3, ω/2]`, where `f(ω/2) < 0`; the equilateral case puts
/// it on the left end, where rounding may flip the sign.
fn endpoint_root(f: impl Fn(f64) -> f64, w: f64, scale: f64) -> Option<f64> {
    let lo = w / 3.0;
    let f0 = f(lo);
    if f0 <= 0.0 && f0.abs() <= 1e-13 * scale {
        return Some(lo);
    }
    bisect(f, lo, w / 2.0, 1e-15)
}

/// Positive real roots of `c₃x³ + c₂x² + c₁x + c₀`, ascending.
fn cubic_positive_roots(c: [f64; 4]) -> Vec<f64> {
    let [c3, c2, c1, c0] = c;
    let eval = |x: f64| ((c3 * x + c2) * x + c1) * x + c0;
    let bound = 1.0 + [c2, c1, c0].iter().map(|v| (v / c3).abs()).fold(0.0, f64::max);
    let (qa, qb, qc) = (3.0 * c3, 2.0 * c2, c1);
    let disc = qb * qb - 4.0 * qa * qc;
    let mut cuts = vec![0.0];
    if disc > 0.0 {
        let s = disc.sqrt();
        let mut crit = [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)];
        crit.sort_by(f64::total_cmp);
        cuts.extend(crit.iter().copied().filter(|&x| x > 0.0 && x < bound));
    }
    cuts.push(bound);
    cuts.windows(2)
        .filter_map(|iv| bisect(eval, iv[0], iv[1], 1e-15))
        .filter(|&x| x > 0.0)
        .collect()
}

/// Area of the subequilateral triangle with width `w` and perimeter `p`: the
/// middle positive root of
/// `128 P A³ − 16ω(5P² + ω²) A² + 16ω²P³ A − ω³P⁴ = 0`.
pub fn subeq_area_from_width_perimeter(w: f64, p: f64) -> Result<f64> {
    let roots = cubic_positive_roots([
        128.0 * p,
        -16.0 * w * (5.0 * p * p + w * w),
        16.0 * w * w * p.powi(3),
        -w.powi(3) * p.powi(4),
    ]);
    if roots.len() < 3 {
        return Err(Error::OutOfRange(format!(
            "area cubic has {} positive roots for w = {w}, P = {p}",
            roots.len()
        )));
    }
    Ok(roots[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::closed_form;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn ball() -> Functionals {
        closed_form(&ShapeSpec::Ball { radius: 1.0 }).unwrap()
    }

    #[test]
    fn psi_examples() {
        assert!(close(psi(2.0, 1.0).unwrap(), PI, 1e-14));
        for r in [0.5, 3.0] {
            assert!(close(psi(2.0 * r, r).unwrap(), PI * r * r, 1e-13));
        }
        let want = 5f64.sqrt() + 4.5 * (2.0f64 / 3.0).asin();
        assert!(close(psi(3.0, 1.0).unwrap(), want, 1e-14));
        assert!(close(want, 5.519_842_430_521_132, 1e-14));
        assert!(matches!(psi(1.0, 1.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn psi_continuous_and_increasing() {
        let ds = dstar();
        assert!((psi_nonagon(ds, 1.0) - psi_slice(ds, 1.0)).abs() < 1e-9);
        assert!((psi_raw(ds * (1.0 - 1e-12), 1.0) - psi_raw(ds * (1.0 + 1e-12), 1.0)).abs() < 1e-9);
        let mut prev = psi(2.0, 1.0).unwrap();
        for k in 1..=2000 {
            let v = psi(2.0 + k as f64 * 0.002, 1.0).unwrap();
            assert!(v - prev >= -1e-12);
            prev = v;
        }
    }

    #[test]
    fn dstar_value() {
        let ds = dstar();
        assert!((ds - 2.388_734_072_643_451).abs() < 1e-12, "{ds}");
        assert!((ds - 2.3888).abs() < 5e-4);
    }

    #[test]
    fn chi_phi_examples() {
        assert!(close(chi(2.0, 1.0).unwrap(), PI, 1e-15));
        assert!(close(chi(1.0, 1.0).unwrap(), 3f64.sqrt() / 2.0 + PI / 3.0, 1e-15));
        assert!(close(chi(1.0, 1.0).unwrap(), 1.913_222_954_981_036_4, 1e-15));
        assert!(close(phi(1.0, 1.0).unwrap(), PI, 1e-15));
        assert!(close(phi(2.0, 1.0).unwrap(), 2.0 * 3f64.sqrt() + 4.0 * PI / 3.0, 1e-15));
        assert!(close(phi(2.0, 1.0).unwrap(), 7.652_891_819_924_146, 1e-14));
        assert!(close(phi(6.0, 3.0).unwrap(), 9.0 * phi(2.0, 1.0).unwrap(), 1e-14));
        assert!(chi(3.0, 1.0).is_err());
        assert!(phi(1.0, 2.0).is_err());
        for (r, d) in [(1.0, 2.0), (1.0, 2.5), (0.3, 5.0), (2.0, 4.1), (1.0, 100.0)] {
            let a = closed_form(&ShapeSpec::Slice { r, d }).unwrap().area;
            assert!(close(chi(2.0 * r, d / 2.0).unwrap(), a, 1e-12));
        }
    }

    #[test]
    fn arcsinc_examples() {
        assert_eq!(arcsinc(1.0).unwrap(), 0.0);
        assert!((arcsinc(2.0 / PI).unwrap() - PI / 2.0).abs() < 1e-14);
        // oracle: Newton on sin(y) − y/2 from an independent start
        let mut y: f64 = 2.0;
        for _ in 0..50 {
            y -= (y.sin() - y / 2.0) / (y.cos() - 0.5);
        }
        assert!((arcsinc(0.5).unwrap() - y).abs() < 1e-14);
        assert!((y - 1.895_494_267_033_981).abs() < 1e-14);
        assert!(arcsinc(0.0).is_err());
        assert!(arcsinc(1.5).is_err());
    }

    #[test]
    fn implicit_examples() {
        for fam in [
            ImplicitFamily::G2 { big_r: 1.0, r: 1.0 },
            ImplicitFamily::G1 { d: 2.0, r: 1.0 },
            ImplicitFamily::G3 { d: 2.0, w: 2.0 },
            ImplicitFamily::G4 { w: 2.0, big_r: 1.0 },
        ] {
            let p = implicit_g(fam).unwrap();
            assert!((implicit_bound_value(&p).unwrap() - 2.0).abs() < 1e-11, "{fam:?}");
        }
        assert!(implicit_g(ImplicitFamily::G1 { d: 1.0, r: 1.0 }).is_err());
        assert!(implicit_g(ImplicitFamily::G3 { d: 1.0, w: 2.0 }).is_err());
    }

    #[test]
    fn ball_saturates() {
        let res = evaluate_all(&ball());
        assert_eq!(res.len(), BoundId::ALL.len());
        for b in &res {
            if let Some(s) = b.slack {
                assert!(s >= -1e-9, "{} slack {s}", b.id);
            }
        }
        let eq = [
            BoundId::OneqA,
            BoundId::OneqP,
            BoundId::OneqD,
            BoundId::OneqRLo,
            BoundId::OneqRUp2,
            BoundId::HraLo,
            BoundId::HraUp,
            BoundId::HpaLo,
            BoundId::HpaUp,
            BoundId::HrpLo,
            BoundId::HrpUp,
            BoundId::HdrLoImplicit,
            BoundId::HrrLoImplicit,
            BoundId::HdwLoImplicit,
            BoundId::HrwLoImplicit,
            BoundId::RhaLo,
            BoundId::PhrLo,
            BoundId::PhdLo,
        ];
        for id in eq {
            let b = res.iter().find(|b| b.id == id).unwrap();
            assert!(b.slack.unwrap().abs() < 1e-10, "{id} slack {:?}", b.slack);
        }
    }

    #[test]
    fn stadium_and_two_cup_saturate() {
        let st = closed_form(&ShapeSpec::Stadium { r: 1.0, l: 2.0 }).unwrap();
        let res = evaluate_all(&st);
        for id in [BoundId::HraLo, BoundId::HpaUp, BoundId::HrpLo, BoundId::HawLo, BoundId::HwpLo] {
            let b = res.iter().find(|b| b.id == id).unwrap();
            assert!(b.slack.unwrap().abs() < 1e-6, "{id}");
        }
        let tc = closed_form(&ShapeSpec::TwoCup { r: 1.0, k: 2.0 }).unwrap();
        let res = evaluate_all(&tc);
        for id in [BoundId::HdrUp, BoundId::HrrUp] {
            let b = res.iter().find(|b| b.id == id).unwrap();
            assert!(b.slack.unwrap().abs() < 1e-6, "{id}");
        }
    }

    #[test]
    fn triangle_bounds_match_implicit_triangle_equations() {
        use crate::shapes::{triangle_functionals, triangle_h};
        for (b, h) in [(1.0, 3f64.sqrt() / 2.0), (1.0, 1.3), (0.5, 4.0)] {
            let mut f = triangle_functionals(b, h);
            let th = triangle_h(&f);
            f = f.with_h(th);
            let (w, d, big_r, a, p) = (f.width, f.diameter, f.circumradius, f.area, f.perimeter);
            // independent routes to r(T) and A(T)
            let r_wd = subeq_r_from_width_diameter(w, d).unwrap();
            let r_wr = subeq_r_from_width_circumradius(w, big_r).unwrap();
            let r_wa = subeq_inverse(SubeqKind::AreaFrom, w, a).unwrap();
            let r_wp = subeq_inverse(SubeqKind::PerimFrom, w, p).unwrap();
            for r in [r_wd, r_wr, r_wa, r_wp] {
                assert!(close(r, f.inradius, 1e-9), "{r} vs {}", f.inradius);
            }
            let a_wp = subeq_area_from_width_perimeter(w, p).unwrap();
            assert!(close(a_wp, a, 1e-9), "{a_wp} vs {a}");
            // A(ω, R): 16A⁶ = R²ω²(16A⁴ − R²ω⁶)
            let res_v = 16.0 * a.powi(6) - big_r * big_r * w * w * (16.0 * a.powi(4) - big_r * big_r * w.powi(6));
            assert!(res_v.abs() < 1e-12 * (16.0 * a.powi(6)).max(1e-300));
            // (iii): h = 1/r(ω,d) + √(2π/(ωd))
            let alt = 1.0 / r_wd + (2.0 * PI / (w * d)).sqrt();
            assert!(close(alt, th, 1e-9));
            let res = evaluate_all(&f);
            for id in [BoundId::HdwUpTri, BoundId::HrwUpTri, BoundId::HawUpTri, BoundId::HrdUp, BoundId::HwrLo] {
                let b = res.iter().find(|x| x.id == id).unwrap();
                if b.value == BoundValue::NotApplicable && h == 3f64.sqrt() / 2.0 {
                    // the equilateral triangle sits on the predicate boundary
                    continue;
                }
                assert!(b.slack.is_some_and(|s| s.abs() < 1e-8), "{id} at H = {h}: {:?}", b.value);
            }
        }
    }

    #[test]
    fn equilateral_saturates_explicit() {
        use crate::shapes::{triangle_functionals, triangle_h};
        let f = triangle_functionals(1.0, 3f64.sqrt() / 2.0);
        let f = f.with_h(triangle_h(&f));
        let res = evaluate_all(&f);
        for id in [BoundId::HrwUpExplicit, BoundId::HawUp1, BoundId::HdwUpYam, BoundId::HwrUp, BoundId::HwpUpTri] {
            let b = res.iter().find(|x| x.id == id).unwrap();
            assert!(b.slack.unwrap().abs() < 1e-8, "{id} {:?}", b.slack);
        }
    }

    #[test]
    fn subeq_inverse_examples() {
        let w = 1.7;
        let x = w * w / 3f64.sqrt();
        assert!(close(subeq_inverse(SubeqKind::AreaFrom, w, x).unwrap(), w / 3.0, 1e-12));
        assert!(matches!(subeq_inverse(SubeqKind::AreaFrom, w, 0.9 * x), Err(Error::OutOfRange(_))));
        for x in [1.7, 2.0, 10.0, 1e4] {
            let r = subeq_inverse(SubeqKind::AreaFrom, w, x).unwrap();
            assert!(close(subeq_forward(SubeqKind::AreaFrom, w, r), x, 1e-10));
            let r = subeq_inverse(SubeqKind::PerimFrom, w, x * 4.0).unwrap();
            assert!(close(subeq_forward(SubeqKind::PerimFrom, w, r), x * 4.0, 1e-10));
        }
    }

    #[test]
    fn hdr_implicit_dominates_explicit() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(0.1..3.0);
            let d = 2.0 * r * rng.gen_range(1.0..20.0);
            let f = Functionals {
                area: 1.0,
                perimeter: 1.0,
                inradius: r,
                circumradius: d / 2.0,
                diameter: d,
                width: 2.0 * r,
                h: None,
                t_star: None,
            };
            let i = evaluate(BoundId::HdrLoImplicit, &f).value().unwrap();
            let e = evaluate(BoundId::HdrLoExplicit, &f).value().unwrap();
            assert!(i >= e - 1e-9, "d={d} r={r}: {i} < {e}");
        }
    }

    #[test]
    fn registry_shape() {
        assert_eq!(BoundId::ALL.len(), 45);
        let mut names: Vec<_> = BoundId::ALL.iter().map(|b| b.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 45);
        for id in BoundId::ALL {
            assert_eq!(BoundId::from_name(id.name()), Some(*id));
            assert_eq!(serde_json::to_string(id).unwrap(), format!("\"{}\"", id.name()));
        }
        let csv = registry_csv(&evaluate_all(&ball()));
        assert_eq!(csv.lines().count(), 46);
        assert!(csv.starts_with("id,direction,condition,formula_id,value,slack\n"));
    }

    #[test]
    fn d0_brackets_and_converges() {
        let a = d0_at(Resolution::new(4096).unwrap());
        let b = d0();
        eprintln!("d0: 4096 -> {a:.10}, 8192 -> {b:.10}");
        assert!(b > 2.0 && b < dstar());
        assert!((a - b).abs() < 1e-4);
        assert!(d0_residual(b, Resolution::new(8192).unwrap()).abs() < 1e-6);
    }
}
