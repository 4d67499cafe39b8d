//! Soundness census over random polygons plus sharpness residuals on the
//! extremal families.

use cheeger_core::bounds::evaluate;
use cheeger_core::cheeger::cheeger_h;
use cheeger_core::diagrams::{lower_at, upper_at};
use cheeger_core::sampler::{sample_records, CloudParams, Normalization, Triplet};
use cheeger_core::{
    build, evaluate_all, measure, BoundId, DiagramId, Direction, Error, FunctionalId, Functionals, Resolution,
    Result, ShapeSpec,
};
use rayon::prelude::*;
use serde::Serialize;

pub const SCHEMA: &str = "cheeger-atlas/verify/1";
pub const SLACK_FLOOR: f64 = -1e-7;
pub const SHARPNESS_TOL: f64 = 1e-4;
pub const SHARPNESS_RES: usize = 8192;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCensus {
    pub id: BoundId,
    pub direction: Direction,
    /// polygons on which the bound applied and had a value
    pub evaluated: usize,
    pub not_applicable: usize,
    pub no_root: usize,
    pub min_slack: Option<f64>,
    pub min_slack_seed: Option<u64>,
    /// first seed (by index) with slack below the floor
    pub violating_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub family: String,
    pub params: String,
    pub target: String,
    pub value: f64,
    pub h: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub samples: usize,
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub normalization: Normalization,
    pub slack_floor: f64,
    pub sharpness_tol: f64,
    pub bounds: Vec<BoundCensus>,
    pub sharpness: Vec<SharpnessRow>,
    pub violations: usize,
    pub sharpness_failures: usize,
    pub passed: bool,
}

/// Census of every registered bound over `samples` unit-area polygons with
/// 3 to 30 vertices.
pub fn census(samples: usize, seed: u64) -> Result<Vec<BoundCensus>> {
    let params = CloudParams {
        count: samples,
        n_min: 3,
        n_max: 30,
        tag: Normalization::UnitArea,
        triplet: Triplet::new(FunctionalId::Perimeter, FunctionalId::Area),
        seed,
    };
    let records = sample_records(&params)?;
    let evaluated: Vec<(u64, Vec<cheeger_core::BoundResult>)> =
        records.par_iter().map(|r| (r.seed, evaluate_all(&r.functionals))).collect();
    let mut out: Vec<BoundCensus> = BoundId::ALL
        .iter()
        .map(|&id| BoundCensus {
            id,
            direction: id.direction(),
            evaluated: 0,
            not_applicable: 0,
            no_root: 0,
            min_slack: None,
            min_slack_seed: None,
            violating_seed: None,
        })
        .collect();
    for (seed, results) in &evaluated {
        for (c, b) in out.iter_mut().zip(results) {
            match (b.value, b.slack) {
                (cheeger_core::BoundValue::NotApplicable, _) => c.not_applicable += 1,
                (cheeger_core::BoundValue::NoRoot, _) => c.no_root += 1,
                (_, Some(s)) => {
                    c.evaluated += 1;
                    if c.min_slack.is_none_or(|m| s < m) {
                        c.min_slack = Some(s);
                        c.min_slack_seed = Some(*seed);
                    }
                    if s < SLACK_FLOOR && c.violating_seed.is_none() {
                        c.violating_seed = Some(*seed);
                    }
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

fn measured(spec: &ShapeSpec, res: usize) -> Result<Functionals> {
    let p = build(spec, Resolution::new(res)?)?;
    let h = cheeger_h(&p);
    Ok(measure(&p).with_h(h))
}

fn row(family: &str, params: String, target: &str, value: Option<f64>, h: f64) -> Result<SharpnessRow> {
    let value = value.ok_or_else(|| Error::Unreachable(format!("{target} not applicable to {family} {params}")))?;
    Ok(SharpnessRow {
        family: family.into(),
        params,
        target: target.into(),
        value,
        h,
        residual: (value - h).abs() / h,
    })
}

fn bound_rows(family: &str, params: String, f: &Functionals, ids: &[BoundId]) -> Result<Vec<SharpnessRow>> {
    let h = f.h.expect("measured");
    ids.iter()
        .map(|&id| row(family, params.clone(), id.name(), evaluate(id, f).value(), h))
        .collect()
}

fn curve_row(family: &str, params: String, f: &Functionals, id: DiagramId, upper: bool) -> Result<SharpnessRow> {
    let (x, y) = id.triplet().coords(f, f.h.expect("measured"));
    let v = if upper { upper_at(id, x) } else { lower_at(id, x) }.map(|v| v.0);
    let target = format!("{}:{}", id.name(), if upper { "upper" } else { "lower" });
    row(family, params, &target, v, y)
}

type Job = Box<dyn Fn() -> Result<Vec<SharpnessRow>> + Send + Sync>;

/// Residuals `|bound − h| / h` for each extremal family and the bounds or
/// diagram curves it attains, with h measured on polygons built at `res`.
pub fn sharpness(res: usize) -> Result<Vec<SharpnessRow>> {
    let mut jobs: Vec<Job> = Vec::new();
    for l in [0.1, 1.0, 10.0] {
        jobs.push(Box::new(move || {
            let f = measured(&ShapeSpec::Stadium { r: 1.0, l }, res)?;
            bound_rows(
                "stadium",
                format!("r=1 l={l}"),
                &f,
                &[BoundId::HraLo, BoundId::HpaUp, BoundId::HrpLo, BoundId::HawLo, BoundId::HwpLo],
            )
        }));
    }
    for k in [1.2, 2.0, 5.0] {
        jobs.push(Box::new(move || {
            let f = measured(&ShapeSpec::TwoCup { r: 1.0, k }, res)?;
            let p = format!("r=1 k={k}");
            let mut rows = bound_rows("two_cup", p.clone(), &f, &[BoundId::HdrUp, BoundId::HrrUp])?;
            for id in [DiagramId::D1Phr, DiagramId::D2Rhr, DiagramId::D3Dhr] {
                rows.push(curve_row("two_cup", p.clone(), &f, id, true)?);
            }
            Ok(rows)
        }));
    }
    for d in [2.5, 4.0, 10.0] {
        jobs.push(Box::new(move || {
            let f = measured(&ShapeSpec::Slice { r: 1.0, d }, res)?;
            let p = format!("r=1 d={d}");
            let mut rows = bound_rows(
                "slice",
                p.clone(),
                &f,
                &[BoundId::HrrLoImplicit, BoundId::HdwLoImplicit, BoundId::HrwLoImplicit],
            )?;
            rows.push(curve_row("slice", p, &f, DiagramId::D2Rhr, false)?);
            Ok(rows)
        }));
    }
    for height in [1.0, 2.0, 5.0] {
        jobs.push(Box::new(move || {
            let f = measured(&ShapeSpec::SubequilateralTriangle { base: 1.0, height }, res)?;
            bound_rows(
                "subequilateral_triangle",
                format!("base=1 height={height}"),
                &f,
                &[
                    BoundId::HwrLo,
                    BoundId::HrdUp,
                    BoundId::HdwUpTri,
                    BoundId::HrwUpTri,
                    BoundId::HawUpTri,
                    BoundId::HwpUpTri,
                ],
            )
        }));
    }
    jobs.push(Box::new(move || {
        let side = 1.0;
        let f = measured(&ShapeSpec::SubequilateralTriangle { base: side, height: 3f64.sqrt() / 2.0 }, res)?;
        let mut rows = bound_rows("equilateral_triangle", "side=1".into(), &f, &[BoundId::HrwUpExplicit])?;
        // the Yamanouti-range bound is evaluated on its left end, w = sqrt(3)/2 d,
        // which the measured width hits only up to rounding
        let mut g = f;
        g.width = 3f64.sqrt() / 2.0 * f.diameter;
        rows.extend(bound_rows("equilateral_triangle", "side=1 w=sqrt(3)/2 d".into(), &g, &[BoundId::HdwUpYam])?);
        Ok(rows)
    }));
    let nested: Vec<Vec<SharpnessRow>> = jobs.par_iter().map(|j| j()).collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

pub fn verify_suite(samples: usize, seed: u64) -> Result<VerifyReport> {
    if samples == 0 {
        return Err(Error::InvalidParam("--samples must be at least 1".into()));
    }
    let bounds = census(samples, seed)?;
    let sharp = sharpness(SHARPNESS_RES)?;
    let violations = bounds.iter().filter(|b| b.violating_seed.is_some()).count();
    let sharpness_failures = sharp.iter().filter(|r| !(r.residual < SHARPNESS_TOL)).count();
    Ok(VerifyReport {
        schema: SCHEMA,
        samples,
        seed,
        n_min: 3,
        n_max: 30,
        normalization: Normalization::UnitArea,
        slack_floor: SLACK_FLOOR,
        sharpness_tol: SHARPNESS_TOL,
        bounds,
        sharpness: sharp,
        violations,
        sharpness_failures,
        passed: violations == 0 && sharpness_failures == 0,
    })
}
