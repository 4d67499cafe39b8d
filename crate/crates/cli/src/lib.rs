//! `cheeger-atlas`: shapes, functionals, Cheeger constants, bounds, random
//! polygon clouds and diagram boundaries from the command line.

pub mod json;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use cheeger_core::bounds::registry_csv;
use cheeger_core::cheeger::cheeger_constant_with;
use cheeger_core::diagrams::{render_csv, render_svg, Boundary};
use cheeger_core::sampler::{cloud_csv, sample_records, CloudParams, Normalization};
use cheeger_core::{
    boundary, build, evaluate_all, measure, ConvexPolygon, DiagramId, DiagramPoint, DiagramSpec, Error, Resolution,
    ShapeSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use verify::{sharpness, verify_suite, SharpnessRow, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const THREADS_ENV: &str = "CHEEGER_ATLAS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cheeger-atlas", version, about = "Cheeger constants of planar convex polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a shape and write its polygon as JSON.
    Shape(ShapeArgs),
    /// Area, perimeter, inradius, circumradius, diameter and width.
    Measure(ShapeArgs),
    /// Cheeger constant h and the offset t* = 1/h.
    Cheeger(ShapeArgs),
    /// Evaluate every registered bound and its slack.
    Bounds(BoundsArgs),
    /// Random Valtr polygons placed in a diagram.
    Sample(SampleArgs),
    /// Boundary curves of a diagram, optionally with a random cloud.
    Diagram(DiagramArgs),
    /// Soundness census and sharpness residuals.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Ball,
    Stadium,
    TwoCup,
    Slice,
    SubequilateralTriangle,
    Yamanouti,
    SmoothedNonagon,
    ConstantWidthNonagon,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    /// Polygon JSON `{"vertices": [[x, y], ...]}` or a shape spec `{"family": ..., "params": ...}`.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "family")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "input")]
    family: Option<FamilyArg>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    l: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    base: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    height: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    side: Option<f64>,
    #[arg(long = "arc-radius", allow_negative_numbers = true)]
    arc_radius: Option<f64>,
    /// Chords per full turn for curved pieces.
    #[arg(long, default_value_t = 4096)]
    res: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TripletArg {
    Phr,
    Rhr,
    Dhr,
    Hwd,
    HwrCirc,
    Hwp,
    Hwa,
    Hrd,
    HwrIn,
}

impl TripletArg {
    fn diagram(self) -> DiagramId {
        match self {
            TripletArg::Phr => DiagramId::D1Phr,
            TripletArg::Rhr => DiagramId::D2Rhr,
            TripletArg::Dhr => DiagramId::D3Dhr,
            TripletArg::Hwd => DiagramId::Hwd,
            TripletArg::HwrCirc => DiagramId::HwrCirc,
            TripletArg::Hwp => DiagramId::Hwp,
            TripletArg::Hwa => DiagramId::Hwa,
            TripletArg::Hrd => DiagramId::Hrd,
            TripletArg::HwrIn => DiagramId::HwrIn,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormalizeArg {
    Area,
    Inradius,
    Diameter,
    None,
}

impl From<NormalizeArg> for Normalization {
    fn from(n: NormalizeArg) -> Self {
        match n {
            NormalizeArg::Area => Normalization::UnitArea,
            NormalizeArg::Inradius => Normalization::UnitInradius,
            NormalizeArg::Diameter => Normalization::UnitDiameter,
            NormalizeArg::None => Normalization::None,
        }
    }
}

#[derive(Debug, Args)]
struct CloudArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "n-min", default_value_t = 3)]
    n_min: usize,
    #[arg(long = "n-max", default_value_t = 30)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = TripletArg::Phr)]
    triplet: TripletArg,
    #[arg(long, value_enum, default_value_t = NormalizeArg::Area)]
    normalize: NormalizeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[command(flatten)]
    cloud: CloudArgs,
}

#[derive(Debug, Args)]
struct DiagramArgs {
    /// Random polygons to overlay; 0 draws the boundary only.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Abscissae sampled along each boundary curve.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    #[arg(long = "x-min", allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long = "x-max", allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[command(flatten)]
    cloud: CloudArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Outcome of one subcommand: text for stdout or `--out`, plus the exit code.
struct Output {
    text: String,
    path: Option<PathBuf>,
    code: i32,
}

impl Output {
    fn ok(text: String, path: Option<PathBuf>) -> Self {
        Output { text, path, code: EXIT_OK }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoRoot | Error::Unreachable(_) | Error::NonMonotone | Error::Unbounded | Error::Unsupported(_) => {
            EXIT_NUMERIC
        }
        Error::DegenerateInput(_)
        | Error::InvalidParam(_)
        | Error::DomainError(_)
        | Error::OutOfRange(_)
        | Error::Json(_)
        | Error::Io(_) => EXIT_USAGE,
    }
}

fn need(v: Option<f64>, flag: &str, family: FamilyArg) -> cheeger_core::Result<f64> {
    v.ok_or_else(|| {
        let name = family.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default();
        Error::InvalidParam(format!("--family {name} needs --{flag}"))
    })
}

fn spec_from_flags(a: &ShapeArgs, family: FamilyArg) -> cheeger_core::Result<ShapeSpec> {
    let f = family;
    let allowed: &[&str] = match f {
        FamilyArg::Ball => &["radius"],
        FamilyArg::Stadium => &["r", "l"],
        FamilyArg::TwoCup => &["r", "k"],
        FamilyArg::Slice | FamilyArg::SmoothedNonagon => &["r", "d"],
        FamilyArg::SubequilateralTriangle => &["base", "height"],
        FamilyArg::Yamanouti => &["side", "arc-radius"],
        FamilyArg::ConstantWidthNonagon => &["w", "r"],
    };
    let given = [
        ("r", a.r),
        ("l", a.l),
        ("k", a.k),
        ("d", a.d),
        ("w", a.w),
        ("radius", a.radius),
        ("base", a.base),
        ("height", a.height),
        ("side", a.side),
        ("arc-radius", a.arc_radius),
    ];
    if let Some((flag, _)) = given.iter().find(|(n, v)| v.is_some() && !allowed.contains(n)) {
        return Err(Error::InvalidParam(format!("--{flag} does not apply to this family")));
    }
    let spec = match f {
        FamilyArg::Ball => ShapeSpec::Ball { radius: need(a.radius, "radius", f)? },
        FamilyArg::Stadium => ShapeSpec::Stadium { r: need(a.r, "r", f)?, l: need(a.l, "l", f)? },
        FamilyArg::TwoCup => ShapeSpec::TwoCup { r: need(a.r, "r", f)?, k: need(a.k, "k", f)? },
        FamilyArg::Slice => ShapeSpec::Slice { r: need(a.r, "r", f)?, d: need(a.d, "d", f)? },
        FamilyArg::SubequilateralTriangle => ShapeSpec::SubequilateralTriangle {
            base: need(a.base, "base", f)?,
            height: need(a.height, "height", f)?,
        },
        FamilyArg::Yamanouti => ShapeSpec::Yamanouti {
            side: need(a.side, "side", f)?,
            arc_radius: need(a.arc_radius, "arc-radius", f)?,
        },
        FamilyArg::SmoothedNonagon => ShapeSpec::SmoothedNonagon { r: need(a.r, "r", f)?, d: need(a.d, "d", f)? },
        FamilyArg::ConstantWidthNonagon => {
            ShapeSpec::ConstantWidthNonagon { w: need(a.w, "w", f)?, r: need(a.r, "r", f)? }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn read_polygon(path: &Path, res: Resolution) -> cheeger_core::Result<ConvexPolygon> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("family").is_some() {
        let spec = ShapeSpec::from_json(&text)?;
        spec.validate()?;
        build(&spec, res)
    } else {
        ConvexPolygon::from_json(&text)
    }
}

fn polygon(a: &ShapeArgs) -> cheeger_core::Result<ConvexPolygon> {
    let res = Resolution::new(a.res)?;
    match (&a.input, a.family) {
        (Some(p), _) => read_polygon(p, res),
        (None, Some(f)) => build(&spec_from_flags(a, f)?, res),
        (None, None) => Err(Error::InvalidParam("give --in or --family".into())),
    }
}

#[derive(Serialize)]
struct PolygonDoc {
    vertices: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct CheegerDoc {
    h: f64,
    t_star: f64,
}

fn cmd_shape(a: &ShapeArgs) -> cheeger_core::Result<Output> {
    let p = polygon(a)?;
    let doc = PolygonDoc { vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect() };
    Ok(Output::ok(json::to_string(&doc), a.out.clone()))
}

fn cmd_measure(a: &ShapeArgs) -> cheeger_core::Result<Output> {
    Ok(Output::ok(json::to_string(&measure(&polygon(a)?)), a.out.clone()))
}

fn cmd_cheeger(a: &ShapeArgs) -> cheeger_core::Result<Output> {
    let c = cheeger_constant_with(&polygon(a)?, a.res);
    Ok(Output::ok(json::to_string(&CheegerDoc { h: c.h, t_star: c.t_star }), a.out.clone()))
}

fn cmd_bounds(a: &BoundsArgs) -> cheeger_core::Result<Output> {
    let p = polygon(&a.shape)?;
    let c = cheeger_constant_with(&p, a.shape.res);
    let mut f = measure(&p).with_h(c.h);
    f.t_star = Some(c.t_star);
    let results = evaluate_all(&f);
    let text = match a.format {
        FormatArg::Json => json::to_string(&serde_json::json!({ "functionals": f, "bounds": results })),
        FormatArg::Csv => registry_csv(&results),
        FormatArg::Svg => return Err(Error::InvalidParam("bounds supports --format json or csv".into())),
    };
    Ok(Output::ok(text, a.shape.out.clone()))
}

fn cloud_params(c: &CloudArgs, samples: usize) -> CloudParams {
    CloudParams {
        count: samples,
        n_min: c.n_min,
        n_max: c.n_max,
        tag: c.normalize.into(),
        triplet: c.triplet.diagram().triplet(),
        seed: c.seed,
    }
}

fn cmd_sample(a: &SampleArgs) -> cheeger_core::Result<Output> {
    let records = sample_records(&cloud_params(&a.cloud, a.samples))?;
    let text = match a.cloud.format {
        FormatArg::Csv => cloud_csv(&records),
        FormatArg::Json => json::to_string(&records),
        FormatArg::Svg => {
            let pts: Vec<DiagramPoint> = records
                .iter()
                .map(|r| DiagramPoint { x: r.x, y: r.y, provenance: format!("seed:{}", r.seed) })
                .collect();
            render_svg(&pts, None, &a.cloud.triplet.diagram().triplet().to_string())
        }
    };
    Ok(Output::ok(text, a.cloud.out.clone()))
}

#[derive(Serialize)]
struct DiagramDoc<'a> {
    diagram: DiagramId,
    spec: DiagramSpec,
    boundary: &'a Boundary,
    cloud: &'a [DiagramPoint],
}

fn cmd_diagram(a: &DiagramArgs) -> cheeger_core::Result<Output> {
    let id = a.cloud.triplet.diagram();
    let mut spec = DiagramSpec::new(id);
    spec.grid = a.grid;
    if let Some(x) = a.x_min {
        spec.x_min = x;
    }
    if let Some(x) = a.x_max {
        spec.x_max = x;
    }
    spec.validate()?;
    let cloud: Vec<DiagramPoint> = if a.samples > 0 {
        sample_records(&cloud_params(&a.cloud, a.samples))?
            .into_iter()
            .map(|r| DiagramPoint { x: r.x, y: r.y, provenance: format!("seed:{}", r.seed) })
            .collect()
    } else {
        Vec::new()
    };
    let b = boundary(&spec)?;
    let text = match a.cloud.format {
        FormatArg::Csv => render_csv(&cloud, Some(&b)),
        FormatArg::Svg => render_svg(&cloud, Some(&b), id.name()),
        FormatArg::Json => json::to_string(&DiagramDoc { diagram: id, spec, boundary: &b, cloud: &cloud }),
    };
    Ok(Output::ok(text, a.cloud.out.clone()))
}

fn cmd_verify(a: &VerifyArgs) -> cheeger_core::Result<Output> {
    let report = verify_suite(a.samples, a.seed)?;
    let code = if report.passed { EXIT_OK } else { EXIT_NUMERIC };
    Ok(Output { text: json::to_string(&report), path: a.out.clone(), code })
}

fn threads(value: Option<OsString>) -> Result<Option<usize>, String> {
    let Some(v) = value else { return Ok(None) };
    let s = v.to_str().ok_or_else(|| format!("{THREADS_ENV} is not valid UTF-8"))?;
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Some(n)),
        _ => Err(format!("{THREADS_ENV} must be a positive integer, got {s:?}")),
    }
}

fn dispatch(cmd: &Command) -> cheeger_core::Result<Output> {
    match cmd {
        Command::Shape(a) => cmd_shape(a),
        Command::Measure(a) => cmd_measure(a),
        Command::Cheeger(a) => cmd_cheeger(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Diagram(a) => cmd_diagram(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Runs one command line. `argv[0]` is the program name. The thread cap is
/// read from `CHEEGER_ATLAS_THREADS`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_threads(argv, std::env::var_os(THREADS_ENV), out, err)
}

pub fn run_with_threads<I, T>(argv: I, threads_var: Option<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let n = match threads(threads_var) {
        Ok(n) => n,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = n {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: thread pool: {e}");
            return EXIT_NUMERIC;
        }
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(o) => {
            let written = match &o.path {
                Some(p) => std::fs::write(p, &o.text).map_err(|e| format!("{}: {e}", p.display())),
                None => out.write_all(o.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => o.code,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
