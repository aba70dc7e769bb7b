//! Command-line surface: renders plane scans to PPM or JSON, emits
//! classification and Cantor-diagnostics reports, and runs the built-in
//! invariant suites. All numeric work lives in the library; this file
//! only parses flags, dispatches, and shapes reports.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use tanz2::inverse::{ASYMPTOTIC_EPSILON, ROUND_TRIP_TOL};
use tanz2::map::{
    ExtComplex, Parameter, CONVERGENCE_RUN, DEFAULT_CONVERGENCE_TOL, OVERFLOW_THRESHOLD,
    POLE_EPSILON,
};
use tanz2::orbit::{
    classify_parameter, Verdict, CYCLE_TOL, NEUTRAL_TOL, ORIGIN_CAPTURE_RADIUS,
    SUPERATTRACTING_TOL,
};
use tanz2::scan::{
    flood_component, scan_dynamical, scan_parameter, ClassifiedGrid, FloodError, GridSpec,
    CYCLE_MATCH_RADIUS,
};
use tanz2::symbolic::{cantor_diagnostics, distance_kappa, Itinerary};
use tanz2::{run_selftest, Palette};

/// Iteration budget used when no --budget flag is given.
const DEFAULT_BUDGET: usize = 2000;
/// Pixels per side used when no --res flag is given.
const DEFAULT_RES: u32 = 512;
/// Metric base used when no --kappa flag is given.
const DEFAULT_KAPPA: f64 = 2.0;
/// Word depth used when no --depth flag is given.
const DEFAULT_DEPTH: usize = 12;
/// Sample-word count used when no --words flag is given.
const DEFAULT_WORDS: usize = 100;

#[derive(Parser)]
#[command(
    name = "tanz2",
    version,
    about = "Dynamics of the family lambda * tan(z^2): plane scans, \
             classification, and symbolic-dynamics diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterize basin classes over a window of the dynamical plane.
    Dynplane(DynplaneArgs),
    /// Rasterize parameter verdicts over a window of the lambda plane.
    Paramplane(ParamplaneArgs),
    /// Classify one parameter by following its singular orbit.
    Classify(ClassifyArgs),
    /// Sample cylinder contraction and conjugacy checks in the Cantor regime.
    Cantor(CantorArgs),
    /// Run every built-in invariant suite and report pass/fail.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct DynplaneArgs {
    /// Map parameter, written a+bi with no spaces (example: 0.85+0i).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Complex64,
    /// Window as x0,y0,x1,y1.
    #[arg(long, default_value = "-3,-3,3,3", value_parser = parse_window,
          allow_hyphen_values = true)]
    window: Window,
    /// Pixels per side.
    #[arg(long, default_value_t = DEFAULT_RES)]
    res: u32,
    /// Iteration budget per pixel (at least 50).
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = Format::Ppm)]
    format: Format,
    /// Output path; JSON reports go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamplaneArgs {
    /// Window in the lambda plane as x0,y0,x1,y1.
    #[arg(long, default_value = "-2,-2,2,2", value_parser = parse_window,
          allow_hyphen_values = true)]
    window: Window,
    /// Pixels per side.
    #[arg(long, default_value_t = DEFAULT_RES)]
    res: u32,
    /// Iteration budget per pixel (at least 100).
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = Format::Ppm)]
    format: Format,
    /// Output path; JSON reports go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Map parameter, written a+bi with no spaces.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Complex64,
    /// Iteration budget for the singular orbit.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CantorArgs {
    /// Map parameter, written a+bi with no spaces.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Complex64,
    /// Number of random symbol words to sample.
    #[arg(long, default_value_t = DEFAULT_WORDS)]
    words: usize,
    /// Symbols per word; diameters are reported at every truncation.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Metric base for word distances (must exceed 1).
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Ppm,
    Json,
}

/// Axis-aligned window, parsed from x0,y0,x1,y1.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Window {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

/// Dispatch failure carrying its exit code: configuration errors exit 2,
/// numeric failures exit 3.
enum Failure {
    Config(String),
    Numeric(String),
}

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(Failure::Config(msg)) | Err(Failure::Numeric(msg)) = configure_threads() {
        eprintln!("tanz2: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("tanz2: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("tanz2: {msg}");
            ExitCode::from(3)
        }
    }
}

/// Honor the THREADS environment variable; without it rayon keeps its
/// default of one worker per hardware thread.
fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| config(format!("THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| config(format!("cannot size the worker pool: {e}")))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Dynplane(args) => run_dynplane(args),
        Command::Paramplane(args) => run_paramplane(args),
        Command::Classify(args) => run_classify(args),
        Command::Cantor(args) => run_cantor(args),
        Command::Selftest(args) => run_selftest_command(args),
    }
}

fn run_dynplane(args: DynplaneArgs) -> Result<(), Failure> {
    let p = parameter(args.lambda)?;
    if args.budget < 50 {
        return Err(config("dynplane needs --budget of at least 50"));
    }
    let spec = grid_spec(args.window, args.res)?;
    let grid = scan_dynamical(p, spec, args.budget);
    match args.format {
        Format::Ppm => write_image(&grid, args.out.as_deref()),
        Format::Json => {
            let report = json!({
                "format": "tanz2.dynplane.v1",
                "lambda": complex_json(args.lambda),
                "verdict": classify_parameter(p, args.budget).verdict,
                "grid": grid_json(&grid),
                "immediate_basin": immediate_basin_heuristic(p, &grid),
                "settings": settings_json(json!({
                    "budget": args.budget,
                    "resolution": args.res,
                    "window": window_json(args.window),
                })),
            });
            emit_json(&report, args.out.as_deref())
        }
    }
}

fn run_paramplane(args: ParamplaneArgs) -> Result<(), Failure> {
    if args.budget < 100 {
        return Err(config("paramplane needs --budget of at least 100"));
    }
    let spec = grid_spec(args.window, args.res)?;
    let grid = scan_parameter(spec, args.budget);
    match args.format {
        Format::Ppm => write_image(&grid, args.out.as_deref()),
        Format::Json => {
            let report = json!({
                "format": "tanz2.paramplane.v1",
                "grid": grid_json(&grid),
                "class_counts": class_counts(&grid),
                "settings": settings_json(json!({
                    "budget": args.budget,
                    "resolution": args.res,
                    "window": window_json(args.window),
                })),
            });
            emit_json(&report, args.out.as_deref())
        }
    }
}

fn run_classify(args: ClassifyArgs) -> Result<(), Failure> {
    let p = parameter(args.lambda)?;
    if args.format == Format::Ppm {
        return Err(config("classify reports are JSON; use --format json"));
    }
    let class = classify_parameter(p, args.budget);
    let orbit = &class.singular_orbit;
    let report = json!({
        "format": "tanz2.classify.v1",
        "lambda": complex_json(args.lambda),
        "verdict": class.verdict,
        "period": match class.verdict {
            Verdict::AttractingCycle(period) => Some(period),
            _ => None,
        },
        "cycle": class.cycle,
        "singular_orbit": {
            "seed": ext_json(orbit.seed()),
            "steps_used": orbit.steps_used,
            "fate": orbit.fate,
            "last": ext_json(orbit.last()),
        },
        "settings": settings_json(json!({ "budget": args.budget })),
    });
    emit_json(&report, args.out.as_deref())
}

fn run_cantor(args: CantorArgs) -> Result<(), Failure> {
    let p = parameter(args.lambda)?;
    if args.format == Format::Ppm {
        return Err(config("cantor reports are JSON; use --format json"));
    }
    if !(args.kappa > 1.0) {
        return Err(config(format!("--kappa must exceed 1, got {}", args.kappa)));
    }
    if args.words == 0 || args.depth == 0 {
        return Err(config("--words and --depth must be at least 1"));
    }
    let class = classify_parameter(p, DEFAULT_BUDGET);
    if class.verdict != Verdict::OriginOnly {
        return Err(Failure::Numeric(format!(
            "cantor diagnostics need the Cantor regime (origin-only verdict); \
             classification returned {:?}",
            class.verdict
        )));
    }
    let report = cantor_diagnostics(p, args.words, args.depth);
    let doc = json!({
        "format": "tanz2.cantor.v1",
        "report": report,
        "word_metric": word_metric(&report, args.kappa),
        "settings": settings_json(json!({
            "words": args.words,
            "depth": args.depth,
            "kappa": args.kappa,
            "budget": DEFAULT_BUDGET,
        })),
    });
    emit_json(&doc, args.out.as_deref())
}

fn run_selftest_command(args: SelftestArgs) -> Result<(), Failure> {
    if args.format == Format::Ppm {
        return Err(config("selftest reports are JSON; use --format json"));
    }
    let checks = run_selftest();
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    let report = json!({
        "format": "tanz2.selftest.v1",
        "checks": checks,
        "passed": checks.iter().filter(|c| c.passed).count(),
        "failed": failed.len(),
    });
    emit_json(&report, args.out.as_deref())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "selftest failures: {}",
            failed.join(", ")
        )))
    }
}

fn parameter(lambda: Complex64) -> Result<Parameter, Failure> {
    Parameter::new(lambda).map_err(|e| config(format!("invalid --lambda: {e}")))
}

fn grid_spec(window: Window, res: u32) -> Result<GridSpec, Failure> {
    GridSpec::from_window(window.x0, window.y0, window.x1, window.y1, res)
        .map_err(|e| config(format!("invalid window or resolution: {e}")))
}

fn write_image(grid: &ClassifiedGrid, out: Option<&Path>) -> Result<(), Failure> {
    let path = out.ok_or_else(|| config("--out is required with --format ppm"))?;
    tanz2::write_ppm(grid, &Palette::default(), path).map_err(|e| match e {
        tanz2::RenderError::Io(io) => config(format!("cannot write {}: {io}", path.display())),
        other => Failure::Numeric(other.to_string()),
    })
}

fn emit_json(report: &serde_json::Value, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

fn ext_json(z: ExtComplex) -> serde_json::Value {
    match z {
        ExtComplex::Finite(w) => complex_json(w),
        ExtComplex::Infinity => json!("infinity"),
    }
}

fn window_json(w: Window) -> serde_json::Value {
    json!({ "x0": w.x0, "y0": w.y0, "x1": w.x1, "y1": w.y1 })
}

fn grid_json(grid: &ClassifiedGrid) -> serde_json::Value {
    serde_json::from_str(&grid.to_json()).expect("grid documents are valid JSON")
}

/// Cells per class id, keyed by the decimal id as text.
fn class_counts(grid: &ClassifiedGrid) -> serde_json::Value {
    let mut counts = std::collections::BTreeMap::<u8, usize>::new();
    for cell in &grid.cells {
        *counts.entry(cell.class_id).or_insert(0) += 1;
    }
    json!(counts
        .into_iter()
        .map(|(class, n)| (class.to_string(), n))
        .collect::<std::collections::BTreeMap<String, usize>>())
}

/// Flood the origin's pixel component and look for the asymptotic values
/// inside it. A pixel raster can evidence, but never certify, that a point
/// lies in the immediate basin, so the block labels itself a heuristic and
/// records the window and resolution it was computed at.
fn immediate_basin_heuristic(p: Parameter, grid: &ClassifiedGrid) -> serde_json::Value {
    let spec = &grid.spec;
    let mut block = json!({
        "label": "grid heuristic: 4-connected flood fill of equal-class pixels; \
                  evidences membership in the immediate basin, does not certify it",
        "resolution": { "cols": spec.cols, "rows": spec.rows },
        "window": {
            "x0": spec.center.re - 0.5 * spec.width,
            "y0": spec.center.im - 0.5 * spec.height,
            "x1": spec.center.re + 0.5 * spec.width,
            "y1": spec.center.im + 0.5 * spec.height,
        },
        "origin_pixel": serde_json::Value::Null,
        "origin_class": serde_json::Value::Null,
        "asymptotic_values": serde_json::Value::Null,
        "both_in_origin_component": serde_json::Value::Null,
    });
    let fields = block.as_object_mut().expect("block is an object");

    let Some((col, row)) = spec.pixel_containing(Complex64::new(0.0, 0.0)) else {
        return block;
    };
    fields.insert("origin_pixel".into(), json!([col, row]));
    fields.insert(
        "origin_class".into(),
        json!(grid.cell_at(col, row).class_id),
    );

    let mask = match flood_component(grid, (col, row)) {
        Ok(mask) => mask,
        Err(FloodError::SeedUndetermined(_, _)) => {
            fields.insert("origin_pixel_undetermined".into(), json!(true));
            return block;
        }
        Err(other) => {
            fields.insert("flood_error".into(), json!(other.to_string()));
            return block;
        }
    };

    let mut entries = Vec::new();
    let mut verdicts = Vec::new();
    for value in p.asymptotic_values() {
        let pixel = spec.pixel_containing(value);
        let in_component = pixel.map(|(c, r)| mask[(r * spec.cols + c) as usize]);
        verdicts.push(in_component);
        entries.push(json!({
            "value": complex_json(value),
            "pixel": pixel.map(|(c, r)| json!([c, r])),
            "in_origin_component": in_component,
        }));
    }
    fields.insert("asymptotic_values".into(), json!(entries));
    let both = verdicts
        .iter()
        .map(|v| v.unwrap_or(false))
        .all(|inside| inside)
        && verdicts.iter().all(|v| v.is_some());
    fields.insert("both_in_origin_component".into(), json!(both));
    block
}

/// Pairwise symbol-metric distances between the sampled words, computed
/// with the requested base. Distinct words must sit at positive distance.
fn word_metric(report: &tanz2::CantorReport, kappa: f64) -> serde_json::Value {
    let mut itineraries = Vec::new();
    for word in report.words.iter().take(16) {
        let pairs: Vec<(i32, u8)> = word
            .regions
            .iter()
            .zip(&word.quadrants)
            .map(|(&r, &q)| (r, q))
            .collect();
        if let Ok(t) = Itinerary::from_regions(&pairs) {
            itineraries.push(t);
        }
    }
    let mut min = f64::INFINITY;
    let mut max: f64 = 0.0;
    let mut compared = 0usize;
    for (i, s) in itineraries.iter().enumerate() {
        for t in itineraries.iter().skip(i + 1) {
            if let Ok(d) = distance_kappa(s, t, kappa) {
                min = min.min(d);
                max = max.max(d);
                compared += 1;
            }
        }
    }
    json!({
        "kappa": kappa,
        "words_compared": itineraries.len(),
        "pairs": compared,
        "min_pairwise_distance": if compared > 0 { json!(min) } else { serde_json::Value::Null },
        "max_pairwise_distance": if compared > 0 { json!(max) } else { serde_json::Value::Null },
    })
}

/// Echo every numeric knob into the report: the values used by this run,
/// the documented defaults, and the fixed tolerances of the library.
fn settings_json(used: serde_json::Value) -> serde_json::Value {
    json!({
        "used": used,
        "defaults": {
            "budget": DEFAULT_BUDGET,
            "resolution": DEFAULT_RES,
            "kappa": DEFAULT_KAPPA,
            "depth": DEFAULT_DEPTH,
            "words": DEFAULT_WORDS,
        },
        "tolerances": {
            "pole_epsilon": POLE_EPSILON,
            "overflow_threshold": OVERFLOW_THRESHOLD,
            "convergence_tol": DEFAULT_CONVERGENCE_TOL,
            "convergence_run": CONVERGENCE_RUN,
            "asymptotic_epsilon": ASYMPTOTIC_EPSILON,
            "round_trip_tol": ROUND_TRIP_TOL,
            "origin_capture_radius": ORIGIN_CAPTURE_RADIUS,
            "superattracting_tol": SUPERATTRACTING_TOL,
            "neutral_tol": NEUTRAL_TOL,
            "cycle_tol": CYCLE_TOL,
            "cycle_match_radius": CYCLE_MATCH_RADIUS,
        },
    })
}

/// Parse `a+bi` / `a-bi` (no spaces), plain reals, and pure imaginaries
/// like `2i`, `i`, or `-i`. Exponents are fine: `1e-3+2e-4i`.
fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    let fail = || format!("cannot parse {s:?}: expected a+bi, a-bi, a, or bi with no spaces");
    if s.is_empty() {
        return Err(fail());
    }
    let Some(body) = s.strip_suffix(['i', 'I']) else {
        return s
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| fail());
    };
    // The imaginary part starts at the last sign that is neither leading
    // nor part of an exponent.
    let bytes = body.as_bytes();
    let split = bytes
        .iter()
        .enumerate()
        .rev()
        .find(|&(idx, &b)| {
            (b == b'+' || b == b'-') && idx > 0 && !matches!(bytes[idx - 1], b'e' | b'E')
        })
        .map(|(idx, _)| idx);
    let (re_text, im_text) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let re = if re_text.is_empty() {
        0.0
    } else {
        re_text.parse::<f64>().map_err(|_| fail())?
    };
    let im = match im_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| fail())?,
    };
    Ok(Complex64::new(re, im))
}

/// Parse `x0,y0,x1,y1` with x1 > x0 and y1 > y0.
fn parse_window(text: &str) -> Result<Window, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected x0,y0,x1,y1, got {text:?}"));
    }
    let vals = parts
        .iter()
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|_| format!("window coordinates must be numbers, got {text:?}"))?;
    let w = Window {
        x0: vals[0],
        y0: vals[1],
        x1: vals[2],
        y1: vals[3],
    };
    if !(w.x1 > w.x0) || !(w.y1 > w.y0) {
        return Err(String::from("window needs x1 > x0 and y1 > y0"));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals_parse() {
        assert_eq!(parse_complex("0.85+0i"), Ok(Complex64::new(0.85, 0.0)));
        assert_eq!(parse_complex("-1.5-2.25i"), Ok(Complex64::new(-1.5, -2.25)));
        assert_eq!(parse_complex("3"), Ok(Complex64::new(3.0, 0.0)));
        assert_eq!(parse_complex("-0.5"), Ok(Complex64::new(-0.5, 0.0)));
        assert_eq!(parse_complex("2i"), Ok(Complex64::new(0.0, 2.0)));
        assert_eq!(parse_complex("i"), Ok(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Ok(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("3+i"), Ok(Complex64::new(3.0, 1.0)));
        assert_eq!(parse_complex("3-i"), Ok(Complex64::new(3.0, -1.0)));
        assert_eq!(
            parse_complex("1e-3+2e-4i"),
            Ok(Complex64::new(1e-3, 2e-4))
        );
        assert_eq!(parse_complex("1E2-3E-1i"), Ok(Complex64::new(100.0, -0.3)));
    }

    #[test]
    fn bad_complex_literals_are_rejected() {
        for bad in ["", "1+2", "x+yi", "1 + 2i", "2ii", "+-3i"] {
            assert!(parse_complex(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn windows_parse_and_validate() {
        assert_eq!(
            parse_window("-3,-3,3,3"),
            Ok(Window {
                x0: -3.0,
                y0: -3.0,
                x1: 3.0,
                y1: 3.0
            })
        );
        assert!(parse_window("0,0,0,1").is_err());
        assert!(parse_window("0,0,1").is_err());
        assert!(parse_window("a,b,c,d").is_err());
        assert!(parse_window("3,0,-3,1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
