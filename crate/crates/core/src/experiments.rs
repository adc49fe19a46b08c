//! Command implementations behind the `commbound` binary. Commands render their
//! output to a string; [`write_atomic`] puts it on disk.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circle::{eta_lower_witness, truncation_envelope, DEFAULT_LOWER_GRID};
use crate::envelope::BoundCurve;
use crate::error::{Error, Result};
use crate::lab::{
    commuting_smoke, folk_trials, probe_max_commutator, sample_sweep, SpectrumMode, SweepSpec, Target, VIOLATION_TOL,
};
use crate::periodic::{builtin_bump, builtin_triangle, coefficients_from_json, from_coefficients, PeriodicFunction};
use crate::positive::{gamma0, pedersen_curve, UnitFunction, DEFAULT_PEDERSEN_DEGREE, DEFAULT_TANGENT_GRID};

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_SQRT_DELTA_MIN: f64 = 1e-3;
pub const DEFAULT_CIRCLE_DELTA_MAX: f64 = 1.998;
pub const DEFAULT_STEPS: usize = 1000;
pub const DEFAULT_CIRCLE_DEGREE: usize = 64;
pub const DEFAULT_SQRT_SAMPLES: u64 = 2000;
pub const DEFAULT_CIRCLE_SAMPLES: u64 = 1000;
pub const DEFAULT_DIMS: &str = "2-8";
pub const DEFAULT_PROBE_DELTA: f64 = 0.25;
pub const DEFAULT_PROBE_DIMS: &str = "2";
pub const DEFAULT_PROBE_ITERS: usize = 128_000;
pub const SMOKE_COUNT: u64 = 50;
pub const FOLK_TRIALS: u64 = 500;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumSelection {
    Uniform,
    Atoms,
    /// Alternate the two modes by sample index.
    #[default]
    Both,
}

impl SpectrumSelection {
    fn modes(self) -> Vec<SpectrumMode> {
        match self {
            SpectrumSelection::Uniform => vec![SpectrumMode::Uniform],
            SpectrumSelection::Atoms => vec![SpectrumMode::Atoms],
            SpectrumSelection::Both => vec![SpectrumMode::Uniform, SpectrumMode::Atoms],
        }
    }
}

/// Every setting a command may read. Unset fields fall back to the command's
/// defaults; [`RunConfig::or`] layers flags over a config file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub function: Option<String>,
    pub delta_min: Option<f64>,
    pub delta_max: Option<f64>,
    pub steps: Option<usize>,
    pub n_max: Option<usize>,
    pub a_grid: Option<usize>,
    pub samples: Option<u64>,
    pub dims: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub pedersen_only: Option<bool>,
    pub spectrum_mode: Option<SpectrumSelection>,
    pub iters: Option<usize>,
    pub delta: Option<f64>,
    pub lower_grid: Option<usize>,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fields set on `self` win; the rest come from `fallback`.
    pub fn or(self, fallback: RunConfig) -> RunConfig {
        RunConfig {
            function: self.function.or(fallback.function),
            delta_min: self.delta_min.or(fallback.delta_min),
            delta_max: self.delta_max.or(fallback.delta_max),
            steps: self.steps.or(fallback.steps),
            n_max: self.n_max.or(fallback.n_max),
            a_grid: self.a_grid.or(fallback.a_grid),
            samples: self.samples.or(fallback.samples),
            dims: self.dims.or(fallback.dims),
            seed: self.seed.or(fallback.seed),
            out: self.out.or(fallback.out),
            format: self.format.or(fallback.format),
            pedersen_only: self.pedersen_only.or(fallback.pedersen_only),
            spectrum_mode: self.spectrum_mode.or(fallback.spectrum_mode),
            iters: self.iters.or(fallback.iters),
            delta: self.delta.or(fallback.delta),
            lower_grid: self.lower_grid.or(fallback.lower_grid),
        }
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    fn report_format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CurveSqrt,
    CurveCircle,
    LowerCircle,
    ValidateSqrt,
    ValidateCircle,
    Probe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CurveSqrt => "curve sqrt",
            Command::CurveCircle => "curve circle",
            Command::LowerCircle => "lower circle",
            Command::ValidateSqrt => "validate sqrt",
            Command::ValidateCircle => "validate circle",
            Command::Probe => "probe",
        }
    }
}

/// Rendered command output. `success` is false only for a validation that found
/// a violation; `content` then holds the violation report.
#[derive(Clone, Debug)]
pub struct Output {
    pub content: String,
    pub success: bool,
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Output> {
    match command {
        Command::CurveSqrt => curve_sqrt(cfg),
        Command::CurveCircle => curve_circle(cfg),
        Command::LowerCircle => lower_circle(cfg),
        Command::ValidateSqrt => validate_sqrt(cfg),
        Command::ValidateCircle => validate_circle(cfg),
        Command::Probe => probe(cfg),
    }
}

/// Write through a temporary file in the destination directory, then rename.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// C-style `%.12e`: twelve mantissa digits and a signed, two-digit exponent.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mantissa}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

/// `"4"` or `"2-8"`.
pub fn parse_dims(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("dims `{text}` must look like `4` or `2-8`"));
    let (lo, hi) = match text.split_once('-') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo < 2 || lo > hi || hi > crate::lab::MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "dims `{text}` must lie within 2-{}",
            crate::lab::MAX_DIM
        )));
    }
    Ok((lo, hi))
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn delta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 steps".into()));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::InvalidArgument(format!("bad grid [{min}, {max}]")));
    }
    let span = max - min;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { max } else { min + span * k as f64 / (steps - 1) as f64 })
        .collect())
}

/// The periodic function named by `--function`: `triangle`, `bump`, or a path to
/// a JSON coefficient file.
pub fn circle_function(selector: &str) -> Result<PeriodicFunction> {
    match selector {
        "triangle" => Ok(builtin_triangle()),
        "bump" => Ok(builtin_bump()),
        "sqrt" => Err(Error::InvalidArgument(
            "sqrt is a function on [0, 1]; use the sqrt commands".into(),
        )),
        path => {
            let text = std::fs::read_to_string(path)?;
            Ok(from_coefficients(&coefficients_from_json(&text)?))
        }
    }
}

fn check_sqrt_function(cfg: &RunConfig) -> Result<()> {
    match cfg.function.as_deref() {
        None | Some("sqrt") => Ok(()),
        Some(other) => Err(Error::InvalidArgument(format!(
            "square-root commands only support --function sqrt, got `{other}`"
        ))),
    }
}

fn gamma0_from(cfg: &RunConfig) -> Result<BoundCurve> {
    gamma0(
        cfg.n_max.unwrap_or(DEFAULT_PEDERSEN_DEGREE),
        cfg.a_grid.unwrap_or(DEFAULT_TANGENT_GRID),
    )
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn json_text(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json value serializes");
    s.push('\n');
    s
}

fn curve_sqrt(cfg: &RunConfig) -> Result<Output> {
    check_sqrt_function(cfg)?;
    let min = cfg.delta_min.unwrap_or(DEFAULT_SQRT_DELTA_MIN);
    let max = cfg.delta_max.unwrap_or(1.0);
    if !(min > 0.0 && max <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "square-root grid must lie in (0, 1], got [{min}, {max}]"
        )));
    }
    let grid = delta_grid(min, max, cfg.steps.unwrap_or(DEFAULT_STEPS))?;
    let pedersen_only = cfg.pedersen_only.unwrap_or(false);
    let n_max = cfg.n_max.unwrap_or(DEFAULT_PEDERSEN_DEGREE);
    let curve = if pedersen_only { pedersen_curve(n_max)? } else { gamma0_from(cfg)? };
    let bound_name = if pedersen_only { "pedersen" } else { "gamma0" };
    let rows: Vec<[f64; 4]> = grid
        .iter()
        .map(|&d| {
            let g = curve.evaluate(d);
            let r = d.sqrt();
            [d, g, r, g / r]
        })
        .collect();
    let content = match cfg.format() {
        Format::Csv => csv_text(
            &["delta", bound_name, "sqrt_delta", "ratio"],
            rows.iter().map(|r| r.iter().map(|&x| sci(x)).collect()).collect(),
        )?,
        Format::Json => json_text(json!({
            "schema_version": SCHEMA_VERSION,
            "command": Command::CurveSqrt.name(),
            "bound": bound_name,
            "n_max": n_max,
            "a_grid": if pedersen_only { None } else { Some(cfg.a_grid.unwrap_or(DEFAULT_TANGENT_GRID)) },
            "columns": ["delta", bound_name, "sqrt_delta", "ratio"],
            "rows": rows,
            "segments": curve.segments(),
        })),
    };
    Ok(Output { content, success: true })
}

fn circle_grid(cfg: &RunConfig) -> Result<Vec<f64>> {
    let min = cfg.delta_min.unwrap_or(0.0);
    let max = cfg.delta_max.unwrap_or(DEFAULT_CIRCLE_DELTA_MAX);
    if !(min >= 0.0 && max < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "circle grid must lie in [0, 2), got [{min}, {max}]"
        )));
    }
    delta_grid(min, max, cfg.steps.unwrap_or(DEFAULT_STEPS))
}

fn curve_circle(cfg: &RunConfig) -> Result<Output> {
    let f = circle_function(cfg.function.as_deref().unwrap_or("triangle"))?;
    let grid = circle_grid(cfg)?;
    let n_max = cfg.n_max.unwrap_or(DEFAULT_CIRCLE_DEGREE);
    let lower_grid = cfg.lower_grid.unwrap_or(DEFAULT_LOWER_GRID);
    let curve = truncation_envelope(&f, n_max)?;
    let lower = crate::circle::eta_lower_curve(&f, &grid, lower_grid)?;
    let rows: Vec<(f64, f64, f64, String)> = grid
        .iter()
        .zip(&lower)
        .map(|(&d, &lo)| {
            let e = curve.evaluate_detailed(d);
            (d, e.value, lo, e.provenance.to_string())
        })
        .collect();
    let content = match cfg.format() {
        Format::Csv => csv_text(
            &["delta", "upper", "lower", "active_line_provenance"],
            rows.iter()
                .map(|(d, u, l, p)| vec![sci(*d), sci(*u), sci(*l), p.clone()])
                .collect(),
        )?,
        Format::Json => json_text(json!({
            "schema_version": SCHEMA_VERSION,
            "command": Command::CurveCircle.name(),
            "function": f.name(),
            "n_max": n_max,
            "lower_grid": lower_grid,
            "rows": rows.iter().map(|(d, u, l, p)| json!({
                "delta": d, "upper": u, "lower": l, "active_line_provenance": p,
            })).collect::<Vec<_>>(),
            "segments": curve.segments(),
        })),
    };
    Ok(Output { content, success: true })
}

fn lower_circle(cfg: &RunConfig) -> Result<Output> {
    use rayon::prelude::*;
    let f = circle_function(cfg.function.as_deref().unwrap_or("triangle"))?;
    let grid = circle_grid(cfg)?;
    let lower_grid = cfg.lower_grid.unwrap_or(DEFAULT_LOWER_GRID);
    let witnesses = grid
        .par_iter()
        .map(|&d| eta_lower_witness(&f, d, lower_grid))
        .collect::<Result<Vec<_>>>()?;
    let content = match cfg.format() {
        Format::Csv => csv_text(
            &["delta", "lower", "x1", "x2"],
            grid.iter()
                .zip(&witnesses)
                .map(|(&d, w)| vec![sci(d), sci(w.value), sci(w.x1), sci(w.x2)])
                .collect(),
        )?,
        Format::Json => json_text(json!({
            "schema_version": SCHEMA_VERSION,
            "command": Command::LowerCircle.name(),
            "function": f.name(),
            "lower_grid": lower_grid,
            "rows": grid.iter().zip(&witnesses).map(|(d, w)| json!({
                "delta": d, "lower": w.value, "x1": w.x1, "x2": w.x2,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Output { content, success: true })
}

fn sweep_spec(cfg: &RunConfig, default_samples: u64) -> Result<(SweepSpec, String)> {
    let dims = cfg.dims.clone().unwrap_or_else(|| DEFAULT_DIMS.to_string());
    let (lo, hi) = parse_dims(&dims)?;
    let spec = SweepSpec::new(cfg.samples.unwrap_or(default_samples), lo, hi, cfg.seed())?
        .with_spectrum_modes(cfg.spectrum_mode.unwrap_or_default().modes());
    Ok((spec, dims))
}

fn validation_output(
    command: Command,
    cfg: &RunConfig,
    target: &Target,
    spec: &SweepSpec,
    curve: &BoundCurve,
    mut report: serde_json::Map<String, serde_json::Value>,
) -> Result<Output> {
    let outcome = match sample_sweep(spec, target, curve) {
        Ok(o) => o,
        Err(Error::Violation { report: v, .. }) => {
            return Ok(Output {
                content: json_text(json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command.name(),
                    "success": false,
                    "violation": *v,
                })),
                success: false,
            });
        }
        Err(e) => return Err(e),
    };
    let smoke = commuting_smoke(target, SMOKE_COUNT, spec.seed)?;
    let smoke_max = smoke.iter().map(|r| r.measured).fold(0.0, f64::max);
    let success = outcome.min_margin >= -VIOLATION_TOL;
    let content = match cfg.report_format() {
        Format::Csv => csv_text(
            &["seed", "dim", "delta", "measured", "bound", "margin"],
            outcome
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.seed.to_string(),
                        r.dim.to_string(),
                        sci(r.delta),
                        sci(r.measured),
                        sci(r.bound.unwrap_or(f64::NAN)),
                        sci(r.margin().unwrap_or(f64::NAN)),
                    ]
                })
                .collect(),
        )?,
        Format::Json => {
            let mut head = serde_json::Map::new();
            head.insert("schema_version".into(), json!(SCHEMA_VERSION));
            head.insert("command".into(), json!(command.name()));
            head.insert("function".into(), json!(target.name()));
            head.insert("samples".into(), json!(spec.count));
            head.insert("seed".into(), json!(spec.seed));
            head.append(&mut report);
            head.insert("violations".into(), json!(0));
            head.insert("min_margin".into(), json!(outcome.min_margin));
            head.insert("min_margin_index".into(), json!(outcome.min_margin_index));
            head.insert("min_margin_seed".into(), json!(outcome.min_margin_seed));
            head.insert(
                "commuting_smoke".into(),
                json!({ "count": smoke.len(), "max_measured": smoke_max }),
            );
            head.insert("success".into(), json!(success));
            json_text(serde_json::Value::Object(head))
        }
    };
    Ok(Output { content, success })
}

fn validate_sqrt(cfg: &RunConfig) -> Result<Output> {
    check_sqrt_function(cfg)?;
    let (spec, dims) = sweep_spec(cfg, DEFAULT_SQRT_SAMPLES)?;
    let curve = gamma0_from(cfg)?;
    let mut extra = serde_json::Map::new();
    extra.insert("dims".into(), json!(dims));
    extra.insert("spectrum_mode".into(), json!(cfg.spectrum_mode.unwrap_or_default()));
    extra.insert("n_max".into(), json!(cfg.n_max.unwrap_or(DEFAULT_PEDERSEN_DEGREE)));
    extra.insert("a_grid".into(), json!(cfg.a_grid.unwrap_or(DEFAULT_TANGENT_GRID)));
    validation_output(
        Command::ValidateSqrt,
        cfg,
        &Target::Unit(UnitFunction::sqrt()),
        &spec,
        &curve,
        extra,
    )
}

fn validate_circle(cfg: &RunConfig) -> Result<Output> {
    let f = circle_function(cfg.function.as_deref().unwrap_or("triangle"))?;
    let (spec, dims) = sweep_spec(cfg, DEFAULT_CIRCLE_SAMPLES)?;
    let n_max = cfg.n_max.unwrap_or(DEFAULT_CIRCLE_DEGREE);
    let curve = truncation_envelope(&f, n_max)?;
    let folk = folk_trials(FOLK_TRIALS, spec.dim_min, spec.dim_max, spec.seed)?;
    let mut extra = serde_json::Map::new();
    extra.insert("dims".into(), json!(dims));
    extra.insert("n_max".into(), json!(n_max));
    extra.insert("folk_bound".into(), serde_json::to_value(folk)?);
    let mut out = validation_output(Command::ValidateCircle, cfg, &Target::Circle(f), &spec, &curve, extra)?;
    out.success &= folk.min_margin >= -1e-9;
    Ok(out)
}

fn probe(cfg: &RunConfig) -> Result<Output> {
    check_sqrt_function(cfg)?;
    let delta = cfg.delta.unwrap_or(DEFAULT_PROBE_DELTA);
    let dims = cfg.dims.clone().unwrap_or_else(|| DEFAULT_PROBE_DIMS.to_string());
    let (lo, hi) = parse_dims(&dims)?;
    let iters = cfg.iters.unwrap_or(DEFAULT_PROBE_ITERS);
    let curve = gamma0_from(cfg)?;
    let g0 = curve.evaluate(delta);
    let results = (lo..=hi)
        .map(|dim| probe_max_commutator(delta, dim, iters, cfg.seed()))
        .collect::<Result<Vec<_>>>()?;
    let content = match cfg.format() {
        Format::Csv => csv_text(
            &[
                "delta",
                "dim",
                "best",
                "sqrt_delta",
                "gamma0",
                "gap_sqrt",
                "gap_gamma0",
                "iterations",
                "stagnation_events",
            ],
            results
                .iter()
                .map(|r| {
                    vec![
                        sci(delta),
                        r.best.dim.to_string(),
                        sci(r.best.measured),
                        sci(delta.sqrt()),
                        sci(g0),
                        sci(r.gap_to_sqrt),
                        sci(g0 - r.best.measured),
                        r.iterations.to_string(),
                        r.stagnation_events.to_string(),
                    ]
                })
                .collect(),
        )?,
        Format::Json => json_text(json!({
            "schema_version": SCHEMA_VERSION,
            "command": Command::Probe.name(),
            "delta": delta,
            "seed": cfg.seed(),
            "sqrt_delta": delta.sqrt(),
            "gamma0": g0,
            "results": results.iter().map(|r| json!({
                "dim": r.best.dim,
                "best": r.best.measured,
                "achieved_delta": r.best.delta,
                "gap_sqrt": r.gap_to_sqrt,
                "gap_gamma0": g0 - r.best.measured,
                "iterations": r.iterations,
                "restarts": r.restarts,
                "stagnation_events": r.stagnation_events,
                "best_restart": r.best.index,
                "h": r.h,
                "a": r.a,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Output { content, success: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_matches_c_printf() {
        assert_eq!(sci(0.25), "2.500000000000e-01");
        assert_eq!(sci(1.0), "1.000000000000e+00");
        assert_eq!(sci(0.0), "0.000000000000e+00");
        assert_eq!(sci(-1234.5), "-1.234500000000e+03");
        assert_eq!(sci(1e-100), "1.000000000000e-100");
        assert_eq!(sci(f64::NAN), "nan");
    }

    #[test]
    fn dims_and_grids() {
        assert_eq!(parse_dims("2-8").unwrap(), (2, 8));
        assert_eq!(parse_dims("4").unwrap(), (4, 4));
        assert!(parse_dims("1-3").is_err());
        assert!(parse_dims("5-3").is_err());
        assert!(parse_dims("x").is_err());
        let g = delta_grid(0.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(delta_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn precedence() {
        let flags = RunConfig {
            seed: Some(7),
            ..Default::default()
        };
        let file: RunConfig = serde_json::from_str(r#"{"seed": 3, "samples": 10}"#).unwrap();
        let merged = flags.or(file);
        assert_eq!(merged.seed, Some(7));
        assert_eq!(merged.samples, Some(10));
        assert!(serde_json::from_str::<RunConfig>(r#"{"sede": 3}"#).is_err());
    }

    #[test]
    fn curve_sqrt_rows() {
        let cfg = RunConfig {
            delta_min: Some(0.25),
            delta_max: Some(1.0),
            steps: Some(4),
            n_max: Some(1000),
            ..Default::default()
        };
        let out = curve_sqrt(&cfg).unwrap().content;
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "delta,gamma0,sqrt_delta,ratio");
        assert_eq!(lines[1], "2.500000000000e-01,5.000000000000e-01,5.000000000000e-01,1.000000000000e+00");
        assert!(lines[4].starts_with("1.000000000000e+00,1.000000000000e+00,"));
        assert!(curve_sqrt(&RunConfig {
            delta_min: Some(0.0),
            ..Default::default()
        })
        .is_err());
    }

    #[test]
    fn curve_circle_ends() {
        let cfg = RunConfig {
            steps: Some(3),
            n_max: Some(8),
            delta_max: Some(1.9999),
            ..Default::default()
        };
        let out = curve_circle(&cfg).unwrap().content;
        let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
        let val = |s: &str| s.parse::<f64>().unwrap();
        assert_eq!(val(rows[0][2]), 0.0);
        // the upper curve meets the cap value 2 only at δ = 2
        assert!((val(rows[2][1]) - 2.0).abs() < 1e-3);
        assert!(val(rows[2][2]) > 1.98);
        for r in &rows {
            assert!(val(r[1]) >= val(r[2]) - 1e-8);
        }
    }
}
