use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commbound::experiments::{self, Command, Format, RunConfig, SpectrumSelection};

/// Commutator-norm bound curves, randomized validation and the square-root probe.
///
/// Settings resolve as: command-line flags, then the `--config` JSON file, then
/// the per-command defaults shown on each flag.
#[derive(Parser)]
#[command(name = "commbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand)]
enum Top {
    /// Emit an upper bound curve.
    #[command(subcommand)]
    Curve(CurveKind),
    /// Emit the constructive lower bound for a function on the circle.
    #[command(subcommand)]
    Lower(LowerKind),
    /// Check a bound curve against random matrix instances.
    #[command(subcommand)]
    Validate(ValidateKind),
    /// Hill-climb for large ‖[√H, A]‖ at a fixed ‖[H, A]‖.
    Probe(Flags),
}

#[derive(Subcommand)]
enum CurveKind {
    /// `delta,gamma0,sqrt_delta,ratio` on a grid in (0, 1].
    Sqrt(Flags),
    /// `delta,upper,lower,active_line_provenance` on a grid in [0, 2).
    Circle(Flags),
}

#[derive(Subcommand)]
enum LowerKind {
    /// `delta,lower,x1,x2` on a grid in [0, 2).
    Circle(Flags),
}

#[derive(Subcommand)]
enum ValidateKind {
    /// Random (H, A) pairs against γ₀.
    Sqrt(Flags),
    /// Random (V, A) pairs against the truncation envelope, plus folk-bound trials.
    Circle(Flags),
}

#[derive(Args, Clone, Default)]
struct Flags {
    /// triangle | bump | sqrt | path to a JSON coefficient file {"n": [re, im]}
    /// [default: triangle for circle commands, sqrt otherwise]
    #[arg(long)]
    function: Option<String>,
    /// Smallest δ [default: 1e-3 for sqrt, 0 for circle]
    #[arg(long)]
    delta_min: Option<f64>,
    /// Largest δ [default: 1 for sqrt, 1.998 for circle]
    #[arg(long)]
    delta_max: Option<f64>,
    /// Number of grid points, at least 2 [default: 1000]
    #[arg(long)]
    steps: Option<usize>,
    /// Largest series degree [default: 100000 for sqrt, 64 for circle]
    #[arg(long)]
    n_max: Option<usize>,
    /// Tangent points on [1/4, 1] [default: 1024]
    #[arg(long)]
    a_grid: Option<usize>,
    /// Random instances [default: 2000 for sqrt, 1000 for circle]
    #[arg(long)]
    samples: Option<u64>,
    /// Matrix dimensions, `n` or `lo-hi` [default: 2-8; probe: 2]
    #[arg(long)]
    dims: Option<String>,
    /// Base seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Output file, written atomically [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format [default: csv; json for validate]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Pedersen lines only (curve sqrt)
    #[arg(long)]
    pedersen_only: bool,
    /// Spectra of random positive contractions [default: both]
    #[arg(long, value_enum)]
    spectrum_mode: Option<SpectrumSelection>,
    /// Probe iterations, split over 64 restarts [default: 128000]
    #[arg(long)]
    iters: Option<usize>,
    /// Probe target ‖[H, A]‖ in (0, 1] [default: 0.25]
    #[arg(long)]
    delta: Option<f64>,
    /// Lower-bound search grid [default: 4096]
    #[arg(long)]
    lower_grid: Option<usize>,
    /// JSON file with any of the settings above (snake_case keys)
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn into_config(self) -> commbound::Result<RunConfig> {
        let flags = RunConfig {
            function: self.function,
            delta_min: self.delta_min,
            delta_max: self.delta_max,
            steps: self.steps,
            n_max: self.n_max,
            a_grid: self.a_grid,
            samples: self.samples,
            dims: self.dims,
            seed: self.seed,
            out: self.out,
            format: self.format,
            pedersen_only: self.pedersen_only.then_some(true),
            spectrum_mode: self.spectrum_mode,
            iters: self.iters,
            delta: self.delta,
            lower_grid: self.lower_grid,
        };
        match self.config {
            Some(path) => Ok(flags.or(RunConfig::from_json_file(&path)?)),
            None => Ok(flags),
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("COMMBOUND_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("COMMBOUND_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let (command, flags) = match cli.command {
        Top::Curve(CurveKind::Sqrt(f)) => (Command::CurveSqrt, f),
        Top::Curve(CurveKind::Circle(f)) => (Command::CurveCircle, f),
        Top::Lower(LowerKind::Circle(f)) => (Command::LowerCircle, f),
        Top::Validate(ValidateKind::Sqrt(f)) => (Command::ValidateSqrt, f),
        Top::Validate(ValidateKind::Circle(f)) => (Command::ValidateCircle, f),
        Top::Probe(f) => (Command::Probe, f),
    };
    let result = flags.into_config().and_then(|cfg| {
        let out = experiments::run(command, &cfg)?;
        match &cfg.out {
            Some(path) => experiments::write_atomic(path, &out.content)?,
            None => print!("{}", out.content),
        }
        Ok(out.success)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}: bound violated; see the report", command.name());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
