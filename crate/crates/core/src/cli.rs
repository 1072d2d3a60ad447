//! `onebit` command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use crate::error::{Error, SolverRefusal};
use crate::precoders::{complexity_formulas, Alphabet, IhtConfig, Precoder, SolverKind};
use crate::report::{emit_results, Format, RunManifest};
use crate::sim::{run_sweep_on, PowerNormalization, SerCurve, SimConfig};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverName {
    TwoStage,
    Iht,
    Qzf,
    ExhaustiveBinary,
    ExhaustiveTernary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NormalizationArg {
    FullArray,
    ActiveComponents,
}

fn parse_order(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(m @ (4 | 8 | 16)) => Ok(m),
        _ => Err(format!("modulation order must be 4, 8 or 16, got {s:?}")),
    }
}

/// `start:step:stop` in dB, endpoints inclusive, or a single value.
pub fn parse_snr_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad SNR value {p:?}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [single] => Ok(vec![*single]),
        [start, step, stop] => {
            if !(*step > 0.0) || stop < start {
                return Err(format!("SNR range {s:?} needs step > 0 and stop >= start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| start + step * i as f64).collect())
        }
        _ => Err(format!("SNR must be start:step:stop or a single value, got {s:?}")),
    }
}

#[derive(Clone, Debug)]
struct SnrPoints(Vec<f64>);

fn parse_snr_points(s: &str) -> Result<SnrPoints, String> {
    parse_snr_range(s).map(SnrPoints)
}

#[derive(Debug, Parser)]
#[command(name = "onebit", version, about = "One-bit precoding with antenna selection: SER sweeps")]
struct Args {
    /// Transmit antennas.
    #[arg(long, default_value_t = 128)]
    nt: usize,
    /// Single-antenna users.
    #[arg(long, default_value_t = 16)]
    k: usize,
    /// PSK order (4, 8 or 16).
    #[arg(long = "mod", default_value = "4", value_parser = parse_order)]
    order: usize,
    /// SNR points in dB as start:step:stop.
    #[arg(long, default_value = "-10:2:20", value_parser = parse_snr_points, allow_hyphen_values = true)]
    snr: SnrPoints,
    /// Trials per SNR point.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "two-stage")]
    solver: SolverName,
    /// IHT threshold.
    #[arg(long, default_value_t = 3.0)]
    delta: f64,
    /// IHT iteration cap.
    #[arg(long, default_value_t = 12)]
    tmax: usize,
    /// Bit-flipping sweeps (stops early at a fixed point).
    #[arg(long, default_value_t = 1)]
    sweeps: usize,
    /// Largest 2*Nt an exhaustive search will take on.
    #[arg(long, default_value_t = crate::precoders::DEFAULT_EXHAUSTIVE_CAP)]
    exhaustive_cap: usize,
    #[arg(long, value_enum, default_value = "full-array")]
    normalization: NormalizationArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Comma-separated solvers to run on paired realizations.
    #[arg(long, value_enum, value_delimiter = ',')]
    compare: Option<Vec<SolverName>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Invocation {
    pub config: SimConfig,
    /// Solvers to sweep; more than one in compare mode.
    pub solvers: Vec<SolverKind>,
    pub compare: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: usize,
}

#[derive(Debug)]
pub enum CliError {
    /// `--help` / `--version` text.
    Info(String),
    Usage(String),
    Refusal(SolverRefusal),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Refusal(_) => EXIT_REFUSAL,
            CliError::Run(Error::Refusal(_)) => EXIT_REFUSAL,
            CliError::Run(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Info(s) | CliError::Usage(s) => f.write_str(s.trim_end()),
            CliError::Refusal(r) => write!(f, "{r}"),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

fn solver_kind(name: SolverName, iht: IhtConfig, sweeps: usize, cap: usize) -> SolverKind {
    match name {
        SolverName::TwoStage => SolverKind::TwoStage { iht, sweeps },
        SolverName::Iht => SolverKind::Iht { iht },
        SolverName::Qzf => SolverKind::Qzf,
        SolverName::ExhaustiveBinary => SolverKind::Exhaustive { alphabet: Alphabet::Binary, cap },
        SolverName::ExhaustiveTernary => SolverKind::Exhaustive { alphabet: Alphabet::Ternary, cap },
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| {
        let text = e.render().to_string();
        match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Info(text),
            _ => CliError::Usage(text),
        }
    })?;

    let iht = IhtConfig::new(args.delta, args.tmax).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.sweeps == 0 {
        return Err(CliError::Usage("--sweeps must be at least 1".into()));
    }
    let names = args.compare.clone().unwrap_or_else(|| vec![args.solver]);
    let solvers: Vec<SolverKind> =
        names.iter().map(|&n| solver_kind(n, iht, args.sweeps, args.exhaustive_cap)).collect();

    let config = SimConfig {
        antennas: args.nt,
        users: args.k,
        order: args.order,
        snr_db: args.snr.0,
        trials: args.trials,
        seed: args.seed,
        solver: solvers[0].clone(),
        normalization: match args.normalization {
            NormalizationArg::FullArray => PowerNormalization::FullArray,
            NormalizationArg::ActiveComponents => PowerNormalization::ActiveComponents,
        },
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if args.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let compare = args.compare.is_some();
    if !compare {
        solvers[0].check_size(config.antennas, config.users).map_err(CliError::Refusal)?;
    }

    Ok(Invocation {
        config,
        solvers,
        compare,
        format: match args.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        out: args.out,
        workers: args.workers,
    })
}

/// Result of running an invocation.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub curves: Vec<SerCurve>,
    pub manifest: RunManifest,
    pub refusals: Vec<SolverRefusal>,
}

/// One sweep per solver, all on the same seed so realizations are paired.
pub fn compare_command(cfg: &SimConfig, solvers: &[SolverKind], workers: usize) -> Result<RunOutput, Error> {
    let started = Instant::now();
    let mut curves = Vec::new();
    let mut refusals = Vec::new();
    for solver in solvers {
        let cfg = SimConfig { solver: solver.clone(), ..cfg.clone() };
        match run_sweep_on(&cfg, solver, workers) {
            Ok(c) => curves.push(c),
            Err(Error::Refusal(r)) => refusals.push(r),
            Err(e) => return Err(e),
        }
    }
    if curves.is_empty() {
        if let Some(r) = refusals.first() {
            return Err(Error::Refusal(r.clone()));
        }
    }
    let iterations = curves
        .iter()
        .find_map(|c| c.points.first().and_then(|p| p.mean_tstar))
        .map(|t| t.round() as usize)
        .or_else(|| solvers.iter().find_map(|s| s.iht_config().map(|c| c.max_iterations)))
        .unwrap_or(IhtConfig::default().max_iterations);
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        solvers: solvers.iter().map(|s| s.label().to_string()).collect(),
        workers,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        complexity: RunManifest::summarize(&curves),
        formulas: complexity_formulas(cfg.antennas, cfg.users, iterations),
        refusals: refusals.iter().map(ToString::to_string).collect(),
    };
    Ok(RunOutput { curves, manifest, refusals })
}

pub fn run(inv: &Invocation) -> Result<RunOutput, CliError> {
    compare_command(&inv.config, &inv.solvers, inv.workers).map_err(|e| match e {
        Error::Refusal(r) => CliError::Refusal(r),
        e => CliError::Run(e),
    })
}

fn write_outputs(inv: &Invocation, out: &RunOutput) -> Result<(), Error> {
    let body = emit_results(&out.curves, &out.manifest, inv.format)?;
    match &inv.out {
        Some(path) => {
            std::fs::write(path, body)?;
            if inv.format == Format::Csv {
                let mut sidecar = path.clone().into_os_string();
                sidecar.push(".manifest.json");
                std::fs::write(sidecar, serde_json::to_string_pretty(&out.manifest)? + "\n")?;
            }
        }
        None => print!("{body}"),
    }
    Ok(())
}

/// Entry point; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match parse_args(argv) {
        Ok(inv) => inv,
        Err(CliError::Info(text)) => {
            print!("{text}");
            return 0;
        }
        Err(e) => {
            eprintln!("onebit: {e}");
            return e.exit_code();
        }
    };
    let out = match run(&inv) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("onebit: {e}");
            return e.exit_code();
        }
    };
    for r in &out.refusals {
        eprintln!("onebit: {r}");
    }
    let f = &out.manifest.formulas;
    eprintln!(
        "complexity (Nt={}, K={}, t*={}): chi_E={} chi_AS={} chi_S={} chi_P={}",
        f.antennas, f.users, f.iterations, f.exhaustive, f.antenna_selection, f.symbol_scaling, f.proposed
    );
    match write_outputs(&inv, &out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("onebit: {e}");
            1
        }
    }
}
