//! Command-line definitions and config-file merging.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fluid_aoi::analytic::Metric;
use fluid_aoi::{Buffer, Reservoir};

#[derive(Debug, Parser)]
#[command(name = "fluid-aoi", version, about = "Age of Information for fluid-reservoir regulated queues")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate metrics at one parameter point.
    Eval(EvalArgs),
    /// Evaluate metrics over a grid of arrival rates.
    Sweep(SweepArgs),
    /// Simulate one parameter point.
    Simulate(SimulateArgs),
    /// Reproduce the reservoir-capacity table.
    Table1(Table1Args),
    /// Check simulation confidence intervals against the closed forms.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Engine {
    Analytic,
    Simulation,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Simulation => "simulation",
        }
    }
}

/// Subfigure presets: `(r+, r-)` pairs with `mu1 = 1`; `fig3*` sweep the
/// mean AoI with an infinite buffer, `fig4*` the mean peak AoI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
}

impl Preset {
    pub fn rates(self) -> (f64, f64) {
        match self {
            Preset::Fig3a | Preset::Fig4a => (1.0, 4.0),
            Preset::Fig3b | Preset::Fig4b => (1.0, 3.0),
            Preset::Fig3c | Preset::Fig4c => (1.0, 2.0),
            Preset::Fig3d | Preset::Fig4d => (2.0, 3.0),
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Preset::Fig3a | Preset::Fig3b | Preset::Fig3c | Preset::Fig3d => Metric::MeanAoi,
            _ => Metric::PeakAoi,
        }
    }
}

fn parse_buffer(s: &str) -> Result<Buffer, String> {
    if s == "inf" {
        return Ok(Buffer::Infinite);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Buffer::Finite(n)),
        _ => Err(format!("expected a positive integer or 'inf', got '{s}'")),
    }
}

fn parse_reservoir(s: &str) -> Result<Reservoir, String> {
    if s == "inf" {
        return Ok(Reservoir::Infinite);
    }
    match s.parse::<f64>() {
        Ok(d) if d.is_finite() && d > 0.0 => Ok(Reservoir::Finite(d)),
        _ => Err(format!("expected a positive number or 'inf', got '{s}'")),
    }
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|_| format!("expected one of blocking, mean-aoi, peak-aoi, sojourn, got '{s}'"))
}

/// Model parameters. Rates without a default are checked by each command.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Packet arrival rate.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Service rate while the reservoir holds energy.
    #[arg(long)]
    pub mu1: Option<f64>,
    /// Service rate while the reservoir is empty.
    #[arg(long)]
    pub mu2: Option<f64>,
    /// Energy harvesting rate.
    #[arg(long)]
    pub r_plus: Option<f64>,
    /// Energy consumption rate while serving.
    #[arg(long)]
    pub r_minus: Option<f64>,
    /// Buffer capacity including the packet in service.
    #[arg(long, value_parser = parse_buffer, default_value = "inf")]
    pub buffer: Buffer,
    /// Reservoir capacity.
    #[arg(long, value_parser = parse_reservoir, default_value = "inf")]
    pub reservoir: Reservoir,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Base seed; replication streams derive from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simulated time per replication.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Initial time excluded from statistics [default: 10% of the horizon].
    #[arg(long)]
    pub warmup: Option<f64>,
    /// Number of independent replications.
    #[arg(long)]
    pub reps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key=value file with the same names as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated metrics.
    #[arg(long, value_parser = parse_metric, value_delimiter = ',', default_value = "peak-aoi")]
    pub metric: Vec<Metric>,
    /// Comma-separated engines.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "analytic")]
    pub engine: Vec<Engine>,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated metrics [default: peak-aoi, or the preset's metric].
    #[arg(long, value_parser = parse_metric, value_delimiter = ',')]
    pub metric: Vec<Metric>,
    /// Comma-separated engines.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "analytic")]
    pub engine: Vec<Engine>,
    /// First arrival rate [default: lower end of the feasible interval].
    #[arg(long)]
    pub lambda_start: Option<f64>,
    /// Last arrival rate [default: upper end of the feasible interval].
    #[arg(long)]
    pub lambda_stop: Option<f64>,
    /// Grid spacing.
    #[arg(long, default_value_t = 0.01)]
    pub lambda_step: f64,
    /// Append the analytic minimizer of each metric.
    #[arg(long)]
    pub find_min: bool,
    /// Subfigure preset fixing mu1 = 1, (r+, r-) and the metric.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated metrics.
    #[arg(long, value_parser = parse_metric, value_delimiter = ',', default_value = "blocking,mean-aoi,peak-aoi,sojourn")]
    pub metric: Vec<Metric>,
    /// Must be `simulation` if given.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "simulation")]
    pub engine: Vec<Engine>,
    /// Write every packet of every replication as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

const SUBCOMMANDS: [&str; 5] = ["eval", "sweep", "simulate", "table1", "validate"];

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut found = None;
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            found = iter.next().map(PathBuf::from);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            found = Some(PathBuf::from(path));
        }
    }
    found
}

/// Translate a key=value file into flags. Blank lines and `#` comments are
/// skipped; `_` in keys is accepted in place of `-`; `key=true` stands for a
/// bare switch.
pub fn config_flags(path: &Path) -> Result<Vec<String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut flags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value, got '{line}'", path.display(), i + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(format!("{}:{}: config files cannot include other config files", path.display(), i + 1));
        }
        match value {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            _ => flags.push(format!("--{key}={value}")),
        }
    }
    Ok(flags)
}

/// Insert the flags from `--config` right after the subcommand so that flags
/// given on the command line take precedence.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let Some(pos) = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(args);
    };
    let mut expanded = args[..=pos].to_vec();
    expanded.extend(config_flags(&path)?);
    expanded.extend_from_slice(&args[pos + 1..]);
    Ok(expanded)
}
