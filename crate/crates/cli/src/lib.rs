//! `umtlab` command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage, config and admissibility errors,
//! 3 for runtime failures.

pub mod config;
pub mod output;
pub mod plot;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use umtlab_core::bounds::{
    cn_bound, cn_lower_bound, gamma_threshold, kg_bound, occam_bound, rt_bound, BoundValue, CnBoundParams,
    CnLowerBoundParams, KgBoundParams, RtBoundParams, ThetaCount, DEFAULT_LOWER_BOUND_CONSTANT,
};
use umtlab_core::experiments::{certify_ambiguity_bound, preset, run_experiment, CertifyConfig, ExperimentConfig};
use umtlab_core::models::format::{format_float, write_cn, write_kg, write_lb, write_rt};
use umtlab_core::models::{gen_cn, gen_kg, gen_lower_bound_instance, gen_rt, CnParams, KgParams, LbParams, RtParams};
use umtlab_core::rng::GENERATOR_TAG;
use umtlab_core::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self { code: EXIT_RUNTIME, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::Config(_) | Error::Admissibility(_) | Error::Parameter(_) => Self::usage(e.to_string()),
            _ => Self::runtime(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::runtime(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "umtlab", version, about = "Unsupervised translation simulations and bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment grid and write cells.csv, aggregate.csv and manifest.txt.
    Run(RunArgs),
    /// Evaluate a closed-form bound; prints `kind value vacuous_flag`.
    Bounds {
        #[command(subcommand)]
        kind: BoundsKind,
    },
    /// Render an aggregate CSV as an SVG line chart.
    Plot(PlotArgs),
    /// Generate one instance and dump it in the instance text format.
    Generate(GenerateArgs),
    /// Monte-Carlo check of the likelihood maximizer against ε_γ.
    Certify(CertifyArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Config file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in preset name.
    #[arg(long)]
    pub preset: Option<String>,
    /// Master seed; overrides the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; overrides `out_dir` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads. Never changes results.
    #[arg(long, env = "UMTLAB_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ThetaArgs {
    /// |Θ| as an integer.
    #[arg(long)]
    pub theta: Option<u128>,
    /// |Θ| = k!.
    #[arg(long)]
    pub theta_factorial: Option<u64>,
    /// ln |Θ|.
    #[arg(long)]
    pub theta_ln: Option<f64>,
}

impl ThetaArgs {
    fn count(&self) -> Result<ThetaCount, Error> {
        match (self.theta, self.theta_factorial, self.theta_ln) {
            (Some(c), _, _) => ThetaCount::from_count(c),
            (_, Some(k), _) => Ok(ThetaCount::factorial(k)),
            (_, _, Some(ln)) => ThetaCount::from_ln(ln),
            _ => Err(Error::Config("one of --theta, --theta-factorial, --theta-ln is required".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum BoundsKind {
    /// Knowledge graph upper bound.
    Kg {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Common nonsense upper bound.
    Cn {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        t_size: f64,
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
        /// Use the 8/((1−α)|T|) floor instead of 16/|T|.
        #[arg(long)]
        proof_form: bool,
    },
    /// Common nonsense lower bound.
    Lb {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        t_size: f64,
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_LOWER_BOUND_CONSTANT)]
        c2: f64,
    },
    /// Random tree upper bound.
    Rt {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        depth: u64,
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        delta: f64,
    },
    /// Ambiguity threshold ln(|Θ|/δ)/m.
    Gamma {
        #[arg(long)]
        m: f64,
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        delta: f64,
    },
    /// Supervised Occam bound; agnostic when --loss is given.
    Occam {
        #[arg(long)]
        m: f64,
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long)]
        delta: f64,
        /// Loss of the ground truth.
        #[arg(long)]
        loss: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Aggregate CSV.
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "m")]
    pub x: String,
    #[arg(long, default_value = "mean")]
    pub y: String,
    #[arg(long, default_value = "alpha")]
    pub series: String,
    /// Metric to plot; defaults to the first in the file.
    #[arg(long)]
    pub metric: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// kg, cn, rt or lb.
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub t_size: Option<usize>,
    #[arg(long)]
    pub p_size: Option<usize>,
    #[arg(long)]
    pub family_size: Option<usize>,
    #[arg(long)]
    pub vocab_size: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub theta_count: Option<u128>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, default_value_t = CertifyConfig::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = CertifyConfig::default().m)]
    pub m: usize,
    #[arg(long, default_value_t = CertifyConfig::default().trials)]
    pub trials: usize,
    #[arg(long, default_value_t = CertifyConfig::default().delta)]
    pub delta: f64,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn load_run_config(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            config::parse_config(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => preset(name)?,
        (None, None) => return Err(CliError::usage("one of --config or --preset is required")),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.out_dir = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let start = unix_now();
    let config = load_run_config(args)?;
    let out_dir =
        config.out_dir.clone().ok_or_else(|| CliError::usage("no output directory: pass --out or set out_dir"))?;
    if args.threads == Some(0) {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    let output = run_experiment(&config, args.threads)?;

    let mut warnings: Vec<&str> =
        output.cells.iter().flat_map(|c| c.meta.warnings.iter().map(String::as_str)).collect();
    warnings.sort_unstable();
    warnings.dedup();
    for w in warnings {
        eprintln!("warning: {w}");
    }
    if output.aggregate.iter().any(|r| r.single_replicate) {
        eprintln!("warning: single replicate; stderr reported as 0");
    }

    fs::create_dir_all(&out_dir).map_err(|e| io_error(&out_dir, e))?;
    let cells_path = out_dir.join("cells.csv");
    let aggregate_path = out_dir.join("aggregate.csv");
    let mut cells = create(&cells_path)?;
    output::write_cells(&output.cells, &mut cells).map_err(|e| io_error(&cells_path, e))?;
    cells.flush().map_err(|e| io_error(&cells_path, e))?;
    let mut agg = create(&aggregate_path)?;
    output::write_aggregate(&output.aggregate, &mut agg).map_err(|e| io_error(&aggregate_path, e))?;
    agg.flush().map_err(|e| io_error(&aggregate_path, e))?;

    let manifest = output::RunManifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        config_echo: output::echo_config(&config),
        seed: config.seed,
        generator: GENERATOR_TAG,
        start_unix: start,
        end_unix: unix_now(),
        outputs: vec!["cells.csv".into(), "aggregate.csv".into()],
    };
    let manifest_path = out_dir.join("manifest.txt");
    let mut file = create(&manifest_path)?;
    manifest.write(&mut file).and_then(|_| file.flush()).map_err(|e| io_error(&manifest_path, e))?;
    println!(
        "{} cells, {} aggregate rows written to {}",
        output.cells.len(),
        output.aggregate.len(),
        out_dir.display()
    );
    Ok(())
}

/// Evaluates a bound, returning its printed name and value.
pub fn evaluate_bound(kind: &BoundsKind) -> Result<(&'static str, BoundValue), Error> {
    Ok(match kind {
        &BoundsKind::Kg { m, n, r, p, alpha, delta } => ("kg", kg_bound(&KgBoundParams { m, n, r, p, alpha, delta })?),
        BoundsKind::Cn { m, t_size, theta, alpha, delta, proof_form } => (
            "cn",
            cn_bound(&CnBoundParams {
                m: *m,
                t_size: *t_size,
                theta: theta.count()?,
                alpha: *alpha,
                delta: *delta,
                proof_form: *proof_form,
            })?,
        ),
        BoundsKind::Lb { m, t_size, theta, alpha, c2 } => (
            "lb",
            cn_lower_bound(&CnLowerBoundParams {
                m: *m,
                t_size: *t_size,
                theta: theta.count()?,
                alpha: *alpha,
                c2: *c2,
            })?,
        ),
        BoundsKind::Rt { m, a, depth, theta, delta } => {
            ("rt", rt_bound(&RtBoundParams { m: *m, a: *a, depth: *depth, theta: theta.count()?, delta: *delta })?)
        }
        BoundsKind::Gamma { m, theta, delta } => {
            let value = gamma_threshold(*m, theta.count()?, *delta)?;
            ("gamma", BoundValue { value, vacuous: value >= 1.0 })
        }
        BoundsKind::Occam { m, theta, delta, loss } => {
            ("occam", occam_bound(*m, theta.count()?, *delta, loss.is_none(), loss.unwrap_or(0.0))?)
        }
    })
}

pub fn cmd_bounds(kind: &BoundsKind) -> Result<String, CliError> {
    let (name, value) = evaluate_bound(kind)?;
    Ok(format!("{name} {} {}", format_float(value.value), value.vacuous))
}

pub fn cmd_plot(args: &PlotArgs) -> Result<(), CliError> {
    let input = File::open(&args.input).map_err(|e| io_error(&args.input, e))?;
    let spec = plot::PlotSpec {
        x: args.x.clone(),
        y: args.y.clone(),
        series: args.series.clone(),
        metric: args.metric.clone(),
    };
    let svg = plot::render_svg(input, &spec).map_err(|e| CliError::usage(format!("{}: {e}", args.input.display())))?;
    fs::write(&args.out, svg).map_err(|e| io_error(&args.out, e))
}

fn need<T: Copy>(value: Option<T>, flag: &str, model: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("--{flag} is required for model {model}")))
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let mut buffer = Vec::new();
    let model = args.model.as_str();
    match model {
        "kg" => {
            let params = KgParams {
                n: need(args.n, "n", model)?,
                r: need(args.r, "r", model)?,
                p: need(args.p, "p", model)?,
                alpha: need(args.alpha, "alpha", model)?,
            };
            write_kg(&gen_kg(args.seed, params)?, args.seed, &mut buffer)?;
        }
        "cn" => {
            let params = CnParams {
                t_size: need(args.t_size, "t-size", model)?,
                p_size: need(args.p_size, "p-size", model)?,
                alpha: need(args.alpha, "alpha", model)?,
                family_size: need(args.family_size, "family-size", model)?,
            };
            write_cn(&gen_cn(args.seed, params)?, args.seed, &mut buffer)?;
        }
        "rt" => {
            let params = RtParams::new(
                need(args.vocab_size, "vocab-size", model)?,
                need(args.depth, "depth", model)?,
                need(args.a, "a", model)?,
                need(args.b, "b", model)?,
            );
            write_rt(&gen_rt(args.seed, params)?, args.seed, &mut buffer)?;
        }
        "lb" => {
            let params = LbParams::new(
                need(args.theta_count, "theta-count", model)?,
                need(args.alpha, "alpha", model)?,
                need(args.m, "m", model)?,
                need(args.t_size, "t-size", model)?,
            );
            write_lb(&gen_lower_bound_instance(args.seed, params)?, args.seed, &mut buffer)?;
        }
        other => return Err(CliError::usage(format!("unknown model `{other}` (expected kg, cn, rt or lb)"))),
    }
    match &args.out {
        Some(path) => fs::write(path, &buffer).map_err(|e| io_error(path, e)),
        None => std::io::stdout().write_all(&buffer).map_err(|e| CliError::runtime(e.to_string())),
    }
}

pub fn cmd_certify(args: &CertifyArgs) -> Result<String, CliError> {
    let report = certify_ambiguity_bound(&CertifyConfig {
        seed: args.seed,
        m: args.m,
        trials: args.trials,
        delta: args.delta,
        ..CertifyConfig::default()
    })?;
    Ok(format!(
        "family_size = {}\ngamma = {}\nepsilon_gamma = {}\nsuccesses = {}/{}\nfrequency = {}\ntarget = {}\nslack = {}\npassed = {}",
        report.family_size,
        format_float(report.gamma),
        format_float(report.epsilon_gamma),
        report.successes,
        report.trials,
        format_float(report.frequency),
        format_float(report.target),
        format_float(report.slack),
        report.passed
    ))
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Bounds { kind } => cmd_bounds(kind).map(|line| println!("{line}")),
        Command::Plot(args) => cmd_plot(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Certify(args) => cmd_certify(args).map(|text| println!("{text}")),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
