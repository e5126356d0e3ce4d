//! `facloc` command-line front end.
//!
//! Every command writes one document (JSON or CSV) to `--out` or stdout.
//! Exit status: 0 when every verdict passes, 1 when one fails, 2 for usage
//! and input errors.

pub mod io;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use facloc_core::experiments::{default_z_grid, z_grid_points};
use facloc_core::numfmt::{csv_num, to_json};
use facloc_core::{
    alg_solve, build_metric, corollary_regime, derive_seed, kappa, opt_exact, opt_exact_k,
    opt_lower_tail_bound, run_bound_suite, run_distribution_suite, run_ratio_experiment, run_sweep,
    sample_edge_weights, stream_from_seed, theorem2_bound, CostSpec, ExperimentConfig,
    ExperimentKind, Instance, Solution,
};
use serde::Serialize;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl std::error::Error for CliError {}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

impl From<facloc_core::Error> for CliError {
    fn from(e: facloc_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "facloc", version, about = "Facility location on random shortest path metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        costs: CostArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve an instance with the heuristic and, for n <= 20, exactly.
    Solve {
        /// Instance file; otherwise one is sampled from --n/--seed.
        #[arg(long, conflicts_with_all = ["n", "seed"])]
        instance: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        costs: CostArgs,
        /// Also solve with exactly this many open facilities.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Distributional checks on the heuristic's cost.
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        costs: CostArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the closed-form bounds for a cost profile.
    Bounds {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        costs: CostArgs,
        /// `lo:hi:steps` for the OPT tail bound table.
        #[arg(long, value_parser = parse_z_grid)]
        z_grid: Option<(f64, f64, usize)>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run one seeded experiment.
    Experiment {
        #[arg(long, value_enum, default_value_t = KindArg::Ratio)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        costs: CostArgs,
        #[command(flatten)]
        run: RunArgs,
        /// `lo:hi:steps` for the OPT tail comparison (bounds kind).
        #[arg(long, value_parser = parse_z_grid)]
        z_grid: Option<(f64, f64, usize)>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ratio experiments over several sizes.
    Sweep {
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Equal opening cost (required: explicit lists fix a single n).
        #[arg(long)]
        equal_cost: f64,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Opening cost shared by every facility.
    #[arg(long, conflicts_with = "costs")]
    pub equal_cost: Option<f64>,
    /// File with one cost per facility (JSON array or separated numbers).
    #[arg(long)]
    pub costs: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// KS significance level, 0.05 or 0.01.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ratio,
    Distribution,
    Bounds,
}

fn parse_z_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts[..] else {
        return Err(format!("expected lo:hi:steps, got {s:?}"));
    };
    let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
    let steps: usize = steps.parse().map_err(|e| format!("steps: {e}"))?;
    z_grid_points((lo, hi, steps)).map_err(|e| e.to_string())?;
    Ok((lo, hi, steps))
}

/// Result of a command: the rendered document and whether every verdict
/// passed.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub pass: bool,
    /// Human-readable table for stderr.
    pub summary: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

fn cost_spec(args: &CostArgs) -> Result<CostSpec, CliError> {
    match (args.equal_cost, &args.costs) {
        (Some(f), None) => Ok(CostSpec::Equal(f)),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(CostSpec::Explicit(io::parse_cost_list(&text)?))
        }
        (None, None) => Err(CliError::Usage("one of --equal-cost or --costs is required".into())),
        (Some(_), Some(_)) => Err(CliError::Usage("--equal-cost and --costs are exclusive".into())),
    }
}

fn sample_instance(n: usize, seed: u64, spec: &CostSpec) -> Result<Instance, CliError> {
    let raw = spec.raw(n)?;
    let weights = sample_edge_weights(n, &mut stream_from_seed(derive_seed(seed, &[])))?;
    let metric = build_metric(&weights);
    Ok(Instance::new(metric, raw)?.with_weights(weights))
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = to_json(v).expect("serializable");
    s.push('\n');
    s
}

fn solution_row(label: &str, s: &Solution) -> String {
    let open: Vec<String> = s.open.iter().map(|u| u.to_string()).collect();
    format!(
        "{label},{},{},{},{},{}\n",
        s.open.len(),
        open.join(" "),
        csv_num(s.opening_cost),
        csv_num(s.connection_cost),
        csv_num(s.total)
    )
}

#[derive(Serialize)]
struct SolveReport {
    n: usize,
    kappa: usize,
    alg: Solution,
    opt: Option<Solution>,
    opt_k: Option<Solution>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct TailBoundPoint {
    z: f64,
    bound: f64,
}

#[derive(Serialize)]
struct BoundsReport {
    n: usize,
    kappa: usize,
    regime: Option<&'static str>,
    report: facloc_core::BoundReport,
    tail_grid: Vec<TailBoundPoint>,
}

fn experiment_config(
    kind: ExperimentKind,
    n: usize,
    costs: CostSpec,
    run: &RunArgs,
    z_grid: Option<(f64, f64, usize)>,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind, n, costs, run.reps, run.seed);
    cfg.alpha = run.alpha;
    cfg.z_grid = z_grid;
    cfg
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(pool.install(f))
}

/// Runs a parsed command and renders its output.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Gen { n, seed, costs, out } => {
            let inst = sample_instance(*n, *seed, &cost_spec(costs)?)?;
            let output = match out.format {
                Format::Json => {
                    let mut s = io::instance_to_json(&inst);
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = String::from("u,v,distance\n");
                    for u in 0..inst.n() {
                        for v in u + 1..inst.n() {
                            s.push_str(&format!("{u},{v},{}\n", csv_num(inst.metric().dist(u, v))));
                        }
                    }
                    s
                }
            };
            Ok(Outcome { output, pass: true, summary: None })
        }
        Command::Solve { instance, n, seed, costs, k, out } => {
            let inst = match instance {
                Some(path) => io::read_instance(path)?,
                None => {
                    let n = n.ok_or_else(|| CliError::Usage("--n or --instance is required".into()))?;
                    sample_instance(n, seed.unwrap_or(0), &cost_spec(costs)?)?
                }
            };
            let alg = alg_solve(&inst);
            let mut warnings = inst.warnings().to_vec();
            let opt = match opt_exact(&inst) {
                Ok(s) => Some(s),
                Err(facloc_core::Error::SizeLimit { n, max }) => {
                    warnings.push(format!("OPT skipped: n = {n} exceeds {max}"));
                    None
                }
                Err(e) => return Err(e.into()),
            };
            let opt_k = k.map(|k| opt_exact_k(&inst, k)).transpose()?;
            let report = SolveReport { n: inst.n(), kappa: kappa(inst.costs()).kappa, alg, opt, opt_k, warnings };
            let output = match out.format {
                Format::Json => json(&report),
                Format::Csv => {
                    let mut s = String::from("solution,size,open,opening_cost,connection_cost,total\n");
                    s.push_str(&solution_row("ALG", &report.alg));
                    if let Some(o) = &report.opt {
                        s.push_str(&solution_row("OPT", o));
                    }
                    if let Some(o) = &report.opt_k {
                        s.push_str(&solution_row("OPT_k", o));
                    }
                    s
                }
            };
            Ok(Outcome { output, pass: true, summary: None })
        }
        Command::Verify { n, costs, run, out } => {
            let cfg = experiment_config(ExperimentKind::Distribution, *n, cost_spec(costs)?, run, None);
            let result = with_threads(run.threads, || run_distribution_suite(&cfg))??;
            Ok(render_result(&result, out.format))
        }
        Command::Bounds { n, costs, z_grid, out } => {
            let spec = cost_spec(costs)?;
            let profile = spec.profile(*n)?;
            if *n < 2 {
                return Err(CliError::Usage(format!("need n >= 2, got {n}")));
            }
            let report = theorem2_bound(&profile);
            let regime = match spec {
                CostSpec::Equal(f) => Some(corollary_regime(*n, f)?.label()),
                CostSpec::Explicit(_) => None,
            };
            let zs = z_grid_points(z_grid.unwrap_or_else(|| default_z_grid(&profile)))?;
            let tail_grid = zs.into_iter().map(|z| TailBoundPoint { z, bound: opt_lower_tail_bound(z, &profile) }).collect();
            let pass = bounds_finite(&report);
            let doc = BoundsReport { n: *n, kappa: kappa(&profile).kappa, regime, report, tail_grid };
            let output = match out.format {
                Format::Json => json(&doc),
                Format::Csv => doc.report.to_csv(),
            };
            Ok(Outcome { output, pass, summary: None })
        }
        Command::Experiment { kind, n, costs, run, z_grid, out } => {
            let kind = match kind {
                KindArg::Ratio => ExperimentKind::Ratio,
                KindArg::Distribution => ExperimentKind::Distribution,
                KindArg::Bounds => ExperimentKind::Bounds,
            };
            let cfg = experiment_config(kind, *n, cost_spec(costs)?, run, *z_grid);
            let result = with_threads(run.threads, || match kind {
                ExperimentKind::Distribution => run_distribution_suite(&cfg),
                ExperimentKind::Bounds => run_bound_suite(&cfg),
                _ => run_ratio_experiment(&cfg),
            })??;
            Ok(render_result(&result, out.format))
        }
        Command::Sweep { n, equal_cost, run, out } => {
            let cfg = experiment_config(ExperimentKind::Sweep, 0, CostSpec::Equal(*equal_cost), run, None);
            let table = with_threads(run.threads, || run_sweep(&cfg, n))??;
            let output = match out.format {
                Format::Json => json(&table),
                Format::Csv => table.to_csv(),
            };
            Ok(Outcome { output, pass: table.all_pass(), summary: Some(table.summary()) })
        }
    }
}

fn bounds_finite(r: &facloc_core::BoundReport) -> bool {
    let pos = |x: f64| x.is_finite() && x >= 0.0;
    pos(r.theorem2_value)
        && pos(r.max_term)
        && pos(r.variance_sum)
        && pos(r.alg_second_moment)
        && r.per_k.iter().all(|b| pos(b.exk_lower) && pos(b.exk_upper) && pos(b.exk2_upper) && pos(b.var_upper))
}

fn render_result(result: &facloc_core::ExperimentResult, format: Format) -> Outcome {
    let output = match format {
        Format::Json => json(result),
        Format::Csv => result.records_csv(),
    };
    Outcome { output, pass: result.all_pass(), summary: Some(result.summary()) }
}

/// Writes `outcome` to `--out` or stdout.
pub fn emit(outcome: &Outcome, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, &outcome.output).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.output.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Input(format!("stdout: {e}")))
        }
    }
}

impl Command {
    pub fn out_path(&self) -> Option<&PathBuf> {
        match self {
            Command::Gen { out, .. }
            | Command::Solve { out, .. }
            | Command::Verify { out, .. }
            | Command::Bounds { out, .. }
            | Command::Experiment { out, .. }
            | Command::Sweep { out, .. } => out.out.as_ref(),
        }
    }
}
