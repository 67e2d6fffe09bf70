//! The `marp` command line.
//!
//! Every command is a pure function of its flags and input files. Each
//! writes a `<output>.manifest.json` next to its main output recording the
//! exact argument vector; `marp replay <manifest>` re-runs it.
//!
//! Exit codes: 0 ok, 2 usage, 3 validation/parse, 4 size limit, 5 I/O.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::coverage::compute_coverage;
use crate::error::{Error, Result};
use crate::instance::{generate_instance, generate_network, load_instance, save_instance, NetworkKind};
use crate::metrics::{full_report, write_metrics_csv, MetricsRow};
use crate::qubo::{build_qubo, import_qubo, PenaltyConfig, ScoreTerms};
use crate::reduction::{is_packing, solve_wsp_via_marp, wsp_brute_force, WspInstance};
use crate::solvers::{default_sa_params, solve_exact, solve_greedy, solve_sa, Solution};
use crate::sweep::{
    binned_frontiers, parse_bins, points_from_rows, run_sweep, singleton_bins, write_pareto_csv,
    SweepConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_SIZE_LIMIT: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// Parameter-threads environment variable; 0 or unset means automatic.
pub const THREADS_ENV: &str = "MARP_THREADS";

pub fn exit_code(err: &Error) -> i32 {
    match err.root() {
        Error::InvalidParameter(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::Parse { .. }
        | Error::Validation(_)
        | Error::NoPath { .. }
        | Error::InsufficientData(_)
        | Error::EmptySelection(_) => EXIT_VALIDATION,
        Error::SizeLimit { .. } => EXIT_SIZE_LIMIT,
        Error::Io { .. } => EXIT_IO,
        Error::InCell { .. } => unreachable!("root() unwraps sweep cells"),
    }
}

#[derive(Debug, Parser)]
#[command(name = "marp", version, about = "Coverage/overlap vehicle selection as a QUBO")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic network and fleet, write the instance JSON.
    Generate(GenerateArgs),
    /// Build the QUBO for an instance and write it in coordinate format.
    Build(BuildArgs),
    /// Minimise a QUBO file and write the solution JSON.
    Solve(SolveArgs),
    /// Compute the metrics row for a solution of an instance.
    Evaluate(EvaluateArgs),
    /// Run a λ / fleet-size sweep from a JSON config.
    Sweep(SweepArgs),
    /// Pareto frontiers and knees from a metrics CSV.
    Pareto(ParetoArgs),
    /// Solve a weighted set packing instance through the QUBO reduction.
    ReduceWsp(ReduceWspArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Grid,
    RandomGeometric,
}

impl From<KindArg> for NetworkKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Grid => NetworkKind::Grid,
            KindArg::RandomGeometric => NetworkKind::RandomGeometric,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegimeArg {
    Soft,
    Hard,
    Custom,
}

impl RegimeArg {
    fn penalty(self, lambda: Option<f64>) -> Result<PenaltyConfig> {
        match (self, lambda) {
            (RegimeArg::Soft, _) => Ok(PenaltyConfig::soft()),
            (RegimeArg::Hard, _) => Ok(PenaltyConfig::hard()),
            (RegimeArg::Custom, Some(v)) => Ok(PenaltyConfig::custom(v)),
            (RegimeArg::Custom, None) => Err(Error::InvalidParameter(
                "--regime custom requires --lambda".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolverArg {
    Exact,
    Sa,
    Greedy,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "grid")]
    pub kind: KindArg,
    /// Grid side length, or node count for random geometric networks.
    #[arg(long)]
    pub size: usize,
    #[arg(long)]
    pub vehicles: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "soft")]
    pub regime: RegimeArg,
    /// Penalty value for `--regime custom`.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also dump `i,u_i` and `i,j,c_ij` rows here.
    #[arg(long)]
    pub stats_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub qubo: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub solver: SolverArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub num_reads: Option<usize>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// Store measured wall time instead of 0 (output no longer reproducible).
    #[arg(long)]
    pub record_timing: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long, value_enum, default_value = "soft")]
    pub lambda_regime: RegimeArg,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    /// Metrics CSV as written by `sweep` or `evaluate`.
    #[arg(long)]
    pub rows: PathBuf,
    /// Comma-separated `lo-hi` fleet ranges; one bin per fleet size if omitted.
    #[arg(long)]
    pub bins: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReduceWspArgs {
    #[arg(long)]
    pub wsp: PathBuf,
    /// Compare against brute-force set packing and report PASS/FAIL.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Written next to each output as `<output>.manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Full argument vector, program name excluded.
    pub args: Vec<String>,
    pub seeds: Vec<u64>,
    pub tool_version: String,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub wall_time_s: f64,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

struct Recorder<'a> {
    command: &'static str,
    args: &'a [String],
    seeds: Vec<u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    start: Instant,
}

impl Recorder<'_> {
    fn finish(self, anchor: &Path) -> Result<()> {
        let manifest = RunManifest {
            command: self.command.to_owned(),
            args: self.args.to_vec(),
            seeds: self.seeds,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            inputs: self.inputs,
            outputs: self.outputs,
            wall_time_s: self.start.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        write_file(&manifest_path(anchor), text)
    }
}

/// Parses `args` (program name first) and runs the command, printing
/// human-readable results to stdout. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let recorded: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match run(cli, &recorded) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            EXIT_OK
        }
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

/// Runs a parsed command and returns the lines it reports. `args` is the
/// argument vector (program name excluded) recorded in manifests.
pub fn run(cli: Cli, args: &[String]) -> Result<Vec<String>> {
    let start = Instant::now();
    let recorder = |command, seeds, inputs, outputs| Recorder {
        command,
        args,
        seeds,
        inputs,
        outputs,
        start,
    };
    match cli.command {
        Command::Generate(a) => {
            if a.vehicles == 0 {
                return Err(Error::InvalidParameter("--vehicles must be at least 1".into()));
            }
            let network = generate_network(a.kind.into(), a.size, a.seed)?;
            let instance = generate_instance(&network, a.vehicles, a.seed)?
                .with_radius_label(format!("{}-{}", NetworkKind::from(a.kind), a.size));
            if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            save_instance(&instance, &a.out)?;
            recorder("generate", vec![a.seed], vec![], vec![a.out.clone()]).finish(&a.out)?;
            Ok(vec![format!(
                "wrote {} ({} nodes, {} edges, {} vehicles)",
                a.out.display(),
                network.node_count(),
                network.edge_count(),
                instance.n_vehicles()
            )])
        }
        Command::Build(a) => {
            let penalty = a.regime.penalty(a.lambda)?;
            let instance = load_instance(&a.instance)?;
            let stats = compute_coverage(&instance);
            let model = build_qubo(&ScoreTerms::from(&stats), &penalty)?;
            write_file(&a.out, crate::qubo::qubo_to_text(&model))?;
            let mut outputs = vec![a.out.clone()];
            if let Some(path) = &a.stats_csv {
                let mut buf = Vec::new();
                stats
                    .write_csv(&mut buf)
                    .map_err(|e| Error::io(path, e))?;
                write_file(path, buf)?;
                outputs.push(path.clone());
            }
            recorder("build", vec![], vec![a.instance.clone()], outputs).finish(&a.out)?;
            Ok(vec![format!(
                "lambda {} ({})",
                format_lambda(model.lambda_used()),
                model.lambda_regime()
            )])
        }
        Command::Solve(a) => {
            let model = import_qubo(&a.qubo)?;
            let mut solution = match a.solver {
                SolverArg::Exact => solve_exact(&model)?,
                SolverArg::Greedy => solve_greedy(&model),
                SolverArg::Sa => {
                    let mut params = default_sa_params(&model);
                    params.seed = a.seed;
                    if let Some(r) = a.num_reads {
                        params.num_reads = r;
                    }
                    if let Some(s) = a.sweeps {
                        params.sweeps = s;
                    }
                    solve_sa(&model, &params)?
                }
            };
            if !a.record_timing {
                solution.wall_time = Default::default();
            }
            write_file(&a.out, solution.to_json())?;
            recorder("solve", vec![a.seed], vec![a.qubo.clone()], vec![a.out.clone()])
                .finish(&a.out)?;
            Ok(vec![format!(
                "energy {} ({} of {} selected, solver {})",
                solution.energy,
                solution.selected().count(),
                model.n(),
                solution.solver
            )])
        }
        Command::Evaluate(a) => {
            let penalty = a.lambda_regime.penalty(a.lambda)?;
            let instance = load_instance(&a.instance)?;
            let solution = Solution::load(&a.solution)?;
            let stats = compute_coverage(&instance);
            let model = build_qubo(&ScoreTerms::from(&stats), &penalty)?;
            let report = full_report(&instance, &stats, &model, &solution)?;
            let row = MetricsRow {
                n_vehicles: instance.n_vehicles(),
                lambda: model.lambda_used(),
                regime: model.lambda_regime(),
                solver: solution.solver,
                report,
                wall_time_s: solution.wall_time.as_secs_f64(),
            };
            let mut buf = Vec::new();
            write_metrics_csv(&[row], &mut buf)?;
            write_file(&a.out, buf)?;
            recorder(
                "evaluate",
                vec![],
                vec![a.instance.clone(), a.solution.clone()],
                vec![a.out.clone()],
            )
            .finish(&a.out)?;
            let mut lines = vec![format!(
                "pct_cov {} pct_ov {} pct_veh {} energy {}",
                report.pct_coverage, report.pct_overlap, report.pct_vehicles, report.objective_energy
            )];
            if solution.selected().next().is_none() {
                lines.push("empty selection: usage-based metrics reported as 0".into());
            }
            Ok(lines)
        }
        Command::Sweep(a) => {
            let config = SweepConfig::load(&a.config).map_err(|e| match e {
                Error::Io { .. } => Error::InvalidParameter(format!(
                    "cannot read sweep config {}: {e}",
                    a.config.display()
                )),
                other => other,
            })?;
            let records = run_sweep(&config)?;
            let rows: Vec<MetricsRow> = records.iter().map(|r| r.row.clone()).collect();
            let metrics_path = a.out_dir.join("metrics.csv");
            let pareto_path = a.out_dir.join("pareto.csv");
            let mut buf = Vec::new();
            write_metrics_csv(&rows, &mut buf)?;
            write_file(&metrics_path, buf)?;
            let frontiers = binned_frontiers(&points_from_rows(&rows), &config.bins());
            let mut buf = Vec::new();
            write_pareto_csv(&frontiers, &mut buf)?;
            write_file(&pareto_path, buf)?;
            recorder(
                "sweep",
                config.seeds.clone(),
                vec![a.config.clone()],
                vec![metrics_path.clone(), pareto_path.clone()],
            )
            .finish(&a.out_dir.join("sweep"))?;
            let mut lines = vec![format!("{} rows -> {}", rows.len(), metrics_path.display())];
            lines.extend(frontier_summary(&frontiers));
            Ok(lines)
        }
        Command::Pareto(a) => {
            let text = fs::read(&a.rows).map_err(|e| Error::io(&a.rows, e))?;
            let rows = crate::metrics::read_metrics_csv(text.as_slice())?;
            let points = points_from_rows(&rows);
            let bins = match &a.bins {
                Some(s) => parse_bins(s)?,
                None => singleton_bins(&points),
            };
            let frontiers = binned_frontiers(&points, &bins);
            let mut buf = Vec::new();
            write_pareto_csv(&frontiers, &mut buf)?;
            write_file(&a.out, buf)?;
            recorder("pareto", vec![], vec![a.rows.clone()], vec![a.out.clone()]).finish(&a.out)?;
            Ok(frontier_summary(&frontiers))
        }
        Command::ReduceWsp(a) => {
            let wsp = WspInstance::load(&a.wsp)?;
            let via = solve_wsp_via_marp(&wsp)?;
            let mut lines = vec![format!(
                "selected {:?} weight {}",
                via.selected, via.weight
            )];
            if a.check {
                let oracle = wsp_brute_force(&wsp)?;
                let pass = via.weight == oracle.weight && is_packing(&wsp, &via.selected);
                lines.push(format!(
                    "{} qubo weight {} brute-force weight {}",
                    if pass { "PASS" } else { "FAIL" },
                    via.weight,
                    oracle.weight
                ));
                if !pass {
                    return Err(Error::Validation(lines.join("; ")));
                }
            }
            Ok(lines)
        }
        Command::Replay(a) => {
            let text = fs::read_to_string(&a.manifest).map_err(|e| Error::io(&a.manifest, e))?;
            let manifest: RunManifest = serde_json::from_str(&text)
                .map_err(|e| Error::parse(a.manifest.display().to_string(), e))?;
            let argv = std::iter::once("marp".to_owned()).chain(manifest.args.iter().cloned());
            let cli = Cli::try_parse_from(argv)
                .map_err(|e| Error::InvalidParameter(format!("manifest arguments: {e}")))?;
            if matches!(cli.command, Command::Replay(_)) {
                return Err(Error::InvalidParameter("manifest records a replay".into()));
            }
            run(cli, &manifest.args)
        }
    }
}

fn format_lambda(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_owned()
}

fn frontier_summary(frontiers: &[(crate::sweep::FleetBin, Vec<crate::sweep::ParetoPoint>)]) -> Vec<String> {
    frontiers
        .iter()
        .map(|(bin, front)| {
            let knee = crate::sweep::knee_point(front)
                .map(|k| format!("knee at pct_cov {} pct_ov {}", k.pct_cov, k.pct_ov))
                .unwrap_or_else(|_| "no knee".into());
            format!("bin {bin}: {} frontier points, {knee}", front.len())
        })
        .collect()
}

/// Caps rayon's global pool from `MARP_THREADS` when set to a positive
/// number. Must run before any parallel work.
pub fn configure_threads() {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}
