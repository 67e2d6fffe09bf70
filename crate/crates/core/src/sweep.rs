//! λ and fleet-size sweeps, per-bin Pareto frontiers over
//! (coverage ↑, overlap ↓), and knee detection.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer};

use crate::coverage::compute_coverage;
use crate::error::{Error, Result};
use crate::instance::{generate_instance, generate_network, MarpInstance, NetworkKind};
use crate::metrics::{full_report, MetricsRow};
use crate::qubo::{build_qubo, LambdaRegime, PenaltyConfig, ScoreTerms};
use crate::solvers::{default_sa_params, solve_exact, solve_greedy, solve_sa, Solution, SolverKind};

/// A λ entry: a number, or `"soft"` / `"hard"` resolved per instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaSpec {
    Soft,
    Hard,
    Value(f64),
}

impl LambdaSpec {
    pub fn penalty(self) -> PenaltyConfig {
        match self {
            LambdaSpec::Soft => PenaltyConfig::soft(),
            LambdaSpec::Hard => PenaltyConfig::hard(),
            LambdaSpec::Value(v) => PenaltyConfig::custom(v),
        }
    }
}

impl<'de> Deserialize<'de> for LambdaSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Name(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(v) => Ok(LambdaSpec::Value(v)),
            Raw::Name(s) if s == "soft" => Ok(LambdaSpec::Soft),
            Raw::Name(s) if s == "hard" => Ok(LambdaSpec::Hard),
            Raw::Name(s) => Err(serde::de::Error::custom(format!(
                "expected a number, \"soft\" or \"hard\", got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverChoice {
    pub kind: SolverKind,
    /// SA only; defaults to the library default.
    #[serde(default)]
    pub num_reads: Option<usize>,
    #[serde(default)]
    pub sweeps: Option<usize>,
}

impl SolverChoice {
    pub fn new(kind: SolverKind) -> Self {
        Self {
            kind,
            num_reads: None,
            sweeps: None,
        }
    }

    pub fn solve(&self, model: &crate::qubo::QuboModel, seed: u64) -> Result<Solution> {
        match self.kind {
            SolverKind::Exact => solve_exact(model),
            SolverKind::Greedy => Ok(solve_greedy(model)),
            SolverKind::Sa => {
                let mut params = default_sa_params(model);
                params.seed = seed;
                if let Some(r) = self.num_reads {
                    params.num_reads = r;
                }
                if let Some(s) = self.sweeps {
                    params.sweeps = s;
                }
                solve_sa(model, &params)
            }
        }
    }
}

/// Inclusive fleet-size range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FleetBin {
    pub lo: usize,
    pub hi: usize,
}

impl FleetBin {
    pub fn contains(&self, fleet: usize) -> bool {
        (self.lo..=self.hi).contains(&fleet)
    }
}

impl fmt::Display for FleetBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl FromStr for FleetBin {
    type Err = Error;

    /// `"lo-hi"` or a single size `"n"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad fleet bin {s:?}, expected lo-hi"));
        let (lo, hi) = match s.split_once('-') {
            Some((lo, hi)) => (lo.trim(), hi.trim()),
            None => (s.trim(), s.trim()),
        };
        let lo: usize = lo.parse().map_err(|_| bad())?;
        let hi: usize = hi.parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok(Self { lo, hi })
    }
}

impl<'de> Deserialize<'de> for FleetBin {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let (lo, hi) = <(usize, usize)>::deserialize(de)?;
        if lo > hi {
            return Err(serde::de::Error::custom(format!("bin [{lo}, {hi}] is reversed")));
        }
        Ok(Self { lo, hi })
    }
}

/// Contiguous bins modelled on desk-scale fleets: 1–30, 31–100, 101–300,
/// 301–1000.
pub const DEFAULT_BINS: [FleetBin; 4] = [
    FleetBin { lo: 1, hi: 30 },
    FleetBin { lo: 31, hi: 100 },
    FleetBin { lo: 101, hi: 300 },
    FleetBin { lo: 301, hi: 1000 },
];

pub fn parse_bins(s: &str) -> Result<Vec<FleetBin>> {
    s.split(',').map(str::parse).collect()
}

fn check_bins(bins: &[FleetBin], fleet_sizes: &[usize]) -> Result<()> {
    let mut sorted = bins.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[1].lo <= w[0].hi) {
        return Err(Error::InvalidParameter("fleet bins overlap".into()));
    }
    if let Some(f) = fleet_sizes.iter().find(|&&f| !bins.iter().any(|b| b.contains(f))) {
        return Err(Error::InvalidParameter(format!("fleet size {f} falls in no bin")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    #[serde(deserialize_with = "network_kind")]
    pub kind: NetworkKind,
    pub size: usize,
    #[serde(default)]
    pub seed: u64,
}

fn network_kind<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<NetworkKind, D::Error> {
    String::deserialize(de)?
        .parse()
        .map_err(serde::de::Error::custom)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub network: NetworkSpec,
    pub fleet_sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub lambda_values: Vec<LambdaSpec>,
    pub solver: SolverChoice,
    #[serde(default)]
    pub bins: Option<Vec<FleetBin>>,
    /// Record measured solver time in rows; off keeps outputs reproducible.
    #[serde(default)]
    pub record_timing: bool,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(&mut de)
            .map_err(|err| Error::parse(err.path().to_string(), err.into_inner()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn bins(&self) -> Vec<FleetBin> {
        self.bins.clone().unwrap_or_else(|| DEFAULT_BINS.to_vec())
    }

    pub fn validate(&self) -> Result<()> {
        if self.fleet_sizes.is_empty() || self.seeds.is_empty() || self.lambda_values.is_empty() {
            return Err(Error::InvalidParameter(
                "fleet_sizes, seeds and lambda_values must be non-empty".into(),
            ));
        }
        if let Some(b) = &self.bins {
            if b.is_empty() {
                return Err(Error::InvalidParameter("bins must be non-empty".into()));
            }
        }
        check_bins(&self.bins(), &self.fleet_sizes)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub row_id: usize,
    pub fleet_size: usize,
    pub seed: u64,
    pub lambda_index: usize,
    pub row: MetricsRow,
}

/// One metrics row per λ for a fixed instance, in `lambdas` order.
pub fn sweep_instance(
    instance: &MarpInstance,
    lambdas: &[LambdaSpec],
    solver: &SolverChoice,
    seed: u64,
    record_timing: bool,
) -> Result<Vec<MetricsRow>> {
    let stats = compute_coverage(instance);
    let terms = ScoreTerms::from(&stats);
    lambdas
        .par_iter()
        .enumerate()
        .map(|(k, spec)| {
            let cell = |e: Error| Error::InCell {
                cell: format!(
                    "fleet_size={} seed={seed} lambda[{k}]={spec:?}",
                    instance.n_vehicles()
                ),
                source: Box::new(e),
            };
            let model = build_qubo(&terms, &spec.penalty()).map_err(cell)?;
            let start = Instant::now();
            let solution = solver.solve(&model, seed).map_err(cell)?;
            let elapsed = start.elapsed().as_secs_f64();
            let report = full_report(instance, &stats, &model, &solution).map_err(cell)?;
            Ok(MetricsRow {
                n_vehicles: instance.n_vehicles(),
                lambda: model.lambda_used(),
                regime: model.lambda_regime(),
                solver: solver.kind,
                report,
                wall_time_s: if record_timing { elapsed } else { 0.0 },
            })
        })
        .collect()
}

/// Rows ordered by (fleet size, seed, λ index) as listed in the config.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let network = generate_network(config.network.kind, config.network.size, config.network.seed)?;
    let label = format!("{}-{}", config.network.kind, config.network.size);
    let cells: Vec<(usize, u64)> = config
        .fleet_sizes
        .iter()
        .flat_map(|&f| config.seeds.iter().map(move |&s| (f, s)))
        .collect();
    let per_cell: Vec<Vec<MetricsRow>> = cells
        .par_iter()
        .map(|&(fleet, seed)| {
            let instance = generate_instance(&network, fleet, seed)
                .map_err(|e| Error::InCell {
                    cell: format!("fleet_size={fleet} seed={seed}"),
                    source: Box::new(e),
                })?
                .with_radius_label(label.clone());
            sweep_instance(
                &instance,
                &config.lambda_values,
                &config.solver,
                seed,
                config.record_timing,
            )
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    for (&(fleet_size, seed), rows) in cells.iter().zip(per_cell) {
        for (lambda_index, row) in rows.into_iter().enumerate() {
            records.push(SweepRecord {
                row_id: records.len(),
                fleet_size,
                seed,
                lambda_index,
                row,
            });
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoPoint {
    /// Maximised.
    pub pct_cov: f64,
    /// Minimised.
    pub pct_ov: f64,
    pub lambda: f64,
    pub regime: LambdaRegime,
    pub fleet_size: usize,
    pub source_row_id: usize,
}

impl ParetoPoint {
    pub fn from_row(row_id: usize, row: &MetricsRow) -> Self {
        Self {
            pct_cov: row.report.pct_coverage,
            pct_ov: row.report.pct_overlap,
            lambda: row.lambda,
            regime: row.regime,
            fleet_size: row.n_vehicles,
            source_row_id: row_id,
        }
    }

    /// At least as good on both objectives and strictly better on one.
    pub fn dominates(&self, other: &Self) -> bool {
        self.pct_cov >= other.pct_cov
            && self.pct_ov <= other.pct_ov
            && (self.pct_cov > other.pct_cov || self.pct_ov < other.pct_ov)
    }
}

pub fn points_from_rows(rows: &[MetricsRow]) -> Vec<ParetoPoint> {
    rows.iter()
        .enumerate()
        .map(|(id, row)| ParetoPoint::from_row(id, row))
        .collect()
}

/// Points no other point dominates, ascending by overlap (then descending
/// coverage, then source row). Exact duplicates are all kept.
pub fn pareto_frontier(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    let mut front: Vec<ParetoPoint> = points
        .iter()
        .filter(|p| !points.iter().any(|q| q.dominates(p)))
        .copied()
        .collect();
    front.sort_by(|a, b| {
        a.pct_ov
            .total_cmp(&b.pct_ov)
            .then(b.pct_cov.total_cmp(&a.pct_cov))
            .then(a.source_row_id.cmp(&b.source_row_id))
    });
    front
}

/// Frontier per bin, in `bins` order. Points outside every bin are ignored.
pub fn binned_frontiers(points: &[ParetoPoint], bins: &[FleetBin]) -> Vec<(FleetBin, Vec<ParetoPoint>)> {
    bins.iter()
        .map(|bin| {
            let members: Vec<ParetoPoint> = points
                .iter()
                .filter(|p| bin.contains(p.fleet_size))
                .copied()
                .collect();
            (*bin, pareto_frontier(&members))
        })
        .collect()
}

/// Interior frontier point farthest from the chord between the endpoints,
/// after min-max scaling both objectives. Ties go to lower overlap.
pub fn knee_point(frontier: &[ParetoPoint]) -> Result<ParetoPoint> {
    if frontier.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "knee detection needs at least 3 frontier points, got {}",
            frontier.len()
        )));
    }
    let mut sorted = frontier.to_vec();
    sorted.sort_by(|a, b| {
        a.pct_ov
            .total_cmp(&b.pct_ov)
            .then(b.pct_cov.total_cmp(&a.pct_cov))
    });
    let scale = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        move |v: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 }
    };
    let cov = scale(&mut sorted.iter().map(|p| p.pct_cov));
    let ov = scale(&mut sorted.iter().map(|p| p.pct_ov));
    let at = |p: &ParetoPoint| (ov(p.pct_ov), cov(p.pct_cov));

    let (a, b) = (at(&sorted[0]), at(&sorted[sorted.len() - 1]));
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let chord = (dx * dx + dy * dy).sqrt();
    let distance = |p: &ParetoPoint| {
        if chord == 0.0 {
            return 0.0;
        }
        let (px, py) = at(p);
        (dx * (py - a.1) - dy * (px - a.0)).abs() / chord
    };

    let interior = &sorted[1..sorted.len() - 1];
    let mut best = interior[0];
    let mut best_d = distance(&best);
    for p in &interior[1..] {
        let d = distance(p);
        if d > best_d + 1e-12 {
            best = *p;
            best_d = d;
        }
    }
    Ok(best)
}

pub const PARETO_HEADER: [&str; 7] = [
    "bin",
    "pct_cov",
    "pct_ov",
    "lambda",
    "regime",
    "fleet_size",
    "is_knee",
];

/// Writes every frontier point with its bin label, marking the knee of
/// each frontier that has one.
pub fn write_pareto_csv<W: Write>(frontiers: &[(FleetBin, Vec<ParetoPoint>)], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let to_io = |e: csv::Error| Error::io("<pareto csv>", std::io::Error::other(e));
    writer.write_record(PARETO_HEADER).map_err(to_io)?;
    for (bin, front) in frontiers {
        let knee = knee_point(front).ok().map(|k| k.source_row_id);
        for p in front {
            writer
                .write_record([
                    bin.to_string(),
                    p.pct_cov.to_string(),
                    p.pct_ov.to_string(),
                    p.lambda.to_string(),
                    p.regime.to_string(),
                    p.fleet_size.to_string(),
                    (knee == Some(p.source_row_id)).to_string(),
                ])
                .map_err(to_io)?;
        }
    }
    writer.flush().map_err(|e| Error::io("<pareto csv>", e))
}

/// Distinct fleet sizes in the rows, each as its own bin.
pub fn singleton_bins(points: &[ParetoPoint]) -> Vec<FleetBin> {
    points
        .iter()
        .map(|p| p.fleet_size)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|f| FleetBin { lo: f, hi: f })
        .collect()
}
