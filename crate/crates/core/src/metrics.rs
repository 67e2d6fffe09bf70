//! Post-selection metrics: node-usage concentration, overlap-graph structure
//! and coverage/overlap/fleet percentages relative to the full fleet.
//!
//! `𝒩` below is the set of nodes visited by at least one *selected* route
//! and `u_n` the number of selected routes through node `n`.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::coverage::{selected_overlap, CoverageStats};
use crate::error::{Error, Result};
use crate::instance::MarpInstance;
use crate::qubo::{LambdaRegime, QuboModel};
use crate::solvers::{Solution, SolverKind};

pub type NodeUsage = BTreeMap<usize, u64>;

fn check_len(instance: &MarpInstance, x: &[bool]) -> Result<()> {
    if x.len() != instance.n_vehicles() {
        return Err(Error::InvalidArgument(format!(
            "selection has {} entries for {} vehicles",
            x.len(),
            instance.n_vehicles()
        )));
    }
    Ok(())
}

/// `u_n` over the selected routes; nodes with zero usage are absent.
pub fn node_usage_selected(instance: &MarpInstance, x: &[bool]) -> Result<NodeUsage> {
    check_len(instance, x)?;
    let mut usage = NodeUsage::new();
    for vehicle in instance.vehicles().iter().filter(|v| x[v.id]) {
        for node in vehicle.node_set() {
            *usage.entry(node).or_default() += 1;
        }
    }
    Ok(usage)
}

/// `ū = Σ u_n / |𝒩|`.
pub fn avg_node_overlap(usage: &NodeUsage) -> Result<f64> {
    if usage.is_empty() {
        return Err(Error::EmptySelection("average node overlap needs a visited node"));
    }
    Ok(usage.values().sum::<u64>() as f64 / usage.len() as f64)
}

/// Share of total usage held by the `K = ⌈0.1 |𝒩|⌉` busiest nodes. Equal
/// usage is ranked by ascending node id.
pub fn top10_share(usage: &NodeUsage) -> Result<f64> {
    if usage.is_empty() {
        return Err(Error::EmptySelection("top-10% share needs a visited node"));
    }
    let k = usage.len().div_ceil(10);
    let mut ranked: Vec<(usize, u64)> = usage.iter().map(|(&n, &u)| (n, u)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let top: u64 = ranked[..k].iter().map(|&(_, u)| u).sum();
    let total: u64 = usage.values().sum();
    Ok(top as f64 / total as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapGraph {
    pub n_vertices: usize,
    pub m_edges: usize,
    /// `2m / (n(n-1))`, 0 when `n ≤ 1`.
    pub density: f64,
    /// `2m / n`, 0 when `n = 0`.
    pub avg_degree: f64,
}

/// Graph on the selected vehicles with an edge wherever two routes share a
/// node.
pub fn overlap_graph(instance: &MarpInstance, stats: &CoverageStats, x: &[bool]) -> Result<OverlapGraph> {
    check_len(instance, x)?;
    let n = x.iter().filter(|&&on| on).count();
    let m = stats
        .overlaps
        .keys()
        .filter(|&&(i, j)| x[i] && x[j])
        .count();
    let density = if n > 1 {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    } else {
        0.0
    };
    let avg_degree = if n > 0 { 2.0 * m as f64 / n as f64 } else { 0.0 };
    Ok(OverlapGraph {
        n_vertices: n,
        m_edges: m,
        density,
        avg_degree,
    })
}

/// Normalised Shannon entropy (natural log; the base cancels) and HHI of
/// `p_n = u_n / Σ u`. A single node has entropy 1 by convention.
pub fn entropy_and_hhi(usage: &NodeUsage) -> Result<(f64, f64)> {
    if usage.is_empty() {
        return Err(Error::EmptySelection("entropy and HHI need a visited node"));
    }
    let total = usage.values().sum::<u64>() as f64;
    let (mut h, mut hhi) = (0.0, 0.0);
    for &u in usage.values() {
        let p = u as f64 / total;
        h -= p * p.ln();
        hhi += p * p;
    }
    let h_norm = if usage.len() == 1 {
        1.0
    } else {
        h / (usage.len() as f64).ln()
    };
    // Rounding can leave either value one ulp outside its range.
    let floor = 1.0 / usage.len() as f64;
    Ok((h_norm.clamp(0.0, 1.0), hhi.clamp(floor, 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Percentages {
    pub pct_cov: f64,
    pub pct_ov: f64,
    pub pct_veh: f64,
}

/// Coverage, overlap and fleet share of the selection relative to selecting
/// every vehicle. `pct_ov` is 0 when the full fleet has no overlap.
pub fn percentage_metrics(instance: &MarpInstance, stats: &CoverageStats, x: &[bool]) -> Result<Percentages> {
    check_len(instance, x)?;
    let covered_all = stats.node_usage.len();
    let covered = node_usage_selected(instance, x)?.len();
    let overlap_all: u64 = stats.overlaps.values().sum();
    let overlap = selected_overlap(stats, x);
    let n_total = instance.n_vehicles();
    let n_selected = x.iter().filter(|&&on| on).count();
    let pct = |num: f64, den: f64| if den > 0.0 { 100.0 * num / den } else { 0.0 };
    Ok(Percentages {
        pct_cov: pct(covered as f64, covered_all as f64),
        pct_ov: pct(overlap as f64, overlap_all as f64),
        pct_veh: pct(n_selected as f64, n_total as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub avg_node_overlap: f64,
    pub top10_share: f64,
    pub overlap_graph_density: f64,
    pub overlap_graph_avg_degree: f64,
    pub entropy_norm: f64,
    pub hhi: f64,
    pub pct_coverage: f64,
    pub pct_overlap: f64,
    pub pct_vehicles: f64,
    pub objective_energy: f64,
}

/// All metrics for `solution`. On an empty selection the usage-based
/// metrics (ū, S₁₀, H_norm, HHI) are reported as 0.
pub fn full_report(
    instance: &MarpInstance,
    stats: &CoverageStats,
    model: &QuboModel,
    solution: &Solution,
) -> Result<MetricsReport> {
    let x = &solution.x;
    let usage = node_usage_selected(instance, x)?;
    let graph = overlap_graph(instance, stats, x)?;
    let pct = percentage_metrics(instance, stats, x)?;
    let (avg, s10, (h_norm, hhi)) = if usage.is_empty() {
        (0.0, 0.0, (0.0, 0.0))
    } else {
        (
            avg_node_overlap(&usage)?,
            top10_share(&usage)?,
            entropy_and_hhi(&usage)?,
        )
    };
    Ok(MetricsReport {
        avg_node_overlap: avg,
        top10_share: s10,
        overlap_graph_density: graph.density,
        overlap_graph_avg_degree: graph.avg_degree,
        entropy_norm: h_norm,
        hhi,
        pct_coverage: pct.pct_cov,
        pct_overlap: pct.pct_ov,
        pct_vehicles: pct.pct_veh,
        objective_energy: model.energy(x)?,
    })
}

pub const METRICS_HEADER: [&str; 15] = [
    "n_vehicles",
    "lambda",
    "regime",
    "solver",
    "energy",
    "pct_cov",
    "pct_ov",
    "pct_veh",
    "avg_overlap",
    "s10",
    "density",
    "avg_degree",
    "entropy",
    "hhi",
    "wall_time_s",
];

/// One line of the metrics CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub n_vehicles: usize,
    pub lambda: f64,
    pub regime: LambdaRegime,
    pub solver: SolverKind,
    pub report: MetricsReport,
    pub wall_time_s: f64,
}

impl MetricsRow {
    fn fields(&self) -> [String; 15] {
        let r = &self.report;
        [
            self.n_vehicles.to_string(),
            self.lambda.to_string(),
            self.regime.to_string(),
            self.solver.to_string(),
            r.objective_energy.to_string(),
            r.pct_coverage.to_string(),
            r.pct_overlap.to_string(),
            r.pct_vehicles.to_string(),
            r.avg_node_overlap.to_string(),
            r.top10_share.to_string(),
            r.overlap_graph_density.to_string(),
            r.overlap_graph_avg_degree.to_string(),
            r.entropy_norm.to_string(),
            r.hhi.to_string(),
            self.wall_time_s.to_string(),
        ]
    }
}

pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let to_io = |e: csv::Error| Error::io("<metrics csv>", std::io::Error::other(e));
    writer.write_record(METRICS_HEADER).map_err(to_io)?;
    for row in rows {
        writer.write_record(row.fields()).map_err(to_io)?;
    }
    writer
        .flush()
        .map_err(|e| Error::io("<metrics csv>", e))
}

pub fn read_metrics_csv<R: Read>(input: R) -> Result<Vec<MetricsRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::parse("line 1", e))?
        .clone();
    if headers.iter().ne(METRICS_HEADER) {
        return Err(Error::parse("line 1", "unexpected metrics header"));
    }
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let at = format!("line {}", k + 2);
        let record = record.map_err(|e| Error::parse(at.clone(), e))?;
        let field = |idx: usize| record.get(idx).unwrap_or_default();
        let num = |idx: usize| {
            field(idx).parse::<f64>().map_err(|e| {
                Error::parse(format!("{at}, column {}", METRICS_HEADER[idx]), e)
            })
        };
        rows.push(MetricsRow {
            n_vehicles: field(0)
                .parse()
                .map_err(|e| Error::parse(format!("{at}, column n_vehicles"), e))?,
            lambda: num(1)?,
            regime: field(2)
                .parse()
                .map_err(|e| Error::parse(format!("{at}, column regime"), e))?,
            solver: field(3)
                .parse()
                .map_err(|e| Error::parse(format!("{at}, column solver"), e))?,
            report: MetricsReport {
                objective_energy: num(4)?,
                pct_coverage: num(5)?,
                pct_overlap: num(6)?,
                pct_vehicles: num(7)?,
                avg_node_overlap: num(8)?,
                top10_share: num(9)?,
                overlap_graph_density: num(10)?,
                overlap_graph_avg_degree: num(11)?,
                entropy_norm: num(12)?,
                hhi: num(13)?,
            },
            wall_time_s: num(14)?,
        });
    }
    Ok(rows)
}
