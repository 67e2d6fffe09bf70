//! Unique-coverage rewards and pairwise route overlaps.
//!
//! `u_i` counts the nodes only vehicle `i` visits, measured against the
//! whole fleet; it is a static reward and is never recomputed for a
//! sub-selection. `c_ij` is the number of nodes two routes share. Both come
//! out of a single pass over a node → vehicles index.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use crate::error::{Error, Result};
use crate::instance::MarpInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageStats {
    /// `u_i` per vehicle.
    pub unique_counts: Vec<u64>,
    /// `c_ij` keyed by `(i, j)` with `i < j`; only positive entries stored.
    pub overlaps: BTreeMap<(usize, usize), u64>,
    /// Number of routes through each node, over the full fleet. Nodes no
    /// route visits are absent.
    pub node_usage: BTreeMap<usize, u64>,
    /// `|S_i|` per vehicle.
    pub route_sizes: Vec<usize>,
}

impl CoverageStats {
    /// Builds the statistics for arbitrary element sets. Duplicate elements
    /// within one set are counted once.
    pub fn from_sets<S: AsRef<[usize]>>(sets: &[S]) -> Self {
        let mut index: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut route_sizes = Vec::with_capacity(sets.len());
        for (i, set) in sets.iter().enumerate() {
            let mut nodes = set.as_ref().to_vec();
            nodes.sort_unstable();
            nodes.dedup();
            route_sizes.push(nodes.len());
            for node in nodes {
                index.entry(node).or_default().push(i);
            }
        }

        let mut unique_counts = vec![0u64; sets.len()];
        let mut pairs: HashMap<(usize, usize), u64> = HashMap::new();
        let mut node_usage = BTreeMap::new();
        for (&node, users) in &index {
            node_usage.insert(node, users.len() as u64);
            if let [only] = users.as_slice() {
                unique_counts[*only] += 1;
                continue;
            }
            // `users` is ascending, so (a, b) already has a < b.
            for (k, &a) in users.iter().enumerate() {
                for &b in &users[k + 1..] {
                    *pairs.entry((a, b)).or_default() += 1;
                }
            }
        }

        Self {
            unique_counts,
            overlaps: pairs.into_iter().collect(),
            node_usage,
            route_sizes,
        }
    }

    pub fn n(&self) -> usize {
        self.unique_counts.len()
    }

    pub fn overlap(&self, i: usize, j: usize) -> u64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.overlaps.get(&key).copied().unwrap_or(0)
    }

    /// `s_i = Σ_{j≠i} c_ij` per vehicle.
    pub fn overlap_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.n()];
        for (&(i, j), &c) in &self.overlaps {
            sums[i] += c;
            sums[j] += c;
        }
        sums
    }

    /// Writes `i,u_i` rows followed by `i,j,c_ij` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (i, u) in self.unique_counts.iter().enumerate() {
            writeln!(out, "{i},{u}")?;
        }
        for (&(i, j), c) in &self.overlaps {
            writeln!(out, "{i},{j},{c}")?;
        }
        Ok(())
    }
}

pub fn compute_coverage(instance: &MarpInstance) -> CoverageStats {
    CoverageStats::from_sets(&instance.route_sets())
}

/// Nodes covered by the selected routes and their summed pairwise overlap.
pub fn coverage_of_selection(
    instance: &MarpInstance,
    stats: &CoverageStats,
    x: &[bool],
) -> Result<(usize, u64)> {
    if x.len() != instance.n_vehicles() || x.len() != stats.n() {
        return Err(Error::InvalidArgument(format!(
            "selection has {} entries for {} vehicles",
            x.len(),
            instance.n_vehicles()
        )));
    }
    let mut covered = vec![false; instance.network().node_count()];
    for vehicle in instance.vehicles().iter().filter(|v| x[v.id]) {
        for &node in &vehicle.route {
            covered[node] = true;
        }
    }
    let overlap = selected_overlap(stats, x);
    Ok((covered.iter().filter(|&&c| c).count(), overlap))
}

/// `Σ_{i<j, x_i = x_j = 1} c_ij`.
pub(crate) fn selected_overlap(stats: &CoverageStats, x: &[bool]) -> u64 {
    stats
        .overlaps
        .iter()
        .filter(|(&(i, j), _)| x[i] && x[j])
        .map(|(_, &c)| c)
        .sum()
}
