//! Minimisers for [`QuboModel`] energies.
//!
//! * [`solve_exact`]: exhaustive enumeration up to 20 variables, depth-first
//!   branch-and-bound up to 30.
//! * [`solve_sa`]: restarts of sequential single-flip Metropolis annealing on
//!   a geometric inverse-temperature schedule.
//! * [`solve_greedy`]: steepest-descent switch-on from the empty selection.

mod exact;
mod greedy;
mod sa;

pub use exact::{solve_exact, ENUMERATION_LIMIT, EXACT_LIMIT};
pub use greedy::solve_greedy;
pub use sa::{default_sa_params, solve_sa, SaParams, Schedule};

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::QuboModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Exact,
    Sa,
    Greedy,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Exact => "exact",
            SolverKind::Sa => "sa",
            SolverKind::Greedy => "greedy",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolverKind::Exact),
            "sa" => Ok(SolverKind::Sa),
            "greedy" => Ok(SolverKind::Greedy),
            other => Err(Error::InvalidParameter(format!(
                "unknown solver {other:?} (expected exact, sa or greedy)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<bool>,
    /// Always `model.energy(&x)`, recomputed from scratch.
    pub energy: f64,
    pub solver: SolverKind,
    pub seed: Option<u64>,
    pub wall_time: Duration,
    pub n_restarts_used: usize,
}

impl Solution {
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.x.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| i)
    }

    pub fn to_json(&self) -> String {
        let file = SolutionFile {
            x: self.x.iter().map(|&b| u8::from(b)).collect(),
            energy: self.energy,
            solver: self.solver,
            seed: self.seed,
            wall_time_s: self.wall_time.as_secs_f64(),
        };
        let mut out = serde_json::to_string(&file).expect("solution serialization is infallible");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let file: SolutionFile = serde_path_to_error::deserialize(&mut de)
            .map_err(|err| Error::parse(err.path().to_string(), err.into_inner()))?;
        let x = file
            .x
            .iter()
            .enumerate()
            .map(|(i, &v)| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::parse(format!("x[{i}]"), format!("expected 0 or 1, got {other}"))),
            })
            .collect::<Result<_>>()?;
        if !(file.wall_time_s.is_finite() && file.wall_time_s >= 0.0) {
            return Err(Error::parse("wall_time_s", "must be a non-negative number"));
        }
        Ok(Self {
            x,
            energy: file.energy,
            solver: file.solver,
            seed: file.seed,
            wall_time: Duration::from_secs_f64(file.wall_time_s),
            n_restarts_used: 0,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionFile {
    x: Vec<u8>,
    energy: f64,
    solver: SolverKind,
    seed: Option<u64>,
    wall_time_s: f64,
}

/// Compressed adjacency of the couplings: neighbours of `i` are
/// `targets[offsets[i]..offsets[i + 1]]`.
pub(crate) struct Couplings {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Couplings {
    pub(crate) fn new(model: &QuboModel) -> Self {
        let adjacency = model.adjacency();
        let mut offsets = Vec::with_capacity(model.n() + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for list in adjacency {
            for (j, q) in list {
                targets.push(j);
                weights.push(q);
            }
            offsets.push(targets.len());
        }
        Self {
            offsets,
            targets,
            weights,
        }
    }

    pub(crate) fn of(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }
}

/// Local fields `h_i = Q_ii + Σ_j Q_ij x_j`; flipping `i` changes the energy
/// by `h_i` when switching on and `-h_i` when switching off.
pub(crate) fn local_fields(model: &QuboModel, couplings: &Couplings, x: &[bool]) -> Vec<f64> {
    (0..model.n())
        .map(|i| {
            model.linear()[i]
                + couplings
                    .of(i)
                    .filter(|&(j, _)| x[j])
                    .map(|(_, q)| q)
                    .sum::<f64>()
        })
        .collect()
}

/// Flips `i` and updates the neighbours' fields; returns the energy change.
pub(crate) fn flip(couplings: &Couplings, x: &mut [bool], fields: &mut [f64], i: usize) -> f64 {
    let delta = if x[i] { -fields[i] } else { fields[i] };
    x[i] = !x[i];
    let sign = if x[i] { 1.0 } else { -1.0 };
    for (j, q) in couplings.of(i) {
        fields[j] += sign * q;
    }
    delta
}

/// Tolerance for treating two energies as equal.
pub(crate) fn energy_tol(reference: f64) -> f64 {
    1e-9 * reference.abs().max(1.0)
}
