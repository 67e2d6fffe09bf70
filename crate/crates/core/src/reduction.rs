//! Weighted set packing expressed as a route-selection QUBO.
//!
//! Each set becomes a vehicle whose reward is the set's weight, overlaps are
//! set intersections, and the penalty is `1 + Σ w`. Dropping one member of
//! an overlapping pair then always raises the objective, so every optimum
//! is a packing and its energy is minus the packing weight.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::coverage::CoverageStats;
use crate::error::{Error, Result};
use crate::qubo::{build_qubo, PenaltyConfig, ScoreTerms};
use crate::solvers::solve_exact;

/// Largest family the exact routes accept.
pub const WSP_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct WspInstance {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
    weights: Vec<f64>,
}

impl WspInstance {
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self> {
        if sets.len() != weights.len() {
            return Err(Error::Validation(format!(
                "{} sets but {} weights",
                sets.len(),
                weights.len()
            )));
        }
        for (i, set) in sets.iter().enumerate() {
            if let Some(e) = set.iter().find(|&&e| e >= universe_size) {
                return Err(Error::Validation(format!(
                    "set {i} contains element {e} outside universe of size {universe_size}"
                )));
            }
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::Validation(format!("weight {i} is {w}, must be ≥ 0")));
        }
        Ok(Self {
            universe_size,
            sets,
            weights,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// Parses `{"universe_size": int, "sets": [[int,...],...], "weights": [num,...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct WspFile {
            universe_size: usize,
            sets: Vec<Vec<usize>>,
            weights: Vec<f64>,
        }
        let mut de = serde_json::Deserializer::from_str(text);
        let file: WspFile = serde_path_to_error::deserialize(&mut de)
            .map_err(|err| Error::parse(err.path().to_string(), err.into_inner()))?;
        Self::new(file.universe_size, file.sets, file.weights)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarpReduction {
    pub terms: ScoreTerms,
    pub lambda: f64,
}

pub fn reduce_wsp_to_marp(wsp: &WspInstance) -> MarpReduction {
    let overlaps = CoverageStats::from_sets(&wsp.sets)
        .overlaps
        .into_iter()
        .map(|(k, c)| (k, c as f64))
        .collect::<BTreeMap<_, _>>();
    let terms = ScoreTerms {
        rewards: wsp.weights.clone(),
        overlaps,
    };
    let lambda = 1.0 + wsp.weights.iter().sum::<f64>();
    MarpReduction { terms, lambda }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    /// Selected set indices, ascending.
    pub selected: Vec<usize>,
    pub weight: f64,
}

fn check_budget(wsp: &WspInstance) -> Result<()> {
    if wsp.m() > WSP_LIMIT {
        return Err(Error::SizeLimit {
            what: "set family size",
            actual: wsp.m(),
            limit: WSP_LIMIT,
            hint: "exact set packing is limited to small families",
        });
    }
    Ok(())
}

/// Reduces, encodes and solves exactly; weight is minus the optimal energy.
pub fn solve_wsp_via_marp(wsp: &WspInstance) -> Result<Packing> {
    check_budget(wsp)?;
    let reduction = reduce_wsp_to_marp(wsp);
    let model = build_qubo(&reduction.terms, &PenaltyConfig::custom(reduction.lambda))?;
    let solution = solve_exact(&model)?;
    Ok(Packing {
        selected: solution.selected().collect(),
        weight: 0.0 - solution.energy, // avoids -0 for the empty packing
    })
}

/// Checks every subset for pairwise disjointness and keeps the heaviest;
/// ties go to the lexicographically smallest indicator vector.
pub fn wsp_brute_force(wsp: &WspInstance) -> Result<Packing> {
    check_budget(wsp)?;
    let m = wsp.m();
    let sets: Vec<Vec<usize>> = wsp
        .sets
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let disjoint = |a: &[usize], b: &[usize]| {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    };
    let conflicts: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i != j && !disjoint(&sets[i], &sets[j])).collect())
        .collect();

    let mut best: Option<(f64, Vec<bool>)> = None;
    for mask in 0u64..(1u64 << m) {
        let x: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
        let feasible = (0..m).all(|i| !x[i] || (i + 1..m).all(|j| !x[j] || !conflicts[i][j]));
        if !feasible {
            continue;
        }
        let weight: f64 = (0..m).filter(|&i| x[i]).map(|i| wsp.weights[i]).sum();
        let replace = match &best {
            None => true,
            Some((w, bx)) => weight > *w || (weight == *w && x < *bx),
        };
        if replace {
            best = Some((weight, x));
        }
    }
    let (weight, x) = best.expect("the empty family is always feasible");
    Ok(Packing {
        selected: (0..m).filter(|&i| x[i]).collect(),
        weight,
    })
}

/// True when no two selected sets share an element.
pub fn is_packing(wsp: &WspInstance, selected: &[usize]) -> bool {
    let mut owner = vec![false; wsp.universe_size];
    for &i in selected {
        let mut set = wsp.sets[i].clone();
        set.sort_unstable();
        set.dedup();
        for e in set {
            if std::mem::replace(&mut owner[e], true) {
                return false;
            }
        }
    }
    true
}
