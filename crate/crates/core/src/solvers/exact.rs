use std::time::Instant;

use super::{energy_tol, flip, local_fields, Couplings, Solution, SolverKind};
use crate::error::{Error, Result};
use crate::qubo::QuboModel;

/// Largest model `solve_exact` accepts.
pub const EXACT_LIMIT: usize = 30;
/// Up to this size every assignment is enumerated.
pub const ENUMERATION_LIMIT: usize = 20;

/// Global minimiser. Among equal-energy assignments (within 1e-9 relative)
/// the lexicographically smallest `x` is returned, `x[0]` most significant.
pub fn solve_exact(model: &QuboModel) -> Result<Solution> {
    let n = model.n();
    if n > EXACT_LIMIT {
        return Err(Error::SizeLimit {
            what: "exact solver variable count",
            actual: n,
            limit: EXACT_LIMIT,
            hint: "use the simulated annealing solver for larger models",
        });
    }
    let start = Instant::now();
    let couplings = Couplings::new(model);
    let x = if n <= ENUMERATION_LIMIT {
        enumerate(model, &couplings)
    } else {
        BranchAndBound::new(model, &couplings).run()
    };
    Ok(Solution {
        energy: model.energy_unchecked(&x),
        x,
        solver: SolverKind::Exact,
        seed: None,
        wall_time: start.elapsed(),
        n_restarts_used: 1,
    })
}

fn improves(candidate: f64, cand_x: &[bool], best: f64, best_x: &[bool]) -> bool {
    let tol = energy_tol(best);
    candidate < best - tol || (candidate <= best + tol && cand_x < best_x)
}

/// Gray-code walk over all 2^n assignments, one flip per step.
fn enumerate(model: &QuboModel, couplings: &Couplings) -> Vec<bool> {
    let n = model.n();
    let mut x = vec![false; n];
    let mut fields = local_fields(model, couplings, &x);
    let mut energy = 0.0;
    let mut best_x = x.clone();
    let mut best = 0.0;
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        energy += flip(couplings, &mut x, &mut fields, bit);
        if improves(energy, &x, best, &best_x) {
            best = energy;
            best_x.copy_from_slice(&x);
        }
    }
    best_x
}

/// Depth-first search fixing variables in index order, `0` before `1`, so
/// leaves are visited in lexicographic order.
struct BranchAndBound<'a> {
    couplings: &'a Couplings,
    /// `Σ_{l>k} min(0, Q_kl)`: the most the still-free suffix can pull `k` down.
    negative_tail: Vec<f64>,
    x: Vec<bool>,
    fields: Vec<f64>,
    best: f64,
    best_x: Vec<bool>,
}

impl<'a> BranchAndBound<'a> {
    fn new(model: &QuboModel, couplings: &'a Couplings) -> Self {
        let n = model.n();
        let negative_tail = (0..n)
            .map(|k| {
                couplings
                    .of(k)
                    .filter(|&(l, q)| l > k && q < 0.0)
                    .map(|(_, q)| q)
                    .sum()
            })
            .collect();
        let x = vec![false; n];
        let fields = local_fields(model, couplings, &x);

        // Greedy incumbent, nudged upwards so that equal-energy assignments
        // earlier in lexicographic order still replace it.
        let incumbent = super::greedy::descend(model, couplings);
        let incumbent_energy = model.energy_unchecked(&incumbent);
        Self {
            couplings,
            negative_tail,
            x,
            fields,
            best: incumbent_energy + 2.0 * energy_tol(incumbent_energy),
            best_x: incumbent,
        }
    }

    fn run(mut self) -> Vec<bool> {
        self.visit(0, 0.0);
        self.best_x
    }

    fn lower_bound(&self, depth: usize, partial: f64) -> f64 {
        partial
            + (depth..self.x.len())
                .map(|k| (self.fields[k] + self.negative_tail[k]).min(0.0))
                .sum::<f64>()
    }

    fn visit(&mut self, depth: usize, partial: f64) {
        if depth == self.x.len() {
            if partial < self.best - energy_tol(self.best) {
                self.best = partial;
                self.best_x.copy_from_slice(&self.x);
            }
            return;
        }
        if self.lower_bound(depth, partial) >= self.best - energy_tol(self.best) {
            return;
        }
        self.visit(depth + 1, partial);
        let delta = flip(self.couplings, &mut self.x, &mut self.fields, depth);
        self.visit(depth + 1, partial + delta);
        flip(self.couplings, &mut self.x, &mut self.fields, depth);
    }
}
