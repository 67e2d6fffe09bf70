use std::time::Instant;

use super::{flip, local_fields, Couplings, Solution, SolverKind};
use crate::qubo::QuboModel;

/// Starting from the empty selection, repeatedly switches on the variable
/// with the most negative energy change (lowest index on ties) until no
/// switch-on improves.
pub fn solve_greedy(model: &QuboModel) -> Solution {
    let start = Instant::now();
    let couplings = Couplings::new(model);
    let x = descend(model, &couplings);
    Solution {
        energy: model.energy_unchecked(&x),
        x,
        solver: SolverKind::Greedy,
        seed: None,
        wall_time: start.elapsed(),
        n_restarts_used: 1,
    }
}

pub(super) fn descend(model: &QuboModel, couplings: &Couplings) -> Vec<bool> {
    let n = model.n();
    let mut x = vec![false; n];
    let mut fields = local_fields(model, couplings, &x);
    loop {
        let mut pick: Option<(usize, f64)> = None;
        for i in (0..n).filter(|&i| !x[i]) {
            if fields[i] < pick.map_or(0.0, |(_, d)| d) {
                pick = Some((i, fields[i]));
            }
        }
        match pick {
            Some((i, _)) => {
                flip(couplings, &mut x, &mut fields, i);
            }
            None => return x,
        }
    }
}
