use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;

use super::{energy_tol, flip, local_fields, Couplings, Solution, SolverKind};
use crate::error::{Error, Result};
use crate::qubo::QuboModel;
use crate::util::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// `β_k = β_initial · (β_final / β_initial)^(k / (sweeps - 1))`.
    Geometric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    pub num_reads: usize,
    pub sweeps: usize,
    pub beta_initial: f64,
    pub beta_final: f64,
    pub schedule: Schedule,
    pub seed: u64,
}

impl SaParams {
    fn validate(&self) -> Result<()> {
        if self.num_reads == 0 || self.sweeps == 0 {
            return Err(Error::InvalidParameter(
                "num_reads and sweeps must be at least 1".into(),
            ));
        }
        if !(self.beta_initial > 0.0 && self.beta_final > self.beta_initial)
            || !self.beta_final.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "need 0 < beta_initial < beta_final, got {} and {}",
                self.beta_initial, self.beta_final
            )));
        }
        Ok(())
    }

    fn betas(&self) -> Vec<f64> {
        if self.sweeps == 1 {
            return vec![self.beta_final];
        }
        let ratio = self.beta_final / self.beta_initial;
        let last = (self.sweeps - 1) as f64;
        (0..self.sweeps)
            .map(|k| self.beta_initial * ratio.powf(k as f64 / last))
            .collect()
    }
}

/// 100 reads of 1000 sweeps. The schedule starts where the largest possible
/// single-flip change is accepted with probability 1/2 and ends where the
/// smallest nonzero coefficient is accepted with probability 1/100.
pub fn default_sa_params(model: &QuboModel) -> SaParams {
    let mut row_weight = model.linear().iter().map(|q| q.abs()).collect::<Vec<_>>();
    let mut smallest = f64::INFINITY;
    for q in model.linear() {
        if *q != 0.0 {
            smallest = smallest.min(q.abs());
        }
    }
    for (&(i, j), q) in model.quadratic() {
        row_weight[i] += q.abs();
        row_weight[j] += q.abs();
        if *q != 0.0 {
            smallest = smallest.min(q.abs());
        }
    }
    let largest = row_weight.into_iter().fold(0.0, f64::max);
    let (largest, smallest) = if largest > 0.0 && smallest.is_finite() {
        (largest, smallest)
    } else {
        (1.0, 1.0)
    };
    SaParams {
        num_reads: 100,
        sweeps: 1000,
        beta_initial: 2f64.ln() / largest,
        beta_final: 100f64.ln() / smallest,
        schedule: Schedule::Geometric,
        seed: 0,
    }
}

/// Best of `num_reads` independent anneals. Each read starts from a uniform
/// random assignment, sweeps variables in ascending order with Metropolis
/// acceptance, and finishes with a zero-temperature descent that also
/// switches off variables contributing nothing. Reads are
/// seeded from `params.seed` and merged by (energy, x), so the result does
/// not depend on thread scheduling.
pub fn solve_sa(model: &QuboModel, params: &SaParams) -> Result<Solution> {
    params.validate()?;
    let start = Instant::now();
    let couplings = Couplings::new(model);
    let betas = params.betas();
    let mut master = rng_from_seed(params.seed);
    let read_seeds: Vec<u64> = (0..params.num_reads).map(|_| master.random()).collect();

    let reads: Vec<(f64, Vec<bool>)> = read_seeds
        .par_iter()
        .map(|&seed| {
            let x = anneal(model, &couplings, &betas, seed);
            (model.energy_unchecked(&x), x)
        })
        .collect();
    let (energy, x) = reads
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .unwrap_or((0.0, Vec::new()));

    Ok(Solution {
        x,
        energy,
        solver: SolverKind::Sa,
        seed: Some(params.seed),
        wall_time: start.elapsed(),
        n_restarts_used: params.num_reads,
    })
}

fn anneal(model: &QuboModel, couplings: &Couplings, betas: &[f64], seed: u64) -> Vec<bool> {
    let n = model.n();
    let mut rng = rng_from_seed(seed);
    let mut x: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut fields = local_fields(model, couplings, &x);
    let mut energy = model.energy_unchecked(&x);
    let mut best = energy;
    let mut best_x = x.clone();

    for &beta in betas {
        for i in 0..n {
            let delta = if x[i] { -fields[i] } else { fields[i] };
            if delta <= 0.0 || rng.random::<f64>() < (-beta * delta).exp() {
                energy += flip(couplings, &mut x, &mut fields, i);
            }
        }
        if energy < best - energy_tol(best) {
            best = energy;
            best_x.copy_from_slice(&x);
        }
    }

    // Quench to a local minimum, dropping selections that cost nothing.
    // (energy, ones) strictly decreases with every move, so this terminates.
    loop {
        let mut moved = false;
        for i in 0..n {
            let delta = if x[i] { -fields[i] } else { fields[i] };
            let tol = energy_tol(energy);
            if delta < -tol || (x[i] && delta <= tol) {
                energy += flip(couplings, &mut x, &mut fields, i);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    if energy <= best + energy_tol(best) {
        best_x = x;
    }
    best_x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::coverage::CoverageStats;
    use crate::qubo::{build_qubo, LambdaRegime, PenaltyConfig, ScoreTerms};

    fn demo(penalty: PenaltyConfig) -> QuboModel {
        let terms = ScoreTerms::from(&CoverageStats::from_sets(&[vec![0, 1, 2], vec![2, 3]]));
        build_qubo(&terms, &penalty).unwrap()
    }

    #[test]
    fn defaults_for_demo() {
        let p = default_sa_params(&demo(PenaltyConfig::custom(0.5)));
        assert_eq!((p.num_reads, p.sweeps), (100, 1000));
        // ΔE_max = |−2| + 0.5, ΔE_min = 0.5
        assert!((p.beta_initial - 2f64.ln() / 2.5).abs() < 1e-12);
        assert!((p.beta_final - 100f64.ln() / 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_coefficient_model() {
        let m = QuboModel::from_parts(vec![-1.0], BTreeMap::new(), 1.0, LambdaRegime::Custom)
            .unwrap();
        let p = default_sa_params(&m);
        assert!((p.beta_initial - 2f64.ln()).abs() < 1e-15);
        assert!((p.beta_final - 100f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn hard_demo_reaches_optimum() {
        let m = demo(PenaltyConfig::hard());
        let s = solve_sa(&m, &default_sa_params(&m)).unwrap();
        assert_eq!(s.energy, -2.0);
    }

    #[test]
    fn separable_model_switches_on_profitable_variables() {
        let rewards = vec![3.0, 0.0, 1.0, 2.0, 0.0];
        let terms = ScoreTerms::new(rewards.clone(), BTreeMap::new()).unwrap();
        let m = build_qubo(&terms, &PenaltyConfig::hard()).unwrap();
        for seed in 0..3 {
            let mut p = default_sa_params(&m);
            p.seed = seed;
            let s = solve_sa(&m, &p).unwrap();
            let expected: Vec<bool> = rewards.iter().map(|&u| u > 0.0).collect();
            assert_eq!(s.x, expected);
            assert_eq!(s.energy, -6.0);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let m = demo(PenaltyConfig::custom(0.5));
        let mut p = default_sa_params(&m);
        p.num_reads = 8;
        p.seed = 42;
        let a = solve_sa(&m, &p).unwrap();
        let b = solve_sa(&m, &p).unwrap();
        assert_eq!((a.x, a.energy), (b.x, b.energy));
    }

    #[test]
    fn rejects_bad_params() {
        let m = demo(PenaltyConfig::hard());
        let mut p = default_sa_params(&m);
        p.num_reads = 0;
        assert!(solve_sa(&m, &p).is_err());
        let mut p = default_sa_params(&m);
        p.beta_final = p.beta_initial;
        assert!(solve_sa(&m, &p).is_err());
    }
}
