//! Independent oracles shared by the integration tests. Nothing here goes
//! through the crate's coverage index, local fields or solvers.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use marp::instance::{generate_instance, generate_network, MarpInstance, NetworkKind};
use rand::Rng;

pub fn grid_instance(side: usize, n: usize, seed: u64) -> MarpInstance {
    let network = generate_network(NetworkKind::Grid, side, seed).unwrap();
    generate_instance(&network, n, seed.wrapping_mul(31).wrapping_add(7)).unwrap()
}

pub fn random_grid_instance(rng: &mut impl Rng, sides: std::ops::RangeInclusive<usize>, max_n: usize) -> MarpInstance {
    let side = rng.random_range(sides);
    let n = rng.random_range(2..=max_n);
    grid_instance(side, n, rng.random())
}

pub fn route_set(instance: &MarpInstance, i: usize) -> BTreeSet<usize> {
    instance.vehicles()[i].route.iter().copied().collect()
}

/// `u_i` and `c_ij` straight from set intersections.
pub struct NaiveTerms {
    pub u: Vec<f64>,
    pub c: Vec<Vec<f64>>,
}

pub fn naive_terms(instance: &MarpInstance) -> NaiveTerms {
    let n = instance.n_vehicles();
    let sets: Vec<BTreeSet<usize>> = (0..n).map(|i| route_set(instance, i)).collect();
    let u = (0..n)
        .map(|i| {
            sets[i]
                .iter()
                .filter(|node| (0..n).all(|j| j == i || !sets[j].contains(node)))
                .count() as f64
        })
        .collect();
    let c = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0.0 } else { sets[i].intersection(&sets[j]).count() as f64 })
                .collect()
        })
        .collect();
    NaiveTerms { u, c }
}

impl NaiveTerms {
    /// `Σ u_i x_i − λ Σ_{i<j} c_ij x_i x_j`.
    pub fn objective(&self, lambda: f64, x: &[bool]) -> f64 {
        let n = x.len();
        let mut reward = 0.0;
        let mut overlap = 0.0;
        for i in 0..n {
            if !x[i] {
                continue;
            }
            reward += self.u[i];
            for (j, _) in x.iter().enumerate().skip(i + 1).filter(|(_, &on)| on) {
                overlap += self.c[i][j];
            }
        }
        reward - lambda * overlap
    }

    pub fn overlap(&self, x: &[bool]) -> f64 {
        self.objective(0.0, x) - self.objective(1.0, x)
    }
}

pub fn mask_to_x(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Minimum energy of `energy` over all of {0,1}^n and every mask within
/// `tol` of it.
pub fn all_minimisers(n: usize, energy: impl Fn(&[bool]) -> f64, tol: f64) -> (f64, Vec<Vec<bool>>) {
    let energies: Vec<(u64, f64)> = (0..1u64 << n)
        .map(|mask| (mask, energy(&mask_to_x(mask, n))))
        .collect();
    let best = energies.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let cut = best + tol * best.abs().max(1.0);
    let minimisers = energies
        .iter()
        .filter(|e| e.1 <= cut)
        .map(|e| mask_to_x(e.0, n))
        .collect();
    (best, minimisers)
}

pub fn pairwise_disjoint(instance: &MarpInstance, x: &[bool]) -> bool {
    let mut seen = BTreeSet::new();
    for (i, _) in x.iter().enumerate().filter(|(_, &on)| on) {
        for node in route_set(instance, i) {
            if !seen.insert(node) {
                return false;
            }
        }
    }
    true
}

/// Unweighted hop distances by BFS.
pub fn bfs_hops(instance: &MarpInstance, from: usize) -> Vec<Option<usize>> {
    let network = instance.network();
    let mut dist = vec![None; network.node_count()];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in network.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// All-pairs weighted shortest distances by Floyd–Warshall.
pub fn floyd(instance: &MarpInstance) -> Vec<Vec<f64>> {
    let network = instance.network();
    let n = network.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for e in network.edges() {
        d[e.u][e.v] = d[e.u][e.v].min(e.length);
        d[e.v][e.u] = d[e.v][e.u].min(e.length);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn route_length(instance: &MarpInstance, route: &[usize]) -> f64 {
    route
        .windows(2)
        .map(|w| instance.network().edge_length(w[0], w[1]).expect("consecutive nodes adjacent"))
        .sum()
}
