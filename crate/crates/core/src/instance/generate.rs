use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;

use super::{Edge, MarpInstance, Node, RoadNetwork, Vehicle};
use crate::error::{Error, Result};
use crate::util::{rng_from_seed, round_sig};

/// Coordinates and lengths are stored at this precision so that the JSON
/// form reproduces them exactly.
const STORED_DIGITS: usize = 9;
const RADIUS_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkKind {
    /// `size × size` lattice, unit spacing, edge lengths jittered by ±10%.
    Grid,
    /// `size` points in the unit square joined within the smallest
    /// connecting radius.
    RandomGeometric,
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NetworkKind::Grid => "grid",
            NetworkKind::RandomGeometric => "random_geometric",
        })
    }
}

impl FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(NetworkKind::Grid),
            "random_geometric" | "random-geometric" => Ok(NetworkKind::RandomGeometric),
            other => Err(Error::InvalidParameter(format!(
                "unknown network kind {other:?} (expected grid or random_geometric)"
            ))),
        }
    }
}

pub fn generate_network(kind: NetworkKind, size_param: usize, seed: u64) -> Result<RoadNetwork> {
    if size_param < 2 {
        return Err(Error::InvalidParameter(format!(
            "network size parameter must be at least 2, got {size_param}"
        )));
    }
    match kind {
        NetworkKind::Grid => grid(size_param, seed),
        NetworkKind::RandomGeometric => random_geometric(size_param, seed),
    }
}

fn grid(side: usize, seed: u64) -> Result<RoadNetwork> {
    let mut rng = rng_from_seed(seed);
    let nodes = (0..side * side)
        .map(|id| Node {
            id,
            x: (id % side) as f64,
            y: (id / side) as f64,
        })
        .collect();
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    let mut jittered = |u, v| Edge {
        u,
        v,
        length: round_sig(1.0 + rng.random_range(-0.1..=0.1), STORED_DIGITS),
    };
    for row in 0..side {
        for col in 0..side {
            let id = row * side + col;
            if col + 1 < side {
                edges.push(jittered(id, id + 1));
            }
            if row + 1 < side {
                edges.push(jittered(id, id + side));
            }
        }
    }
    RoadNetwork::new(nodes, edges)
}

fn random_geometric(count: usize, seed: u64) -> Result<RoadNetwork> {
    let mut rng = rng_from_seed(seed);
    let points: Vec<(f64, f64)> = (0..count)
        .map(|_| {
            (
                round_sig(rng.random::<f64>(), STORED_DIGITS),
                round_sig(rng.random::<f64>(), STORED_DIGITS),
            )
        })
        .collect();
    let dist = |a: usize, b: usize| {
        let (dx, dy) = (points[a].0 - points[b].0, points[a].1 - points[b].1);
        (dx * dx + dy * dy).sqrt()
    };

    // Any radius ≥ √2 connects points in the unit square.
    let (mut lo, mut hi) = (0.0_f64, 2f64.sqrt());
    while hi - lo > RADIUS_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if connected_within(count, mid, &dist) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let nodes = points
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| Node { id, x, y })
        .collect();
    let mut edges = Vec::new();
    for a in 0..count {
        for b in a + 1..count {
            let d = dist(a, b);
            if d <= hi {
                edges.push(Edge {
                    u: a,
                    v: b,
                    length: round_sig(d, STORED_DIGITS),
                });
            }
        }
    }
    RoadNetwork::new(nodes, edges)
}

fn connected_within(count: usize, radius: f64, dist: &impl Fn(usize, usize) -> f64) -> bool {
    let mut seen = vec![false; count];
    let mut stack = vec![0];
    seen[0] = true;
    let mut reached = 1;
    while let Some(a) = stack.pop() {
        for (b, seen_b) in seen.iter_mut().enumerate() {
            if !*seen_b && dist(a, b) <= radius {
                *seen_b = true;
                reached += 1;
                stack.push(b);
            }
        }
    }
    reached == count
}

/// Samples `n_vehicles` origin/destination pairs uniformly (origin ≠
/// destination, repeats across vehicles allowed) and routes each along a
/// shortest path.
pub fn generate_instance(network: &RoadNetwork, n_vehicles: usize, seed: u64) -> Result<MarpInstance> {
    if n_vehicles == 0 {
        return Err(Error::InvalidParameter("n_vehicles must be at least 1".into()));
    }
    let n = network.node_count();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "network needs at least 2 nodes to sample distinct endpoints, has {n}"
        )));
    }
    if let Some(unreached) = network.reachable_from(0).iter().position(|&r| !r) {
        return Err(Error::NoPath {
            origin: 0,
            destination: unreached,
        });
    }

    let mut rng = rng_from_seed(seed);
    let mut vehicles = Vec::with_capacity(n_vehicles);
    for id in 0..n_vehicles {
        let origin = rng.random_range(0..n);
        let mut destination = rng.random_range(0..n - 1);
        if destination >= origin {
            destination += 1;
        }
        let route = shortest_route(network, origin, destination)?;
        vehicles.push(Vehicle {
            id,
            origin,
            destination,
            route,
        });
    }
    MarpInstance::new(network.clone(), vehicles, seed, "synthetic")
}

#[derive(PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn distances_to(network: &RoadNetwork, target: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; network.node_count()];
    let mut heap = BinaryHeap::new();
    dist[target] = 0.0;
    heap.push(Frontier {
        dist: 0.0,
        node: target,
    });
    while let Some(Frontier { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, len) in network.neighbors(node) {
            let nd = d + len;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(Frontier { dist: nd, node: next });
            }
        }
    }
    dist
}

/// Shortest path by edge length. Among equal-length paths the
/// lexicographically smallest node sequence wins.
pub fn shortest_route(network: &RoadNetwork, origin: usize, destination: usize) -> Result<Vec<usize>> {
    let n = network.node_count();
    if origin >= n || destination >= n {
        return Err(Error::InvalidArgument(format!(
            "route endpoints {origin}->{destination} outside a {n}-node network"
        )));
    }
    let dist = distances_to(network, destination);
    if !dist[origin].is_finite() {
        return Err(Error::NoPath {
            origin,
            destination,
        });
    }
    // Walk forward picking the smallest-id neighbour that stays on some
    // shortest path; this yields the lexicographically smallest sequence.
    let mut visited = vec![false; n];
    let mut route = vec![origin];
    let mut current = origin;
    visited[origin] = true;
    while current != destination {
        let here = dist[current];
        let tol = 1e-9 * here.max(1.0);
        let next = network
            .neighbors(current)
            .iter()
            .find(|&&(v, len)| !visited[v] && (len + dist[v] - here).abs() <= tol)
            .map(|&(v, _)| v)
            .ok_or(Error::NoPath {
                origin,
                destination,
            })?;
        visited[next] = true;
        route.push(next);
        current = next;
    }
    Ok(route)
}
