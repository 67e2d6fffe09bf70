//! Road networks, vehicles with fixed routes, and the selection instance that
//! ties them together.
//!
//! Every vehicle follows one precomputed route; downstream code treats a
//! route as the *set* of nodes it visits. Networks either come from the
//! synthetic generators in [`generate`] or from the JSON schema handled by
//! [`io`].

mod generate;
mod io;

pub use generate::{generate_instance, generate_network, shortest_route, NetworkKind};
pub use io::{instance_from_json, instance_to_json, load_instance, save_instance};

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

/// Undirected edge; `u`/`v` order carries no meaning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// Undirected road graph. Node ids are contiguous from zero and match their
/// position in `nodes`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoadNetwork {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    // Sorted by neighbour id; derived from `edges`.
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl RoadNetwork {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self> {
        for (pos, node) in nodes.iter().enumerate() {
            if node.id != pos {
                return Err(Error::Validation(format!(
                    "node ids must be contiguous from 0: position {pos} holds id {}",
                    node.id
                )));
            }
            if !node.x.is_finite() || !node.y.is_finite() {
                return Err(Error::Validation(format!(
                    "node {pos} has a non-finite coordinate"
                )));
            }
        }
        let n = nodes.len();
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::Validation(format!(
                    "edge {k} ({}, {}) references a node outside 0..{n}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::Validation(format!("edge {k} is a self-loop on node {}", e.u)));
            }
            if !(e.length.is_finite() && e.length >= 0.0) {
                return Err(Error::Validation(format!(
                    "edge {k} has invalid length {}",
                    e.length
                )));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::Validation(format!(
                    "duplicate edge between {} and {}",
                    e.u, e.v
                )));
            }
            adjacency[e.u].push((e.v, e.length));
            adjacency[e.v].push((e.u, e.length));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Self {
            nodes,
            edges,
            adjacency,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbours of `node` with the connecting edge length, ascending by id.
    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    pub fn edge_length(&self, a: usize, b: usize) -> Option<f64> {
        let list = self.adjacency.get(a)?;
        list.binary_search_by_key(&b, |&(v, _)| v)
            .ok()
            .map(|k| list[k].1)
    }

    /// Nodes reachable from `start`, as a membership mask.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        if start >= seen.len() {
            return seen;
        }
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() == 0 || self.reachable_from(0).iter().all(|&r| r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vehicle {
    pub id: usize,
    pub origin: usize,
    pub destination: usize,
    /// Ordered node sequence from `origin` to `destination`.
    pub route: Vec<usize>,
}

impl Vehicle {
    /// Distinct nodes on the route, ascending.
    pub fn node_set(&self) -> Vec<usize> {
        let mut nodes = self.route.clone();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }

    fn validate(&self, network: &RoadNetwork) -> Result<()> {
        let id = self.id;
        let (first, last) = match (self.route.first(), self.route.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::Validation(format!("vehicle {id} has an empty route"))),
        };
        let n = network.node_count();
        if let Some(&bad) = self.route.iter().find(|&&v| v >= n) {
            return Err(Error::Validation(format!(
                "vehicle {id} route references node {bad}, network has {n} nodes"
            )));
        }
        if first != self.origin || last != self.destination {
            return Err(Error::Validation(format!(
                "vehicle {id} route runs {first}->{last} but origin/destination are {}->{}",
                self.origin, self.destination
            )));
        }
        for pair in self.route.windows(2) {
            if network.edge_length(pair[0], pair[1]).is_none() {
                return Err(Error::Validation(format!(
                    "vehicle {id} route steps {}->{} without a connecting edge",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }
}

/// A fleet of vehicles with fixed routes on one network.
#[derive(Debug, Clone, PartialEq)]
pub struct MarpInstance {
    network: RoadNetwork,
    vehicles: Vec<Vehicle>,
    seed: u64,
    radius_label: String,
}

impl MarpInstance {
    pub fn new(
        network: RoadNetwork,
        vehicles: Vec<Vehicle>,
        seed: u64,
        radius_label: impl Into<String>,
    ) -> Result<Self> {
        for (pos, vehicle) in vehicles.iter().enumerate() {
            if vehicle.id != pos {
                return Err(Error::Validation(format!(
                    "vehicle ids must be contiguous from 0: position {pos} holds id {}",
                    vehicle.id
                )));
            }
            vehicle.validate(&network)?;
        }
        Ok(Self {
            network,
            vehicles,
            seed,
            radius_label: radius_label.into(),
        })
    }

    pub fn network(&self) -> &RoadNetwork {
        &self.network
    }

    pub fn vehicles(&self) -> &[Vehicle] {
        &self.vehicles
    }

    pub fn n_vehicles(&self) -> usize {
        self.vehicles.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn radius_label(&self) -> &str {
        &self.radius_label
    }

    pub fn with_radius_label(mut self, label: impl Into<String>) -> Self {
        self.radius_label = label.into();
        self
    }

    /// Route node sets, one per vehicle.
    pub fn route_sets(&self) -> Vec<Vec<usize>> {
        self.vehicles.iter().map(Vehicle::node_set).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> RoadNetwork {
        let nodes = (0..3)
            .map(|id| Node {
                id,
                x: id as f64,
                y: 0.0,
            })
            .collect();
        let edges = vec![
            Edge { u: 0, v: 1, length: 1.0 },
            Edge { u: 1, v: 2, length: 1.0 },
        ];
        RoadNetwork::new(nodes, edges).unwrap()
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let nodes = vec![Node { id: 0, x: 0.0, y: 0.0 }, Node { id: 1, x: 1.0, y: 0.0 }];
        let looped = RoadNetwork::new(nodes.clone(), vec![Edge { u: 1, v: 1, length: 1.0 }]);
        assert!(matches!(looped, Err(Error::Validation(_))));
        let dup = RoadNetwork::new(
            nodes,
            vec![
                Edge { u: 0, v: 1, length: 1.0 },
                Edge { u: 1, v: 0, length: 2.0 },
            ],
        );
        assert!(matches!(dup, Err(Error::Validation(_))));
    }

    #[test]
    fn rejects_non_contiguous_ids() {
        let nodes = vec![Node { id: 1, x: 0.0, y: 0.0 }];
        assert!(RoadNetwork::new(nodes, vec![]).is_err());
    }

    #[test]
    fn vehicle_route_must_follow_edges() {
        let net = path3();
        let skip = Vehicle {
            id: 0,
            origin: 0,
            destination: 2,
            route: vec![0, 2],
        };
        assert!(MarpInstance::new(net.clone(), vec![skip], 0, "t").is_err());
        let ok = Vehicle {
            id: 0,
            origin: 0,
            destination: 2,
            route: vec![0, 1, 2],
        };
        let inst = MarpInstance::new(net, vec![ok], 0, "t").unwrap();
        assert_eq!(inst.route_sets(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn route_endpoints_must_match() {
        let v = Vehicle {
            id: 0,
            origin: 1,
            destination: 2,
            route: vec![0, 1, 2],
        };
        assert!(MarpInstance::new(path3(), vec![v], 0, "t").is_err());
    }

    #[test]
    fn connectivity() {
        let net = path3();
        assert!(net.is_connected());
        let nodes = vec![Node { id: 0, x: 0.0, y: 0.0 }, Node { id: 1, x: 1.0, y: 0.0 }];
        assert!(!RoadNetwork::new(nodes, vec![]).unwrap().is_connected());
    }
}
