//! Instance JSON:
//!
//! ```text
//! {"seed": int, "radius_label": str,
//!  "network": {"nodes": [[id,x,y],...], "edges": [[u,v,len],...]},
//!  "vehicles": [{"id": int, "origin": int, "destination": int, "route": [int,...]},...]}
//! ```
//!
//! Keys are written in this order and floats carry 9 significant digits.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use super::{Edge, MarpInstance, Node, RoadNetwork, Vehicle};
use crate::error::{Error, Result};
use crate::util::round_sig;

fn nine_digits<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*v, 9))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    seed: u64,
    radius_label: String,
    network: NetworkFile,
    vehicles: Vec<VehicleFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    nodes: Vec<NodeRow>,
    edges: Vec<EdgeRow>,
}

#[derive(Serialize, Deserialize)]
struct NodeRow(
    usize,
    #[serde(serialize_with = "nine_digits")] f64,
    #[serde(serialize_with = "nine_digits")] f64,
);

#[derive(Serialize, Deserialize)]
struct EdgeRow(usize, usize, #[serde(serialize_with = "nine_digits")] f64);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VehicleFile {
    id: usize,
    origin: usize,
    destination: usize,
    route: Vec<usize>,
}

pub fn instance_to_json(instance: &MarpInstance) -> String {
    let file = InstanceFile {
        seed: instance.seed(),
        radius_label: instance.radius_label().to_owned(),
        network: NetworkFile {
            nodes: instance
                .network()
                .nodes()
                .iter()
                .map(|n| NodeRow(n.id, n.x, n.y))
                .collect(),
            edges: instance
                .network()
                .edges()
                .iter()
                .map(|e| EdgeRow(e.u, e.v, e.length))
                .collect(),
        },
        vehicles: instance
            .vehicles()
            .iter()
            .map(|v| VehicleFile {
                id: v.id,
                origin: v.origin,
                destination: v.destination,
                route: v.route.clone(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string(&file).expect("instance serialization is infallible");
    out.push('\n');
    out
}

pub fn instance_from_json(text: &str) -> Result<MarpInstance> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        Error::parse(path, err.into_inner())
    })?;
    de.end().map_err(|e| Error::parse("<trailing>", e))?;

    let nodes = file
        .network
        .nodes
        .into_iter()
        .map(|NodeRow(id, x, y)| Node { id, x, y })
        .collect();
    let edges = file
        .network
        .edges
        .into_iter()
        .map(|EdgeRow(u, v, length)| Edge { u, v, length })
        .collect();
    let network = RoadNetwork::new(nodes, edges)?;
    let vehicles = file
        .vehicles
        .into_iter()
        .map(|v| Vehicle {
            id: v.id,
            origin: v.origin,
            destination: v.destination,
            route: v.route,
        })
        .collect();
    MarpInstance::new(network, vehicles, file.seed, file.radius_label)
}

pub fn save_instance(instance: &MarpInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, instance_to_json(instance)).map_err(|e| Error::io(path, e))
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<MarpInstance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    instance_from_json(&text)
}
