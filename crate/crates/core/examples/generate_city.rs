//! Generate a synthetic road network and fleet, then write the instance JSON.
//!
//! cargo run --example generate_city -- [grid|random_geometric] [size] [vehicles] [seed]

use marp::instance::{generate_instance, generate_network, instance_to_json, NetworkKind};

fn main() -> marp::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind: NetworkKind = args.first().map_or("grid", String::as_str).parse()?;
    let size = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let vehicles = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0);

    let network = generate_network(kind, size, seed)?;
    let instance = generate_instance(&network, vehicles, seed)?;
    println!(
        "{kind} network: {} nodes, {} edges",
        network.node_count(),
        network.edge_count()
    );
    for v in instance.vehicles().iter().take(5) {
        println!("vehicle {}: {} -> {} ({} nodes)", v.id, v.origin, v.destination, v.route.len());
    }

    let path = std::env::temp_dir().join("marp_city.json");
    std::fs::write(&path, instance_to_json(&instance)).map_err(|e| marp::Error::Io {
        path: path.clone(),
        source: e,
    })?;
    println!("wrote {}", path.display());
    Ok(())
}
