//! Unique coverage and pairwise overlap for a small fleet.

use marp::coverage::compute_coverage;
use marp::instance::{generate_instance, generate_network, NetworkKind};

fn main() -> marp::Result<()> {
    let network = generate_network(NetworkKind::Grid, 6, 1)?;
    let instance = generate_instance(&network, 8, 1)?;
    let stats = compute_coverage(&instance);

    println!("vehicle  route  unique");
    for (v, u) in instance.vehicles().iter().zip(&stats.unique_counts) {
        println!("{:>7}  {:>5}  {:>6}", v.id, v.route.len(), u);
    }
    println!("\noverlapping pairs:");
    for (&(i, j), &c) in &stats.overlaps {
        println!("  ({i}, {j}) share {c} nodes");
    }
    let busiest = stats.node_usage.iter().max_by_key(|&(n, u)| (*u, std::cmp::Reverse(*n)));
    if let Some((node, uses)) = busiest {
        println!("\nbusiest node {node} is visited by {uses} vehicles");
    }
    Ok(())
}
