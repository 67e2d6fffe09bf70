//! Weighted set packing solved as a vehicle-selection model, checked
//! against brute force.

use marp::reduction::{reduce_wsp_to_marp, solve_wsp_via_marp, wsp_brute_force, WspInstance};

fn main() -> marp::Result<()> {
    let wsp = WspInstance::new(
        6,
        vec![vec![0, 1], vec![1, 2, 3], vec![3, 4], vec![4, 5], vec![0, 5]],
        vec![3.0, 5.0, 2.0, 4.0, 1.0],
    )?;

    let reduction = reduce_wsp_to_marp(&wsp);
    println!("penalty lambda = {}", reduction.lambda);

    let via_qubo = solve_wsp_via_marp(&wsp)?;
    let oracle = wsp_brute_force(&wsp)?;
    println!("via QUBO:    sets {:?}, weight {}", via_qubo.selected, via_qubo.weight);
    println!("brute force: sets {:?}, weight {}", oracle.selected, oracle.weight);
    println!("{}", if via_qubo.weight == oracle.weight { "PASS" } else { "FAIL" });
    Ok(())
}
