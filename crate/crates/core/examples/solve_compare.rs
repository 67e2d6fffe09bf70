//! Exact, simulated annealing and greedy on the same instance.

use std::time::Instant;

use marp::coverage::compute_coverage;
use marp::instance::{generate_instance, generate_network, NetworkKind};
use marp::qubo::{build_qubo, PenaltyConfig, ScoreTerms};
use marp::solvers::{default_sa_params, solve_exact, solve_greedy, solve_sa, Solution};

fn main() -> marp::Result<()> {
    let network = generate_network(NetworkKind::Grid, 8, 5)?;
    let instance = generate_instance(&network, 18, 5)?;
    let terms = ScoreTerms::from(&compute_coverage(&instance));
    let model = build_qubo(&terms, &PenaltyConfig::soft())?;

    let mut params = default_sa_params(&model);
    params.seed = 7;

    let report = |name: &str, started: Instant, s: &Solution| {
        println!(
            "{name:<7} energy {:>10.4}  selected {:>2}  {:?}",
            s.energy,
            s.selected().count(),
            started.elapsed()
        );
    };

    let t = Instant::now();
    let exact = solve_exact(&model)?;
    report("exact", t, &exact);
    let t = Instant::now();
    let sa = solve_sa(&model, &params)?;
    report("sa", t, &sa);
    let t = Instant::now();
    let greedy = solve_greedy(&model);
    report("greedy", t, &greedy);

    println!("\nSA gap to optimum: {:.3e}", sa.energy - exact.energy);
    Ok(())
}
