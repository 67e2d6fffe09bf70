//! Concentration and overlap metrics for the optimum under both regimes.

use marp::coverage::compute_coverage;
use marp::instance::{generate_instance, generate_network, NetworkKind};
use marp::metrics::full_report;
use marp::qubo::{build_qubo, PenaltyConfig, ScoreTerms};
use marp::solvers::solve_exact;

fn main() -> marp::Result<()> {
    let network = generate_network(NetworkKind::Grid, 7, 3)?;
    let instance = generate_instance(&network, 14, 3)?;
    let stats = compute_coverage(&instance);
    let terms = ScoreTerms::from(&stats);

    for penalty in [PenaltyConfig::soft(), PenaltyConfig::hard()] {
        let model = build_qubo(&terms, &penalty)?;
        let best = solve_exact(&model)?;
        let r = full_report(&instance, &stats, &model, &best)?;
        println!("{} (lambda {:.4})", model.lambda_regime(), model.lambda_used());
        println!("  coverage {:6.2}%  overlap {:6.2}%  fleet {:6.2}%", r.pct_coverage, r.pct_overlap, r.pct_vehicles);
        println!("  mean node use {:.3}, top-10% share {:.3}", r.avg_node_overlap, r.top10_share);
        println!("  entropy {:.4}, HHI {:.4}", r.entropy_norm, r.hhi);
        println!(
            "  overlap graph density {:.3}, mean degree {:.3}",
            r.overlap_graph_density, r.overlap_graph_avg_degree
        );
    }
    Ok(())
}
