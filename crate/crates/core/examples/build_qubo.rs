//! Build the model under each penalty regime and print the coordinate file.

use marp::coverage::compute_coverage;
use marp::instance::{generate_instance, generate_network, NetworkKind};
use marp::qubo::{build_qubo, qubo_to_text, PenaltyConfig, ScoreTerms};

fn main() -> marp::Result<()> {
    let network = generate_network(NetworkKind::Grid, 5, 2)?;
    let instance = generate_instance(&network, 5, 2)?;
    let terms = ScoreTerms::from(&compute_coverage(&instance));

    for penalty in [PenaltyConfig::soft(), PenaltyConfig::hard(), PenaltyConfig::custom(0.5)] {
        let model = build_qubo(&terms, &penalty)?;
        println!("{} regime: lambda = {}", model.lambda_regime(), model.lambda_used());
    }

    let model = build_qubo(&terms, &PenaltyConfig::hard())?;
    print!("\n{}", qubo_to_text(&model));
    Ok(())
}
