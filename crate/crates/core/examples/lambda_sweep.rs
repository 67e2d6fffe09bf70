//! Sweep λ over a few fleet sizes, then report each bin's Pareto frontier
//! and its knee.

use marp::sweep::{
    binned_frontiers, knee_point, points_from_rows, run_sweep, SweepConfig,
};

const CONFIG: &str = r#"{
    "network": {"kind": "grid", "size": 12, "seed": 0},
    "fleet_sizes": [20, 40],
    "seeds": [1],
    "lambda_values": [0.05, 0.1, 0.2, 0.5, 1, "soft", "hard"],
    "solver": {"kind": "sa", "num_reads": 20},
    "bins": [[1, 30], [31, 60]]
}"#;

fn main() -> marp::Result<()> {
    let config = SweepConfig::from_json(CONFIG)?;
    let rows: Vec<_> = run_sweep(&config)?.into_iter().map(|r| r.row).collect();

    for row in &rows {
        println!(
            "n={:<3} lambda {:>8.4} ({:<6}) cov {:6.2}%  ov {:6.2}%",
            row.n_vehicles, row.lambda, row.regime, row.report.pct_coverage, row.report.pct_overlap
        );
    }

    for (bin, front) in binned_frontiers(&points_from_rows(&rows), &config.bins()) {
        println!("\nbin {bin}: {} frontier points", front.len());
        for p in &front {
            println!("  cov {:6.2}%  ov {:6.2}%  lambda {:.4}", p.pct_cov, p.pct_ov, p.lambda);
        }
        match knee_point(&front) {
            Ok(k) => println!("  knee at lambda {:.4}", k.lambda),
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
