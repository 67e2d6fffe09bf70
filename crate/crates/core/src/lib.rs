//! Multi-agent route selection as a QUBO.
//!
//! A fleet of vehicles drives fixed routes on a road network. Choosing which
//! vehicles to deploy trades coverage (nodes only one selected vehicle visits)
//! against overlap (nodes shared by selected pairs):
//!
//! ```text
//! maximise  Σ_i u_i x_i − λ Σ_{i<j} c_ij x_i x_j,   x ∈ {0,1}^n
//! ```
//!
//! The crate covers the whole pipeline:
//!
//! * [`instance`]: synthetic grid / random-geometric networks, shortest-path
//!   routes, and a JSON instance format;
//! * [`coverage`]: `u_i`, sparse `c_ij` and node usage from a node index;
//! * [`qubo`]: the coefficient model, soft/hard penalty choices, one-hot
//!   route groups, and a sparse coordinate text format;
//! * [`solvers`]: exact (enumeration / branch-and-bound), simulated
//!   annealing and greedy minimisers;
//! * [`reduction`]: weighted set packing mapped onto the same model;
//! * [`metrics`]: usage concentration, overlap-graph and percentage metrics;
//! * [`sweep`]: λ / fleet-size sweeps, Pareto frontiers and knee detection;
//! * [`cli`]: the `marp` command-line front end.
//!
//! ```
//! use marp::coverage::compute_coverage;
//! use marp::instance::{generate_instance, generate_network, NetworkKind};
//! use marp::qubo::{build_qubo, PenaltyConfig, ScoreTerms};
//! use marp::solvers::solve_exact;
//!
//! let network = generate_network(NetworkKind::Grid, 5, 0)?;
//! let instance = generate_instance(&network, 8, 1)?;
//! let stats = compute_coverage(&instance);
//! let model = build_qubo(&ScoreTerms::from(&stats), &PenaltyConfig::hard())?;
//! let best = solve_exact(&model)?;
//! assert!(best.energy <= 0.0);
//! # Ok::<(), marp::Error>(())
//! ```

pub mod cli;
pub mod coverage;
pub mod error;
pub mod instance;
pub mod metrics;
pub mod qubo;
pub mod reduction;
pub mod solvers;
pub mod sweep;
mod util;

pub use error::{Error, Result};
pub use util::{median, round_sig};
