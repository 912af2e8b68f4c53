//! Guessing probability versus mutual information for three-party discrete
//! distributions.
//!
//! A higher guessing probability for Bob than for Eve does not force Bob to
//! share more mutual information with Alice once Eve's alphabet exceeds two
//! symbols. This crate evaluates both quantities for arbitrary joint
//! distributions, reproduces an explicit eight-cell counterexample with its
//! closed forms, and searches the simplex for the largest violations.
//!
//! ```
//! use guessgap::{analyze_tripartite, build_counterexample};
//!
//! let report = analyze_tripartite(&build_counterexample(0.01).unwrap());
//! assert!(report.p_b > report.p_e);
//! assert!(report.i_ae > report.i_ab);
//! ```

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod counterexample;
pub mod dist;
pub mod error;
pub mod info;
pub mod io;
pub mod search;
pub mod simplex;

pub use counterexample::{
    build_counterexample, closed_form_report, sweep, verify_counterexample, violation_boundary,
    CounterexampleParams, SweepRow, VerificationReport,
};
pub use dist::{marginal_pair, marginal_single, validate_tripartite, PairDistribution, Shape, TripartiteDistribution, VarId};
pub use error::{Error, Result};
pub use info::{
    analyze_tripartite, binary_entropy, guessing_probability, mutual_information, shannon_entropy,
    InfoReport,
};
pub use search::{brute_force_grid, objective, objective_gradient, projected_ascent, run_search, SearchConfig, SearchResult};
pub use simplex::{dirichlet_sample, project_to_simplex};
