//! Analysis of 2-setting, 2-outcome bipartite coincidence experiments.
//!
//! * [`tables`]: joint tables, expectations, marginals, the marginal law and
//!   the factorizability test.
//! * [`bell`]: CHSH values and the entanglement-zoo classification.
//! * [`hilbert`]: states, labeled measurements, Born probabilities, Bell
//!   operators and product tests on C⁴ ≅ C² ⊗ C².
//! * [`models`]: the built-in datasets (a concept combination and the
//!   connected vessels of water) and explicit C⁴ models for them.
//! * [`format`] and [`report`]: the experiment file format and the analysis
//!   report used by the `bellzoo` command line tool.
//! * [`sweep`]: seeded Monte Carlo sweeps, parallel with the `parallel`
//!   feature.

pub mod bell;
pub mod cli;
pub mod error;
pub mod format;
pub mod hilbert;
pub mod linalg;
pub mod models;
pub mod random;
pub mod report;
pub mod sweep;
pub mod tables;

pub use error::{Error, Result};
