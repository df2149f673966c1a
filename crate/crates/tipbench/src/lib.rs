//! Synthetic tipping-systems workbench.
//!
//! The crate generates ensembles of stochastic dynamical systems that are
//! forced toward critical transitions, labels every trajectory with its
//! relative distance to criticality (RDTC), turns episode ensembles into
//! masked in-context-learning tasks, and evaluates early-warning detectors
//! (classical rolling indicators and externally supplied quantile
//! predictions) with balanced AUROC and lead-time analysis.
//!
//! Module map:
//! - [`dynamics`]: drift fields, diffusion specs and Jacobians for the
//!   validation catalog (canonical, semi-real and rate-forced systems).
//! - [`continuation`]: equilibrium tracking and bifurcation localization
//!   along a control sweep.
//! - [`prior`]: sampling of generative processes (polynomial driver,
//!   interaction graph, auxiliary SDE).
//! - [`simulate`]: forcing schedules, Euler–Maruyama integration, RDTC
//!   labeling, episode/ensemble production.
//! - [`taskgen`]: masked tabular context-query task construction.
//! - [`ews`]: rolling early-warning indicators and Kendall-τ trend scores.
//! - [`eval`]: query-window construction, risk-score heads, ROC/AUROC with
//!   balanced subsampling and standard errors.
//! - [`rng`]: reproducible seeded RNG with documented sub-stream derivation.
//! - [`io`]: episode JSONL and CSV readers/writers.

pub mod continuation;
pub mod dynamics;
pub mod error;
pub mod eval;
pub mod ews;
pub mod io;
pub mod prior;
pub mod rng;
pub mod simulate;
pub mod taskgen;

pub use error::{Error, Result};
