//! Risk-sensitive policy gradients on softmax multi-armed bandits.
//!
//! The crate is organised around a handful of pure building blocks:
//!
//! - [`advantage`]: per-sample and per-arm advantage estimators (mean
//!   baseline, exponential-utility risk-sensitive, and four pass@k-style
//!   baselines).
//! - [`bandit`]: reward tables, softmax policies, and exact or sampled
//!   policy-gradient steps.
//! - [`metrics`]: expected reward, the risk-sensitive objective, pass@k,
//!   entropy and optimal-set mass.
//! - [`lemma`]: one-step numerical witnesses for the behaviour of standard
//!   and risk-sensitive updates around a sub-optimal mode.
//! - [`experiments`]: a seeded, config-driven harness that writes CSV traces.
//! - [`cli`]: the `risklab` command line.

pub mod advantage;
pub mod bandit;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod format;
pub mod lemma;
pub mod metrics;
pub mod numeric;

pub use advantage::{AdvantageVector, BinaryGroupStats, Estimator, RiskParam};
pub use bandit::{RewardTable, SampleBatch, SoftmaxPolicy, UpdateParams};
pub use error::{LabError, Result};
