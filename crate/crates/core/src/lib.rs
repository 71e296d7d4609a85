//! Condition-based maintenance of a single unit degrading as a homogeneous
//! gamma process, with increasingly imperfect repairs.
//!
//! The crate simulates the inspection-epoch maintenance problem, trains a
//! Double Deep Q-Network agent on it and measures any policy, learned or
//! conventional, by renewal-cycle Monte Carlo statistics.

pub mod agent;
pub mod baselines;
pub mod cases;
pub mod degradation;
pub mod env;
pub mod error;
pub mod eval;
pub mod nn;
pub mod pipeline;
pub mod rng;
pub mod sampling;
pub mod special;

pub use agent::{greedy_policy, train, AgentConfig, GreedyPolicy, TrainedAgent};
pub use baselines::{baseline_decision, optimize_baseline, BaselineKind, BaselineSpec, GridSpec};
pub use cases::{load_case, CaseConfig};
pub use degradation::GammaProcessParams;
pub use env::{Action, CostParams, EnvRng, Event, MaintenanceEnv, Observation, Policy, RepairSpread, StepOutcome, SystemState};
pub use error::{Error, Result};
pub use eval::{collect_run, monte_carlo, RunStatistics};
pub use nn::Mlp;
pub use rng::RngStream;
