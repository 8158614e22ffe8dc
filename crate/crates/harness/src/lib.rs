//! Scenario replay, invariant checking, differential fuzzing and lemma
//! traceability for `launchpad-core`.
//!
//! - [`scenario`]: the scenario file schema and loader.
//! - [`replay`]: applies actions through the transitions and records a report.
//! - [`invariants`]: state and per-deposit checks run after every action.
//! - [`oracle`]: an arbitrary-precision rational reference model.
//! - [`gen`], [`fuzz`]: random scenarios, seeded fuzzing and shrinking.
//! - [`lemmas`]: every proven lemma as a sampled check, and the trace matrix.

pub mod fuzz;
pub mod gen;
pub mod invariants;
pub mod lemmas;
pub mod oracle;
pub mod replay;
pub mod scenario;

pub use fuzz::{fuzz, FuzzReport};
pub use invariants::Violation;
pub use lemmas::{trace_matrix, TraceMatrix};
pub use replay::{replay, replay_with, Mutation, ReplayOptions, ReplayReport};
pub use scenario::{load_scenario, Action, ActionKind, Scenario, ScenarioError};
