//! Particle-filter tracking toolkit with swarm-optimized resampling.
//!
//! The crate provides three trackers over a common pipeline — a bootstrap
//! particle filter (`PF`), a PSO-resampled filter (`PSO-PF`), and an
//! annealed-weighted-QPSO-resampled filter (`AWQPSO-PF`) — plus a
//! deterministic synthetic scene simulator, observation models, and the
//! tracking quality indices used to compare them.

pub mod config;
pub mod error;
pub mod filter;
pub mod frame;
pub mod metrics;
pub mod observe;
pub mod optim;
pub mod rng;
pub mod scenesim;
pub mod types;

pub use config::{ObservationKind, TrackerConfig};
pub use error::{Error, Result};
pub use filter::TrackerKind;
pub use metrics::TrackReport;
pub use scenesim::{Scenario, ScenarioKind, Sequence, SequenceMode};
pub use types::{clamp_state, BoundingBox, Bounds, Particle, Swarm, TargetState};
