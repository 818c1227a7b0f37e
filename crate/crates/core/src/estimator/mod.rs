//! Connectivity event counts accumulated over independent samples.

mod checkpoint;
mod counts;
mod estimate;
mod experiment;

pub use checkpoint::Checkpoint;
pub use counts::{accumulate_sample, merge, BatchedCounts, EventCounts, SiteEvent};
pub use estimate::{estimate, Estimate, ProbabilityEstimates};
pub use experiment::{run_experiment, Experiment, SampleWorker};
