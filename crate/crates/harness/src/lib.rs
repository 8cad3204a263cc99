//! Experiment orchestration for elhlab: target generation, machine-taught
//! runs with transcripts and metrics, the adversarial hardness report and
//! the HTTP service for human-taught sessions.

pub mod experiment;
pub mod gen;
pub mod hardness;
pub mod session;
mod text;
pub mod transcript;

pub use experiment::{run_experiment, ExperimentConfig, ExperimentOutcome, HarnessError, SignatureSpec, TargetSource};
pub use gen::{generate_target, GenError, GenSpec};
pub use transcript::{Event, EventBody, Metrics, Recorder, Transcript, TranscriptLog};
