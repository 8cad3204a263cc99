//! Learning algorithms. Each one sees only the input signature and a
//! teacher, and returns its final hypothesis.

mod dllite;
mod enumerate;
mod horn;
mod pac;
mod toy;

pub use dllite::{learn_dllite_eq, learn_dllite_mq};
pub use enumerate::{learn_elh_enumerate, EnumerationStats};
pub use horn::{learn_horn, HornClauseState, HornLearner, Refinement};
pub use pac::{PacError, PacParams, PacTeacher};
pub use toy::learn_toy_atomic;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::framework::{Example, ExampleKind, FragmentId};
use crate::syntax::{Signature, TBox};
use crate::teacher::{Budgeted, Teacher, TeacherError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgorithmId {
    ToyMq,
    HornMqEq,
    DlliteMq,
    DlliteEq,
    ElhEnumEq,
    /// Equivalence queries of the inner learner answered from samples.
    Pac(Box<AlgorithmId>),
}

impl AlgorithmId {
    pub const BASE: [AlgorithmId; 5] = [
        AlgorithmId::ToyMq,
        AlgorithmId::HornMqEq,
        AlgorithmId::DlliteMq,
        AlgorithmId::DlliteEq,
        AlgorithmId::ElhEnumEq,
    ];

    /// Whether this learner can run on `fragment`.
    pub fn supports(&self, fragment: FragmentId) -> bool {
        match self {
            AlgorithmId::ToyMq => fragment.example_kind() == ExampleKind::Axiom,
            AlgorithmId::HornMqEq => fragment == FragmentId::ToyConj,
            AlgorithmId::DlliteMq => fragment == FragmentId::DlLite,
            AlgorithmId::DlliteEq => fragment.example_kind() == ExampleKind::Axiom,
            AlgorithmId::ElhEnumEq => matches!(fragment, FragmentId::Elh | FragmentId::ElhIq),
            AlgorithmId::Pac(inner) => inner.supports(fragment),
        }
    }

    pub fn uses_equivalence(&self) -> bool {
        !matches!(self, AlgorithmId::ToyMq | AlgorithmId::DlliteMq)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmId::ToyMq => f.write_str("toy-mq"),
            AlgorithmId::HornMqEq => f.write_str("horn-mqeq"),
            AlgorithmId::DlliteMq => f.write_str("dllite-mq"),
            AlgorithmId::DlliteEq => f.write_str("dllite-eq"),
            AlgorithmId::ElhEnumEq => f.write_str("elh-enum-eq"),
            AlgorithmId::Pac(inner) => write!(f, "pac({inner})"),
        }
    }
}

impl FromStr for AlgorithmId {
    type Err = LearnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("pac(").and_then(|r| r.strip_suffix(')')) {
            return Ok(AlgorithmId::Pac(Box::new(inner.parse()?)));
        }
        AlgorithmId::BASE
            .into_iter()
            .find(|a| a.to_string() == s)
            .ok_or_else(|| LearnError::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Total queries of every kind; unlimited when absent.
    pub max_queries: Option<usize>,
    /// Largest TBox size the enumeration learner tries.
    pub max_size: usize,
    /// Existential depth of enumerated concepts.
    pub depth_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_queries: None, max_size: 12, depth_cap: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub algorithm: AlgorithmId,
    pub signature: Signature,
    pub caps: Caps,
    pub seed: u64,
    pub pac: Option<PacParams>,
}

impl LearnerConfig {
    pub fn new(algorithm: AlgorithmId, signature: Signature) -> Self {
        LearnerConfig { algorithm, signature, caps: Caps::default(), seed: 0, pac: None }
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn with_pac(mut self, params: PacParams) -> Self {
        self.pac = Some(params);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnError {
    #[error(transparent)]
    Teacher(#[from] TeacherError),
    #[error("unknown learner `{0}`")]
    UnknownAlgorithm(String),
    #[error("{algorithm} does not run on {fragment}")]
    Unsupported { algorithm: AlgorithmId, fragment: FragmentId },
    #[error("{0} needs epsilon and delta")]
    MissingPacParams(AlgorithmId),
    #[error("no TBox of size at most {max_size} was accepted")]
    Exhausted { max_size: usize },
    /// A counterexample the learner's invariants rule out; the teacher
    /// answered inconsistently.
    #[error("unexpected counterexample `{0}`")]
    UnexpectedCounterexample(Example),
}

/// Runs the configured learner against `teacher`, enforcing
/// `caps.max_queries`.
pub fn learn(cfg: &LearnerConfig, teacher: &mut dyn Teacher) -> Result<TBox, LearnError> {
    let fragment = teacher.framework().fragment;
    if !cfg.algorithm.supports(fragment) {
        return Err(LearnError::Unsupported { algorithm: cfg.algorithm.clone(), fragment });
    }
    let mut budgeted = Budgeted::new(teacher, cfg.caps.max_queries);
    run(&cfg.algorithm, cfg, &mut budgeted)
}

fn run(algorithm: &AlgorithmId, cfg: &LearnerConfig, teacher: &mut dyn Teacher) -> Result<TBox, LearnError> {
    let sig = &cfg.signature;
    match algorithm {
        AlgorithmId::ToyMq => learn_toy_atomic(teacher, sig),
        AlgorithmId::HornMqEq => learn_horn(teacher, sig),
        AlgorithmId::DlliteMq => learn_dllite_mq(teacher, sig),
        AlgorithmId::DlliteEq => learn_dllite_eq(teacher),
        AlgorithmId::ElhEnumEq => {
            learn_elh_enumerate(teacher, sig, cfg.caps.max_size, cfg.caps.depth_cap).map(|(h, _)| h)
        }
        AlgorithmId::Pac(inner) => {
            let params = cfg.pac.ok_or_else(|| LearnError::MissingPacParams(algorithm.clone()))?;
            let mut pac = PacTeacher::new(teacher, params);
            run(inner, cfg, &mut pac)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_ids_round_trip() {
        for a in AlgorithmId::BASE {
            assert_eq!(a.to_string().parse::<AlgorithmId>().unwrap(), a);
        }
        let pac: AlgorithmId = "pac(dllite-eq)".parse().unwrap();
        assert_eq!(pac, AlgorithmId::Pac(Box::new(AlgorithmId::DlliteEq)));
        assert_eq!(pac.to_string(), "pac(dllite-eq)");
        assert!("pac(nope)".parse::<AlgorithmId>().is_err());
        assert!("lstar".parse::<AlgorithmId>().is_err());
    }

    #[test]
    fn fragment_support() {
        assert!(AlgorithmId::HornMqEq.supports(FragmentId::ToyConj));
        assert!(!AlgorithmId::HornMqEq.supports(FragmentId::Elh));
        assert!(AlgorithmId::ElhEnumEq.supports(FragmentId::ElhIq));
        assert!(!AlgorithmId::ToyMq.supports(FragmentId::ElhIq));
    }
}
