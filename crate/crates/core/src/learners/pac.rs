//! Equivalence queries answered from samples: the `i`-th equivalence query
//! draws `m_i = ceil((1/eps) * (ln(1/delta) + i * ln 2))` labelled
//! examples and returns the first one the hypothesis gets wrong, or yes if
//! there is none.

use thiserror::Error;

use crate::framework::{Example, LabeledExample, LearningFramework};
use crate::reasoner::Reasoner;
use crate::syntax::TBox;
use crate::teacher::{EqAnswer, Teacher, TeacherError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacParams {
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PacError {
    #[error("{name} must lie strictly between 0 and 1, got {value}")]
    OutOfRange { name: &'static str, value: f64 },
}

impl PacParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self, PacError> {
        for (name, value) in [("epsilon", epsilon), ("delta", delta)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(PacError::OutOfRange { name, value });
            }
        }
        Ok(PacParams { epsilon, delta })
    }

    /// Samples drawn for the `i`-th equivalence query, `i >= 1`. The
    /// per-query confidence `delta / 2^i` sums to at most `delta`.
    pub fn sample_size(&self, i: usize) -> usize {
        let m = ((1.0 / self.delta).ln() + i as f64 * std::f64::consts::LN_2) / self.epsilon;
        m.ceil() as usize
    }
}

pub struct PacTeacher<T> {
    inner: T,
    params: PacParams,
    eq_index: usize,
}

impl<T: Teacher> PacTeacher<T> {
    pub fn new(inner: T, params: PacParams) -> Self {
        PacTeacher { inner, params, eq_index: 0 }
    }

    /// Equivalence queries simulated so far.
    pub fn eq_index(&self) -> usize {
        self.eq_index
    }

    pub fn into_inner(self) -> T {
        self.inner
    }
}

impl<T: Teacher> Teacher for PacTeacher<T> {
    fn framework(&self) -> LearningFramework {
        self.inner.framework()
    }

    fn membership(&mut self, e: &Example) -> Result<bool, TeacherError> {
        self.inner.membership(e)
    }

    fn equivalence(&mut self, h: &TBox) -> Result<EqAnswer, TeacherError> {
        let framework = self.inner.framework();
        framework.validate_hypothesis(h)?;
        self.eq_index += 1;
        let hr = Reasoner::new(h);
        for _ in 0..self.params.sample_size(self.eq_index) {
            let LabeledExample { example, label } = self.inner.sample()?;
            if framework.is_member_with(&hr, &example)? != label {
                return Ok(EqAnswer::Counterexample(example));
            }
        }
        Ok(EqAnswer::Yes)
    }

    fn sample(&mut self) -> Result<LabeledExample, TeacherError> {
        self.inner.sample()
    }
}
