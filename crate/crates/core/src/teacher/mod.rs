//! Teachers: the learner's only view of the target.
//!
//! A learner holds a `&mut dyn Teacher` and may pose membership (MQ),
//! equivalence (EQ) and sample (SQ) queries, one at a time.

mod deferred;

pub use deferred::{AnswerError, DeferredLink, DeferredTeacher, HumanAnswer, PendingQuery};

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::framework::{example_order, Example, FrameworkError, LabeledExample, LearningFramework};
use crate::reasoner::Reasoner;
use crate::syntax::{signature_of, Axiom, Signature, TBox};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QueryKind {
    Mq,
    Eq,
    Sq,
}

impl QueryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::Mq => "mq",
            QueryKind::Eq => "eq",
            QueryKind::Sq => "sq",
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqAnswer {
    Yes,
    Counterexample(Example),
}

/// Any answer a teacher can give.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Counterexample(Example),
    Sample(LabeledExample),
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

impl From<EqAnswer> for Answer {
    fn from(a: EqAnswer) -> Self {
        match a {
            EqAnswer::Yes => Answer::Yes,
            EqAnswer::Counterexample(e) => Answer::Counterexample(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TeacherError {
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error("this teacher does not answer {0} queries")]
    Unsupported(QueryKind),
    #[error("the sample distribution has empty support")]
    EmptySupport,
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("query budget of {limit} exhausted")]
    Budget { limit: usize },
    #[error("session closed")]
    SessionClosed,
    #[error("no answer within {0:?}")]
    Timeout(std::time::Duration),
}

pub trait Teacher {
    fn framework(&self) -> LearningFramework;

    fn membership(&mut self, e: &Example) -> Result<bool, TeacherError>;

    fn equivalence(&mut self, h: &TBox) -> Result<EqAnswer, TeacherError>;

    fn sample(&mut self) -> Result<LabeledExample, TeacherError> {
        Err(TeacherError::Unsupported(QueryKind::Sq))
    }
}

impl<T: Teacher + ?Sized> Teacher for &mut T {
    fn framework(&self) -> LearningFramework {
        (**self).framework()
    }

    fn membership(&mut self, e: &Example) -> Result<bool, TeacherError> {
        (**self).membership(e)
    }

    fn equivalence(&mut self, h: &TBox) -> Result<EqAnswer, TeacherError> {
        (**self).equivalence(h)
    }

    fn sample(&mut self) -> Result<LabeledExample, TeacherError> {
        (**self).sample()
    }
}

/// Which element of the candidate set an equivalence query returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EqStrategy {
    /// Smallest by size, then printed form.
    #[default]
    FirstSmallest,
    /// Uniform over the candidates, from the teacher's RNG.
    RandomSeeded,
    /// Largest by size, then printed form.
    AdversarialLargest,
}

impl EqStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            EqStrategy::FirstSmallest => "first-smallest",
            EqStrategy::RandomSeeded => "random-seeded",
            EqStrategy::AdversarialLargest => "adversarial-largest",
        }
    }
}

impl fmt::Display for EqStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EqStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [EqStrategy::FirstSmallest, EqStrategy::RandomSeeded, EqStrategy::AdversarialLargest]
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown eq strategy `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    /// Uniform over `enumerate_examples` with these caps.
    Uniform {
        depth_cap: usize,
        size_cap: usize,
    },
    Weighted(Vec<(Example, f64)>),
}

impl Default for DistributionSpec {
    fn default() -> Self {
        DistributionSpec::Uniform { depth_cap: 1, size_cap: 7 }
    }
}

#[derive(Debug, Clone)]
pub struct TeacherConfig {
    pub target: TBox,
    pub framework: LearningFramework,
    pub eq_strategy: EqStrategy,
    pub distribution: DistributionSpec,
    pub seed: u64,
    /// Signature the uniform distribution ranges over; the target's own
    /// signature when absent.
    pub universe: Option<Signature>,
}

impl TeacherConfig {
    pub fn new(target: TBox, framework: impl Into<LearningFramework>) -> Self {
        TeacherConfig {
            target,
            framework: framework.into(),
            eq_strategy: EqStrategy::default(),
            distribution: DistributionSpec::default(),
            seed: 0,
            universe: None,
        }
    }

    pub fn with_strategy(mut self, s: EqStrategy) -> Self {
        self.eq_strategy = s;
        self
    }

    pub fn with_distribution(mut self, d: DistributionSpec) -> Self {
        self.distribution = d;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_universe(mut self, sig: Signature) -> Self {
        self.universe = Some(sig);
        self
    }
}

/// Sampling support, built on first use.
struct Support {
    examples: Vec<Example>,
    labels: Vec<Option<bool>>,
    weights: Option<WeightedIndex<f64>>,
}

/// Answers every query truthfully for a fixed target.
pub struct TruthfulTeacher {
    cfg: TeacherConfig,
    reasoner: Reasoner,
    rng: ChaCha8Rng,
    support: Option<Support>,
}

impl TruthfulTeacher {
    pub fn new(cfg: TeacherConfig) -> Result<Self, TeacherError> {
        cfg.framework.validate_hypothesis(&cfg.target)?;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(TruthfulTeacher { reasoner: Reasoner::new(&cfg.target), rng, support: None, cfg })
    }

    pub fn config(&self) -> &TeacherConfig {
        &self.cfg
    }

    pub fn target(&self) -> &TBox {
        &self.cfg.target
    }

    /// Whether the target has `e`.
    pub fn label(&self, e: &Example) -> Result<bool, TeacherError> {
        Ok(self.cfg.framework.is_member_with(&self.reasoner, e)?)
    }

    /// The candidates an equivalence query on `h` chooses from: target
    /// axioms `h` misses (positive) and `h` axioms the target misses
    /// (negative), as examples of the framework, sorted by size then print.
    pub fn counterexample_candidates(&self, h: &TBox) -> Vec<Example> {
        let hr = Reasoner::new(h);
        let positive = self.cfg.target.iter().filter(|a| !hr.entails(a));
        let negative = h.iter().filter(|a| !self.reasoner.entails(a));
        let mut out: Vec<Example> =
            positive.chain(negative).map(|a: &Axiom| self.cfg.framework.example_from_axiom(a)).collect();
        out.sort_by(example_order);
        out.dedup();
        out
    }

    fn build_support(&mut self) -> Result<&mut Support, TeacherError> {
        if self.support.is_none() {
            let (examples, weights) = match &self.cfg.distribution {
                DistributionSpec::Uniform { depth_cap, size_cap } => {
                    let sig = self.cfg.universe.clone().unwrap_or_else(|| signature_of(&self.cfg.target));
                    let ex: Vec<Example> = self.cfg.framework.enumerate_examples(&sig, *depth_cap, *size_cap).collect();
                    (ex, None)
                }
                DistributionSpec::Weighted(corpus) => {
                    for (e, w) in corpus {
                        self.cfg.framework.validate_example(e)?;
                        if !w.is_finite() || *w < 0.0 {
                            return Err(TeacherError::Distribution(format!("weight {w} of `{e}`")));
                        }
                    }
                    if corpus.is_empty() {
                        return Err(TeacherError::EmptySupport);
                    }
                    let idx = WeightedIndex::new(corpus.iter().map(|(_, w)| *w))
                        .map_err(|e| TeacherError::Distribution(e.to_string()))?;
                    (corpus.iter().map(|(e, _)| e.clone()).collect(), Some(idx))
                }
            };
            if examples.is_empty() {
                return Err(TeacherError::EmptySupport);
            }
            let labels = vec![None; examples.len()];
            self.support = Some(Support { examples, labels, weights });
        }
        Ok(self.support.as_mut().unwrap())
    }

    /// The sampling support with its probabilities.
    pub fn support(&mut self) -> Result<Vec<(Example, f64)>, TeacherError> {
        let n = self.build_support()?.examples.len() as f64;
        let s = self.support.as_ref().unwrap();
        Ok(match &self.cfg.distribution {
            DistributionSpec::Weighted(corpus) => {
                let total: f64 = corpus.iter().map(|(_, w)| w).sum();
                corpus.iter().map(|(e, w)| (e.clone(), w / total)).collect()
            }
            DistributionSpec::Uniform { .. } => s.examples.iter().map(|e| (e.clone(), 1.0 / n)).collect(),
        })
    }
}

impl Teacher for TruthfulTeacher {
    fn framework(&self) -> LearningFramework {
        self.cfg.framework
    }

    fn membership(&mut self, e: &Example) -> Result<bool, TeacherError> {
        self.label(e)
    }

    fn equivalence(&mut self, h: &TBox) -> Result<EqAnswer, TeacherError> {
        self.cfg.framework.validate_hypothesis(h)?;
        let candidates = self.counterexample_candidates(h);
        let chosen = match self.cfg.eq_strategy {
            _ if candidates.is_empty() => return Ok(EqAnswer::Yes),
            EqStrategy::FirstSmallest => candidates[0].clone(),
            EqStrategy::AdversarialLargest => candidates[candidates.len() - 1].clone(),
            EqStrategy::RandomSeeded => candidates[self.rng.random_range(0..candidates.len())].clone(),
        };
        Ok(EqAnswer::Counterexample(chosen))
    }

    fn sample(&mut self) -> Result<LabeledExample, TeacherError> {
        self.build_support()?;
        let framework = self.cfg.framework;
        let support = self.support.as_mut().unwrap();
        let rng = &mut self.rng;
        let reasoner = &self.reasoner;
        let i = match &support.weights {
            Some(w) => w.sample(rng),
            None => rng.random_range(0..support.examples.len()),
        };
        let label = match support.labels[i] {
            Some(l) => l,
            None => {
                let l = framework.is_member_with(reasoner, &support.examples[i])?;
                support.labels[i] = Some(l);
                l
            }
        };
        Ok(LabeledExample { example: support.examples[i].clone(), label })
    }
}

/// Query counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounts {
    pub mq: usize,
    pub eq: usize,
    pub sq: usize,
}

impl QueryCounts {
    pub fn total(&self) -> usize {
        self.mq + self.eq + self.sq
    }

    pub fn bump(&mut self, kind: QueryKind) {
        match kind {
            QueryKind::Mq => self.mq += 1,
            QueryKind::Eq => self.eq += 1,
            QueryKind::Sq => self.sq += 1,
        }
    }
}

/// Counts queries and refuses any beyond `limit` with
/// [`TeacherError::Budget`].
pub struct Budgeted<T> {
    inner: T,
    limit: Option<usize>,
    counts: QueryCounts,
}

impl<T: Teacher> Budgeted<T> {
    pub fn new(inner: T, limit: Option<usize>) -> Self {
        Budgeted { inner, limit, counts: QueryCounts::default() }
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }

    pub fn into_inner(self) -> T {
        self.inner
    }

    fn charge(&mut self, kind: QueryKind) -> Result<(), TeacherError> {
        if let Some(limit) = self.limit {
            if self.counts.total() >= limit {
                return Err(TeacherError::Budget { limit });
            }
        }
        self.counts.bump(kind);
        Ok(())
    }
}

impl<T: Teacher> Teacher for Budgeted<T> {
    fn framework(&self) -> LearningFramework {
        self.inner.framework()
    }

    fn membership(&mut self, e: &Example) -> Result<bool, TeacherError> {
        self.charge(QueryKind::Mq)?;
        self.inner.membership(e)
    }

    fn equivalence(&mut self, h: &TBox) -> Result<EqAnswer, TeacherError> {
        self.charge(QueryKind::Eq)?;
        self.inner.equivalence(h)
    }

    fn sample(&mut self) -> Result<LabeledExample, TeacherError> {
        self.charge(QueryKind::Sq)?;
        self.inner.sample()
    }
}
