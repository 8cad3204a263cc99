//! A family of `2^n` toy-conj TBoxes that membership queries alone cannot
//! tell apart quickly.
//!
//! Over `A1..An, Abar1..Abarn, M`, let `T0 = {Ai & Abari <= M}` and, for
//! every choice `sigma = sigma1 & ... & sigman` with `sigmai in {Ai, Abari}`,
//! `T_sigma = T0 + {sigma <= M}`. A CI is entailed either by every member or
//! by at most one, so an adversary answering "no" whenever it can removes at
//! most one candidate per query.
//!
//! Members are indexed by `sigma` read as a bit string, most significant bit
//! first, `0` for `Ai` and `1` for `Abari`.

use thiserror::Error;

use crate::framework::{Example, FragmentId, LearningFramework};
use crate::learners::learn_toy_atomic;
use crate::reasoner::{entails, equivalent};
use crate::syntax::{Axiom, Concept, ConceptName, Signature, TBox};
use crate::teacher::{EqAnswer, QueryKind, Teacher, TeacherError};

/// Largest `n` built unless a caller asks for more.
pub const DEFAULT_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("the family needs n >= 1")]
    Empty,
    #[error("n = {n} exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("`{0}` is not a toy-conj axiom over the family signature")]
    Fragment(String),
}

#[derive(Debug, Clone)]
pub struct SigmaFamily {
    n: usize,
    pos: Vec<ConceptName>,
    neg: Vec<ConceptName>,
    m: ConceptName,
    shared: TBox,
}

pub fn build_family(n: usize) -> Result<SigmaFamily, HardnessError> {
    build_family_capped(n, DEFAULT_MAX_N)
}

pub fn build_family_capped(n: usize, cap: usize) -> Result<SigmaFamily, HardnessError> {
    if n == 0 {
        return Err(HardnessError::Empty);
    }
    if n > cap || n > 30 {
        return Err(HardnessError::TooLarge { n, cap: cap.min(30) });
    }
    let name = |s: String| ConceptName::new(&s).expect("generated names are valid");
    let pos: Vec<ConceptName> = (1..=n).map(|i| name(format!("A{i}"))).collect();
    let neg: Vec<ConceptName> = (1..=n).map(|i| name(format!("Abar{i}"))).collect();
    let m = name("M".into());
    let shared = pos
        .iter()
        .zip(&neg)
        .map(|(a, b)| {
            Axiom::ci(Concept::and([Concept::Name(a.clone()), Concept::Name(b.clone())]), Concept::Name(m.clone()))
        })
        .collect();
    Ok(SigmaFamily { n, pos, neg, m, shared })
}

impl SigmaFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn member_count(&self) -> u64 {
        1 << self.n
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.pos.iter().chain(&self.neg).chain([&self.m]).cloned(), [])
    }

    /// `T0`.
    pub fn shared(&self) -> &TBox {
        &self.shared
    }

    pub fn sigma(&self, idx: u64) -> Vec<ConceptName> {
        (0..self.n).map(|i| if self.bit(idx, i) { self.neg[i].clone() } else { self.pos[i].clone() }).collect()
    }

    fn bit(&self, idx: u64, i: usize) -> bool {
        (idx >> (self.n - 1 - i)) & 1 == 1
    }

    /// `sigma <= M`.
    pub fn distinguishing_axiom(&self, idx: u64) -> Axiom {
        Axiom::ci(Concept::and(self.sigma(idx).into_iter().map(Concept::Name)), Concept::Name(self.m.clone()))
    }

    pub fn member(&self, idx: u64) -> TBox {
        let mut t = self.shared.clone();
        t.insert(self.distinguishing_axiom(idx));
        t
    }

    /// Bit position of a family name: `Ai -> i-1`, `Abari -> n+i-1`,
    /// `M -> 2n`.
    fn position(&self, c: &ConceptName) -> Option<usize> {
        if *c == self.m {
            return Some(2 * self.n);
        }
        self.pos.iter().position(|x| x == c).or_else(|| self.neg.iter().position(|x| x == c).map(|i| self.n + i))
    }

    /// `(lhs mask, rhs position)` of a toy-conj CI over the family signature.
    fn encode(&self, a: &Axiom) -> Result<(u64, usize), HardnessError> {
        let bad = || HardnessError::Fragment(a.to_string());
        if !FragmentId::ToyConj.admits_axiom(a) {
            return Err(bad());
        }
        let Axiom::Ci(l, Concept::Name(r)) = a else { return Err(bad()) };
        let mut mask = 0u64;
        for c in l.conjuncts() {
            let Concept::Name(c) = c else { return Err(bad()) };
            mask |= 1 << self.position(c).ok_or_else(bad)?;
        }
        Ok((mask, self.position(r).ok_or_else(bad)?))
    }

    fn sigma_mask(&self, idx: u64) -> u64 {
        (0..self.n).map(|i| if self.bit(idx, i) { 1u64 << (self.n + i) } else { 1u64 << i }).fold(0, |a, b| a | b)
    }

    /// Closure of `start` under the propositional clauses of `T0`.
    fn shared_closure(&self, start: u64) -> u64 {
        let m = 1u64 << (2 * self.n);
        let mut s = start;
        for i in 0..self.n {
            let pair = (1u64 << i) | (1u64 << (self.n + i));
            if s & pair == pair {
                s |= m;
            }
        }
        s
    }

    /// Members entailing `lhs <= rhs`, by forward chaining per member.
    fn entailing(&self, lhs: u64, rhs: usize) -> Vec<u64> {
        let base = self.shared_closure(lhs);
        let m = 1u64 << (2 * self.n);
        (0..self.member_count())
            .filter(|&idx| {
                let sm = self.sigma_mask(idx);
                let mut s = base;
                loop {
                    let before = s;
                    if s & sm == sm {
                        s |= m;
                    }
                    s = self.shared_closure(s);
                    if s == before {
                        break;
                    }
                }
                s >> rhs & 1 == 1
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    EntailedByAll,
    /// The one entailing member, if any.
    EntailedByAtMostOne(Option<u64>),
    /// Entailed by more than one member but not all of them.
    Violation {
        members: Vec<u64>,
    },
}

fn classify(count: u64, members: Vec<u64>) -> Classification {
    match members.len() {
        k if k as u64 == count => Classification::EntailedByAll,
        0 => Classification::EntailedByAtMostOne(None),
        1 => Classification::EntailedByAtMostOne(Some(members[0])),
        _ => Classification::Violation { members },
    }
}

/// Which members entail `a`, decided by running the reasoner on every
/// member.
pub fn classify_ci(fam: &SigmaFamily, a: &Axiom) -> Result<Classification, HardnessError> {
    fam.encode(a)?;
    let members: Vec<u64> = (0..fam.member_count()).filter(|&i| entails(&fam.member(i), a)).collect();
    Ok(classify(fam.member_count(), members))
}

/// [`classify_ci`] by propositional forward chaining instead of the
/// reasoner; used where `2^n` reasoner runs per query would be too slow.
pub fn classify_ci_fast(fam: &SigmaFamily, a: &Axiom) -> Result<Classification, HardnessError> {
    let (lhs, rhs) = fam.encode(a)?;
    Ok(classify(fam.member_count(), fam.entailing(lhs, rhs)))
}

/// Every toy-conj CI over the family signature: each non-empty left side
/// over the `2n + 1` names with each right side.
pub fn candidate_cis(fam: &SigmaFamily) -> impl Iterator<Item = Axiom> {
    LearningFramework::new(FragmentId::ToyConj)
        .enumerate_examples(&fam.signature(), 0, 0)
        .map(|e| e.as_axiom().cloned().expect("axiom examples"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Exactly one candidate was left and the hypothesis is equivalent to it.
    Passed { sigma: u64 },
    /// A remaining candidate the hypothesis is not equivalent to.
    Failed { witness: u64 },
}

/// Membership teacher that keeps as many family members consistent as it
/// can: it answers "no" unless every remaining candidate entails the query.
pub struct AdversarialTeacher {
    fam: SigmaFamily,
    remaining: Vec<bool>,
    count: u64,
    history: Vec<(Axiom, bool)>,
    /// `remaining` after each answer.
    trace: Vec<u64>,
}

impl AdversarialTeacher {
    pub fn new(fam: SigmaFamily) -> Self {
        let count = fam.member_count();
        AdversarialTeacher { remaining: vec![true; count as usize], count, fam, history: Vec::new(), trace: Vec::new() }
    }

    pub fn family(&self) -> &SigmaFamily {
        &self.fam
    }

    pub fn remaining_count(&self) -> u64 {
        self.count
    }

    pub fn remaining(&self) -> impl Iterator<Item = u64> + '_ {
        self.remaining.iter().enumerate().filter(|(_, &r)| r).map(|(i, _)| i as u64)
    }

    pub fn history(&self) -> &[(Axiom, bool)] {
        &self.history
    }

    /// Remaining candidates after each query.
    pub fn trace(&self) -> &[u64] {
        &self.trace
    }

    pub fn queries(&self) -> usize {
        self.history.len()
    }

    /// Replays every answer against `T_sigma` with the reasoner.
    pub fn consistent_with_history(&self, sigma: u64) -> bool {
        let t = self.fam.member(sigma);
        self.history.iter().all(|(a, yes)| entails(&t, a) == *yes)
    }

    pub fn score(&self, h: &TBox) -> Verdict {
        let mut remaining = self.remaining();
        let first = remaining.next().expect("version space never empties");
        if self.count == 1 {
            return if equivalent(h, &self.fam.member(first)) {
                Verdict::Passed { sigma: first }
            } else {
                Verdict::Failed { witness: first }
            };
        }
        // Members are pairwise inequivalent, so one of any two differs from h.
        let second = remaining.next().unwrap();
        let witness = if equivalent(h, &self.fam.member(first)) { second } else { first };
        Verdict::Failed { witness }
    }
}

impl Teacher for AdversarialTeacher {
    fn framework(&self) -> LearningFramework {
        LearningFramework::new(FragmentId::ToyConj)
    }

    fn membership(&mut self, e: &Example) -> Result<bool, TeacherError> {
        let framework = self.framework();
        framework.validate_example(e)?;
        let a = e.as_axiom().expect("validated");
        let (lhs, rhs) = self.fam.encode(a).map_err(|_| {
            TeacherError::Framework(crate::framework::FrameworkError::Example {
                fragment: FragmentId::ToyConj,
                example: e.to_string(),
            })
        })?;
        let entailing = self.fam.entailing(lhs, rhs);
        let removed = entailing.iter().filter(|&&i| self.remaining[i as usize]).count() as u64;
        // "No" drops the entailing candidates; only say "yes" if that would
        // leave nothing.
        let yes = removed == self.count;
        if yes {
            let keep: std::collections::HashSet<u64> = entailing.into_iter().collect();
            for (i, r) in self.remaining.iter_mut().enumerate() {
                *r = *r && keep.contains(&(i as u64));
            }
        } else {
            for i in entailing {
                self.remaining[i as usize] = false;
            }
            self.count -= removed;
        }
        self.history.push((a.clone(), yes));
        self.trace.push(self.count);
        Ok(yes)
    }

    fn equivalence(&mut self, _h: &TBox) -> Result<EqAnswer, TeacherError> {
        Err(TeacherError::Unsupported(QueryKind::Eq))
    }
}

/// Membership-only learners run against the adversary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MqLearner {
    /// The atomic toy learner over the family signature.
    ToyMq,
    /// Asks every toy-conj CI in enumeration order until the query cap, and
    /// keeps the non-tautological yeses.
    ExhaustiveMq,
    /// Asks `sigma <= M` for each `sigma` in index order until a yes.
    SigmaProbe,
}

impl MqLearner {
    pub const ALL: [MqLearner; 3] = [MqLearner::ToyMq, MqLearner::ExhaustiveMq, MqLearner::SigmaProbe];

    pub fn as_str(self) -> &'static str {
        match self {
            MqLearner::ToyMq => "toy-mq",
            MqLearner::ExhaustiveMq => "exhaustive-mq",
            MqLearner::SigmaProbe => "sigma-probe",
        }
    }

    /// Runs against `teacher` with at most `cap` queries.
    pub fn run(self, fam: &SigmaFamily, teacher: &mut dyn Teacher, cap: usize) -> Result<TBox, TeacherError> {
        match self {
            MqLearner::ToyMq => learn_toy_atomic(teacher, &fam.signature()).map_err(|e| match e {
                crate::learners::LearnError::Teacher(t) => t,
                other => unreachable!("toy-mq only fails through the teacher: {other}"),
            }),
            MqLearner::ExhaustiveMq => {
                let mut h = fam.shared().clone();
                for a in candidate_cis(fam).take(cap) {
                    if teacher.membership(&Example::Axiom(a.clone()))? && !crate::reasoner::is_tautology(&a) {
                        h.insert(a);
                    }
                }
                Ok(h)
            }
            MqLearner::SigmaProbe => {
                for idx in 0..fam.member_count().min(cap as u64) {
                    if teacher.membership(&Example::Axiom(fam.distinguishing_axiom(idx)))? {
                        return Ok(fam.member(idx));
                    }
                }
                Ok(fam.shared().clone())
            }
        }
    }
}

impl std::fmt::Display for MqLearner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MqLearner {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MqLearner::ALL.into_iter().find(|l| l.as_str() == s).ok_or_else(|| format!("unknown MQ-only learner `{s}`"))
    }
}

/// Outcome of one adversarial run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardnessRun {
    pub n: usize,
    pub learner: MqLearner,
    pub queries: usize,
    pub remaining: u64,
    pub verdict: Verdict,
    /// Whether `remaining >= 2^n - k` held after every query `k`.
    pub elimination_bound_held: bool,
}

/// Runs `learner` against a fresh adversary with a query cap of `2^n`.
pub fn run_adversarial(n: usize, learner: MqLearner) -> Result<HardnessRun, HardnessError> {
    let fam = build_family(n)?;
    let mut teacher = AdversarialTeacher::new(fam.clone());
    let cap = fam.member_count() as usize;
    let h = learner.run(&fam, &mut teacher, cap).expect("the adversary answers every toy-conj query");
    let total = fam.member_count();
    let elimination_bound_held = teacher.trace().iter().enumerate().all(|(k, &rem)| rem + (k as u64 + 1) >= total);
    Ok(HardnessRun {
        n,
        learner,
        queries: teacher.queries(),
        remaining: teacher.remaining_count(),
        verdict: teacher.score(&h),
        elimination_bound_held,
    })
}
