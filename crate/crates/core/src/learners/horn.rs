//! Exact learning of propositional Horn TBoxes (`toy-conj`) with
//! membership and equivalence queries.
//!
//! The state is an ordered list of antecedents, each with every name the
//! target derives from it. On a positive counterexample `C <= A` the learner
//! takes `x`, the closure of the conjuncts of `C` under the current
//! hypothesis. `x` is a set of names closed under the hypothesis but not
//! under the target (it lacks `A`). The first antecedent `L` whose
//! intersection with `x` is strictly smaller and still not target-closed is
//! shrunk to that intersection; if none qualifies, `x` is appended.

use std::collections::{BTreeSet, HashMap};

use super::LearnError;
use crate::framework::Example;
use crate::syntax::{Axiom, Concept, ConceptName, Signature, TBox};
use crate::teacher::{EqAnswer, Teacher};

type Names = BTreeSet<ConceptName>;

/// Antecedents and their target consequences, in creation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HornClauseState {
    pub entries: Vec<(Names, Names)>,
}

impl HornClauseState {
    pub fn hypothesis(&self) -> TBox {
        let mut h = TBox::new();
        for (lhs, cons) in &self.entries {
            let l = Concept::and(lhs.iter().cloned().map(Concept::Name));
            for b in cons.difference(lhs) {
                h.insert(Axiom::ci(l.clone(), Concept::Name(b.clone())));
            }
        }
        h
    }

    /// Smallest superset of `s` closed under the hypothesis.
    pub fn closure(&self, s: &Names) -> Names {
        let mut out = s.clone();
        loop {
            let before = out.len();
            for (lhs, cons) in &self.entries {
                if lhs.is_subset(&out) {
                    out.extend(cons.iter().cloned());
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }
}

/// One antecedent shrink: entry index and its size before and after.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Refinement {
    pub entry: usize,
    pub before: usize,
    pub after: usize,
}

pub struct HornLearner {
    names: Names,
    state: HornClauseState,
    answers: HashMap<(Names, ConceptName), bool>,
    refinements: Vec<Refinement>,
    counterexamples: Vec<Example>,
}

impl HornLearner {
    pub fn new(sig: &Signature) -> Self {
        HornLearner {
            names: sig.concept_names.clone(),
            state: HornClauseState::default(),
            answers: HashMap::new(),
            refinements: Vec::new(),
            counterexamples: Vec::new(),
        }
    }

    pub fn state(&self) -> &HornClauseState {
        &self.state
    }

    pub fn refinements(&self) -> &[Refinement] {
        &self.refinements
    }

    pub fn counterexamples(&self) -> &[Example] {
        &self.counterexamples
    }

    /// `lhs <= b` in the target, asked at most once.
    fn ask(&mut self, teacher: &mut dyn Teacher, lhs: &Names, b: &ConceptName) -> Result<bool, LearnError> {
        let key = (lhs.clone(), b.clone());
        if let Some(&known) = self.answers.get(&key) {
            return Ok(known);
        }
        let l = Concept::and(lhs.iter().cloned().map(Concept::Name));
        let yes = teacher.membership(&Example::Axiom(Axiom::ci(l, Concept::Name(b.clone()))))?;
        self.answers.insert(key, yes);
        Ok(yes)
    }

    /// Target consequences of `lhs` among `candidates` (outside `lhs`).
    fn consequences<'a>(
        &mut self,
        teacher: &mut dyn Teacher,
        lhs: &Names,
        candidates: impl IntoIterator<Item = &'a ConceptName>,
    ) -> Result<Names, LearnError> {
        let known = self.state.closure(lhs);
        let mut out = Names::new();
        for b in candidates {
            if lhs.contains(b) {
                continue;
            }
            if known.contains(b) || self.ask(teacher, lhs, b)? {
                out.insert(b.clone());
            }
        }
        Ok(out)
    }

    /// Whether the target derives from `s` a name outside it; only names in
    /// `candidates` can qualify.
    fn not_closed(&mut self, teacher: &mut dyn Teacher, s: &Names, candidates: &Names) -> Result<bool, LearnError> {
        if self.state.closure(s).len() > s.len() {
            return Ok(true);
        }
        for b in candidates.difference(s) {
            if self.ask(teacher, s, b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn absorb(&mut self, teacher: &mut dyn Teacher, e: Example) -> Result<(), LearnError> {
        let (lhs, rhs) = match &e {
            Example::Axiom(Axiom::Ci(l, Concept::Name(a)))
                if !l.is_top() && l.conjuncts().iter().all(|m| matches!(m, Concept::Name(_))) =>
            {
                let lhs: Names = l
                    .conjuncts()
                    .iter()
                    .map(|m| match m {
                        Concept::Name(n) => n.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                (lhs, a.clone())
            }
            _ => return Err(LearnError::UnexpectedCounterexample(e)),
        };
        let x = self.state.closure(&lhs);
        if x.contains(&rhs) {
            // Already entailed by the hypothesis, hence negative.
            return Err(LearnError::UnexpectedCounterexample(e));
        }
        self.names.extend(x.iter().cloned());
        self.names.insert(rhs);
        self.counterexamples.push(e);
        for i in 0..self.state.entries.len() {
            let (l, cons) = &self.state.entries[i];
            let before = l.len();
            let inter: Names = l.intersection(&x).cloned().collect();
            if inter.is_empty() || inter.len() == before {
                continue;
            }
            // The target consequences of `inter` are among those of `l`.
            let candidates: Names = l.union(cons).cloned().collect();
            if self.not_closed(teacher, &inter, &candidates)? {
                let new_cons = self.consequences(teacher, &inter, &candidates)?;
                self.refinements.push(Refinement { entry: i, before, after: inter.len() });
                self.state.entries[i] = (inter, new_cons);
                return Ok(());
            }
        }
        let names = self.names.clone();
        let cons = self.consequences(teacher, &x, &names)?;
        self.state.entries.push((x, cons));
        Ok(())
    }

    pub fn run(&mut self, teacher: &mut dyn Teacher) -> Result<TBox, LearnError> {
        loop {
            let h = self.state.hypothesis();
            match teacher.equivalence(&h)? {
                EqAnswer::Yes => return Ok(h),
                EqAnswer::Counterexample(e) => self.absorb(teacher, e)?,
            }
        }
    }
}

pub fn learn_horn(teacher: &mut dyn Teacher, sig: &Signature) -> Result<TBox, LearnError> {
    HornLearner::new(sig).run(teacher)
}
