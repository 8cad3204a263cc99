use super::LearnError;
use crate::framework::{Example, FragmentId, LearningFramework};
use crate::reasoner::is_tautology;
use crate::syntax::{Signature, TBox};
use crate::teacher::Teacher;

/// Asks `A <= B` for every ordered pair of concept names and keeps the
/// non-tautological ones answered yes. Exactly `|names|^2` membership
/// queries.
pub fn learn_toy_atomic(teacher: &mut dyn Teacher, sig: &Signature) -> Result<TBox, LearnError> {
    let mut h = TBox::new();
    let atomic = Signature::new(sig.concept_names.iter().cloned(), []);
    for e in LearningFramework::new(FragmentId::ToyAtomic).enumerate_examples(&atomic, 0, 0) {
        if teacher.membership(&e)? {
            let Example::Axiom(a) = e else { unreachable!() };
            if !is_tautology(&a) {
                h.insert(a);
            }
        }
    }
    Ok(h)
}
