//! Equivalence-query-only learning of ELH by enumeration: every TBox of
//! size 0, 1, 2, ... over the signature is proposed until one is accepted.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::LearnError;
use crate::framework::elh_axioms;
use crate::reasoner::{is_tautology, Reasoner};
use crate::syntax::{Axiom, Signature, TBox};
use crate::teacher::{EqAnswer, Teacher};

/// Counters of one enumeration run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Equivalence queries posed, per TBox size.
    pub queries_by_size: Vec<usize>,
    /// Candidates dropped because one axiom followed from the others.
    pub redundant: usize,
    /// Candidates dropped as equivalent to an earlier query.
    pub duplicates: usize,
}

/// Probe axioms give every TBox a fingerprint; equivalent TBoxes share it,
/// so only same-fingerprint pairs need a full equivalence check.
struct Seen {
    probes: Vec<Axiom>,
    buckets: HashMap<Vec<bool>, Vec<TBox>>,
}

impl Seen {
    fn new(probes: Vec<Axiom>) -> Self {
        Seen { probes, buckets: HashMap::new() }
    }

    /// Records `t`; false if an equivalent TBox was recorded before.
    fn insert(&mut self, t: &TBox, r: &Reasoner) -> bool {
        let key: Vec<bool> = self.probes.iter().map(|a| r.entails(a)).collect();
        let bucket = self.buckets.entry(key).or_default();
        if bucket.iter().any(|u| r.entails_all(u) && Reasoner::new(u).entails_all(t)) {
            return false;
        }
        bucket.push(t.clone());
        true
    }
}

/// Every set of distinct pool axioms (pool sorted by size) whose sizes sum
/// to `budget`, in lexicographic index order.
fn subsets_of_size<B>(
    pool: &[(Axiom, usize)],
    from: usize,
    budget: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if budget == 0 {
        return visit(chosen);
    }
    for i in from..pool.len() {
        let size = pool[i].1;
        if size > budget {
            break;
        }
        chosen.push(i);
        subsets_of_size(pool, i + 1, budget - size, chosen, visit)?;
        chosen.pop();
    }
    ControlFlow::Continue(())
}

pub fn learn_elh_enumerate(
    teacher: &mut dyn Teacher,
    sig: &Signature,
    max_size: usize,
    depth_cap: usize,
) -> Result<(TBox, EnumerationStats), LearnError> {
    let mut stats = EnumerationStats::default();
    let mut pool: Vec<(Axiom, usize)> = elh_axioms(sig, depth_cap, max_size)
        .into_iter()
        .filter(|a| !is_tautology(a))
        .map(|a| {
            let s = a.size();
            (a, s)
        })
        .collect();
    pool.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
    let probes: Vec<Axiom> = pool.iter().take(256).map(|(a, _)| a.clone()).collect();
    let mut seen = Seen::new(probes);
    for n in 0..=max_size {
        stats.queries_by_size.push(0);
        let mut error = None;
        let mut visit = |chosen: &[usize]| -> ControlFlow<TBox> {
            let t: TBox = chosen.iter().map(|&i| pool[i].0.clone()).collect();
            // A redundant axiom means an equivalent smaller TBox was tried.
            if chosen.len() > 1 {
                let redundant = t.iter().any(|a| {
                    let mut rest = t.clone();
                    rest.remove(a);
                    Reasoner::new(&rest).entails(a)
                });
                if redundant {
                    stats.redundant += 1;
                    return ControlFlow::Continue(());
                }
            }
            if !seen.insert(&t, &Reasoner::new(&t)) {
                stats.duplicates += 1;
                return ControlFlow::Continue(());
            }
            stats.queries_by_size[n] += 1;
            match teacher.equivalence(&t) {
                Ok(EqAnswer::Yes) => ControlFlow::Break(t),
                Ok(EqAnswer::Counterexample(_)) => ControlFlow::Continue(()),
                Err(e) => {
                    error = Some(e);
                    ControlFlow::Break(TBox::new())
                }
            }
        };
        if let ControlFlow::Break(t) = subsets_of_size(&pool, 0, n, &mut Vec::new(), &mut visit) {
            if let Some(e) = error {
                return Err(e.into());
            }
            return Ok((t, stats));
        }
    }
    Err(LearnError::Exhausted { max_size })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::FragmentId;
    use crate::parse::parse_tbox;
    use crate::reasoner::equivalent;
    use crate::teacher::{TeacherConfig, TruthfulTeacher};

    fn run(target: &str, f: FragmentId, sig: &Signature, max: usize) -> Result<(TBox, EnumerationStats), LearnError> {
        let mut t = TruthfulTeacher::new(TeacherConfig::new(parse_tbox(target).unwrap(), f)).unwrap();
        learn_elh_enumerate(&mut t, sig, max, 1)
    }

    #[test]
    fn empty_target_first_query() {
        let (h, stats) = run("", FragmentId::Elh, &Signature::from_strs(&["A"], &[]).unwrap(), 5).unwrap();
        assert!(h.is_empty());
        assert_eq!(stats.queries_by_size, [1]);
    }

    #[test]
    fn single_axiom_found_at_its_size() {
        let sig = Signature::from_strs(&["A", "B"], &[]).unwrap();
        let (h, stats) = run("ci: A <= B", FragmentId::Elh, &sig, 6).unwrap();
        assert_eq!(h, parse_tbox("ci: A <= B").unwrap());
        assert_eq!(stats.queries_by_size.len(), 4);
    }

    #[test]
    fn role_and_existential() {
        let sig = Signature::from_strs(&["A", "B"], &["r", "s"]).unwrap();
        let target = "ri: r <= s\nci: A <= some(r, B)";
        for f in [FragmentId::Elh, FragmentId::ElhIq] {
            let (h, _) = run(target, f, &sig, 8).unwrap();
            assert!(equivalent(&h, &parse_tbox(target).unwrap()));
        }
    }

    #[test]
    fn exhaustion_is_reported() {
        let sig = Signature::from_strs(&["A", "B"], &[]).unwrap();
        assert_eq!(run("ci: A & B <= B & A", FragmentId::Elh, &sig, 2).map(|r| r.0), Ok(TBox::new()));
        assert_eq!(run("ci: A <= B", FragmentId::Elh, &sig, 2), Err(LearnError::Exhausted { max_size: 2 }));
    }
}
