use super::LearnError;
use crate::framework::{Example, FragmentId, LearningFramework};
use crate::reasoner::{is_tautology, Reasoner};
use crate::syntax::{Signature, TBox};
use crate::teacher::{EqAnswer, Teacher};

/// One membership query per DL-Lite axiom over `sig`,
/// `(n_C + n_R)^2 + n_R^2` in total; keeps the non-tautological yeses.
pub fn learn_dllite_mq(teacher: &mut dyn Teacher, sig: &Signature) -> Result<TBox, LearnError> {
    let mut h = TBox::new();
    for e in LearningFramework::new(FragmentId::DlLite).enumerate_examples(sig, 0, 0) {
        if teacher.membership(&e)? {
            let Example::Axiom(a) = e else { unreachable!() };
            if !is_tautology(&a) {
                h.insert(a);
            }
        }
    }
    Ok(h)
}

/// Starts from the empty hypothesis and adds every counterexample. The
/// hypothesis only ever holds target consequences, so every counterexample
/// must be positive; anything else is reported as an error.
pub fn learn_dllite_eq(teacher: &mut dyn Teacher) -> Result<TBox, LearnError> {
    let mut h = TBox::new();
    loop {
        match teacher.equivalence(&h)? {
            EqAnswer::Yes => return Ok(h),
            EqAnswer::Counterexample(e) => {
                let a = match &e {
                    Example::Axiom(a) if !Reasoner::new(&h).entails(a) => a.clone(),
                    _ => return Err(LearnError::UnexpectedCounterexample(e)),
                };
                h.insert(a);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tbox;
    use crate::reasoner::equivalent;
    use crate::teacher::{Budgeted, TeacherConfig, TruthfulTeacher};

    fn teacher(target: &str) -> Budgeted<TruthfulTeacher> {
        let cfg = TeacherConfig::new(parse_tbox(target).unwrap(), FragmentId::DlLite);
        Budgeted::new(TruthfulTeacher::new(cfg).unwrap(), None)
    }

    #[test]
    fn mq_learner() {
        let mut t = teacher("ci: some(r, top) <= A");
        let h = learn_dllite_mq(&mut t, &Signature::from_strs(&["A"], &["r"]).unwrap()).unwrap();
        assert_eq!(h, parse_tbox("ci: some(r, top) <= A").unwrap());
        assert_eq!(t.counts().mq, 5);

        let mut t = teacher("");
        let sig = Signature::from_strs(&["A", "B", "C"], &["r", "s"]).unwrap();
        let h = learn_dllite_mq(&mut t, &sig).unwrap();
        assert!(h.is_empty());
        assert_eq!(t.counts().mq, 29);
    }

    #[test]
    fn mq_learner_keeps_entailed_axioms() {
        let target = "ri: r <= s\nci: some(s, top) <= A\nci: A <= B";
        let mut t = teacher(target);
        let h = learn_dllite_mq(&mut t, &Signature::from_strs(&["A", "B"], &["r", "s"]).unwrap()).unwrap();
        assert!(equivalent(&h, &parse_tbox(target).unwrap()));
        assert!(h.contains(&crate::parse::parse_axiom("ci: some(r, top) <= B").unwrap()));
    }

    #[test]
    fn eq_learner() {
        let mut t = teacher("ci: A <= B");
        assert_eq!(learn_dllite_eq(&mut t).unwrap(), parse_tbox("ci: A <= B").unwrap());
        assert_eq!(t.counts().eq, 2);
        let mut t = teacher("");
        assert!(learn_dllite_eq(&mut t).unwrap().is_empty());
        assert_eq!(t.counts().eq, 1);
    }
}
