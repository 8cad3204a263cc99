mod common;

use std::collections::HashMap;

use common::tbox;
use elhlab_core::framework::{Example, FragmentId, LearningFramework};
use elhlab_core::teacher::{EqAnswer, EqStrategy, Teacher, TeacherConfig, TruthfulTeacher};
use elhlab_core::{entails, equivalent, parse_tbox, Reasoner, Signature, TBox};
use proptest::prelude::*;

#[test]
fn uniform_samples_over_four_examples() {
    let sig = Signature::from_strs(&["A", "B"], &[]).unwrap();
    let target = parse_tbox("ci: A <= B").unwrap();
    let cfg = TeacherConfig::new(target.clone(), FragmentId::ToyAtomic).with_universe(sig).with_seed(2024);
    let mut t = TruthfulTeacher::new(cfg).unwrap();
    let mut freq: HashMap<String, usize> = HashMap::new();
    let draws = 100_000;
    for _ in 0..draws {
        let s = t.sample().unwrap();
        assert_eq!(s.label, t.label(&s.example).unwrap());
        *freq.entry(s.example.to_string()).or_default() += 1;
    }
    assert_eq!(freq.len(), 4);
    for (e, k) in freq {
        let p = k as f64 / draws as f64;
        assert!((p - 0.25).abs() <= 0.02, "{e}: {p}");
    }
}

#[test]
fn weighted_samples_follow_weights() {
    let target = parse_tbox("ci: A <= B").unwrap();
    let corpus = vec![(Example::parse("ci: A <= B").unwrap(), 3.0), (Example::parse("ci: B <= A").unwrap(), 1.0)];
    let cfg = TeacherConfig::new(target, FragmentId::ToyAtomic)
        .with_distribution(elhlab_core::teacher::DistributionSpec::Weighted(corpus))
        .with_seed(5);
    let mut t = TruthfulTeacher::new(cfg).unwrap();
    let positives = (0..20_000).filter(|_| t.sample().unwrap().label).count();
    assert!((positives as f64 / 20_000.0 - 0.75).abs() < 0.02);
}

fn strategies() -> [EqStrategy; 3] {
    [EqStrategy::FirstSmallest, EqStrategy::RandomSeeded, EqStrategy::AdversarialLargest]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn membership_is_entailment(t in tbox(1, 3), probe in tbox(2, 4)) {
        let mut teacher = TruthfulTeacher::new(TeacherConfig::new(t.clone(), FragmentId::Elh)).unwrap();
        for a in probe.iter() {
            prop_assert_eq!(teacher.membership(&Example::Axiom(a.clone())).unwrap(), entails(&t, a));
        }
    }

    /// Yes exactly on equivalent hypotheses; otherwise the counterexample
    /// separates target and hypothesis.
    #[test]
    fn equivalence_answers_are_valid(t in tbox(1, 3), h in tbox(1, 3), seed in 0u64..1000) {
        for f in [FragmentId::Elh, FragmentId::ElhIq] {
            for s in strategies() {
                let cfg = TeacherConfig::new(t.clone(), f).with_strategy(s).with_seed(seed);
                let mut teacher = TruthfulTeacher::new(cfg).unwrap();
                let framework = LearningFramework::new(f);
                match teacher.equivalence(&h).unwrap() {
                    EqAnswer::Yes => prop_assert!(equivalent(&t, &h)),
                    EqAnswer::Counterexample(e) => {
                        prop_assert!(!equivalent(&t, &h));
                        prop_assert!(framework.validate_example(&e).is_ok());
                        prop_assert!(framework.is_counterexample(&t, &h, &e).unwrap());
                    }
                }
            }
        }
    }

    /// Counterexamples are symmetric: swapping target and hypothesis keeps
    /// the example in the symmetric difference.
    #[test]
    fn counterexamples_are_symmetric(t in tbox(1, 3), h in tbox(1, 3)) {
        let framework = LearningFramework::new(FragmentId::Elh);
        let teacher = TruthfulTeacher::new(TeacherConfig::new(t.clone(), FragmentId::Elh)).unwrap();
        for e in teacher.counterexample_candidates(&h) {
            prop_assert!(framework.is_counterexample(&t, &h, &e).unwrap());
            prop_assert!(framework.is_counterexample(&h, &t, &e).unwrap());
            let in_t = framework.is_member(&t, &e).unwrap();
            let in_h = framework.is_member_with(&Reasoner::new(&h), &e).unwrap();
            prop_assert_ne!(in_t, in_h);
        }
    }
}

#[test]
fn equal_seeds_give_equal_samples() {
    let sig = Signature::from_strs(&["A", "B", "C"], &["r"]).unwrap();
    let target = parse_tbox("ci: A <= some(r, top)\nci: some(r, top) <= B").unwrap();
    let draw = |seed| {
        let cfg = TeacherConfig::new(target.clone(), FragmentId::DlLite).with_universe(sig.clone()).with_seed(seed);
        let mut t = TruthfulTeacher::new(cfg).unwrap();
        (0..50).map(|_| t.sample().unwrap().example.to_string()).collect::<Vec<_>>()
    };
    assert_eq!(draw(9), draw(9));
    assert_ne!(draw(9), draw(10));
}

#[test]
fn hypotheses_outside_the_fragment_are_rejected() {
    let mut t = TruthfulTeacher::new(TeacherConfig::new(TBox::new(), FragmentId::ToyAtomic)).unwrap();
    let h = parse_tbox("ci: A & B <= C").unwrap();
    assert!(t.equivalence(&h).is_err());
    assert!(t.membership(&Example::parse("ci: A <= some(r, B)").unwrap()).is_err());
}
