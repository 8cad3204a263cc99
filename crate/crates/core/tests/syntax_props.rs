mod common;

use common::{axiom, concept, tbox};
use elhlab_core::{parse_axiom, parse_concept, parse_tbox, Concept};
use proptest::prelude::*;

proptest! {
    #[test]
    fn concepts_round_trip(c in concept(3)) {
        prop_assert_eq!(parse_concept(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn axioms_round_trip(a in axiom(3)) {
        prop_assert_eq!(parse_axiom(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn tboxes_round_trip(t in tbox(2, 6)) {
        prop_assert_eq!(parse_tbox(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn canonicalization_is_idempotent(c in concept(3)) {
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert_eq!(c.canonicalize().canonicalize(), c.canonicalize());
    }

    #[test]
    fn conjunct_order_is_irrelevant(parts in prop::collection::vec(concept(2), 0..5), seed in any::<u64>()) {
        let mut shuffled = parts.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize).wrapping_add(i * 7919) % (i + 1));
        }
        prop_assert_eq!(Concept::and(parts.clone()), Concept::and(shuffled));
        let doubled = Concept::and(parts.iter().cloned().chain(parts.iter().cloned()));
        prop_assert_eq!(doubled, Concept::and(parts));
    }

    #[test]
    fn sizes_are_positive_and_additive(l in concept(2), r in concept(2)) {
        let a = elhlab_core::Axiom::ci(l.clone(), r.clone());
        prop_assert_eq!(a.size(), 1 + l.size() + r.size());
        prop_assert!(l.size() >= 1);
    }
}

#[test]
fn parse_errors_do_not_panic() {
    for bad in ["ci: A <=", "ci: some(r A) <= B", "ri: r <= some(s, A)", "xx: A <= B", "ci: __x1 <= A", "ci: A & <= B"]
    {
        assert!(parse_axiom(bad).is_err(), "{bad}");
    }
}
