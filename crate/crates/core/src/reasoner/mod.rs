//! Entailment for ELH.
//!
//! The decision procedure normalizes the TBox (plus the query's concepts)
//! and runs goal-directed completion ([`saturate`]). [`canonical`] holds an
//! independent chase-based oracle used to cross-check it, and
//! [`interpretation`] the plain model checker.

pub mod canonical;
pub mod interpretation;
pub mod normalize;
pub mod saturate;

pub use canonical::{canonical_check, canonical_iq_check, canonical_model, default_fuel, FuelExhausted};
pub use interpretation::{extension_of, satisfies, Element, Interpretation, InterpretationError};
pub use normalize::{Basic, NormalAxiom, NormalizedTBox};

use crate::syntax::{ABox, Assertion, Axiom, Concept, ConceptName, IndividualName, Iq, TBox};
use saturate::{role_closure, Saturation};

/// Reasoner bound to one TBox. Cheap to query repeatedly; each query works
/// on a private copy of the normalized TBox extended with the query's own
/// definitions.
#[derive(Clone, Debug)]
pub struct Reasoner {
    normalized: NormalizedTBox,
}

impl Reasoner {
    pub fn new(t: &TBox) -> Self {
        Reasoner { normalized: NormalizedTBox::new(t) }
    }

    pub fn tbox(&self) -> &TBox {
        &self.normalized.original
    }

    pub fn normalized(&self) -> &NormalizedTBox {
        &self.normalized
    }

    pub fn entails(&self, a: &Axiom) -> bool {
        match a {
            Axiom::Ci(lhs, rhs) => self.subsumes(lhs, rhs),
            Axiom::Ri(r, s) => {
                if r == s {
                    return true;
                }
                let (Some(r), Some(s)) = (self.normalized.role_id(r), self.normalized.role_id(s)) else {
                    return false;
                };
                let ris = self.normalized.axioms.iter().filter_map(|a| match *a {
                    NormalAxiom::Role(x, y) => Some((x, y)),
                    _ => None,
                });
                role_closure(self.normalized.role_count(), ris)[r as usize][s as usize]
            }
        }
    }

    /// `t |= lhs <= rhs`.
    pub fn subsumes(&self, lhs: &Concept, rhs: &Concept) -> bool {
        if rhs.is_top() || lhs == rhs {
            return true;
        }
        let mut n = self.normalized.clone();
        let l = n.intern_concept(lhs);
        let r = n.intern_concept(rhs);
        Saturation::new(&n).subsumes(l, r)
    }

    pub fn entails_all(&self, t: &TBox) -> bool {
        t.iter().all(|a| self.entails(a))
    }

    /// `(t, abox) |= q`. Each individual `a` is abstracted by a fresh name
    /// `N_a` with `N_a <= A` for `A(a)` and `N_a <= some(r, N_b)` for
    /// `r(a, b)`; EL cannot tell the abstraction from the ABox model.
    pub fn entails_iq(&self, abox: &ABox, q: &Iq) -> bool {
        let nominal = |a: &IndividualName| Concept::Name(ConceptName::new_unchecked(&format!("__i_{a}")));
        match q {
            Iq::Role(r, a, b) => abox.iter().any(|assertion| match assertion {
                Assertion::Role(s, x, y) => x == a && y == b && self.entails(&Axiom::Ri(s.clone(), r.clone())),
                Assertion::Concept(..) => false,
            }),
            Iq::Concept(c, a) => {
                if c.is_top() {
                    return true;
                }
                let mut n = self.normalized.clone();
                for assertion in abox.iter() {
                    let ax = match assertion {
                        Assertion::Concept(name, x) => Axiom::Ci(nominal(x), Concept::Name(name.clone())),
                        Assertion::Role(r, x, y) => Axiom::Ci(nominal(x), Concept::exists(r.clone(), nominal(y))),
                    };
                    n.add_axiom(&ax);
                }
                let l = n.intern_concept(&nominal(a));
                let r = n.intern_concept(c);
                Saturation::new(&n).subsumes(l, r)
            }
        }
    }
}

pub fn entails(t: &TBox, a: &Axiom) -> bool {
    Reasoner::new(t).entails(a)
}

/// `t |= t2`.
pub fn entails_tbox(t: &TBox, t2: &TBox) -> bool {
    Reasoner::new(t).entails_all(t2)
}

/// Mutual entailment.
pub fn equivalent(t: &TBox, t2: &TBox) -> bool {
    entails_tbox(t, t2) && entails_tbox(t2, t)
}

/// Entailed by the empty TBox.
pub fn is_tautology(a: &Axiom) -> bool {
    entails(&TBox::new(), a)
}

pub fn iq_entails(t: &TBox, abox: &ABox, q: &Iq) -> bool {
    Reasoner::new(t).entails_iq(abox, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_axiom, parse_data_example, parse_tbox};

    fn t(s: &str) -> TBox {
        parse_tbox(s).unwrap()
    }

    fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    #[test]
    fn transitivity_on_names() {
        let chain = t("ci: A <= B\nci: B <= C");
        assert!(entails(&chain, &ax("ci: A <= C")));
        assert!(!entails(&chain, &ax("ci: C <= A")));
    }

    #[test]
    fn top_subsumes_everything() {
        let chain = t("ci: A <= B");
        for c in ["A", "some(r, B)", "A & some(s, top)", "top"] {
            assert!(entails(&chain, &ax(&format!("ci: {c} <= top"))));
            assert!(entails(&TBox::new(), &ax(&format!("ci: {c} <= top"))));
        }
    }

    #[test]
    fn empty_tbox_entails_only_tautologies() {
        assert!(!entails(&TBox::new(), &ax("ci: A <= B")));
        assert!(entails(&TBox::new(), &ax("ci: A & B <= B")));
        assert!(entails(&TBox::new(), &ax("ci: some(r, A & B) <= some(r, A)")));
        assert!(!entails(&TBox::new(), &ax("ci: some(r, A) <= some(s, A)")));
    }

    #[test]
    fn cyclic_existentials_unfold() {
        let cyc = t("ci: A <= some(r, A)");
        let mut rhs = String::from("A");
        for _ in 0..10 {
            rhs = format!("some(r, {rhs})");
            assert!(entails(&cyc, &ax(&format!("ci: A <= {rhs}"))));
        }
        assert!(!entails(&cyc, &ax("ci: some(r, A) <= A")));
    }

    #[test]
    fn role_hierarchy_lifts_existentials() {
        let h = t("ri: r <= s\nri: s <= u\nci: some(u, A) <= B");
        assert!(entails(&h, &ax("ci: some(r, A) <= B")));
        assert!(entails(&h, &ax("ri: r <= u")));
        assert!(!entails(&h, &ax("ri: u <= r")));
        assert!(entails(&h, &ax("ri: q <= q")));
        assert!(entails(&h, &ax("ci: some(r, A & C) <= some(u, A)")));
    }

    #[test]
    fn conjunction_on_the_left() {
        let h = t("ci: A & B <= C\nci: D <= A\nci: D <= B");
        assert!(entails(&h, &ax("ci: D <= C")));
        assert!(!entails(&h, &ax("ci: A <= C")));
    }

    #[test]
    fn top_on_the_left() {
        let h = t("ci: top <= A\nci: some(r, A) <= B");
        assert!(entails(&h, &ax("ci: C <= A")));
        assert!(entails(&h, &ax("ci: some(r, top) <= B")));
    }

    #[test]
    fn tbox_entailment() {
        let chain = t("ci: A <= B\nci: B <= C");
        let short = t("ci: A <= C");
        assert!(entails_tbox(&chain, &chain));
        assert!(entails_tbox(&chain, &short));
        assert!(!entails_tbox(&short, &chain));
        assert!(entails_tbox(&TBox::new(), &TBox::new()));
        assert!(equivalent(&t("ci: A == B"), &t("ci: B <= A\nci: A <= B")));
    }

    #[test]
    fn instance_queries() {
        let cases = [
            ("", "iq: A(a) |- A(a)", true),
            ("ci: A <= B", "iq: A(a) |- B(a)", true),
            ("ci: A <= B", "iq: A(b), r(a, b) |- some(r, B)(a)", true),
            ("ci: A <= B", "iq: A(b), r(a, b) |- some(r, B)(b)", false),
            ("ci: some(r, A) <= C", "iq: A(b), r(a, b) |- C(a)", true),
            ("ri: r <= s", "iq: r(a, b) |- s(a, b)", true),
            ("ri: r <= s", "iq: r(a, b) |- s(b, a)", false),
            ("ci: A1 & A2 <= M", "iq: A1(a), A2(a) |- M(a)", true),
            ("ci: A1 & A2 <= M", "iq: A1(a), A2(b) |- M(a)", false),
        ];
        for (tb, ex, expected) in cases {
            let (abox, q) = parse_data_example(ex).unwrap();
            assert_eq!(iq_entails(&t(tb), &abox, &q), expected, "{tb} / {ex}");
            assert_eq!(canonical_iq_check(&t(tb), &abox, &q, 20), Ok(expected), "{tb} / {ex}");
        }
    }
}
