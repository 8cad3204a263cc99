#![allow(dead_code)]

use elhlab_core::{Axiom, Concept, ConceptName, RoleName, TBox};
use proptest::prelude::*;

pub const NAMES: [&str; 3] = ["A", "B", "C"];
pub const ROLES: [&str; 2] = ["r", "s"];

pub fn name(i: usize) -> Concept {
    Concept::Name(ConceptName::new(NAMES[i]).unwrap())
}

pub fn role(i: usize) -> RoleName {
    RoleName::new(ROLES[i]).unwrap()
}

/// Canonical concepts over `NAMES`/`ROLES` of depth at most `depth`.
pub fn concept(depth: u32) -> impl Strategy<Value = Concept> {
    let leaf = prop_oneof![Just(Concept::Top), (0..NAMES.len()).prop_map(name)];
    leaf.prop_recursive(depth, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Concept::and),
            ((0..ROLES.len()), inner).prop_map(|(r, c)| Concept::exists(role(r), c)),
        ]
    })
}

pub fn axiom(depth: u32) -> impl Strategy<Value = Axiom> {
    prop_oneof![
        4 => (concept(depth), concept(depth)).prop_map(|(l, r)| Axiom::ci(l, r)),
        1 => (0..ROLES.len(), 0..ROLES.len()).prop_map(|(a, b)| Axiom::ri(role(a), role(b))),
    ]
}

pub fn tbox(depth: u32, max: usize) -> impl Strategy<Value = TBox> {
    prop::collection::vec(axiom(depth), 0..=max).prop_map(|v| v.into_iter().collect())
}
