//! Canonical-model oracle for entailment, independent of normalization and
//! the completion rules.
//!
//! The model is built by a chase directly on the unnormalized syntax. The
//! root realizes the left-hand side; each existential filler `F` gets one
//! shared witness element. Rounds apply every concept inclusion to every
//! element whose current type satisfies its left side until nothing
//! changes. Membership of the root in the query concept is then decided by
//! a top-down simulation check from the query's syntax tree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::interpretation::Interpretation;
use crate::syntax::{ABox, Assertion, Concept, ConceptName, IndividualName, Iq, RoleName, TBox};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("canonical model did not stabilize within {fuel} chase rounds")]
pub struct FuelExhausted {
    pub fuel: usize,
}

/// `size_of(t) + depth_of(query) + 2`.
pub fn default_fuel(t: &TBox, query: &Concept) -> usize {
    t.size() + query.depth() + 2
}

fn super_roles(t: &TBox) -> HashMap<RoleName, BTreeSet<RoleName>> {
    let mut out: HashMap<RoleName, BTreeSet<RoleName>> = HashMap::new();
    let mut roles: BTreeSet<RoleName> = t.signature().role_names;
    for (r, s) in t.role_inclusions() {
        roles.insert(r.clone());
        roles.insert(s.clone());
    }
    for r in &roles {
        let mut seen = BTreeSet::from([r.clone()]);
        let mut frontier = vec![r.clone()];
        while let Some(x) = frontier.pop() {
            for (a, b) in t.role_inclusions() {
                if *a == x && seen.insert(b.clone()) {
                    frontier.push(b.clone());
                }
            }
        }
        out.insert(r.clone(), seen);
    }
    out
}

struct Chase<'a> {
    tbox: &'a TBox,
    sups: HashMap<RoleName, BTreeSet<RoleName>>,
    labels: Vec<BTreeSet<ConceptName>>,
    edges: Vec<BTreeSet<(RoleName, usize)>>,
    witnesses: HashMap<Concept, usize>,
}

impl<'a> Chase<'a> {
    fn new(tbox: &'a TBox) -> Self {
        Chase { tbox, sups: super_roles(tbox), labels: Vec::new(), edges: Vec::new(), witnesses: HashMap::new() }
    }

    fn new_element(&mut self) -> usize {
        self.labels.push(BTreeSet::new());
        self.edges.push(BTreeSet::new());
        self.labels.len() - 1
    }

    fn witness(&mut self, filler: &Concept) -> usize {
        if let Some(&w) = self.witnesses.get(filler) {
            return w;
        }
        let w = self.new_element();
        self.witnesses.insert(filler.clone(), w);
        self.realize(w, filler);
        w
    }

    fn add_edge(&mut self, from: usize, role: &RoleName, to: usize) {
        let sups = self.sups.get(role).cloned().unwrap_or_else(|| BTreeSet::from([role.clone()]));
        for s in sups {
            self.edges[from].insert((s, to));
        }
    }

    /// Makes `e` an instance of `c`.
    fn realize(&mut self, e: usize, c: &Concept) {
        match c {
            Concept::Top => {}
            Concept::Name(a) => {
                self.labels[e].insert(a.clone());
            }
            Concept::And(members) => members.iter().for_each(|m| self.realize(e, m)),
            Concept::Exists(r, filler) => {
                let w = self.witness(filler);
                self.add_edge(e, r, w);
            }
        }
    }

    fn holds(&self, e: usize, c: &Concept) -> bool {
        match c {
            Concept::Top => true,
            Concept::Name(a) => self.labels[e].contains(a),
            Concept::And(members) => members.iter().all(|m| self.holds(e, m)),
            Concept::Exists(r, filler) => self.edges[e].iter().any(|(s, w)| s == r && self.holds(*w, filler)),
        }
    }

    /// Chases until fixpoint or until `goal` holds; the chase only adds
    /// facts, so a goal that holds once holds in the final model.
    fn run(&mut self, fuel: usize, goal: impl Fn(&Self) -> bool) -> Result<bool, FuelExhausted> {
        let cis: Vec<(Concept, Concept)> =
            self.tbox.concept_inclusions().map(|(l, r)| (l.clone(), r.clone())).collect();
        for _ in 0..fuel {
            if goal(self) {
                return Ok(true);
            }
            let mut changed = false;
            for (lhs, rhs) in &cis {
                let mut e = 0;
                // Elements may be appended while iterating.
                while e < self.labels.len() {
                    if self.holds(e, lhs) && !self.holds(e, rhs) {
                        self.realize(e, rhs);
                        changed = true;
                    }
                    e += 1;
                }
            }
            if !changed {
                return Ok(goal(self));
            }
        }
        if goal(self) {
            return Ok(true);
        }
        Err(FuelExhausted { fuel })
    }

    fn to_interpretation(&self) -> Interpretation {
        let mut i = Interpretation::new(self.labels.len().max(1)).unwrap();
        for (e, labels) in self.labels.iter().enumerate() {
            for a in labels {
                i.add_concept(a.clone(), e).unwrap();
            }
        }
        for (e, edges) in self.edges.iter().enumerate() {
            for (r, w) in edges {
                i.add_role(r.clone(), e, *w).unwrap();
            }
        }
        i
    }
}

/// The canonical model of `lhs` w.r.t. `t`; element 0 is the root.
pub fn canonical_model(t: &TBox, lhs: &Concept, fuel: usize) -> Result<Interpretation, FuelExhausted> {
    let mut chase = Chase::new(t);
    let root = chase.new_element();
    chase.realize(root, lhs);
    chase.run(fuel, |_| false)?;
    Ok(chase.to_interpretation())
}

/// Decides `t |= lhs <= rhs` on the canonical model of `lhs`.
pub fn canonical_check(t: &TBox, lhs: &Concept, rhs: &Concept, fuel: usize) -> Result<bool, FuelExhausted> {
    let mut chase = Chase::new(t);
    let root = chase.new_element();
    chase.realize(root, lhs);
    chase.run(fuel, |ch| ch.holds(root, rhs))
}

/// Decides `(t, abox) |= q` on the chased ABox model.
pub fn canonical_iq_check(t: &TBox, abox: &ABox, q: &Iq, fuel: usize) -> Result<bool, FuelExhausted> {
    let mut chase = Chase::new(t);
    let mut named: BTreeMap<IndividualName, usize> = BTreeMap::new();
    let individuals = abox.individuals().into_iter().chain(q.individuals().into_iter().cloned());
    for a in individuals {
        if !named.contains_key(&a) {
            let e = chase.new_element();
            named.insert(a, e);
        }
    }
    for assertion in abox.iter() {
        match assertion {
            Assertion::Concept(c, a) => {
                chase.labels[named[a]].insert(c.clone());
            }
            Assertion::Role(r, a, b) => chase.add_edge(named[a], r, named[b]),
        }
    }
    chase.run(fuel, |ch| match q {
        Iq::Concept(c, a) => ch.holds(named[a], c),
        Iq::Role(r, a, b) => ch.edges[named[a]].contains(&(r.clone(), named[b])),
    })
}
