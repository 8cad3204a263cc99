use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{ABox, Assertion, Axiom, Concept, ConceptName, IndividualName, Iq, RoleName, TBox};

pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpretationError {
    #[error("an interpretation needs a non-empty domain")]
    EmptyDomain,
    #[error("element {0} is outside the domain")]
    OutOfDomain(Element),
}

/// A finite interpretation with domain `{0, .., size - 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    size: usize,
    concepts: BTreeMap<ConceptName, BTreeSet<Element>>,
    roles: BTreeMap<RoleName, BTreeSet<(Element, Element)>>,
    individuals: BTreeMap<IndividualName, Element>,
}

impl Interpretation {
    pub fn new(size: usize) -> Result<Self, InterpretationError> {
        if size == 0 {
            return Err(InterpretationError::EmptyDomain);
        }
        Ok(Interpretation { size, concepts: BTreeMap::new(), roles: BTreeMap::new(), individuals: BTreeMap::new() })
    }

    pub fn domain_size(&self) -> usize {
        self.size
    }

    pub fn domain(&self) -> BTreeSet<Element> {
        (0..self.size).collect()
    }

    fn check(&self, e: Element) -> Result<(), InterpretationError> {
        if e < self.size {
            Ok(())
        } else {
            Err(InterpretationError::OutOfDomain(e))
        }
    }

    pub fn add_concept(&mut self, a: ConceptName, e: Element) -> Result<(), InterpretationError> {
        self.check(e)?;
        self.concepts.entry(a).or_default().insert(e);
        Ok(())
    }

    pub fn add_role(&mut self, r: RoleName, d: Element, e: Element) -> Result<(), InterpretationError> {
        self.check(d)?;
        self.check(e)?;
        self.roles.entry(r).or_default().insert((d, e));
        Ok(())
    }

    pub fn set_individual(&mut self, a: IndividualName, e: Element) -> Result<(), InterpretationError> {
        self.check(e)?;
        self.individuals.insert(a, e);
        Ok(())
    }

    pub fn concept_ext(&self, a: &ConceptName) -> BTreeSet<Element> {
        self.concepts.get(a).cloned().unwrap_or_default()
    }

    pub fn role_ext(&self, r: &RoleName) -> BTreeSet<(Element, Element)> {
        self.roles.get(r).cloned().unwrap_or_default()
    }

    pub fn individual(&self, a: &IndividualName) -> Option<Element> {
        self.individuals.get(a).copied()
    }

    /// `C^I`, computed bottom-up.
    pub fn extension_of(&self, c: &Concept) -> BTreeSet<Element> {
        match c {
            Concept::Top => self.domain(),
            Concept::Name(a) => self.concept_ext(a),
            Concept::And(members) => {
                let mut iter = members.iter();
                let mut acc = iter.next().map(|m| self.extension_of(m)).unwrap_or_else(|| self.domain());
                for m in iter {
                    let ext = self.extension_of(m);
                    acc.retain(|e| ext.contains(e));
                }
                acc
            }
            Concept::Exists(r, filler) => {
                let targets = self.extension_of(filler);
                self.roles
                    .get(r)
                    .map(|pairs| pairs.iter().filter(|(_, e)| targets.contains(e)).map(|&(d, _)| d).collect())
                    .unwrap_or_default()
            }
        }
    }

    pub fn satisfies_axiom(&self, a: &Axiom) -> bool {
        match a {
            Axiom::Ci(l, r) => self.extension_of(l).is_subset(&self.extension_of(r)),
            Axiom::Ri(r, s) => self.role_ext(r).is_subset(&self.role_ext(s)),
        }
    }

    pub fn satisfies_tbox(&self, t: &TBox) -> bool {
        t.iter().all(|a| self.satisfies_axiom(a))
    }

    /// False when an individual is not mapped.
    pub fn satisfies_assertion(&self, a: &Assertion) -> bool {
        match a {
            Assertion::Concept(c, i) => self.individual(i).is_some_and(|e| self.concept_ext(c).contains(&e)),
            Assertion::Role(r, i, j) => match (self.individual(i), self.individual(j)) {
                (Some(d), Some(e)) => self.role_ext(r).contains(&(d, e)),
                _ => false,
            },
        }
    }

    pub fn satisfies_abox(&self, abox: &ABox) -> bool {
        abox.iter().all(|a| self.satisfies_assertion(a))
    }

    pub fn satisfies_iq(&self, q: &Iq) -> bool {
        match q {
            Iq::Concept(c, i) => self.individual(i).is_some_and(|e| self.extension_of(c).contains(&e)),
            Iq::Role(r, i, j) => match (self.individual(i), self.individual(j)) {
                (Some(d), Some(e)) => self.role_ext(r).contains(&(d, e)),
                _ => false,
            },
        }
    }
}

pub fn extension_of(c: &Concept, i: &Interpretation) -> BTreeSet<Element> {
    i.extension_of(c)
}

pub fn satisfies(i: &Interpretation, a: &Axiom) -> bool {
    i.satisfies_axiom(a)
}
