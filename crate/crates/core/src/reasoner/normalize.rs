use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::syntax::{Axiom, Concept, ConceptName, RoleName, TBox};

/// Dense id of a basic concept: `top`, a concept name or a fresh
/// definitional name.
pub type BasicId = u32;
pub type RoleId = u32;

pub const TOP_ID: BasicId = 0;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Basic {
    Top,
    Name(ConceptName),
    /// Fresh definitional name, printed as `__x<n>`.
    Fresh(u32),
}

impl fmt::Display for Basic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basic::Top => f.write_str("top"),
            Basic::Name(a) => write!(f, "{a}"),
            Basic::Fresh(n) => write!(f, "__x{n}"),
        }
    }
}

/// An axiom in one of the normal forms handled by the completion rules.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum NormalAxiom {
    /// `A <= B`
    Sub(BasicId, BasicId),
    /// `A1 & A2 <= B`
    Conj(BasicId, BasicId, BasicId),
    /// `A <= some(r, B)`
    SubExists(BasicId, RoleId, BasicId),
    /// `some(r, A) <= B`
    ExistsSub(RoleId, BasicId, BasicId),
    /// `r <= s`
    Role(RoleId, RoleId),
}

/// A TBox rewritten into normal form over the original names plus fresh
/// definitional names.
///
/// Every complex subconcept `C` gets a fresh name `X` with `X == C`
/// expressed through normal axioms, so for axioms over the original
/// signature entailment from `original` and from `axioms` coincide.
#[derive(Clone)]
pub struct NormalizedTBox {
    pub original: TBox,
    pub axioms: Vec<NormalAxiom>,
    pub(crate) basics: Vec<Basic>,
    pub(crate) roles: Vec<RoleName>,
    concept_ids: HashMap<Concept, BasicId>,
    role_ids: HashMap<RoleName, RoleId>,
    fresh: BTreeMap<u32, Concept>,
    next_fresh: u32,
}

impl NormalizedTBox {
    fn empty(original: TBox) -> Self {
        NormalizedTBox {
            original,
            axioms: Vec::new(),
            basics: vec![Basic::Top],
            roles: Vec::new(),
            concept_ids: HashMap::from([(Concept::Top, TOP_ID)]),
            role_ids: HashMap::new(),
            fresh: BTreeMap::new(),
            next_fresh: 0,
        }
    }

    pub fn new(t: &TBox) -> Self {
        let mut n = NormalizedTBox::empty(t.clone());
        for a in t {
            n.add_axiom(a);
        }
        n
    }

    pub fn basic(&self, id: BasicId) -> &Basic {
        &self.basics[id as usize]
    }

    pub fn basic_count(&self) -> usize {
        self.basics.len()
    }

    pub fn role_count(&self) -> usize {
        self.roles.len()
    }

    pub fn role_name(&self, id: RoleId) -> &RoleName {
        &self.roles[id as usize]
    }

    /// Fresh name -> the concept it defines.
    pub fn fresh_map(&self) -> &BTreeMap<u32, Concept> {
        &self.fresh
    }

    pub fn concept_id(&self, c: &Concept) -> Option<BasicId> {
        self.concept_ids.get(c).copied()
    }

    pub fn role_id(&self, r: &RoleName) -> Option<RoleId> {
        self.role_ids.get(r).copied()
    }

    pub(crate) fn intern_role(&mut self, r: &RoleName) -> RoleId {
        if let Some(&id) = self.role_ids.get(r) {
            return id;
        }
        let id = self.roles.len() as RoleId;
        self.roles.push(r.clone());
        self.role_ids.insert(r.clone(), id);
        id
    }

    fn new_basic(&mut self, b: Basic) -> BasicId {
        let id = self.basics.len() as BasicId;
        self.basics.push(b);
        id
    }

    fn new_fresh(&mut self, defines: Option<&Concept>) -> BasicId {
        let n = self.next_fresh;
        self.next_fresh += 1;
        if let Some(c) = defines {
            self.fresh.insert(n, c.clone());
        }
        self.new_basic(Basic::Fresh(n))
    }

    /// Id of a basic concept equivalent to `c`, adding definitions as needed.
    pub(crate) fn intern_concept(&mut self, c: &Concept) -> BasicId {
        if let Some(&id) = self.concept_ids.get(c) {
            return id;
        }
        let id = match c {
            Concept::Top => TOP_ID,
            Concept::Name(a) => self.new_basic(Basic::Name(a.clone())),
            Concept::And(members) => {
                let ids: Vec<BasicId> = members.iter().map(|m| self.intern_concept(m)).collect();
                let x = self.new_fresh(Some(c));
                for &m in &ids {
                    self.axioms.push(NormalAxiom::Sub(x, m));
                }
                let mut acc = ids[0];
                for (i, &m) in ids.iter().enumerate().skip(1) {
                    let target = if i + 1 == ids.len() { x } else { self.new_fresh(None) };
                    self.axioms.push(NormalAxiom::Conj(acc, m, target));
                    acc = target;
                }
                x
            }
            Concept::Exists(r, filler) => {
                let f = self.intern_concept(filler);
                let r = self.intern_role(r);
                let x = self.new_fresh(Some(c));
                self.axioms.push(NormalAxiom::SubExists(x, r, f));
                self.axioms.push(NormalAxiom::ExistsSub(r, f, x));
                x
            }
        };
        self.concept_ids.insert(c.clone(), id);
        id
    }

    pub(crate) fn add_axiom(&mut self, a: &Axiom) {
        match a {
            Axiom::Ci(l, r) => {
                let l = self.intern_concept(l);
                let r = self.intern_concept(r);
                self.axioms.push(NormalAxiom::Sub(l, r));
            }
            Axiom::Ri(r, s) => {
                let r = self.intern_role(r);
                let s = self.intern_role(s);
                self.axioms.push(NormalAxiom::Role(r, s));
            }
        }
    }

    pub fn display_axiom(&self, a: &NormalAxiom) -> String {
        let b = |id: &BasicId| self.basic(*id).to_string();
        let r = |id: &RoleId| self.role_name(*id).to_string();
        match a {
            NormalAxiom::Sub(x, y) => format!("{} <= {}", b(x), b(y)),
            NormalAxiom::Conj(x, y, z) => format!("{} & {} <= {}", b(x), b(y), b(z)),
            NormalAxiom::SubExists(x, s, y) => format!("{} <= some({}, {})", b(x), r(s), b(y)),
            NormalAxiom::ExistsSub(s, x, y) => format!("some({}, {}) <= {}", r(s), b(x), b(y)),
            NormalAxiom::Role(s, t) => format!("{} <= {}", r(s), r(t)),
        }
    }
}

impl fmt::Debug for NormalizedTBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.axioms.iter().map(|a| self.display_axiom(a))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tbox;

    #[test]
    fn normal_forms_only() {
        let t = parse_tbox("ci: A & B & C <= some(r, D & some(s, top))\nri: r <= s").unwrap();
        let n = NormalizedTBox::new(&t);
        // Ids in range, conjunctions binary.
        for a in &n.axioms {
            match *a {
                NormalAxiom::Sub(x, y) => assert!(x.max(y) < n.basic_count() as u32),
                NormalAxiom::Conj(x, y, z) => assert!(x.max(y).max(z) < n.basic_count() as u32),
                NormalAxiom::SubExists(x, r, y) | NormalAxiom::ExistsSub(r, x, y) => {
                    assert!(x.max(y) < n.basic_count() as u32);
                    assert!(r < n.role_count() as u32);
                }
                NormalAxiom::Role(r, s) => assert!(r.max(s) < n.role_count() as u32),
            }
        }
        // A & B & C, D & some(s, top), some(s, top), some(r, ...)
        assert_eq!(n.fresh_map().len(), 4);
        assert!(n.fresh_map().values().all(|c| !matches!(c, Concept::Name(_) | Concept::Top)));
    }

    #[test]
    fn shared_subconcepts_share_definitions() {
        let t = parse_tbox("ci: some(r, A) <= B\nci: C <= some(r, A)").unwrap();
        let n = NormalizedTBox::new(&t);
        assert_eq!(n.fresh_map().len(), 1);
    }

    #[test]
    fn fresh_names_use_the_reserved_prefix() {
        let t = parse_tbox("ci: A <= some(r, B)").unwrap();
        let n = NormalizedTBox::new(&t);
        let shown = format!("{n:?}");
        assert!(shown.contains("__x0 <= some(r, B)"), "{shown}");
    }
}
