//! Goal-directed EL completion with a role hierarchy.
//!
//! For every activated context `X` we compute `S(X)`, the basic concepts
//! subsuming `X`, and the links `(X, r, Y)`:
//!
//! ```text
//! init  X activated               => X, top in S(X)
//! CR1   A in S(X), A <= B          => B in S(X)
//! CR2   A1, A2 in S(X), A1&A2 <= B => B in S(X)
//! CR3   A in S(X), A <= some(r, B) => (X, r, B), B activated
//! CR4   (X, r, Y), A in S(Y), some(s, A) <= B, r <=* s => B in S(X)
//! ```
//!
//! `r <=* s` is the reflexive-transitive closure of the declared RIs.

use std::collections::{HashSet, VecDeque};

use super::normalize::{BasicId, NormalAxiom, NormalizedTBox, RoleId, TOP_ID};

/// `closure[r]` holds every `s` with `r <=* s`.
pub(crate) fn role_closure(role_count: usize, edges: impl IntoIterator<Item = (RoleId, RoleId)>) -> Vec<Vec<bool>> {
    let mut succ = vec![Vec::new(); role_count];
    for (r, s) in edges {
        succ[r as usize].push(s);
    }
    let mut closure = vec![vec![false; role_count]; role_count];
    for (start, row) in closure.iter_mut().enumerate() {
        let mut stack = vec![start as RoleId];
        row[start] = true;
        while let Some(r) = stack.pop() {
            for &s in &succ[r as usize] {
                if !row[s as usize] {
                    row[s as usize] = true;
                    stack.push(s);
                }
            }
        }
    }
    closure
}

enum Item {
    Sub(BasicId, BasicId),
    Link(BasicId, RoleId, BasicId),
}

pub struct Saturation<'a> {
    normalized: &'a NormalizedTBox,
    told: Vec<Vec<BasicId>>,
    conj: Vec<Vec<(BasicId, BasicId)>>,
    sub_exists: Vec<Vec<(RoleId, BasicId)>>,
    exists_sub: Vec<Vec<(RoleId, BasicId)>>,
    role_sup: Vec<Vec<bool>>,
    subsumers: Vec<Option<HashSet<BasicId>>>,
    preds: Vec<Vec<(BasicId, RoleId)>>,
    links: HashSet<(BasicId, RoleId, BasicId)>,
    queue: VecDeque<Item>,
}

impl<'a> Saturation<'a> {
    pub fn new(normalized: &'a NormalizedTBox) -> Self {
        let n = normalized.basic_count();
        let mut told = vec![Vec::new(); n];
        let mut conj = vec![Vec::new(); n];
        let mut sub_exists = vec![Vec::new(); n];
        let mut exists_sub = vec![Vec::new(); n];
        let mut ris = Vec::new();
        for a in &normalized.axioms {
            match *a {
                NormalAxiom::Sub(x, y) => told[x as usize].push(y),
                NormalAxiom::Conj(x, y, z) => {
                    conj[x as usize].push((y, z));
                    if x != y {
                        conj[y as usize].push((x, z));
                    }
                }
                NormalAxiom::SubExists(x, r, y) => sub_exists[x as usize].push((r, y)),
                NormalAxiom::ExistsSub(r, x, y) => exists_sub[x as usize].push((r, y)),
                NormalAxiom::Role(r, s) => ris.push((r, s)),
            }
        }
        Saturation {
            normalized,
            told,
            conj,
            sub_exists,
            exists_sub,
            role_sup: role_closure(normalized.role_count(), ris),
            subsumers: vec![None; n],
            preds: vec![Vec::new(); n],
            links: HashSet::new(),
            queue: VecDeque::new(),
        }
    }

    fn activate(&mut self, x: BasicId) {
        if self.subsumers[x as usize].is_none() {
            self.subsumers[x as usize] = Some(HashSet::new());
            self.queue.push_back(Item::Sub(x, x));
            self.queue.push_back(Item::Sub(x, TOP_ID));
        }
    }

    fn run(&mut self) {
        while let Some(item) = self.queue.pop_front() {
            match item {
                Item::Sub(x, a) => self.add_subsumer(x, a),
                Item::Link(x, r, y) => self.add_link(x, r, y),
            }
        }
    }

    fn add_subsumer(&mut self, x: BasicId, a: BasicId) {
        let set = self.subsumers[x as usize].as_mut().expect("context activated");
        if !set.insert(a) {
            return;
        }
        for &b in &self.told[a as usize] {
            self.queue.push_back(Item::Sub(x, b));
        }
        let set = self.subsumers[x as usize].as_ref().unwrap();
        for &(other, b) in &self.conj[a as usize] {
            if set.contains(&other) {
                self.queue.push_back(Item::Sub(x, b));
            }
        }
        for &(r, b) in &self.sub_exists[a as usize] {
            self.queue.push_back(Item::Link(x, r, b));
        }
        if !self.exists_sub[a as usize].is_empty() {
            for &(z, r) in &self.preds[x as usize] {
                for &(s, b) in &self.exists_sub[a as usize] {
                    if self.role_sup[r as usize][s as usize] {
                        self.queue.push_back(Item::Sub(z, b));
                    }
                }
            }
        }
    }

    fn add_link(&mut self, x: BasicId, r: RoleId, y: BasicId) {
        if !self.links.insert((x, r, y)) {
            return;
        }
        self.preds[y as usize].push((x, r));
        self.activate(y);
        if let Some(set) = &self.subsumers[y as usize] {
            for &a in set {
                for &(s, b) in &self.exists_sub[a as usize] {
                    if self.role_sup[r as usize][s as usize] {
                        self.queue.push_back(Item::Sub(x, b));
                    }
                }
            }
        }
    }

    /// Saturates from context `x` and returns its subsumer set.
    pub fn subsumers_of(&mut self, x: BasicId) -> &HashSet<BasicId> {
        self.activate(x);
        self.run();
        self.subsumers[x as usize].as_ref().unwrap()
    }

    pub fn subsumes(&mut self, sub: BasicId, sup: BasicId) -> bool {
        self.subsumers_of(sub).contains(&sup)
    }

    pub fn role_subsumes(&self, r: RoleId, s: RoleId) -> bool {
        self.role_sup[r as usize][s as usize]
    }

    pub fn normalized(&self) -> &NormalizedTBox {
        self.normalized
    }
}
