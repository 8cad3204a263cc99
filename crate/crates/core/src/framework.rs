//! Learning frameworks `(E, L, mu)`: which examples exist, which TBoxes are
//! hypotheses, and when a hypothesis has an example.
//!
//! Axiom frameworks (`toy-atomic`, `toy-conj`, `dllite`, `elh`) use
//! learning from entailments: `e` is in `mu(h)` iff `h |= e`. `elh-iq` uses
//! `(ABox, IQ)` pairs: `(A, q)` is in `mu(h)` iff `(h, A) |= q`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::parse::{parse_axiom, parse_data_example, print_data_example, ParseError};
use crate::reasoner::Reasoner;
use crate::syntax::{ABox, Assertion, Axiom, Concept, ConceptName, IndividualName, Iq, RoleName, Signature, TBox};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FragmentId {
    /// `A <= B` between concept names.
    ToyAtomic,
    /// Conjunction of names on the left, one name on the right
    /// (propositional Horn clauses).
    ToyConj,
    /// `B1 <= B2` with `B` a name or `some(r, top)`, plus role inclusions.
    DlLite,
    Elh,
    /// ELH hypotheses, `(ABox, IQ)` examples.
    ElhIq,
}

impl FragmentId {
    pub const ALL: [FragmentId; 5] =
        [FragmentId::ToyAtomic, FragmentId::ToyConj, FragmentId::DlLite, FragmentId::Elh, FragmentId::ElhIq];

    pub fn as_str(self) -> &'static str {
        match self {
            FragmentId::ToyAtomic => "toy-atomic",
            FragmentId::ToyConj => "toy-conj",
            FragmentId::DlLite => "dllite",
            FragmentId::Elh => "elh",
            FragmentId::ElhIq => "elh-iq",
        }
    }

    pub fn example_kind(self) -> ExampleKind {
        match self {
            FragmentId::ElhIq => ExampleKind::Data,
            _ => ExampleKind::Axiom,
        }
    }

    /// Whether `a` is a hypothesis axiom of this fragment.
    pub fn admits_axiom(self, a: &Axiom) -> bool {
        fn names_only(c: &Concept) -> bool {
            !c.is_top() && c.conjuncts().iter().all(|m| matches!(m, Concept::Name(_)))
        }
        fn dllite_basic(c: &Concept) -> bool {
            match c {
                Concept::Name(_) => true,
                Concept::Exists(_, filler) => filler.is_top(),
                _ => false,
            }
        }
        match (self, a) {
            (FragmentId::ToyAtomic, Axiom::Ci(Concept::Name(_), Concept::Name(_))) => true,
            (FragmentId::ToyConj, Axiom::Ci(l, Concept::Name(_))) => names_only(l),
            (FragmentId::DlLite, Axiom::Ci(l, r)) => dllite_basic(l) && dllite_basic(r),
            (FragmentId::DlLite, Axiom::Ri(..)) => true,
            (FragmentId::Elh | FragmentId::ElhIq, _) => true,
            _ => false,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FragmentId::ToyAtomic | FragmentId::ToyConj | FragmentId::DlLite)
    }
}

impl fmt::Display for FragmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FragmentId {
    type Err = FrameworkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FragmentId::ALL.into_iter().find(|f| f.as_str() == s).ok_or_else(|| FrameworkError::UnknownFragment(s.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleKind {
    Axiom,
    Data,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("unknown fragment `{0}` (expected toy-atomic, toy-conj, dllite, elh or elh-iq)")]
    UnknownFragment(String),
    #[error("`{example}` is not an example of {fragment}")]
    Example { fragment: FragmentId, example: String },
    #[error("`{axiom}` is not a {fragment} axiom")]
    Hypothesis { fragment: FragmentId, axiom: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An element of the example space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Example {
    Axiom(Axiom),
    Data(ABox, Iq),
}

impl Example {
    pub fn size(&self) -> usize {
        match self {
            Example::Axiom(a) => a.size(),
            Example::Data(abox, q) => abox.size() + q.size(),
        }
    }

    pub fn as_axiom(&self) -> Option<&Axiom> {
        match self {
            Example::Axiom(a) => Some(a),
            Example::Data(..) => None,
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            Example::Axiom(a) => a.signature(),
            Example::Data(abox, q) => abox.signature().union(&q.signature()),
        }
    }

    /// Parses `ci: ...`, `ri: ...` or `iq: ... |- ...`.
    pub fn parse(text: &str) -> Result<Example, ParseError> {
        if text.trim_start().starts_with("iq:") {
            parse_data_example(text).map(|(abox, q)| Example::Data(abox, q))
        } else {
            parse_axiom(text).map(Example::Axiom)
        }
    }

    /// The data example equivalent to an axiom: `C <= D` becomes the tree
    /// ABox of `C` rooted at `a` with query `D(a)`, and `r <= s` becomes
    /// `({r(a, b)}, s(a, b))`. For every TBox `t`, `t |= axiom` iff the data
    /// example is entailed by `t`.
    pub fn from_axiom_as_data(a: &Axiom) -> Example {
        let root = IndividualName::new_unchecked("a");
        match a {
            Axiom::Ci(l, r) => {
                let mut abox = ABox::new();
                let mut counter = 0;
                tree_abox(l, &root, &mut abox, &mut counter);
                Example::Data(abox, Iq::Concept(r.clone(), root))
            }
            Axiom::Ri(r, s) => {
                let b = IndividualName::new_unchecked("b");
                let abox = ABox::from_iter([Assertion::Role(r.clone(), root.clone(), b.clone())]);
                Example::Data(abox, Iq::Role(s.clone(), root, b))
            }
        }
    }
}

fn tree_abox(c: &Concept, at: &IndividualName, abox: &mut ABox, counter: &mut usize) {
    match c {
        Concept::Top => {}
        Concept::Name(a) => {
            abox.insert(Assertion::Concept(a.clone(), at.clone()));
        }
        Concept::And(members) => members.iter().for_each(|m| tree_abox(m, at, abox, counter)),
        Concept::Exists(r, filler) => {
            *counter += 1;
            let child = IndividualName::new_unchecked(&format!("a{counter}"));
            abox.insert(Assertion::Role(r.clone(), at.clone(), child.clone()));
            tree_abox(filler, &child, abox, counter);
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Example::Axiom(a) => write!(f, "{a}"),
            Example::Data(abox, q) => f.write_str(&print_data_example(abox, q)),
        }
    }
}

impl fmt::Debug for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Example {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Example::parse(s)
    }
}

impl From<Axiom> for Example {
    fn from(a: Axiom) -> Self {
        Example::Axiom(a)
    }
}

/// Orders by size, then by printed form.
pub fn example_order(a: &Example, b: &Example) -> std::cmp::Ordering {
    a.size().cmp(&b.size()).then_with(|| a.to_string().cmp(&b.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledExample {
    pub example: Example,
    pub label: bool,
}

/// A fragment together with the bounds used when enumerating its data
/// examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LearningFramework {
    pub fragment: FragmentId,
    /// Largest ABox enumerated for `elh-iq` examples, in assertions.
    pub abox_cap: usize,
}

impl LearningFramework {
    pub fn new(fragment: FragmentId) -> Self {
        LearningFramework { fragment, abox_cap: 2 }
    }

    pub fn example_kind(&self) -> ExampleKind {
        self.fragment.example_kind()
    }

    pub fn validate_hypothesis(&self, h: &TBox) -> Result<(), FrameworkError> {
        match h.iter().find(|a| !self.fragment.admits_axiom(a)) {
            Some(a) => Err(FrameworkError::Hypothesis { fragment: self.fragment, axiom: a.to_string() }),
            None => Ok(()),
        }
    }

    pub fn validate_example(&self, e: &Example) -> Result<(), FrameworkError> {
        let ok = match (self.fragment, e) {
            (FragmentId::ElhIq, Example::Data(..)) => true,
            (FragmentId::ElhIq, Example::Axiom(_)) | (_, Example::Data(..)) => false,
            (f, Example::Axiom(a)) => f.admits_axiom(a),
        };
        if ok {
            Ok(())
        } else {
            Err(FrameworkError::Example { fragment: self.fragment, example: e.to_string() })
        }
    }

    /// `e` in `mu(h)`.
    pub fn is_member(&self, h: &TBox, e: &Example) -> Result<bool, FrameworkError> {
        self.validate_hypothesis(h)?;
        self.is_member_with(&Reasoner::new(h), e)
    }

    /// [`is_member`](Self::is_member) against a prepared reasoner; the
    /// hypothesis is not re-validated.
    pub fn is_member_with(&self, r: &Reasoner, e: &Example) -> Result<bool, FrameworkError> {
        self.validate_example(e)?;
        Ok(match e {
            Example::Axiom(a) => r.entails(a),
            Example::Data(abox, q) => r.entails_iq(abox, q),
        })
    }

    /// `e` in `mu(t) xor mu(h)`.
    pub fn is_counterexample(&self, t: &TBox, h: &TBox, e: &Example) -> Result<bool, FrameworkError> {
        Ok(self.is_member(t, e)? != self.is_member(h, e)?)
    }

    /// Turns an axiom of `t` or `h` into an example of this framework.
    pub fn example_from_axiom(&self, a: &Axiom) -> Example {
        match self.example_kind() {
            ExampleKind::Axiom => Example::Axiom(a.clone()),
            ExampleKind::Data => Example::from_axiom_as_data(a),
        }
    }

    /// Every example over `sig`, without duplicates, in nondecreasing size
    /// and by printed form within a size. `depth_cap` and `size_cap` only
    /// bound the infinite fragments (`elh`, `elh-iq`).
    pub fn enumerate_examples(
        &self,
        sig: &Signature,
        depth_cap: usize,
        size_cap: usize,
    ) -> Box<dyn Iterator<Item = Example> + Send> {
        if sig.is_empty() {
            return Box::new(std::iter::empty());
        }
        let names: Vec<ConceptName> = sig.concept_names.iter().cloned().collect();
        let roles: Vec<RoleName> = sig.role_names.iter().cloned().collect();
        match self.fragment {
            FragmentId::ToyAtomic => {
                let pairs: Vec<Example> = names
                    .iter()
                    .flat_map(|a| {
                        names.iter().map(move |b| Axiom::ci(Concept::Name(a.clone()), Concept::Name(b.clone())))
                    })
                    .map(Example::Axiom)
                    .collect();
                Box::new(pairs.into_iter())
            }
            FragmentId::ToyConj => Box::new(ToyConjIter::new(names)),
            FragmentId::DlLite => {
                let mut out: Vec<Example> = dllite_axioms(&names, &roles).into_iter().map(Example::Axiom).collect();
                out.sort_by(example_order);
                Box::new(out.into_iter())
            }
            FragmentId::Elh => {
                let mut out: Vec<Example> =
                    elh_axioms(sig, depth_cap, size_cap).into_iter().map(Example::Axiom).collect();
                out.sort_by(example_order);
                Box::new(out.into_iter())
            }
            FragmentId::ElhIq => {
                let mut out = data_examples(sig, depth_cap, size_cap, self.abox_cap);
                out.sort_by(example_order);
                Box::new(out.into_iter())
            }
        }
    }
}

impl From<FragmentId> for LearningFramework {
    fn from(f: FragmentId) -> Self {
        LearningFramework::new(f)
    }
}

/// `B1 <= B2` over `B in names + some(r, top)`, then `r <= s`.
pub fn dllite_axioms(names: &[ConceptName], roles: &[RoleName]) -> Vec<Axiom> {
    let basics: Vec<Concept> = names
        .iter()
        .map(|a| Concept::Name(a.clone()))
        .chain(roles.iter().map(|r| Concept::exists(r.clone(), Concept::Top)))
        .collect();
    let mut out = Vec::with_capacity(basics.len() * basics.len() + roles.len() * roles.len());
    for l in &basics {
        for r in &basics {
            out.push(Axiom::ci(l.clone(), r.clone()));
        }
    }
    for r in roles {
        for s in roles {
            out.push(Axiom::ri(r.clone(), s.clone()));
        }
    }
    out
}

/// Lazily enumerates `L <= B` for non-empty `L` by increasing `|L|`, then
/// `L` in lexicographic index order, then `B`.
struct ToyConjIter {
    names: Vec<ConceptName>,
    lhs: Vec<usize>,
    rhs: usize,
    done: bool,
}

impl ToyConjIter {
    fn new(names: Vec<ConceptName>) -> Self {
        let done = names.is_empty();
        ToyConjIter { names, lhs: vec![0], rhs: 0, done }
    }

    fn advance_lhs(&mut self) {
        let n = self.names.len();
        let k = self.lhs.len();
        // Next k-combination, or the first (k+1)-combination.
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.lhs[i] < n - k + i {
                self.lhs[i] += 1;
                for j in i + 1..k {
                    self.lhs[j] = self.lhs[j - 1] + 1;
                }
                return;
            }
        }
        if k == n {
            self.done = true;
        } else {
            self.lhs = (0..=k).collect();
        }
    }
}

impl Iterator for ToyConjIter {
    type Item = Example;

    fn next(&mut self) -> Option<Example> {
        if self.done {
            return None;
        }
        let lhs = Concept::and(self.lhs.iter().map(|&i| Concept::Name(self.names[i].clone())));
        let item = Example::Axiom(Axiom::ci(lhs, Concept::Name(self.names[self.rhs].clone())));
        self.rhs += 1;
        if self.rhs == self.names.len() {
            self.rhs = 0;
            self.advance_lhs();
        }
        Some(item)
    }
}

/// Canonical concepts over `sig` grouped by size: `levels[s]` holds every
/// concept of size `s` and depth at most `depth_cap`, for `s <= size_cap`.
/// `levels[0]` is empty.
pub fn concepts_by_size(sig: &Signature, depth_cap: usize, size_cap: usize) -> Vec<Vec<Concept>> {
    let mut levels: Vec<Vec<Concept>> = vec![Vec::new(); size_cap + 1];
    if size_cap == 0 {
        return levels;
    }
    levels[1].push(Concept::Top);
    levels[1].extend(sig.concept_names.iter().cloned().map(Concept::Name));
    levels[1].sort();
    // Conjunction members: names and existentials, never top or conjunctions.
    let mut atoms: Vec<Concept> = sig.concept_names.iter().cloned().map(Concept::Name).collect();
    for s in 2..=size_cap {
        let mut level = Vec::new();
        if s >= 3 {
            for r in &sig.role_names {
                for filler in &levels[s - 2] {
                    if filler.depth() < depth_cap {
                        level.push(Concept::exists(r.clone(), filler.clone()));
                    }
                }
            }
        }
        // A conjunction node of size s has members summing to s - 1; every
        // member is strictly smaller, so `atoms` already holds all of them.
        let mut chosen = Vec::new();
        conjunctions(&atoms, 0, s - 1, &mut chosen, &mut level);
        level.sort();
        atoms.extend(level.iter().filter(|c| matches!(c, Concept::Exists(..))).cloned());
        levels[s] = level;
    }
    levels
}

fn conjunctions(atoms: &[Concept], from: usize, budget: usize, chosen: &mut Vec<Concept>, out: &mut Vec<Concept>) {
    if budget == 0 {
        if chosen.len() >= 2 {
            out.push(Concept::and(chosen.iter().cloned()));
        }
        return;
    }
    for i in from..atoms.len() {
        let size = atoms[i].size();
        if size <= budget {
            chosen.push(atoms[i].clone());
            conjunctions(atoms, i + 1, budget - size, chosen, out);
            chosen.pop();
        }
    }
}

/// All ELH axioms over `sig` of size at most `size_cap` with both sides of
/// depth at most `depth_cap`.
pub fn elh_axioms(sig: &Signature, depth_cap: usize, size_cap: usize) -> Vec<Axiom> {
    let mut out = Vec::new();
    if size_cap >= 3 {
        for r in &sig.role_names {
            for s in &sig.role_names {
                out.push(Axiom::ri(r.clone(), s.clone()));
            }
        }
    }
    let levels = concepts_by_size(sig, depth_cap, size_cap.saturating_sub(2));
    for (ls, lefts) in levels.iter().enumerate() {
        for (rs, rights) in levels.iter().enumerate() {
            if ls + rs + 1 > size_cap {
                continue;
            }
            for l in lefts {
                for r in rights {
                    out.push(Axiom::Ci(l.clone(), r.clone()));
                }
            }
        }
    }
    out
}

fn data_examples(sig: &Signature, depth_cap: usize, size_cap: usize, abox_cap: usize) -> Vec<Example> {
    let inds = [IndividualName::new_unchecked("a"), IndividualName::new_unchecked("b")];
    let mut assertions = Vec::new();
    for c in &sig.concept_names {
        for i in &inds {
            assertions.push(Assertion::Concept(c.clone(), i.clone()));
        }
    }
    for r in &sig.role_names {
        for i in &inds {
            for j in &inds {
                assertions.push(Assertion::Role(r.clone(), i.clone(), j.clone()));
            }
        }
    }
    let mut aboxes: Vec<ABox> = vec![ABox::new()];
    let mut frontier: Vec<(ABox, usize)> = vec![(ABox::new(), 0)];
    for _ in 0..abox_cap {
        let mut next = Vec::new();
        for (abox, from) in &frontier {
            for (k, a) in assertions.iter().enumerate().skip(*from) {
                let mut bigger = abox.clone();
                bigger.insert(a.clone());
                if bigger.size() <= size_cap {
                    next.push((bigger, k + 1));
                }
            }
        }
        aboxes.extend(next.iter().map(|(a, _)| a.clone()));
        frontier = next;
    }
    let concepts: Vec<Concept> =
        concepts_by_size(sig, depth_cap, size_cap.saturating_sub(1)).into_iter().flatten().collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for abox in &aboxes {
        let mentioned = abox.individuals();
        for i in &inds {
            if !(mentioned.contains(i) || (abox.is_empty() && i.as_str() == "a")) {
                continue;
            }
            for c in &concepts {
                let e = Example::Data(abox.clone(), Iq::Concept(c.clone(), i.clone()));
                if e.size() <= size_cap && seen.insert(e.to_string()) {
                    out.push(e);
                }
            }
            for r in &sig.role_names {
                for j in &inds {
                    if mentioned.contains(j) {
                        let e = Example::Data(abox.clone(), Iq::Role(r.clone(), i.clone(), j.clone()));
                        if e.size() <= size_cap && seen.insert(e.to_string()) {
                            out.push(e);
                        }
                    }
                }
            }
        }
    }
    out
}
