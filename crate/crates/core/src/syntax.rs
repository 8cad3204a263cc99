//! ELH syntax: names, concept expressions, axioms, TBoxes, ABoxes and
//! instance queries.
//!
//! Every constructor here produces canonical values: conjunctions are
//! flattened, `top` conjuncts are dropped, duplicates removed and members
//! ordered by their printed form. Two canonical values are equal iff they
//! print identically, which is what lets the rest of the crate treat
//! duplicate detection as a purely syntactic question.
//!
//! Size convention: every name occurrence and every constructor counts one.
//! `top` and a concept name have size 1, a conjunction node adds 1 on top
//! of its members, `some(r, C)` has size `2 + |C|` (the existential plus the
//! role name), an inclusion adds 1 on top of both sides, so `A <= B` has
//! size 3 and `r <= s` has size 3.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Words that can never be used as identifiers.
pub const RESERVED_WORDS: [&str; 3] = ["top", "some", "role"];

/// Prefix reserved for definitional names introduced by the reasoner.
pub const RESERVED_PREFIX: &str = "__";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("identifier is empty")]
    Empty,
    #[error("identifier `{0}` contains characters outside [A-Za-z0-9_] or starts with a digit")]
    Malformed(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
}

pub(crate) fn validate_identifier(id: &str) -> Result<(), NameError> {
    let mut chars = id.chars();
    let Some(first) = chars.next() else {
        return Err(NameError::Empty);
    };
    if !(first.is_ascii_alphabetic() || first == '_') || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(NameError::Malformed(id.to_string()));
    }
    if RESERVED_WORDS.contains(&id) || id.starts_with(RESERVED_PREFIX) {
        return Err(NameError::Reserved(id.to_string()));
    }
    Ok(())
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(id: &str) -> Result<Self, NameError> {
                validate_identifier(id)?;
                Ok(Self(id.into()))
            }

            /// Skips validation; used for reserved-namespace names.
            pub(crate) fn new_unchecked(id: &str) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }

            pub fn is_reserved(&self) -> bool {
                self.0.starts_with(RESERVED_PREFIX)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

name_type!(
    /// A concept name (an element of N_C).
    ConceptName
);
name_type!(
    /// A role name (an element of N_R).
    RoleName
);
name_type!(
    /// An individual name (an element of N_I).
    IndividualName
);

/// An EL concept expression.
///
/// Build values through [`Concept::and`] and [`Concept::exists`] (or the
/// parser) to keep them canonical; [`Concept::canonicalize`] repairs a value
/// assembled by hand.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Concept {
    Top,
    Name(ConceptName),
    /// At least two members, none of them `Top` or `And`, strictly ordered.
    And(Vec<Concept>),
    Exists(RoleName, Box<Concept>),
}

impl Concept {
    pub fn name(name: ConceptName) -> Self {
        Concept::Name(name)
    }

    pub fn exists(role: RoleName, filler: Concept) -> Self {
        Concept::Exists(role, Box::new(filler))
    }

    /// Canonical conjunction of `parts`. An empty conjunction is `Top`.
    pub fn and<I: IntoIterator<Item = Concept>>(parts: I) -> Self {
        let mut members = Vec::new();
        for part in parts {
            match part {
                Concept::Top => {}
                Concept::And(inner) => members.extend(inner),
                other => members.push(other),
            }
        }
        members.sort();
        members.dedup();
        match members.len() {
            0 => Concept::Top,
            1 => members.pop().unwrap(),
            _ => Concept::And(members),
        }
    }

    pub fn canonicalize(&self) -> Self {
        match self {
            Concept::Top | Concept::Name(_) => self.clone(),
            Concept::And(members) => Concept::and(members.iter().map(Concept::canonicalize)),
            Concept::Exists(role, filler) => Concept::exists(role.clone(), filler.canonicalize()),
        }
    }

    /// Conjuncts of a canonical concept; `Top` has none.
    pub fn conjuncts(&self) -> &[Concept] {
        match self {
            Concept::Top => &[],
            Concept::And(members) => members,
            other => std::slice::from_ref(other),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Name(_) => 1,
            Concept::And(members) => 1 + members.iter().map(Concept::size).sum::<usize>(),
            Concept::Exists(_, filler) => 2 + filler.size(),
        }
    }

    /// Maximal nesting of existential restrictions.
    pub fn depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Name(_) => 0,
            Concept::And(members) => members.iter().map(Concept::depth).max().unwrap_or(0),
            Concept::Exists(_, filler) => 1 + filler.depth(),
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Concept::Top)
    }

    /// Every subconcept, including `self`, in pre-order.
    pub fn subconcepts(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            out.push(c);
            match c {
                Concept::And(members) => stack.extend(members.iter().rev()),
                Concept::Exists(_, filler) => stack.push(filler),
                _ => {}
            }
        }
        out
    }

    fn collect_signature(&self, sig: &mut Signature) {
        match self {
            Concept::Top => {}
            Concept::Name(a) => {
                sig.concept_names.insert(a.clone());
            }
            Concept::And(members) => members.iter().for_each(|m| m.collect_signature(sig)),
            Concept::Exists(r, filler) => {
                sig.role_names.insert(r.clone());
                filler.collect_signature(sig);
            }
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        self.collect_signature(&mut sig);
        sig
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("top"),
            Concept::Name(a) => write!(f, "{a}"),
            Concept::And(members) => {
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
            Concept::Exists(r, filler) => write!(f, "some({r}, {filler})"),
        }
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Canonical order is lexicographic on the printed form. Printing is
// injective on canonical values, so this agrees with structural equality.
impl Ord for Concept {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for Concept {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A concept inclusion or a role inclusion.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Axiom {
    Ci(Concept, Concept),
    Ri(RoleName, RoleName),
}

impl Axiom {
    pub fn ci(lhs: Concept, rhs: Concept) -> Self {
        Axiom::Ci(lhs.canonicalize(), rhs.canonicalize())
    }

    pub fn ri(lhs: RoleName, rhs: RoleName) -> Self {
        Axiom::Ri(lhs, rhs)
    }

    pub fn canonicalize(&self) -> Self {
        match self {
            Axiom::Ci(l, r) => Axiom::Ci(l.canonicalize(), r.canonicalize()),
            Axiom::Ri(..) => self.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Axiom::Ci(l, r) => 1 + l.size() + r.size(),
            Axiom::Ri(..) => 3,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Axiom::Ci(l, r) => l.depth().max(r.depth()),
            Axiom::Ri(..) => 0,
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        match self {
            Axiom::Ci(l, r) => {
                l.collect_signature(&mut sig);
                r.collect_signature(&mut sig);
            }
            Axiom::Ri(r, s) => {
                sig.role_names.insert(r.clone());
                sig.role_names.insert(s.clone());
            }
        }
        sig
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Ci(l, r) => write!(f, "ci: {l} <= {r}"),
            Axiom::Ri(r, s) => write!(f, "ri: {r} <= {s}"),
        }
    }
}

impl fmt::Debug for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ord for Axiom {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for Axiom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite set of axioms, kept in canonical print order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct TBox {
    axioms: BTreeSet<Axiom>,
}

impl TBox {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if a canonically equal axiom was already present.
    pub fn insert(&mut self, axiom: Axiom) -> bool {
        self.axioms.insert(axiom.canonicalize())
    }

    pub fn remove(&mut self, axiom: &Axiom) -> bool {
        self.axioms.remove(axiom)
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Axiom> + '_ {
        self.axioms.iter()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn size(&self) -> usize {
        self.axioms.iter().map(Axiom::size).sum()
    }

    pub fn depth(&self) -> usize {
        self.axioms.iter().map(Axiom::depth).max().unwrap_or(0)
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for a in &self.axioms {
            sig.extend(&a.signature());
        }
        sig
    }

    pub fn concept_inclusions(&self) -> impl Iterator<Item = (&Concept, &Concept)> + '_ {
        self.axioms.iter().filter_map(|a| match a {
            Axiom::Ci(l, r) => Some((l, r)),
            Axiom::Ri(..) => None,
        })
    }

    pub fn role_inclusions(&self) -> impl Iterator<Item = (&RoleName, &RoleName)> + '_ {
        self.axioms.iter().filter_map(|a| match a {
            Axiom::Ri(r, s) => Some((r, s)),
            Axiom::Ci(..) => None,
        })
    }

    pub fn is_subset(&self, other: &TBox) -> bool {
        self.axioms.is_subset(&other.axioms)
    }
}

impl FromIterator<Axiom> for TBox {
    fn from_iter<I: IntoIterator<Item = Axiom>>(iter: I) -> Self {
        let mut t = TBox::new();
        t.extend(iter);
        t
    }
}

impl Extend<Axiom> for TBox {
    fn extend<I: IntoIterator<Item = Axiom>>(&mut self, iter: I) {
        for a in iter {
            self.insert(a);
        }
    }
}

impl<'a> IntoIterator for &'a TBox {
    type Item = &'a Axiom;
    type IntoIter = std::collections::btree_set::Iter<'a, Axiom>;

    fn into_iter(self) -> Self::IntoIter {
        self.axioms.iter()
    }
}

/// Canonical text: one axiom per line, each line newline-terminated.
impl fmt::Display for TBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axioms {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.axioms.iter()).finish()
    }
}

pub fn print_tbox(t: &TBox) -> String {
    t.to_string()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    Concept(ConceptName, IndividualName),
    Role(RoleName, IndividualName, IndividualName),
}

impl Assertion {
    pub fn size(&self) -> usize {
        match self {
            Assertion::Concept(..) => 2,
            Assertion::Role(..) => 3,
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept(a, i) => write!(f, "{a}({i})"),
            Assertion::Role(r, i, j) => write!(f, "{r}({i}, {j})"),
        }
    }
}

impl fmt::Debug for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ABox {
    assertions: BTreeSet<Assertion>,
}

impl ABox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: Assertion) -> bool {
        self.assertions.insert(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Assertion> + '_ {
        self.assertions.iter()
    }

    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    pub fn size(&self) -> usize {
        self.assertions.iter().map(Assertion::size).sum()
    }

    pub fn individuals(&self) -> BTreeSet<IndividualName> {
        let mut out = BTreeSet::new();
        for a in &self.assertions {
            match a {
                Assertion::Concept(_, i) => {
                    out.insert(i.clone());
                }
                Assertion::Role(_, i, j) => {
                    out.insert(i.clone());
                    out.insert(j.clone());
                }
            }
        }
        out
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for a in &self.assertions {
            match a {
                Assertion::Concept(c, _) => {
                    sig.concept_names.insert(c.clone());
                }
                Assertion::Role(r, ..) => {
                    sig.role_names.insert(r.clone());
                }
            }
        }
        sig
    }
}

impl FromIterator<Assertion> for ABox {
    fn from_iter<I: IntoIterator<Item = Assertion>>(iter: I) -> Self {
        ABox { assertions: iter.into_iter().collect() }
    }
}

impl fmt::Display for ABox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assertions {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ABox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.assertions.iter()).finish()
    }
}

/// An instance query `C(a)` or `r(a, b)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Iq {
    Concept(Concept, IndividualName),
    Role(RoleName, IndividualName, IndividualName),
}

impl Iq {
    pub fn size(&self) -> usize {
        match self {
            Iq::Concept(c, _) => c.size() + 1,
            Iq::Role(..) => 3,
        }
    }

    pub fn individuals(&self) -> Vec<&IndividualName> {
        match self {
            Iq::Concept(_, a) => vec![a],
            Iq::Role(_, a, b) => vec![a, b],
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            Iq::Concept(c, _) => c.signature(),
            Iq::Role(r, ..) => {
                let mut sig = Signature::default();
                sig.role_names.insert(r.clone());
                sig
            }
        }
    }
}

impl fmt::Display for Iq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Iq::Concept(c @ Concept::And(_), a) => write!(f, "({c})({a})"),
            Iq::Concept(c, a) => write!(f, "{c}({a})"),
            Iq::Role(r, a, b) => write!(f, "{r}({a}, {b})"),
        }
    }
}

impl fmt::Debug for Iq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Concept and role names occurring in some syntactic object.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub concept_names: BTreeSet<ConceptName>,
    pub role_names: BTreeSet<RoleName>,
}

impl Signature {
    pub fn new<C, R>(concepts: C, roles: R) -> Self
    where
        C: IntoIterator<Item = ConceptName>,
        R: IntoIterator<Item = RoleName>,
    {
        Signature { concept_names: concepts.into_iter().collect(), role_names: roles.into_iter().collect() }
    }

    /// Builds a signature from identifier strings, validating each one.
    pub fn from_strs(concepts: &[&str], roles: &[&str]) -> Result<Self, NameError> {
        Ok(Signature {
            concept_names: concepts.iter().map(|c| ConceptName::new(c)).collect::<Result<_, _>>()?,
            role_names: roles.iter().map(|r| RoleName::new(r)).collect::<Result<_, _>>()?,
        })
    }

    pub fn extend(&mut self, other: &Signature) {
        self.concept_names.extend(other.concept_names.iter().cloned());
        self.role_names.extend(other.role_names.iter().cloned());
    }

    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.concept_names.is_empty() && self.role_names.is_empty()
    }

    pub fn len(&self) -> usize {
        self.concept_names.len() + self.role_names.len()
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.concept_names.is_subset(&other.concept_names) && self.role_names.is_subset(&other.role_names)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.concept_names, self.role_names)
    }
}

pub fn signature_of(t: &TBox) -> Signature {
    t.signature()
}
