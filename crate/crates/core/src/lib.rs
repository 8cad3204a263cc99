//! ELH ontologies as learning targets.
//!
//! [`syntax`] and [`parse`] define the language, [`reasoner`] decides
//! entailment, [`framework`] binds examples to hypotheses, [`teacher`]
//! answers membership, equivalence and sample queries, [`learners`] holds the
//! learning algorithms and [`hardness`] the lower-bound family with its
//! adversarial teacher.

pub mod framework;
pub mod hardness;
pub mod learners;
pub mod parse;
pub mod reasoner;
pub mod syntax;
pub mod teacher;

pub use parse::{
    parse_abox, parse_axiom, parse_concept, parse_data_example, parse_tbox, print_data_example, ParseError,
};
pub use reasoner::{entails, entails_tbox, equivalent, iq_entails, is_tautology, Reasoner};
pub use syntax::{
    print_tbox, signature_of, ABox, Assertion, Axiom, Concept, ConceptName, IndividualName, Iq, RoleName, Signature,
    TBox,
};
