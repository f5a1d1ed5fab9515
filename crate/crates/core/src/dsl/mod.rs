//! The formula language: syntax tree, ASCII parser and printer, and the
//! registry of named axioms.

mod formula;
mod parse;
pub mod registry;

pub use formula::Formula;
pub use parse::parse;
pub use registry::{expand_named, Axiom, AxiomSet, Expansion, FamilyPredicate, OneStepAxiom};
