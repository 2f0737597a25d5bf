//! Arrovian voting systems on partial preorders, and their classification by
//! coalition maps.
//!
//! A voting system sends a profile of partial preorders to a partial preorder.
//! Those satisfying unanimity and independence of irrelevant alternatives are
//! determined by a single map `N ↦ ΔN` on coalitions; this crate computes that
//! map, rebuilds the rule from it, and checks the surrounding theory
//! exhaustively on small societies.

pub mod axioms;
pub mod classify;
pub mod decisive;
pub mod error;
pub mod format;
pub mod laws;
pub mod measurable;
pub mod profiles;
pub mod relations;
pub mod rules;

pub use axioms::{check_axiom, check_axioms, AxiomKind, AxiomReport, Witness};
pub use classify::{Chain, ValidationReport};
pub use decisive::{ArrovianRule, DeltaMap, SetFilter};
pub use error::{Error, Result};
pub use measurable::{Algebra, DMap};
pub use profiles::{Profile, ProfileSpace, VoterSet};
pub use relations::{Alt, Permutation, Preorder};
pub use rules::{RuleKind, RuleSpec, VotingRule};
