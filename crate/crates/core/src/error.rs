use thiserror::Error;

use crate::profiles::VoterSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("{m} alternatives is outside the supported range 1..={max}")]
    AlternativeCount { m: usize, max: usize },

    #[error("alternative index {index} out of range for {m} alternatives")]
    AlternativeIndex { index: usize, m: usize },

    #[error("relation is not a partial preorder (reflexive and transitive)")]
    NotPreorder,

    #[error("mismatched number of alternatives: {left} vs {right}")]
    MixedAlternatives { left: usize, right: usize },

    #[error("cannot intersect an empty list of preorders")]
    EmptyIntersection,

    #[error("not a permutation of 0..{m}: {detail}")]
    NotPermutation { m: usize, detail: String },

    #[error("{n} voters is outside the supported range 0..={max}")]
    VoterCount { n: usize, max: usize },

    #[error("voter set {set} is not contained in {{1..{n}}}")]
    VoterOutOfRange { set: VoterSet, n: usize },

    #[error("voter sets overlap: {left} and {right}")]
    Overlap { left: VoterSet, right: VoterSet },

    #[error("the two alternatives of a pair must differ (got {0} twice)")]
    SamePair(usize),

    #[error("profile size mismatch: expected {expected} voters, got {got}")]
    ProfileSize { expected: usize, got: usize },

    #[error("enumeration guard exceeded: {count} items (limit {limit})")]
    Guard { count: u128, limit: u128 },

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid voter sequence: {0}")]
    InvalidSequence(String),

    #[error("coalition map violates monotonicity at N={n_set}, M={m_set}")]
    DeltaNotMonotone { n_set: VoterSet, m_set: VoterSet },

    #[error("coalition map table has {got} entries, expected {expected}")]
    PartialTable { got: usize, expected: usize },

    #[error("family is not a filter: {0}")]
    NotFilter(String),

    #[error("family member {0} is not in the algebra")]
    NotInAlgebra(VoterSet),

    #[error("blocks do not partition the voter set: {0}")]
    NotPartition(String),

    #[error("profile is not measurable: signature set {0} is not in the algebra")]
    NotMeasurable(VoterSet),

    #[error("rule is not arrovian on this domain: {0}")]
    NotArrovian(String),

    #[error("rule output is not transitive; the rule description is inconsistent")]
    IntransitiveOutcome,

    #[error("{0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}
