//! Symbolic voting-rule families and their evaluators.
//!
//! Every family here decides `a ≽ b` from the pair signature alone, so a rule
//! is evaluated pair by pair and the resulting table is checked for
//! transitivity on the way out.

use std::fmt;

use crate::classify::Chain;
use crate::decisive::{DeltaMap, SetFilter};
use crate::error::{Error, Result};
use crate::measurable::DMap;
use crate::profiles::{extend_with_indifference, PairSignature, Profile, VoterSet, MAX_VOTERS};
use crate::relations::Preorder;

/// A map from profiles over a fixed society to aggregate preorders.
pub trait VotingRule {
    fn voters(&self) -> usize;

    fn evaluate(&self, profile: &Profile) -> Result<Preorder>;
}

impl<R: VotingRule + ?Sized> VotingRule for &R {
    fn voters(&self) -> usize {
        (**self).voters()
    }

    fn evaluate(&self, profile: &Profile) -> Result<Preorder> {
        (**self).evaluate(profile)
    }
}

/// Wraps a closure as a rule; handy for ad-hoc and counterexample rules.
pub struct FnRule<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&Profile) -> Result<Preorder>> FnRule<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnRule { n, f }
    }
}

impl<F: Fn(&Profile) -> Result<Preorder>> VotingRule for FnRule<F> {
    fn voters(&self) -> usize {
        self.n
    }

    fn evaluate(&self, profile: &Profile) -> Result<Preorder> {
        check_size(self.n, profile)?;
        (self.f)(profile)
    }
}

/// The restricted rule `C^N`: profiles over `I ∖ N`, with `N` held indifferent on everything.
pub struct Restricted<R> {
    inner: R,
    set: VoterSet,
}

impl<R: VotingRule> Restricted<R> {
    pub fn new(inner: R, set: VoterSet) -> Result<Self> {
        set.check_within(inner.voters())?;
        Ok(Restricted { inner, set })
    }
}

impl<R: VotingRule> VotingRule for Restricted<R> {
    fn voters(&self) -> usize {
        self.inner.voters() - self.set.len()
    }

    fn evaluate(&self, profile: &Profile) -> Result<Preorder> {
        let full = extend_with_indifference(profile, self.set, self.inner.voters())?;
        self.inner.evaluate(&full)
    }
}

fn check_size(n: usize, profile: &Profile) -> Result<()> {
    if profile.voters() != n {
        return Err(Error::ProfileSize { expected: n, got: profile.voters() });
    }
    Ok(())
}

/// Which family a [`RuleSpec`] belongs to, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleKind {
    /// `A × A` regardless of the profile.
    Trivial,
    /// Intersection of the orders of a coalition.
    Pareto(VoterSet),
    /// Lexicographic rule of a chain: the least non-indifferent coalition decides.
    LexChain(Chain),
    /// Strong lexicographic rule of a chain.
    StrongLexChain(Chain),
    /// Lexicographic rule of a sequence of distinct voters (0-based).
    LexSeq(Vec<usize>),
    /// The rule of a coalition map.
    Delta(DeltaMap),
    /// Weak preference supported by some coalition of a filter.
    Filter(SetFilter),
    /// Coalition-filter map over a partition algebra, on measurable profiles.
    Measurable(DMap),
}

/// A voting rule described symbolically, for a society of `n` voters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSpec {
    n: usize,
    kind: RuleKind,
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_VOTERS {
        return Err(Error::VoterCount { n, max: MAX_VOTERS });
    }
    Ok(())
}

impl RuleSpec {
    pub fn trivial(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(RuleSpec { n, kind: RuleKind::Trivial })
    }

    pub fn pareto(n: usize, coalition: VoterSet) -> Result<Self> {
        check_n(n)?;
        coalition.check_within(n)?;
        Ok(RuleSpec { n, kind: RuleKind::Pareto(coalition) })
    }

    pub fn lex(n: usize, chain: Chain) -> Result<Self> {
        check_n(n)?;
        chain.check_within(n)?;
        Ok(RuleSpec { n, kind: RuleKind::LexChain(chain) })
    }

    pub fn strong_lex(n: usize, chain: Chain) -> Result<Self> {
        check_n(n)?;
        chain.check_within(n)?;
        Ok(RuleSpec { n, kind: RuleKind::StrongLexChain(chain) })
    }

    /// `seq` holds 0-based voter indices.
    pub fn lex_seq(n: usize, seq: Vec<usize>) -> Result<Self> {
        check_n(n)?;
        check_sequence(n, &seq)?;
        Ok(RuleSpec { n, kind: RuleKind::LexSeq(seq) })
    }

    /// Requires monotonicity of the map; the rule is then transitive.
    pub fn delta(delta: DeltaMap) -> Result<Self> {
        if let Some((n_set, m_set)) = delta.monotonicity_violation() {
            return Err(Error::DeltaNotMonotone { n_set, m_set });
        }
        Ok(RuleSpec { n: delta.voters(), kind: RuleKind::Delta(delta) })
    }

    pub fn filter(filter: SetFilter) -> Result<Self> {
        Ok(RuleSpec { n: filter.voters(), kind: RuleKind::Filter(filter) })
    }

    pub fn measurable(dmap: DMap) -> Result<Self> {
        dmap.check_monotone()?;
        Ok(RuleSpec { n: dmap.algebra().voters(), kind: RuleKind::Measurable(dmap) })
    }

    pub fn kind(&self) -> &RuleKind {
        &self.kind
    }

    /// Whether `a ≽ b` given the signature of `(a, b)`.
    pub fn weakly_prefers(&self, sig: &PairSignature) -> bool {
        match &self.kind {
            RuleKind::Trivial => true,
            RuleKind::Pareto(j) => j.is_subset(sig.weak_ab),
            RuleKind::LexChain(chain) => lex_decides(chain.members(), sig),
            RuleKind::StrongLexChain(chain) => strong_lex_decides(chain.members(), sig),
            RuleKind::LexSeq(seq) => lex_seq_decides(seq, sig),
            RuleKind::Delta(delta) => delta_decides(delta, sig),
            RuleKind::Filter(filter) => filter.members().iter().any(|j| j.is_subset(sig.weak_ab)),
            RuleKind::Measurable(dmap) => dmap.decides(sig),
        }
    }
}

impl VotingRule for RuleSpec {
    fn voters(&self) -> usize {
        self.n
    }

    fn evaluate(&self, profile: &Profile) -> Result<Preorder> {
        check_size(self.n, profile)?;
        let m = profile.alternatives();
        if let RuleKind::Measurable(dmap) = &self.kind {
            for a in 0..m {
                for b in 0..m {
                    if a != b {
                        dmap.algebra().check_member(profile.sig(a, b).weak_ab)?;
                    }
                }
            }
        }
        Preorder::from_fn(m, |a, b| self.weakly_prefers(&profile.sig(a, b)))
    }
}

impl fmt::Display for RuleSpec {
    /// The rule line of the rule text format (without the `n=` line).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RuleKind::Trivial => write!(f, "rule=trivial"),
            RuleKind::Pareto(j) => write!(f, "rule=pareto J={j}"),
            RuleKind::LexChain(c) => write!(f, "rule=lex chain={c}"),
            RuleKind::StrongLexChain(c) => write!(f, "rule=strong_lex chain={c}"),
            RuleKind::LexSeq(seq) => {
                let items: Vec<String> = seq.iter().map(|k| (k + 1).to_string()).collect();
                write!(f, "rule=lexseq seq=({})", items.join(","))
            }
            RuleKind::Delta(_) => write!(f, "rule=delta"),
            RuleKind::Filter(filt) => match filt.principal_generator() {
                Some(g) => write!(f, "rule=filter gen={g}"),
                None => write!(f, "rule=filter"),
            },
            RuleKind::Measurable(d) => write!(f, "rule=measurable partition={}", d.algebra()),
        }
    }
}

pub(crate) fn check_sequence(n: usize, seq: &[usize]) -> Result<()> {
    let mut seen = VoterSet::EMPTY;
    for &k in seq {
        if k >= n {
            return Err(Error::InvalidSequence(format!("voter {} outside 1..={n}", k + 1)));
        }
        if seen.contains(k) {
            return Err(Error::InvalidSequence(format!("voter {} repeated", k + 1)));
        }
        seen = seen.union(VoterSet::singleton(k));
    }
    Ok(())
}

fn lex_decides(chain: &[VoterSet], sig: &PairSignature) -> bool {
    let indiff = sig.indifferent();
    match chain.iter().find(|j| !j.is_subset(indiff)) {
        None => true,
        Some(j) => j.is_subset(sig.weak_ab),
    }
}

fn strong_lex_decides(chain: &[VoterSet], sig: &PairSignature) -> bool {
    let strict = sig.strict_ab();
    // J_0 = ∅ and J_λ = J_ℓ for λ ≥ ℓ, so λ = ℓ is the K = ∅ case
    let level = |lambda: usize| if lambda == 0 { VoterSet::EMPTY } else { chain[(lambda - 1).min(chain.len() - 1)] };
    if chain.is_empty() {
        return true;
    }
    (0..=chain.len()).any(|lambda| {
        let j = level(lambda);
        let k = level(lambda + 1).difference(j);
        j.is_subset(sig.weak_ab) && k.is_subset(strict)
    })
}

fn lex_seq_decides(seq: &[usize], sig: &PairSignature) -> bool {
    let indiff = sig.indifferent();
    match seq.iter().find(|&&k| !indiff.contains(k)) {
        None => true,
        Some(&k) => sig.weak_ab.contains(k),
    }
}

fn delta_decides(delta: &DeltaMap, sig: &PairSignature) -> bool {
    let indiff = sig.indifferent();
    let strict = sig.strict_ab();
    if delta.is_minimal() {
        // the maximal indifferent set suffices under minimality
        return delta.small(indiff).is_subset(strict);
    }
    indiff.subsets().any(|n_set| delta.small(n_set).is_subset(strict))
}

/// The Pareto rule `C_J`.
pub fn eval_pareto(coalition: VoterSet, pr: &Profile) -> Result<Preorder> {
    RuleSpec::pareto(pr.voters(), coalition)?.evaluate(pr)
}

pub fn eval_lex(chain: &Chain, pr: &Profile) -> Result<Preorder> {
    RuleSpec::lex(pr.voters(), chain.clone())?.evaluate(pr)
}

pub fn eval_strong_lex(chain: &Chain, pr: &Profile) -> Result<Preorder> {
    RuleSpec::strong_lex(pr.voters(), chain.clone())?.evaluate(pr)
}

/// `seq` holds 0-based voter indices.
pub fn eval_lex_seq(seq: &[usize], pr: &Profile) -> Result<Preorder> {
    RuleSpec::lex_seq(pr.voters(), seq.to_vec())?.evaluate(pr)
}

pub fn eval_delta(delta: &DeltaMap, pr: &Profile) -> Result<Preorder> {
    RuleSpec::delta(delta.clone())?.evaluate(pr)
}

pub fn eval_filter(filter: &SetFilter, pr: &Profile) -> Result<Preorder> {
    RuleSpec::filter(filter.clone())?.evaluate(pr)
}
