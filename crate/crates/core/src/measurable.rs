//! Measurable societies: a partition algebra of admissible coalitions and
//! coalition maps whose values are filters inside that algebra.
//!
//! In a finite algebra every filter is principal, so a [`DMap`] stores one
//! generator per measurable set. Working at the level of blocks, an algebra
//! with `k` blocks is just `2^k`, which is how enumeration and validation are
//! done.

use std::fmt;

use crate::classify::enumerate_delta_maps;
use crate::decisive::{ArrovianRule, DeltaMap};
use crate::error::{Error, Result};
use crate::profiles::{PairSignature, ProfileSpace, VoterSet, MAX_VOTERS};
use crate::rules::VotingRule;

/// The algebra generated by a partition of `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    n: usize,
    blocks: Vec<VoterSet>,
}

impl Algebra {
    /// Blocks are sorted by their smallest voter.
    pub fn from_partition(n: usize, mut blocks: Vec<VoterSet>) -> Result<Self> {
        if n > MAX_VOTERS {
            return Err(Error::VoterCount { n, max: MAX_VOTERS });
        }
        let mut seen = VoterSet::EMPTY;
        for &b in &blocks {
            b.check_within(n)?;
            if b.is_empty() {
                return Err(Error::NotPartition("empty block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::NotPartition(format!("block {b} overlaps another block")));
            }
            seen = seen.union(b);
        }
        if seen != VoterSet::all(n) {
            return Err(Error::NotPartition(format!("voters {} are not covered", seen.complement(n))));
        }
        blocks.sort_by_key(|b| b.mask().trailing_zeros());
        Ok(Algebra { n, blocks })
    }

    /// `2^I`
    pub fn discrete(n: usize) -> Result<Self> {
        Self::from_partition(n, (0..n).map(VoterSet::singleton).collect())
    }

    pub fn voters(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[VoterSet] {
        &self.blocks
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// Union of the blocks indexed by `mask`.
    pub fn lift(&self, mask: VoterSet) -> VoterSet {
        mask.iter().map(|k| self.blocks[k]).fold(VoterSet::EMPTY, VoterSet::union)
    }

    /// Block mask of a measurable set.
    pub fn lower(&self, set: VoterSet) -> Result<VoterSet> {
        self.check_member(set)?;
        Ok(VoterSet::from_indices((0..self.blocks.len()).filter(|&k| self.blocks[k].is_subset(set))))
    }

    pub fn contains(&self, set: VoterSet) -> bool {
        set.within(self.n) && self.blocks.iter().all(|b| b.is_disjoint(set) || b.is_subset(set))
    }

    pub fn check_member(&self, set: VoterSet) -> Result<()> {
        if self.contains(set) {
            Ok(())
        } else {
            Err(Error::NotInAlgebra(set))
        }
    }

    /// All measurable sets, in mask order of the voters.
    pub fn members(&self) -> Vec<VoterSet> {
        let mut out: Vec<_> = VoterSet::all_subsets(self.blocks.len()).map(|s| self.lift(s)).collect();
        out.sort_unstable();
        out
    }

    /// `Σ^N`: the measurable sets disjoint from `N`.
    pub fn restricted(&self, n_set: VoterSet) -> Result<Vec<VoterSet>> {
        self.check_member(n_set)?;
        Ok(self.members().into_iter().filter(|s| s.is_disjoint(n_set)).collect())
    }

    /// Measurable profiles: one order per block.
    pub fn profile_space(&self, m: usize, linear: bool) -> ProfileSpace {
        let space = ProfileSpace { m, n: self.n, linear, blocks: None };
        space.with_blocks(self.blocks.clone())
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

/// Filter axioms relative to `sigma`, plus the ultrafilter dichotomy when `ultra`.
pub fn is_filter(family: &[VoterSet], sigma: &Algebra, ultra: bool) -> Result<bool> {
    for &s in family {
        sigma.check_member(s)?;
    }
    let all = VoterSet::all(sigma.voters());
    let has = |s: VoterSet| family.contains(&s);
    let members = sigma.members();
    let upward = family.iter().all(|&k| members.iter().all(|&j| !k.is_subset(j) || has(j)));
    let meets = family.iter().all(|&k| family.iter().all(|&j| has(k.intersection(j))));
    if !(upward && has(all) && meets) {
        return Ok(false);
    }
    if ultra {
        let proper = !has(VoterSet::EMPTY);
        let dichotomy = members.iter().all(|&k| has(k) || has(k.complement(sigma.voters())));
        return Ok(proper && dichotomy);
    }
    Ok(true)
}

/// `N ↦ 𝔇N` for `N ∈ Σ`, each filter stored by its generator `G_N ⊇ N`.
///
/// `𝔡N` is then the principal filter of `G_N ∖ N` inside `Σ^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DMap {
    algebra: Algebra,
    blocks: DeltaMap,
}

impl DMap {
    /// `gens[k]` is the generator for the `k`-th measurable set in mask order of the voters.
    pub fn new(algebra: Algebra, gens: Vec<VoterSet>) -> Result<Self> {
        let members = algebra.members();
        if gens.len() != members.len() {
            return Err(Error::PartialTable { got: gens.len(), expected: members.len() });
        }
        let k = algebra.blocks().len();
        let mut table = vec![VoterSet::EMPTY; 1 << k];
        for (&n_set, &g) in members.iter().zip(&gens) {
            table[algebra.lower(n_set)?.mask() as usize] = algebra.lower(g)?;
        }
        Ok(DMap { blocks: DeltaMap::new(k, table)?, algebra })
    }

    /// The map acting on blocks the way `delta` acts on voters.
    pub fn from_block_map(algebra: Algebra, delta: DeltaMap) -> Result<Self> {
        if delta.voters() != algebra.blocks().len() {
            return Err(Error::ProfileSize { expected: algebra.blocks().len(), got: delta.voters() });
        }
        Ok(DMap { algebra, blocks: delta })
    }

    /// `G_N = δN ⊔ N` on the discrete algebra.
    pub fn from_delta(delta: &DeltaMap) -> Result<Self> {
        Self::from_block_map(Algebra::discrete(delta.voters())?, delta.clone())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// The same map written over block indices.
    pub fn block_map(&self) -> &DeltaMap {
        &self.blocks
    }

    pub fn generator(&self, n_set: VoterSet) -> Result<VoterSet> {
        let lowered = self.algebra.lower(n_set)?;
        Ok(self.algebra.lift(self.blocks.get(lowered)))
    }

    /// `(N, G_N)` for every measurable `N`, in mask order of the voters.
    pub fn entries(&self) -> Vec<(VoterSet, VoterSet)> {
        self.algebra.members().into_iter().map(|s| (s, self.generator(s).expect("member of the algebra"))).collect()
    }

    /// The filter `𝔡N ⊆ Σ^N` as an explicit family.
    pub fn decisive_family(&self, n_set: VoterSet) -> Result<Vec<VoterSet>> {
        let small = self.generator(n_set)?.difference(n_set);
        Ok(self.algebra.restricted(n_set)?.into_iter().filter(|k| small.is_subset(*k)).collect())
    }

    /// `G_N ⊇ N`, and `M ⊆ N` implies `G_M ⊆ G_N`.
    pub fn check_monotone(&self) -> Result<()> {
        match self.blocks.monotonicity_violation() {
            None => Ok(()),
            Some((n_set, m_set)) => {
                Err(Error::DeltaNotMonotone { n_set: self.algebra.lift(n_set), m_set: self.algebra.lift(m_set) })
            }
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.blocks.is_minimal()
    }

    /// `a ≽ b` iff some measurable `N` has `a ~_N b` and `a ≻_{G_N ∖ N} b`.
    pub fn decides(&self, sig: &PairSignature) -> bool {
        let indiff = sig.indifferent();
        let strict = sig.strict_ab();
        let inside = VoterSet::from_indices(
            (0..self.algebra.blocks().len()).filter(|&k| self.algebra.blocks()[k].is_subset(indiff)),
        );
        inside.subsets().any(|n| {
            let small = self.algebra.lift(self.blocks.small(n));
            small.is_subset(strict)
        })
    }
}

/// The coalition-filter map of a rule verified on the measurable profiles of `algebra`.
pub fn extract_dmap<R: VotingRule>(rule: &ArrovianRule<R>, algebra: &Algebra) -> Result<DMap> {
    let space = rule.space();
    let matches = match &space.blocks {
        Some(b) => Algebra::from_partition(space.n, b.clone())? == *algebra,
        None => algebra.is_discrete() && algebra.voters() == space.n,
    };
    if !matches {
        return Err(Error::Inconsistent(format!("rule was verified on a different profile space than {algebra}")));
    }
    let gens = algebra
        .members()
        .into_iter()
        .map(|n_set| Ok(rule.minimal_decisive(n_set, false)?.union(n_set)))
        .collect::<Result<Vec<_>>>()?;
    let dmap = DMap::new(algebra.clone(), gens)?;
    if !dmap.is_minimal() {
        return Err(Error::Inconsistent("extracted map violates monotonicity or minimality".into()));
    }
    Ok(dmap)
}

/// Every map over `algebra` satisfying monotonicity and minimality.
pub fn enumerate_dmaps(algebra: &Algebra) -> Result<Vec<DMap>> {
    enumerate_delta_maps(algebra.blocks().len(), true)?
        .into_iter()
        .map(|d| DMap::from_block_map(algebra.clone(), d))
        .collect()
}
