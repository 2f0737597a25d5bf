//! Decisive coalitions, coalition maps and the filter of decisive sets.
//!
//! A coalition `K` is decisive relative to `N` when `a ~ b` on `N` and
//! `a ≻ b` on `K` force `a ≽ b`. For an arrovian rule a single worst-case
//! profile settles the question; [`ArrovianRule::is_decisive_exhaustive`]
//! keeps the direct quantification around as a cross-check.

use std::fmt;

use crate::axioms::{check_axioms, AxiomKind};
use crate::error::{Error, Result};
use crate::profiles::{worst_case_profile, ProfileSpace, VoterSet};
use crate::relations::Alt;
use crate::rules::VotingRule;

/// Largest society size for coalition maps (the table has `2^n` rows).
pub const MAX_DELTA_VOTERS: usize = 10;

/// A total map `N ↦ ΔN` on the subsets of `{1..n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DeltaMap {
    n: usize,
    table: Vec<VoterSet>,
    minimal: bool,
}

impl fmt::Debug for DeltaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(VoterSet::all_subsets(self.n).zip(&self.table)).finish()
    }
}

impl DeltaMap {
    /// `table[mask]` is the image of the subset with that mask.
    pub fn new(n: usize, table: Vec<VoterSet>) -> Result<Self> {
        if n > MAX_DELTA_VOTERS {
            return Err(Error::VoterCount { n, max: MAX_DELTA_VOTERS });
        }
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::PartialTable { got: table.len(), expected });
        }
        for s in &table {
            s.check_within(n)?;
        }
        let mut map = DeltaMap { n, table, minimal: false };
        map.minimal = map.monotonicity_violation().is_none() && map.minimality_violation().is_none();
        Ok(map)
    }

    pub fn from_fn(n: usize, f: impl FnMut(VoterSet) -> VoterSet) -> Result<Self> {
        if n > MAX_DELTA_VOTERS {
            return Err(Error::VoterCount { n, max: MAX_DELTA_VOTERS });
        }
        Self::new(n, VoterSet::all_subsets(n).map(f).collect())
    }

    pub fn voters(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[VoterSet] {
        &self.table
    }

    /// `ΔN`
    #[inline]
    pub fn get(&self, n_set: VoterSet) -> VoterSet {
        self.table[n_set.mask() as usize]
    }

    /// `δN = ΔN ∖ N`
    #[inline]
    pub fn small(&self, n_set: VoterSet) -> VoterSet {
        self.get(n_set).difference(n_set)
    }

    /// Satisfies both monotonicity and minimality.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// First `(N, M)` with `M ⊆ N` and `ΔM ⊄ ΔN`, or `(N, N)` when `N ⊄ ΔN`.
    pub fn monotonicity_violation(&self) -> Option<(VoterSet, VoterSet)> {
        for n_set in VoterSet::all_subsets(self.n) {
            if !n_set.is_subset(self.get(n_set)) {
                return Some((n_set, n_set));
            }
            for m_set in n_set.subsets() {
                if !self.get(m_set).is_subset(self.get(n_set)) {
                    return Some((n_set, m_set));
                }
            }
        }
        None
    }

    /// First disjoint `(N, M)` with `ΔN ∩ M = ∅` but `Δ(N ⊔ M) ≠ ΔN ⊔ M`.
    pub fn minimality_violation(&self) -> Option<(VoterSet, VoterSet)> {
        self.disjoint_violation(|lhs, rhs| lhs == rhs)
    }

    /// As [`Self::minimality_violation`] with `⊆` in place of `=`.
    pub fn weak_minimality_violation(&self) -> Option<(VoterSet, VoterSet)> {
        self.disjoint_violation(|lhs, rhs| lhs.is_subset(rhs))
    }

    fn disjoint_violation(&self, ok: impl Fn(VoterSet, VoterSet) -> bool) -> Option<(VoterSet, VoterSet)> {
        let all = VoterSet::all(self.n);
        for n_set in VoterSet::all_subsets(self.n) {
            for m_set in all.difference(n_set).subsets() {
                let image = self.get(n_set);
                if image.is_disjoint(m_set) && !ok(self.get(n_set.union(m_set)), image.union(m_set)) {
                    return Some((n_set, m_set));
                }
            }
        }
        None
    }
}

/// An upward-closed, intersection-closed family of subsets of `{1..n}` containing `{1..n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFilter {
    n: usize,
    members: Vec<VoterSet>,
}

impl fmt::Debug for SetFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.members).finish()
    }
}

impl SetFilter {
    /// Validates the filter axioms on `2^I`.
    pub fn new(n: usize, mut members: Vec<VoterSet>) -> Result<Self> {
        if n > MAX_DELTA_VOTERS {
            return Err(Error::VoterCount { n, max: MAX_DELTA_VOTERS });
        }
        for s in &members {
            s.check_within(n)?;
        }
        members.sort_unstable();
        members.dedup();
        let all = VoterSet::all(n);
        let has = |s: VoterSet| members.binary_search(&s).is_ok();
        if !has(all) {
            return Err(Error::NotFilter(format!("{all} is missing")));
        }
        for &k in &members {
            if let Some(j) = VoterSet::all_subsets(n).find(|&j| k.is_subset(j) && !has(j)) {
                return Err(Error::NotFilter(format!("{k} is a member but its superset {j} is not")));
            }
            if let Some(&j) = members.iter().find(|&&j| !has(k.intersection(j))) {
                return Err(Error::NotFilter(format!("{k} ∩ {j} is not a member")));
            }
        }
        Ok(SetFilter { n, members })
    }

    /// `(K)`: all supersets of `generator`.
    pub fn principal(n: usize, generator: VoterSet) -> Result<Self> {
        generator.check_within(n)?;
        let members = VoterSet::all_subsets(n).filter(|&j| generator.is_subset(j)).collect();
        Self::new(n, members)
    }

    pub fn voters(&self) -> usize {
        self.n
    }

    /// Members in ascending mask order.
    pub fn members(&self) -> &[VoterSet] {
        &self.members
    }

    pub fn contains(&self, set: VoterSet) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    /// Intersection of all members; on a finite set this generates the filter.
    pub fn generator(&self) -> VoterSet {
        self.members.iter().fold(VoterSet::all(self.n), |acc, &s| acc.intersection(s))
    }

    /// The generator, if the filter is the principal filter it generates.
    pub fn principal_generator(&self) -> Option<VoterSet> {
        let g = self.generator();
        self.contains(g).then_some(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.contains(VoterSet::EMPTY)
    }

    /// Proper, and contains every set or its complement.
    pub fn is_ultra(&self) -> bool {
        !self.is_trivial()
            && VoterSet::all_subsets(self.n).all(|k| self.contains(k) || self.contains(k.complement(self.n)))
    }
}

/// A rule that passed exhaustive Unanimity and IIA checks on its profile space.
///
/// All decisiveness machinery lives here: the worst-case shortcut is only
/// sound for rules that are known to be arrovian.
pub struct ArrovianRule<R> {
    rule: R,
    space: ProfileSpace,
}

impl<R: VotingRule> ArrovianRule<R> {
    pub fn verify(rule: R, space: ProfileSpace) -> Result<Self> {
        if space.m < 3 {
            return Err(Error::NotArrovian(format!("needs at least 3 alternatives, got {}", space.m)));
        }
        let reports = check_axioms(&rule, &[AxiomKind::Unanimity, AxiomKind::Iia], &space)?;
        if let Some(r) = reports.iter().find(|r| !r.holds) {
            return Err(Error::NotArrovian(format!("{} fails", r.kind)));
        }
        Ok(ArrovianRule { rule, space })
    }

    pub fn rule(&self) -> &R {
        &self.rule
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn voters(&self) -> usize {
        self.space.n
    }

    fn check_sets(&self, k_set: VoterSet, n_set: VoterSet) -> Result<()> {
        k_set.check_within(self.space.n)?;
        n_set.check_within(self.space.n)?;
        if !k_set.is_disjoint(n_set) {
            return Err(Error::Overlap { left: k_set, right: n_set });
        }
        if let Some(blocks) = &self.space.blocks {
            for s in [k_set, n_set] {
                if blocks.iter().any(|b| !b.is_disjoint(s) && !b.is_subset(s)) {
                    return Err(Error::NotInAlgebra(s));
                }
            }
        }
        Ok(())
    }

    /// Whether `k_set` is (strongly) decisive relative to `n_set`, by the worst-case profile for `(a, b)`.
    pub fn is_decisive(&self, k_set: VoterSet, n_set: VoterSet, strong: bool) -> Result<bool> {
        self.check_sets(k_set, n_set)?;
        let (a, b) = (Alt(0), Alt(1));
        let pr = worst_case_profile(self.space.m, self.space.n, a, b, n_set, k_set, strong)?;
        Ok(self.rule.evaluate(&pr)?.weakly_prefers(a.0, b.0))
    }

    /// Decisiveness by direct quantification over every profile of the space and every pair.
    pub fn is_decisive_exhaustive(&self, k_set: VoterSet, n_set: VoterSet, strong: bool) -> Result<bool> {
        self.check_sets(k_set, n_set)?;
        let m = self.space.m;
        for pr in self.space.iter()? {
            let mut out = None;
            for a in 0..m {
                for b in 0..m {
                    if a == b {
                        continue;
                    }
                    let sig = pr.sig(a, b);
                    let support = if strong { sig.weak_ab } else { sig.strict_ab() };
                    if n_set.is_subset(sig.indifferent()) && k_set.is_subset(support) {
                        let out = match out {
                            Some(o) => o,
                            None => *out.insert(self.rule.evaluate(&pr)?),
                        };
                        if !out.weakly_prefers(a, b) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// The unique minimal (strongly) decisive set relative to `n_set`.
    pub fn minimal_decisive(&self, n_set: VoterSet, strong: bool) -> Result<VoterSet> {
        let rest = n_set.complement(self.space.n);
        if !self.is_decisive(rest, n_set, strong)? {
            return Err(Error::Inconsistent(format!("{rest} is not decisive relative to {n_set}")));
        }
        let mut acc = rest;
        for k in rest.subsets() {
            if self.admissible(k) && self.is_decisive(k, n_set, strong)? {
                acc = acc.intersection(k);
            }
        }
        if !self.is_decisive(acc, n_set, strong)? {
            return Err(Error::Inconsistent(format!("intersection {acc} of decisive sets is not decisive")));
        }
        Ok(acc)
    }

    /// Sets the space can express (unions of blocks, when blocks are present).
    fn admissible(&self, s: VoterSet) -> bool {
        match &self.space.blocks {
            None => true,
            Some(blocks) => blocks.iter().all(|b| b.is_disjoint(s) || b.is_subset(s)),
        }
    }

    /// The coalition map `N ↦ δN ⊔ N` of the rule.
    pub fn extract_delta(&self) -> Result<DeltaMap> {
        if self.space.blocks.is_some() {
            return Err(Error::Inconsistent("use extract_dmap for measurable profile spaces".into()));
        }
        let n = self.space.n;
        let table = VoterSet::all_subsets(n)
            .map(|n_set| Ok(self.minimal_decisive(n_set, false)?.union(n_set)))
            .collect::<Result<Vec<_>>>()?;
        let delta = DeltaMap::new(n, table)?;
        if !delta.is_minimal() {
            return Err(Error::Inconsistent("extracted coalition map violates monotonicity or minimality".into()));
        }
        Ok(delta)
    }

    /// The family of all (strongly) decisive sets.
    pub fn decisive_filter(&self, strong: bool) -> Result<SetFilter> {
        let n = self.space.n;
        let mut members = Vec::new();
        for k in VoterSet::all_subsets(n) {
            if self.is_decisive(k, VoterSet::EMPTY, strong)? {
                members.push(k);
            }
        }
        SetFilter::new(n, members)
    }
}
