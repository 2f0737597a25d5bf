//! Voter sets, preference profiles and the constructed profiles used by the
//! decisiveness tests.
//!
//! Voters are 0-based internally and 1-based in every textual form.

use std::fmt;

use crate::error::{Error, Result};
use crate::relations::{enumerate_preorders, Alt, Permutation, Preorder};

/// Largest society size representable by a [`VoterSet`].
pub const MAX_VOTERS: usize = 16;

/// Largest number of profiles an exhaustive enumeration may produce.
pub const PROFILE_GUARD: u128 = 1_000_000;

/// A subset of voters as a bitmask: bit `i` is voter `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VoterSet(u32);

impl VoterSet {
    pub const EMPTY: VoterSet = VoterSet(0);

    pub const fn from_mask(mask: u32) -> Self {
        VoterSet(mask)
    }

    /// The whole society `{1..n}`.
    pub fn all(n: usize) -> Self {
        debug_assert!(n <= MAX_VOTERS);
        VoterSet(((1u64 << n) - 1) as u32)
    }

    /// From 0-based voter indices.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        VoterSet(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    /// From 1-based voter labels, as in the `{1,3}` notation.
    pub fn from_voters(voters: &[usize]) -> Self {
        Self::from_indices(voters.iter().map(|&v| v - 1))
    }

    pub fn singleton(index: usize) -> Self {
        VoterSet(1 << index)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: VoterSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: VoterSet) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn union(self, other: VoterSet) -> VoterSet {
        VoterSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: VoterSet) -> VoterSet {
        VoterSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: VoterSet) -> VoterSet {
        VoterSet(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> VoterSet {
        VoterSet::all(n).difference(self)
    }

    pub fn within(self, n: usize) -> bool {
        self.is_subset(VoterSet::all(n))
    }

    pub fn check_within(self, n: usize) -> Result<()> {
        if self.within(n) {
            Ok(())
        } else {
            Err(Error::VoterOutOfRange { set: self, n })
        }
    }

    /// 0-based member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// Every subset of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = VoterSet> {
        // standard submask walk, reversed into ascending order
        let full = self.0;
        let mut subs = Vec::with_capacity(1 << self.len());
        let mut s = full;
        loop {
            subs.push(VoterSet(s));
            if s == 0 {
                break;
            }
            s = (s - 1) & full;
        }
        subs.into_iter().rev()
    }

    /// All subsets of `{1..n}` in mask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = VoterSet> {
        (0..1u32 << n).map(VoterSet)
    }
}

impl fmt::Display for VoterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VoterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One preorder per voter, all on the same alternatives.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    m: usize,
    orders: Vec<Preorder>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.orders).finish()
    }
}

impl Profile {
    /// An empty society still needs to know its alternatives.
    pub fn new(m: usize, orders: Vec<Preorder>) -> Result<Self> {
        if orders.len() > MAX_VOTERS {
            return Err(Error::VoterCount { n: orders.len(), max: MAX_VOTERS });
        }
        if let Some(p) = orders.iter().find(|p| p.alternatives() != m) {
            return Err(Error::MixedAlternatives { left: m, right: p.alternatives() });
        }
        Ok(Profile { m, orders })
    }

    pub fn from_orders(orders: Vec<Preorder>) -> Result<Self> {
        let m = orders.first().map(Preorder::alternatives).ok_or(Error::ProfileSize { expected: 1, got: 0 })?;
        Self::new(m, orders)
    }

    pub fn alternatives(&self) -> usize {
        self.m
    }

    pub fn voters(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[Preorder] {
        &self.orders
    }

    pub fn order(&self, voter: usize) -> &Preorder {
        &self.orders[voter]
    }

    /// Fast signature without index checks.
    #[inline]
    pub(crate) fn sig(&self, a: usize, b: usize) -> PairSignature {
        let mut ab = 0u32;
        let mut ba = 0u32;
        for (i, p) in self.orders.iter().enumerate() {
            if p.weakly_prefers(a, b) {
                ab |= 1 << i;
            }
            if p.weakly_prefers(b, a) {
                ba |= 1 << i;
            }
        }
        PairSignature { n: self.voters(), weak_ab: VoterSet(ab), weak_ba: VoterSet(ba) }
    }

    /// The sets `{i : a ≽_i b}` and `{i : b ≽_i a}`.
    pub fn signature(&self, a: Alt, b: Alt) -> Result<PairSignature> {
        for x in [a, b] {
            if x.0 >= self.m {
                return Err(Error::AlternativeIndex { index: x.0, m: self.m });
            }
        }
        if a == b {
            return Err(Error::SamePair(a.0));
        }
        Ok(self.sig(a.0, b.0))
    }

    /// `ρ*` applied to every voter.
    pub fn permute_alternatives(&self, rho: &Permutation) -> Result<Profile> {
        let orders = self.orders.iter().map(|p| p.permuted(rho)).collect::<Result<_>>()?;
        Ok(Profile { m: self.m, orders })
    }

    /// Voter `i` of the result holds the order of voter `σ(i)`.
    pub fn permute_voters(&self, sigma: &Permutation) -> Result<Profile> {
        if sigma.len() != self.voters() {
            return Err(Error::ProfileSize { expected: self.voters(), got: sigma.len() });
        }
        let orders = (0..self.voters()).map(|i| self.orders[sigma.apply(i)]).collect();
        Ok(Profile { m: self.m, orders })
    }

    /// Drops the voters in `set`, keeping the others in index order.
    pub fn restrict_away(&self, set: VoterSet) -> Profile {
        let orders = self.orders.iter().enumerate().filter(|(i, _)| !set.contains(*i)).map(|(_, p)| *p).collect();
        Profile { m: self.m, orders }
    }

    /// Whether the orders of the voters in `set` coincide with those of `other`.
    pub fn agrees_on(&self, other: &Profile, set: VoterSet) -> bool {
        set.iter().all(|i| self.orders[i] == other.orders[i])
    }

    pub fn is_linear(&self) -> bool {
        self.orders.iter().all(Preorder::is_complete)
    }
}

/// The pairwise stance of a profile on an ordered pair `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairSignature {
    pub n: usize,
    /// Voters with `a ≽_i b`.
    pub weak_ab: VoterSet,
    /// Voters with `b ≽_i a`.
    pub weak_ba: VoterSet,
}

impl PairSignature {
    pub fn indifferent(&self) -> VoterSet {
        self.weak_ab.intersection(self.weak_ba)
    }

    /// Voters with `a ≻_i b`.
    pub fn strict_ab(&self) -> VoterSet {
        self.weak_ab.difference(self.weak_ba)
    }

    /// Voters with `b ≻_i a`.
    pub fn strict_ba(&self) -> VoterSet {
        self.weak_ba.difference(self.weak_ab)
    }

    pub fn incomparable(&self) -> VoterSet {
        self.weak_ab.union(self.weak_ba).complement(self.n)
    }

    /// The signature of the reversed pair `(b, a)`.
    pub fn reversed(&self) -> PairSignature {
        PairSignature { n: self.n, weak_ab: self.weak_ba, weak_ba: self.weak_ab }
    }
}

/// The worst-case profile for testing whether `k_set` is (strongly) decisive relative to `n_set`.
///
/// Every voter holds a complete preorder. Voters in `n_set` have `a ~ b`,
/// voters in `k_set` have `a ≻ b` (or `a ~ b` when `strong`), all others
/// `a ≺ b`. The remaining alternatives sit below both `a` and `b`, one per
/// level, in index order.
pub fn worst_case_profile(
    m: usize,
    n: usize,
    a: Alt,
    b: Alt,
    n_set: VoterSet,
    k_set: VoterSet,
    strong: bool,
) -> Result<Profile> {
    if m < 2 {
        return Err(Error::AlternativeCount { m, max: crate::relations::MAX_ALTERNATIVES });
    }
    if n > MAX_VOTERS {
        return Err(Error::VoterCount { n, max: MAX_VOTERS });
    }
    for x in [a, b] {
        if x.0 >= m {
            return Err(Error::AlternativeIndex { index: x.0, m });
        }
    }
    if a == b {
        return Err(Error::SamePair(a.0));
    }
    n_set.check_within(n)?;
    k_set.check_within(n)?;
    if !n_set.is_disjoint(k_set) {
        return Err(Error::Overlap { left: n_set, right: k_set });
    }
    let mut ranks = vec![0usize; m];
    let mut next = 2;
    for (x, r) in ranks.iter_mut().enumerate() {
        if x != a.0 && x != b.0 {
            *r = next;
            next += 1;
        }
    }
    let orders = (0..n)
        .map(|i| {
            let (ra, rb) = if n_set.contains(i) || (strong && k_set.contains(i)) {
                (0, 0)
            } else if k_set.contains(i) {
                (0, 1)
            } else {
                (1, 0)
            };
            ranks[a.0] = ra;
            ranks[b.0] = rb;
            Preorder::from_ranks(&ranks)
        })
        .collect::<Result<Vec<_>>>()?;
    Profile::new(m, orders)
}

/// Inserts `A × A` for the voters of `set`, placing the given orders at the other positions.
pub fn extend_with_indifference(pr: &Profile, set: VoterSet, n: usize) -> Result<Profile> {
    if n > MAX_VOTERS {
        return Err(Error::VoterCount { n, max: MAX_VOTERS });
    }
    set.check_within(n)?;
    let expected = n - set.len();
    if pr.voters() != expected {
        return Err(Error::ProfileSize { expected, got: pr.voters() });
    }
    let full = Preorder::full(pr.alternatives())?;
    let mut rest = pr.orders.iter();
    let orders = (0..n).map(|i| if set.contains(i) { full } else { *rest.next().expect("size checked") }).collect();
    Ok(Profile { m: pr.alternatives(), orders })
}

/// A finite space of profiles to quantify over.
///
/// With `blocks`, voters of the same block share one order; this is exactly
/// the set of profiles measurable for the algebra generated by the blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSpace {
    pub m: usize,
    pub n: usize,
    pub linear: bool,
    pub blocks: Option<Vec<VoterSet>>,
}

impl ProfileSpace {
    pub fn partial(m: usize, n: usize) -> Self {
        ProfileSpace { m, n, linear: false, blocks: None }
    }

    pub fn linear(m: usize, n: usize) -> Self {
        ProfileSpace { m, n, linear: true, blocks: None }
    }

    pub fn with_blocks(mut self, blocks: Vec<VoterSet>) -> Self {
        self.blocks = Some(blocks);
        self
    }

    fn free_positions(&self) -> usize {
        self.blocks.as_ref().map_or(self.n, Vec::len)
    }

    /// Number of profiles, or a guard error.
    pub fn count(&self) -> Result<u128> {
        let base = enumerate_preorders(self.m, self.linear)?.len() as u128;
        let count = base.checked_pow(self.free_positions() as u32).unwrap_or(u128::MAX);
        if count > PROFILE_GUARD {
            return Err(Error::Guard { count, limit: PROFILE_GUARD });
        }
        Ok(count)
    }

    pub fn iter(&self) -> Result<ProfileIter> {
        self.count()?;
        if self.n > MAX_VOTERS {
            return Err(Error::VoterCount { n: self.n, max: MAX_VOTERS });
        }
        let base = enumerate_preorders(self.m, self.linear)?;
        let owner = match &self.blocks {
            None => (0..self.n).collect(),
            Some(blocks) => {
                let mut owner = vec![usize::MAX; self.n];
                for (k, b) in blocks.iter().enumerate() {
                    for i in b.iter() {
                        if i < self.n {
                            owner[i] = k;
                        }
                    }
                }
                if owner.contains(&usize::MAX) {
                    return Err(Error::NotPartition("blocks do not cover every voter".into()));
                }
                owner
            }
        };
        Ok(ProfileIter { m: self.m, base, owner, digits: vec![0; self.free_positions()], done: false })
    }
}

/// Odometer over all assignments of base orders to voters (or blocks); the last voter varies fastest.
#[derive(Debug, Clone)]
pub struct ProfileIter {
    m: usize,
    base: Vec<Preorder>,
    owner: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for ProfileIter {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        if self.done || self.base.is_empty() {
            return None;
        }
        let orders = self.owner.iter().map(|&k| self.base[self.digits[k]]).collect();
        let out = Profile { m: self.m, orders };
        let mut pos = self.digits.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < self.base.len() {
                break;
            }
            self.digits[pos] = 0;
        }
        Some(out)
    }
}

/// All `n`-tuples of preorders on `m` alternatives.
pub fn enumerate_profiles(m: usize, n: usize, linear_only: bool) -> Result<ProfileIter> {
    ProfileSpace { m, n, linear: linear_only, blocks: None }.iter()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::PairState;

    #[test]
    fn voter_set_display_and_algebra() {
        assert_eq!(VoterSet::EMPTY.to_string(), "{}");
        assert_eq!(VoterSet::from_voters(&[3, 1]).to_string(), "{1,3}");
        let s = VoterSet::from_voters(&[1, 2]);
        assert!(VoterSet::from_voters(&[2]).is_subset(s));
        assert_eq!(s.complement(3), VoterSet::from_voters(&[3]));
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(
            subs,
            vec![VoterSet::from_mask(0), VoterSet::from_mask(1), VoterSet::from_mask(2), VoterSet::from_mask(3)]
        );
        assert!(VoterSet::from_voters(&[4]).check_within(3).is_err());
    }

    #[test]
    fn signatures() {
        let full = Preorder::full(3).unwrap();
        let id = Preorder::discrete(3).unwrap();
        let pr = Profile::new(3, vec![full; 3]).unwrap();
        let s = pr.signature(Alt(0), Alt(1)).unwrap();
        assert_eq!((s.weak_ab, s.weak_ba), (VoterSet::all(3), VoterSet::all(3)));
        let pr = Profile::new(3, vec![id; 3]).unwrap();
        let s = pr.signature(Alt(0), Alt(1)).unwrap();
        assert_eq!((s.weak_ab, s.weak_ba), (VoterSet::EMPTY, VoterSet::EMPTY));
        // states (≻, ~, ∥) for (a, b)
        let strict = Preorder::from_ranks(&[0, 1, 2]).unwrap();
        let tie = Preorder::from_ranks(&[0, 0, 1]).unwrap();
        let pr = Profile::new(3, vec![strict, tie, id]).unwrap();
        let s = pr.signature(Alt(0), Alt(1)).unwrap();
        assert_eq!(s.weak_ab, VoterSet::from_voters(&[1, 2]));
        assert_eq!(s.weak_ba, VoterSet::from_voters(&[2]));
        assert_eq!(s.incomparable(), VoterSet::from_voters(&[3]));
        assert!(pr.signature(Alt(1), Alt(1)).is_err());
    }

    #[test]
    fn worst_case_profiles() {
        let (a, b) = (Alt(0), Alt(1));
        let pr = worst_case_profile(3, 1, a, b, VoterSet::EMPTY, VoterSet::from_voters(&[1]), false).unwrap();
        assert_eq!(pr.order(0).state(0, 1), PairState::StrictPref);

        let pr =
            worst_case_profile(3, 2, a, b, VoterSet::from_voters(&[1]), VoterSet::from_voters(&[2]), false).unwrap();
        assert_eq!(pr.order(0).state(0, 1), PairState::Indiff);
        assert_eq!(pr.order(1).state(0, 1), PairState::StrictPref);
        assert!(pr.is_linear());

        let pr = worst_case_profile(3, 3, a, b, VoterSet::from_voters(&[1]), VoterSet::EMPTY, true).unwrap();
        assert_eq!(pr.order(0).state(0, 1), PairState::Indiff);
        assert_eq!(pr.order(1).state(0, 1), PairState::StrictDispref);
        assert_eq!(pr.order(2).state(0, 1), PairState::StrictDispref);

        let one = VoterSet::from_voters(&[1]);
        assert!(matches!(worst_case_profile(3, 2, a, b, one, one, false), Err(Error::Overlap { .. })));
        assert!(worst_case_profile(3, 2, a, a, VoterSet::EMPTY, one, false).is_err());
    }

    #[test]
    fn extension_inserts_indifferent_voters() {
        let p = Preorder::from_ranks(&[0, 1, 2]).unwrap();
        let q = Preorder::from_ranks(&[2, 1, 0]).unwrap();
        let full = Preorder::full(3).unwrap();
        let pr = Profile::new(3, vec![p, q]).unwrap();
        assert_eq!(extend_with_indifference(&pr, VoterSet::EMPTY, 2).unwrap(), pr);
        let ext = extend_with_indifference(&pr, VoterSet::from_voters(&[2]), 3).unwrap();
        assert_eq!(ext.orders(), &[p, full, q]);
        let empty = Profile::new(3, vec![]).unwrap();
        let all = extend_with_indifference(&empty, VoterSet::all(3), 3).unwrap();
        assert_eq!(all.orders(), &[full, full, full]);
        assert!(extend_with_indifference(&pr, VoterSet::EMPTY, 3).is_err());
    }

    #[test]
    fn profile_counts() {
        assert_eq!(enumerate_profiles(3, 1, false).unwrap().count(), 29);
        assert_eq!(enumerate_profiles(3, 2, false).unwrap().count(), 841);
        assert_eq!(enumerate_profiles(3, 3, true).unwrap().count(), 2197);
        assert!(matches!(enumerate_profiles(3, 5, false), Err(Error::Guard { .. })));
        let blocks = vec![VoterSet::from_voters(&[1, 2]), VoterSet::from_voters(&[3])];
        let space = ProfileSpace::partial(3, 3).with_blocks(blocks);
        let all: Vec<_> = space.iter().unwrap().collect();
        assert_eq!(all.len(), 841);
        assert!(all.iter().all(|p| p.order(0) == p.order(1)));
    }
}
