//! Partial preorders on a finite set of alternatives.
//!
//! A [`Preorder`] stores its relation as a row-major bit code: bit `x * m + y`
//! is set iff `x ≽ y`. Strictness, indifference and incomparability are
//! always derived from the weak relation, never stored.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest number of alternatives a [`Preorder`] can hold (m² bits must fit a `u64`).
pub const MAX_ALTERNATIVES: usize = 8;

/// Largest `m` accepted by [`enumerate_preorders`].
pub const MAX_ENUMERATED_ALTERNATIVES: usize = 4;

/// An alternative, identified by its index. Displayed as `a`, `b`, `c`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alt(pub usize);

impl Alt {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Alt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match u8::try_from(self.0) {
            Ok(i) if i < 26 => write!(f, "{}", (b'a' + i) as char),
            _ => write!(f, "x{}", self.0),
        }
    }
}

/// The relation between two alternatives `x` and `y` in a preorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairState {
    /// `x ≻ y`
    StrictPref,
    /// `x ≺ y`
    StrictDispref,
    /// `x ~ y` (also the diagonal `x = y`)
    Indiff,
    /// `x ∥ y`
    Incomp,
}

impl PairState {
    pub fn symbol(self) -> &'static str {
        match self {
            PairState::StrictPref => "≻",
            PairState::StrictDispref => "≺",
            PairState::Indiff => "~",
            PairState::Incomp => "∥",
        }
    }

    /// The state seen from the other side of the pair.
    pub fn reversed(self) -> PairState {
        match self {
            PairState::StrictPref => PairState::StrictDispref,
            PairState::StrictDispref => PairState::StrictPref,
            s => s,
        }
    }
}

/// A reflexive, transitive relation on `m` alternatives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preorder {
    m: u8,
    bits: u64,
}

fn check_alternatives(m: usize) -> Result<()> {
    if m == 0 || m > MAX_ALTERNATIVES {
        return Err(Error::AlternativeCount { m, max: MAX_ALTERNATIVES });
    }
    Ok(())
}

#[inline]
fn bit(m: usize, x: usize, y: usize) -> u64 {
    1u64 << (x * m + y)
}

/// Checks reflexivity and transitivity of a row-major bit code.
pub fn is_preorder_code(m: usize, bits: u64) -> bool {
    let has = |x: usize, y: usize| bits & bit(m, x, y) != 0;
    for x in 0..m {
        if !has(x, x) {
            return false;
        }
    }
    for x in 0..m {
        for y in 0..m {
            if !has(x, y) {
                continue;
            }
            for z in 0..m {
                if has(y, z) && !has(x, z) {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether a boolean table is a partial preorder.
pub fn is_preorder(rel: &[Vec<bool>]) -> Result<bool> {
    let m = rel.len();
    if m == 0 {
        return Err(Error::AlternativeCount { m, max: MAX_ALTERNATIVES });
    }
    for (row, r) in rel.iter().enumerate() {
        if r.len() != m {
            return Err(Error::NotSquare { row, len: r.len(), expected: m });
        }
    }
    for x in 0..m {
        if !rel[x][x] {
            return Ok(false);
        }
        for y in 0..m {
            if !rel[x][y] {
                continue;
            }
            if (0..m).any(|z| rel[y][z] && !rel[x][z]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl Preorder {
    /// Builds a preorder from its row-major bit code, validating it.
    pub fn from_code(m: usize, bits: u64) -> Result<Self> {
        check_alternatives(m)?;
        let mask = if m * m == 64 { u64::MAX } else { (1u64 << (m * m)) - 1 };
        if bits & !mask != 0 || !is_preorder_code(m, bits) {
            return Err(Error::NotPreorder);
        }
        Ok(Preorder { m: m as u8, bits })
    }

    /// Builds a preorder from a square boolean table.
    pub fn from_table(rel: &[Vec<bool>]) -> Result<Self> {
        if !is_preorder(rel)? {
            return Err(Error::NotPreorder);
        }
        let m = rel.len();
        check_alternatives(m)?;
        let mut bits = 0;
        for (x, row) in rel.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                if v {
                    bits |= bit(m, x, y);
                }
            }
        }
        Ok(Preorder { m: m as u8, bits })
    }

    /// Builds a relation from a predicate `weak(x, y)` meaning `x ≽ y`.
    pub fn from_fn(m: usize, mut weak: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        check_alternatives(m)?;
        let mut bits = 0;
        for x in 0..m {
            for y in 0..m {
                if x == y || weak(x, y) {
                    bits |= bit(m, x, y);
                }
            }
        }
        if !is_preorder_code(m, bits) {
            return Err(Error::IntransitiveOutcome);
        }
        Ok(Preorder { m: m as u8, bits })
    }

    /// A complete preorder from ranks: `x ≽ y` iff `rank[x] <= rank[y]`.
    pub fn from_ranks(ranks: &[usize]) -> Result<Self> {
        Self::from_fn(ranks.len(), |x, y| ranks[x] <= ranks[y])
    }

    /// The trivial ordering `A × A`: everything indifferent.
    pub fn full(m: usize) -> Result<Self> {
        Self::from_fn(m, |_, _| true)
    }

    /// The discrete ordering: only the diagonal, all distinct pairs incomparable.
    pub fn discrete(m: usize) -> Result<Self> {
        Self::from_fn(m, |_, _| false)
    }

    pub fn alternatives(&self) -> usize {
        self.m as usize
    }

    pub fn code(&self) -> u64 {
        self.bits
    }

    /// `x ≽ y`
    #[inline]
    pub fn weakly_prefers(&self, x: usize, y: usize) -> bool {
        self.bits & bit(self.m as usize, x, y) != 0
    }

    /// `x ≻ y`
    pub fn strictly_prefers(&self, x: usize, y: usize) -> bool {
        self.weakly_prefers(x, y) && !self.weakly_prefers(y, x)
    }

    /// `x ~ y`
    pub fn indifferent(&self, x: usize, y: usize) -> bool {
        self.weakly_prefers(x, y) && self.weakly_prefers(y, x)
    }

    fn check_index(&self, x: usize) -> Result<()> {
        if x >= self.alternatives() {
            return Err(Error::AlternativeIndex { index: x, m: self.alternatives() });
        }
        Ok(())
    }

    /// The unique state of the pair `(x, y)`; `x = y` gives `Indiff`.
    pub fn pair_state(&self, x: Alt, y: Alt) -> Result<PairState> {
        self.check_index(x.0)?;
        self.check_index(y.0)?;
        Ok(self.state(x.0, y.0))
    }

    #[inline]
    pub(crate) fn state(&self, x: usize, y: usize) -> PairState {
        match (self.weakly_prefers(x, y), self.weakly_prefers(y, x)) {
            (true, true) => PairState::Indiff,
            (true, false) => PairState::StrictPref,
            (false, true) => PairState::StrictDispref,
            (false, false) => PairState::Incomp,
        }
    }

    /// Complete (linear) preorder: no incomparable pair.
    pub fn is_complete(&self) -> bool {
        let m = self.alternatives();
        (0..m).all(|x| (0..m).all(|y| self.weakly_prefers(x, y) || self.weakly_prefers(y, x)))
    }

    /// Antisymmetric: no indifference between distinct alternatives.
    pub fn is_antisymmetric(&self) -> bool {
        let m = self.alternatives();
        (0..m).all(|x| (0..m).all(|y| x == y || !self.indifferent(x, y)))
    }

    /// Inclusion of relations as sets of pairs.
    pub fn is_subrelation(&self, other: &Preorder) -> Result<bool> {
        same_m(self, other)?;
        Ok(self.bits & !other.bits == 0)
    }

    /// Relabels alternatives: the result relates `ρx` to `ρy` as `self` relates `x` to `y`.
    pub fn permuted(&self, rho: &Permutation) -> Result<Preorder> {
        let m = self.alternatives();
        if rho.len() != m {
            return Err(Error::MixedAlternatives { left: m, right: rho.len() });
        }
        let mut bits = 0;
        for x in 0..m {
            for y in 0..m {
                if self.weakly_prefers(x, y) {
                    bits |= bit(m, rho.apply(x), rho.apply(y));
                }
            }
        }
        Ok(Preorder { m: self.m, bits })
    }

    pub fn to_table(&self) -> Vec<Vec<bool>> {
        let m = self.alternatives();
        (0..m).map(|x| (0..m).map(|y| self.weakly_prefers(x, y)).collect()).collect()
    }
}

fn same_m(p: &Preorder, q: &Preorder) -> Result<()> {
    if p.m != q.m {
        return Err(Error::MixedAlternatives { left: p.m as usize, right: q.m as usize });
    }
    Ok(())
}

impl fmt::Debug for Preorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.alternatives();
        let rows = (0..m)
            .map(|x| (0..m).map(|y| if self.weakly_prefers(x, y) { '1' } else { '0' }).collect::<String>())
            .join("/");
        write!(f, "Preorder({rows})")
    }
}

/// Pointwise conjunction of preorders; always a preorder.
pub fn intersect(ps: &[Preorder]) -> Result<Preorder> {
    let (first, rest) = ps.split_first().ok_or(Error::EmptyIntersection)?;
    let mut bits = first.bits;
    for p in rest {
        same_m(first, p)?;
        bits &= p.bits;
    }
    Ok(Preorder { m: first.m, bits })
}

/// Applies a permutation of alternatives to a preorder.
pub fn apply_permutation(p: &Preorder, rho: &Permutation) -> Result<Preorder> {
    p.permuted(rho)
}

/// All preorders on `m` alternatives in ascending code order, optionally only the complete ones.
///
/// Brute-force filter over all `2^(m²)` relations.
pub fn enumerate_preorders(m: usize, linear_only: bool) -> Result<Vec<Preorder>> {
    if m == 0 || m > MAX_ENUMERATED_ALTERNATIVES {
        return Err(Error::AlternativeCount { m, max: MAX_ENUMERATED_ALTERNATIVES });
    }
    let out = (0u64..1 << (m * m))
        .filter(|&bits| is_preorder_code(m, bits))
        .map(|bits| Preorder { m: m as u8, bits })
        .filter(|p| !linear_only || p.is_complete())
        .collect();
    Ok(out)
}

/// A bijection on `0..m`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let m = image.len();
        let mut seen = vec![false; m];
        for &i in &image {
            if i >= m || seen[i] {
                return Err(Error::NotPermutation { m, detail: format!("{image:?}") });
            }
            seen[i] = true;
        }
        Ok(Permutation(image))
    }

    pub fn identity(m: usize) -> Self {
        Permutation((0..m).collect())
    }

    /// The transposition of `i` and `j`.
    pub fn swap(m: usize, i: usize, j: usize) -> Result<Self> {
        let mut image: Vec<usize> = (0..m).collect();
        if i >= m || j >= m {
            return Err(Error::NotPermutation { m, detail: format!("swap({i},{j})") });
        }
        image.swap(i, j);
        Ok(Permutation(image))
    }

    /// All `m!` permutations in lexicographic order of their image tables.
    pub fn all(m: usize) -> Vec<Permutation> {
        (0..m).permutations(m).map(Permutation).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(order: &[usize]) -> Preorder {
        // order lists alternatives from best to worst
        let mut ranks = vec![0; order.len()];
        for (r, &x) in order.iter().enumerate() {
            ranks[x] = r;
        }
        Preorder::from_ranks(&ranks).unwrap()
    }

    #[test]
    fn identity_and_full_tables_are_preorders() {
        let id: Vec<Vec<bool>> = (0..3).map(|x| (0..3).map(|y| x == y).collect()).collect();
        assert!(is_preorder(&id).unwrap());
        assert!(is_preorder(&vec![vec![true; 3]; 3]).unwrap());
    }

    #[test]
    fn intransitive_table_is_rejected() {
        // a≽b, b≽c, not a≽c
        let rel = vec![vec![true, true, false], vec![false, true, true], vec![false, false, true]];
        assert!(!is_preorder(&rel).unwrap());
        assert_eq!(Preorder::from_table(&rel), Err(Error::NotPreorder));
    }

    #[test]
    fn non_square_table_is_an_input_error() {
        let rel = vec![vec![true, true], vec![true]];
        assert!(matches!(is_preorder(&rel), Err(Error::NotSquare { row: 1, .. })));
    }

    #[test]
    fn pair_states() {
        let full = Preorder::full(3).unwrap();
        assert_eq!(full.pair_state(Alt(0), Alt(2)).unwrap(), PairState::Indiff);
        let id = Preorder::discrete(3).unwrap();
        assert_eq!(id.pair_state(Alt(0), Alt(1)).unwrap(), PairState::Incomp);
        assert_eq!(id.pair_state(Alt(1), Alt(1)).unwrap(), PairState::Indiff);
        let p = linear(&[0, 1, 2]);
        assert_eq!(p.pair_state(Alt(0), Alt(1)).unwrap(), PairState::StrictPref);
        assert_eq!(p.pair_state(Alt(2), Alt(1)).unwrap(), PairState::StrictDispref);
        assert!(p.pair_state(Alt(0), Alt(3)).is_err());
    }

    #[test]
    fn small_enumeration_counts() {
        assert_eq!(enumerate_preorders(1, false).unwrap().len(), 1);
        assert_eq!(enumerate_preorders(2, false).unwrap().len(), 4);
        assert_eq!(enumerate_preorders(2, true).unwrap().len(), 3);
        assert!(enumerate_preorders(0, false).is_err());
        assert!(enumerate_preorders(5, false).is_err());
    }

    #[test]
    fn intersection_examples() {
        let p = linear(&[0, 1, 2]);
        assert_eq!(intersect(&[p]).unwrap(), p);
        assert_eq!(intersect(&[p, Preorder::full(3).unwrap()]).unwrap(), p);
        let q = linear(&[2, 1, 0]);
        assert_eq!(intersect(&[p, q]).unwrap(), Preorder::discrete(3).unwrap());
        assert_eq!(intersect(&[]), Err(Error::EmptyIntersection));
        let small = Preorder::full(2).unwrap();
        assert!(intersect(&[p, small]).is_err());
    }

    #[test]
    fn permutation_relabels() {
        // a≻b, b∥c, a≻c
        let p = Preorder::from_fn(3, |x, y| (x, y) == (0, 1) || (x, y) == (0, 2)).unwrap();
        let swap = Permutation::swap(3, 0, 1).unwrap();
        let q = apply_permutation(&p, &swap).unwrap();
        assert_eq!(q.state(1, 0), PairState::StrictPref);
        assert_eq!(q.state(0, 2), PairState::Incomp);
        assert_eq!(q.state(1, 2), PairState::StrictPref);
        assert_eq!(apply_permutation(&p, &Permutation::identity(3)).unwrap(), p);
        let full = Preorder::full(3).unwrap();
        for rho in Permutation::all(3) {
            assert_eq!(full.permuted(&rho).unwrap(), full);
        }
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn subrelation_examples() {
        let p = linear(&[1, 0, 2]);
        assert!(p.is_subrelation(&p).unwrap());
        let id = Preorder::discrete(3).unwrap();
        assert!(id.is_subrelation(&Preorder::full(3).unwrap()).unwrap());
        assert!(!Preorder::full(2).unwrap().is_subrelation(&Preorder::discrete(2).unwrap()).unwrap());
        assert!(p.is_subrelation(&Preorder::full(2).unwrap()).is_err());
    }
}
