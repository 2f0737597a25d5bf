//! Classification of arrovian rules by their coalition maps.

use std::fmt;
use std::fmt::Write as _;

use crate::decisive::{ArrovianRule, DeltaMap};
use crate::error::{Error, Result};
use crate::profiles::{PairSignature, Profile, ProfileSpace, VoterSet};
use crate::relations::Preorder;
use crate::rules::{RuleSpec, VotingRule};

/// Largest society for which coalition maps are enumerated.
pub const MAX_ENUMERATED_VOTERS: usize = 4;

/// Upper bound on the number of maps a single enumeration may return.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

/// A strictly ascending chain `J₁ ⊂ … ⊂ J_ℓ` of non-empty coalitions. May be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Chain(Vec<VoterSet>);

impl Chain {
    pub fn new(members: Vec<VoterSet>) -> Result<Self> {
        if members.first().is_some_and(|j| j.is_empty()) {
            return Err(Error::InvalidChain("members must be non-empty".into()));
        }
        for w in members.windows(2) {
            if !(w[0].is_subset(w[1]) && w[0] != w[1]) {
                return Err(Error::InvalidChain(format!("{} is not a proper subset of {}", w[0], w[1])));
            }
        }
        Ok(Chain(members))
    }

    /// Initial segments `{π₁} ⊂ {π₁,π₂} ⊂ …` of a sequence of 0-based voters.
    pub fn from_sequence(seq: &[usize]) -> Result<Self> {
        let mut acc = VoterSet::EMPTY;
        let mut members = Vec::with_capacity(seq.len());
        for &i in seq {
            let next = acc.union(VoterSet::singleton(i));
            if next == acc {
                return Err(Error::InvalidSequence(format!("voter {} repeats", i + 1)));
            }
            acc = next;
            members.push(acc);
        }
        Chain::new(members)
    }

    pub fn members(&self) -> &[VoterSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `J_λ` with `J₀ = ∅` and `J_λ = J_ℓ` beyond the end.
    pub fn level(&self, lambda: usize) -> VoterSet {
        match lambda {
            0 => VoterSet::EMPTY,
            _ => self.0.get(lambda - 1).or(self.0.last()).copied().unwrap_or(VoterSet::EMPTY),
        }
    }

    /// The top member `J_ℓ`, or `∅` for the empty chain.
    pub fn top(&self) -> VoterSet {
        self.level(self.0.len())
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        self.0.iter().try_for_each(|j| j.check_within(n))
    }

    /// Every step except possibly the last adds a single voter.
    pub fn is_unit_stepped(&self) -> bool {
        (1..self.0.len()).all(|lambda| self.level(lambda).difference(self.level(lambda - 1)).len() == 1)
    }

    /// All chains of non-empty subsets of `{1..n}`, shortest first.
    pub fn all(n: usize) -> Vec<Chain> {
        fn grow(n: usize, cur: &mut Vec<VoterSet>, out: &mut Vec<Chain>) {
            out.push(Chain(cur.clone()));
            let last = cur.last().copied().unwrap_or(VoterSet::EMPTY);
            for next in VoterSet::all_subsets(n) {
                if last.is_subset(next) && last != next {
                    cur.push(next);
                    grow(n, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        grow(n, &mut Vec::new(), &mut out);
        out.sort_by_key(|c| c.len());
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("<")?;
            }
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    Monotonicity,
    Minimality,
    WeakMinimality,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Monotonicity => "(1)",
            Condition::Minimality => "(2)",
            Condition::WeakMinimality => "(2')",
        })
    }
}

/// A failing instance: for `(1)` the pair `M ⊆ N` is `(n_set, m_set)`; for `(2)`
/// and `(2')` it is the disjoint pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub n_set: VoterSet,
    pub m_set: VoterSet,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at N={} M={}", self.condition, self.n_set, self.m_set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub cond1: bool,
    pub cond2: bool,
    pub cond2prime: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.cond1 && self.cond2
    }
}

pub fn validate_delta(delta: &DeltaMap) -> ValidationReport {
    let mut violations = Vec::new();
    let mut note = |condition, hit: Option<(VoterSet, VoterSet)>| match hit {
        Some((n_set, m_set)) => {
            violations.push(Violation { condition, n_set, m_set });
            false
        }
        None => true,
    };
    let cond1 = note(Condition::Monotonicity, delta.monotonicity_violation());
    let cond2 = note(Condition::Minimality, delta.minimality_violation());
    let cond2prime = note(Condition::WeakMinimality, delta.weak_minimality_violation());
    ValidationReport { cond1, cond2, cond2prime, violations }
}

/// All maps satisfying (1), and (2) if asked, in lexicographic order of their tables.
pub fn enumerate_delta_maps(n: usize, require_cond2: bool) -> Result<Vec<DeltaMap>> {
    if n > MAX_ENUMERATED_VOTERS {
        return Err(Error::VoterCount { n, max: MAX_ENUMERATED_VOTERS });
    }
    let mut search = Search { n, require_cond2, table: vec![VoterSet::EMPTY; 1 << n], out: Vec::new() };
    search.run(0)?;
    search.out.into_iter().map(|t| DeltaMap::new(n, t)).collect()
}

struct Search {
    n: usize,
    require_cond2: bool,
    table: Vec<VoterSet>,
    out: Vec<Vec<VoterSet>>,
}

impl Search {
    // Subsets of N precede N in mask order, so every constraint between N and
    // smaller sets can be settled when N is assigned.
    fn run(&mut self, mask: usize) -> Result<()> {
        if mask == self.table.len() {
            if self.out.len() as u128 >= ENUMERATION_GUARD {
                return Err(Error::Guard { count: self.out.len() as u128 + 1, limit: ENUMERATION_GUARD });
            }
            self.out.push(self.table.clone());
            return Ok(());
        }
        let n_set = VoterSet::from_mask(mask as u32);
        let lower = n_set.iter().map(|i| self.table[mask & !(1 << i)]).fold(n_set, VoterSet::union);
        let mut forced = None;
        if self.require_cond2 {
            for m_set in n_set.subsets().filter(|m| !m.is_empty()) {
                let image = self.table[n_set.difference(m_set).mask() as usize];
                if image.is_disjoint(m_set) {
                    let value = image.union(m_set);
                    match forced {
                        Some(f) if f != value => return Ok(()),
                        _ => forced = Some(value),
                    }
                }
            }
        }
        match forced {
            Some(value) => {
                if lower.is_subset(value) {
                    self.table[mask] = value;
                    self.run(mask + 1)?;
                }
            }
            None => {
                for extra in lower.complement(self.n).subsets() {
                    self.table[mask] = lower.union(extra);
                    self.run(mask + 1)?;
                }
            }
        }
        Ok(())
    }
}

fn require_valid(delta: &DeltaMap) -> Result<()> {
    let report = validate_delta(delta);
    match report.violations.first() {
        Some(v) if !report.is_valid() => Err(Error::Inconsistent(v.to_string())),
        _ => Ok(()),
    }
}

/// Whether extracting the coalition map of `C_Δ` gives back `Δ`, on `m` alternatives.
pub fn round_trip_in(delta: &DeltaMap, space: ProfileSpace) -> Result<bool> {
    require_valid(delta)?;
    let rule = ArrovianRule::verify(RuleSpec::delta(delta.clone())?, space)?;
    Ok(rule.extract_delta()? == *delta)
}

pub fn round_trip(delta: &DeltaMap) -> Result<bool> {
    round_trip_in(delta, ProfileSpace::partial(3, delta.voters()))
}

/// `J₁ = Δ∅`, `J_{λ+1} = ΔJ_λ`, up to the fixpoint.
pub fn chain_of(delta: &DeltaMap) -> Chain {
    let mut members = Vec::new();
    let mut cur = VoterSet::EMPTY;
    loop {
        let next = delta.get(cur);
        if next == cur {
            break;
        }
        members.push(next);
        cur = next;
    }
    Chain(members)
}

/// `δN` of the lexicographic rule of `chain`, by closed form.
pub fn lex_small(chain: &Chain, n_set: VoterSet) -> VoterSet {
    match chain.members().iter().find(|j| !j.is_subset(n_set)) {
        Some(j) => j.difference(n_set),
        None => VoterSet::EMPTY,
    }
}

/// `δ'N` of the strong lexicographic rule of `chain`, by closed form.
pub fn strong_lex_small(chain: &Chain, n_set: VoterSet) -> VoterSet {
    if chain.top().is_subset(n_set) {
        return VoterSet::EMPTY;
    }
    let lambda = (0..=chain.len())
        .find(|&l| chain.level(l + 1).intersection(n_set).is_subset(chain.level(l)))
        .unwrap_or(chain.len());
    chain.level(lambda + 1).difference(n_set)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichReport {
    pub chain: Chain,
    /// `Lex'_Ω ⊆ C` on every profile.
    pub lower: bool,
    /// `C ⊆ Lex_Ω` on every profile.
    pub upper: bool,
    /// Some profile where `Lex'_Ω(P) ⊊ C(P)`.
    pub lower_strict: bool,
    /// Some profile where `C(P) ⊊ Lex_Ω(P)`.
    pub upper_strict: bool,
    /// `Lex_Ω = Lex'_Ω` on every profile.
    pub lex_coincide: bool,
    /// The first profile where an inclusion fails.
    pub witness: Option<Profile>,
}

impl SandwichReport {
    /// Both inclusions hold, and the two lexicographic rules coincide exactly
    /// when every non-final step of the chain adds a single voter.
    pub fn holds(&self) -> bool {
        self.lower && self.upper && self.lex_coincide == self.chain.is_unit_stepped()
    }
}

pub fn sandwich_check<R: VotingRule>(rule: &ArrovianRule<R>) -> Result<SandwichReport> {
    let n = rule.voters();
    let chain = chain_of(&rule.extract_delta()?);
    let lex = RuleSpec::lex(n, chain.clone())?;
    let strong = RuleSpec::strong_lex(n, chain.clone())?;
    let mut report = SandwichReport {
        chain,
        lower: true,
        upper: true,
        lower_strict: false,
        upper_strict: false,
        lex_coincide: true,
        witness: None,
    };
    for pr in rule.space().iter()? {
        let c = rule.rule().evaluate(&pr)?;
        let lo = strong.evaluate(&pr)?;
        let hi = lex.evaluate(&pr)?;
        let lower = lo.is_subrelation(&c)?;
        let upper = c.is_subrelation(&hi)?;
        if !(lower && upper) && report.witness.is_none() {
            report.witness = Some(pr.clone());
        }
        report.lower &= lower;
        report.upper &= upper;
        report.lower_strict |= lower && lo != c;
        report.upper_strict |= upper && c != hi;
        report.lex_coincide &= lo == hi;
    }
    Ok(report)
}

/// `π` (0-based) such that `C_Δ = Lex_π`, when every `δN` has at most one member.
pub fn classify_linear_range(delta: &DeltaMap) -> Result<Option<Vec<usize>>> {
    require_valid(delta)?;
    if VoterSet::all_subsets(delta.voters()).any(|n_set| delta.small(n_set).len() > 1) {
        return Ok(None);
    }
    let mut seq = Vec::new();
    let mut cur = VoterSet::EMPTY;
    loop {
        let d = delta.small(cur);
        let Some(k) = d.iter().next() else { break };
        seq.push(k);
        cur = cur.union(d);
    }
    Ok(Some(seq))
}

/// Whether the rule sends every linear profile on `m` alternatives to a linear preorder.
pub fn maps_linear_to_linear<R: VotingRule>(rule: &R, m: usize) -> Result<bool> {
    for pr in ProfileSpace::linear(m, rule.voters()).iter()? {
        if !rule.evaluate(&pr)?.is_complete() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn agree_on<R: VotingRule, S: VotingRule>(left: &R, right: &S, space: &ProfileSpace) -> Result<bool> {
    for pr in space.iter()? {
        if left.evaluate(&pr)? != right.evaluate(&pr)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The coalition map of the unique arrovian rule on all profiles that extends
/// a rule verified on linear profiles.
pub fn extend_from_linear<R: VotingRule>(rule: &ArrovianRule<R>) -> Result<DeltaMap> {
    let space = rule.space();
    if !space.linear || space.blocks.is_some() {
        return Err(Error::Inconsistent("extension starts from a rule on linear profiles".into()));
    }
    let delta = rule.extract_delta()?;
    if !agree_on(&RuleSpec::delta(delta.clone())?, rule.rule(), space)? {
        return Err(Error::Inconsistent("extracted map does not restrict to the given rule".into()));
    }
    if delta.voters() <= MAX_ENUMERATED_VOTERS {
        for other in enumerate_delta_maps(delta.voters(), true)? {
            if other != delta && agree_on(&RuleSpec::delta(other.clone())?, rule.rule(), space)? {
                return Err(Error::Inconsistent(format!(
                    "two coalition maps restrict to the rule: {delta:?} and {other:?}"
                )));
            }
        }
    }
    Ok(delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleInclusion {
    /// `C_Δ ⊆ C_Δ'` strictly.
    Subset,
    /// `C_Δ ⊇ C_Δ'` strictly.
    Superset,
    Equal,
    Incomparable,
}

impl fmt::Display for RuleInclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleInclusion::Subset => "subset",
            RuleInclusion::Superset => "superset",
            RuleInclusion::Equal => "equal",
            RuleInclusion::Incomparable => "incomparable",
        })
    }
}

/// Compares `C_Δ` with `C_Δ'`; larger coalition maps give smaller rules.
pub fn order_compare(delta: &DeltaMap, other: &DeltaMap) -> Result<RuleInclusion> {
    if delta.voters() != other.voters() {
        return Err(Error::ProfileSize { expected: delta.voters(), got: other.voters() });
    }
    require_valid(delta)?;
    require_valid(other)?;
    let pairs = || delta.table().iter().zip(other.table());
    let contains = pairs().all(|(d, o)| o.is_subset(*d));
    let contained = pairs().all(|(d, o)| d.is_subset(*o));
    Ok(match (contains, contained) {
        (true, true) => RuleInclusion::Equal,
        (true, false) => RuleInclusion::Subset,
        (false, true) => RuleInclusion::Superset,
        (false, false) => RuleInclusion::Incomparable,
    })
}

/// Pointwise comparison of two rules' outcomes over a profile space.
pub fn compare_outcomes<R: VotingRule, S: VotingRule>(
    left: &R,
    right: &S,
    space: &ProfileSpace,
) -> Result<RuleInclusion> {
    let (mut sub, mut sup) = (true, true);
    for pr in space.iter()? {
        let (l, r) = (left.evaluate(&pr)?, right.evaluate(&pr)?);
        sub &= l.is_subrelation(&r)?;
        sup &= r.is_subrelation(&l)?;
        if !sub && !sup {
            break;
        }
    }
    Ok(match (sub, sup) {
        (true, true) => RuleInclusion::Equal,
        (true, false) => RuleInclusion::Subset,
        (false, true) => RuleInclusion::Superset,
        (false, false) => RuleInclusion::Incomparable,
    })
}

/// How `a ≽ b` is read off a coalition map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionForm {
    /// Some `N` with `a ~_N b` and `a ≻_{δN} b`.
    Indifferent,
    /// Some `N` with `a ≽_N b` and `a ≻_{δN} b`.
    Weak,
    /// `a ≻_{δN} b` for `N` the full indifference set.
    Canonical,
}

pub fn decides(delta: &DeltaMap, form: DecisionForm, sig: &PairSignature) -> bool {
    let strict = sig.strict_ab();
    match form {
        DecisionForm::Indifferent => sig.indifferent().subsets().any(|n| delta.small(n).is_subset(strict)),
        DecisionForm::Weak => sig.weak_ab.subsets().any(|n| delta.small(n).is_subset(strict)),
        DecisionForm::Canonical => delta.small(sig.indifferent()).is_subset(strict),
    }
}

/// Evaluates `C_Δ` through the chosen reading; transitivity is checked on the way out.
pub fn eval_delta_form(delta: &DeltaMap, form: DecisionForm, pr: &Profile) -> Result<Preorder> {
    if pr.voters() != delta.voters() {
        return Err(Error::ProfileSize { expected: delta.voters(), got: pr.voters() });
    }
    Preorder::from_fn(pr.alternatives(), |a, b| a == b || decides(delta, form, &pr.sig(a, b)))
}

/// The coalition map of the three-voter example with chain `{1,2} ⊂ {1,2,3}`.
pub fn example_coalition_map() -> DeltaMap {
    let all = VoterSet::all(3);
    let v = VoterSet::from_voters;
    DeltaMap::from_fn(3, |n_set| if n_set == VoterSet::EMPTY || n_set == v(&[2]) { v(&[1, 2]) } else { all })
        .expect("three voters")
}

/// Graphviz rendering: one node per coalition, ranked by size, and an edge `N → ΔN` where they differ.
pub fn render_dot(delta: &DeltaMap) -> String {
    let n = delta.voters();
    let mut out = String::from("digraph delta {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for size in 0..=n {
        out.push_str("  { rank=same;");
        for s in VoterSet::all_subsets(n).filter(|s| s.len() == size) {
            let _ = write!(out, " \"{s}\";");
        }
        out.push_str(" }\n");
    }
    for s in VoterSet::all_subsets(n) {
        let image = delta.get(s);
        if image != s {
            let _ = writeln!(out, "  \"{s}\" -> \"{image}\";");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(voters: &[usize]) -> VoterSet {
        VoterSet::from_voters(voters)
    }

    #[test]
    fn chains() {
        assert!(Chain::new(vec![v(&[1]), v(&[1])]).is_err());
        assert!(Chain::new(vec![VoterSet::EMPTY]).is_err());
        assert!(Chain::new(vec![v(&[1]), v(&[2])]).is_err());
        let c = Chain::from_sequence(&[1, 0, 2]).unwrap();
        assert_eq!(c.to_string(), "{2}<{1,2}<{1,2,3}");
        assert_eq!(c.level(0), VoterSet::EMPTY);
        assert_eq!(c.level(7), v(&[1, 2, 3]));
        assert!(Chain::from_sequence(&[0, 0]).is_err());
        // chains on two voters: (), {1}, {2}, {1,2}, {1}<{1,2}, {2}<{1,2}
        assert_eq!(Chain::all(2).len(), 6);
    }

    #[test]
    fn validation_examples() {
        let id = DeltaMap::from_fn(3, |n| n).unwrap();
        assert!(validate_delta(&id).is_valid());
        let ex = validate_delta(&example_coalition_map());
        assert!(ex.cond1 && ex.cond2 && ex.cond2prime);
        let bad = DeltaMap::new(2, vec![v(&[1]), v(&[1]), v(&[2]), v(&[1, 2])]).unwrap();
        let report = validate_delta(&bad);
        assert!(!report.cond1);
        assert_eq!(report.violations[0].condition, Condition::Monotonicity);
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_delta_maps(1, true).unwrap().len(), 2);
        assert_eq!(enumerate_delta_maps(2, true).unwrap().len(), 6);
        assert!(enumerate_delta_maps(5, true).is_err());
        let maps = enumerate_delta_maps(2, false).unwrap();
        assert!(maps.iter().all(|d| validate_delta(d).cond1));
    }

    #[test]
    fn chain_examples() {
        assert_eq!(chain_of(&example_coalition_map()).members(), &[v(&[1, 2]), v(&[1, 2, 3])]);
        let j = v(&[1, 3]);
        let pareto = DeltaMap::from_fn(3, |n| n.union(j)).unwrap();
        assert_eq!(chain_of(&pareto).members(), &[j]);
        let lex = Chain::from_sequence(&[0, 1]).unwrap();
        let d = DeltaMap::from_fn(2, |n| lex_small(&lex, n).union(n)).unwrap();
        assert_eq!(chain_of(&d), lex);
    }

    #[test]
    fn closed_forms() {
        let c = Chain::new(vec![v(&[1]), v(&[1, 2, 3])]).unwrap();
        assert_eq!(strong_lex_small(&c, v(&[2])), v(&[1]));
        assert_eq!(strong_lex_small(&c, v(&[1])), v(&[2, 3]));
        assert_eq!(strong_lex_small(&c, v(&[1, 2, 3])), VoterSet::EMPTY);
        assert_eq!(lex_small(&c, v(&[1])), v(&[2, 3]));
        assert_eq!(lex_small(&c, v(&[2])), v(&[1]));
    }

    #[test]
    fn linear_range() {
        assert_eq!(classify_linear_range(&DeltaMap::from_fn(3, |n| n).unwrap()).unwrap(), Some(vec![]));
        let pareto = DeltaMap::from_fn(3, |n| n.union(v(&[1, 2]))).unwrap();
        assert_eq!(classify_linear_range(&pareto).unwrap(), None);
        let c = Chain::from_sequence(&[1, 0, 2]).unwrap();
        let d = DeltaMap::from_fn(3, |n| lex_small(&c, n).union(n)).unwrap();
        assert_eq!(classify_linear_range(&d).unwrap(), Some(vec![1, 0, 2]));
    }

    #[test]
    fn comparisons() {
        let id = DeltaMap::from_fn(2, |n| n).unwrap();
        let p1 = DeltaMap::from_fn(2, |n| n.union(v(&[1]))).unwrap();
        let p12 = DeltaMap::from_fn(2, |n| n.union(v(&[1, 2]))).unwrap();
        assert_eq!(order_compare(&p1, &p1).unwrap(), RuleInclusion::Equal);
        assert_eq!(order_compare(&id, &p1).unwrap(), RuleInclusion::Superset);
        assert_eq!(order_compare(&p12, &p1).unwrap(), RuleInclusion::Subset);
        assert!(order_compare(&id, &DeltaMap::from_fn(3, |n| n).unwrap()).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = render_dot(&example_coalition_map());
        assert!(dot.contains("\"{}\" -> \"{1,2}\";"));
        assert!(dot.contains("\"{2}\" -> \"{1,2}\";"));
        assert!(!dot.contains("\"{1,2,3}\" ->"));
        assert!(dot.contains("{ rank=same; \"{1,2,3}\"; }"));
    }
}
