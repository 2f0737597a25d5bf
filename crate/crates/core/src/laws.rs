//! Structural laws of decisive coalitions, checked exhaustively on a verified rule.
//!
//! Each law is a statement about every profile of the rule's space. A failed
//! law carries a witness that can be replayed against the rule.

use std::collections::HashMap;
use std::fmt;

use crate::axioms::{check_axiom, AxiomKind};
use crate::decisive::ArrovianRule;
use crate::error::Result;
use crate::profiles::{Profile, VoterSet};
use crate::relations::Preorder;
use crate::rules::{RuleSpec, VotingRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// Voters outside a strongly decisive set never affect the outcome.
    Exclusion,
    /// Intersections of (strongly) decisive sets are (strongly) decisive.
    Intersection,
    /// Each member of the minimal decisive set can block `a ≽ b`.
    Veto,
    /// Each member of the minimal strongly decisive set can force strictness.
    Influence,
    /// `{i : a ≽_i b}` is decisive whenever `a ≽ b`; `{i : a ~_i b}` is strongly decisive whenever `a ~ b`.
    SupportingSets,
    /// `C_J ⊆ C ⊆ C_K`, with equality on either side exactly when `K = J`.
    JuntaSandwich,
    /// Non-trivial rules turn `a ≻_K b` into `a ≻ b`.
    Strictness,
    /// Strict unanimity iff `K ≠ ∅`; strong unanimity iff `J = I`.
    UnanimityCriteria,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::Exclusion,
        Law::Intersection,
        Law::Veto,
        Law::Influence,
        Law::SupportingSets,
        Law::JuntaSandwich,
        Law::Strictness,
        Law::UnanimityCriteria,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Exclusion => "exclusion",
            Law::Intersection => "intersection",
            Law::Veto => "veto",
            Law::Influence => "influence",
            Law::SupportingSets => "supporting-sets",
            Law::JuntaSandwich => "junta-sandwich",
            Law::Strictness => "strictness",
            Law::UnanimityCriteria => "unanimity-criteria",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawWitness {
    /// The law fails for the pair `(a, b)` in this profile.
    Pair { profile: Profile, a: usize, b: usize },
    /// Two profiles that should produce the same outcome but do not.
    Profiles { left: Profile, right: Profile },
    /// Two decisive sets whose intersection is not decisive.
    Sets { left: VoterSet, right: VoterSet, strong: bool },
    /// A global equivalence that fails.
    Mismatch(String),
}

impl fmt::Display for LawWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawWitness::Pair { profile, a, b } => {
                write!(f, "pair ({},{}) in profile {}", *a, *b, codes(profile))
            }
            LawWitness::Profiles { left, right } => {
                write!(f, "profiles {} and {}", codes(left), codes(right))
            }
            LawWitness::Sets { left, right, strong } => {
                let kind = if *strong { "strongly decisive" } else { "decisive" };
                write!(f, "{left} and {right} are {kind} but their intersection is not")
            }
            LawWitness::Mismatch(s) => f.write_str(s),
        }
    }
}

fn codes(pr: &Profile) -> String {
    let parts: Vec<_> = pr.orders().iter().map(|p| p.code().to_string()).collect();
    format!("[{}] (m={})", parts.join(","), pr.alternatives())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: Law,
    pub holds: bool,
    pub witness: Option<LawWitness>,
}

impl LawReport {
    fn from(law: Law, witness: Option<LawWitness>) -> Self {
        LawReport { law, holds: witness.is_none(), witness }
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: holds", self.law),
            Some(w) => write!(f, "{}: FAILS, {w}", self.law),
        }
    }
}

/// Runs every law over the rule's profile space, evaluating each profile once.
pub fn check_laws<R: VotingRule>(rule: &ArrovianRule<R>) -> Result<Vec<LawReport>> {
    let n = rule.voters();
    let all = VoterSet::all(n);
    let k_set = rule.minimal_decisive(VoterSet::EMPTY, false)?;
    let j_set = rule.minimal_decisive(VoterSet::EMPTY, true)?;

    // indexed by mask
    let mut decisive = Vec::with_capacity(1 << n);
    let mut strongly = Vec::with_capacity(1 << n);
    for s in VoterSet::all_subsets(n) {
        decisive.push(rule.is_decisive(s, VoterSet::EMPTY, false)?);
        strongly.push(rule.is_decisive(s, VoterSet::EMPTY, true)?);
    }
    let at = |table: &[bool], s: VoterSet| table[s.mask() as usize];

    let mut intersection = None;
    'outer: for (strong, table) in [(false, &decisive), (true, &strongly)] {
        for l in VoterSet::all_subsets(n) {
            for r in VoterSet::all_subsets(n) {
                if at(table, l) && at(table, r) && !at(table, l.intersection(r)) {
                    intersection = Some(LawWitness::Sets { left: l, right: r, strong });
                    break 'outer;
                }
            }
        }
    }

    let pareto_j = RuleSpec::pareto(n, j_set)?;
    let pareto_k = RuleSpec::pareto(n, k_set)?;
    let mut exclusion = None;
    let mut by_junta: HashMap<Vec<u64>, (Profile, Preorder)> = HashMap::new();
    let (mut veto, mut influence, mut support, mut strictness, mut sandwich) = (None, None, None, None, None);
    let (mut equal_j, mut equal_k) = (true, true);
    let m = rule.space().m;
    for pr in rule.space().iter()? {
        let out = rule.rule().evaluate(&pr)?;

        if exclusion.is_none() {
            let key: Vec<u64> = j_set.iter().map(|i| pr.order(i).code()).collect();
            match by_junta.get(&key) {
                Some((first, first_out)) if *first_out != out => {
                    exclusion = Some(LawWitness::Profiles { left: first.clone(), right: pr.clone() });
                }
                Some(_) => {}
                None => {
                    by_junta.insert(key, (pr.clone(), out));
                }
            }
        }

        let lo = pareto_j.evaluate(&pr)?;
        let hi = pareto_k.evaluate(&pr)?;
        equal_j &= lo == out;
        equal_k &= hi == out;

        for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                let sig = pr.sig(a, b);
                let weak = out.weakly_prefers(a, b);
                let witness = || Some(LawWitness::Pair { profile: pr.clone(), a, b });
                if sandwich.is_none() && ((lo.weakly_prefers(a, b) && !weak) || (weak && !hi.weakly_prefers(a, b))) {
                    sandwich = witness();
                }
                if veto.is_none() && weak && !k_set.is_subset(sig.weak_ab) {
                    veto = witness();
                }
                if influence.is_none()
                    && j_set.is_subset(sig.weak_ab)
                    && !j_set.is_disjoint(sig.strict_ab())
                    && !out.strictly_prefers(a, b)
                {
                    influence = witness();
                }
                if support.is_none()
                    && ((weak && !at(&decisive, sig.weak_ab))
                        || (out.indifferent(a, b) && !at(&strongly, sig.indifferent())))
                {
                    support = witness();
                }
                if strictness.is_none()
                    && !k_set.is_empty()
                    && k_set.is_subset(sig.strict_ab())
                    && !out.strictly_prefers(a, b)
                {
                    strictness = witness();
                }
            }
        }
    }
    if sandwich.is_none() && (equal_j != (k_set == j_set) || equal_k != (k_set == j_set)) {
        sandwich =
            Some(LawWitness::Mismatch(format!("K={k_set} J={j_set} but C=C_J is {equal_j} and C=C_K is {equal_k}")));
    }

    let strict_unanimity = check_axiom(rule.rule(), AxiomKind::StrictUnanimity, rule.space())?.holds;
    let strong_unanimity = check_axiom(rule.rule(), AxiomKind::StrongUnanimity, rule.space())?.holds;
    let criteria = (strict_unanimity != !k_set.is_empty() || strong_unanimity != (j_set == all)).then(|| {
        LawWitness::Mismatch(format!(
            "K={k_set} J={j_set}, strict unanimity {strict_unanimity}, strong unanimity {strong_unanimity}"
        ))
    });

    Ok(vec![
        LawReport::from(Law::Exclusion, exclusion),
        LawReport::from(Law::Intersection, intersection),
        LawReport::from(Law::Veto, veto),
        LawReport::from(Law::Influence, influence),
        LawReport::from(Law::SupportingSets, support),
        LawReport::from(Law::JuntaSandwich, sandwich),
        LawReport::from(Law::Strictness, strictness),
        LawReport::from(Law::UnanimityCriteria, criteria),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Chain;
    use crate::profiles::ProfileSpace;
    use crate::rules::FnRule;

    fn v(voters: &[usize]) -> VoterSet {
        VoterSet::from_voters(voters)
    }

    #[test]
    fn laws_hold_for_lexicographic_rules() {
        let chain = Chain::new(vec![v(&[1]), v(&[1, 2])]).unwrap();
        for rule in [RuleSpec::lex(2, chain.clone()).unwrap(), RuleSpec::strong_lex(2, chain).unwrap()] {
            let verified = ArrovianRule::verify(rule, ProfileSpace::partial(3, 2)).unwrap();
            for report in check_laws(&verified).unwrap() {
                assert!(report.holds, "{report}");
            }
        }
    }

    #[test]
    fn trivial_rule_has_empty_junta() {
        let verified = ArrovianRule::verify(RuleSpec::trivial(2).unwrap(), ProfileSpace::partial(3, 2)).unwrap();
        assert!(check_laws(&verified).unwrap().iter().all(|r| r.holds));
    }

    #[test]
    fn witnesses_name_the_profile() {
        let pr = Profile::from_orders(vec![Preorder::discrete(3).unwrap()]).unwrap();
        let w = LawWitness::Pair { profile: pr, a: 0, b: 1 };
        assert!(w.to_string().starts_with("pair (0,1) in profile ["));
        // a dictatorship passes verification and every law
        let rule = FnRule::new(1, |pr: &Profile| Ok(*pr.order(0)));
        let verified = ArrovianRule::verify(rule, ProfileSpace::partial(3, 1)).unwrap();
        assert!(check_laws(&verified).unwrap().iter().all(|r| r.holds));
    }
}
