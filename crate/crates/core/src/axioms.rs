//! Exhaustive axiom checks over a finite profile space.
//!
//! The pairwise axioms (IIA, monotonicity, strong neutrality) are decided by
//! bucketing outcomes by pair signature instead of comparing all pairs of
//! profiles: one evaluation per profile, then comparisons between at most
//! `4^n` buckets per alternative pair.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::profiles::{PairSignature, Profile, ProfileSpace};
use crate::relations::{Alt, Permutation};
use crate::rules::VotingRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomKind {
    Unanimity,
    StrictUnanimity,
    StrongUnanimity,
    Monotonicity,
    Iia,
    Neutrality,
    StrongNeutrality,
    Anonymity,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 8] = [
        AxiomKind::Unanimity,
        AxiomKind::StrictUnanimity,
        AxiomKind::StrongUnanimity,
        AxiomKind::Monotonicity,
        AxiomKind::Iia,
        AxiomKind::Neutrality,
        AxiomKind::StrongNeutrality,
        AxiomKind::Anonymity,
    ];

    /// The axioms every rule of a coalition map satisfies.
    pub const ARROVIAN_SUITE: [AxiomKind; 5] = [
        AxiomKind::Unanimity,
        AxiomKind::Iia,
        AxiomKind::Neutrality,
        AxiomKind::StrongNeutrality,
        AxiomKind::Monotonicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::Unanimity => "unanimity",
            AxiomKind::StrictUnanimity => "strict-unanimity",
            AxiomKind::StrongUnanimity => "strong-unanimity",
            AxiomKind::Monotonicity => "monotonicity",
            AxiomKind::Iia => "iia",
            AxiomKind::Neutrality => "neutrality",
            AxiomKind::StrongNeutrality => "strong-neutrality",
            AxiomKind::Anonymity => "anonymity",
        }
    }
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AxiomKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('-', "_") == s)
            .ok_or_else(|| Error::Parse(format!("unknown axiom `{s}`")))
    }
}

/// One side of a contrast: a profile and the ordered pair looked at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub profile: Profile,
    pub a: Alt,
    pub b: Alt,
}

impl Observation {
    fn signature(&self) -> PairSignature {
        self.profile.sig(self.a.0, self.b.0)
    }
}

/// A concrete counterexample to an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A single profile whose outcome on `(a, b)` breaks a unanimity axiom.
    Pair(Observation),
    /// `a ≽ b` holds in `holds` but fails in `fails`, although the signatures
    /// say the second should be at least as favourable.
    Contrast { holds: Observation, fails: Observation },
    /// `C(ρ*P) ≠ ρ*C(P)`.
    AlternativePermutation { profile: Profile, rho: Permutation },
    /// `C(P∘σ) ≠ C(P)`.
    VoterPermutation { profile: Profile, sigma: Permutation },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub kind: AxiomKind,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl AxiomReport {
    fn pass(kind: AxiomKind) -> Self {
        AxiomReport { kind, holds: true, witness: None }
    }

    fn fail(kind: AxiomKind, witness: Witness) -> Self {
        AxiomReport { kind, holds: false, witness: Some(witness) }
    }
}

#[derive(Default)]
struct Bucket {
    holds: Option<Observation>,
    fails: Option<Observation>,
}

impl Bucket {
    fn record(&mut self, outcome: bool, obs: impl FnOnce() -> Observation) {
        let slot = if outcome { &mut self.holds } else { &mut self.fails };
        if slot.is_none() {
            *slot = Some(obs());
        }
    }
}

/// Checks one axiom exhaustively over `space`.
pub fn check_axiom<R: VotingRule + ?Sized>(rule: &R, kind: AxiomKind, space: &ProfileSpace) -> Result<AxiomReport> {
    Ok(check_axioms(rule, &[kind], space)?.remove(0))
}

/// Checks several axioms in one pass over `space`; reports come back in the order asked.
pub fn check_axioms<R: VotingRule + ?Sized>(
    rule: &R,
    kinds: &[AxiomKind],
    space: &ProfileSpace,
) -> Result<Vec<AxiomReport>> {
    if rule.voters() != space.n {
        return Err(Error::ProfileSize { expected: rule.voters(), got: space.n });
    }
    let wants = |k| kinds.contains(&k);
    if wants(AxiomKind::Anonymity) && space.blocks.is_some() {
        return Err(Error::Inconsistent("anonymity is only checked on unrestricted profile spaces".into()));
    }
    let m = space.m;
    let all = crate::profiles::VoterSet::all(space.n);
    let rhos = if wants(AxiomKind::Neutrality) { Permutation::all(m) } else { Vec::new() };
    let sigmas = if wants(AxiomKind::Anonymity) { Permutation::all(space.n) } else { Vec::new() };
    let pairwise = wants(AxiomKind::Iia) || wants(AxiomKind::Monotonicity) || wants(AxiomKind::StrongNeutrality);

    let mut unanimity: [Option<Witness>; 3] = [None, None, None];
    let mut neutrality = None;
    let mut anonymity = None;
    let mut per_pair: HashMap<(usize, usize, u32, u32), Bucket> = HashMap::new();

    for profile in space.iter()? {
        let out = rule.evaluate(&profile)?;
        for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                let sig = profile.sig(a, b);
                let weak = out.weakly_prefers(a, b);
                let strict = weak && !out.weakly_prefers(b, a);
                let obs = || Observation { profile: profile.clone(), a: Alt(a), b: Alt(b) };
                let unanimous = sig.weak_ab == all;
                let violated = [
                    unanimous && !weak,
                    (unanimous && !weak) || (sig.strict_ab() == all && !strict),
                    (unanimous && !weak) || (unanimous && !sig.strict_ab().is_empty() && !strict),
                ];
                for (slot, bad) in unanimity.iter_mut().zip(violated) {
                    if bad && slot.is_none() {
                        *slot = Some(Witness::Pair(obs()));
                    }
                }
                if pairwise {
                    per_pair.entry((a, b, sig.weak_ab.mask(), sig.weak_ba.mask())).or_default().record(weak, obs);
                }
            }
        }
        if neutrality.is_none() {
            for rho in &rhos {
                if rule.evaluate(&profile.permute_alternatives(rho)?)? != out.permuted(rho)? {
                    neutrality = Some(Witness::AlternativePermutation { profile: profile.clone(), rho: rho.clone() });
                    break;
                }
            }
        }
        if anonymity.is_none() {
            for sigma in &sigmas {
                if rule.evaluate(&profile.permute_voters(sigma)?)? != out {
                    anonymity = Some(Witness::VoterPermutation { profile: profile.clone(), sigma: sigma.clone() });
                    break;
                }
            }
        }
    }

    let report = |kind: AxiomKind, w: Option<Witness>| match w {
        None => AxiomReport::pass(kind),
        Some(w) => AxiomReport::fail(kind, w),
    };
    let [u, su, stu] = unanimity;
    let mut out = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        out.push(match kind {
            AxiomKind::Unanimity => report(kind, u.clone()),
            AxiomKind::StrictUnanimity => report(kind, su.clone()),
            AxiomKind::StrongUnanimity => report(kind, stu.clone()),
            AxiomKind::Neutrality => report(kind, neutrality.clone()),
            AxiomKind::Anonymity => report(kind, anonymity.clone()),
            AxiomKind::Iia => report(kind, iia_violation(&per_pair)),
            AxiomKind::Monotonicity => report(kind, monotonicity_violation(&per_pair)),
            AxiomKind::StrongNeutrality => report(kind, strong_neutrality_violation(&per_pair)),
        });
    }
    Ok(out)
}

fn sorted_keys(buckets: &HashMap<(usize, usize, u32, u32), Bucket>) -> Vec<(usize, usize, u32, u32)> {
    let mut keys: Vec<_> = buckets.keys().copied().collect();
    keys.sort_unstable();
    keys
}

fn iia_violation(buckets: &HashMap<(usize, usize, u32, u32), Bucket>) -> Option<Witness> {
    sorted_keys(buckets).into_iter().find_map(|k| match &buckets[&k] {
        Bucket { holds: Some(h), fails: Some(f) } => Some(Witness::Contrast { holds: h.clone(), fails: f.clone() }),
        _ => None,
    })
}

fn monotonicity_violation(buckets: &HashMap<(usize, usize, u32, u32), Bucket>) -> Option<Witness> {
    let keys = sorted_keys(buckets);
    for &(a, b, x, y) in &keys {
        let Some(h) = &buckets[&(a, b, x, y)].holds else { continue };
        for &(a2, b2, x2, y2) in &keys {
            if (a2, b2) != (a, b) || x & !x2 != 0 || y2 & !y != 0 {
                continue;
            }
            if let Some(f) = &buckets[&(a2, b2, x2, y2)].fails {
                return Some(Witness::Contrast { holds: h.clone(), fails: f.clone() });
            }
        }
    }
    None
}

fn strong_neutrality_violation(buckets: &HashMap<(usize, usize, u32, u32), Bucket>) -> Option<Witness> {
    let mut by_sig: HashMap<(u32, u32), Bucket> = HashMap::new();
    for k in sorted_keys(buckets) {
        let bucket = &buckets[&k];
        let entry = by_sig.entry((k.2, k.3)).or_default();
        if entry.holds.is_none() {
            entry.holds = bucket.holds.clone();
        }
        if entry.fails.is_none() {
            entry.fails = bucket.fails.clone();
        }
    }
    let mut sigs: Vec<_> = by_sig.keys().copied().collect();
    sigs.sort_unstable();
    sigs.into_iter().find_map(|s| match &by_sig[&s] {
        Bucket { holds: Some(h), fails: Some(f) } => Some(Witness::Contrast { holds: h.clone(), fails: f.clone() }),
        _ => None,
    })
}

impl Witness {
    /// Re-evaluates the rule on the witness and confirms it still violates `kind`.
    pub fn replay<R: VotingRule + ?Sized>(&self, rule: &R, kind: AxiomKind) -> Result<bool> {
        match self {
            Witness::Pair(obs) => {
                let out = rule.evaluate(&obs.profile)?;
                let (a, b) = (obs.a.0, obs.b.0);
                let sig = obs.signature();
                let all = crate::profiles::VoterSet::all(sig.n);
                let weak = out.weakly_prefers(a, b);
                let strict = out.strictly_prefers(a, b);
                let unanimous = sig.weak_ab == all;
                Ok(match kind {
                    AxiomKind::Unanimity => unanimous && !weak,
                    AxiomKind::StrictUnanimity => (unanimous && !weak) || (sig.strict_ab() == all && !strict),
                    AxiomKind::StrongUnanimity => {
                        (unanimous && !weak) || (unanimous && !sig.strict_ab().is_empty() && !strict)
                    }
                    _ => false,
                })
            }
            Witness::Contrast { holds, fails } => {
                let h = rule.evaluate(&holds.profile)?.weakly_prefers(holds.a.0, holds.b.0);
                let f = rule.evaluate(&fails.profile)?.weakly_prefers(fails.a.0, fails.b.0);
                let (s1, s2) = (holds.signature(), fails.signature());
                let same_pair = (holds.a, holds.b) == (fails.a, fails.b);
                let premise = match kind {
                    AxiomKind::Iia => same_pair && s1 == s2,
                    AxiomKind::Monotonicity => {
                        same_pair && s1.weak_ab.is_subset(s2.weak_ab) && s2.weak_ba.is_subset(s1.weak_ba)
                    }
                    AxiomKind::StrongNeutrality => s1 == s2,
                    _ => false,
                };
                Ok(premise && h && !f)
            }
            Witness::AlternativePermutation { profile, rho } => {
                let lhs = rule.evaluate(&profile.permute_alternatives(rho)?)?;
                let rhs = rule.evaluate(profile)?.permuted(rho)?;
                Ok(kind == AxiomKind::Neutrality && lhs != rhs)
            }
            Witness::VoterPermutation { profile, sigma } => {
                let lhs = rule.evaluate(&profile.permute_voters(sigma)?)?;
                Ok(kind == AxiomKind::Anonymity && lhs != rule.evaluate(profile)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::VoterSet;
    use crate::relations::Preorder;
    use crate::rules::{FnRule, RuleSpec};

    fn holds(rule: &RuleSpec, kind: AxiomKind, space: &ProfileSpace) -> bool {
        let r = check_axiom(rule, kind, space).unwrap();
        if let Some(w) = &r.witness {
            assert!(w.replay(rule, kind).unwrap(), "witness for {kind} does not replay");
        }
        r.holds
    }

    #[test]
    fn trivial_rule() {
        let space = ProfileSpace::partial(3, 2);
        let rule = RuleSpec::trivial(2).unwrap();
        assert!(holds(&rule, AxiomKind::Unanimity, &space));
        let r = check_axiom(&rule, AxiomKind::StrictUnanimity, &space).unwrap();
        assert!(!r.holds);
        let Some(Witness::Pair(obs)) = &r.witness else { panic!("expected a pair witness") };
        let sig = obs.profile.signature(obs.a, obs.b).unwrap();
        assert_eq!(sig.strict_ab(), VoterSet::all(2));
        assert!(r.witness.unwrap().replay(&rule, AxiomKind::StrictUnanimity).unwrap());
    }

    #[test]
    fn anonymity() {
        let rule = RuleSpec::pareto(2, VoterSet::all(2)).unwrap();
        assert!(holds(&rule, AxiomKind::Anonymity, &ProfileSpace::partial(3, 2)));
        let lex = RuleSpec::lex_seq(2, vec![0, 1]).unwrap();
        assert!(!holds(&lex, AxiomKind::Anonymity, &ProfileSpace::linear(3, 2)));
    }

    #[test]
    fn counting_rule_breaks_iia_and_monotonicity() {
        // a ≽ b iff at least as many voters rank a weakly above b as the reverse,
        // compared through a third alternative; not pairwise, so IIA must fail.
        let rule = FnRule::new(2, |pr: &Profile| {
            let m = pr.alternatives();
            let score =
                |x: usize| (0..m).map(|y| pr.orders().iter().filter(|p| p.weakly_prefers(x, y)).count()).sum::<usize>();
            Preorder::from_fn(m, |x, y| score(x) >= score(y))
        });
        let space = ProfileSpace::partial(3, 2);
        for kind in [AxiomKind::Iia, AxiomKind::Monotonicity, AxiomKind::StrongNeutrality] {
            let r = check_axiom(&rule, kind, &space).unwrap();
            assert!(!r.holds, "{kind}");
            assert!(r.witness.unwrap().replay(&rule, kind).unwrap());
        }
        assert!(check_axiom(&rule, AxiomKind::Neutrality, &space).unwrap().holds);
    }

    #[test]
    fn parse_names() {
        for k in AxiomKind::ALL {
            assert_eq!(k.name().parse::<AxiomKind>().unwrap(), k);
        }
        assert_eq!("strong_neutrality".parse::<AxiomKind>().unwrap(), AxiomKind::StrongNeutrality);
        assert!("majority".parse::<AxiomKind>().is_err());
    }
}
