//! Plain-text formats for relations, profiles, coalition maps, filters and rule files.
//!
//! Every `write_*` output parses back to an identical value. Blank lines and
//! lines starting with `#` are ignored by the parsers.

use std::fmt::Write as _;

use crate::classify::Chain;
use crate::decisive::{DeltaMap, SetFilter};
use crate::error::{Error, Result};
use crate::measurable::{Algebra, DMap};
use crate::profiles::{Profile, VoterSet, MAX_VOTERS};
use crate::relations::{Preorder, MAX_ALTERNATIVES};
use crate::rules::{RuleKind, RuleSpec};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn header(line: Option<&str>, key: &str) -> Result<usize> {
    let line = line.ok_or_else(|| parse_err(format!("missing `{key}=` line")))?;
    let value = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(format!("expected `{key}=<int>`, got `{line}`")))?;
    value.trim().parse().map_err(|_| parse_err(format!("bad integer in `{line}`")))
}

pub fn write_relation(p: &Preorder) -> String {
    let mut out = format!("m={}\n", p.alternatives());
    for row in p.to_table() {
        out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

fn relation_from_lines<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<Preorder> {
    let m = header(lines.next(), "m")?;
    if m == 0 || m > MAX_ALTERNATIVES {
        return Err(Error::AlternativeCount { m, max: MAX_ALTERNATIVES });
    }
    let mut rows = Vec::with_capacity(m);
    for x in 0..m {
        let line = lines.next().ok_or_else(|| parse_err(format!("relation has {x} of {m} rows")))?;
        let row = line
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(parse_err(format!("unexpected `{c}` in row `{line}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Preorder::from_table(&rows)
}

pub fn parse_relation(text: &str) -> Result<Preorder> {
    let mut lines = content_lines(text);
    let p = relation_from_lines(&mut lines)?;
    match lines.next() {
        None => Ok(p),
        Some(extra) => Err(parse_err(format!("trailing input `{extra}`"))),
    }
}

pub fn write_profile(pr: &Profile) -> String {
    let blocks: Vec<String> = pr.orders().iter().map(write_relation).collect();
    format!("n={}\n{}", pr.voters(), blocks.join("\n"))
}

pub fn parse_profile(text: &str) -> Result<Profile> {
    let mut lines = content_lines(text);
    let n = header(lines.next(), "n")?;
    if n == 0 || n > MAX_VOTERS {
        return Err(Error::VoterCount { n, max: MAX_VOTERS });
    }
    let orders = (0..n).map(|_| relation_from_lines(&mut lines)).collect::<Result<Vec<_>>>()?;
    if let Some(extra) = lines.next() {
        return Err(parse_err(format!("trailing input `{extra}`")));
    }
    Profile::from_orders(orders)
}

/// `{}` or `{1,3}` with 1-based voters.
pub fn parse_voter_set(text: &str) -> Result<VoterSet> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| parse_err(format!("expected `{{...}}`, got `{text}`")))?;
    let mut voters = Vec::new();
    for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v: usize = item.parse().map_err(|_| parse_err(format!("bad voter `{item}`")))?;
        if v == 0 || v > MAX_VOTERS {
            return Err(parse_err(format!("voter {v} outside 1..={MAX_VOTERS}")));
        }
        voters.push(v);
    }
    Ok(VoterSet::from_voters(&voters))
}

/// Every `{...}` group in `text`, in order.
fn voter_sets(text: &str) -> Result<Vec<VoterSet>> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find('{') {
        let end = rest[start..].find('}').ok_or_else(|| parse_err(format!("unclosed brace in `{text}`")))?;
        out.push(parse_voter_set(&rest[start..=start + end])?);
        rest = &rest[start + end + 1..];
    }
    Ok(out)
}

pub fn write_delta(delta: &DeltaMap) -> String {
    let mut out = format!("n={}\n", delta.voters());
    for (s, image) in VoterSet::all_subsets(delta.voters()).zip(delta.table()) {
        let _ = writeln!(out, "{s} -> {image}");
    }
    out
}

fn arrow(line: &str) -> Result<(&str, &str)> {
    line.split_once("->").ok_or_else(|| parse_err(format!("expected `{{N}} -> ...`, got `{line}`")))
}

pub fn parse_delta(text: &str) -> Result<DeltaMap> {
    let mut lines = content_lines(text);
    let n = header(lines.next(), "n")?;
    if n > crate::decisive::MAX_DELTA_VOTERS {
        return Err(Error::VoterCount { n, max: crate::decisive::MAX_DELTA_VOTERS });
    }
    let mut table = Vec::with_capacity(1 << n);
    for (expected, line) in VoterSet::all_subsets(n).zip(lines.by_ref()) {
        let (lhs, rhs) = arrow(line)?;
        if parse_voter_set(lhs)? != expected {
            return Err(parse_err(format!("expected row for {expected}, got `{line}`")));
        }
        table.push(parse_voter_set(rhs)?);
    }
    if let Some(extra) = lines.next() {
        return Err(parse_err(format!("trailing input `{extra}`")));
    }
    DeltaMap::new(n, table)
}

/// `gen={..}` for a principal filter.
pub fn write_filter(filter: &SetFilter) -> String {
    match filter.principal_generator() {
        Some(g) => format!("gen={g}"),
        None => {
            let items: Vec<String> = filter.members().iter().map(ToString::to_string).collect();
            format!("members=[{}]", items.join(","))
        }
    }
}

pub fn parse_filter(n: usize, text: &str) -> Result<SetFilter> {
    let text = text.trim();
    if let Some(g) = text.strip_prefix("gen=") {
        SetFilter::principal(n, parse_voter_set(g)?)
    } else if let Some(m) = text.strip_prefix("members=") {
        SetFilter::new(n, voter_sets(m)?)
    } else {
        Err(parse_err(format!("expected `gen=` or `members=`, got `{text}`")))
    }
}

pub fn write_dmap(dmap: &DMap) -> String {
    let algebra = dmap.algebra();
    let mut out = format!("n={}\npartition={algebra}\n", algebra.voters());
    for (s, g) in dmap.entries() {
        let _ = writeln!(out, "{s} -> gen={g}");
    }
    out
}

pub fn parse_partition(n: usize, text: &str) -> Result<Algebra> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| parse_err(format!("expected `[{{..}}|{{..}}]`, got `{text}`")))?;
    let blocks = inner.split('|').map(parse_voter_set).collect::<Result<Vec<_>>>()?;
    Algebra::from_partition(n, blocks)
}

pub fn parse_dmap(text: &str) -> Result<DMap> {
    let mut lines = content_lines(text);
    let n = header(lines.next(), "n")?;
    let part = lines.next().ok_or_else(|| parse_err("missing `partition=` line"))?;
    let part =
        part.strip_prefix("partition=").ok_or_else(|| parse_err(format!("expected `partition=`, got `{part}`")))?;
    let algebra = parse_partition(n, part)?;
    let members = algebra.members();
    let mut gens = Vec::with_capacity(members.len());
    for (expected, line) in members.iter().zip(lines.by_ref()) {
        let (lhs, rhs) = arrow(line)?;
        if parse_voter_set(lhs)? != *expected {
            return Err(parse_err(format!("expected row for {expected}, got `{line}`")));
        }
        let g = rhs.trim().strip_prefix("gen=").ok_or_else(|| parse_err(format!("expected `gen=` in `{line}`")))?;
        gens.push(parse_voter_set(g)?);
    }
    if let Some(extra) = lines.next() {
        return Err(parse_err(format!("trailing input `{extra}`")));
    }
    DMap::new(algebra, gens)
}

fn parse_chain(text: &str) -> Result<Chain> {
    if text.trim() == "()" {
        return Ok(Chain::default());
    }
    let parts = text.split('<').map(parse_voter_set).collect::<Result<Vec<_>>>()?;
    Chain::new(parts)
}

fn parse_sequence(text: &str) -> Result<Vec<usize>> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(format!("expected `(..)`, got `{text}`")))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(parse_err(format!("bad voter `{s}`"))),
        })
        .collect()
}

/// The rule file: an `n=` line and a `rule=` line. `delta_file` names the file
/// that holds the coalition map for `delta` and `measurable` rules.
pub fn write_rule(rule: &RuleSpec, delta_file: Option<&str>) -> Result<String> {
    let n = crate::rules::VotingRule::voters(rule);
    let line = match (rule.kind(), delta_file) {
        (RuleKind::Delta(_), Some(path)) => format!("rule=delta file={path}"),
        (RuleKind::Measurable(d), Some(path)) => format!("rule=measurable partition={} dmap_file={path}", d.algebra()),
        (RuleKind::Delta(_) | RuleKind::Measurable(_), None) => {
            return Err(parse_err("this rule refers to a separate map file"));
        }
        (RuleKind::Filter(f), _) => format!("rule=filter {}", write_filter(f)),
        _ => rule.to_string(),
    };
    Ok(format!("n={n}\n{line}\n"))
}

/// Parses a rule file; `load` resolves the paths of referenced map files.
pub fn parse_rule(text: &str, mut load: impl FnMut(&str) -> Result<String>) -> Result<RuleSpec> {
    let mut n = None;
    let mut rule_line = None;
    for line in content_lines(text) {
        if line.starts_with("n=") {
            n = Some(header(Some(line), "n")?);
        } else if line.starts_with("rule=") {
            if rule_line.replace(line).is_some() {
                return Err(parse_err("more than one `rule=` line"));
            }
        } else {
            return Err(parse_err(format!("unexpected line `{line}`")));
        }
    }
    let n = n.ok_or_else(|| parse_err("missing `n=` line"))?;
    let line = rule_line.ok_or_else(|| parse_err("missing `rule=` line"))?;
    let mut words = line.split_whitespace();
    let kind = words.next().and_then(|w| w.strip_prefix("rule=")).unwrap_or_default();
    let mut args = std::collections::BTreeMap::new();
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| parse_err(format!("expected key=value, got `{w}`")))?;
        args.insert(k, v);
    }
    let mut take = |key: &str| -> Result<String> {
        args.remove(key).map(str::to_owned).ok_or_else(|| parse_err(format!("rule={kind} needs `{key}=`")))
    };
    let rule = match kind {
        "trivial" => RuleSpec::trivial(n)?,
        "pareto" => RuleSpec::pareto(n, parse_voter_set(&take("J")?)?)?,
        "lex" => RuleSpec::lex(n, parse_chain(&take("chain")?)?)?,
        "strong_lex" => RuleSpec::strong_lex(n, parse_chain(&take("chain")?)?)?,
        "lexseq" => RuleSpec::lex_seq(n, parse_sequence(&take("seq")?)?)?,
        "delta" => {
            let delta = parse_delta(&load(&take("file")?)?)?;
            if delta.voters() != n {
                return Err(parse_err(format!("map file is for n={}, rule says n={n}", delta.voters())));
            }
            RuleSpec::delta(delta)?
        }
        "filter" => {
            let spec = match (args.remove("gen"), args.remove("members")) {
                (Some(g), None) => format!("gen={g}"),
                (None, Some(m)) => format!("members={m}"),
                _ => return Err(parse_err("rule=filter needs exactly one of `gen=` or `members=`")),
            };
            RuleSpec::filter(parse_filter(n, &spec)?)?
        }
        "measurable" => {
            let algebra = parse_partition(n, &take("partition")?)?;
            let dmap = parse_dmap(&load(&take("dmap_file")?)?)?;
            if *dmap.algebra() != algebra {
                return Err(parse_err(format!("map file partition {} differs from {algebra}", dmap.algebra())));
            }
            RuleSpec::measurable(dmap)?
        }
        other => return Err(parse_err(format!("unknown rule kind `{other}`"))),
    };
    if let Some(k) = args.keys().next() {
        return Err(parse_err(format!("unexpected key `{k}` for rule={kind}")));
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::example_coalition_map;

    fn no_files(path: &str) -> Result<String> {
        Err(parse_err(format!("no file {path}")))
    }

    #[test]
    fn relation_text() {
        let p = Preorder::from_ranks(&[0, 1, 1]).unwrap();
        let text = write_relation(&p);
        assert_eq!(text, "m=3\n111\n011\n011\n");
        assert_eq!(parse_relation(&text).unwrap(), p);
        assert!(parse_relation("m=2\n10\n11\n").is_ok());
        assert!(parse_relation("m=2\n10\n").is_err());
        assert!(parse_relation("m=2\n12\n11\n").is_err());
        assert!(matches!(parse_relation("m=3\n110\n011\n001\n"), Err(Error::NotPreorder)));
    }

    #[test]
    fn profile_text() {
        let pr = Profile::from_orders(vec![Preorder::discrete(3).unwrap(), Preorder::full(3).unwrap()]).unwrap();
        let text = write_profile(&pr);
        assert_eq!(parse_profile(&text).unwrap(), pr);
        assert!(text.contains("\n\nm=3"));
    }

    #[test]
    fn sets_and_maps() {
        assert_eq!(parse_voter_set("{3, 1}").unwrap(), VoterSet::from_voters(&[1, 3]));
        assert_eq!(parse_voter_set("{}").unwrap(), VoterSet::EMPTY);
        assert!(parse_voter_set("{0}").is_err());
        let d = example_coalition_map();
        let text = write_delta(&d);
        assert!(text.starts_with("n=3\n{} -> {1,2}\n{1} -> {1,2,3}\n"));
        assert_eq!(parse_delta(&text).unwrap(), d);
        assert!(parse_delta("n=1\n{} -> {}\n").is_err());
    }

    #[test]
    fn filters_and_dmaps() {
        let f = SetFilter::principal(3, VoterSet::from_voters(&[2])).unwrap();
        assert_eq!(write_filter(&f), "gen={2}");
        assert_eq!(parse_filter(3, "gen={2}").unwrap(), f);
        assert_eq!(parse_filter(3, "members=[{2},{1,2},{2,3},{1,2,3}]").unwrap(), f);
        let algebra = parse_partition(3, "[{1,2}|{3}]").unwrap();
        let dmap = crate::measurable::enumerate_dmaps(&algebra).unwrap().pop().unwrap();
        let text = write_dmap(&dmap);
        assert!(text.starts_with("n=3\npartition=[{1,2}|{3}]\n{} -> gen="));
        assert_eq!(parse_dmap(&text).unwrap(), dmap);
    }

    #[test]
    fn rule_files() {
        for text in [
            "n=3\nrule=trivial\n",
            "n=3\nrule=pareto J={1,3}\n",
            "n=3\nrule=lex chain={1}<{1,2}\n",
            "n=3\nrule=strong_lex chain={1}<{1,2,3}\n",
            "n=3\nrule=lexseq seq=(2,1,3)\n",
            "n=3\nrule=filter gen={1,2}\n",
            "n=2\nrule=lex chain=()\n",
        ] {
            let rule = parse_rule(text, no_files).unwrap();
            assert_eq!(write_rule(&rule, None).unwrap(), text);
        }
        let delta = write_delta(&example_coalition_map());
        let rule = parse_rule("n=3\nrule=delta file=ex.delta\n", |p| {
            assert_eq!(p, "ex.delta");
            Ok(delta.clone())
        })
        .unwrap();
        assert_eq!(write_rule(&rule, Some("ex.delta")).unwrap(), "n=3\nrule=delta file=ex.delta\n");
        assert!(parse_rule("n=3\nrule=pareto\n", no_files).is_err());
        assert!(parse_rule("n=3\nrule=bogus\n", no_files).is_err());
        assert!(parse_rule("n=3\nrule=trivial extra=1\n", no_files).is_err());
        assert!(parse_rule("n=2\nrule=delta file=x\n", |_| Ok(delta.clone())).is_err());
    }
}
