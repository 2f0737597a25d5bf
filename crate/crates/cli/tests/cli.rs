use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use arrovian::classify::{enumerate_delta_maps, example_coalition_map};
use arrovian::format;
use arrovian::relations::enumerate_preorders;
use arrovian::{Preorder, Profile, RuleSpec, VotingRule};
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrovian")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Splits `count=K` output into its blank-line separated blocks.
fn blocks(text: &str) -> (usize, Vec<String>) {
    let (head, rest) = text.split_once('\n').unwrap();
    let count = head.strip_prefix("count=").unwrap().parse().unwrap();
    let parts = rest.split("\n\n").map(str::trim).filter(|b| !b.is_empty()).map(str::to_owned).collect();
    (count, parts)
}

#[test]
fn orders_round_trip() {
    for linear in [false, true] {
        let mut args = vec!["enumerate-orders", "--m", "3"];
        if linear {
            args.push("--linear");
        }
        let (count, parts) = blocks(&ok(&args));
        let parsed: Vec<Preorder> = parts.iter().map(|b| format::parse_relation(b).unwrap()).collect();
        assert_eq!(count, if linear { 13 } else { 29 });
        assert_eq!(parsed, enumerate_preorders(3, linear).unwrap());
    }
}

#[test]
fn enumerated_rules_verify_and_round_trip() {
    let dir = TempDir::new().unwrap();
    for n in 1..=3 {
        let sub = dir.path().join(format!("n{n}"));
        let (count, parts) = blocks(&ok(&["enumerate-rules", "--n", &n.to_string(), "--out-dir", path(&sub)]));
        let maps = enumerate_delta_maps(n, true).unwrap();
        assert_eq!(count, maps.len());
        let parsed: Vec<_> = parts.iter().map(|b| format::parse_delta(b).unwrap()).collect();
        assert_eq!(parsed, maps);
        for i in 1..=count {
            let rule = sub.join(format!("rule_{i:03}.rule"));
            let out = ok(&["verify", "--rule", path(&rule), "--all-axioms"]);
            assert!(out.lines().all(|l| l.ends_with("holds=true")), "{out}");
            let delta = sub.join(format!("rule_{i:03}.delta"));
            let extracted = ok(&["extract", "--delta", path(&delta)]);
            assert_eq!(format::parse_delta(&extracted).unwrap(), maps[i - 1]);
        }
    }
}

#[test]
fn example_rule_file_extracts_its_table() {
    let out = ok(&["extract", "--rule", path(&data("nested.rule"))]);
    assert_eq!(format::parse_delta(&out).unwrap(), example_coalition_map());
    assert!(out.contains("chain={1,2}<{1,2,3}"));
    let dot = ok(&["extract", "--rule", path(&data("nested.rule")), "--format", "dot"]);
    assert!(dot.starts_with("digraph delta {") && dot.contains("\"{2}\" -> \"{1,2}\";"));
    assert!(!dot.contains("\"{1,2,3}\" ->"));
    assert_eq!(dot, ok(&["render-dot", "--rule", path(&data("nested.rule"))]));
}

#[test]
fn strongly_unanimous_linear_range_rules_are_the_two_dictator_orders() {
    let out = ok(&["classify", "--n", "2", "--require-strong-unanimity", "--linear-range"]);
    let (count, parts) = blocks(&out);
    assert_eq!(count, 2);
    assert!(parts[0].contains("seq=(1,2)") && parts[1].contains("seq=(2,1)"));
    assert_eq!(blocks(&ok(&["classify", "--n", "3", "--linear-range"])).0, 16);
    assert_eq!(blocks(&ok(&["classify", "--n", "3", "--require-strong-unanimity", "--linear-range"])).0, 6);
}

#[test]
fn measurable_rule_round_trips() {
    let out = ok(&["extract", "--rule", path(&data("blocks.rule"))]);
    let dmap = format::parse_dmap(&out).unwrap();
    assert_eq!(format::write_dmap(&dmap), out);
    assert_eq!(out, std::fs::read_to_string(data("nested.dmap")).unwrap());
}

#[test]
fn violations_exit_one_with_witness() {
    let out = run(&["verify", "--rule", path(&data("lex12.rule")), "--axiom", "anonymity"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("axiom=anonymity holds=false\nwitness voters=("));
    let profile = text.split_once('\n').unwrap().1.split_once('\n').unwrap().1;
    assert_eq!(format::parse_profile(profile).unwrap().voters(), 3);

    let dir = TempDir::new().unwrap();
    let f = dir.path().join("trivial.rule");
    std::fs::write(&f, "n=2\nrule=trivial\n").unwrap();
    let out = run(&["verify", "--rule", path(&f), "--axiom", "strict-unanimity"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("witness profile pair=("));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--rule", "/nonexistent.rule", "--all-axioms"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--rule", path(&data("lex12.rule"))]).status.code(), Some(2));
    assert_eq!(run(&["enumerate-orders", "--m", "9"]).status.code(), Some(2));
    // beyond the enumeration limit
    assert_eq!(run(&["classify", "--n", "5"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("bad.rule");
    std::fs::write(&f, "n=2\nrule=lex chain={2}<{1}\n").unwrap();
    assert_eq!(run(&["eval", "--rule", path(&f), "--profile", path(&f)]).status.code(), Some(2));
}

#[test]
fn eval_and_compare() {
    let dir = TempDir::new().unwrap();
    let orders = enumerate_preorders(3, false).unwrap();
    let pr = Profile::from_orders(vec![orders[3], orders[17], orders[28]]).unwrap();
    let pf = dir.path().join("p.profile");
    std::fs::write(&pf, format::write_profile(&pr)).unwrap();
    let out = ok(&["eval", "--rule", path(&data("nested.rule")), "--profile", path(&pf)]);
    let expected = RuleSpec::delta(example_coalition_map()).unwrap().evaluate(&pr).unwrap();
    assert_eq!(format::parse_relation(&out).unwrap(), expected);

    let pareto = dir.path().join("pareto.rule");
    std::fs::write(&pareto, "n=3\nrule=pareto J={1,2,3}\n").unwrap();
    let example = data("nested.rule");
    let out = ok(&["compare", "--rule", path(&pareto), "--rule", path(&example)]);
    assert_eq!(out, "relation=subset\n");
    let out = ok(&["compare", "--rule", path(&example), "--rule", path(&data("lex12.rule"))]);
    assert_eq!(out, "relation=subset\n");
}

#[test]
fn extension_and_paranoid_mode() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("seq.rule");
    std::fs::write(&f, "n=3\nrule=lexseq seq=(2,1)\n").unwrap();
    let out = ok(&["extend", "--rule", path(&f)]);
    let chain_rule = dir.path().join("chain.rule");
    std::fs::write(&chain_rule, "n=3\nrule=lex chain={2}<{1,2}\n").unwrap();
    let full = ok(&["extract", "--rule", path(&chain_rule)]);
    assert_eq!(format::parse_delta(&out).unwrap(), format::parse_delta(&full).unwrap());

    let two = dir.path().join("two.rule");
    std::fs::write(&two, "n=2\nrule=strong_lex chain={1}<{1,2}\n").unwrap();
    assert!(ok(&["extract", "--rule", path(&two), "--paranoid"]).starts_with("# paranoid: "));
    assert_eq!(run(&["extract", "--rule", path(&f), "--paranoid"]).status.code(), Some(2));
}
