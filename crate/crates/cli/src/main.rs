//! `arrovian`: enumerate, check and classify arrovian voting systems from the command line.
//!
//! Exit codes: 0 when the command succeeds and the checked property holds, 1 when a
//! property is violated (a witness is printed), 2 on bad input or a guard refusal.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arrovian::axioms::Observation;
use arrovian::classify::{
    chain_of, classify_linear_range, compare_outcomes, enumerate_delta_maps, extend_from_linear, render_dot,
};
use arrovian::format;
use arrovian::measurable::extract_dmap;
use arrovian::relations::enumerate_preorders;
use arrovian::{
    check_axiom, check_axioms, Alt, ArrovianRule, AxiomKind, DeltaMap, Error, ProfileSpace, RuleKind, RuleSpec,
    VoterSet, VotingRule, Witness,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "arrovian", version, about = "Arrovian voting systems on partial preorders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Domain {
    #[default]
    Partial,
    Linear,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Dot,
}

/// Where the rule comes from: a rule file or a bare coalition-map file.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct RuleInput {
    /// Rule file; map files it names are resolved relative to it.
    #[arg(long)]
    rule: Option<PathBuf>,
    /// Coalition-map file (`n=` line, then one `{N} -> {ΔN}` line per coalition).
    #[arg(long)]
    delta: Option<PathBuf>,
}

#[derive(Args)]
struct SpaceArgs {
    /// Number of alternatives.
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, value_enum, default_value_t)]
    domain: Domain,
}

#[derive(Subcommand)]
enum Command {
    /// List every partial preorder on m alternatives.
    EnumerateOrders {
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Only complete (linear) preorders.
        #[arg(long)]
        linear: bool,
    },
    /// List every valid coalition map for n voters.
    EnumerateRules {
        #[arg(long)]
        n: usize,
        /// Also write `rule_NNN.delta` and `rule_NNN.rule` files here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check axioms exhaustively over a profile space.
    Verify {
        #[command(flatten)]
        input: RuleInput,
        #[command(flatten)]
        space: SpaceArgs,
        /// Axiom to check; may be repeated.
        #[arg(long)]
        axiom: Vec<AxiomKind>,
        /// Check every axiom an arrovian rule must satisfy.
        #[arg(long)]
        all_axioms: bool,
    },
    /// Recover the coalition map of an arrovian rule.
    Extract {
        #[command(flatten)]
        input: RuleInput,
        #[command(flatten)]
        space: SpaceArgs,
        /// Cross-check the worst-case decisiveness test against all profiles (n <= 2).
        #[arg(long)]
        paranoid: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List coalition maps for n voters, optionally filtered.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Keep rules satisfying strong unanimity.
        #[arg(long)]
        require_strong_unanimity: bool,
        /// Keep rules sending linear profiles to linear preorders.
        #[arg(long)]
        linear_range: bool,
    },
    /// Extend a rule known on linear profiles to all partial profiles.
    Extend {
        #[command(flatten)]
        input: RuleInput,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Compare the outcomes of two rules pointwise.
    Compare {
        /// Two rule or coalition-map files.
        #[arg(long, num_args = 1, required = true)]
        rule: Vec<PathBuf>,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Draw a coalition map as a Graphviz digraph.
    RenderDot {
        #[command(flatten)]
        input: RuleInput,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Apply a rule to one profile.
    Eval {
        #[command(flatten)]
        input: RuleInput,
        #[arg(long)]
        profile: PathBuf,
    },
}

/// Failure modes: a violated property (exit 1) or unusable input (exit 2).
enum Failure {
    Violation(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotArrovian(_) => Failure::Violation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Run = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Loads a rule file, or a coalition-map file when the second content line is a `{..} ->` row.
fn load_file(path: &Path) -> Result<RuleSpec, Error> {
    let text = read(path)?;
    let second = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).nth(1);
    if second.is_some_and(|l| l.starts_with('{')) {
        return RuleSpec::delta(format::parse_delta(&text)?);
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    format::parse_rule(&text, |name| read(&base.join(name)))
}

fn load(input: &RuleInput) -> Result<RuleSpec, Error> {
    match (&input.rule, &input.delta) {
        (Some(path), _) => load_file(path),
        (None, Some(path)) => RuleSpec::delta(format::parse_delta(&read(path)?)?),
        (None, None) => Err(Error::Parse("give --rule or --delta".into())),
    }
}

/// Measurable rules live on profiles that are constant on blocks.
fn space_for(rule: &RuleSpec, m: usize, domain: Domain) -> ProfileSpace {
    let linear = matches!(domain, Domain::Linear);
    match rule.kind() {
        RuleKind::Measurable(d) => d.algebra().profile_space(m, linear),
        _ if linear => ProfileSpace::linear(m, rule.voters()),
        _ => ProfileSpace::partial(m, rule.voters()),
    }
}

fn observation(out: &mut String, label: &str, obs: &Observation) {
    let _ = writeln!(out, "witness {label} pair=({},{})", obs.a, obs.b);
    out.push_str(&format::write_profile(&obs.profile));
}

fn write_witness(w: &Witness) -> String {
    let mut out = String::new();
    match w {
        Witness::Pair(obs) => observation(&mut out, "profile", obs),
        Witness::Contrast { holds, fails } => {
            observation(&mut out, "holds", holds);
            observation(&mut out, "fails", fails);
        }
        Witness::AlternativePermutation { profile, rho } => {
            let image: Vec<String> = rho.image().iter().map(|&x| Alt(x).to_string()).collect();
            let _ = writeln!(out, "witness alternatives=({})", image.join(","));
            out.push_str(&format::write_profile(profile));
        }
        Witness::VoterPermutation { profile, sigma } => {
            let image: Vec<String> = sigma.image().iter().map(|i| (i + 1).to_string()).collect();
            let _ = writeln!(out, "witness voters=({})", image.join(","));
            out.push_str(&format::write_profile(profile));
        }
    }
    out
}

/// `count=K`, then each map under a `# rule i <note>` comment.
fn maps_text(maps: &[(DeltaMap, String)]) -> String {
    let mut out = format!("count={}\n", maps.len());
    for (i, (d, note)) in maps.iter().enumerate() {
        let _ = write!(out, "\n# rule {} {note}\n{}", i + 1, format::write_delta(d));
    }
    out
}

fn enumerate_orders(m: usize, linear: bool) -> Run {
    let orders = enumerate_preorders(m, linear)?;
    let blocks: Vec<String> = orders.iter().map(format::write_relation).collect();
    Ok(format!("count={}\n\n{}", orders.len(), blocks.join("\n")))
}

fn enumerate_rules(n: usize, out_dir: Option<&Path>, fmt: Format) -> Run {
    let maps = enumerate_delta_maps(n, true)?;
    if let Some(dir) = out_dir {
        let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        for (i, d) in maps.iter().enumerate() {
            let name = format!("rule_{:03}.delta", i + 1);
            let rule = format::write_rule(&RuleSpec::delta(d.clone())?, Some(&name))?;
            std::fs::write(dir.join(&name), format::write_delta(d)).map_err(io)?;
            std::fs::write(dir.join(format!("rule_{:03}.rule", i + 1)), rule).map_err(io)?;
        }
    }
    Ok(match fmt {
        Format::Text => {
            maps_text(&maps.iter().map(|d| (d.clone(), format!("chain={}", chain_of(d)))).collect::<Vec<_>>())
        }
        Format::Dot => maps.iter().map(render_dot).collect(),
    })
}

fn verify(input: &RuleInput, space: &SpaceArgs, axioms: &[AxiomKind], all: bool) -> Run {
    let mut kinds = if all { AxiomKind::ARROVIAN_SUITE.to_vec() } else { Vec::new() };
    kinds.extend(axioms.iter().filter(|k| !kinds.contains(k)).copied().collect::<Vec<_>>());
    if kinds.is_empty() {
        return Err(Failure::Input("give --axiom <name> or --all-axioms".into()));
    }
    let rule = load(input)?;
    let reports = check_axioms(&rule, &kinds, &space_for(&rule, space.m, space.domain))?;
    let mut out = String::new();
    for r in &reports {
        let _ = writeln!(out, "axiom={} holds={}", r.kind, r.holds);
        if let Some(w) = &r.witness {
            out.push_str(&write_witness(w));
        }
    }
    if reports.iter().all(|r| r.holds) {
        Ok(out)
    } else {
        Err(Failure::Violation(out))
    }
}

fn paranoid_check<R: VotingRule>(rule: &ArrovianRule<R>) -> Run {
    let n = rule.voters();
    if n > 2 {
        return Err(Failure::Input(format!("--paranoid quantifies over all profiles; needs n <= 2, got {n}")));
    }
    let mut tuples = 0;
    for n_set in VoterSet::all_subsets(n) {
        for k in n_set.complement(n).subsets() {
            for strong in [false, true] {
                if rule.is_decisive(k, n_set, strong)? != rule.is_decisive_exhaustive(k, n_set, strong)? {
                    return Err(Failure::Violation(format!("paranoid mismatch K={k} N={n_set} strong={strong}\n")));
                }
                tuples += 1;
            }
        }
    }
    Ok(format!("# paranoid: {tuples} decisiveness tests agree\n"))
}

fn extract(input: &RuleInput, space: &SpaceArgs, paranoid: bool, fmt: Format) -> Run {
    let rule = load(input)?;
    let verified = ArrovianRule::verify(&rule, space_for(&rule, space.m, space.domain))?;
    let mut out = if paranoid { paranoid_check(&verified)? } else { String::new() };
    if let RuleKind::Measurable(d) = rule.kind() {
        if fmt == Format::Dot {
            return Err(Failure::Input("dot output is for coalition maps on single voters".into()));
        }
        out.push_str(&format::write_dmap(&extract_dmap(&verified, d.algebra())?));
        return Ok(out);
    }
    let delta = verified.extract_delta()?;
    match fmt {
        Format::Text => {
            let _ = write!(out, "# chain={}\n{}", chain_of(&delta), format::write_delta(&delta));
        }
        Format::Dot => out.push_str(&render_dot(&delta)),
    }
    Ok(out)
}

fn classify(n: usize, m: usize, strong_unanimity: bool, linear_range: bool) -> Run {
    let mut kept = Vec::new();
    for d in enumerate_delta_maps(n, true)? {
        let seq = classify_linear_range(&d)?;
        if linear_range && seq.is_none() {
            continue;
        }
        if strong_unanimity {
            let rule = RuleSpec::delta(d.clone())?;
            if !check_axiom(&rule, AxiomKind::StrongUnanimity, &ProfileSpace::partial(m, n))?.holds {
                continue;
            }
        }
        let note = match seq {
            Some(s) => {
                let voters: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
                format!("chain={} seq=({})", chain_of(&d), voters.join(","))
            }
            None => format!("chain={}", chain_of(&d)),
        };
        kept.push((d, note));
    }
    Ok(maps_text(&kept))
}

fn extend(input: &RuleInput, m: usize) -> Run {
    let rule = load(input)?;
    let verified = ArrovianRule::verify(&rule, ProfileSpace::linear(m, rule.voters()))?;
    Ok(format::write_delta(&extend_from_linear(&verified)?))
}

fn compare(paths: &[PathBuf], space: &SpaceArgs) -> Run {
    let [left, right] = paths else {
        return Err(Failure::Input(format!("compare needs exactly two --rule files, got {}", paths.len())));
    };
    let (left, right) = (load_file(left)?, load_file(right)?);
    if left.voters() != right.voters() {
        return Err(Failure::Input(format!("voter counts differ: {} vs {}", left.voters(), right.voters())));
    }
    let relation = compare_outcomes(&left, &right, &space_for(&left, space.m, space.domain))?;
    Ok(format!("relation={relation}\n"))
}

fn render(input: &RuleInput, m: usize) -> Run {
    let rule = load(input)?;
    if let RuleKind::Delta(d) = rule.kind() {
        return Ok(render_dot(d));
    }
    let verified = ArrovianRule::verify(&rule, space_for(&rule, m, Domain::Partial))?;
    Ok(render_dot(&verified.extract_delta()?))
}

fn eval(input: &RuleInput, profile: &Path) -> Run {
    let rule = load(input)?;
    let profile = format::parse_profile(&read(profile)?)?;
    Ok(format::write_relation(&rule.evaluate(&profile)?))
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::EnumerateOrders { m, linear } => enumerate_orders(m, linear),
        Command::EnumerateRules { n, out_dir, format } => enumerate_rules(n, out_dir.as_deref(), format),
        Command::Verify { input, space, axiom, all_axioms } => verify(&input, &space, &axiom, all_axioms),
        Command::Extract { input, space, paranoid, format } => extract(&input, &space, paranoid, format),
        Command::Classify { n, m, require_strong_unanimity, linear_range } => {
            classify(n, m, require_strong_unanimity, linear_range)
        }
        Command::Extend { input, m } => extend(&input, m),
        Command::Compare { rule, space } => compare(&rule, &space),
        Command::RenderDot { input, m } => render(&input, m),
        Command::Eval { input, profile } => eval(&input, &profile),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Violation(out)) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
