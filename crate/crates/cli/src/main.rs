//! `revnet`: unfold, reverse, encode, simulate and check P/T nets.

use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use revnet::oracle::DEFAULT_SEED;
use revnet::{
    check_correspondence, check_forward_equals_mixed, check_lemma_suite, coloured_dot, directed_dot, encode,
    naive_reversal, net_dot, occurrence_dot, parse_net, reverse_coloured, reverse_occurrence, reversible_dot,
    run_repl, run_script, unfold, Bounds, Directed, EventLabels, Label, Marking, MatchPolicy, NetDocument,
    ReversibleNet, Simulator, Suite, SuiteConfig, Target,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "revnet", version, about = "Causally reversible place/transition nets")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the unfolding prefix up to a causal depth.
    Unfold {
        net: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Print the reversible unfolding: every event and its inverse.
    Reverse {
        net: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Treat the input as an occurrence net instead of unfolding it.
        #[arg(long)]
        as_occurrence: bool,
    },
    /// Print the history-coloured encoding of the net.
    Encode {
        net: PathBuf,
        /// Add the reverse transitions.
        #[arg(long)]
        reverse: bool,
    },
    /// Run a firing script, or step interactively.
    Simulate {
        net: PathBuf,
        #[arg(long, conflicts_with = "interactive", required_unless_present = "interactive")]
        script: Option<PathBuf>,
        #[arg(long)]
        interactive: bool,
        #[arg(long, value_enum, default_value_t = TargetArg::Coloured)]
        target: TargetArg,
        /// Prefix depth for `--target unfolding`.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::Strict)]
        policy: PolicyArg,
        /// Seed for `--policy random`.
        #[arg(long, env = "REVNET_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run check suites; exits with 1 when a check fails.
    Check {
        net: PathBuf,
        /// Comma-separated: loop, square, parabolic, shorten, causal, reach, correspondence.
        #[arg(long, value_delimiter = ',', required = true)]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Step bound for the correspondence check.
        #[arg(long, default_value_t = 6)]
        steps: usize,
        /// Maximum trace length for the lemma suites.
        #[arg(long, default_value_t = 8)]
        length: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Run `reach` on the naive reversal of the net itself.
        #[arg(long)]
        naive: bool,
        /// Treat the input as an occurrence net instead of unfolding it.
        #[arg(long)]
        as_occurrence: bool,
        /// Fail the correspondence check when the prefix is too shallow.
        #[arg(long)]
        strict: bool,
        /// Seed for sampled suites.
        #[arg(long, env = "REVNET_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Write a Graphviz rendering.
    ExportDot {
        net: PathBuf,
        #[arg(long, value_enum, default_value_t = View::Net)]
        view: View,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        as_occurrence: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Coloured,
    Unfolding,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Strict,
    First,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum View {
    Net,
    Naive,
    Unfolding,
    Reversible,
    Coloured,
    ColouredReversible,
}

enum Failure {
    Input(String),
    Check,
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn load(path: &Path) -> Result<NetDocument, Failure> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(input(&shown))?;
    parse_net(&text).map_err(input(&shown))
}

fn reversible(doc: &NetDocument, depth: usize, as_occurrence: bool) -> Result<Rev, Failure> {
    if as_occurrence {
        let r = ReversibleNet::from_net(doc.net.clone(), doc.marking.clone()).map_err(input(&doc.name))?;
        Ok(Rev::Plain(r))
    } else {
        let u = unfold(&doc.net, &doc.marking, depth).map_err(input(&doc.name))?;
        Ok(Rev::Unfolded(reverse_occurrence(&u.occurrence)))
    }
}

enum Rev {
    Plain(ReversibleNet<revnet::PlaceId, revnet::TransId>),
    Unfolded(ReversibleNet),
}

fn print_reversible<P: Label, T: Label>(r: &ReversibleNet<P, T>, name: impl Fn(&Directed<T>) -> String, place: impl Fn(&P) -> String) {
    let ms = |m: &Marking<P>| m.iter_expanded().map(&place).collect::<Vec<_>>().join(", ");
    println!("marking {}", ms(r.initial_marking()));
    for (t, a) in r.net().arcs() {
        println!("{} : {} -> {}", name(t), ms(&a.pre), ms(&a.post));
    }
}

fn cmd_reverse(doc: &NetDocument, depth: usize, as_occurrence: bool) -> Outcome {
    match reversible(doc, depth, as_occurrence)? {
        Rev::Plain(r) => print_reversible(&r, |d| d.to_string(), |p| p.to_string()),
        Rev::Unfolded(r) => {
            let labels = EventLabels::new(r.base());
            print_reversible(
                &r,
                |d| {
                    let tilde = if d.is_reverse() { "~" } else { "" };
                    format!("{tilde}{} {tilde}{}", labels.event(&d.base), d.base.transition())
                },
                |b| labels.condition(b),
            );
        }
    }
    Ok(())
}

fn cmd_encode(doc: &NetDocument, reverse: bool) -> Outcome {
    let (cn, m) = encode(&doc.net, &doc.marking).map_err(input(&doc.name))?;
    println!("marking {m}");
    if reverse {
        let rc = reverse_coloured(&cn).map_err(input(&doc.name))?;
        for (t, a) in rc.arcs() {
            println!("{t} : {} -> {}", a.pre, a.post);
        }
    } else {
        for (t, a) in cn.arcs() {
            println!("{t} : {} -> {}", a.pre, a.post);
        }
    }
    Ok(())
}

fn cmd_simulate(
    doc: &NetDocument,
    script: Option<&Path>,
    target: Target,
    policy: MatchPolicy,
) -> Outcome {
    match script {
        Some(path) => {
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(input(&shown))?;
            let tr = run_script(&doc.net, &doc.marking, target, policy, &text).map_err(input(&shown))?;
            print!("{tr}");
        }
        None => {
            let mut sim = Simulator::new(&doc.net, &doc.marking, target, policy).map_err(input(&doc.name))?;
            run_repl(&mut sim, io::stdin().lock(), io::stdout().lock()).map_err(input("terminal"))?;
        }
    }
    Ok(())
}

struct CheckArgs {
    suites: Vec<Suite>,
    depth: usize,
    steps: usize,
    length: usize,
    naive: bool,
    as_occurrence: bool,
    strict: bool,
    seed: u64,
}

/// One line of text and one JSON record per check.
fn run_checks(doc: &NetDocument, a: &CheckArgs) -> Result<Vec<(bool, String, Value)>, Failure> {
    let mut out = Vec::new();
    let lemmas: Vec<Suite> = a.suites.iter().copied().filter(|s| Suite::LEMMAS.contains(s)).collect();
    let cfg = SuiteConfig {
        max_length: a.length,
        seed: a.seed,
        ..SuiteConfig::default()
    };
    if !lemmas.is_empty() {
        let reports = match reversible(doc, a.depth, a.as_occurrence)? {
            Rev::Plain(r) => check_lemma_suite(&r, &lemmas, &cfg),
            Rev::Unfolded(r) => check_lemma_suite(&r, &lemmas, &cfg),
        };
        for r in reports {
            let v = serde_json::to_value(&r).map_err(input("report"))?;
            out.push((r.passed, r.to_string(), v));
        }
    }
    if a.suites.contains(&Suite::Reach) {
        let bounds = Bounds::default();
        let report = if a.naive {
            check_forward_equals_mixed(&naive_reversal(&doc.net), &doc.marking, bounds)
        } else {
            match reversible(doc, a.depth, a.as_occurrence)? {
                Rev::Plain(r) => check_forward_equals_mixed(r.net(), r.initial_marking(), bounds),
                Rev::Unfolded(r) => check_forward_equals_mixed(r.net(), r.initial_marking(), bounds),
            }
        };
        let mut line = format!(
            "{:<15} {:<5} forward {} mixed {}: {}{}",
            "reach",
            if report.equal { "PASS" } else { "FAIL" },
            report.forward_states,
            report.mixed_states,
            if report.equal { "equal" } else { "NOT equal" },
            if report.truncated { " (truncated)" } else { "" }
        );
        for m in &report.only_mixed {
            line.push_str(&format!("\n  only mixed: {m}"));
        }
        let mut v = serde_json::to_value(&report).map_err(input("report"))?;
        v["suite"] = json!("reach");
        v["naive"] = json!(a.naive);
        out.push((report.equal, line, v));
    }
    if a.suites.contains(&Suite::Correspondence) {
        match check_correspondence(&doc.net, &doc.marking, a.depth, a.steps, a.strict) {
            Ok(report) => {
                let line = format!(
                    "{:<15} {:<5} {}",
                    "correspondence",
                    if report.bijective { "PASS" } else { "FAIL" },
                    report.summary()
                );
                let mut v = serde_json::to_value(&report).map_err(input("report"))?;
                v["suite"] = json!("correspondence");
                out.push((report.bijective, line, v));
            }
            Err(e) => out.push((
                false,
                format!("{:<15} FAIL  {e}", "correspondence"),
                json!({"suite": "correspondence", "bijective": false, "error": e.to_string()}),
            )),
        }
    }
    Ok(out)
}

fn cmd_check(doc: &NetDocument, a: &CheckArgs, format: Format) -> Outcome {
    let results = run_checks(doc, a)?;
    let ok = results.iter().all(|(p, _, _)| *p);
    match format {
        Format::Text => {
            println!("net {}", doc.name);
            for (_, line, _) in &results {
                println!("{line}");
            }
        }
        Format::Json => {
            let v = json!({
                "net": doc.name,
                "passed": ok,
                "checks": results.iter().map(|(_, _, v)| v.clone()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&v).map_err(input("report"))?);
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_export(doc: &NetDocument, view: View, depth: usize, as_occurrence: bool) -> Outcome {
    let name = doc.name.as_str();
    let text = match view {
        View::Net => net_dot(name, &doc.net, &doc.marking),
        View::Naive => directed_dot(name, &naive_reversal(&doc.net), &doc.marking),
        View::Unfolding => {
            let u = unfold(&doc.net, &doc.marking, depth).map_err(input(name))?;
            occurrence_dot(name, &u.occurrence)
        }
        View::Reversible => match reversible(doc, depth, as_occurrence)? {
            Rev::Plain(r) => directed_dot(name, r.net(), r.initial_marking()),
            Rev::Unfolded(r) => reversible_dot(name, &r, r.initial_marking()),
        },
        View::Coloured | View::ColouredReversible => {
            let (cn, m) = encode(&doc.net, &doc.marking).map_err(input(name))?;
            if matches!(view, View::Coloured) {
                coloured_dot(name, &cn, &m, |_| false)
            } else {
                let rc = reverse_coloured(&cn).map_err(input(name))?;
                coloured_dot(name, &rc, &m, Directed::is_reverse)
            }
        }
    };
    print!("{text}");
    Ok(())
}

fn unfold_text(doc: &NetDocument, depth: usize) -> Result<String, Failure> {
    let u = unfold(&doc.net, &doc.marking, depth).map_err(input(&doc.name))?;
    Ok(format!("net {}\n{u}", doc.name))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Cmd::Unfold { net, depth } => {
            print!("{}", unfold_text(&load(&net)?, depth)?);
            Ok(())
        }
        Cmd::Reverse { net, depth, as_occurrence } => cmd_reverse(&load(&net)?, depth, as_occurrence),
        Cmd::Encode { net, reverse } => cmd_encode(&load(&net)?, reverse),
        Cmd::Simulate {
            net,
            script,
            interactive: _,
            target,
            depth,
            policy,
            seed,
        } => {
            let target = match target {
                TargetArg::Coloured => Target::Coloured,
                TargetArg::Unfolding => Target::Unfolding { depth },
            };
            let policy = match policy {
                PolicyArg::Strict => MatchPolicy::Strict,
                PolicyArg::First => MatchPolicy::First,
                PolicyArg::Random => MatchPolicy::Random(seed),
            };
            cmd_simulate(&load(&net)?, script.as_deref(), target, policy)
        }
        Cmd::Check {
            net,
            suite,
            depth,
            steps,
            length,
            format,
            naive,
            as_occurrence,
            strict,
            seed,
        } => {
            let args = CheckArgs {
                suites: suite,
                depth,
                steps,
                length,
                naive,
                as_occurrence,
                strict,
                seed,
            };
            cmd_check(&load(&net)?, &args, format)
        }
        Cmd::ExportDot {
            net,
            view,
            depth,
            as_occurrence,
        } => cmd_export(&load(&net)?, view, depth, as_occurrence),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
