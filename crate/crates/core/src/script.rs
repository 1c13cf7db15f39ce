//! Firing scripts and the interactive stepper.
//!
//! A script is a list of lines
//!
//! ```text
//! fire t1          // forward step
//! undo t1          // reverse step
//! fire t2 #2       // the second distinct match, in canonical order
//! fire t2 with x1=({},1), x2=({},1)
//! ```
//!
//! Scripts run either on `rev ⟦N⟧` (the coloured target) or on the reversal
//! of a finite unfolding prefix. Both report markings in the colour grammar.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloured::{
    encode, parse_substitution, reverse_coloured, translate_marking, ColouredError, ColouredMarking, ColouredNet,
    Substitution,
};
use crate::dot::{coloured_dot, reversible_dot};
use crate::net::{Marking, Net, TransId};
use crate::reversible::{reverse_occurrence, Directed, Direction, ReversibleNet};
use crate::unfolding::{unfold, Condition, Event, EventLabels, UnfoldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown transition `{name}`")]
    UnknownTransition { line: usize, name: String },
    #[error("line {line}: `{step}` is not enabled")]
    DisabledAt { line: usize, step: String },
    #[error("line {line}: `{step}` has {count} distinct matches; pick one with `#k` or `with`")]
    AmbiguousMatch { line: usize, step: String, count: usize },
    #[error("line {line}: `{step}` has {count} matches, #{index} is out of range")]
    ChoiceOutOfRange { line: usize, step: String, index: usize, count: usize },
    #[error("line {line}: the substitution does not enable `{step}`")]
    InvalidChoice { line: usize, step: String },
    #[error("line {line}: substitutions are only available on the coloured target")]
    Unsupported { line: usize },
    #[error(transparent)]
    Coloured(#[from] ColouredError),
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
}

/// How to resolve a step with several distinct outcomes and no selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchPolicy {
    /// Fail with [`ScriptError::AmbiguousMatch`].
    #[default]
    Strict,
    /// Take the first match in canonical order.
    First,
    /// Pick uniformly with a seeded generator.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Auto,
    /// 1-based.
    Index(usize),
    With(Substitution),
}

/// One script line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub direction: Direction,
    pub transition: String,
    pub selector: Selector,
}

impl Command {
    pub fn step(&self) -> Directed<TransId> {
        Directed {
            base: TransId::new(self.transition.clone()),
            direction: self.direction,
        }
    }
}

fn verb(d: Direction) -> &'static str {
    match d {
        Direction::Forward => "fire",
        Direction::Reverse => "undo",
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", verb(self.direction), self.transition)?;
        match &self.selector {
            Selector::Auto => Ok(()),
            Selector::Index(k) => write!(f, " #{k}"),
            Selector::With(s) => {
                let binds: Vec<String> = s.0.iter().map(|(x, c)| format!("{x}={c}")).collect();
                write!(f, " with {}", binds.join(", "))
            }
        }
    }
}

/// Parses one line; `None` for blank and comment-only lines.
pub fn parse_command(text: &str, line: usize) -> Result<Option<Command>, ScriptError> {
    let body = text.split("//").next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let syntax = |message: String| ScriptError::Syntax { line, message };
    let (word, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
    let direction = match word {
        "fire" => Direction::Forward,
        "undo" => Direction::Reverse,
        other => return Err(syntax(format!("expected `fire` or `undo`, found `{other}`"))),
    };
    let rest = rest.trim_start();
    let (name, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    if name.is_empty() {
        return Err(syntax("expected a transition name".into()));
    }
    let rest = rest.trim();
    let selector = if rest.is_empty() {
        Selector::Auto
    } else if let Some(k) = rest.strip_prefix('#') {
        match k.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Selector::Index(k),
            _ => return Err(syntax(format!("bad match index `#{k}`"))),
        }
    } else if let Some(binds) = rest.strip_prefix("with") {
        Selector::With(parse_substitution(binds).map_err(|e| syntax(format!("bad substitution: {e}")))?)
    } else {
        return Err(syntax(format!("unexpected `{rest}`")));
    };
    Ok(Some(Command {
        direction,
        transition: name.to_owned(),
        selector,
    }))
}

/// Parses a whole script, numbering lines from 1.
pub fn parse_script(text: &str) -> Result<Vec<(usize, Command)>, ScriptError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        if let Some(c) = parse_command(l, i + 1)? {
            out.push((i + 1, c));
        }
    }
    Ok(out)
}

/// Which net a script runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Coloured,
    Unfolding { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum State {
    Coloured(ColouredMarking),
    Unfolding(Marking<Condition>),
}

enum Engine {
    Coloured(ColouredNet<Directed<TransId>>),
    Unfolding(Box<ReversibleNet<Condition, Event>>, EventLabels),
}

/// One possible outcome of a step.
#[derive(Debug, Clone)]
pub struct Choice {
    /// The substitution, or the event name on the unfolding target.
    pub witness: String,
    state: State,
}

/// The markings visited by a run, one line per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub initial: ColouredMarking,
    pub steps: Vec<(String, ColouredMarking)>,
}

impl Transcript {
    pub fn final_marking(&self) -> &ColouredMarking {
        self.steps.last().map_or(&self.initial, |(_, m)| m)
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "init => {}", self.initial)?;
        for (c, m) in &self.steps {
            writeln!(f, "{c} => {m}")?;
        }
        Ok(())
    }
}

/// Steps through a reversible net one command at a time.
pub struct Simulator {
    engine: Engine,
    known: Vec<TransId>,
    policy: MatchPolicy,
    rng: ChaCha8Rng,
    initial: State,
    history: Vec<(String, State)>,
}

impl Simulator {
    pub fn new(net: &Net, m: &Marking, target: Target, policy: MatchPolicy) -> Result<Self, ScriptError> {
        let (engine, initial) = match target {
            Target::Coloured => {
                let (cn, cm) = encode(net, m)?;
                (Engine::Coloured(reverse_coloured(&cn)?), State::Coloured(cm))
            }
            Target::Unfolding { depth } => {
                let u = unfold(net, m, depth)?;
                let labels = EventLabels::new(&u.occurrence);
                let r = reverse_occurrence(&u.occurrence);
                let m0 = r.initial_marking().clone();
                (Engine::Unfolding(Box::new(r), labels), State::Unfolding(m0))
            }
        };
        let seed = match policy {
            MatchPolicy::Random(s) => s,
            _ => 0,
        };
        Ok(Simulator {
            engine,
            known: net.transitions().cloned().collect(),
            policy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            initial,
            history: Vec::new(),
        })
    }

    fn state(&self) -> &State {
        self.history.last().map_or(&self.initial, |(_, s)| s)
    }

    fn render(s: &State) -> ColouredMarking {
        match s {
            State::Coloured(m) => m.clone(),
            State::Unfolding(m) => translate_marking(m),
        }
    }

    /// The current marking in the colour grammar.
    pub fn marking(&self) -> ColouredMarking {
        Self::render(self.state())
    }

    /// Distinct outcomes of `step` from the current marking, in canonical order.
    pub fn choices(&self, step: &Directed<TransId>) -> Vec<Choice> {
        let mut out: Vec<Choice> = Vec::new();
        match (&self.engine, self.state()) {
            (Engine::Coloured(cn), State::Coloured(m)) => {
                for mt in cn.matches(m, step) {
                    let Ok(next) = cn.fire(m, step, &mt.substitution) else { continue };
                    let next = State::Coloured(next);
                    if !out.iter().any(|c| c.state == next) {
                        out.push(Choice {
                            witness: mt.substitution.to_string(),
                            state: next,
                        });
                    }
                }
            }
            (Engine::Unfolding(r, labels), State::Unfolding(m)) => {
                for d in r.enabled(m) {
                    if d.direction != step.direction || d.base.transition() != &step.base {
                        continue;
                    }
                    let Ok(next) = r.fire_directed(m, &d) else { continue };
                    let next = State::Unfolding(next);
                    if !out.iter().any(|c| c.state == next) {
                        out.push(Choice {
                            witness: labels.event(&d.base),
                            state: next,
                        });
                    }
                }
            }
            _ => unreachable!("engine and state always agree"),
        }
        out
    }

    /// Every enabled step with its choices, forward steps first.
    pub fn enabled(&self) -> Vec<(Directed<TransId>, Vec<Choice>)> {
        let mut out = Vec::new();
        for dir in [Direction::Forward, Direction::Reverse] {
            for t in &self.known {
                let d = Directed {
                    base: t.clone(),
                    direction: dir,
                };
                let cs = self.choices(&d);
                if !cs.is_empty() {
                    out.push((d, cs));
                }
            }
        }
        out
    }

    /// Runs one command; `line` is used in error reports.
    pub fn execute(&mut self, cmd: &Command, line: usize) -> Result<ColouredMarking, ScriptError> {
        let step = cmd.step();
        if !self.known.contains(&step.base) {
            return Err(ScriptError::UnknownTransition {
                line,
                name: cmd.transition.clone(),
            });
        }
        let step_name = step.to_string();
        let next = match &cmd.selector {
            Selector::With(s) => {
                let (Engine::Coloured(cn), State::Coloured(m)) = (&self.engine, self.state()) else {
                    return Err(ScriptError::Unsupported { line });
                };
                match cn.fire(m, &step, s) {
                    Ok(next) if next.is_ground() => State::Coloured(next),
                    _ => return Err(ScriptError::InvalidChoice { line, step: step_name }),
                }
            }
            sel => {
                let mut cs = self.choices(&step);
                let count = cs.len();
                let k = match (sel, count) {
                    (_, 0) => return Err(ScriptError::DisabledAt { line, step: step_name }),
                    (Selector::Index(k), _) if *k > count => {
                        return Err(ScriptError::ChoiceOutOfRange {
                            line,
                            step: step_name,
                            index: *k,
                            count,
                        })
                    }
                    (Selector::Index(k), _) => k - 1,
                    (_, 1) => 0,
                    _ => match self.policy {
                        MatchPolicy::Strict => {
                            return Err(ScriptError::AmbiguousMatch { line, step: step_name, count })
                        }
                        MatchPolicy::First => 0,
                        MatchPolicy::Random(_) => self.rng.gen_range(0..count),
                    },
                };
                cs.swap_remove(k).state
            }
        };
        self.history.push((cmd.to_string(), next));
        Ok(self.marking())
    }

    /// Drops the last step; `false` at the initial marking.
    pub fn back(&mut self) -> bool {
        self.history.pop().is_some()
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            initial: Self::render(&self.initial),
            steps: self.history.iter().map(|(c, s)| (c.clone(), Self::render(s))).collect(),
        }
    }

    /// DOT of the target net at the current marking.
    pub fn dot(&self) -> String {
        match (&self.engine, self.state()) {
            (Engine::Coloured(cn), State::Coloured(m)) => coloured_dot("rev", cn, m, Directed::is_reverse),
            (Engine::Unfolding(r, _), State::Unfolding(m)) => reversible_dot("rev", r, m),
            _ => unreachable!("engine and state always agree"),
        }
    }
}

/// Runs `script` from the initial marking and returns the transcript.
pub fn run_script(net: &Net, m: &Marking, target: Target, policy: MatchPolicy, script: &str) -> Result<Transcript, ScriptError> {
    let cmds = parse_script(script)?;
    let mut sim = Simulator::new(net, m, target, policy)?;
    for (line, c) in &cmds {
        sim.execute(c, *line)?;
    }
    Ok(sim.transcript())
}

fn write_menu(sim: &Simulator, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "marking {}", sim.marking())?;
    let enabled = sim.enabled();
    if enabled.is_empty() {
        writeln!(out, "no enabled steps")?;
    }
    for (d, cs) in enabled {
        let head = format!("{} {}", verb(d.direction), d.base);
        if cs.len() == 1 {
            writeln!(out, "  {head}")?;
        } else {
            for (k, c) in cs.iter().enumerate() {
                writeln!(out, "  {head} #{} {}", k + 1, c.witness)?;
            }
        }
    }
    Ok(())
}

/// An interactive session. Besides script lines it accepts `back`,
/// `show`, `show dot`, `history`, `help` and `quit`. Errors are reported
/// and the session goes on.
pub fn run_repl(sim: &mut Simulator, input: impl BufRead, mut out: impl Write) -> io::Result<()> {
    write_menu(sim, &mut out)?;
    let mut lines = input.lines();
    let mut n = 0;
    loop {
        write!(out, "> ")?;
        out.flush()?;
        let Some(line) = lines.next() else {
            writeln!(out)?;
            return Ok(());
        };
        let line = line?;
        n += 1;
        match line.split("//").next().unwrap_or("").trim() {
            "" => continue,
            "quit" | "exit" => return Ok(()),
            "help" => {
                writeln!(out, "fire t [#k | with x=c, ...], undo t [...], back, show, show dot, history, quit")?;
                continue;
            }
            "back" => {
                if !sim.back() {
                    writeln!(out, "error: already at the initial marking")?;
                    continue;
                }
            }
            "show" => {}
            "show dot" => {
                write!(out, "{}", sim.dot())?;
                continue;
            }
            "history" => {
                write!(out, "{}", sim.transcript())?;
                continue;
            }
            text => match parse_command(text, n) {
                Ok(Some(c)) => {
                    if let Err(e) = sim.execute(&c, n) {
                        writeln!(out, "error: {e}")?;
                        continue;
                    }
                }
                Ok(None) => continue,
                Err(e) => {
                    writeln!(out, "error: {e}")?;
                    continue;
                }
            },
        }
        write_menu(sim, &mut out)?;
    }
}

/// Groups the enabled steps of a simulator by name, for tests and menus.
pub fn enabled_summary(sim: &Simulator) -> BTreeMap<String, usize> {
    sim.enabled().into_iter().map(|(d, cs)| (d.to_string(), cs.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const N2_AFTER_T1: &str = "{b(({},1)),c(({},1)),d(({t1({a(({},1))})},1))}";

    fn coloured(net: (Net, Marking)) -> Simulator {
        Simulator::new(&net.0, &net.1, Target::Coloured, MatchPolicy::Strict).unwrap()
    }

    #[test]
    fn parses_lines() {
        assert_eq!(parse_command("  // nothing", 1).unwrap(), None);
        let c = parse_command("undo t3 #2 // second", 4).unwrap().unwrap();
        assert_eq!((c.direction, c.transition.as_str(), &c.selector), (Direction::Reverse, "t3", &Selector::Index(2)));
        assert_eq!(c.to_string(), "undo t3 #2");
        let c = parse_command("fire t2 with x1=({},1), x2=({},1)", 1).unwrap().unwrap();
        assert_eq!(c.to_string(), "fire t2 with x1=({},1), x2=({},1)");
        assert!(matches!(parse_command("shoot t1", 7), Err(ScriptError::Syntax { line: 7, .. })));
        assert!(matches!(parse_command("fire t1 #0", 2), Err(ScriptError::Syntax { line: 2, .. })));
        assert!(matches!(parse_command("fire", 2), Err(ScriptError::Syntax { .. })));
    }

    #[test]
    fn n2_forward_then_back() {
        let (n, m) = catalog::n2();
        let tr = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1\nfire t3\nundo t3\nundo t1\n").unwrap();
        assert_eq!(tr.steps[0].1.to_string(), N2_AFTER_T1);
        assert_eq!(tr.steps[1].1.to_string(), "{b(({},1)),e(({t3({c(({},1)),d(({t1({a(({},1))})},1))})},1))}");
        assert_eq!(tr.steps[2].1.to_string(), N2_AFTER_T1);
        assert_eq!(tr.final_marking().to_string(), "{a(({},1)),b(({},1)),c(({},1))}");
        assert_eq!(tr.final_marking(), &tr.initial);
    }

    #[test]
    fn n2_history_blocks_wrong_undo() {
        let (n, m) = catalog::n2();
        let err = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1\nfire t3\nundo t3\nundo t2").unwrap_err();
        assert_eq!(err, ScriptError::DisabledAt { line: 4, step: "~t2".into() });
        let mut sim = coloured(catalog::n2());
        for c in ["fire t1", "fire t3", "undo t3"] {
            sim.execute(&parse_command(c, 1).unwrap().unwrap(), 1).unwrap();
        }
        let en = enabled_summary(&sim);
        assert!(en.contains_key("~t1") && en.contains_key("t3") && !en.contains_key("~t2"));
    }

    #[test]
    fn n1_t2_has_one_match() {
        let (n, m) = catalog::n1();
        let tr = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t2").unwrap();
        assert_eq!(tr.final_marking().to_string(), "{a(({},1)),d(({},1)),e(({t2({b(({},1)),c(({},1))})},1))}");
    }

    #[test]
    fn n3_nested_histories() {
        let (n, m) = catalog::n3();
        let mut sim = coloured((n.clone(), m.clone()));
        assert_eq!(enabled_summary(&sim).into_iter().collect::<Vec<_>>(), vec![("t1".to_owned(), 1)]);
        let tr = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1\nfire t1").unwrap();
        let ma = "({t1({a(({},1))})},1)";
        assert_eq!(
            tr.final_marking().to_string(),
            format!("{{a(({{t1({{a({ma})}})}},1)),b(({{t1({{a(({{}},1))}})}},1)),b(({{t1({{a({ma})}})}},1))}}")
        );
        for _ in 0..2 {
            sim.execute(&parse_command("fire t1", 1).unwrap().unwrap(), 1).unwrap();
        }
        assert_eq!(enabled_summary(&sim), BTreeMap::from([("t1".to_owned(), 1), ("~t1".to_owned(), 1)]));
        let back = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1\nfire t1\nundo t1\nundo t1").unwrap();
        assert_eq!(back.final_marking().to_string(), "{a(({},1))}");
    }

    #[test]
    fn ambiguity_policies() {
        let (n, m) = catalog::n5();
        let err = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1").unwrap_err();
        assert_eq!(err, ScriptError::AmbiguousMatch { line: 1, step: "t1".into(), count: 2 });
        let first = run_script(&n, &m, Target::Coloured, MatchPolicy::First, "fire t1").unwrap();
        let picked = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1 #1").unwrap();
        assert_eq!(first.final_marking(), picked.final_marking());
        let second = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1 #2").unwrap();
        assert_ne!(first.final_marking(), second.final_marking());
        let by_subst = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1 with x1=({},2)").unwrap();
        assert_eq!(by_subst.final_marking(), second.final_marking());
        assert!(matches!(
            run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1 #3"),
            Err(ScriptError::ChoiceOutOfRange { count: 2, .. })
        ));
        assert!(matches!(
            run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "fire t1 with x1=({},7)"),
            Err(ScriptError::InvalidChoice { .. })
        ));
        let r1 = run_script(&n, &m, Target::Coloured, MatchPolicy::Random(9), "fire t1\nfire t1").unwrap();
        let r2 = run_script(&n, &m, Target::Coloured, MatchPolicy::Random(9), "fire t1\nfire t1").unwrap();
        assert_eq!(r1.to_string(), r2.to_string());
    }

    #[test]
    fn unfolding_target_agrees() {
        let (n, m) = catalog::n2();
        let s = "fire t1\nfire t3\nundo t3\nundo t1\nfire t2";
        let a = run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, s).unwrap();
        let b = run_script(&n, &m, Target::Unfolding { depth: 3 }, MatchPolicy::Strict, s).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert!(matches!(
            run_script(&n, &m, Target::Unfolding { depth: 3 }, MatchPolicy::Strict, "fire t1 with x1=({},1)"),
            Err(ScriptError::Unsupported { line: 1 })
        ));
    }

    #[test]
    fn unknown_transition() {
        let (n, m) = catalog::n1();
        assert_eq!(
            run_script(&n, &m, Target::Coloured, MatchPolicy::Strict, "\nfire t9").unwrap_err(),
            ScriptError::UnknownTransition { line: 2, name: "t9".into() }
        );
    }

    #[test]
    fn repl_session() {
        let mut sim = coloured(catalog::n3());
        let input = b"fire t1\nundo t2\nback\nback\nhistory\nshow dot\nquit\nfire t1\n";
        let mut out = Vec::new();
        run_repl(&mut sim, &input[..], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("marking {a(({},1))}\n  fire t1\n> "));
        assert!(text.contains("  undo t1\n"));
        assert!(text.contains("error: line 2: unknown transition `t2`"));
        assert!(text.contains("error: already at the initial marking"));
        assert!(text.contains("init => {a(({},1))}\n"));
        assert!(text.contains("digraph \"rev\""));
        assert!(sim.transcript().steps.is_empty());
    }
}
