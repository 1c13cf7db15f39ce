//! Brute-force state-space exploration and the executable checks built on
//! it: reachability comparisons, the lemma suites over reversible occurrence
//! nets, and the step-by-step correspondence between the reversible
//! unfolding and the reversible coloured encoding of a net.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coloured::{
    condition_colour, encode, reverse_coloured, translate_marking, ColouredError, ColouredMarking, ColouredNet,
    ColouredToken,
};
use crate::net::{FireError, Label, Marking, Net, TransId};
use crate::reversible::{reverse_occurrence, Directed, ReversibleNet};
use crate::traces::{
    equivalence_witness, parabolic_normal_form, shorten_to_forward, validate, Trace,
};
use crate::unfolding::{event_depth, unfold, Condition, Event, UnfoldError};

/// Default seed for sampled suites.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("unfolding depth {depth} is too shallow: {pruned} coloured step(s) have no counterpart in the prefix")]
    DepthInsufficient { depth: usize, pruned: usize },
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
    #[error(transparent)]
    Coloured(#[from] ColouredError),
    #[error(transparent)]
    Fire(#[from] FireError),
}

/// Exploration limits. `max_steps` bounds the BFS depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_states: usize,
    pub max_steps: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_states: 10_000,
            max_steps: usize::MAX,
        }
    }
}

/// A labelled transition system discovered by breadth-first search.
/// State `0` is the initial state.
#[derive(Debug, Clone)]
pub struct Lts<S: Ord, L> {
    pub states: Vec<S>,
    pub index: BTreeMap<S, usize>,
    pub edges: Vec<(usize, L, usize)>,
    pub truncated: bool,
}

impl<S: Ord + Clone, L> Lts<S, L> {
    pub fn state_set(&self) -> BTreeSet<S> {
        self.index.keys().cloned().collect()
    }

    pub fn initial(&self) -> &S {
        &self.states[0]
    }

    fn explore_with<F, I>(start: S, bounds: Bounds, mut successors: F) -> Self
    where
        F: FnMut(&S) -> I,
        I: IntoIterator<Item = (L, S)>,
    {
        let mut lts = Lts {
            states: vec![start.clone()],
            index: BTreeMap::from([(start, 0)]),
            edges: Vec::new(),
            truncated: false,
        };
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        while let Some((i, depth)) = queue.pop_front() {
            let succ: Vec<(L, S)> = successors(&lts.states[i]).into_iter().collect();
            if depth >= bounds.max_steps {
                if !succ.is_empty() {
                    lts.truncated = true;
                }
                continue;
            }
            for (label, next) in succ {
                let j = match lts.index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if lts.states.len() >= bounds.max_states {
                            lts.truncated = true;
                            continue;
                        }
                        let j = lts.states.len();
                        lts.states.push(next.clone());
                        lts.index.insert(next, j);
                        queue.push_back((j, depth + 1));
                        j
                    }
                };
                lts.edges.push((i, label, j));
            }
        }
        lts
    }
}

/// Reachability graph of `(net, m)`.
pub fn explore<P: Label, T: Label>(net: &Net<P, T>, m: &Marking<P>, bounds: Bounds) -> Lts<Marking<P>, T> {
    Lts::explore_with(m.clone(), bounds, |cur| {
        net.enabled(cur)
            .into_iter()
            .map(|t| {
                let next = net.fire(cur, &t).expect("enabled");
                (t, next)
            })
            .collect::<Vec<_>>()
    })
}

/// Reachability graph of a coloured net; one edge per distinct outcome.
pub fn explore_coloured<T: Label>(
    net: &ColouredNet<T>,
    m: &ColouredMarking,
    bounds: Bounds,
) -> Lts<ColouredMarking, T> {
    Lts::explore_with(m.clone(), bounds, |cur| coloured_successors(net, cur))
}

fn coloured_successors<T: Label>(net: &ColouredNet<T>, m: &ColouredMarking) -> Vec<(T, ColouredMarking)> {
    let mut out = BTreeSet::new();
    for (t, matches) in net.enabled(m) {
        for mm in matches {
            let next = net.fire(m, &t, &mm.substitution).expect("match enables");
            out.insert((t.clone(), next));
        }
    }
    out.into_iter().collect()
}

/// Forward-only restriction of a net over directed transitions.
pub fn forward_part<P: Label, T: Label>(net: &Net<P, Directed<T>>) -> Net<P, Directed<T>> {
    Net::new(
        net.places().cloned(),
        net.arcs()
            .filter(|(t, _)| t.is_forward())
            .map(|(t, a)| (t.clone(), a.pre.clone(), a.post.clone())),
    )
    .expect("sub-net of a valid net")
}

/// Forward against mixed reachability from one marking.
#[derive(Debug, Clone, Serialize)]
pub struct ReachReport {
    pub forward_states: usize,
    pub mixed_states: usize,
    pub equal: bool,
    pub truncated: bool,
    /// Markings reachable with reverse steps but not forward, rendered canonically.
    pub only_mixed: Vec<String>,
    pub only_forward: Vec<String>,
}

/// Compares the markings reachable with forward steps only against those
/// reachable with both directions.
pub fn check_forward_equals_mixed<P: Label, T: Label>(
    net: &Net<P, Directed<T>>,
    m0: &Marking<P>,
    bounds: Bounds,
) -> ReachReport {
    let fwd = explore(&forward_part(net), m0, bounds);
    let mixed = explore(net, m0, bounds);
    let (fs, ms) = (fwd.state_set(), mixed.state_set());
    ReachReport {
        forward_states: fs.len(),
        mixed_states: ms.len(),
        equal: fs == ms,
        truncated: fwd.truncated || mixed.truncated,
        only_mixed: ms.difference(&fs).map(|m| m.to_string()).collect(),
        only_forward: fs.difference(&ms).map(|m| m.to_string()).collect(),
    }
}

/// The lemma suites over reversible occurrence nets, plus the two
/// net-level checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Loop,
    Square,
    Parabolic,
    Shorten,
    Causal,
    Reach,
    Correspondence,
}

impl Suite {
    pub const LEMMAS: [Suite; 5] = [Suite::Loop, Suite::Square, Suite::Parabolic, Suite::Shorten, Suite::Causal];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Loop => "loop",
            Suite::Square => "square",
            Suite::Parabolic => "parabolic",
            Suite::Shorten => "shorten",
            Suite::Causal => "causal",
            Suite::Reach => "reach",
            Suite::Correspondence => "correspondence",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Suite::Loop,
            Suite::Square,
            Suite::Parabolic,
            Suite::Shorten,
            Suite::Causal,
            Suite::Reach,
            Suite::Correspondence,
        ]
        .into_iter()
        .find(|x| x.name() == s.trim())
        .ok_or_else(|| UnknownSuite(s.to_owned()))
    }
}

/// One record per executed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: usize,
    pub exhaustive: bool,
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<15} {:<5} {} instances ({})",
            self.suite.name(),
            if self.passed { "PASS" } else { "FAIL" },
            self.instances,
            if self.exhaustive { "exhaustive" } else { "sampled" }
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Limits for [`check_lemma_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub max_length: usize,
    pub max_states: usize,
    pub max_traces: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_length: 8,
            max_states: 10_000,
            max_traces: 2_000_000,
            samples: 5_000,
            seed: DEFAULT_SEED,
        }
    }
}

struct Tally {
    suite: Suite,
    instances: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Tally {
            suite,
            instances: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    fn finish(self, exhaustive: bool) -> SuiteReport {
        SuiteReport {
            suite: self.suite,
            instances: self.instances,
            exhaustive,
            passed: self.counterexample.is_none(),
            counterexample: self.counterexample,
        }
    }
}

fn loop_suite<P: Label, T: Label>(r: &ReversibleNet<P, T>, states: &[Marking<P>]) -> Tally {
    let mut tally = Tally::new(Suite::Loop);
    for m in states {
        for t in r.enabled(m) {
            let next = r.fire_directed(m, &t).expect("enabled");
            let back = r.fire_directed(&next, &t.inverse());
            tally.check(back.as_ref() == Ok(m), || match back {
                Ok(other) => format!("at {m}: {t} then {} reaches {other}", t.inverse()),
                Err(_) => format!("at {m}: {t} reaches {next} where {} is disabled", t.inverse()),
            });
        }
    }
    tally
}

fn square_suite<P: Label, T: Label>(r: &ReversibleNet<P, T>, states: &[Marking<P>]) -> Tally {
    let mut tally = Tally::new(Suite::Square);
    for m in states {
        let enabled = r.enabled(m);
        for t in &enabled {
            for u in &enabled {
                if t == u {
                    continue;
                }
                let co = r.steps_concurrent(t, u).unwrap_or(false);
                let clauses = r.concurrency_clauses(t, u).unwrap_or(false);
                tally.check(co == clauses, || {
                    format!("at {m}: {t} co {u} is {co} but the syntactic clauses give {clauses}")
                });
                if co {
                    let tu = r.fire_directed(m, t).and_then(|x| r.fire_directed(&x, u));
                    let ut = r.fire_directed(m, u).and_then(|x| r.fire_directed(&x, t));
                    tally.check(matches!((&tu, &ut), (Ok(a), Ok(b)) if a == b), || {
                        format!("at {m}: concurrent {t} and {u} do not commute ({tu:?} vs {ut:?})")
                    });
                }
            }
            let after = r.fire_directed(m, t).expect("enabled");
            for u in r.enabled(&after) {
                let a = r.steps_concurrent(t, &u).unwrap_or(false);
                let b = r.steps_concurrent(&t.inverse(), &u).unwrap_or(false);
                tally.check(a == b, || {
                    format!("at {m}: trace {t};{u} has {t} co {u} = {a} but {} co {u} = {b}", t.inverse())
                });
            }
        }
    }
    tally
}

/// Visits every trace from `m0` of length at most `max_length`.
fn for_each_trace<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    cur: &mut Trace<P, T>,
    max_length: usize,
    visit: &mut dyn FnMut(&Trace<P, T>),
) {
    visit(cur);
    if cur.len() == max_length {
        return;
    }
    let m = cur.final_marking().clone();
    for t in r.enabled(&m) {
        let next = r.fire_directed(&m, &t).expect("enabled");
        cur.push(t, next);
        for_each_trace(r, cur, max_length, visit);
        cur.pop();
    }
}

fn count_traces<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    m: &Marking<P>,
    remaining: usize,
    cap: usize,
    memo: &mut BTreeMap<(Marking<P>, usize), usize>,
) -> usize {
    if let Some(&n) = memo.get(&(m.clone(), remaining)) {
        return n;
    }
    let mut n = 1usize;
    if remaining > 0 {
        for t in r.enabled(m) {
            let next = r.fire_directed(m, &t).expect("enabled");
            n = n.saturating_add(count_traces(r, &next, remaining - 1, cap, memo));
            if n > cap {
                break;
            }
        }
    }
    memo.insert((m.clone(), remaining), n);
    n
}

fn random_trace<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    rng: &mut ChaCha8Rng,
    length: usize,
) -> Trace<P, T> {
    let mut tr = Trace::empty(r.initial_marking().clone());
    for _ in 0..length {
        let m = tr.final_marking().clone();
        let Some(t) = r.enabled(&m).choose(rng).cloned() else {
            break;
        };
        let next = r.fire_directed(&m, &t).expect("enabled");
        tr.push(t, next);
    }
    tr
}

struct TraceChecks<P: Ord, T> {
    parabolic: Tally,
    shorten: Tally,
    causal: Tally,
    forward_paths: BTreeMap<Marking<P>, Vec<Directed<T>>>,
    representatives: BTreeMap<Marking<P>, Trace<P, T>>,
    want: BTreeSet<Suite>,
}

impl<P: Label, T: Label> TraceChecks<P, T> {
    fn visit(&mut self, r: &ReversibleNet<P, T>, tr: &Trace<P, T>) {
        if self.want.contains(&Suite::Parabolic) {
            let res = parabolic_normal_form(r, tr);
            let ok = matches!(&res, Ok((b, f))
                if b.is_backward() && f.is_forward() && b.start() == tr.start()
                    && b.final_marking() == f.start() && f.final_marking() == tr.final_marking());
            self.parabolic.check(ok, || format!("{tr}: {res:?}"));
        }
        if self.want.contains(&Suite::Shorten) {
            match self.forward_paths.get(tr.final_marking()) {
                Some(path) => {
                    let witness = validate(r, tr.start().clone(), path.clone()).expect("forward path");
                    let res = shorten_to_forward(r, tr, &witness);
                    let ok = matches!(&res, Ok(s)
                        if s.is_forward() && s.len() <= tr.len() && s.start() == tr.start()
                            && s.final_marking() == tr.final_marking());
                    self.shorten.check(ok, || format!("{tr} with witness {witness}: {res:?}"));
                }
                None => self.shorten.check(false, || {
                    format!("{tr} ends at {} which is not forward reachable", tr.final_marking())
                }),
            }
        }
        if self.want.contains(&Suite::Causal) {
            match self.representatives.get(tr.final_marking()) {
                None => {
                    self.causal.check(true, String::new);
                    self.representatives.insert(tr.final_marking().clone(), tr.clone());
                }
                Some(rep) => {
                    let res = equivalence_witness(r, tr, rep);
                    self.causal.check(res.is_ok(), || {
                        format!("cofinal {tr} and {rep} are not related by rewrites: {}", res.unwrap_err())
                    });
                }
            }
        }
    }
}

/// Runs the requested lemma suites on `r` from its initial marking.
///
/// Traces are enumerated exhaustively when the state space has at most
/// `max_states` markings and there are at most `max_traces` traces of length
/// up to `max_length`; otherwise `samples` random traces are drawn from a
/// seeded generator.
pub fn check_lemma_suite<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    suites: &[Suite],
    cfg: &SuiteConfig,
) -> Vec<SuiteReport> {
    let want: BTreeSet<Suite> = suites.iter().copied().filter(|s| Suite::LEMMAS.contains(s)).collect();
    let bounds = Bounds {
        max_states: cfg.max_states,
        max_steps: usize::MAX,
    };
    let lts = explore(r.net(), r.initial_marking(), bounds);
    let states_exhaustive = !lts.truncated;
    let mut reports = Vec::new();

    if want.contains(&Suite::Loop) {
        reports.push(loop_suite(r, &lts.states).finish(states_exhaustive));
    }
    if want.contains(&Suite::Square) {
        reports.push(square_suite(r, &lts.states).finish(states_exhaustive));
    }
    if want.iter().any(|s| matches!(s, Suite::Parabolic | Suite::Shorten | Suite::Causal)) {
        let fwd = explore(&forward_part(r.net()), r.initial_marking(), bounds);
        let mut checks = TraceChecks {
            parabolic: Tally::new(Suite::Parabolic),
            shorten: Tally::new(Suite::Shorten),
            causal: Tally::new(Suite::Causal),
            forward_paths: shortest_paths(&fwd),
            representatives: BTreeMap::new(),
            want: want.clone(),
        };
        let total = count_traces(r, r.initial_marking(), cfg.max_length, cfg.max_traces, &mut BTreeMap::new());
        let exhaustive = states_exhaustive && total <= cfg.max_traces;
        if exhaustive {
            let mut cur = Trace::empty(r.initial_marking().clone());
            for_each_trace(r, &mut cur, cfg.max_length, &mut |tr| checks.visit(r, tr));
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _ in 0..cfg.samples {
                let tr = random_trace(r, &mut rng, cfg.max_length);
                checks.visit(r, &tr);
            }
        }
        for s in [Suite::Parabolic, Suite::Shorten, Suite::Causal] {
            if want.contains(&s) {
                let tally = match s {
                    Suite::Parabolic => std::mem::replace(&mut checks.parabolic, Tally::new(s)),
                    Suite::Shorten => std::mem::replace(&mut checks.shorten, Tally::new(s)),
                    _ => std::mem::replace(&mut checks.causal, Tally::new(s)),
                };
                reports.push(tally.finish(exhaustive));
            }
        }
    }
    reports.sort_by_key(|r| r.suite);
    reports
}

/// Step sequence from the initial state to every state along BFS parents.
fn shortest_paths<S: Ord + Clone, L: Clone>(lts: &Lts<S, L>) -> BTreeMap<S, Vec<L>> {
    let mut parent: Vec<Option<(usize, L)>> = vec![None; lts.states.len()];
    let mut seen = vec![false; lts.states.len()];
    seen[0] = true;
    for (i, l, j) in &lts.edges {
        if !seen[*j] {
            seen[*j] = true;
            parent[*j] = Some((*i, l.clone()));
        }
    }
    let mut out = BTreeMap::new();
    for (k, s) in lts.states.iter().enumerate() {
        if !seen[k] {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = k;
        while let Some((p, l)) = &parent[cur] {
            path.push(l.clone());
            cur = *p;
        }
        path.reverse();
        out.insert(s.clone(), path);
    }
    out
}

/// Outcome of [`check_correspondence`].
#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    pub depth: usize,
    pub steps: usize,
    pub states: usize,
    pub transitions: usize,
    /// Coloured forward steps that would need an event deeper than the prefix.
    pub pruned: usize,
    pub mismatches: Vec<String>,
    pub bijective: bool,
}

impl CorrespondenceReport {
    pub fn summary(&self) -> String {
        format!(
            "{} paired states, {} paired steps, {} steps beyond depth {}, {} mismatches: {}",
            self.states,
            self.transitions,
            self.pruned,
            self.depth,
            self.mismatches.len(),
            if self.bijective { "bijective" } else { "NOT bijective" }
        )
    }
}

/// Compares the reversible unfolding `rev U[net, m]` at `depth` with the
/// reversible coloured net `rev ⟦net, m⟧` on all runs of at most `steps`.
///
/// States are paired through [`translate_marking`]. At each paired state the
/// directed steps on both sides, labelled by original transition and
/// direction, must correspond one-to-one with paired results. Coloured
/// forward steps whose unfolding event would exceed `depth` are counted in
/// `pruned`; with `strict` set any pruning is an error.
pub fn check_correspondence(
    net: &Net,
    m: &Marking,
    depth: usize,
    steps: usize,
    strict: bool,
) -> Result<CorrespondenceReport, OracleError> {
    let u = unfold(net, m, depth)?;
    let ru = reverse_occurrence(&u.occurrence);
    let (cn, c0) = encode(net, m)?;
    let rc = reverse_coloured(&cn)?;

    let label = |d: &Directed<Event>| Directed {
        base: d.base.transition().clone(),
        direction: d.direction,
    };

    let mut report = CorrespondenceReport {
        depth,
        steps,
        states: 0,
        transitions: 0,
        pruned: 0,
        mismatches: Vec::new(),
        bijective: true,
    };
    let m0 = ru.initial_marking().clone();
    if translate_marking(&m0) != c0 {
        report
            .mismatches
            .push(format!("initial markings differ: {} vs {c0}", translate_marking(&m0)));
    }
    let mut seen: BTreeSet<Marking<Condition>> = BTreeSet::from([m0.clone()]);
    let mut queue = VecDeque::from([(m0, c0, 0usize)]);
    while let Some((mu, mc, d)) = queue.pop_front() {
        report.states += 1;
        if d >= steps {
            continue;
        }
        let mut unf_side: Vec<(Directed<TransId>, ColouredMarking, Marking<Condition>)> = Vec::new();
        for e in ru.enabled(&mu) {
            let next = ru.fire_directed(&mu, &e)?;
            unf_side.push((label(&e), translate_marking(&next), next));
        }
        let mut col_side: BTreeMap<(Directed<TransId>, ColouredMarking), ColouredMarking> = BTreeMap::new();
        for (t, matches) in rc.enabled(&mc) {
            for mm in matches {
                let next = rc.fire(&mc, &t, &mm.substitution)?;
                col_side.entry((t.clone(), next)).or_insert(mm.consumed);
            }
        }

        let unf_keys: BTreeSet<(Directed<TransId>, ColouredMarking)> =
            unf_side.iter().map(|(l, c, _)| (l.clone(), c.clone())).collect();
        if unf_keys.len() != unf_side.len() {
            report
                .mismatches
                .push(format!("at {mc}: two unfolding steps lead to the same coloured step"));
        }
        for (key, consumed) in &col_side {
            if unf_keys.contains(key) {
                continue;
            }
            if key.0.is_forward() && beyond_depth(net, &mu, &key.0.base, consumed, depth) {
                report.pruned += 1;
            } else {
                report
                    .mismatches
                    .push(format!("at {mc}: coloured step {} to {} has no unfolding counterpart", key.0, key.1));
            }
        }
        for key in unf_keys.iter().filter(|k| !col_side.contains_key(*k)) {
            report
                .mismatches
                .push(format!("at {mc}: unfolding step {} to {} has no coloured counterpart", key.0, key.1));
        }
        for (l, c, next) in unf_side {
            if col_side.contains_key(&(l, c.clone())) {
                report.transitions += 1;
                if seen.insert(next.clone()) {
                    queue.push_back((next, c, d + 1));
                }
            }
        }
    }
    report.bijective = report.mismatches.is_empty();
    if strict && report.pruned > 0 {
        return Err(OracleError::DepthInsufficient {
            depth,
            pruned: report.pruned,
        });
    }
    Ok(report)
}

/// True iff the conditions of `mu` matching the `consumed` coloured tokens
/// would form an event of `t` deeper than `depth`.
fn beyond_depth(net: &Net, mu: &Marking<Condition>, t: &TransId, consumed: &ColouredMarking, depth: usize) -> bool {
    let colours: BTreeMap<ColouredToken, &Condition> = mu
        .support()
        .map(|b| (ColouredToken::new(b.place().clone(), condition_colour(b)), b))
        .collect();
    let preset: BTreeSet<Condition> = consumed
        .0
        .support()
        .filter_map(|tok| colours.get(tok).map(|b| (*b).clone()))
        .collect();
    let image: Marking = preset.iter().map(|b| b.place().clone()).collect();
    if net.pre(t) != Some(&image) {
        return false;
    }
    event_depth(&Event::new(t.clone(), preset)) > depth
}

/// Checks that folding maps every run of the unfolding prefix to a run of
/// the net, and that every run of the net whose events fit in the prefix
/// has a counterpart in it.
#[derive(Debug, Clone, Serialize)]
pub struct FoldingReport {
    pub states: usize,
    pub pruned: usize,
    pub mismatches: Vec<String>,
}

pub fn check_unfolding_reductions(net: &Net, m: &Marking, depth: usize, steps: usize) -> Result<FoldingReport, OracleError> {
    let u = unfold(net, m, depth)?;
    let o = &u.occurrence;
    let mut report = FoldingReport {
        states: 0,
        pruned: 0,
        mismatches: Vec::new(),
    };
    let mut seen = BTreeSet::from([o.initial_marking().clone()]);
    let mut queue = VecDeque::from([(o.initial_marking().clone(), 0usize)]);
    while let Some((mu, d)) = queue.pop_front() {
        report.states += 1;
        if d >= steps {
            continue;
        }
        let folded = u.folding.fold(&mu)?;
        let mut images = BTreeSet::new();
        for e in o.net().enabled(&mu) {
            let next = o.net().fire(&mu, &e)?;
            let t = u.folding.fold_event(&e)?.clone();
            let expect = net.fire(&folded, &t);
            if expect.as_ref() != Ok(&u.folding.fold(&next)?) {
                report.mismatches.push(format!("event {e} does not fold to a firing of {t} at {folded}"));
            }
            images.insert(t);
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
        for t in net.enabled(&folded) {
            if !images.contains(&t) {
                report.pruned += 1;
            }
        }
    }
    Ok(report)
}

/// Event relations of an occurrence net recovered from its maximal runs
/// alone, without looking at the flow relation.
#[derive(Debug, Clone)]
pub struct RunRelations<T: Ord> {
    runs: Vec<Vec<T>>,
    events: BTreeSet<T>,
}

/// Enumerates the maximal firing sequences of `(net, m)`; `None` when there
/// are more than `max_runs` or a run is longer than the number of transitions
/// (so the net is not an occurrence net).
pub fn relations_from_runs<P: Label, T: Label>(net: &Net<P, T>, m: &Marking<P>, max_runs: usize) -> Option<RunRelations<T>> {
    fn go<P: Label, T: Label>(net: &Net<P, T>, m: &Marking<P>, run: &mut Vec<T>, out: &mut Vec<Vec<T>>, cap: usize) -> bool {
        if out.len() > cap || run.len() > net.transition_count() {
            return false;
        }
        let en = net.enabled(m);
        if en.is_empty() {
            out.push(run.clone());
            return true;
        }
        for t in en {
            let next = net.fire(m, &t).expect("enabled");
            run.push(t);
            let ok = go(net, &next, run, out, cap);
            run.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut runs = Vec::new();
    if !go(net, m, &mut Vec::new(), &mut runs, max_runs) || runs.len() > max_runs {
        return None;
    }
    Some(RunRelations {
        runs,
        events: net.transitions().cloned().collect(),
    })
}

impl<T: Label> RunRelations<T> {
    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    /// `e ⪯ e'`: every run containing `e'` fires `e` no later.
    pub fn precedes(&self, e: &T, e2: &T) -> bool {
        self.events.contains(e)
            && self.runs.iter().all(|r| match r.iter().position(|x| x == e2) {
                None => true,
                Some(j) => r[..=j].contains(e),
            })
            && self.runs.iter().any(|r| r.contains(e2))
    }

    /// `e # e'`: no run contains both.
    pub fn conflict(&self, e: &T, e2: &T) -> bool {
        !self.runs.iter().any(|r| r.contains(e) && r.contains(e2))
    }

    pub fn concurrent(&self, e: &T, e2: &T) -> bool {
        e != e2 && !self.conflict(e, e2) && !self.precedes(e, e2) && !self.precedes(e2, e)
    }
}
