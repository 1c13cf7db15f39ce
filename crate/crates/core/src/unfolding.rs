//! Occurrence nets, the causal relations `⪯`, `#₀`, `#` and `co`, and the
//! depth-bounded unfolding of a P/T net together with its folding morphism.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::multiset::Multiset;
use crate::net::{Label, Marking, MorphismError, Net, NetError, NetMorphism, PlaceId, TransId};

/// A place or a transition of some net.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node<P, T> {
    Place(P),
    Trans(T),
}

impl<P: fmt::Display, T: fmt::Display> fmt::Display for Node<P, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Place(p) => write!(f, "{p}"),
            Node::Trans(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnfoldError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("not an occurrence net: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotOccurrenceNet { violations: Vec<Violation> },
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// Flow order and conflict of an arbitrary net, computed once.
///
/// For every node the set of nodes that reach it through the flow relation
/// is stored, so `⪯` is a lookup and `#` a scan over two ancestor sets.
#[derive(Debug, Clone)]
pub struct CausalStructure<P: Ord, T: Ord> {
    strict_past: BTreeMap<Node<P, T>, BTreeSet<Node<P, T>>>,
    presets: BTreeMap<T, BTreeSet<P>>,
}

impl<P: Label, T: Label> CausalStructure<P, T> {
    pub fn new(net: &Net<P, T>) -> Self {
        let mut preds: BTreeMap<Node<P, T>, Vec<Node<P, T>>> = BTreeMap::new();
        for p in net.places() {
            preds.entry(Node::Place(p.clone())).or_default();
        }
        for (t, arcs) in net.arcs() {
            let tn = Node::Trans(t.clone());
            preds
                .entry(tn.clone())
                .or_default()
                .extend(arcs.pre.support().map(|p| Node::Place(p.clone())));
            for p in arcs.post.support() {
                preds.entry(Node::Place(p.clone())).or_default().push(tn.clone());
            }
        }
        let mut strict_past = BTreeMap::new();
        for node in preds.keys() {
            let mut seen = BTreeSet::new();
            let mut queue: VecDeque<&Node<P, T>> = preds[node].iter().collect();
            while let Some(n) = queue.pop_front() {
                if seen.insert(n.clone()) {
                    queue.extend(preds[n].iter());
                }
            }
            strict_past.insert(node.clone(), seen);
        }
        let presets = net
            .arcs()
            .map(|(t, a)| (t.clone(), a.pre.support().cloned().collect()))
            .collect();
        CausalStructure { strict_past, presets }
    }

    pub fn contains(&self, x: &Node<P, T>) -> bool {
        self.strict_past.contains_key(x)
    }

    fn check(&self, x: &Node<P, T>) -> Result<(), UnfoldError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(UnfoldError::UnknownNode(x.to_string()))
        }
    }

    /// True iff the flow relation has a cycle.
    pub fn is_cyclic(&self) -> bool {
        self.strict_past.iter().any(|(n, past)| past.contains(n))
    }

    /// `x ⪯ y`: reflexive-transitive closure of the flow relation.
    pub fn precedes(&self, x: &Node<P, T>, y: &Node<P, T>) -> Result<bool, UnfoldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x == y || self.strict_past[y].contains(x))
    }

    /// Transitions `t` with `t ⪯ x`.
    pub fn causes(&self, x: &Node<P, T>) -> Result<BTreeSet<T>, UnfoldError> {
        self.check(x)?;
        let mut out: BTreeSet<T> = self.strict_past[x]
            .iter()
            .filter_map(|n| match n {
                Node::Trans(t) => Some(t.clone()),
                Node::Place(_) => None,
            })
            .collect();
        if let Node::Trans(t) = x {
            out.insert(t.clone());
        }
        Ok(out)
    }

    /// `t1 #₀ t2`: distinct transitions with overlapping presets.
    pub fn immediate_conflict(&self, t1: &T, t2: &T) -> Result<bool, UnfoldError> {
        let (p1, p2) = match (self.presets.get(t1), self.presets.get(t2)) {
            (Some(p1), Some(p2)) => (p1, p2),
            (None, _) => return Err(UnfoldError::UnknownNode(t1.to_string())),
            (_, None) => return Err(UnfoldError::UnknownNode(t2.to_string())),
        };
        Ok(t1 != t2 && !p1.is_disjoint(p2))
    }

    /// `x # y`: some cause of `x` is in immediate conflict with some cause of `y`.
    pub fn conflict(&self, x: &Node<P, T>, y: &Node<P, T>) -> Result<bool, UnfoldError> {
        let cx = self.causes(x)?;
        let cy = self.causes(y)?;
        for e1 in &cx {
            for e2 in &cy {
                if self.immediate_conflict(e1, e2)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// `x co y`: distinct, causally unrelated and not in conflict.
    pub fn concurrent(&self, x: &Node<P, T>, y: &Node<P, T>) -> Result<bool, UnfoldError> {
        Ok(x != y
            && !self.precedes(x, y)?
            && !self.precedes(y, x)?
            && !self.conflict(x, y)?)
    }

    /// `CO(X)`. The finiteness side condition always holds on finite nets.
    pub fn co_set<'a, I>(&self, xs: I) -> Result<bool, UnfoldError>
    where
        I: IntoIterator<Item = &'a Node<P, T>>,
        P: 'a,
        T: 'a,
    {
        let xs: Vec<&Node<P, T>> = xs.into_iter().collect();
        for x in &xs {
            self.check(x)?;
        }
        for (i, x) in xs.iter().enumerate() {
            for y in &xs[i + 1..] {
                if x != y && !self.concurrent(x, y)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// One failed clause of the occurrence-net definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Cyclic,
    NotSafe { marking: String },
    InitialNotMinimal,
    BackwardConflict { place: String },
    SelfConflict { transition: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cyclic => f.write_str("the flow relation is cyclic"),
            Violation::NotSafe { marking } => write!(f, "reachable marking {marking} is not a set"),
            Violation::InitialNotMinimal => {
                f.write_str("the initial marking is not the set of minimal places")
            }
            Violation::BackwardConflict { place } => {
                write!(f, "backward conflict: place `{place}` has several producers")
            }
            Violation::SelfConflict { transition } => {
                write!(f, "transition `{transition}` is in conflict with itself")
            }
        }
    }
}

/// Outcome of [`is_occurrence_net`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OccurrenceCheck {
    pub violations: Vec<Violation>,
}

impl OccurrenceCheck {
    pub fn is_occurrence_net(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Safety exploration stops after this many markings on cyclic nets.
const SAFETY_EXPLORATION_LIMIT: usize = 10_000;

/// Evaluates the five clauses of the occurrence-net definition.
///
/// 1-safety is decided by exhaustive forward exploration, which terminates
/// on acyclic nets; on cyclic nets it is bounded and may miss violations.
pub fn is_occurrence_net<P: Label, T: Label>(net: &Net<P, T>, m: &Marking<P>) -> OccurrenceCheck {
    let causal = CausalStructure::new(net);
    let mut violations = Vec::new();
    if causal.is_cyclic() {
        violations.push(Violation::Cyclic);
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([m.clone()]);
    while let Some(cur) = queue.pop_front() {
        if seen.len() >= SAFETY_EXPLORATION_LIMIT || !seen.insert(cur.clone()) {
            continue;
        }
        if !cur.is_set() {
            violations.push(Violation::NotSafe {
                marking: cur.to_string(),
            });
            break;
        }
        for t in net.enabled(&cur) {
            queue.push_back(net.fire(&cur, &t).expect("enabled"));
        }
    }
    let minimal: Marking<P> = net
        .places()
        .filter(|p| net.producers(p).is_empty())
        .cloned()
        .collect();
    if &minimal != m {
        violations.push(Violation::InitialNotMinimal);
    }
    for p in net.places() {
        if net.producers(p).len() > 1 {
            violations.push(Violation::BackwardConflict {
                place: p.to_string(),
            });
        }
    }
    for t in net.transitions() {
        let node = Node::Trans(t.clone());
        if causal.conflict(&node, &node).expect("own node") {
            violations.push(Violation::SelfConflict {
                transition: t.to_string(),
            });
        }
    }
    OccurrenceCheck { violations }
}

/// A net satisfying the occurrence-net clauses, with its initial marking
/// and precomputed causal structure.
#[derive(Debug, Clone)]
pub struct OccurrenceNet<P: Ord = Condition, T: Ord = Event> {
    net: Net<P, T>,
    initial: Marking<P>,
    causal: CausalStructure<P, T>,
}

impl<P: Label, T: Label> OccurrenceNet<P, T> {
    pub fn new(net: Net<P, T>, initial: Marking<P>) -> Result<Self, UnfoldError> {
        net.check_marking(&initial)?;
        let check = is_occurrence_net(&net, &initial);
        if !check.is_occurrence_net() {
            return Err(UnfoldError::NotOccurrenceNet {
                violations: check.violations,
            });
        }
        Ok(Self::new_unchecked(net, initial))
    }

    fn new_unchecked(net: Net<P, T>, initial: Marking<P>) -> Self {
        let causal = CausalStructure::new(&net);
        OccurrenceNet {
            net,
            initial,
            causal,
        }
    }

    pub fn net(&self) -> &Net<P, T> {
        &self.net
    }

    pub fn initial_marking(&self) -> &Marking<P> {
        &self.initial
    }

    pub fn causal(&self) -> &CausalStructure<P, T> {
        &self.causal
    }

    pub fn precedes(&self, x: &Node<P, T>, y: &Node<P, T>) -> Result<bool, UnfoldError> {
        self.causal.precedes(x, y)
    }

    pub fn immediate_conflict(&self, t1: &T, t2: &T) -> Result<bool, UnfoldError> {
        self.causal.immediate_conflict(t1, t2)
    }

    pub fn conflict(&self, x: &Node<P, T>, y: &Node<P, T>) -> Result<bool, UnfoldError> {
        self.causal.conflict(x, y)
    }

    pub fn concurrent(&self, x: &Node<P, T>, y: &Node<P, T>) -> Result<bool, UnfoldError> {
        self.causal.concurrent(x, y)
    }

    pub fn co_set<'a, I>(&self, xs: I) -> Result<bool, UnfoldError>
    where
        I: IntoIterator<Item = &'a Node<P, T>>,
        P: 'a,
        T: 'a,
    {
        self.causal.co_set(xs)
    }

    /// Same occurrence net with places and transitions renamed injectively.
    pub fn relabel<P2: Label, T2: Label>(
        &self,
        fp: impl Fn(&P) -> P2,
        ft: impl Fn(&T) -> T2,
    ) -> OccurrenceNet<P2, T2> {
        let net = self.net.relabel(&fp, &ft);
        let initial = self.initial.map(&fp);
        OccurrenceNet::new_unchecked(net, initial)
    }
}

/// The causes `H` recorded in a condition name `a(H, i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct History(BTreeSet<Event>);

impl History {
    pub fn empty() -> Self {
        History(BTreeSet::new())
    }

    pub fn of(e: Event) -> Self {
        History(BTreeSet::from([e]))
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> + '_ {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct ConditionData {
    place: PlaceId,
    history: History,
    index: u32,
}

/// A condition `a(H, i)` of an unfolding: a token of place `a` produced by the
/// events in `H`, disambiguated by `i ≥ 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition(Arc<ConditionData>);

impl Condition {
    pub fn new(place: PlaceId, history: History, index: u32) -> Self {
        assert!(index >= 1, "condition indices start at 1");
        Condition(Arc::new(ConditionData {
            place,
            history,
            index,
        }))
    }

    pub fn place(&self) -> &PlaceId {
        &self.0.place
    }

    pub fn history(&self) -> &History {
        &self.0.history
    }

    pub fn index(&self) -> u32 {
        self.0.index
    }

    /// The event that produced this condition, if any.
    pub fn producer(&self) -> Option<&Event> {
        self.0.history.events().next()
    }
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct EventData {
    transition: TransId,
    preset: BTreeSet<Condition>,
}

/// An event `t(H)` of an unfolding: a firing of `t` consuming the conditions `H`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(Arc<EventData>);

impl Event {
    pub fn new(transition: TransId, preset: BTreeSet<Condition>) -> Self {
        assert!(!preset.is_empty(), "events have non-empty presets");
        Event(Arc::new(EventData { transition, preset }))
    }

    pub fn transition(&self) -> &TransId {
        &self.0.transition
    }

    pub fn preset(&self) -> &BTreeSet<Condition> {
        &self.0.preset
    }
}

fn write_set<I: IntoIterator<Item = D>, D: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: I) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in xs.into_iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

/// `a({},1)`, `c({t1({a({},1)})},1)`.
impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.place())?;
        write_set(f, self.history().events())?;
        write!(f, ",{})", self.index())
    }
}

impl fmt::Debug for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `t2({b({},1),c({},1)})`.
impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.transition())?;
        f.write_str("(")?;
        write_set(f, self.preset())?;
        f.write_str(")")
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The folding morphism `(f_S, f_T)` from an unfolding back to its net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldingMorphism(pub NetMorphism<Condition, Event, PlaceId, TransId>);

impl FoldingMorphism {
    /// `f_S(m)`.
    pub fn fold(&self, m: &Marking<Condition>) -> Result<Marking, UnfoldError> {
        Ok(self.0.map_marking(m)?)
    }

    pub fn fold_event(&self, e: &Event) -> Result<&TransId, UnfoldError> {
        Ok(self.0.map_transition(e)?)
    }
}

/// A depth-bounded prefix of `U[N, m]` and its folding morphism.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub occurrence: OccurrenceNet<Condition, Event>,
    pub folding: FoldingMorphism,
    pub depth: usize,
}

/// Causal depth of the event that produced `b` (0 for initial conditions).
pub fn condition_depth(b: &Condition) -> usize {
    b.producer().map_or(0, event_depth)
}

/// `1 + max` causal depth of the preset.
pub fn event_depth(e: &Event) -> usize {
    1 + e.preset().iter().map(condition_depth).max().unwrap_or(0)
}

/// Saturates the unfolding rules up to events of causal depth `depth`.
///
/// Rounds add every event whose preset is a concurrent set of existing
/// conditions matching `•t`; round `k` can only discover events of depth `k`,
/// so the loop stops after `depth` rounds or at the fixed point.
pub fn unfold(net: &Net, m: &Marking, depth: usize) -> Result<Unfolding, UnfoldError> {
    net.check_marking(m)?;
    let mut conditions: BTreeSet<Condition> = BTreeSet::new();
    for (a, n) in m.iter() {
        for i in 1..=n {
            conditions.insert(Condition::new(a.clone(), History::empty(), i as u32));
        }
    }
    let mut events: BTreeMap<Event, Multiset<Condition>> = BTreeMap::new();

    for _round in 0..depth {
        let prefix = build_prefix(&conditions, &events)?;
        let causal = CausalStructure::new(&prefix);
        let mut found = Vec::new();
        for (t, arcs) in net.arcs() {
            for preset in candidate_presets(&conditions, &arcs.pre) {
                let nodes: Vec<Node<Condition, Event>> =
                    preset.iter().cloned().map(Node::Place).collect();
                if !causal.co_set(&nodes)? {
                    continue;
                }
                let e = Event::new(t.clone(), preset);
                if events.contains_key(&e) || event_depth(&e) > depth {
                    continue;
                }
                found.push(e);
            }
        }
        if found.is_empty() {
            break;
        }
        for e in found {
            let post_arcs = net.post(e.transition()).expect("transition of net");
            let mut post = Multiset::new();
            for (a, n) in post_arcs.iter() {
                for i in 1..=n {
                    let b = Condition::new(a.clone(), History::of(e.clone()), i as u32);
                    conditions.insert(b.clone());
                    post.insert(b);
                }
            }
            events.insert(e, post);
        }
    }

    let prefix = build_prefix(&conditions, &events)?;
    let initial: Marking<Condition> = conditions
        .iter()
        .filter(|b| b.history().is_empty())
        .cloned()
        .collect();
    let folding = FoldingMorphism(NetMorphism {
        place_map: conditions
            .iter()
            .map(|b| (b.clone(), b.place().clone()))
            .collect(),
        trans_map: events
            .keys()
            .map(|e| (e.clone(), e.transition().clone()))
            .collect(),
    });
    Ok(Unfolding {
        occurrence: OccurrenceNet::new_unchecked(prefix, initial),
        folding,
        depth,
    })
}

fn build_prefix(
    conditions: &BTreeSet<Condition>,
    events: &BTreeMap<Event, Multiset<Condition>>,
) -> Result<Net<Condition, Event>, UnfoldError> {
    Ok(Net::new(
        conditions.iter().cloned(),
        events
            .iter()
            .map(|(e, post)| (e.clone(), e.preset().iter().cloned().collect(), post.clone())),
    )?)
}

/// Every set of conditions whose image under `f_S` is exactly `pre`.
fn candidate_presets(
    conditions: &BTreeSet<Condition>,
    pre: &Multiset<PlaceId>,
) -> Vec<BTreeSet<Condition>> {
    let mut partial: Vec<BTreeSet<Condition>> = vec![BTreeSet::new()];
    for (a, n) in pre.iter() {
        let pool: Vec<&Condition> = conditions.iter().filter(|b| b.place() == a).collect();
        let choices = combinations(&pool, n);
        let mut next = Vec::new();
        for base in &partial {
            for choice in &choices {
                let mut s = base.clone();
                s.extend(choice.iter().map(|b| (*b).clone()));
                next.push(s);
            }
        }
        partial = next;
    }
    partial
}

fn combinations<'a, X>(pool: &[&'a X], k: usize) -> Vec<Vec<&'a X>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if pool.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, x) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[i + 1..], k - 1) {
            rest.insert(0, *x);
            out.push(rest);
        }
    }
    out
}

/// Short names for an unfolding: events are `*0, *1, …` in canonical order,
/// conditions are written `a({*k},i)` against those labels.
#[derive(Debug, Clone)]
pub struct EventLabels {
    labels: BTreeMap<Event, usize>,
}

impl EventLabels {
    pub fn new(o: &OccurrenceNet<Condition, Event>) -> Self {
        EventLabels {
            labels: o.net().transitions().cloned().enumerate().map(|(i, e)| (e, i)).collect(),
        }
    }

    pub fn event(&self, e: &Event) -> String {
        match self.labels.get(e) {
            Some(i) => format!("*{i}"),
            None => e.to_string(),
        }
    }

    pub fn condition(&self, b: &Condition) -> String {
        let hist: Vec<String> = b.history().events().map(|e| self.event(e)).collect();
        format!("{}({{{}}},{})", b.place(), hist.join(","), b.index())
    }

    /// `t2({b({},1),c({*0},1)})`.
    pub fn event_definition(&self, e: &Event) -> String {
        let pre: Vec<String> = e.preset().iter().map(|b| self.condition(b)).collect();
        format!("{}({{{}}})", e.transition(), pre.join(","))
    }
}

impl fmt::Display for Unfolding {
    /// Sizes, then every event as `*k = t(preset)`, then every condition.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let net = self.occurrence.net();
        let labels = EventLabels::new(&self.occurrence);
        writeln!(f, "depth {}", self.depth)?;
        writeln!(f, "conditions {}", net.place_count())?;
        writeln!(f, "events {}", net.transition_count())?;
        writeln!(f, "arcs {}", net.arc_count())?;
        for e in net.transitions() {
            writeln!(f, "{} = {}", labels.event(e), labels.event_definition(e))?;
        }
        for b in net.places() {
            writeln!(f, "{}", labels.condition(b))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cond(o: &Unfolding, name: &str) -> Condition {
        o.occurrence
            .net()
            .places()
            .find(|b| b.to_string() == name)
            .unwrap_or_else(|| panic!("no condition {name}"))
            .clone()
    }

    fn events_of(u: &Unfolding, t: &str) -> Vec<Event> {
        u.occurrence
            .net()
            .transitions()
            .filter(|e| e.transition().as_str() == t)
            .cloned()
            .collect()
    }

    fn p(x: &str) -> Node<PlaceId, TransId> {
        Node::Place(PlaceId::from(x))
    }

    fn t(x: &str) -> Node<PlaceId, TransId> {
        Node::Trans(TransId::from(x))
    }

    #[test]
    fn precedence_in_o1_and_n1() {
        let (net, m) = catalog::o1();
        let o1 = OccurrenceNet::new(net, m).unwrap();
        assert!(o1.precedes(&p("a"), &t("t1")).unwrap());
        assert!(o1.precedes(&t("t1"), &t("t1")).unwrap());
        assert!(!o1.precedes(&t("t1"), &t("t2")).unwrap());
        assert!(matches!(o1.precedes(&p("zz"), &t("t1")), Err(UnfoldError::UnknownNode(_))));

        let (n1, m1) = catalog::n1();
        let u = unfold(&n1, &m1, 2).unwrap();
        let star0 = events_of(&u, "t1")[0].clone();
        let star2 = events_of(&u, "t2")
            .into_iter()
            .find(|e| e.preset().iter().any(|b| b.producer().is_some()))
            .unwrap();
        assert!(u
            .occurrence
            .precedes(&Node::Trans(star0), &Node::Trans(star2))
            .unwrap());
    }

    #[test]
    fn conflicts() {
        let (n1, m1) = catalog::n1();
        let u = unfold(&n1, &m1, 2).unwrap();
        let c0 = cond(&u, "c({},1)");
        let over_c0: Vec<Event> = u
            .occurrence
            .net()
            .transitions()
            .filter(|e| e.preset().contains(&c0))
            .cloned()
            .collect();
        assert_eq!(over_c0.len(), 2);
        assert!(u.occurrence.immediate_conflict(&over_c0[0], &over_c0[1]).unwrap());
        assert!(!u.occurrence.immediate_conflict(&over_c0[0], &over_c0[0]).unwrap());
        assert!(u
            .occurrence
            .conflict(&Node::Trans(over_c0[0].clone()), &Node::Trans(over_c0[1].clone()))
            .unwrap());

        let (net, m) = catalog::o1();
        let o1 = OccurrenceNet::new(net, m).unwrap();
        assert!(!o1.immediate_conflict(&"t1".into(), &"t2".into()).unwrap());
        assert!(!o1.conflict(&p("c"), &p("d")).unwrap());

        let (n2, m2) = catalog::n2();
        let u2 = unfold(&n2, &m2, 2).unwrap();
        let t3s = events_of(&u2, "t3");
        assert_eq!(t3s.len(), 2);
        assert!(u2
            .occurrence
            .conflict(&Node::Trans(t3s[0].clone()), &Node::Trans(t3s[1].clone()))
            .unwrap());
    }

    #[test]
    fn concurrency() {
        let (net, m) = catalog::o1();
        let o1 = OccurrenceNet::new(net, m).unwrap();
        assert!(o1.co_set(&[t("t1"), t("t2")]).unwrap());
        assert!(!o1.concurrent(&t("t1"), &t("t1")).unwrap());
    }

    #[test]
    fn occurrence_net_predicate() {
        let (net, m) = catalog::o1();
        assert!(is_occurrence_net(&net, &m).is_occurrence_net());

        let (n2, m2) = catalog::n2();
        let check = is_occurrence_net(&n2, &m2);
        assert!(check
            .violations
            .contains(&Violation::BackwardConflict { place: "d".into() }));

        let (n3, m3) = catalog::n3();
        assert!(is_occurrence_net(&n3, &m3).violations.contains(&Violation::Cyclic));

        let (n5, m5) = catalog::n5();
        assert!(matches!(
            is_occurrence_net(&n5, &m5).violations.as_slice(),
            [Violation::NotSafe { .. }, ..]
        ));

        let (n1, m1) = catalog::n1();
        assert!(is_occurrence_net(&n1, &m1)
            .violations
            .contains(&Violation::InitialNotMinimal));
    }

    #[test]
    fn unfolding_sizes() {
        let cases = [
            (catalog::n1(), 2, 9, 5),
            (catalog::n2(), 2, 7, 4),
            (catalog::n5(), 2, 7, 4),
            (catalog::n3(), 2, 5, 2),
            (catalog::n4(), 2, 11, 4),
        ];
        for ((net, m), depth, conds, evs) in cases {
            let u = unfold(&net, &m, depth).unwrap();
            assert_eq!(u.occurrence.net().place_count(), conds);
            assert_eq!(u.occurrence.net().transition_count(), evs);
        }
    }

    #[test]
    fn n3_prefix_names() {
        let (n3, m3) = catalog::n3();
        let u = unfold(&n3, &m3, 2).unwrap();
        let labels = EventLabels::new(&u.occurrence);
        let names: BTreeSet<String> = u
            .occurrence
            .net()
            .places()
            .map(|b| labels.condition(b))
            .collect();
        let expected: BTreeSet<String> = ["a({},1)", "a({*0},1)", "a({*1},1)", "b({*0},1)", "b({*1},1)"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(names, expected);
    }

    #[test]
    fn depth_zero_is_initial_marking_only() {
        let (n1, m1) = catalog::n1();
        let u = unfold(&n1, &m1, 0).unwrap();
        assert_eq!(u.occurrence.net().place_count(), 4);
        assert_eq!(u.occurrence.net().transition_count(), 0);
    }

    #[test]
    fn folding() {
        let (n1, m1) = catalog::n1();
        let u = unfold(&n1, &m1, 2).unwrap();
        let two_c: Marking<Condition> = [cond(&u, "c({},1)"), cond(&u, "c({t1({a({},1)})},1)")]
            .into_iter()
            .collect();
        assert_eq!(u.folding.fold(&two_c).unwrap(), crate::net::marking(&[("c", 2)]));
        assert_eq!(u.folding.fold(&Marking::new()).unwrap(), Marking::new());
        assert_eq!(u.folding.fold(u.occurrence.initial_marking()).unwrap(), m1);
        u.folding.0.verify(u.occurrence.net(), &n1).unwrap();

        let stranger: Marking<Condition> =
            [Condition::new("zz".into(), History::empty(), 1)].into_iter().collect();
        assert!(u.folding.fold(&stranger).is_err());
    }

    #[test]
    fn unfoldings_are_occurrence_nets_and_grow_monotonically() {
        for (net, m) in [catalog::n1(), catalog::n2(), catalog::n3(), catalog::n4(), catalog::n5()] {
            let mut previous: Option<Unfolding> = None;
            for depth in 0..=3 {
                let u = unfold(&net, &m, depth).unwrap();
                let o = &u.occurrence;
                assert!(is_occurrence_net(o.net(), o.initial_marking()).is_occurrence_net());
                for e in o.net().transitions() {
                    let nodes: Vec<_> = e.preset().iter().cloned().map(Node::Place).collect();
                    assert!(o.co_set(&nodes).unwrap());
                    let image = e.preset().iter().map(|b| b.place().clone()).collect::<Multiset<_>>();
                    assert_eq!(&image, net.pre(e.transition()).unwrap());
                }
                if let Some(prev) = previous {
                    for b in prev.occurrence.net().places() {
                        assert!(o.net().has_place(b));
                    }
                    for e in prev.occurrence.net().transitions() {
                        assert_eq!(prev.occurrence.net().post(e), o.net().post(e));
                    }
                }
                previous = Some(u);
            }
        }
    }
}
