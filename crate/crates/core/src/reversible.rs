//! Reversible occurrence nets: every event `t` gets an inverse `~t` with
//! preset and postset swapped, and the causal relations are extended to
//! directed transitions.

use std::fmt;

use crate::multiset::Multiset;
use crate::net::{Arcs, FireError, Label, Marking, Net};
use crate::unfolding::{Condition, Event, Node, OccurrenceNet, UnfoldError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

/// A transition of a reversible net: a base transition and a direction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Directed<T> {
    pub base: T,
    pub direction: Direction,
}

impl<T: Clone> Directed<T> {
    pub fn forward(base: T) -> Self {
        Directed {
            base,
            direction: Direction::Forward,
        }
    }

    pub fn reverse(base: T) -> Self {
        Directed {
            base,
            direction: Direction::Reverse,
        }
    }

    pub fn is_forward(&self) -> bool {
        self.direction == Direction::Forward
    }

    pub fn is_reverse(&self) -> bool {
        self.direction == Direction::Reverse
    }

    /// `t ↦ ~t` and `~t ↦ t`.
    pub fn inverse(&self) -> Self {
        Directed {
            base: self.base.clone(),
            direction: match self.direction {
                Direction::Forward => Direction::Reverse,
                Direction::Reverse => Direction::Forward,
            },
        }
    }
}

/// `t` for forward steps, `~t` for reverse steps.
impl<T: fmt::Display> fmt::Display for Directed<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            Direction::Forward => write!(f, "{}", self.base),
            Direction::Reverse => write!(f, "~{}", self.base),
        }
    }
}

/// Adds `~t` with `•~t = t•` and `~t• = •t` for every transition of `net`.
///
/// Applied to a net that is not an occurrence net this is the naive
/// reversal, which in general is not causally consistent.
pub fn naive_reversal<P: Label, T: Label>(net: &Net<P, T>) -> Net<P, Directed<T>> {
    Net::new(
        net.places().cloned(),
        net.arcs().flat_map(|(t, a)| {
            [
                (Directed::forward(t.clone()), a.pre.clone(), a.post.clone()),
                (Directed::reverse(t.clone()), a.post.clone(), a.pre.clone()),
            ]
        }),
    )
    .expect("reversal of a valid net is valid")
}

/// The reversible version of an occurrence net.
#[derive(Debug, Clone)]
pub struct ReversibleNet<P: Ord = Condition, T: Ord = Event> {
    base: OccurrenceNet<P, T>,
    net: Net<P, Directed<T>>,
}

/// `Ō` for an occurrence net `O`.
pub fn reverse_occurrence<P: Label, T: Label>(o: &OccurrenceNet<P, T>) -> ReversibleNet<P, T> {
    ReversibleNet {
        base: o.clone(),
        net: naive_reversal(o.net()),
    }
}

type DNode<P, T> = Node<P, Directed<T>>;

impl<P: Label, T: Label> ReversibleNet<P, T> {
    /// Validates `(net, m)` as an occurrence net and reverses it.
    pub fn from_net(net: Net<P, T>, m: Marking<P>) -> Result<Self, UnfoldError> {
        Ok(reverse_occurrence(&OccurrenceNet::new(net, m)?))
    }

    pub fn base(&self) -> &OccurrenceNet<P, T> {
        &self.base
    }

    pub fn net(&self) -> &Net<P, Directed<T>> {
        &self.net
    }

    pub fn initial_marking(&self) -> &Marking<P> {
        self.base.initial_marking()
    }

    pub fn enabled(&self, m: &Marking<P>) -> Vec<Directed<T>> {
        self.net.enabled(m)
    }

    pub fn fire_directed(&self, m: &Marking<P>, t: &Directed<T>) -> Result<Marking<P>, FireError> {
        self.net.fire(m, t)
    }

    fn base_node(&self, x: &DNode<P, T>) -> Result<Node<P, T>, UnfoldError> {
        let n = match x {
            Node::Place(p) => Node::Place(p.clone()),
            Node::Trans(t) => Node::Trans(t.base.clone()),
        };
        if self.base.causal().contains(&n) {
            Ok(n)
        } else {
            Err(UnfoldError::UnknownNode(x.to_string()))
        }
    }

    /// `x ⪯ y` on the reversible net. A directed transition is ordered
    /// exactly like its base event, so `t ⪯ ~t` and `~t ⪯ t`.
    pub fn precedes(&self, x: &DNode<P, T>, y: &DNode<P, T>) -> Result<bool, UnfoldError> {
        let (bx, by) = (self.base_node(x)?, self.base_node(y)?);
        self.base.precedes(&bx, &by)
    }

    /// `t #₀ t′`: distinct directed transitions with overlapping presets.
    pub fn immediate_conflict(&self, t1: &Directed<T>, t2: &Directed<T>) -> Result<bool, UnfoldError> {
        match (self.net.pre(t1), self.net.pre(t2)) {
            (Some(p1), Some(p2)) => Ok(t1 != t2 && p1.intersects(p2)),
            (None, _) => Err(UnfoldError::UnknownNode(t1.to_string())),
            (_, None) => Err(UnfoldError::UnknownNode(t2.to_string())),
        }
    }

    /// `x # y` through forward ancestors only.
    pub fn conflict(&self, x: &DNode<P, T>, y: &DNode<P, T>) -> Result<bool, UnfoldError> {
        let (bx, by) = (self.base_node(x)?, self.base_node(y)?);
        self.base.conflict(&bx, &by)
    }

    pub fn concurrent(&self, x: &DNode<P, T>, y: &DNode<P, T>) -> Result<bool, UnfoldError> {
        Ok(x != y && !self.precedes(x, y)? && !self.precedes(y, x)? && !self.conflict(x, y)?)
    }

    /// Transition-level `t co t′`.
    pub fn steps_concurrent(&self, t1: &Directed<T>, t2: &Directed<T>) -> Result<bool, UnfoldError> {
        self.concurrent(&Node::Trans(t1.clone()), &Node::Trans(t2.clone()))
    }

    fn step_precedes(&self, t1: &Directed<T>, t2: &Directed<T>) -> Result<bool, UnfoldError> {
        self.precedes(&Node::Trans(t1.clone()), &Node::Trans(t2.clone()))
    }

    /// Syntactic characterization of `co` for enabled coinitial steps:
    /// no immediate conflict for two forward steps, mutual independence for
    /// two reverse steps, and `t′ ⋠ t`, `~t′ ⋠ t` for forward `t`, reverse `t′`.
    pub fn concurrency_clauses(&self, t1: &Directed<T>, t2: &Directed<T>) -> Result<bool, UnfoldError> {
        if t1 == t2 {
            return Ok(false);
        }
        match (t1.direction, t2.direction) {
            (Direction::Forward, Direction::Forward) => Ok(!self.immediate_conflict(t1, t2)?),
            (Direction::Reverse, Direction::Reverse) => {
                Ok(!self.step_precedes(t1, t2)? && !self.step_precedes(t2, t1)?)
            }
            (Direction::Forward, Direction::Reverse) => {
                Ok(!self.step_precedes(t2, t1)? && !self.step_precedes(&t2.inverse(), t1)?)
            }
            (Direction::Reverse, Direction::Forward) => self.concurrency_clauses(t2, t1),
        }
    }

    /// Replaces the preset of a reverse transition, leaving everything else
    /// untouched. Only useful for mutation testing the lemma suites.
    pub fn mutate_reverse_preset(&mut self, base: &T, pre: Multiset<P>) {
        let t = Directed::reverse(base.clone());
        if let Some(post) = self.net.post(&t).cloned() {
            self.net.set_arcs_unchecked(&t, Arcs { pre, post });
        }
    }

    /// Same reversible net with places and events renamed injectively.
    pub fn relabel<P2: Label, T2: Label>(
        &self,
        fp: impl Fn(&P) -> P2,
        ft: impl Fn(&T) -> T2,
    ) -> ReversibleNet<P2, T2> {
        let net = self.net.relabel(&fp, |d| Directed {
            base: ft(&d.base),
            direction: d.direction,
        });
        ReversibleNet {
            base: self.base.relabel(&fp, &ft),
            net,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::net::{marking, PlaceId, TransId};
    use crate::unfolding::unfold;

    fn rev_o1() -> ReversibleNet<PlaceId, TransId> {
        let (net, m) = catalog::o1();
        ReversibleNet::from_net(net, m).unwrap()
    }

    fn f(t: &str) -> Directed<TransId> {
        Directed::forward(TransId::from(t))
    }

    fn r(t: &str) -> Directed<TransId> {
        Directed::reverse(TransId::from(t))
    }

    #[test]
    fn construction_doubles_transitions_and_keeps_places() {
        let r1 = rev_o1();
        assert_eq!(r1.net().transition_count(), 4);
        assert_eq!(r1.net().place_count(), 4);
        assert_eq!(r1.net().pre(&r("t1")), r1.net().post(&f("t1")));
        assert_eq!(r1.net().post(&r("t1")), r1.base().net().pre(&"t1".into()));

        let (n1, m1) = catalog::n1();
        let u = unfold(&n1, &m1, 2).unwrap();
        let rn1 = reverse_occurrence(&u.occurrence);
        assert_eq!(rn1.net().transition_count(), 10);
        assert_eq!(
            rn1.net().transitions().filter(|t| t.is_reverse()).count(),
            5
        );
        for t in rn1.net().transitions() {
            assert_eq!(t.inverse().inverse(), *t);
        }
    }

    #[test]
    fn not_an_occurrence_net_is_rejected() {
        let (n2, m2) = catalog::n2();
        assert!(matches!(
            ReversibleNet::from_net(n2, m2),
            Err(UnfoldError::NotOccurrenceNet { .. })
        ));
    }

    #[test]
    fn directed_firing() {
        let r1 = rev_o1();
        let ab = marking(&[("a", 1), ("b", 1)]);
        let after = r1.fire_directed(&ab, &f("t1")).unwrap();
        assert_eq!(r1.fire_directed(&after, &r("t1")).unwrap(), ab);
        assert_eq!(
            r1.fire_directed(&marking(&[("c", 1), ("d", 1)]), &r("t2")).unwrap(),
            marking(&[("b", 1), ("c", 1)])
        );
        assert_eq!(r1.fire_directed(&ab, &r("t1")), Err(FireError::Disabled("~t1".into())));
    }

    #[test]
    fn extended_relations() {
        let r1 = rev_o1();
        for t in ["t1", "t2"] {
            let (tf, tr) = (Node::Trans(f(t)), Node::Trans(r(t)));
            assert!(r1.precedes(&tf, &tr).unwrap());
            assert!(r1.precedes(&tr, &tf).unwrap());
        }
        assert!(!r1.immediate_conflict(&r("t1"), &r("t2")).unwrap());
        assert!(r1.steps_concurrent(&r("t1"), &f("t2")).unwrap());
        assert!(matches!(
            r1.precedes(&Node::Trans(r("zz")), &Node::Trans(f("t1"))),
            Err(UnfoldError::UnknownNode(_))
        ));
    }

    #[test]
    fn reverse_steps_never_immediately_conflict_in_n1_prefix() {
        let (n1, m1) = catalog::n1();
        let rn1 = reverse_occurrence(&unfold(&n1, &m1, 2).unwrap().occurrence);
        let reverse: Vec<_> = rn1.net().transitions().filter(|t| t.is_reverse()).cloned().collect();
        for x in &reverse {
            for y in &reverse {
                assert!(!rn1.immediate_conflict(x, y).unwrap());
            }
        }
    }

    #[test]
    fn undo_of_first_event_is_concurrent_with_t2_on_initial_tokens() {
        let (n1, m1) = catalog::n1();
        let rn1 = reverse_occurrence(&unfold(&n1, &m1, 2).unwrap().occurrence);
        let events: Vec<Event> = rn1.base().net().transitions().cloned().collect();
        let (star0, star1) = (&events[0], &events[1]);
        assert_eq!(star0.transition().as_str(), "t1");
        assert_eq!(star1.transition().as_str(), "t2");
        let undo0 = Directed::reverse(star0.clone());
        let fwd1 = Directed::forward(star1.clone());
        let m = rn1.fire_directed(rn1.initial_marking(), &Directed::forward(star0.clone())).unwrap();
        assert!(rn1.net().is_enabled(&m, &undo0) && rn1.net().is_enabled(&m, &fwd1));
        assert!(rn1.steps_concurrent(&undo0, &fwd1).unwrap());
        assert!(rn1.concurrency_clauses(&fwd1, &undo0).unwrap());
    }

    #[test]
    fn mutation_changes_only_the_reverse_preset() {
        let mut r1 = rev_o1();
        r1.mutate_reverse_preset(&"t1".into(), marking(&[("d", 1)]));
        assert_eq!(r1.net().pre(&r("t1")), Some(&marking(&[("d", 1)])));
        assert_eq!(r1.net().post(&r("t1")), Some(&marking(&[("a", 1)])));
        assert_eq!(r1.net().pre(&f("t1")), Some(&marking(&[("a", 1)])));
    }
}
