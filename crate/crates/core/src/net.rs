//! Place/transition nets, markings and the interleaving firing rule.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::multiset::Multiset;

/// Anything that can name a place or a transition.
///
/// The order is the canonical enumeration order for every set, multiset and
/// listing produced by the crate.
pub trait Label: Ord + Clone + fmt::Debug + fmt::Display {}

impl<T: Ord + Clone + fmt::Debug + fmt::Display> Label for T {}

macro_rules! name_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Self {
                $name(name.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }
    };
}

name_type!(
    /// Name of a place in a P/T net.
    PlaceId
);
name_type!(
    /// Name of a transition in a P/T net.
    TransId
);

/// A marking is a multiset of places.
pub type Marking<P = PlaceId> = Multiset<P>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("transition `{0}` has an empty preset")]
    EmptyPreset(String),
    #[error("transition `{0}` has an empty postset")]
    EmptyPostset(String),
    #[error("transition `{transition}` refers to unknown place `{place}`")]
    UnknownPlace { transition: String, place: String },
    #[error("transition `{0}` is declared twice")]
    DuplicateTransition(String),
    #[error("marking refers to unknown place `{0}`")]
    UnknownMarkedPlace(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FireError {
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("transition `{0}` is not enabled")]
    Disabled(String),
    #[error("step {index} (`{transition}`) is not enabled")]
    DisabledAt { index: usize, transition: String },
}

/// Preset and postset of a transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arcs<P: Ord> {
    pub pre: Multiset<P>,
    pub post: Multiset<P>,
}

/// A P/T net `(S, T, •_, _•)` with multiset arcs.
///
/// Construction enforces non-empty presets and postsets and that every arc
/// refers to a declared place. Nets are immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net<P: Ord = PlaceId, T: Ord = TransId> {
    places: BTreeSet<P>,
    transitions: BTreeMap<T, Arcs<P>>,
}

impl<P: Label, T: Label> Net<P, T> {
    pub fn new<IP, IT>(places: IP, transitions: IT) -> Result<Self, NetError>
    where
        IP: IntoIterator<Item = P>,
        IT: IntoIterator<Item = (T, Multiset<P>, Multiset<P>)>,
    {
        let places: BTreeSet<P> = places.into_iter().collect();
        let mut map = BTreeMap::new();
        for (t, pre, post) in transitions {
            if pre.is_empty() {
                return Err(NetError::EmptyPreset(t.to_string()));
            }
            if post.is_empty() {
                return Err(NetError::EmptyPostset(t.to_string()));
            }
            if let Some(p) = pre.support().chain(post.support()).find(|p| !places.contains(*p)) {
                return Err(NetError::UnknownPlace {
                    transition: t.to_string(),
                    place: p.to_string(),
                });
            }
            if map.contains_key(&t) {
                return Err(NetError::DuplicateTransition(t.to_string()));
            }
            map.insert(t, Arcs { pre, post });
        }
        Ok(Net {
            places,
            transitions: map,
        })
    }

    pub fn places(&self) -> impl Iterator<Item = &P> + '_ {
        self.places.iter()
    }

    pub fn transitions(&self) -> impl Iterator<Item = &T> + '_ {
        self.transitions.keys()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&T, &Arcs<P>)> + '_ {
        self.transitions.iter()
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn has_place(&self, p: &P) -> bool {
        self.places.contains(p)
    }

    pub fn has_transition(&self, t: &T) -> bool {
        self.transitions.contains_key(t)
    }

    /// `•t`.
    pub fn pre(&self, t: &T) -> Option<&Multiset<P>> {
        self.transitions.get(t).map(|a| &a.pre)
    }

    /// `t•`.
    pub fn post(&self, t: &T) -> Option<&Multiset<P>> {
        self.transitions.get(t).map(|a| &a.post)
    }

    /// `•a`: transitions producing into `a`.
    pub fn producers(&self, a: &P) -> Vec<&T> {
        self.transitions
            .iter()
            .filter(|(_, arcs)| arcs.post.contains(a))
            .map(|(t, _)| t)
            .collect()
    }

    /// `a•`: transitions consuming from `a`.
    pub fn consumers(&self, a: &P) -> Vec<&T> {
        self.transitions
            .iter()
            .filter(|(_, arcs)| arcs.pre.contains(a))
            .map(|(t, _)| t)
            .collect()
    }

    /// Number of arcs, counting each (node, node) pair once regardless of weight.
    pub fn arc_count(&self) -> usize {
        self.transitions
            .values()
            .map(|a| a.pre.support().count() + a.post.support().count())
            .sum()
    }

    /// Checks that `m` only marks places of this net.
    pub fn check_marking(&self, m: &Marking<P>) -> Result<(), NetError> {
        match m.support().find(|p| !self.places.contains(*p)) {
            Some(p) => Err(NetError::UnknownMarkedPlace(p.to_string())),
            None => Ok(()),
        }
    }

    pub fn is_enabled(&self, m: &Marking<P>, t: &T) -> bool {
        self.pre(t).is_some_and(|pre| pre.is_subset_of(m))
    }

    /// Transitions whose preset is contained in `m`, in canonical order.
    pub fn enabled(&self, m: &Marking<P>) -> Vec<T> {
        self.transitions
            .iter()
            .filter(|(_, arcs)| arcs.pre.is_subset_of(m))
            .map(|(t, _)| t.clone())
            .collect()
    }

    /// `(m − •t) ⊕ t•`.
    pub fn fire(&self, m: &Marking<P>, t: &T) -> Result<Marking<P>, FireError> {
        let arcs = self
            .transitions
            .get(t)
            .ok_or_else(|| FireError::UnknownTransition(t.to_string()))?;
        let rest = m
            .difference(&arcs.pre)
            .map_err(|_| FireError::Disabled(t.to_string()))?;
        Ok(rest.sum(&arcs.post))
    }

    /// All markings `m₀ … mₙ` visited by the firing sequence `steps`.
    pub fn fire_sequence(&self, m: &Marking<P>, steps: &[T]) -> Result<Vec<Marking<P>>, FireError> {
        let mut out = Vec::with_capacity(steps.len() + 1);
        out.push(m.clone());
        for (index, t) in steps.iter().enumerate() {
            let next = self
                .fire(out.last().expect("non-empty"), t)
                .map_err(|_| FireError::DisabledAt {
                    index,
                    transition: t.to_string(),
                })?;
            out.push(next);
        }
        Ok(out)
    }

    /// Same structure under new names. `fp` and `ft` must be injective.
    pub fn relabel<P2: Label, T2: Label>(
        &self,
        mut fp: impl FnMut(&P) -> P2,
        mut ft: impl FnMut(&T) -> T2,
    ) -> Net<P2, T2> {
        let places = self.places.iter().map(&mut fp).collect();
        let transitions = self
            .transitions
            .iter()
            .map(|(t, a)| {
                (
                    ft(t),
                    Arcs {
                        pre: a.pre.map(&mut fp),
                        post: a.post.map(&mut fp),
                    },
                )
            })
            .collect();
        Net {
            places,
            transitions,
        }
    }

    /// Replaces the arcs of an existing transition without re-validating
    /// the net invariants. Only meant for building deliberately broken nets.
    pub(crate) fn set_arcs_unchecked(&mut self, t: &T, arcs: Arcs<P>) {
        if let Some(slot) = self.transitions.get_mut(t) {
            *slot = arcs;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("no image for place `{0}`")]
    UnmappedPlace(String),
    #[error("no image for transition `{0}`")]
    UnmappedTransition(String),
    #[error("image of `{0}` is not a transition of the target net")]
    MissingTarget(String),
    #[error("image of the preset of `{0}` differs from the preset of its image")]
    PresetMismatch(String),
    #[error("image of the postset of `{0}` differs from the postset of its image")]
    PostsetMismatch(String),
}

/// A pair of maps `(f_S, f_T)` between two nets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetMorphism<P1: Ord, T1: Ord, P2, T2> {
    pub place_map: BTreeMap<P1, P2>,
    pub trans_map: BTreeMap<T1, T2>,
}

impl<P1: Label, T1: Label, P2: Label, T2: Label> NetMorphism<P1, T1, P2, T2> {
    pub fn map_place(&self, p: &P1) -> Result<&P2, MorphismError> {
        self.place_map
            .get(p)
            .ok_or_else(|| MorphismError::UnmappedPlace(p.to_string()))
    }

    pub fn map_transition(&self, t: &T1) -> Result<&T2, MorphismError> {
        self.trans_map
            .get(t)
            .ok_or_else(|| MorphismError::UnmappedTransition(t.to_string()))
    }

    /// Multiset image of a marking of the source net.
    pub fn map_marking(&self, m: &Marking<P1>) -> Result<Marking<P2>, MorphismError> {
        m.try_map(|p| self.map_place(p).cloned())
    }

    /// Checks `f_S(•t) = •f_T(t)` and `f_S(t•) = f_T(t)•` for every `t`.
    pub fn verify(&self, source: &Net<P1, T1>, target: &Net<P2, T2>) -> Result<(), MorphismError> {
        for (t, arcs) in source.arcs() {
            let image = self.map_transition(t)?;
            let (pre, post) = match (target.pre(image), target.post(image)) {
                (Some(pre), Some(post)) => (pre, post),
                _ => return Err(MorphismError::MissingTarget(t.to_string())),
            };
            if &self.map_marking(&arcs.pre)? != pre {
                return Err(MorphismError::PresetMismatch(t.to_string()));
            }
            if &self.map_marking(&arcs.post)? != post {
                return Err(MorphismError::PostsetMismatch(t.to_string()));
            }
        }
        Ok(())
    }
}

/// Convenience for building P/T nets in code and tests.
#[derive(Debug, Default, Clone)]
pub struct NetBuilder {
    places: Vec<PlaceId>,
    transitions: Vec<(TransId, Multiset<PlaceId>, Multiset<PlaceId>)>,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn places<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.places.extend(names.into_iter().map(PlaceId::from));
        self
    }

    pub fn transition(mut self, name: &str, pre: &[(&str, usize)], post: &[(&str, usize)]) -> Self {
        let ms = |arcs: &[(&str, usize)]| {
            Multiset::from_counts(arcs.iter().map(|(p, n)| (PlaceId::from(*p), *n)))
        };
        self.transitions
            .push((TransId::from(name), ms(pre), ms(post)));
        self
    }

    pub fn build(self) -> Result<Net, NetError> {
        Net::new(self.places, self.transitions)
    }
}

/// Marking from `(place, count)` pairs.
pub fn marking(pairs: &[(&str, usize)]) -> Marking {
    Multiset::from_counts(pairs.iter().map(|(p, n)| (PlaceId::from(*p), *n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn t(name: &str) -> TransId {
        TransId::from(name)
    }

    #[test]
    fn enabled_at_initial_and_empty_markings() {
        let (n1, m1) = catalog::n1();
        assert_eq!(n1.enabled(&m1), vec![t("t1"), t("t2"), t("t3")]);
        assert!(n1.enabled(&Marking::new()).is_empty());
        let (n3, m3) = catalog::n3();
        assert_eq!(n3.enabled(&m3), vec![t("t1")]);
    }

    #[test]
    fn firing_rule() {
        let (n3, m3) = catalog::n3();
        assert_eq!(n3.fire(&m3, &t("t1")).unwrap(), marking(&[("a", 1), ("b", 1)]));
        let (n1, m1) = catalog::n1();
        assert_eq!(
            n1.fire(&m1, &t("t1")).unwrap(),
            marking(&[("b", 1), ("c", 2), ("d", 1)])
        );
        assert_eq!(
            n1.fire(&marking(&[("b", 1), ("c", 1)]), &t("t3")),
            Err(FireError::Disabled("t3".into()))
        );
        assert!(matches!(n1.fire(&m1, &t("zz")), Err(FireError::UnknownTransition(_))));
    }

    #[test]
    fn firing_sequences() {
        let (n1, m1) = catalog::n1();
        let run = n1.fire_sequence(&m1, &[t("t1"), t("t2")]).unwrap();
        assert_eq!(
            run,
            vec![
                m1.clone(),
                marking(&[("b", 1), ("c", 2), ("d", 1)]),
                marking(&[("c", 1), ("d", 1), ("e", 1)]),
            ]
        );
        assert_eq!(n1.fire_sequence(&m1, &[]).unwrap(), vec![m1.clone()]);
        assert_eq!(
            n1.fire_sequence(&m1, &[t("t2"), t("t2")]),
            Err(FireError::DisabledAt {
                index: 1,
                transition: "t2".into()
            })
        );
    }

    #[test]
    fn construction_errors() {
        let empty_pre = NetBuilder::new().places(["b"]).transition("t", &[], &[("b", 1)]).build();
        assert_eq!(empty_pre, Err(NetError::EmptyPreset("t".into())));
        let empty_post = NetBuilder::new().places(["b"]).transition("t", &[("b", 1)], &[]).build();
        assert_eq!(empty_post, Err(NetError::EmptyPostset("t".into())));
        let unknown = NetBuilder::new().places(["a"]).transition("t", &[("a", 1)], &[("z", 1)]).build();
        assert!(matches!(unknown, Err(NetError::UnknownPlace { .. })));
        let dup = NetBuilder::new()
            .places(["a"])
            .transition("t", &[("a", 1)], &[("a", 1)])
            .transition("t", &[("a", 1)], &[("a", 1)])
            .build();
        assert_eq!(dup, Err(NetError::DuplicateTransition("t".into())));
    }

    #[test]
    fn morphism_laws_are_checked() {
        let (n1, _) = catalog::n1();
        let identity = NetMorphism {
            place_map: n1.places().map(|p| (p.clone(), p.clone())).collect(),
            trans_map: n1.transitions().map(|t| (t.clone(), t.clone())).collect(),
        };
        identity.verify(&n1, &n1).unwrap();
        let mut broken = identity.clone();
        broken.trans_map.insert(t("t2"), t("t3"));
        assert_eq!(broken.verify(&n1, &n1), Err(MorphismError::PresetMismatch("t2".into())));
    }

    fn arb_marking() -> impl Strategy<Value = Marking> {
        proptest::collection::vec((0usize..6, 0usize..3), 0..8).prop_map(|v| {
            let names = ["a", "b", "c", "d", "e", "f"];
            Multiset::from_counts(v.into_iter().map(|(i, n)| (PlaceId::from(names[i]), n)))
        })
    }

    proptest! {
        #[test]
        fn firing_conserves_token_count(m in arb_marking()) {
            let (n1, _) = catalog::n1();
            for t in n1.enabled(&m) {
                let next = n1.fire(&m, &t).unwrap();
                let arcs = (n1.pre(&t).unwrap(), n1.post(&t).unwrap());
                prop_assert_eq!(next.cardinality(), m.cardinality() - arcs.0.cardinality() + arcs.1.cardinality());
                prop_assert_eq!(next, n1.fire(&m, &t).unwrap());
            }
        }

        #[test]
        fn enabledness_is_monotone(m in arb_marking(), extra in arb_marking()) {
            let (n1, _) = catalog::n1();
            let bigger = m.sum(&extra);
            let before = n1.enabled(&m);
            let after = n1.enabled(&bigger);
            for t in before {
                prop_assert!(after.contains(&t));
            }
        }
    }
}
