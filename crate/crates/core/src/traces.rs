//! Firing sequences of reversible occurrence nets and the rewrites behind
//! reverse equivalence `≍`: swapping adjacent concurrent steps and
//! cancelling a step against its inverse.

use std::fmt;

use thiserror::Error;

use crate::net::{Label, Marking};
use crate::reversible::{Directed, ReversibleNet};
use crate::unfolding::UnfoldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("step {index} (`{transition}`) is not enabled")]
    DisabledAt { index: usize, transition: String },
    #[error("steps {index} and {} are not concurrent", index + 1)]
    NotConcurrent { index: usize },
    #[error("no adjacent pair at index {index}")]
    OutOfRange { index: usize },
    #[error("steps {index} and {} are not inverse to each other", index + 1)]
    NotInversePair { index: usize },
    #[error("traces are not coinitial")]
    NotCoinitial,
    #[error("traces are not cofinal")]
    NotCofinal,
    #[error("witness trace is not forward")]
    NotForward,
    #[error("no forward step restores what step {index} undid")]
    NoRestoringStep { index: usize },
    #[error(transparent)]
    Relation(#[from] UnfoldError),
}

/// A validated firing sequence with all intermediate markings.
#[derive(Clone)]
pub struct Trace<P: Ord, T> {
    steps: Vec<Directed<T>>,
    markings: Vec<Marking<P>>,
}

/// Two traces are equal iff they start at the same marking and take the
/// same steps; in particular `ε_m = ε_m′` iff `m = m′`.
impl<P: Label, T: Label> PartialEq for Trace<P, T> {
    fn eq(&self, other: &Self) -> bool {
        self.start() == other.start() && self.steps == other.steps
    }
}

impl<P: Label, T: Label> Eq for Trace<P, T> {}

impl<P: Label, T: Label> fmt::Debug for Trace<P, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `[t1, ~t2] @ a b`.
impl<P: Label, T: Label> fmt::Display for Trace<P, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}] @ {}", steps.join(", "), self.start())
    }
}

/// A single `≍` axiom application at a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rewrite {
    Swap(usize),
    Cancel(usize),
}

impl<P: Label, T: Label> Trace<P, T> {
    /// `ε_m`.
    pub fn empty(m: Marking<P>) -> Self {
        Trace {
            steps: Vec::new(),
            markings: vec![m],
        }
    }

    pub fn start(&self) -> &Marking<P> {
        &self.markings[0]
    }

    pub fn final_marking(&self) -> &Marking<P> {
        self.markings.last().expect("non-empty")
    }

    pub fn steps(&self) -> &[Directed<T>] {
        &self.steps
    }

    pub fn markings(&self) -> &[Marking<P>] {
        &self.markings
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_forward(&self) -> bool {
        self.steps.iter().all(Directed::is_forward)
    }

    pub fn is_backward(&self) -> bool {
        self.steps.iter().all(Directed::is_reverse)
    }

    pub(crate) fn push(&mut self, step: Directed<T>, next: Marking<P>) {
        self.steps.push(step);
        self.markings.push(next);
    }

    pub(crate) fn pop(&mut self) {
        if self.steps.pop().is_some() {
            self.markings.pop();
        }
    }

    /// True iff the trace has the shape `backward* ; forward*`.
    pub fn is_parabolic(&self) -> bool {
        !self
            .steps
            .windows(2)
            .any(|w| w[0].is_forward() && w[1].is_reverse())
    }
}

/// Fires `steps` from `start`, recording every marking.
pub fn validate<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    start: Marking<P>,
    steps: Vec<Directed<T>>,
) -> Result<Trace<P, T>, TraceError> {
    let mut markings = Vec::with_capacity(steps.len() + 1);
    markings.push(start);
    for (index, t) in steps.iter().enumerate() {
        let next = r
            .fire_directed(markings.last().expect("non-empty"), t)
            .map_err(|_| TraceError::DisabledAt {
                index,
                transition: t.to_string(),
            })?;
        markings.push(next);
    }
    Ok(Trace { steps, markings })
}

/// Swaps steps `i` and `i+1` if they are concurrent.
pub fn swap_step<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr: &Trace<P, T>,
    i: usize,
) -> Result<Trace<P, T>, TraceError> {
    if i + 1 >= tr.len() {
        return Err(TraceError::OutOfRange { index: i });
    }
    if !r.steps_concurrent(&tr.steps[i], &tr.steps[i + 1])? {
        return Err(TraceError::NotConcurrent { index: i });
    }
    let mut steps = tr.steps.clone();
    steps.swap(i, i + 1);
    let m = &tr.markings[i];
    let mid = r
        .fire_directed(m, &steps[i])
        .map_err(|_| TraceError::DisabledAt {
            index: i,
            transition: steps[i].to_string(),
        })?;
    let end = r
        .fire_directed(&mid, &steps[i + 1])
        .map_err(|_| TraceError::DisabledAt {
            index: i + 1,
            transition: steps[i + 1].to_string(),
        })?;
    if end != tr.markings[i + 2] {
        return Err(TraceError::NotCofinal);
    }
    let mut markings = tr.markings.clone();
    markings[i + 1] = mid;
    Ok(Trace { steps, markings })
}

/// Removes steps `i` and `i+1` if the second undoes the first.
pub fn cancel_step<P: Label, T: Label>(tr: &Trace<P, T>, i: usize) -> Result<Trace<P, T>, TraceError> {
    if i + 1 >= tr.len() {
        return Err(TraceError::OutOfRange { index: i });
    }
    if tr.steps[i + 1] != tr.steps[i].inverse() {
        return Err(TraceError::NotInversePair { index: i });
    }
    let mut steps = tr.steps.clone();
    steps.drain(i..i + 2);
    let mut markings = tr.markings.clone();
    markings.drain(i + 1..i + 3);
    Ok(Trace { steps, markings })
}

/// Applies a rewrite to `tr`.
pub fn apply_rewrite<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr: &Trace<P, T>,
    rw: Rewrite,
) -> Result<Trace<P, T>, TraceError> {
    match rw {
        Rewrite::Swap(i) => swap_step(r, tr, i),
        Rewrite::Cancel(i) => cancel_step(tr, i),
    }
}

/// Rewrites `tr` into `backward ; forward` and returns both parts.
///
/// The earliest forward-then-backward pair is either an inverse pair, which
/// is cancelled, or a concurrent pair, which is swapped. Any other pair is
/// reported as an error, since it cannot occur in a reversible occurrence net.
pub fn parabolic_normal_form<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr: &Trace<P, T>,
) -> Result<(Trace<P, T>, Trace<P, T>), TraceError> {
    let (normal, _) = parabolic_with_rewrites(r, tr)?;
    Ok(split_parabolic(&normal))
}

/// Like [`parabolic_normal_form`], also returning the rewrites applied.
pub fn parabolic_with_rewrites<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr: &Trace<P, T>,
) -> Result<(Trace<P, T>, Vec<Rewrite>), TraceError> {
    let mut cur = tr.clone();
    let mut log = Vec::new();
    while let Some(i) = cur
        .steps
        .windows(2)
        .position(|w| w[0].is_forward() && w[1].is_reverse())
    {
        let rw = if cur.steps[i + 1] == cur.steps[i].inverse() {
            Rewrite::Cancel(i)
        } else {
            Rewrite::Swap(i)
        };
        cur = apply_rewrite(r, &cur, rw)?;
        log.push(rw);
    }
    Ok((cur, log))
}

fn split_parabolic<P: Label, T: Label>(tr: &Trace<P, T>) -> (Trace<P, T>, Trace<P, T>) {
    let k = tr.steps.iter().take_while(|s| s.is_reverse()).count();
    let backward = Trace {
        steps: tr.steps[..k].to_vec(),
        markings: tr.markings[..=k].to_vec(),
    };
    let forward = Trace {
        steps: tr.steps[k..].to_vec(),
        markings: tr.markings[k..].to_vec(),
    };
    (backward, forward)
}

/// Moves the first forward occurrence of `~s` after position `k` next to
/// the backward step `s` at `k` and cancels the pair.
fn pull_and_cancel<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr: &Trace<P, T>,
    k: usize,
    log: &mut Vec<Rewrite>,
) -> Result<Option<Trace<P, T>>, TraceError> {
    let redo = tr.steps[k].inverse();
    let Some(j) = tr.steps[k + 1..].iter().position(|s| *s == redo).map(|j| j + k + 1) else {
        return Ok(None);
    };
    let mut cur = tr.clone();
    for pos in (k + 1..j).rev() {
        cur = swap_step(r, &cur, pos)?;
        log.push(Rewrite::Swap(pos));
    }
    cur = cancel_step(&cur, k)?;
    log.push(Rewrite::Cancel(k));
    Ok(Some(cur))
}

/// Rewrites a trace into an all-forward one when it is coinitial and
/// cofinal with the forward `witness`.
pub fn shorten_to_forward<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr: &Trace<P, T>,
    witness: &Trace<P, T>,
) -> Result<Trace<P, T>, TraceError> {
    shorten_with_rewrites(r, tr, witness).map(|(t, _)| t)
}

/// Like [`shorten_to_forward`], also returning the rewrites applied.
pub fn shorten_with_rewrites<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr: &Trace<P, T>,
    witness: &Trace<P, T>,
) -> Result<(Trace<P, T>, Vec<Rewrite>), TraceError> {
    if tr.start() != witness.start() {
        return Err(TraceError::NotCoinitial);
    }
    if tr.final_marking() != witness.final_marking() {
        return Err(TraceError::NotCofinal);
    }
    if !witness.is_forward() {
        return Err(TraceError::NotForward);
    }
    let mut cur = tr.clone();
    let mut log = Vec::new();
    while !cur.is_forward() {
        let (normal, rws) = parabolic_with_rewrites(r, &cur)?;
        log.extend(rws);
        cur = normal;
        let k = cur.steps.iter().take_while(|s| s.is_reverse()).count();
        if k == 0 {
            break;
        }
        match pull_and_cancel(r, &cur, k - 1, &mut log)? {
            Some(next) => cur = next,
            None => return Err(TraceError::NoRestoringStep { index: k - 1 }),
        }
    }
    Ok((cur, log))
}

/// Parabolic form with every backward step whose forward version is redone
/// later cancelled against it.
pub fn reduce<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr: &Trace<P, T>,
) -> Result<(Trace<P, T>, Vec<Rewrite>), TraceError> {
    let (mut cur, mut log) = parabolic_with_rewrites(r, tr)?;
    let mut k = cur.steps.iter().take_while(|s| s.is_reverse()).count();
    while k > 0 {
        match pull_and_cancel(r, &cur, k - 1, &mut log)? {
            Some(next) => {
                cur = next;
                let (normal, rws) = parabolic_with_rewrites(r, &cur)?;
                log.extend(rws);
                cur = normal;
                k = cur.steps.iter().take_while(|s| s.is_reverse()).count();
            }
            None => k -= 1,
        }
    }
    Ok((cur, log))
}

/// Bubbles the steps of `from` into the order of `to` using swaps only.
/// Fails unless the two traces take the same steps up to permutation.
pub fn permute_to<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    from: &Trace<P, T>,
    to: &Trace<P, T>,
) -> Result<(Trace<P, T>, Vec<Rewrite>), TraceError> {
    if from.start() != to.start() {
        return Err(TraceError::NotCoinitial);
    }
    if from.len() != to.len() {
        return Err(TraceError::NotCofinal);
    }
    let mut cur = from.clone();
    let mut log = Vec::new();
    for i in 0..to.len() {
        let Some(j) = cur.steps[i..].iter().position(|s| *s == to.steps[i]).map(|j| j + i) else {
            return Err(TraceError::NotCofinal);
        };
        for pos in (i..j).rev() {
            cur = swap_step(r, &cur, pos)?;
            log.push(Rewrite::Swap(pos));
        }
    }
    Ok((cur, log))
}

/// Decides `tr1 ≍ tr2` by comparing final markings.
pub fn causally_equivalent<P: Label, T: Label>(
    tr1: &Trace<P, T>,
    tr2: &Trace<P, T>,
) -> Result<bool, TraceError> {
    if tr1.start() != tr2.start() {
        return Err(TraceError::NotCoinitial);
    }
    Ok(tr1.final_marking() == tr2.final_marking())
}

/// Rewrites connecting `tr1` and `tr2`: both are reduced, then the reduced
/// form of `tr1` is permuted into that of `tr2`. The result is the common
/// normal form together with the rewrites applied to each side.
pub fn equivalence_witness<P: Label, T: Label>(
    r: &ReversibleNet<P, T>,
    tr1: &Trace<P, T>,
    tr2: &Trace<P, T>,
) -> Result<(Trace<P, T>, Vec<Rewrite>, Vec<Rewrite>), TraceError> {
    if tr1.start() != tr2.start() {
        return Err(TraceError::NotCoinitial);
    }
    let (n1, mut log1) = reduce(r, tr1)?;
    let (n2, log2) = reduce(r, tr2)?;
    let (common, more) = permute_to(r, &n1, &n2)?;
    log1.extend(more);
    Ok((common, log1, log2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::net::{marking, PlaceId, TransId};
    use crate::reversible::reverse_occurrence;
    use crate::unfolding::{unfold, Condition, Event};

    fn rev_o1() -> ReversibleNet<PlaceId, TransId> {
        let (net, m) = catalog::o1();
        ReversibleNet::from_net(net, m).unwrap()
    }

    fn steps(names: &[&str]) -> Vec<Directed<TransId>> {
        names.iter()
            .map(|s| match s.strip_prefix('~') {
                Some(b) => Directed::reverse(TransId::from(b)),
                None => Directed::forward(TransId::from(*s)),
            })
            .collect()
    }

    fn tr(r: &ReversibleNet<PlaceId, TransId>, names: &[&str]) -> Trace<PlaceId, TransId> {
        validate(r, r.initial_marking().clone(), steps(names)).unwrap()
    }

    #[test]
    fn validation() {
        let r = rev_o1();
        let t = tr(&r, &["t1", "t2", "~t2"]);
        assert_eq!(t.markings()[2], marking(&[("c", 1), ("d", 1)]));
        assert_eq!(t.final_marking(), &marking(&[("b", 1), ("c", 1)]));
        let e = tr(&r, &[]);
        assert!(e.is_empty());
        assert_eq!(e, Trace::empty(r.initial_marking().clone()));
        assert_ne!(e, Trace::empty(marking(&[("c", 1)])));
        assert_eq!(
            validate(&r, r.initial_marking().clone(), steps(&["~t1"])),
            Err(TraceError::DisabledAt {
                index: 0,
                transition: "~t1".into()
            })
        );
    }

    #[test]
    fn swapping() {
        let r = rev_o1();
        let t = tr(&r, &["t1", "t2"]);
        let s = swap_step(&r, &t, 0).unwrap();
        assert_eq!(s.steps(), steps(&["t2", "t1"]).as_slice());
        assert_eq!(s.final_marking(), &marking(&[("c", 1), ("d", 1)]));
        assert_eq!(swap_step(&r, &s, 0).unwrap(), t);
        assert_eq!(swap_step(&r, &t, 1), Err(TraceError::OutOfRange { index: 1 }));
        let undo = tr(&r, &["t1", "~t1"]);
        assert_eq!(swap_step(&r, &undo, 0), Err(TraceError::NotConcurrent { index: 0 }));
    }

    #[test]
    fn cancelling() {
        let r = rev_o1();
        let t = tr(&r, &["t1", "~t1"]);
        assert_eq!(cancel_step(&t, 0).unwrap(), Trace::empty(r.initial_marking().clone()));
        let mid = tr(&r, &["t1", "t2", "~t1", "t1"]);
        let c = cancel_step(&mid, 2).unwrap();
        assert_eq!(c.steps(), steps(&["t1", "t2"]).as_slice());
        assert_eq!(c.markings().len(), 3);
        assert_eq!(c.final_marking(), mid.final_marking());
        let bad = tr(&r, &["t1", "t2", "~t2"]);
        assert_eq!(cancel_step(&bad, 0), Err(TraceError::NotInversePair { index: 0 }));
    }

    #[test]
    fn parabolic_forms() {
        let r = rev_o1();
        let fwd = tr(&r, &["t1", "t2"]);
        let (b, f) = parabolic_normal_form(&r, &fwd).unwrap();
        assert!(b.is_empty());
        assert_eq!(f, fwd);

        let (b, f) = parabolic_normal_form(&r, &tr(&r, &["t1", "~t1"])).unwrap();
        assert!(b.is_empty() && f.is_empty());
        assert_eq!(f.start(), r.initial_marking());

        let mixed = tr(&r, &["t1", "t2", "~t1"]);
        let (b, f) = parabolic_normal_form(&r, &mixed).unwrap();
        assert!(b.is_empty());
        assert_eq!(f.steps(), steps(&["t2"]).as_slice());
        assert_eq!(f.final_marking(), mixed.final_marking());
    }

    #[test]
    fn parabolic_on_n1_prefix() {
        let (n1, m1) = catalog::n1();
        let r: ReversibleNet<Condition, Event> = reverse_occurrence(&unfold(&n1, &m1, 2).unwrap().occurrence);
        let events: Vec<Event> = r.base().net().transitions().cloned().collect();
        let (s0, s1) = (events[0].clone(), events[1].clone());
        let t = validate(
            &r,
            r.initial_marking().clone(),
            vec![
                Directed::forward(s0.clone()),
                Directed::forward(s1.clone()),
                Directed::reverse(s1),
            ],
        )
        .unwrap();
        let (b, f) = parabolic_normal_form(&r, &t).unwrap();
        assert!(b.is_empty());
        assert_eq!(f.steps(), &[Directed::forward(s0)]);
        assert_eq!(f.final_marking(), t.final_marking());
    }

    #[test]
    fn shortening() {
        let r = rev_o1();
        let fwd = tr(&r, &["t1", "t2"]);
        assert_eq!(shorten_to_forward(&r, &fwd, &fwd).unwrap(), fwd);
        let witness = tr(&r, &["t2"]);
        for names in [&["t1", "~t1", "t2"][..], &["t1", "t2", "~t1"][..]] {
            let out = shorten_to_forward(&r, &tr(&r, names), &witness).unwrap();
            assert_eq!(out, witness);
        }
        assert_eq!(
            shorten_to_forward(&r, &tr(&r, &["t1"]), &witness),
            Err(TraceError::NotCofinal)
        );
        assert_eq!(
            shorten_to_forward(&r, &tr(&r, &["t2", "t1", "~t1"]), &tr(&r, &["t2", "t1", "~t1"])),
            Err(TraceError::NotForward)
        );
    }

    #[test]
    fn causal_equivalence() {
        let r = rev_o1();
        assert!(causally_equivalent(&tr(&r, &["t1", "t2"]), &tr(&r, &["t2", "t1"])).unwrap());
        assert!(!causally_equivalent(&tr(&r, &["t1"]), &tr(&r, &["t2"])).unwrap());
        assert!(causally_equivalent(&tr(&r, &["t1", "~t1"]), &tr(&r, &[])).unwrap());
        let elsewhere = validate(&r, marking(&[("c", 1), ("d", 1)]), vec![]).unwrap();
        assert_eq!(
            causally_equivalent(&tr(&r, &[]), &elsewhere),
            Err(TraceError::NotCoinitial)
        );
        let (common, _, _) =
            equivalence_witness(&r, &tr(&r, &["t1", "t2", "~t1", "t1"]), &tr(&r, &["t2", "t1"])).unwrap();
        assert_eq!(common.steps(), steps(&["t2", "t1"]).as_slice());
    }
}
