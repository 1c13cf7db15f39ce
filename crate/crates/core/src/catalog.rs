//! The small reference nets used throughout the docs, tests and benches.
//!
//! Each function returns the net together with its initial marking. The same
//! nets ship as `.ptn` files under `nets/` at the repository root.

use crate::net::{marking, Marking, Net, NetBuilder};

/// Two independent one-shot transitions `a → c` and `b → d`.
pub fn o1() -> (Net, Marking) {
    let net = NetBuilder::new()
        .places(["a", "b", "c", "d"])
        .transition("t1", &[("a", 1)], &[("c", 1)])
        .transition("t2", &[("b", 1)], &[("d", 1)])
        .build()
        .expect("valid net");
    (net, marking(&[("a", 1), ("b", 1)]))
}

/// `t1: a → c`, `t2: b ⊕ c → e`, `t3: c ⊕ d → f` from `a ⊕ b ⊕ c ⊕ d`.
pub fn n1() -> (Net, Marking) {
    let net = NetBuilder::new()
        .places(["a", "b", "c", "d", "e", "f"])
        .transition("t1", &[("a", 1)], &[("c", 1)])
        .transition("t2", &[("b", 1), ("c", 1)], &[("e", 1)])
        .transition("t3", &[("c", 1), ("d", 1)], &[("f", 1)])
        .build()
        .expect("valid net");
    (net, marking(&[("a", 1), ("b", 1), ("c", 1), ("d", 1)]))
}

/// Backward conflict on `d`: `t1: a → d`, `t2: b → d`, `t3: c ⊕ d → e`.
pub fn n2() -> (Net, Marking) {
    let net = NetBuilder::new()
        .places(["a", "b", "c", "d", "e"])
        .transition("t1", &[("a", 1)], &[("d", 1)])
        .transition("t2", &[("b", 1)], &[("d", 1)])
        .transition("t3", &[("c", 1), ("d", 1)], &[("e", 1)])
        .build()
        .expect("valid net");
    (net, marking(&[("a", 1), ("b", 1), ("c", 1)]))
}

/// The self-loop `t1: a → a ⊕ b`.
pub fn n3() -> (Net, Marking) {
    let net = NetBuilder::new()
        .places(["a", "b"])
        .transition("t1", &[("a", 1)], &[("a", 1), ("b", 1)])
        .build()
        .expect("valid net");
    (net, marking(&[("a", 1)]))
}

/// `t1: a ⊕ c → c ⊕ d`, `t2: b ⊕ c → c ⊕ e` from `a ⊕ b ⊕ c`.
pub fn n4() -> (Net, Marking) {
    let net = NetBuilder::new()
        .places(["a", "b", "c", "d", "e"])
        .transition("t1", &[("a", 1), ("c", 1)], &[("c", 1), ("d", 1)])
        .transition("t2", &[("b", 1), ("c", 1)], &[("c", 1), ("e", 1)])
        .build()
        .expect("valid net");
    (net, marking(&[("a", 1), ("b", 1), ("c", 1)]))
}

/// `t1: a → c`, `t2: b ⊕ c → d` from `a ⊕ a ⊕ b`.
pub fn n5() -> (Net, Marking) {
    let net = NetBuilder::new()
        .places(["a", "b", "c", "d"])
        .transition("t1", &[("a", 1)], &[("c", 1)])
        .transition("t2", &[("b", 1), ("c", 1)], &[("d", 1)])
        .build()
        .expect("valid net");
    (net, marking(&[("a", 2), ("b", 1)]))
}

/// `t1: a → b ⊕ b`, `t2: b → a` from `a ⊕ a`.
pub fn multi_token() -> (Net, Marking) {
    let net = NetBuilder::new()
        .places(["a", "b"])
        .transition("t1", &[("a", 1)], &[("b", 2)])
        .transition("t2", &[("b", 1)], &[("a", 1)])
        .build()
        .expect("valid net");
    (net, marking(&[("a", 2)]))
}

/// `a` feeds `d` either through `b` (t1, t3) or through `c` (t2, t4).
pub fn backward_conflict() -> (Net, Marking) {
    let net = NetBuilder::new()
        .places(["a", "b", "c", "d"])
        .transition("t1", &[("a", 1)], &[("b", 1)])
        .transition("t2", &[("a", 1)], &[("c", 1)])
        .transition("t3", &[("b", 1)], &[("d", 1)])
        .transition("t4", &[("c", 1)], &[("d", 1)])
        .build()
        .expect("valid net");
    (net, marking(&[("a", 1)]))
}
