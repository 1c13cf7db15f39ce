use proptest::prelude::*;
use revnet::catalog;
use revnet::traces::reduce;
use revnet::{
    apply_rewrite, causally_equivalent, equivalence_witness, parabolic_normal_form, reverse_occurrence, swap_step,
    unfold, validate, Condition, Event, ReversibleNet, Trace,
};

fn nets() -> Vec<ReversibleNet<Condition, Event>> {
    [catalog::n1(), catalog::n2(), catalog::n5()]
        .into_iter()
        .map(|(n, m)| reverse_occurrence(&unfold(&n, &m, 3).unwrap().occurrence))
        .collect()
}

/// Follows `choices` through the enabled steps, stopping at deadlocks.
fn walk(r: &ReversibleNet<Condition, Event>, choices: &[usize]) -> Trace<Condition, Event> {
    let mut m = r.initial_marking().clone();
    let mut steps = Vec::new();
    for c in choices {
        let en = r.enabled(&m);
        if en.is_empty() {
            break;
        }
        let t = en[c % en.len()].clone();
        m = r.fire_directed(&m, &t).unwrap();
        steps.push(t);
    }
    validate(r, r.initial_marking().clone(), steps).unwrap()
}

fn arb_case() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    (0usize..3, proptest::collection::vec(0usize..16, 0..9), proptest::collection::vec(0usize..16, 0..9))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parabolic_form_is_cofinal((k, a, _b) in arb_case()) {
        let r = &nets()[k];
        let tr = walk(r, &a);
        let (back, fwd) = parabolic_normal_form(r, &tr).unwrap();
        prop_assert!(back.is_backward() && fwd.is_forward());
        prop_assert_eq!(back.start(), tr.start());
        prop_assert_eq!(back.final_marking(), fwd.start());
        prop_assert_eq!(fwd.final_marking(), tr.final_marking());
        prop_assert!(back.len() + fwd.len() <= tr.len());
    }

    #[test]
    fn rewrite_logs_replay((k, a, _b) in arb_case()) {
        let r = &nets()[k];
        let tr = walk(r, &a);
        let (normal, log) = reduce(r, &tr).unwrap();
        let mut cur = tr.clone();
        for rw in log {
            cur = apply_rewrite(r, &cur, rw).unwrap();
            prop_assert_eq!(cur.final_marking(), tr.final_marking());
        }
        prop_assert_eq!(cur, normal);
    }

    #[test]
    fn swaps_keep_endpoints((k, a, _b) in arb_case(), i in 0usize..8) {
        let r = &nets()[k];
        let tr = walk(r, &a);
        if let Ok(sw) = swap_step(r, &tr, i) {
            prop_assert_eq!(sw.start(), tr.start());
            prop_assert_eq!(sw.final_marking(), tr.final_marking());
            prop_assert_eq!(&sw.steps()[i], &tr.steps()[i + 1]);
            prop_assert_eq!(swap_step(r, &sw, i).unwrap(), tr);
        }
    }

    #[test]
    fn every_step_can_be_undone((k, a, _b) in arb_case()) {
        let r = &nets()[k];
        let tr = walk(r, &a);
        for (i, s) in tr.steps().iter().enumerate() {
            let back = r.fire_directed(&tr.markings()[i + 1], &s.inverse()).unwrap();
            prop_assert_eq!(&back, &tr.markings()[i]);
        }
    }

    #[test]
    fn equivalent_exactly_when_cofinal((k, a, b) in arb_case()) {
        let r = &nets()[k];
        let (t1, t2) = (walk(r, &a), walk(r, &b));
        let eq = causally_equivalent(&t1, &t2).unwrap();
        match equivalence_witness(r, &t1, &t2) {
            Ok((common, log1, log2)) => {
                prop_assert!(eq);
                let mut x = t1.clone();
                for rw in log1 { x = apply_rewrite(r, &x, rw).unwrap(); }
                let mut y = t2.clone();
                for rw in log2 { y = apply_rewrite(r, &y, rw).unwrap(); }
                prop_assert_eq!(&x, &common);
                prop_assert_eq!(y.final_marking(), common.final_marking());
                prop_assert_eq!(y.steps().len(), common.steps().len());
            }
            Err(_) => prop_assert!(!eq),
        }
    }
}
