//! Graphviz export. Output is deterministic: nodes and edges follow the
//! canonical order of places and transitions.

use std::fmt::Write as _;

use crate::coloured::{colour_to_text, ColouredMarking, ColouredNet};
use crate::multiset::Multiset;
use crate::net::{Label, Marking, Net};
use crate::reversible::{Directed, ReversibleNet};
use crate::unfolding::{Condition, Event, EventLabels, OccurrenceNet};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Default)]
struct Graph {
    places: Vec<(String, String, usize)>,
    transitions: Vec<(String, String, bool)>,
    edges: Vec<(String, String, Option<String>, bool)>,
}

impl Graph {
    fn render(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", quote(name));
        out.push_str("  rankdir=LR;\n");
        for (id, label, tokens) in &self.places {
            let label = if *tokens == 0 { label.clone() } else { format!("{label}\n{tokens}") };
            let extra = if *tokens > 0 { ", penwidth=2" } else { "" };
            let _ = writeln!(out, "  {} [shape=circle, label={}{extra}];", quote(id), quote(&label));
        }
        for (id, label, reverse) in &self.transitions {
            let extra = if *reverse { ", style=dashed" } else { "" };
            let _ = writeln!(out, "  {} [shape=box, label={}{extra}];", quote(id), quote(label));
        }
        for (from, to, label, reverse) in &self.edges {
            let mut attrs = Vec::new();
            if let Some(l) = label {
                attrs.push(format!("label={}", quote(l)));
            }
            if *reverse {
                attrs.push("style=dashed".to_owned());
            }
            if attrs.is_empty() {
                let _ = writeln!(out, "  {} -> {};", quote(from), quote(to));
            } else {
                let _ = writeln!(out, "  {} -> {} [{}];", quote(from), quote(to), attrs.join(", "));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn pt_graph<P: Label, T: Label>(
    net: &Net<P, T>,
    m: &Marking<P>,
    place_label: impl Fn(&P) -> String,
    trans_label: impl Fn(&T) -> String,
    reverse: impl Fn(&T) -> bool,
) -> Graph {
    let mut g = Graph::default();
    let pid = |p: &P| format!("p:{}", place_label(p));
    let tid = |t: &T| format!("t:{}", trans_label(t));
    let weight = |n: usize| (n > 1).then(|| n.to_string());
    for p in net.places() {
        g.places.push((pid(p), place_label(p), m.count(p)));
    }
    for (t, a) in net.arcs() {
        let rev = reverse(t);
        g.transitions.push((tid(t), trans_label(t), rev));
        for (p, n) in a.pre.iter() {
            g.edges.push((pid(p), tid(t), weight(n), rev));
        }
        for (p, n) in a.post.iter() {
            g.edges.push((tid(t), pid(p), weight(n), rev));
        }
    }
    g
}

/// A P/T net with its marking.
pub fn net_dot<P: Label, T: Label>(name: &str, net: &Net<P, T>, m: &Marking<P>) -> String {
    pt_graph(net, m, P::to_string, T::to_string, |_| false).render(name)
}

/// A net with directed transitions; reverse transitions and their arcs are dashed.
pub fn directed_dot<P: Label, T: Label>(name: &str, net: &Net<P, Directed<T>>, m: &Marking<P>) -> String {
    pt_graph(net, m, P::to_string, Directed::to_string, Directed::is_reverse).render(name)
}

/// An unfolding, with events named `*k` as in [`EventLabels`].
pub fn occurrence_dot(name: &str, o: &OccurrenceNet<Condition, Event>) -> String {
    let labels = EventLabels::new(o);
    pt_graph(
        o.net(),
        o.initial_marking(),
        |b| labels.condition(b),
        |e| format!("{}: {}", labels.event(e), e.transition()),
        |_| false,
    )
    .render(name)
}

/// The reversal of an unfolding at marking `m`.
pub fn reversible_dot(name: &str, r: &ReversibleNet<Condition, Event>, m: &Marking<Condition>) -> String {
    let labels = EventLabels::new(r.base());
    pt_graph(
        r.net(),
        m,
        |b| labels.condition(b),
        |d| {
            let e = labels.event(&d.base);
            let tilde = if d.is_reverse() { "~" } else { "" };
            format!("{tilde}{e}: {tilde}{}", d.base.transition())
        },
        Directed::is_reverse,
    )
    .render(name)
}

/// Tokens in place `p` of a coloured pattern, joined as arc text.
fn pattern_on(m: &ColouredMarking, p: &crate::net::PlaceId) -> Option<String> {
    let cs: Vec<String> = m
        .tokens()
        .iter_expanded()
        .filter(|tok| &tok.place == p)
        .map(|tok| colour_to_text(&tok.colour))
        .collect();
    (!cs.is_empty()).then(|| cs.join(", "))
}

/// A coloured net whose arcs are labelled with their colour patterns.
pub fn coloured_dot<T: Label>(name: &str, cn: &ColouredNet<T>, m: &ColouredMarking, is_reverse: impl Fn(&T) -> bool) -> String {
    let mut g = Graph::default();
    let counts: Multiset<_> = m.strip();
    for p in cn.places() {
        g.places.push((format!("p:{p}"), p.to_string(), counts.count(p)));
    }
    for (t, a) in cn.arcs() {
        let rev = is_reverse(t);
        let tid = format!("t:{t}");
        g.transitions.push((tid.clone(), t.to_string(), rev));
        for p in a.pre.strip().support() {
            g.edges.push((format!("p:{p}"), tid.clone(), pattern_on(&a.pre, p), rev));
        }
        for p in a.post.strip().support() {
            g.edges.push((tid.clone(), format!("p:{p}"), pattern_on(&a.post, p), rev));
        }
    }
    g.render(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::coloured::{encode, reverse_coloured};
    use crate::reversible::{naive_reversal, reverse_occurrence};
    use crate::unfolding::unfold;

    #[test]
    fn plain_net() {
        let (n5, m5) = catalog::n5();
        let out = net_dot("N5", &n5, &m5);
        assert!(out.starts_with("digraph \"N5\" {\n"));
        assert!(out.contains("\"p:a\" [shape=circle, label=\"a\\n2\", penwidth=2];"));
        assert!(out.contains("\"t:t2\" [shape=box, label=\"t2\"];"));
        assert!(out.contains("\"p:b\" -> \"t:t2\";"));
        assert_eq!(out, net_dot("N5", &n5, &m5));
    }

    #[test]
    fn weights_and_dashes() {
        let (n, m) = catalog::multi_token();
        let out = directed_dot("M", &naive_reversal(&n), &m);
        assert!(out.contains("\"t:t1\" -> \"p:b\" [label=\"2\"];"));
        assert!(out.contains("\"t:~t1\" [shape=box, label=\"~t1\", style=dashed];"));
        assert!(out.contains("\"p:b\" -> \"t:~t1\" [label=\"2\", style=dashed];"));
    }

    #[test]
    fn unfolding_and_reversal() {
        let (n1, m1) = catalog::n1();
        let u = unfold(&n1, &m1, 2).unwrap();
        let out = occurrence_dot("U", &u.occurrence);
        assert_eq!(out.matches("shape=box").count(), 5);
        assert_eq!(out.matches("shape=circle").count(), 9);
        assert!(out.contains("label=\"*0: t1\""));
        let r = reverse_occurrence(&u.occurrence);
        let out = reversible_dot("R", &r, r.initial_marking());
        assert_eq!(out.matches("style=dashed];\n").count(), 5 + u.occurrence.net().arc_count());
        assert!(out.contains("label=\"~*0: ~t1\""));
    }

    #[test]
    fn coloured_arcs_show_patterns() {
        let (n1, m1) = catalog::n1();
        let (cn, cm) = encode(&n1, &m1).unwrap();
        let rc = reverse_coloured(&cn).unwrap();
        let out = coloured_dot("C", &rc, &cm, Directed::is_reverse);
        assert!(out.contains("\"p:b\" -> \"t:t2\" [label=\"x1\"];"));
        assert!(out.contains("\"t:~t2\" -> \"p:c\" [label=\"x2\", style=dashed];"));
        assert!(out.contains("\"t:t2\" -> \"p:e\" [label=\"({t2({b(x1),c(x2)})},1)\"];"));
    }
}
