//! The `.ptn` text format for P/T nets.
//!
//! ```text
//! net N5
//! places a b c d
//! marking a:2 b
//! trans t1 : a -> c
//! trans t2 : b, c -> d
//! ```
//!
//! `#` starts a comment running to the end of the line. Multiplicities
//! default to 1.

use std::fmt::Write as _;

use thiserror::Error;

use crate::multiset::Multiset;
use crate::net::{Marking, Net, NetError, PlaceId, TransId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PtnError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: {source}")]
    Semantic {
        line: usize,
        col: usize,
        #[source]
        source: NetError,
    },
}

/// A parsed `.ptn` document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetDocument {
    pub name: String,
    pub net: Net,
    pub marking: Marking,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Colon,
    Comma,
    Arrow,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const KEYWORDS: [&str; 4] = ["net", "places", "marking", "trans"];

fn lex(text: &str) -> Result<Vec<Spanned>, PtnError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = body.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    col,
                });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits.parse().map_err(|_| PtnError::Syntax {
                    line,
                    col,
                    message: format!("number `{digits}` is too large"),
                })?;
                out.push(Spanned { tok: Tok::Nat(n), line, col });
            } else if c == ':' {
                out.push(Spanned { tok: Tok::Colon, line, col });
                i += 1;
            } else if c == ',' {
                out.push(Spanned { tok: Tok::Comma, line, col });
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Spanned { tok: Tok::Arrow, line, col });
                i += 2;
            } else {
                return Err(PtnError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.col))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, PtnError> {
        let (line, col) = self.here();
        Err(PtnError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn ident(&mut self, what: &str) -> Result<String, PtnError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn at_keyword(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if KEYWORDS.contains(&s.as_str()))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), PtnError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{kw}`")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// `ident (":" nat)?`
    fn tok(&mut self) -> Result<(String, usize), PtnError> {
        let name = self.ident("a place name")?;
        if self.eat(&Tok::Colon) {
            match self.peek() {
                Some(Tok::Nat(n)) => {
                    let n = *n;
                    self.pos += 1;
                    Ok((name, n))
                }
                _ => self.fail("expected a multiplicity"),
            }
        } else {
            Ok((name, 1))
        }
    }

    /// `tok ("," tok)*`, or nothing at all.
    fn arcs(&mut self, stop: &Tok) -> Result<Multiset<PlaceId>, PtnError> {
        let mut out = Multiset::new();
        if self.peek() == Some(stop) || self.peek().is_none() || self.at_keyword() {
            return Ok(out);
        }
        loop {
            let (p, n) = self.tok()?;
            out.insert_n(PlaceId::new(p), n);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }
}

/// Parses a `.ptn` document into a net and its initial marking.
pub fn parse_net(text: &str) -> Result<NetDocument, PtnError> {
    let toks = lex(text)?;
    let end = toks.last().map_or((1, 1), |s| (s.line, s.col + 1));
    let mut p = Parser { toks, pos: 0, end };
    p.keyword("net")?;
    let name = p.ident("a net name")?;
    let mut places = Vec::new();
    let mut marking_decl: Option<(Marking, (usize, usize))> = None;
    let mut transitions = Vec::new();
    let mut trans_pos = Vec::new();
    while p.peek().is_some() {
        let at = p.here();
        match p.peek() {
            Some(Tok::Ident(k)) if k == "places" => {
                p.pos += 1;
                let before = places.len();
                while !p.at_keyword() && p.peek().is_some() {
                    places.push(PlaceId::new(p.ident("a place name")?));
                }
                if places.len() == before {
                    return p.fail("expected at least one place");
                }
            }
            Some(Tok::Ident(k)) if k == "marking" => {
                p.pos += 1;
                let mut m = marking_decl.take().map(|(m, _)| m).unwrap_or_default();
                let mut any = false;
                while !p.at_keyword() && p.peek().is_some() {
                    let (pl, n) = p.tok()?;
                    m.insert_n(PlaceId::new(pl), n);
                    any = true;
                }
                if !any {
                    return p.fail("expected at least one marked place");
                }
                marking_decl = Some((m, at));
            }
            Some(Tok::Ident(k)) if k == "trans" => {
                p.pos += 1;
                let t = p.ident("a transition name")?;
                if !p.eat(&Tok::Colon) {
                    return p.fail("expected `:`");
                }
                let pre = p.arcs(&Tok::Arrow)?;
                if !p.eat(&Tok::Arrow) {
                    return p.fail("expected `->`");
                }
                let post = p.arcs(&Tok::Arrow)?;
                trans_pos.push(at);
                transitions.push((TransId::new(t), pre, post));
            }
            _ => return p.fail("expected `places`, `marking` or `trans`"),
        }
    }
    let semantic = |(line, col): (usize, usize), source: NetError| PtnError::Semantic { line, col, source };
    for (i, (t, pre, post)) in transitions.iter().enumerate() {
        let single = Net::new(places.iter().cloned(), [(t.clone(), pre.clone(), post.clone())]);
        if let Err(e) = single {
            return Err(semantic(trans_pos[i], e));
        }
    }
    let net = Net::new(places, transitions).map_err(|e| {
        let at = match &e {
            NetError::DuplicateTransition(_) => *trans_pos.last().unwrap_or(&(1, 1)),
            _ => (1, 1),
        };
        semantic(at, e)
    })?;
    let (marking, at) = marking_decl.unwrap_or_default();
    net.check_marking(&marking).map_err(|e| semantic(at, e))?;
    Ok(NetDocument { name, net, marking })
}

fn render_tokens(m: &Multiset<PlaceId>, sep: &str) -> String {
    m.iter()
        .map(|(p, n)| if n == 1 { p.to_string() } else { format!("{p}:{n}") })
        .collect::<Vec<_>>()
        .join(sep)
}

/// Canonical `.ptn` text; [`parse_net`] reads it back to an equal net.
pub fn render_net(name: &str, net: &Net, m: &Marking) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "net {name}");
    let places: Vec<&str> = net.places().map(|p| p.as_str()).collect();
    if !places.is_empty() {
        let _ = writeln!(out, "places {}", places.join(" "));
    }
    if !m.is_empty() {
        let _ = writeln!(out, "marking {}", render_tokens(m, " "));
    }
    for (t, a) in net.arcs() {
        let _ = writeln!(out, "trans {t} : {} -> {}", render_tokens(&a.pre, ", "), render_tokens(&a.post, ", "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::net::marking;
    use proptest::prelude::*;

    const N1: &str = "# comment\nnet N1\nplaces a b c d e f\nmarking a b c d\ntrans t1 : a -> c\ntrans t2 : b, c -> e\ntrans t3 : c, d -> f  # trailing\n";

    #[test]
    fn parses_n1() {
        let doc = parse_net(N1).unwrap();
        let (n1, m1) = catalog::n1();
        assert_eq!(doc.name, "N1");
        assert_eq!(doc.net, n1);
        assert_eq!(doc.marking, m1);
    }

    #[test]
    fn multiplicities() {
        let doc = parse_net("net N5\nplaces a b c d\nmarking a:2 b:1\ntrans t1 : a -> c\ntrans t2 : b, c -> d").unwrap();
        assert_eq!(doc.marking, marking(&[("a", 2), ("b", 1)]));
        assert_eq!(doc.net, catalog::n5().0);
    }

    #[test]
    fn empty_preset_is_semantic() {
        let err = parse_net("net x\nplaces b\ntrans t : -> b").unwrap_err();
        assert_eq!(
            err,
            PtnError::Semantic {
                line: 3,
                col: 1,
                source: NetError::EmptyPreset("t".into())
            }
        );
        let err = parse_net("net x\nplaces a\ntrans t : a -> z").unwrap_err();
        assert!(matches!(err, PtnError::Semantic { source: NetError::UnknownPlace { .. }, .. }));
        let err = parse_net("net x\nplaces a\nmarking q").unwrap_err();
        assert!(matches!(err, PtnError::Semantic { line: 3, source: NetError::UnknownMarkedPlace(_), .. }));
    }

    #[test]
    fn syntax_errors_are_positioned() {
        assert_eq!(
            parse_net("net x\nplaces a\ntrans t a -> a").unwrap_err(),
            PtnError::Syntax {
                line: 3,
                col: 9,
                message: "expected `:`".into()
            }
        );
        assert!(matches!(parse_net("places a").unwrap_err(), PtnError::Syntax { line: 1, col: 1, .. }));
        assert!(matches!(
            parse_net("net x\nplaces a\nmarking a:").unwrap_err(),
            PtnError::Syntax { line: 3, .. }
        ));
        assert!(matches!(parse_net("net x\nplaces a $").unwrap_err(), PtnError::Syntax { line: 2, col: 10, .. }));
    }

    #[test]
    fn catalog_round_trips() {
        for (i, (net, m)) in [catalog::o1(), catalog::n1(), catalog::n2(), catalog::n3(), catalog::n4(), catalog::n5(), catalog::multi_token()]
            .into_iter()
            .enumerate()
        {
            let text = render_net(&format!("n{i}"), &net, &m);
            let doc = parse_net(&text).unwrap();
            assert_eq!((doc.net, doc.marking), (net, m));
        }
    }

    fn arb_net() -> impl Strategy<Value = (Net, Marking)> {
        let names = ["a", "b", "c", "d"];
        let arcs = proptest::collection::vec((0usize..4, 1usize..3), 1..3);
        (proptest::collection::vec((arcs.clone(), arcs), 0..4), proptest::collection::vec((0usize..4, 0usize..3), 0..4))
            .prop_map(move |(ts, m)| {
                let ms = |v: &Vec<(usize, usize)>| Multiset::from_counts(v.iter().map(|(i, n)| (PlaceId::from(names[*i]), *n)));
                let net = Net::new(
                    names.iter().map(|p| PlaceId::from(*p)),
                    ts.iter().enumerate().map(|(i, (pre, post))| (TransId::new(format!("t{i}")), ms(pre), ms(post))),
                )
                .unwrap();
                (net, Multiset::from_counts(m.iter().map(|(i, n)| (PlaceId::from(names[*i]), *n))))
            })
    }

    proptest! {
        #[test]
        fn render_then_parse(net_m in arb_net()) {
            let (net, m) = net_m;
            let doc = parse_net(&render_net("x", &net, &m)).unwrap();
            prop_assert_eq!(doc.net, net);
            prop_assert_eq!(doc.marking, m);
        }
    }
}
