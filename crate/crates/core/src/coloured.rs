//! Coloured place/transition nets whose token colours record causal
//! histories, the encoding of a P/T net into one, and its reversal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::multiset::Multiset;
use crate::net::{Label, Marking, Net, NetError, PlaceId, TransId};
use crate::reversible::Directed;
use crate::unfolding::Condition;

/// A term of the colour grammar, possibly containing variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Colour {
    Var(String),
    /// `(h, n)`: a token with history `h` and disambiguating index `n ≥ 1`.
    Token { history: Multiset<Colour>, index: u32 },
    /// `t(h)`: the firing of `t` that consumed `h`.
    TransElem { transition: TransId, arg: Multiset<Colour> },
    /// `a(c)`: colour `c` sitting in place `a`.
    PlaceElem { place: PlaceId, colour: Box<Colour> },
}

impl Colour {
    pub fn var(name: impl Into<String>) -> Self {
        Colour::Var(name.into())
    }

    /// `(∅, n)`.
    pub fn initial(index: u32) -> Self {
        Colour::Token {
            history: Multiset::new(),
            index,
        }
    }

    pub fn token(history: Multiset<Colour>, index: u32) -> Self {
        Colour::Token { history, index }
    }

    pub fn trans_elem(transition: impl Into<TransId>, arg: Multiset<Colour>) -> Self {
        Colour::TransElem {
            transition: transition.into(),
            arg,
        }
    }

    pub fn place_elem(place: impl Into<PlaceId>, colour: Colour) -> Self {
        Colour::PlaceElem {
            place: place.into(),
            colour: Box::new(colour),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Colour::Var(_) => false,
            Colour::Token { history, .. } => history.support().all(Colour::is_ground),
            Colour::TransElem { arg, .. } => arg.support().all(Colour::is_ground),
            Colour::PlaceElem { colour, .. } => colour.is_ground(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Colour::Var(x) => {
                out.insert(x.clone());
            }
            Colour::Token { history: m, .. } | Colour::TransElem { arg: m, .. } => {
                for c in m.support() {
                    c.collect_vars(out);
                }
            }
            Colour::PlaceElem { colour, .. } => colour.collect_vars(out),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

fn write_hist(f: &mut fmt::Formatter<'_>, m: &Multiset<Colour>) -> fmt::Result {
    f.write_str("{")?;
    for (i, c) in m.iter_expanded().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("}")
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colour::Var(x) => f.write_str(x),
            Colour::Token { history, index } => {
                f.write_str("(")?;
                write_hist(f, history)?;
                write!(f, ",{index})")
            }
            Colour::TransElem { transition, arg } => {
                write!(f, "{transition}(")?;
                write_hist(f, arg)?;
                f.write_str(")")
            }
            Colour::PlaceElem { place, colour } => write!(f, "{place}({colour})"),
        }
    }
}

impl fmt::Debug for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A coloured token `a(c)`: colour `c` in place `a`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColouredToken {
    pub place: PlaceId,
    pub colour: Colour,
}

impl ColouredToken {
    pub fn new(place: impl Into<PlaceId>, colour: Colour) -> Self {
        ColouredToken {
            place: place.into(),
            colour,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.colour.is_ground()
    }
}

impl fmt::Display for ColouredToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.place, self.colour)
    }
}

impl fmt::Debug for ColouredToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A multiset of coloured tokens; a marking when ground, an arc pattern otherwise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ColouredMarking(pub Multiset<ColouredToken>);

impl ColouredMarking {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tokens(&self) -> &Multiset<ColouredToken> {
        &self.0
    }

    pub fn is_ground(&self) -> bool {
        self.0.support().all(ColouredToken::is_ground)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for tok in self.0.support() {
            tok.colour.collect_vars(&mut out);
        }
        out
    }

    /// The underlying P/T marking.
    pub fn strip(&self) -> Marking {
        self.0.map(|tok| tok.place.clone())
    }
}

impl FromIterator<ColouredToken> for ColouredMarking {
    fn from_iter<I: IntoIterator<Item = ColouredToken>>(iter: I) -> Self {
        ColouredMarking(iter.into_iter().collect())
    }
}

/// `{a(({},1)),b(({},1))}`.
impl fmt::Display for ColouredMarking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, tok) in self.0.iter_expanded().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{tok}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ColouredMarking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Variable bindings `σ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Substitution(pub BTreeMap<String, Colour>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, x: impl Into<String>, c: Colour) -> Self {
        self.0.insert(x.into(), c);
        self
    }

    pub fn get(&self, x: &str) -> Option<&Colour> {
        self.0.get(x)
    }

    /// `cσ`.
    pub fn apply(&self, c: &Colour) -> Result<Colour, ColouredError> {
        Ok(match c {
            Colour::Var(x) => self
                .0
                .get(x)
                .cloned()
                .ok_or_else(|| ColouredError::UnboundVariable(x.clone()))?,
            Colour::Token { history, index } => Colour::Token {
                history: history.try_map(|h| self.apply(h))?,
                index: *index,
            },
            Colour::TransElem { transition, arg } => Colour::TransElem {
                transition: transition.clone(),
                arg: arg.try_map(|h| self.apply(h))?,
            },
            Colour::PlaceElem { place, colour } => Colour::PlaceElem {
                place: place.clone(),
                colour: Box::new(self.apply(colour)?),
            },
        })
    }
}

/// `{x=({},1), y=t1({})}`.
impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}={c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColouredError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("the chosen substitution does not enable `{0}`")]
    InvalidChoice(String),
    #[error("transition `{0}` has more variables in its postset than in its preset")]
    PostVariables(String),
    #[error("transition `{0}` is not an encoded transition: preset and postset variables differ")]
    NotEncodedNet(String),
    #[error("marking is not ground")]
    NotGround,
    #[error(transparent)]
    Net(#[from] NetError),
}

/// `mσ`.
pub fn subst(pattern: &ColouredMarking, s: &Substitution) -> Result<ColouredMarking, ColouredError> {
    Ok(ColouredMarking(pattern.0.try_map(|tok| {
        Ok::<_, ColouredError>(ColouredToken {
            place: tok.place.clone(),
            colour: s.apply(&tok.colour)?,
        })
    })?))
}

/// All ways of extending `s` so that `pattern σ = ground`.
fn unify(pattern: &Colour, ground: &Colour, s: &Substitution) -> Vec<Substitution> {
    match (pattern, ground) {
        (Colour::Var(x), _) => match s.0.get(x) {
            Some(bound) if bound == ground => vec![s.clone()],
            Some(_) => Vec::new(),
            None => vec![s.clone().bind(x.clone(), ground.clone())],
        },
        (
            Colour::Token { history: hp, index: ip },
            Colour::Token { history: hg, index: ig },
        ) if ip == ig => unify_multiset(hp, hg, s),
        (
            Colour::TransElem { transition: tp, arg: ap },
            Colour::TransElem { transition: tg, arg: ag },
        ) if tp == tg => unify_multiset(ap, ag, s),
        (
            Colour::PlaceElem { place: pp, colour: cp },
            Colour::PlaceElem { place: pg, colour: cg },
        ) if pp == pg => unify(cp, cg, s),
        _ => Vec::new(),
    }
}

/// Exact multiset matching: every ground occurrence is used exactly once.
fn unify_multiset(pattern: &Multiset<Colour>, ground: &Multiset<Colour>, s: &Substitution) -> Vec<Substitution> {
    if pattern.cardinality() != ground.cardinality() {
        return Vec::new();
    }
    if ms_is_ground(pattern) && ms_is_ground(ground) {
        return if pattern == ground { vec![s.clone()] } else { Vec::new() };
    }
    let pats: Vec<&Colour> = pattern.iter_expanded().collect();
    let mut pool: Vec<(&Colour, usize)> = ground.iter().collect();
    let mut out = BTreeSet::new();
    assign(&pats, &mut pool, s, &mut |sub| {
        out.insert(sub.clone());
    });
    out.into_iter().collect()
}

fn assign(pats: &[&Colour], pool: &mut Vec<(&Colour, usize)>, s: &Substitution, emit: &mut dyn FnMut(&Substitution)) {
    let Some((first, rest)) = pats.split_first() else {
        emit(s);
        return;
    };
    for k in 0..pool.len() {
        if pool[k].1 == 0 {
            continue;
        }
        let g = pool[k].0;
        for s2 in unify(first, g, s) {
            pool[k].1 -= 1;
            assign(rest, pool, &s2, emit);
            pool[k].1 += 1;
        }
    }
}

fn ms_is_ground(m: &Multiset<Colour>) -> bool {
    m.support().all(Colour::is_ground)
}

/// One way of firing a transition: the substitution and the tokens it consumes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Match {
    pub consumed: ColouredMarking,
    pub substitution: Substitution,
}

/// Every `σ` with `preσ ≤ m`, ordered by consumed tokens, then by `σ`.
pub fn match_preset(pre: &ColouredMarking, m: &ColouredMarking) -> Vec<Match> {
    let pats: Vec<&ColouredToken> = pre.0.iter_expanded().collect();
    let mut pool: Vec<(&ColouredToken, usize)> = m.0.iter().collect();
    let mut found = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    select(&pats, &mut pool, &Substitution::new(), &mut chosen, &mut |s, chosen, pool| {
        let consumed: ColouredMarking = chosen.iter().map(|&k| pool[k].0.clone()).collect();
        found.insert(Match {
            consumed,
            substitution: s.clone(),
        });
    });
    found.into_iter().collect()
}

type Emit<'a, 'b> = dyn FnMut(&Substitution, &[usize], &[(&'b ColouredToken, usize)]) + 'a;

fn select<'b>(
    pats: &[&ColouredToken],
    pool: &mut Vec<(&'b ColouredToken, usize)>,
    s: &Substitution,
    chosen: &mut Vec<usize>,
    emit: &mut Emit<'_, 'b>,
) {
    let Some((first, rest)) = pats.split_first() else {
        emit(s, chosen, pool);
        return;
    };
    for k in 0..pool.len() {
        if pool[k].1 == 0 || pool[k].0.place != first.place {
            continue;
        }
        let g = &pool[k].0.colour;
        for s2 in unify(&first.colour, g, s) {
            pool[k].1 -= 1;
            chosen.push(k);
            select(rest, pool, &s2, chosen, emit);
            chosen.pop();
            pool[k].1 += 1;
        }
    }
}

/// Preset and postset patterns of a coloured transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredArcs {
    pub pre: ColouredMarking,
    pub post: ColouredMarking,
}

/// A c-p/t net: places, and transitions with coloured arc patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredNet<T: Ord = TransId> {
    places: BTreeSet<PlaceId>,
    transitions: BTreeMap<T, ColouredArcs>,
}

impl<T: Label> ColouredNet<T> {
    /// Checks non-empty arcs, declared places, and `vars(t•) ⊆ vars(•t)`.
    pub fn new<IP, IT>(places: IP, transitions: IT) -> Result<Self, ColouredError>
    where
        IP: IntoIterator<Item = PlaceId>,
        IT: IntoIterator<Item = (T, ColouredMarking, ColouredMarking)>,
    {
        let places: BTreeSet<PlaceId> = places.into_iter().collect();
        let mut map = BTreeMap::new();
        for (t, pre, post) in transitions {
            if pre.0.is_empty() {
                return Err(NetError::EmptyPreset(t.to_string()).into());
            }
            if post.0.is_empty() {
                return Err(NetError::EmptyPostset(t.to_string()).into());
            }
            if let Some(tok) = pre.0.support().chain(post.0.support()).find(|k| !places.contains(&k.place)) {
                return Err(NetError::UnknownPlace {
                    transition: t.to_string(),
                    place: tok.place.to_string(),
                }
                .into());
            }
            if !post.vars().is_subset(&pre.vars()) {
                return Err(ColouredError::PostVariables(t.to_string()));
            }
            if map.contains_key(&t) {
                return Err(NetError::DuplicateTransition(t.to_string()).into());
            }
            map.insert(t, ColouredArcs { pre, post });
        }
        Ok(ColouredNet {
            places,
            transitions: map,
        })
    }

    pub fn places(&self) -> impl Iterator<Item = &PlaceId> + '_ {
        self.places.iter()
    }

    pub fn transitions(&self) -> impl Iterator<Item = &T> + '_ {
        self.transitions.keys()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&T, &ColouredArcs)> + '_ {
        self.transitions.iter()
    }

    pub fn pre(&self, t: &T) -> Option<&ColouredMarking> {
        self.transitions.get(t).map(|a| &a.pre)
    }

    pub fn post(&self, t: &T) -> Option<&ColouredMarking> {
        self.transitions.get(t).map(|a| &a.post)
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    /// Matches of `•t` against `m`; empty when `t` is disabled or unknown.
    pub fn matches(&self, m: &ColouredMarking, t: &T) -> Vec<Match> {
        self.pre(t).map_or_else(Vec::new, |pre| match_preset(pre, m))
    }

    /// Every enabled transition with its matches, in canonical order.
    pub fn enabled(&self, m: &ColouredMarking) -> Vec<(T, Vec<Match>)> {
        self.transitions
            .iter()
            .filter_map(|(t, a)| {
                let ms = match_preset(&a.pre, m);
                (!ms.is_empty()).then(|| (t.clone(), ms))
            })
            .collect()
    }

    /// `(m − •tσ) ⊕ t•σ`.
    pub fn fire(&self, m: &ColouredMarking, t: &T, choice: &Substitution) -> Result<ColouredMarking, ColouredError> {
        let arcs = self
            .transitions
            .get(t)
            .ok_or_else(|| ColouredError::UnknownTransition(t.to_string()))?;
        let invalid = || ColouredError::InvalidChoice(t.to_string());
        let pre = subst(&arcs.pre, choice).map_err(|_| invalid())?;
        let post = subst(&arcs.post, choice).map_err(|_| invalid())?;
        let rest = m.0.difference(&pre.0).map_err(|_| invalid())?;
        Ok(ColouredMarking(rest.sum(&post.0)))
    }

    /// The P/T net obtained by forgetting colours.
    pub fn skeleton(&self) -> Net<PlaceId, T> {
        Net::new(
            self.places.iter().cloned(),
            self.transitions
                .iter()
                .map(|(t, a)| (t.clone(), a.pre.strip(), a.post.strip())),
        )
        .expect("skeleton of a valid coloured net")
    }
}

/// `⟦N, m⟧`.
pub fn encode(net: &Net, m: &Marking) -> Result<(ColouredNet, ColouredMarking), ColouredError> {
    net.check_marking(m)?;
    let mut transitions = Vec::new();
    for (t, arcs) in net.arcs() {
        let mut pre = Multiset::new();
        for (i, a) in (1..).zip(arcs.pre.iter_expanded()) {
            pre.insert(ColouredToken::new(a.clone(), Colour::var(format!("x{i}"))));
        }
        let h: Multiset<Colour> = pre
            .iter_expanded()
            .map(|tok: &ColouredToken| Colour::place_elem(tok.place.clone(), tok.colour.clone()))
            .collect();
        let cause = Colour::trans_elem(t.clone(), h);
        let mut post = Multiset::new();
        for (a, n) in arcs.post.iter() {
            for i in 1..=n {
                let colour = Colour::token(Multiset::singleton(cause.clone()), i as u32);
                post.insert(ColouredToken::new(a.clone(), colour));
            }
        }
        transitions.push((t.clone(), ColouredMarking(pre), ColouredMarking(post)));
    }
    let cn = ColouredNet::new(net.places().cloned(), transitions)?;
    Ok((cn, initial_colouring(m)))
}

/// `a((∅, i))` for `i = 1..m(a)`.
pub fn initial_colouring(m: &Marking) -> ColouredMarking {
    let mut out = Multiset::new();
    for (a, n) in m.iter() {
        for i in 1..=n {
            out.insert(ColouredToken::new(a.clone(), Colour::initial(i as u32)));
        }
    }
    ColouredMarking(out)
}

/// Adds `~t` with swapped patterns for every transition of an encoded net.
pub fn reverse_coloured(n: &ColouredNet) -> Result<ColouredNet<Directed<TransId>>, ColouredError> {
    for (t, a) in n.arcs() {
        if a.pre.vars() != a.post.vars() {
            return Err(ColouredError::NotEncodedNet(t.to_string()));
        }
    }
    ColouredNet::new(
        n.places().cloned(),
        n.arcs().flat_map(|(t, a)| {
            [
                (Directed::forward(t.clone()), a.pre.clone(), a.post.clone()),
                (Directed::reverse(t.clone()), a.post.clone(), a.pre.clone()),
            ]
        }),
    )
}

/// The colour a condition of the unfolding corresponds to: initial
/// conditions `a(∅,i)` become `(∅,i)`, and a condition produced by `t(H)`
/// becomes `({t(h)},i)` where `h` lists the coloured preset of the event.
pub fn condition_colour(b: &Condition) -> Colour {
    let history = match b.producer() {
        None => Multiset::new(),
        Some(e) => {
            let h: Multiset<Colour> = e
                .preset()
                .iter()
                .map(|c| Colour::place_elem(c.place().clone(), condition_colour(c)))
                .collect();
            Multiset::singleton(Colour::trans_elem(e.transition().clone(), h))
        }
    };
    Colour::token(history, b.index())
}

/// Translates a marking of the unfolding into a coloured marking.
pub fn translate_marking(m: &Marking<Condition>) -> ColouredMarking {
    ColouredMarking(m.map(|b| ColouredToken::new(b.place().clone(), condition_colour(b))))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {position}")]
pub struct ColourParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { src: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ColourParseError> {
        Err(ColourParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ColourParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn ident(&mut self) -> Result<String, ColourParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos || !(self.src[start].is_ascii_alphabetic() || self.src[start] == b'_') {
            self.pos = start;
            return self.err("expected identifier");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn nat(&mut self) -> Result<u32, ColourParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match text.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => {
                self.pos = start;
                self.err("expected a positive index")
            }
        }
    }

    fn hist(&mut self) -> Result<Multiset<Colour>, ColourParseError> {
        self.expect(b'{')?;
        let mut out = Multiset::new();
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.insert(self.colour()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.err("expected `,` or `}`"),
            }
        }
    }

    fn colour(&mut self) -> Result<Colour, ColourParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let history = self.hist()?;
                self.expect(b',')?;
                let index = self.nat()?;
                self.expect(b')')?;
                Ok(Colour::Token { history, index })
            }
            Some(_) => {
                let name = self.ident()?;
                if self.peek() != Some(b'(') {
                    return Ok(Colour::Var(name));
                }
                self.pos += 1;
                if self.peek() == Some(b'{') {
                    let arg = self.hist()?;
                    self.expect(b')')?;
                    Ok(Colour::TransElem {
                        transition: TransId::new(name),
                        arg,
                    })
                } else {
                    let inner = self.colour()?;
                    self.expect(b')')?;
                    Ok(Colour::PlaceElem {
                        place: PlaceId::new(name),
                        colour: Box::new(inner),
                    })
                }
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn finish(&mut self) -> Result<(), ColourParseError> {
        if self.peek().is_some() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }
}

pub fn colour_to_text(c: &Colour) -> String {
    c.to_string()
}

pub fn colour_parse(s: &str) -> Result<Colour, ColourParseError> {
    let mut p = Parser::new(s);
    let c = p.colour()?;
    p.finish()?;
    Ok(c)
}

/// Parses `x1=c1, x2=c2, ...` as a substitution.
pub fn parse_substitution(s: &str) -> Result<Substitution, ColourParseError> {
    let mut p = Parser::new(s);
    let mut out = Substitution::new();
    loop {
        let x = p.ident()?;
        p.expect(b'=')?;
        let c = p.colour()?;
        out = out.bind(x, c);
        if p.peek() == Some(b',') {
            p.pos += 1;
        } else {
            break;
        }
    }
    p.finish()?;
    Ok(out)
}

/// Parses `{a(c1),b(c2),...}` as a coloured marking.
pub fn parse_coloured_marking(s: &str) -> Result<ColouredMarking, ColourParseError> {
    let mut p = Parser::new(s);
    let elems = p.hist()?;
    p.finish()?;
    let mut out = Multiset::new();
    for (c, n) in elems.iter() {
        match c {
            Colour::PlaceElem { place, colour } => {
                out.insert_n(ColouredToken::new(place.clone(), (**colour).clone()), n)
            }
            other => {
                return Err(ColourParseError {
                    position: 0,
                    message: format!("`{other}` is not a place element"),
                })
            }
        }
    }
    Ok(ColouredMarking(out))
}
