//! Finite multisets over a totally ordered element type.
//!
//! `Multiset<T>` is the free commutative monoid over `T`: `⊕` is [`Multiset::sum`],
//! the empty multiset is the identity. Elements are kept in a `BTreeMap`, so
//! iteration, comparison and serialization are canonical.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use thiserror::Error;

/// Returned by [`Multiset::difference`] when the subtrahend is not contained
/// in the minuend.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("multiset underflow: {missing} more occurrence(s) of `{element}` required")]
pub struct Underflow {
    pub element: String,
    pub missing: usize,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset<T: Ord> {
    entries: BTreeMap<T, usize>,
}

impl<T: Ord> Default for Multiset<T> {
    fn default() -> Self {
        Multiset {
            entries: BTreeMap::new(),
        }
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: T) -> Self {
        let mut m = Self::new();
        m.insert(x);
        m
    }

    /// Builds a multiset from `(element, count)` pairs; zero counts are dropped.
    pub fn from_counts<I: IntoIterator<Item = (T, usize)>>(pairs: I) -> Self {
        let mut m = Self::new();
        for (x, n) in pairs {
            m.insert_n(x, n);
        }
        m
    }

    pub fn insert(&mut self, x: T) {
        self.insert_n(x, 1);
    }

    pub fn insert_n(&mut self, x: T, n: usize) {
        if n > 0 {
            *self.entries.entry(x).or_insert(0) += n;
        }
    }

    /// Removes one occurrence of `x`; returns false if `x` was absent.
    pub fn remove_one(&mut self, x: &T) -> bool {
        match self.entries.get_mut(x) {
            Some(n) if *n > 1 => {
                *n -= 1;
                true
            }
            Some(_) => {
                self.entries.remove(x);
                true
            }
            None => false,
        }
    }

    pub fn count(&self, x: &T) -> usize {
        self.entries.get(x).copied().unwrap_or(0)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.entries.contains_key(x)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|m|`, the sum of all counts.
    pub fn cardinality(&self) -> usize {
        self.entries.values().sum()
    }

    /// `supp(m)` in canonical order.
    pub fn support(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries.keys()
    }

    /// `(element, count)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&T, usize)> + '_ {
        self.entries.iter().map(|(x, n)| (x, *n))
    }

    /// Every occurrence, repeated according to its count.
    pub fn iter_expanded(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries
            .iter()
            .flat_map(|(x, n)| std::iter::repeat_n(x, *n))
    }

    /// `m1 ⊕ m2`.
    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, n) in other.iter() {
            out.insert_n(x.clone(), n);
        }
        out
    }

    /// Pointwise `self ≤ other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.entries.iter().all(|(x, n)| other.count(x) >= *n)
    }

    /// Pointwise difference `self − other`.
    pub fn difference(&self, other: &Self) -> Result<Self, Underflow>
    where
        T: fmt::Debug,
    {
        let mut out = self.clone();
        for (x, n) in other.iter() {
            let have = out.count(x);
            if have < n {
                return Err(Underflow {
                    element: format!("{x:?}"),
                    missing: n - have,
                });
            }
            if have == n {
                out.entries.remove(x);
            } else {
                out.entries.insert(x.clone(), have - n);
            }
        }
        Ok(out)
    }

    /// True iff the supports intersect.
    pub fn intersects(&self, other: &Self) -> bool {
        let (small, large) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.support().any(|x| large.contains(x))
    }

    /// True iff every count is at most one.
    pub fn is_set(&self) -> bool {
        self.entries.values().all(|n| *n <= 1)
    }

    /// Multiset image under `f`.
    pub fn map<U: Ord + Clone, F: FnMut(&T) -> U>(&self, mut f: F) -> Multiset<U> {
        let mut out = Multiset::new();
        for (x, n) in self.iter() {
            out.insert_n(f(x), n);
        }
        out
    }

    /// Like [`Multiset::map`] for fallible maps.
    pub fn try_map<U: Ord + Clone, E, F: FnMut(&T) -> Result<U, E>>(
        &self,
        mut f: F,
    ) -> Result<Multiset<U>, E> {
        let mut out = Multiset::new();
        for (x, n) in self.iter() {
            out.insert_n(f(x)?, n);
        }
        Ok(out)
    }
}

impl<T: Ord + Clone> Add for &Multiset<T> {
    type Output = Multiset<T>;

    fn add(self, rhs: Self) -> Multiset<T> {
        self.sum(rhs)
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Self::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl<T: Ord + Clone> Extend<T> for Multiset<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.insert(x);
        }
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// Renders `a c:2 d`, or `-` for the empty multiset.
impl<T: Ord + fmt::Display> fmt::Display for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("-");
        }
        for (i, (x, n)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *n == 1 {
                write!(f, "{x}")?;
            } else {
                write!(f, "{x}:{n}")?;
            }
        }
        Ok(())
    }
}
