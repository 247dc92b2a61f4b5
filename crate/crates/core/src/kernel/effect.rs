use std::fmt;

use serde::{Deserialize, Serialize};

use super::space::{Label, Letter, Word};

/// The four monads with finite Kleisli effects handled by this crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonadKind {
    /// `P`
    Pow,
    /// `P(Σ_τ × Id)`
    Lts,
    /// `P(Σ* × Id)`
    FreeLts,
    /// `P(Σ* × Id + Σ*)`
    Ena,
}

impl MonadKind {
    pub const ALL: [MonadKind; 4] = [MonadKind::Pow, MonadKind::Lts, MonadKind::FreeLts, MonadKind::Ena];

    pub fn name(self) -> &'static str {
        match self {
            MonadKind::Pow => "pow",
            MonadKind::Lts => "lts",
            MonadKind::FreeLts => "free-lts",
            MonadKind::Ena => "ena",
        }
    }
}

impl fmt::Display for MonadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The value `T X` at a single state. Every set is kept sorted and
/// duplicate-free, so structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Effect {
    Pow(Vec<usize>),
    Lts(Vec<(Label, usize)>),
    FreeLts(Vec<(Word, usize)>),
    Ena { pairs: Vec<(Word, usize)>, bare: Vec<Word> },
}

fn canon<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort_unstable();
    v.dedup();
    v
}

fn merge<T: Ord + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn subset<T: Ord>(a: &[T], b: &[T]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

impl Effect {
    pub fn empty(kind: MonadKind) -> Effect {
        match kind {
            MonadKind::Pow => Effect::Pow(Vec::new()),
            MonadKind::Lts => Effect::Lts(Vec::new()),
            MonadKind::FreeLts => Effect::FreeLts(Vec::new()),
            MonadKind::Ena => Effect::Ena { pairs: Vec::new(), bare: Vec::new() },
        }
    }

    pub fn pow(states: Vec<usize>) -> Effect {
        Effect::Pow(canon(states))
    }

    pub fn lts(pairs: Vec<(Label, usize)>) -> Effect {
        Effect::Lts(canon(pairs))
    }

    pub fn free_lts(pairs: Vec<(Word, usize)>) -> Effect {
        Effect::FreeLts(canon(pairs))
    }

    pub fn ena(pairs: Vec<(Word, usize)>, bare: Vec<Word>) -> Effect {
        Effect::Ena { pairs: canon(pairs), bare: canon(bare) }
    }

    pub fn kind(&self) -> MonadKind {
        match self {
            Effect::Pow(_) => MonadKind::Pow,
            Effect::Lts(_) => MonadKind::Lts,
            Effect::FreeLts(_) => MonadKind::FreeLts,
            Effect::Ena { .. } => MonadKind::Ena,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Effect::Pow(v) => v.is_empty(),
            Effect::Lts(v) => v.is_empty(),
            Effect::FreeLts(v) => v.is_empty(),
            Effect::Ena { pairs, bare } => pairs.is_empty() && bare.is_empty(),
        }
    }

    /// Number of elements of the effect set.
    pub fn size(&self) -> usize {
        match self {
            Effect::Pow(v) => v.len(),
            Effect::Lts(v) => v.len(),
            Effect::FreeLts(v) => v.len(),
            Effect::Ena { pairs, bare } => pairs.len() + bare.len(),
        }
    }

    /// Successor states mentioned by the effect, in order, possibly repeated.
    pub fn successors(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match self {
            Effect::Pow(v) => Box::new(v.iter().copied()),
            Effect::Lts(v) => Box::new(v.iter().map(|&(_, y)| y)),
            Effect::FreeLts(v) | Effect::Ena { pairs: v, .. } => Box::new(v.iter().map(|(_, y)| *y)),
        }
    }

    /// Word-labelled pairs of a `FreeLts` or `Ena` effect.
    pub fn word_pairs(&self) -> &[(Word, usize)] {
        match self {
            Effect::FreeLts(v) | Effect::Ena { pairs: v, .. } => v,
            _ => &[],
        }
    }

    /// The bare `Σ*` component of an `Ena` effect.
    pub fn bare(&self) -> &[Word] {
        match self {
            Effect::Ena { bare, .. } => bare,
            _ => &[],
        }
    }

    /// Set union. Panics if the kinds differ; callers check kinds first.
    pub fn union(&self, other: &Effect) -> Effect {
        match (self, other) {
            (Effect::Pow(a), Effect::Pow(b)) => Effect::Pow(merge(a, b)),
            (Effect::Lts(a), Effect::Lts(b)) => Effect::Lts(merge(a, b)),
            (Effect::FreeLts(a), Effect::FreeLts(b)) => Effect::FreeLts(merge(a, b)),
            (Effect::Ena { pairs: a, bare: x }, Effect::Ena { pairs: b, bare: y }) => {
                Effect::Ena { pairs: merge(a, b), bare: merge(x, y) }
            }
            _ => panic!("union of {} and {} effects", self.kind(), other.kind()),
        }
    }

    /// Set inclusion; effects of different kinds are incomparable.
    pub fn is_subset(&self, other: &Effect) -> bool {
        match (self, other) {
            (Effect::Pow(a), Effect::Pow(b)) => subset(a, b),
            (Effect::Lts(a), Effect::Lts(b)) => subset(a, b),
            (Effect::FreeLts(a), Effect::FreeLts(b)) => subset(a, b),
            (Effect::Ena { pairs: a, bare: x }, Effect::Ena { pairs: b, bare: y }) => {
                subset(a, b) && subset(x, y)
            }
            _ => false,
        }
    }

    /// Renames every visible letter through `f`.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Effect {
        let word = |w: &Word| w.letters().iter().map(|&a| f(a)).collect::<Word>();
        match self {
            Effect::Pow(v) => Effect::Pow(v.clone()),
            Effect::Lts(v) => Effect::lts(
                v.iter()
                    .map(|&(l, y)| match l {
                        Label::Visible(a) => (Label::Visible(f(a)), y),
                        Label::Silent => (l, y),
                    })
                    .collect(),
            ),
            Effect::FreeLts(v) => Effect::free_lts(v.iter().map(|(w, y)| (word(w), *y)).collect()),
            Effect::Ena { pairs, bare } => {
                Effect::ena(pairs.iter().map(|(w, y)| (word(w), *y)).collect(), bare.iter().map(word).collect())
            }
        }
    }

    /// Functor action `T(f)` on the effect.
    pub fn map_states(&self, f: impl Fn(usize) -> usize) -> Effect {
        match self {
            Effect::Pow(v) => Effect::pow(v.iter().map(|&y| f(y)).collect()),
            Effect::Lts(v) => Effect::lts(v.iter().map(|&(l, y)| (l, f(y))).collect()),
            Effect::FreeLts(v) => Effect::free_lts(v.iter().map(|(w, y)| (w.clone(), f(*y))).collect()),
            Effect::Ena { pairs, bare } => Effect::Ena {
                pairs: canon(pairs.iter().map(|(w, y)| (w.clone(), f(*y))).collect()),
                bare: bare.clone(),
            },
        }
    }
}
