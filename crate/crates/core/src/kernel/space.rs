use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite carrier set. States are addressed by dense index `0..len()`.
#[derive(Clone)]
pub struct StateSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl StateSpace {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate state name {name:?}")));
            }
        }
        Ok(Self { names, index })
    }

    /// States named `0`, `1`, ... `n-1`.
    pub fn numbered(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string())).expect("numbered names are distinct")
    }

    pub fn empty() -> Self {
        Self::numbered(0)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, state: usize) -> &str {
        &self.names[state]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    /// The coproduct `self + other`; names are prefixed with `left`/`right` tags.
    pub fn disjoint_union(&self, other: &StateSpace, left: &str, right: &str) -> Result<Self> {
        let names = self
            .names
            .iter()
            .map(|n| format!("{left}{n}"))
            .chain(other.names.iter().map(|n| format!("{right}{n}")));
        Self::new(names)
    }
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for StateSpace {}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

/// Index of a visible letter in its [`Alphabet`].
pub type Letter = u32;

/// Visible letters plus the name of the internal label (`tau` for
/// transition systems, `eps` for automata).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    visible: Vec<String>,
    silent: String,
}

impl Alphabet {
    pub fn new<I, S>(visible: I, silent: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let visible: Vec<String> = visible.into_iter().map(Into::into).collect();
        let silent = silent.into();
        if silent.is_empty() {
            return Err(Error::Invalid("silent label must be non-empty".into()));
        }
        for (i, letter) in visible.iter().enumerate() {
            if letter.is_empty() {
                return Err(Error::Invalid("letters must be non-empty".into()));
            }
            if *letter == silent {
                return Err(Error::Invalid(format!("silent label {silent:?} is also visible")));
            }
            if visible[..i].contains(letter) {
                return Err(Error::Invalid(format!("duplicate letter {letter:?}")));
            }
        }
        Ok(Self { visible, silent })
    }

    pub fn len(&self) -> usize {
        self.visible.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visible.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.visible.len() as Letter
    }

    pub fn visible(&self) -> &[String] {
        &self.visible
    }

    pub fn silent(&self) -> &str {
        &self.silent
    }

    pub fn letter_name(&self, letter: Letter) -> &str {
        &self.visible[letter as usize]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.visible.iter().position(|l| l == name).map(|i| i as Letter)
    }

    /// Resolves a label name: the silent name maps to [`Label::Silent`].
    pub fn label(&self, name: &str) -> Option<Label> {
        if name == self.silent {
            Some(Label::Silent)
        } else {
            self.letter(name).map(Label::Visible)
        }
    }

    pub fn label_name(&self, label: Label) -> &str {
        match label {
            Label::Silent => &self.silent,
            Label::Visible(a) => self.letter_name(a),
        }
    }

    /// Letters of `self` followed by the letters of `other` not already present.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut visible = self.visible.clone();
        for l in &other.visible {
            if !visible.contains(l) && *l != self.silent {
                visible.push(l.clone());
            }
        }
        Alphabet { visible, silent: self.silent.clone() }
    }

    /// Renders a word; letters are concatenated when all are single characters,
    /// otherwise joined by `.`. The empty word renders as `ε`.
    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let sep = if word.letters().iter().all(|&a| self.letter_name(a).chars().count() == 1) {
            ""
        } else {
            "."
        };
        word.letters()
            .iter()
            .map(|&a| self.letter_name(a))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// An element of Σ*. Ordered shortlex: by length, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(a: Letter) -> Self {
        Word(vec![a])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    /// Parses a word whose letters are single characters of `alphabet`,
    /// or letter names separated by `.`; `ε` and the empty string denote the empty word.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word> {
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let parts: Vec<String> = if text.contains('.') {
            text.split('.').map(str::to_string).collect()
        } else {
            text.chars().map(|c| c.to_string()).collect()
        };
        parts
            .iter()
            .map(|p| {
                alphabet
                    .letter(p)
                    .ok_or_else(|| Error::Invalid(format!("unknown letter {p:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// A transition label of Σ_τ.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    Silent,
    Visible(Letter),
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
