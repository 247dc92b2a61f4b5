use std::sync::Arc;

use super::effect::{Effect, MonadKind};
use super::space::{same_alphabet, Alphabet, Label, Word};
use super::StateSpace;
use crate::error::{Error, Result};

/// A Kleisli arrow `X ⊸ Y`, i.e. a map `X → T Y` for one of the supported monads.
///
/// A morphism whose source and target coincide is a coalgebra; see [`System`].
#[derive(Clone, Debug)]
pub struct Morphism {
    kind: MonadKind,
    alphabet: Arc<Alphabet>,
    source: Arc<StateSpace>,
    target: Arc<StateSpace>,
    image: Vec<Effect>,
}

/// A coalgebra `X → T X`.
pub type System = Morphism;

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && same_alphabet(&self.alphabet, &other.alphabet)
            && self.source == other.source
            && self.target == other.target
            && self.image == other.image
    }
}

impl Eq for Morphism {}

impl Morphism {
    pub fn new(
        kind: MonadKind,
        alphabet: Arc<Alphabet>,
        source: Arc<StateSpace>,
        target: Arc<StateSpace>,
        image: Vec<Effect>,
    ) -> Result<Self> {
        if image.len() != source.len() {
            return Err(Error::SpaceMismatch(format!(
                "{} effects for {} source states",
                image.len(),
                source.len()
            )));
        }
        let sigma = alphabet.len() as u32;
        let n = target.len();
        for (x, e) in image.iter().enumerate() {
            if e.kind() != kind {
                return Err(Error::MonadMismatch { expected: kind, found: e.kind() });
            }
            if let Some(y) = e.successors().find(|&y| y >= n) {
                return Err(Error::SpaceMismatch(format!(
                    "state {x} has successor {y} outside a target of size {n}"
                )));
            }
            let letters_ok = match e {
                Effect::Lts(v) => v.iter().all(|(l, _)| match l {
                    Label::Silent => true,
                    Label::Visible(a) => *a < sigma,
                }),
                Effect::FreeLts(v) => v.iter().all(|(w, _)| w.letters().iter().all(|&a| a < sigma)),
                Effect::Ena { pairs, bare } => pairs
                    .iter()
                    .map(|(w, _)| w)
                    .chain(bare)
                    .all(|w| w.letters().iter().all(|&a| a < sigma)),
                Effect::Pow(_) => true,
            };
            if !letters_ok {
                return Err(Error::AlphabetMismatch(format!("state {x} uses an undeclared letter")));
            }
        }
        Ok(Self { kind, alphabet, source, target, image })
    }

    /// Builds an endomorphism from raw parts; effects are canonicalized.
    pub fn system(kind: MonadKind, alphabet: Arc<Alphabet>, space: Arc<StateSpace>, image: Vec<Effect>) -> Result<Self> {
        Self::new(kind, alphabet, space.clone(), space, image)
    }

    /// Builds an LTS from `(from, label, to)` name triples; `label` may be the silent name.
    pub fn lts_from_names(alphabet: Arc<Alphabet>, space: Arc<StateSpace>, edges: &[(&str, &str, &str)]) -> Result<Self> {
        let mut image = vec![Vec::new(); space.len()];
        for &(from, label, to) in edges {
            let l = alphabet
                .label(label)
                .ok_or_else(|| Error::AlphabetMismatch(format!("unknown label {label:?}")))?;
            image[space.lookup(from)?].push((l, space.lookup(to)?));
        }
        Self::system(MonadKind::Lts, alphabet, space, image.into_iter().map(Effect::lts).collect())
    }

    pub fn kind(&self) -> MonadKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn source(&self) -> &Arc<StateSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<StateSpace> {
        &self.target
    }

    pub fn image(&self) -> &[Effect] {
        &self.image
    }

    pub fn at(&self, x: usize) -> &Effect {
        &self.image[x]
    }

    pub fn is_system(&self) -> bool {
        self.source == self.target
    }

    /// Number of states of the carrier (the source).
    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    pub(crate) fn expect_kind(&self, op: &'static str, allowed: &[MonadKind]) -> Result<()> {
        if allowed.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::WrongMonad { op, found: self.kind })
        }
    }

    pub(crate) fn expect_system(&self) -> Result<()> {
        if self.is_system() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch("expected a coalgebra (source = target)".into()))
        }
    }

    /// The unit `1_X`.
    pub fn identity(kind: MonadKind, alphabet: Arc<Alphabet>, space: Arc<StateSpace>) -> Self {
        let image = (0..space.len())
            .map(|x| match kind {
                MonadKind::Pow => Effect::Pow(vec![x]),
                MonadKind::Lts => Effect::Lts(vec![(Label::Silent, x)]),
                MonadKind::FreeLts => Effect::FreeLts(vec![(Word::empty(), x)]),
                MonadKind::Ena => Effect::Ena { pairs: vec![(Word::empty(), x)], bare: Vec::new() },
            })
            .collect();
        Self { kind, alphabet, source: space.clone(), target: space, image }
    }

    /// The least morphism `X ⊸ Y`: every state maps to the empty effect.
    pub fn bottom(kind: MonadKind, alphabet: Arc<Alphabet>, source: Arc<StateSpace>, target: Arc<StateSpace>) -> Self {
        let image = vec![Effect::empty(kind); source.len()];
        Self { kind, alphabet, source, target, image }
    }

    /// The lifting `h♯ = η ∘ h` of a plain function given as a successor table.
    pub fn lift(
        kind: MonadKind,
        alphabet: Arc<Alphabet>,
        source: Arc<StateSpace>,
        target: Arc<StateSpace>,
        map: &[usize],
    ) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::SpaceMismatch("function table does not fit source/target".into()));
        }
        let unit = Self::identity(kind, alphabet.clone(), target.clone());
        let image = map.iter().map(|&y| unit.image[y].clone()).collect();
        Ok(Self { kind, alphabet, source, target, image })
    }

    /// Same arrow with the effect at each state replaced by `f(x, effect)`.
    pub fn map_image(&self, f: impl Fn(usize, &Effect) -> Effect) -> Result<Self> {
        let image = self.image.iter().enumerate().map(|(x, e)| f(x, e)).collect();
        Self::new(self.kind, self.alphabet.clone(), self.source.clone(), self.target.clone(), image)
    }

    fn compatible(&self, other: &Morphism) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::MonadMismatch { expected: self.kind, found: other.kind });
        }
        if !same_alphabet(&self.alphabet, &other.alphabet) {
            return Err(Error::AlphabetMismatch("morphisms use different alphabets".into()));
        }
        Ok(())
    }

    fn parallel(&self, other: &Morphism) -> Result<()> {
        self.compatible(other)?;
        if self.source != other.source || self.target != other.target {
            return Err(Error::SpaceMismatch("morphisms are not parallel".into()));
        }
        Ok(())
    }

    /// Kleisli composition `g · f` (first `f`, then `g`).
    pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
        f.compatible(g)?;
        if f.target != g.source {
            return Err(Error::SpaceMismatch("target of f differs from source of g".into()));
        }
        let image = f.image.iter().map(|e| compose_effect(g, e)).collect();
        Ok(Morphism {
            kind: f.kind,
            alphabet: f.alphabet.clone(),
            source: f.source.clone(),
            target: g.target.clone(),
            image,
        })
    }

    /// `g · self`.
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        Morphism::compose(g, self)
    }

    /// The same arrow over `target`, matching letters by name.
    pub fn relabel(&self, target: Arc<Alphabet>) -> Result<Morphism> {
        let mut table = Vec::with_capacity(self.alphabet.len());
        for name in self.alphabet.visible() {
            let letter = target
                .letter(name)
                .ok_or_else(|| Error::AlphabetMismatch(format!("letter {name:?} is missing from the target alphabet")))?;
            table.push(letter);
        }
        let image = self.image.iter().map(|e| e.map_letters(|a| table[a as usize])).collect();
        Ok(Morphism { alphabet: target, image, ..self.clone() })
    }

    /// Pointwise union.
    pub fn join(&self, other: &Morphism) -> Result<Morphism> {
        self.parallel(other)?;
        let image = self.image.iter().zip(&other.image).map(|(a, b)| a.union(b)).collect();
        Ok(Morphism { image, ..self.clone() })
    }

    /// Pointwise inclusion `self ≤ other`.
    pub fn leq(&self, other: &Morphism) -> Result<bool> {
        self.parallel(other)?;
        Ok(self.image.iter().zip(&other.image).all(|(a, b)| a.is_subset(b)))
    }

    /// Total number of effect elements; a cheap size measure.
    pub fn edge_count(&self) -> usize {
        self.image.iter().map(Effect::size).sum()
    }
}

/// `(g · f)(x)` given `f(x)`.
fn compose_effect(g: &Morphism, fx: &Effect) -> Effect {
    match fx {
        Effect::Pow(ys) => Effect::pow(ys.iter().flat_map(|&y| g.image[y].successors()).collect()),
        Effect::Lts(pairs) => {
            let mut out = Vec::new();
            for &(sigma, y) in pairs {
                let Effect::Lts(next) = &g.image[y] else { unreachable!() };
                for &(sigma2, z) in next {
                    match (sigma, sigma2) {
                        (Label::Silent, _) => out.push((sigma2, z)),
                        (_, Label::Silent) => out.push((sigma, z)),
                        _ => {}
                    }
                }
            }
            Effect::lts(out)
        }
        Effect::FreeLts(pairs) => {
            let mut out = Vec::new();
            for (s1, y) in pairs {
                for (s2, z) in g.image[*y].word_pairs() {
                    out.push((s1.concat(s2), *z));
                }
            }
            Effect::free_lts(out)
        }
        Effect::Ena { pairs, bare } => {
            let mut out = Vec::new();
            let mut words = bare.clone();
            for (s1, y) in pairs {
                let gy = &g.image[*y];
                for (s2, z) in gy.word_pairs() {
                    out.push((s1.concat(s2), *z));
                }
                words.extend(gy.bare().iter().map(|s2| s1.concat(s2)));
            }
            Effect::ena(out, words)
        }
    }
}
