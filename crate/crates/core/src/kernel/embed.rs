use std::sync::Arc;

use super::effect::{Effect, MonadKind};
use super::morphism::{Morphism, System};
use super::space::{Label, Word};
use super::{Alphabet, StateSpace};
use crate::error::{Error, Result};

fn label_word(label: Label) -> Word {
    match label {
        Label::Silent => Word::empty(),
        Label::Visible(a) => Word::letter(a),
    }
}

/// `α ↦ α̲`: an LTS viewed as a free-LTS coalgebra. Visible labels become
/// one-letter words, silent steps the empty word.
pub fn embed_underline(lts: &System) -> Result<System> {
    lts.expect_kind("embed_underline", &[MonadKind::Lts])?;
    lts.expect_system()?;
    let image = lts
        .image()
        .iter()
        .map(|e| match e {
            Effect::Lts(pairs) => Effect::free_lts(pairs.iter().map(|&(l, y)| (label_word(l), y)).collect()),
            _ => unreachable!(),
        })
        .collect();
    Morphism::system(MonadKind::FreeLts, lts.alphabet().clone(), lts.source().clone(), image)
}

/// An ε-NA `X → P(Σ_ε × X + 1)`: labelled steps (the silent label plays ε)
/// plus a final marker per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnaSurface {
    labelled: System,
    finals: Vec<bool>,
}

impl EnaSurface {
    pub fn new(labelled: System, finals: Vec<bool>) -> Result<Self> {
        labelled.expect_kind("EnaSurface::new", &[MonadKind::Lts])?;
        labelled.expect_system()?;
        if finals.len() != labelled.len() {
            return Err(Error::SpaceMismatch("one final flag per state required".into()));
        }
        Ok(Self { labelled, finals })
    }

    pub fn from_names(
        alphabet: Arc<Alphabet>,
        space: Arc<StateSpace>,
        edges: &[(&str, &str, &str)],
        finals: &[&str],
    ) -> Result<Self> {
        let labelled = Morphism::lts_from_names(alphabet, space.clone(), edges)?;
        let mut flags = vec![false; space.len()];
        for name in finals {
            flags[space.lookup(name)?] = true;
        }
        Self::new(labelled, flags)
    }

    /// The labelled part as an LTS.
    pub fn labelled(&self) -> &System {
        &self.labelled
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn is_final(&self, x: usize) -> bool {
        self.finals[x]
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        self.labelled.source()
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.labelled.alphabet()
    }

    pub fn len(&self) -> usize {
        self.labelled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labelled.is_empty()
    }

    /// `α̲` in the ε-NA monad; the final marker becomes the bare word ε.
    pub fn embed(&self) -> System {
        let image = self
            .labelled
            .image()
            .iter()
            .zip(&self.finals)
            .map(|(e, &fin)| {
                let pairs = match e {
                    Effect::Lts(pairs) => pairs.iter().map(|&(l, y)| (label_word(l), y)).collect(),
                    _ => unreachable!(),
                };
                Effect::ena(pairs, if fin { vec![Word::empty()] } else { Vec::new() })
            })
            .collect();
        Morphism::system(MonadKind::Ena, self.alphabet().clone(), self.space().clone(), image)
            .expect("embedding preserves validity")
    }

    /// Inverse of [`EnaSurface::embed`]: accepts `Ena` systems whose words have
    /// length at most one and whose bare words are all ε.
    pub fn from_embedded(system: &System) -> Result<Self> {
        system.expect_kind("EnaSurface::from_embedded", &[MonadKind::Ena])?;
        system.expect_system()?;
        let mut image = Vec::with_capacity(system.len());
        let mut finals = Vec::with_capacity(system.len());
        for (x, e) in system.image().iter().enumerate() {
            let mut pairs = Vec::new();
            for (w, y) in e.word_pairs() {
                let label = match w.letters() {
                    [] => Label::Silent,
                    [a] => Label::Visible(*a),
                    _ => {
                        return Err(Error::Invalid(format!(
                            "state {} has a word of length {}; not a surface automaton",
                            system.source().name(x),
                            w.len()
                        )))
                    }
                };
                pairs.push((label, *y));
            }
            if e.bare().iter().any(|w| !w.is_empty()) {
                return Err(Error::Invalid(format!(
                    "state {} accepts a non-empty bare word; not a surface automaton",
                    system.source().name(x)
                )));
            }
            finals.push(!e.bare().is_empty());
            image.push(Effect::lts(pairs));
        }
        let labelled = Morphism::system(MonadKind::Lts, system.alphabet().clone(), system.source().clone(), image)?;
        Self::new(labelled, finals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Arc<Alphabet> {
        Arc::new(Alphabet::new(["a", "b"], "tau").unwrap())
    }

    #[test]
    fn embed_lts_maps_silent_to_empty_word() {
        let x = Arc::new(StateSpace::new(["x", "y", "z"]).unwrap());
        let alpha = Morphism::lts_from_names(sig(), x, &[("x", "tau", "y"), ("x", "a", "z")]).unwrap();
        let e = embed_underline(&alpha).unwrap();
        assert_eq!(e.at(0), &Effect::free_lts(vec![(Word::empty(), 1), (Word::letter(0), 2)]));
        assert!(e.at(1).is_empty());
    }

    #[test]
    fn final_marker_becomes_bare_epsilon() {
        let x = Arc::new(StateSpace::new(["x"]).unwrap());
        let ena = EnaSurface::from_names(sig(), x, &[], &["x"]).unwrap();
        let e = ena.embed();
        assert_eq!(e.at(0), &Effect::ena(vec![], vec![Word::empty()]));
        assert_eq!(EnaSurface::from_embedded(&e).unwrap(), ena);
    }

    #[test]
    fn general_ena_is_not_a_surface() {
        let x = Arc::new(StateSpace::new(["x"]).unwrap());
        let long = Morphism::system(MonadKind::Ena, sig(), x.clone(), vec![Effect::ena(vec![(Word::from(vec![0, 1]), 0)], vec![])]).unwrap();
        assert!(EnaSurface::from_embedded(&long).is_err());
        let bare = Morphism::system(MonadKind::Ena, sig(), x, vec![Effect::ena(vec![], vec![Word::letter(0)])]).unwrap();
        assert!(EnaSurface::from_embedded(&bare).is_err());
    }

    #[test]
    fn embed_rejects_non_lts() {
        let x = Arc::new(StateSpace::new(["x"]).unwrap());
        let pow = Morphism::identity(MonadKind::Pow, sig(), x);
        assert!(matches!(embed_underline(&pow), Err(Error::WrongMonad { .. })));
    }
}
