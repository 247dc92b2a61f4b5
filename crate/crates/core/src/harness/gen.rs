//! Seeded random systems.

use std::sync::Arc;

use super::rng::Prng;
use super::GenConfig;
use crate::equivalence::{bisimilarity, quotient};
use crate::kernel::{Alphabet, Effect, EnaSurface, Label, MonadKind, Morphism, StateSpace, System, Word};

/// Visible letters `a`, `b`, ... (then `l26`, `l27`, ...).
pub fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("l{i}") })
        .collect()
}

fn alphabet(cfg: &GenConfig, silent: &str) -> Arc<Alphabet> {
    Arc::new(Alphabet::new(letters(cfg.alphabet_size), silent).expect("generated letters are distinct"))
}

fn space(rng: &mut Prng, cfg: &GenConfig) -> Arc<StateSpace> {
    Arc::new(StateSpace::numbered(1 + rng.below(cfg.max_states)))
}

/// Each `(x, σ, y)` is present independently: visible letters with
/// `transition_density`, the silent label with `tau_density`.
fn lts_image(rng: &mut Prng, cfg: &GenConfig, n: usize, m: usize) -> Vec<Effect> {
    (0..n)
        .map(|_| {
            let mut pairs = Vec::new();
            for y in 0..m {
                if rng.chance(cfg.tau_density) {
                    pairs.push((Label::Silent, y));
                }
                for a in 0..cfg.alphabet_size {
                    if rng.chance(cfg.transition_density) {
                        pairs.push((Label::Visible(a as u32), y));
                    }
                }
            }
            Effect::lts(pairs)
        })
        .collect()
}

pub fn random_lts(rng: &mut Prng, cfg: &GenConfig) -> System {
    let space = space(rng, cfg);
    let image = lts_image(rng, cfg, space.len(), space.len());
    Morphism::system(MonadKind::Lts, alphabet(cfg, "tau"), space, image).expect("generated system is valid")
}

pub fn random_ena(rng: &mut Prng, cfg: &GenConfig) -> EnaSurface {
    let space = space(rng, cfg);
    let image = lts_image(rng, cfg, space.len(), space.len());
    let finals = (0..space.len()).map(|_| rng.chance(cfg.final_density)).collect();
    let labelled = Morphism::system(MonadKind::Lts, alphabet(cfg, "eps"), space, image).expect("generated system is valid");
    EnaSurface::new(labelled, finals).expect("one flag per state")
}

/// All words over `k` letters of length at most `max_len`, shortlex.
fn short_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |a| w.concat(&Word::letter(a as u32))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// A random endomorphism `X ⊸ X` of the given kind. Word-valued kinds use
/// words of length at most two; ε-NA bare words have length at most one.
pub fn random_endomorphism(rng: &mut Prng, cfg: &GenConfig, kind: MonadKind, space: &Arc<StateSpace>) -> System {
    let n = space.len();
    let words = short_words(cfg.alphabet_size, 2);
    let word_pairs = |rng: &mut Prng| {
        let mut pairs = Vec::new();
        for y in 0..n {
            for w in &words {
                let p = if w.is_empty() { cfg.tau_density } else { cfg.transition_density / w.len() as f64 };
                if rng.chance(p) {
                    pairs.push((w.clone(), y));
                }
            }
        }
        pairs
    };
    let image = (0..n)
        .map(|_| match kind {
            MonadKind::Pow => Effect::pow((0..n).filter(|_| rng.chance(cfg.transition_density)).collect()),
            MonadKind::Lts => lts_image(rng, cfg, 1, n).pop().expect("one effect"),
            MonadKind::FreeLts => Effect::free_lts(word_pairs(rng)),
            MonadKind::Ena => {
                let pairs = word_pairs(rng);
                let bare = words.iter().filter(|w| w.len() <= 1 && rng.chance(cfg.final_density)).cloned().collect();
                Effect::ena(pairs, bare)
            }
        })
        .collect();
    Morphism::system(kind, alphabet(cfg, "tau"), space.clone(), image).expect("generated system is valid")
}

/// `h: X → Y` with `h♯·α = β·h♯`.
#[derive(Clone, Debug)]
pub struct QuotientPair {
    pub alpha: System,
    pub map: Vec<usize>,
    pub beta: System,
}

/// `β` is the quotient of a random ε-NA `α` by its strong bisimilarity and
/// `h` the projection onto blocks.
pub fn random_quotient(rng: &mut Prng, cfg: &GenConfig) -> QuotientPair {
    let alpha = random_ena(rng, cfg).embed();
    let partition = bisimilarity(&alpha).expect("ε-NA systems refine");
    let beta = quotient(&alpha, &partition).expect("bisimilarity is stable");
    QuotientPair { map: partition.block_map().to_vec(), alpha, beta }
}

/// `α` unfolds a random ε-NA `β` into `copies` copies of each state; every
/// step of `β` is taken into a randomly chosen copy of its target, so the
/// projection `h(y, c) = y` is a homomorphism by construction.
pub fn random_unfolding(rng: &mut Prng, cfg: &GenConfig, copies: usize) -> QuotientPair {
    let beta = random_ena(rng, cfg).embed();
    let m = beta.len();
    let names = (0..m * copies).map(|i| format!("{}.{}", beta.source().name(i / copies), i % copies));
    let space = Arc::new(StateSpace::new(names).expect("copy names are distinct"));
    let image = (0..m * copies)
        .map(|i| {
            let e = beta.at(i / copies);
            let pairs = e.word_pairs().iter().map(|(w, y)| (w.clone(), y * copies + rng.below(copies))).collect();
            Effect::ena(pairs, e.bare().to_vec())
        })
        .collect();
    let alpha = Morphism::system(MonadKind::Ena, beta.alphabet().clone(), space, image).expect("unfolding is valid");
    QuotientPair { map: (0..m * copies).map(|i| i / copies).collect(), alpha, beta }
}

pub fn gen_lts(cfg: &GenConfig) -> System {
    random_lts(&mut Prng::new(cfg.seed), cfg)
}

pub fn gen_ena(cfg: &GenConfig) -> EnaSurface {
    random_ena(&mut Prng::new(cfg.seed), cfg)
}

/// Even seeds give a bisimilarity quotient, odd seeds a two-fold unfolding.
pub fn gen_quotient_pair(cfg: &GenConfig) -> QuotientPair {
    let mut rng = Prng::new(cfg.seed);
    if cfg.seed.is_multiple_of(2) {
        random_quotient(&mut rng, cfg)
    } else {
        random_unfolding(&mut rng, cfg, 2)
    }
}
