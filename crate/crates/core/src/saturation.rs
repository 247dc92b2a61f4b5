//! Saturators: the reflexive-transitive closure `α* = μx.(1 ∨ x·α)` on
//! finite monads, the symbolic word-path saturation on the free monads,
//! the transitive closure `μx.(α ∨ x·α)`, and the length-elimination map
//! from free-LTS effects back to LTS effects.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{
    default_fuel, embed_underline, lfp, Alphabet, Effect, Label, MonadKind, Morphism, StateSpace, System, Word,
};
use crate::reglang::{Graph, GraphBuilder, RegLang};

fn finite_fuel(alpha: &System) -> usize {
    default_fuel(alpha.kind(), alpha.len(), alpha.len(), alpha.alphabet().len())
}

fn expect_exact(fp: crate::kernel::Fixpoint) -> Result<System> {
    if fp.exact {
        Ok(fp.value)
    } else {
        Err(Error::Invalid(format!("iteration did not stabilise within {} steps", fp.iterations)))
    }
}

/// `α* = μx.(1 ∨ x·α)` for LTS (and plain powerset) systems.
///
/// `(σ, y) ∈ α*(x)` iff `x ⇒σ y` in the weak-arrow sense.
pub fn star(alpha: &System) -> Result<System> {
    alpha.expect_kind("star", &[MonadKind::Lts, MonadKind::Pow])?;
    alpha.expect_system()?;
    let one = Morphism::identity(alpha.kind(), alpha.alphabet().clone(), alpha.source().clone());
    let bottom = Morphism::bottom(alpha.kind(), alpha.alphabet().clone(), alpha.source().clone(), alpha.source().clone());
    let fp = lfp(bottom, finite_fuel(alpha), |x| one.join(&Morphism::compose(x, alpha)?))?;
    expect_exact(fp)
}

/// `μx.(α ∨ x·α)`: like [`star`] without the reflexive unit.
pub fn transitive_closure(alpha: &System) -> Result<System> {
    alpha.expect_kind("transitive_closure", &[MonadKind::Lts, MonadKind::Pow])?;
    alpha.expect_system()?;
    let bottom = Morphism::bottom(alpha.kind(), alpha.alphabet().clone(), alpha.source().clone(), alpha.source().clone());
    let fp = lfp(bottom, finite_fuel(alpha), |x| alpha.join(&Morphism::compose(x, alpha)?))?;
    expect_exact(fp)
}

/// Outcome of one implication `premise ⟹ conclusion`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Implication {
    pub premise: bool,
    pub conclusion: bool,
}

impl Implication {
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion
    }
}

/// A plain function `f: X → Y` together with a system `β` on `Y`, used to
/// probe the homomorphism axiom of a saturator.
#[derive(Clone, Debug)]
pub struct Witness {
    pub map: Vec<usize>,
    pub target: System,
}

#[derive(Clone, Debug)]
pub struct WitnessOutcome {
    pub below: Implication,
    pub above: Implication,
}

/// Which saturator axioms hold for a given `α`.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    /// `1 ≤ α*`
    pub unit_below: bool,
    /// `α ≤ α*`
    pub extensive: bool,
    /// `α*·α* ≤ α*`
    pub transitive: bool,
    /// Per candidate: `None` if it is not a closed upper bound of `α`,
    /// otherwise whether `α* ≤ candidate`.
    pub minimal: Vec<Option<bool>>,
    pub homomorphism: Vec<WitnessOutcome>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.unit_below
            && self.extensive
            && self.transitive
            && self.minimal.iter().all(|m| m.unwrap_or(true))
            && self.homomorphism.iter().all(|w| w.below.holds() && w.above.holds())
    }
}

fn is_closed_above(alpha: &System, beta: &System) -> Result<bool> {
    let one = Morphism::identity(beta.kind(), beta.alphabet().clone(), beta.source().clone());
    Ok(one.leq(beta)? && alpha.leq(beta)? && Morphism::compose(beta, beta)?.leq(beta)?)
}

/// Checks the ordered-saturation axioms for `star(α)`: unit, extensiveness and
/// transitivity always; minimality against each candidate; and the
/// homomorphism-transfer axiom for each supplied `(f, β)`.
pub fn star_axioms_check(alpha: &System, candidates: &[System], witnesses: &[Witness]) -> Result<AxiomReport> {
    let sat = star(alpha)?;
    let one = Morphism::identity(alpha.kind(), alpha.alphabet().clone(), alpha.source().clone());
    let unit_below = one.leq(&sat)?;
    let extensive = alpha.leq(&sat)?;
    let transitive = Morphism::compose(&sat, &sat)?.leq(&sat)?;
    let minimal = candidates
        .iter()
        .map(|beta| Ok(if is_closed_above(alpha, beta)? { Some(sat.leq(beta)?) } else { None }))
        .collect::<Result<Vec<_>>>()?;
    let mut homomorphism = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        let f = Morphism::lift(alpha.kind(), alpha.alphabet().clone(), alpha.source().clone(), w.target.source().clone(), &w.map)?;
        let lhs = Morphism::compose(&f, alpha)?;
        let rhs = Morphism::compose(&w.target, &f)?;
        let beta_sat = star(&w.target)?;
        let lhs_sat = Morphism::compose(&f, &sat)?;
        let rhs_sat = Morphism::compose(&beta_sat, &f)?;
        homomorphism.push(WitnessOutcome {
            below: Implication { premise: lhs.leq(&rhs)?, conclusion: lhs_sat.leq(&rhs_sat)? },
            above: Implication { premise: rhs.leq(&lhs)?, conclusion: rhs_sat.leq(&lhs_sat)? },
        });
    }
    Ok(AxiomReport { unit_below, extensive, transitive, minimal, homomorphism })
}

/// The saturation of a free-LTS or ε-NA system, held symbolically:
/// `lang[x][y] = { s : x ⇒ˢ y }` and, for ε-NA systems, `bare[x]` is the set
/// of words leading from `x` into an accepted bare word.
#[derive(Clone, Debug)]
pub struct WeakMatrix {
    space: Arc<StateSpace>,
    alphabet: Arc<Alphabet>,
    graph: Arc<Graph>,
    sink: Option<usize>,
}

impl WeakMatrix {
    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn has_bare(&self) -> bool {
        self.sink.is_some()
    }

    pub fn lang(&self, x: usize, y: usize) -> RegLang {
        RegLang::from_graph(self.alphabet.clone(), self.graph.clone(), x, vec![y])
    }

    /// `⋃_{y ∈ block} lang[x][y]`
    pub fn block_lang(&self, x: usize, block: &[usize]) -> RegLang {
        RegLang::from_graph(self.alphabet.clone(), self.graph.clone(), x, block.to_vec())
    }

    /// The accepted-word component; `None` for free-LTS saturations.
    pub fn bare(&self, x: usize) -> Option<RegLang> {
        self.sink.map(|s| RegLang::from_graph(self.alphabet.clone(), self.graph.clone(), x, vec![s]))
    }

    /// Keeps only words of length ≤ 1 and reads them as LTS labels (ε ↦ τ).
    pub fn short_projection(&self) -> System {
        let image = (0..self.len())
            .map(|x| {
                let mut pairs = Vec::new();
                for y in 0..self.len() {
                    for w in self.lang(x, y).enumerate_upto(1) {
                        let label = match w.letters() {
                            [] => Label::Silent,
                            [a] => Label::Visible(*a),
                            _ => unreachable!(),
                        };
                        pairs.push((label, y));
                    }
                }
                Effect::lts(pairs)
            })
            .collect();
        Morphism::system(MonadKind::Lts, self.alphabet.clone(), self.space.clone(), image)
            .expect("projection stays in the carrier")
    }

    /// Reflexivity, transitivity and bare-closure of the matrix, decided by
    /// language equivalence.
    pub fn check_invariants(&self) -> Result<bool> {
        let n = self.len();
        let eps = RegLang::epsilon(self.alphabet.clone());
        for x in 0..n {
            if !eps.is_subset(&self.lang(x, x))? {
                return Ok(false);
            }
            for y in 0..n {
                let xy = self.lang(x, y);
                for z in 0..n {
                    if !xy.concat(&self.lang(y, z))?.is_subset(&self.lang(x, z))? {
                        return Ok(false);
                    }
                }
                if let (Some(bx), Some(by)) = (self.bare(x), self.bare(y)) {
                    if !xy.concat(&by)?.is_subset(&bx)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Symbolic saturation of a free-LTS or ε-NA system. Every word edge is
/// spelled out letter by letter; the path languages of the resulting graph
/// are the saturated images.
pub fn saturate_free(alpha: &System) -> Result<WeakMatrix> {
    alpha.expect_kind("saturate_free", &[MonadKind::FreeLts, MonadKind::Ena])?;
    alpha.expect_system()?;
    let n = alpha.len();
    let mut b = GraphBuilder::with_nodes(n);
    let sink = (alpha.kind() == MonadKind::Ena).then(|| b.node());
    for (x, e) in alpha.image().iter().enumerate() {
        for (w, y) in e.word_pairs() {
            b.word_path(x, w, *y);
        }
        if let Some(s) = sink {
            for w in e.bare() {
                b.word_path(x, w, s);
            }
        }
    }
    Ok(WeakMatrix { space: alpha.source().clone(), alphabet: alpha.alphabet().clone(), graph: b.finish(), sink })
}

fn elim(f: &Morphism, strict: bool) -> Result<Morphism> {
    f.expect_kind("elim_to_lts", &[MonadKind::FreeLts])?;
    let mut image = Vec::with_capacity(f.len());
    for e in f.image() {
        let mut pairs = Vec::new();
        for (w, y) in e.word_pairs() {
            match w.letters() {
                [] => pairs.push((Label::Silent, *y)),
                [a] => pairs.push((Label::Visible(*a), *y)),
                _ if strict => return Err(Error::LongWord { len: w.len() }),
                _ => {}
            }
        }
        image.push(Effect::lts(pairs));
    }
    Morphism::new(MonadKind::Lts, f.alphabet().clone(), f.source().clone(), f.target().clone(), image)
}

/// The monad morphism `h`: `(ε, x) ↦ (τ, x)`, `(a, x) ↦ (a, x)`, longer words ↦ ∅.
pub fn elim_to_lts(f: &Morphism) -> Result<Morphism> {
    elim(f, false)
}

/// [`elim_to_lts`] that reports words of length ≥ 2 instead of dropping them.
pub fn elim_to_lts_strict(f: &Morphism) -> Result<Morphism> {
    elim(f, true)
}

/// `h · α̲^÷ = α^★`: the short projection of the symbolic saturation of the
/// embedded LTS agrees with the finite star.
pub fn check_h_compat(alpha: &System) -> Result<bool> {
    let sat = saturate_free(&embed_underline(alpha)?)?;
    Ok(sat.short_projection() == star(alpha)?)
}

/// One-step comparison of the two compositions: embedding `α·α` computed in
/// the LTS monad lies below `α̲·α̲` computed in the free-LTS monad.
pub fn check_embedding_inequality(alpha: &System) -> Result<bool> {
    let lhs = embed_underline(&Morphism::compose(alpha, alpha)?)?;
    let under = embed_underline(alpha)?;
    lhs.leq(&Morphism::compose(&under, &under)?)
}

/// Finite words of `lang[x][y]` up to `max_len`, for summaries.
pub fn sample_words(lang: &RegLang, max_len: usize, limit: usize) -> Vec<Word> {
    let mut words = lang.enumerate_upto(max_len);
    words.truncate(limit);
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(silent: &str) -> Arc<Alphabet> {
        Arc::new(Alphabet::new(["a", "b"], silent).unwrap())
    }

    fn space(names: &[&str]) -> Arc<StateSpace> {
        Arc::new(StateSpace::new(names.iter().copied()).unwrap())
    }

    fn w(s: &str) -> Word {
        Word::parse(s, &sig("eps")).unwrap()
    }

    /// Weak arrows computed straight from the relational definition:
    /// `⇒τ = (→τ)*`, `⇒a = (→τ)* ∘ →a ∘ (→τ)*`.
    fn weak_arrows(alpha: &System) -> Vec<Vec<(Label, usize)>> {
        let n = alpha.len();
        let mut tau = vec![vec![false; n]; n];
        for x in 0..n {
            tau[x][x] = true;
            if let Effect::Lts(v) = alpha.at(x) {
                for &(l, y) in v {
                    if l == Label::Silent {
                        tau[x][y] = true;
                    }
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if tau[i][k] && tau[k][j] {
                        tau[i][j] = true;
                    }
                }
            }
        }
        let mut out = vec![Vec::new(); n];
        for x in 0..n {
            for y in 0..n {
                if tau[x][y] {
                    out[x].push((Label::Silent, y));
                }
            }
            for x1 in (0..n).filter(|&x1| tau[x][x1]) {
                if let Effect::Lts(v) = alpha.at(x1) {
                    for &(l, y1) in v.iter().filter(|(l, _)| *l != Label::Silent) {
                        for y in (0..n).filter(|&y| tau[y1][y]) {
                            out[x].push((l, y));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn star_matches_weak_arrows() {
        let x = space(&["x", "y", "z"]);
        let alpha = Morphism::lts_from_names(sig("tau"), x, &[("x", "tau", "y"), ("y", "a", "z")]).unwrap();
        let s = star(&alpha).unwrap();
        let a = Label::Visible(0);
        assert_eq!(s.at(0), &Effect::lts(vec![(Label::Silent, 0), (Label::Silent, 1), (a, 2)]));
        assert_eq!(s.at(1), &Effect::lts(vec![(Label::Silent, 1), (a, 2)]));
        assert_eq!(s.at(2), &Effect::lts(vec![(Label::Silent, 2)]));
        let oracle = weak_arrows(&alpha);
        for x in 0..3 {
            assert_eq!(s.at(x), &Effect::lts(oracle[x].clone()));
        }
    }

    #[test]
    fn star_of_bottom_is_identity_and_star_is_idempotent() {
        let x = space(&["x", "y"]);
        let bot = Morphism::bottom(MonadKind::Lts, sig("tau"), x.clone(), x.clone());
        assert_eq!(star(&bot).unwrap(), Morphism::identity(MonadKind::Lts, sig("tau"), x.clone()));
        let alpha = Morphism::lts_from_names(sig("tau"), x, &[("x", "a", "y"), ("y", "tau", "x")]).unwrap();
        let s = star(&alpha).unwrap();
        assert_eq!(star(&s).unwrap(), s);
    }

    #[test]
    fn star_rejects_free_monads() {
        let x = space(&["x"]);
        let f = Morphism::identity(MonadKind::FreeLts, sig("tau"), x);
        assert!(matches!(star(&f), Err(Error::WrongMonad { .. })));
    }

    #[test]
    fn transitive_closure_examples() {
        let x = space(&["x", "y", "z"]);
        let one = Morphism::lts_from_names(sig("tau"), x.clone(), &[("x", "tau", "y")]).unwrap();
        let c = transitive_closure(&one).unwrap();
        assert_eq!(c.at(0), &Effect::lts(vec![(Label::Silent, 1)]));
        let two = Morphism::lts_from_names(sig("tau"), x.clone(), &[("x", "tau", "y"), ("y", "a", "z")]).unwrap();
        let c = transitive_closure(&two).unwrap();
        assert!(Effect::lts(vec![(Label::Silent, 1), (Label::Visible(0), 2)]).is_subset(c.at(0)));
        let bot = Morphism::bottom(MonadKind::Lts, sig("tau"), x.clone(), x);
        assert_eq!(transitive_closure(&bot).unwrap(), bot);
    }

    #[test]
    fn axioms_hold_and_minimality_against_closed_candidate() {
        let x = space(&["x", "y"]);
        let alpha = Morphism::lts_from_names(sig("tau"), x.clone(), &[("x", "tau", "y"), ("y", "a", "x")]).unwrap();
        let s = star(&alpha).unwrap();
        // A closed candidate above α: everything.
        let all = Morphism::system(MonadKind::Lts, sig("tau"), x.clone(), vec![
            Effect::lts((0..2).flat_map(|y| [(Label::Silent, y), (Label::Visible(0), y), (Label::Visible(1), y)]).collect()),
            Effect::lts((0..2).flat_map(|y| [(Label::Silent, y), (Label::Visible(0), y), (Label::Visible(1), y)]).collect()),
        ]).unwrap();
        let witness = Witness { map: vec![0, 0], target: Morphism::lts_from_names(sig("tau"), space(&["u"]), &[("u", "a", "u")]).unwrap() };
        let report = star_axioms_check(&alpha, &[s.clone(), all, alpha.clone()], &[witness]).unwrap();
        assert!(report.holds());
        assert_eq!(report.minimal, vec![Some(true), Some(true), None]);
    }

    #[test]
    fn saturate_free_single_word_edge() {
        let x = space(&["x", "y"]);
        let f = Morphism::system(MonadKind::FreeLts, sig("eps"), x, vec![Effect::free_lts(vec![(w("ab"), 1)]), Effect::free_lts(vec![])]).unwrap();
        let m = saturate_free(&f).unwrap();
        assert_eq!(m.lang(0, 1).enumerate_upto(5), vec![w("ab")]);
        assert_eq!(m.lang(0, 0).enumerate_upto(5), vec![Word::empty()]);
        assert!(m.bare(0).is_none());
        assert!(m.check_invariants().unwrap());
    }

    #[test]
    fn saturate_free_epsilon_loop() {
        let x = space(&["x"]);
        let f = Morphism::system(MonadKind::Ena, sig("eps"), x, vec![Effect::ena(vec![(Word::empty(), 0)], vec![])]).unwrap();
        let m = saturate_free(&f).unwrap();
        assert_eq!(m.lang(0, 0).enumerate_upto(4), vec![Word::empty()]);
        assert!(m.bare(0).unwrap().is_empty());
    }

    #[test]
    fn elimination_map_cases() {
        let x = space(&["x"]);
        let f = Morphism::system(MonadKind::FreeLts, sig("tau"), x, vec![Effect::free_lts(vec![(Word::empty(), 0), (w("a"), 0), (w("ab"), 0)])]).unwrap();
        let h = elim_to_lts(&f).unwrap();
        assert_eq!(h.at(0), &Effect::lts(vec![(Label::Silent, 0), (Label::Visible(0), 0)]));
        assert_eq!(elim_to_lts_strict(&f).unwrap_err(), Error::LongWord { len: 2 });
    }

    #[test]
    fn elimination_inverts_embedding() {
        let x = space(&["x", "y"]);
        let alpha = Morphism::lts_from_names(sig("tau"), x, &[("x", "a", "y"), ("y", "tau", "x"), ("y", "b", "y")]).unwrap();
        assert_eq!(elim_to_lts(&embed_underline(&alpha).unwrap()).unwrap(), alpha);
        assert!(check_h_compat(&alpha).unwrap());
        assert!(check_embedding_inequality(&alpha).unwrap());
    }
}
