//! Weak trace semantics of ε-NA systems: Kleene iterates of `tr ↦ tr·α`,
//! exact regular traces, uniformity, and the Conway dagger.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{Alphabet, Effect, MonadKind, Morphism, StateSpace, System, Word};
use crate::reglang::RegLang;
use crate::saturation::saturate_free;

/// Per-state trace languages, either a truncated iterate or exact.
#[derive(Clone, Debug)]
pub enum TraceMap {
    /// The `k`-th Kleene iterate; words per state, shortlex sorted.
    Bounded { space: Arc<StateSpace>, alphabet: Arc<Alphabet>, k: usize, words: Vec<Vec<Word>> },
    Exact { space: Arc<StateSpace>, alphabet: Arc<Alphabet>, langs: Vec<RegLang> },
}

impl TraceMap {
    /// An exact-mode map from arbitrary languages, e.g. a candidate fixed point.
    pub fn from_languages(space: Arc<StateSpace>, langs: Vec<RegLang>) -> Result<Self> {
        if langs.len() != space.len() {
            return Err(Error::SpaceMismatch("one language per state required".into()));
        }
        let alphabet = match langs.first() {
            Some(l) => l.alphabet().clone(),
            None => Arc::new(Alphabet::new(Vec::<String>::new(), "tau")?),
        };
        Ok(TraceMap::Exact { space, alphabet, langs })
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        match self {
            TraceMap::Bounded { space, .. } | TraceMap::Exact { space, .. } => space,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        match self {
            TraceMap::Bounded { alphabet, .. } | TraceMap::Exact { alphabet, .. } => alphabet,
        }
    }

    pub fn len(&self) -> usize {
        self.space().len()
    }

    pub fn is_empty(&self) -> bool {
        self.space().is_empty()
    }

    /// The words at `x` when bounded.
    pub fn words(&self, x: usize) -> Option<&[Word]> {
        match self {
            TraceMap::Bounded { words, .. } => Some(&words[x]),
            TraceMap::Exact { .. } => None,
        }
    }

    /// The trace at `x` as a language, in either mode.
    pub fn lang(&self, x: usize) -> RegLang {
        match self {
            TraceMap::Bounded { alphabet, words, .. } => RegLang::from_words(alphabet.clone(), &words[x]),
            TraceMap::Exact { langs, .. } => langs[x].clone(),
        }
    }

    /// Pointwise inclusion.
    pub fn leq(&self, other: &TraceMap) -> Result<bool> {
        if self.space() != other.space() {
            return Err(Error::SpaceMismatch("trace maps over different spaces".into()));
        }
        for x in 0..self.len() {
            if !self.lang(x).is_subset(&other.lang(x))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pointwise language equality.
    pub fn equivalent(&self, other: &TraceMap) -> Result<bool> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    /// Bounded map as `(state, rendered words)` rows; words sorted bytewise
    /// on their rendering, so `ε` comes last.
    pub fn table(&self) -> Option<Vec<(String, Vec<String>)>> {
        let TraceMap::Bounded { space, alphabet, words, .. } = self else {
            return None;
        };
        let rows = words
            .iter()
            .enumerate()
            .map(|(x, ws)| {
                let mut rendered: Vec<String> = ws.iter().map(|w| alphabet.render(w)).collect();
                rendered.sort();
                (space.name(x).to_string(), rendered)
            })
            .collect();
        Some(rows)
    }
}

fn expect_ena(alpha: &System, op: &'static str) -> Result<()> {
    alpha.expect_kind(op, &[MonadKind::Ena])?;
    alpha.expect_system()
}

/// `tr_n = tr_{n-1} · α` starting from `⊥: X ⊸ ∅`, by Kleisli composition
/// in the ε-NA monad.
pub fn trace_iterate(alpha: &System, n: usize) -> Result<TraceMap> {
    expect_ena(alpha, "trace_iterate")?;
    let mut tr =
        Morphism::bottom(MonadKind::Ena, alpha.alphabet().clone(), alpha.source().clone(), Arc::new(StateSpace::empty()));
    for _ in 0..n {
        tr = Morphism::compose(&tr, alpha)?;
    }
    let words = tr.image().iter().map(|e| e.bare().to_vec()).collect();
    Ok(TraceMap::Bounded { space: alpha.source().clone(), alphabet: alpha.alphabet().clone(), k: n, words })
}

/// Exact traces: the bare component of the symbolic saturation.
pub fn trace_exact(alpha: &System) -> Result<TraceMap> {
    expect_ena(alpha, "trace_exact")?;
    let sat = saturate_free(alpha)?;
    let langs = (0..sat.len()).map(|x| sat.bare(x).expect("ε-NA saturations carry bare words")).collect();
    Ok(TraceMap::Exact { space: alpha.source().clone(), alphabet: alpha.alphabet().clone(), langs })
}

/// `(tr · f)(x) = ⋃ {s · tr(y) : (s, y) ∈ f(x)} ∪ bare(f(x))` for an ε-NA
/// morphism `f: X ⊸ Y` and a trace map on `Y`.
pub fn precompose(tr: &TraceMap, f: &Morphism) -> Result<Vec<RegLang>> {
    f.expect_kind("precompose", &[MonadKind::Ena])?;
    if **f.target() != **tr.space() {
        return Err(Error::SpaceMismatch("trace map is not over the target".into()));
    }
    let alphabet = f.alphabet().clone();
    let targets: Vec<RegLang> = (0..tr.len()).map(|y| tr.lang(y).relabel(alphabet.clone())).collect::<Result<_>>()?;
    Ok(f.image()
        .iter()
        .map(|e| {
            let mut parts: Vec<RegLang> = e.word_pairs().iter().map(|(s, y)| targets[*y].prefixed(s)).collect();
            parts.push(RegLang::from_words(alphabet.clone(), e.bare()));
            RegLang::union_all(alphabet.clone(), &parts)
        })
        .collect())
}

/// Whether `tr = tr · α` holds pointwise, by language equivalence.
pub fn check_fixed_point(alpha: &System, tr: &TraceMap) -> Result<bool> {
    expect_ena(alpha, "check_fixed_point")?;
    let next = precompose(tr, alpha)?;
    for (x, l) in next.iter().enumerate() {
        if !l.equivalent(&tr.lang(x).relabel(alpha.alphabet().clone())?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a uniformity check. The conclusion is only evaluated when the
/// premise holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Uniformity {
    pub premise: bool,
    pub conclusion: Option<bool>,
}

impl Uniformity {
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion == Some(true)
    }
}

/// Uniformity for a Kleisli morphism `h: X ⊸ Y`: if `h·α = β·h` then
/// `tr_β · h = tr_α`.
pub fn check_uniformity_kleisli(alpha: &System, h: &Morphism, beta: &System) -> Result<Uniformity> {
    expect_ena(alpha, "check_uniformity")?;
    expect_ena(beta, "check_uniformity")?;
    h.expect_kind("check_uniformity", &[MonadKind::Ena])?;
    if h.source() != alpha.source() || h.target() != beta.source() {
        return Err(Error::SpaceMismatch("h must go from the carrier of α to that of β".into()));
    }
    let premise = Morphism::compose(h, alpha)? == Morphism::compose(beta, h)?;
    if !premise {
        return Ok(Uniformity { premise, conclusion: None });
    }
    let pulled = precompose(&trace_exact(beta)?, h)?;
    let own = trace_exact(alpha)?;
    for (x, l) in pulled.iter().enumerate() {
        if !l.equivalent(&own.lang(x))? {
            return Ok(Uniformity { premise, conclusion: Some(false) });
        }
    }
    Ok(Uniformity { premise, conclusion: Some(true) })
}

/// Uniformity for a plain function `h: X → Y`, lifted to `h♯`.
pub fn check_uniformity(alpha: &System, h: &[usize], beta: &System) -> Result<Uniformity> {
    expect_ena(alpha, "check_uniformity")?;
    expect_ena(beta, "check_uniformity")?;
    if alpha.alphabet() != beta.alphabet() {
        return Err(Error::AlphabetMismatch("systems use different alphabets".into()));
    }
    let lifted =
        Morphism::lift(MonadKind::Ena, alpha.alphabet().clone(), alpha.source().clone(), beta.source().clone(), h)?;
    check_uniformity_kleisli(alpha, &lifted, beta)
}

/// `f†: X → (A → languages)`, the least solution of `f† = [f†, η_A] · f`.
#[derive(Clone, Debug)]
pub struct Dagger {
    pub space: Arc<StateSpace>,
    pub exits: Arc<StateSpace>,
    /// `langs[x][a]`
    pub langs: Vec<Vec<RegLang>>,
}

impl Dagger {
    pub fn at(&self, x: usize, a: usize) -> &RegLang {
        &self.langs[x][a]
    }
}

/// Splits the target of `f` into `X + A`: the first `|X|` target states
/// must carry the names of the source states, in order.
fn split(f: &Morphism) -> Result<(usize, Arc<StateSpace>)> {
    let n = f.source().len();
    let target = f.target();
    if target.len() < n || target.names()[..n] != f.source().names()[..] {
        return Err(Error::BadSplit("target does not begin with a copy of the source".into()));
    }
    let exits = Arc::new(StateSpace::new(target.names()[n..].iter().cloned())?);
    Ok((n, exits))
}

fn nonempty(l: &RegLang) -> Option<RegLang> {
    let m = l.minimized();
    (!m.is_empty()).then_some(m)
}

/// Conway dagger of a free-LTS morphism `f: X ⊸ X + A`, computed by solving
/// the linear system `L_x = ⋃ s·L_y ∪ ⋃ s·a` with Arden's rule
/// (`L = C·L ∪ D` has least solution `C*·D`), eliminating one state at a time.
pub fn conway_dagger(f: &Morphism) -> Result<Dagger> {
    f.expect_kind("conway_dagger", &[MonadKind::FreeLts])?;
    let (n, exits) = split(f)?;
    let m = exits.len();
    let alphabet = f.alphabet().clone();
    // coef[x][y] ⊆ Σ*, rhs[x][a] ⊆ Σ*; None is ∅.
    let mut coef: Vec<Vec<Option<RegLang>>> = vec![vec![None; n]; n];
    let mut rhs: Vec<Vec<Option<RegLang>>> = vec![vec![None; m]; n];
    for x in 0..n {
        let mut by_target: Vec<Vec<Word>> = vec![Vec::new(); n + m];
        for (w, t) in f.at(x).word_pairs() {
            by_target[*t].push(w.clone());
        }
        for (t, ws) in by_target.iter().enumerate() {
            if ws.is_empty() {
                continue;
            }
            let l = Some(RegLang::from_words(alphabet.clone(), ws));
            if t < n {
                coef[x][t] = l;
            } else {
                rhs[x][t - n] = l;
            }
        }
    }
    let join = |a: Option<RegLang>, b: Option<RegLang>| -> Result<Option<RegLang>> {
        Ok(match (a, b) {
            (Some(a), Some(b)) => nonempty(&a.union(&b)?),
            (a, None) => a,
            (None, b) => b,
        })
    };
    let times = |a: &RegLang, b: &Option<RegLang>| -> Result<Option<RegLang>> {
        match b {
            Some(b) => Ok(nonempty(&a.concat(b)?)),
            None => Ok(None),
        }
    };
    for k in 0..n {
        // Normalize row k: L_k = C_kk* (Σ_{y≠k} C_ky L_y ∪ D_k).
        if let Some(loop_lang) = coef[k][k].take() {
            let prefix = loop_lang.star();
            for y in 0..n {
                coef[k][y] = times(&prefix, &coef[k][y])?;
            }
            for a in 0..m {
                rhs[k][a] = times(&prefix, &rhs[k][a])?;
            }
        }
        // Substitute row k into every other row.
        for i in 0..n {
            if i == k {
                continue;
            }
            let Some(cik) = coef[i][k].take() else { continue };
            for y in 0..n {
                let add = times(&cik, &coef[k][y])?;
                coef[i][y] = join(coef[i][y].take(), add)?;
            }
            for a in 0..m {
                let add = times(&cik, &rhs[k][a])?;
                rhs[i][a] = join(rhs[i][a].take(), add)?;
            }
        }
    }
    let langs = rhs
        .into_iter()
        .map(|row| row.into_iter().map(|l| l.unwrap_or_else(|| RegLang::empty(alphabet.clone()))).collect())
        .collect();
    Ok(Dagger { space: f.source().clone(), exits, langs })
}

/// Whether `f† = [f†, η_A] · f` holds, by language equivalence.
pub fn check_dagger_fixed_point(f: &Morphism, dagger: &Dagger) -> Result<bool> {
    let (n, exits) = split(f)?;
    let alphabet = f.alphabet().clone();
    for x in 0..n {
        for a in 0..exits.len() {
            let mut parts = Vec::new();
            for (w, t) in f.at(x).word_pairs() {
                if *t < n {
                    parts.push(dagger.at(*t, a).prefixed(w));
                } else if *t - n == a {
                    parts.push(RegLang::from_words(alphabet.clone(), [w]));
                }
            }
            let rhs = RegLang::union_all(alphabet.clone(), &parts);
            if !rhs.equivalent(dagger.at(x, a))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The free-LTS morphism `X ⊸ X + 1` corresponding to an ε-NA system under
/// `P(Σ*×X + Σ*) ≅ P(Σ*×(X+1))`: a bare word `s` becomes `(s, •)`.
pub fn recast_ena(alpha: &System) -> Result<Morphism> {
    expect_ena(alpha, "recast_ena")?;
    let n = alpha.len();
    let mut exit = String::from("•");
    while alpha.source().index_of(&exit).is_some() {
        exit.push('\'');
    }
    let names = alpha.source().names().iter().cloned().chain(std::iter::once(exit));
    let target = Arc::new(StateSpace::new(names)?);
    let image = alpha
        .image()
        .iter()
        .map(|e| {
            let mut pairs = e.word_pairs().to_vec();
            pairs.extend(e.bare().iter().map(|w| (w.clone(), n)));
            Effect::free_lts(pairs)
        })
        .collect();
    Morphism::new(MonadKind::FreeLts, alpha.alphabet().clone(), alpha.source().clone(), target, image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::EnaSurface;

    fn sig() -> Arc<Alphabet> {
        Arc::new(Alphabet::new(["a", "b"], "eps").unwrap())
    }

    fn example() -> System {
        let s = Arc::new(StateSpace::new(["x", "y", "z"]).unwrap());
        EnaSurface::from_names(sig(), s, &[("x", "eps", "y"), ("y", "a", "y"), ("y", "b", "z"), ("z", "eps", "x")], &["z"])
            .unwrap()
            .embed()
    }

    fn row(t: &TraceMap) -> Vec<Vec<String>> {
        t.table().unwrap().into_iter().map(|(_, w)| w).collect()
    }

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn iterates_match_hand_table() {
        let alpha = example();
        assert_eq!(row(&trace_iterate(&alpha, 0).unwrap()), vec![strs(&[]), strs(&[]), strs(&[])]);
        assert_eq!(row(&trace_iterate(&alpha, 1).unwrap()), vec![strs(&[]), strs(&[]), strs(&["ε"])]);
        assert_eq!(row(&trace_iterate(&alpha, 2).unwrap()), vec![strs(&[]), strs(&["b"]), strs(&["ε"])]);
        assert_eq!(row(&trace_iterate(&alpha, 3).unwrap()), vec![strs(&["b"]), strs(&["ab", "b"]), strs(&["ε"])]);
        assert_eq!(
            row(&trace_iterate(&alpha, 4).unwrap()),
            vec![strs(&["ab", "b"]), strs(&["aab", "ab", "b"]), strs(&["b", "ε"])]
        );
    }

    #[test]
    fn exact_trace_of_example() {
        let alpha = example();
        let exact = trace_exact(&alpha).unwrap();
        let a = sig();
        // (a*b)+ built by hand from letters.
        let ab = RegLang::from_words(a.clone(), [&Word::letter(0)]).star().concat(&RegLang::from_words(a.clone(), [&Word::letter(1)])).unwrap();
        let plus = ab.concat(&ab.star()).unwrap();
        assert!(exact.lang(0).equivalent(&plus).unwrap());
        assert!(exact.lang(1).equivalent(&plus).unwrap());
        assert!(exact.lang(2).equivalent(&plus.union(&RegLang::epsilon(a)).unwrap()).unwrap());
        assert!(check_fixed_point(&alpha, &exact).unwrap());
        assert!(trace_iterate(&alpha, 6).unwrap().leq(&exact).unwrap());
    }

    #[test]
    fn silent_self_loop_has_empty_least_trace() {
        let s = Arc::new(StateSpace::new(["x"]).unwrap());
        let alpha = EnaSurface::from_names(sig(), s.clone(), &[("x", "eps", "x")], &[]).unwrap().embed();
        let exact = trace_exact(&alpha).unwrap();
        assert!(exact.lang(0).is_empty());
        let g = TraceMap::from_languages(s, vec![RegLang::from_words(sig(), [&Word::letter(0)])]).unwrap();
        assert!(check_fixed_point(&alpha, &g).unwrap());
        assert!(exact.leq(&g).unwrap());
        assert!(!g.leq(&exact).unwrap());
    }

    #[test]
    fn final_state_alone_accepts_epsilon() {
        let s = Arc::new(StateSpace::new(["x"]).unwrap());
        let alpha = EnaSurface::from_names(sig(), s, &[], &["x"]).unwrap().embed();
        assert!(trace_exact(&alpha).unwrap().lang(0).equivalent(&RegLang::epsilon(sig())).unwrap());
    }

    #[test]
    fn uniformity_cases() {
        let alpha = example();
        let id = [0, 1, 2];
        let r = check_uniformity(&alpha, &id, &alpha).unwrap();
        assert_eq!(r, Uniformity { premise: true, conclusion: Some(true) });
        let r = check_uniformity(&alpha, &[0, 0, 0], &alpha).unwrap();
        assert_eq!(r.conclusion, None);
        assert!(!r.premise);
    }

    #[test]
    fn uniformity_along_word_morphism() {
        // α(x) = {(a, x)}, bare {a};  h(x) = {(a, y)};  β(y) = {(a, y)}, bare {ε}.
        let a = Word::letter(0);
        let xs = Arc::new(StateSpace::new(["x"]).unwrap());
        let ys = Arc::new(StateSpace::new(["y"]).unwrap());
        let alpha = Morphism::system(MonadKind::Ena, sig(), xs.clone(), vec![Effect::ena(vec![(a.clone(), 0)], vec![a.clone()])]).unwrap();
        let beta = Morphism::system(MonadKind::Ena, sig(), ys.clone(), vec![Effect::ena(vec![(a.clone(), 0)], vec![Word::empty()])]).unwrap();
        let h = Morphism::new(MonadKind::Ena, sig(), xs, ys, vec![Effect::ena(vec![(a, 0)], vec![])]).unwrap();
        let r = check_uniformity_kleisli(&alpha, &h, &beta).unwrap();
        assert_eq!(r, Uniformity { premise: true, conclusion: Some(true) });
    }

    #[test]
    fn dagger_of_loop_then_exit() {
        let x = Arc::new(StateSpace::new(["x"]).unwrap());
        let t = Arc::new(StateSpace::new(["x", "a0"]).unwrap());
        let f = Morphism::new(MonadKind::FreeLts, sig(), x, t, vec![Effect::free_lts(vec![
            (Word::letter(0), 0),
            (Word::letter(1), 1),
        ])])
        .unwrap();
        let d = conway_dagger(&f).unwrap();
        let words: Vec<String> = d.at(0, 0).enumerate_upto(4).iter().map(|w| sig().render(w)).collect();
        assert_eq!(words, strs(&["b", "ab", "aab", "aaab"]));
        assert!(check_dagger_fixed_point(&f, &d).unwrap());
    }

    #[test]
    fn dagger_without_exits_is_empty() {
        let x = Arc::new(StateSpace::new(["x", "y"]).unwrap());
        let t = Arc::new(StateSpace::new(["x", "y", "e"]).unwrap());
        let f = Morphism::new(MonadKind::FreeLts, sig(), x, t, vec![
            Effect::free_lts(vec![(Word::letter(0), 1)]),
            Effect::free_lts(vec![(Word::empty(), 0)]),
        ])
        .unwrap();
        let d = conway_dagger(&f).unwrap();
        assert!(d.at(0, 0).is_empty() && d.at(1, 0).is_empty());
    }

    #[test]
    fn bad_split_is_reported() {
        let x = Arc::new(StateSpace::new(["x"]).unwrap());
        let t = Arc::new(StateSpace::new(["q", "x"]).unwrap());
        let f = Morphism::bottom(MonadKind::FreeLts, sig(), x, t);
        assert!(matches!(conway_dagger(&f), Err(Error::BadSplit(_))));
    }

    #[test]
    fn dagger_agrees_with_exact_trace() {
        let alpha = example();
        let d = conway_dagger(&recast_ena(&alpha).unwrap()).unwrap();
        let exact = trace_exact(&alpha).unwrap();
        for x in 0..3 {
            assert!(d.at(x, 0).equivalent(&exact.lang(x)).unwrap());
        }
    }
}
