//! Regular languages over a fixed alphabet, held as ε-NFAs.
//!
//! Handles are immutable and cheap to clone; the underlying graph is shared.
//! Operations build new graphs Thompson-style and never minimize on their own.
//! Decision procedures determinize lazily.

mod dfa;


use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

pub use dfa::Dfa;

use crate::error::{Error, Result};
use crate::kernel::{same_alphabet, Alphabet, Letter, Word};

/// Adjacency lists; `None` marks an ε edge.
#[derive(Debug, Default)]
pub(crate) struct Graph {
    pub(crate) edges: Vec<Vec<(Option<Letter>, usize)>>,
}

impl Graph {
    pub(crate) fn len(&self) -> usize {
        self.edges.len()
    }
}

/// Incremental ε-NFA graph construction.
#[derive(Debug, Default)]
pub(crate) struct GraphBuilder {
    edges: Vec<Vec<(Option<Letter>, usize)>>,
}

impl GraphBuilder {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn with_nodes(n: usize) -> Self {
        Self { edges: vec![Vec::new(); n] }
    }

    pub(crate) fn node(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    pub(crate) fn edge(&mut self, from: usize, label: Option<Letter>, to: usize) {
        self.edges[from].push((label, to));
    }

    /// Adds a path spelling `word` from `from` to `to`; the empty word is an ε edge.
    pub(crate) fn word_path(&mut self, from: usize, word: &Word, to: usize) {
        match word.letters() {
            [] => self.edge(from, None, to),
            letters => {
                let mut at = from;
                for (i, &a) in letters.iter().enumerate() {
                    let next = if i + 1 == letters.len() { to } else { self.node() };
                    self.edge(at, Some(a), next);
                    at = next;
                }
            }
        }
    }

    /// Copies the part of `lang` reachable from its start; returns the new
    /// start node and accept nodes.
    fn copy(&mut self, lang: &RegLang) -> (usize, Vec<usize>) {
        let reach = lang.reachable();
        let mut map = vec![usize::MAX; lang.graph.len()];
        for &n in &reach {
            map[n] = self.node();
        }
        for &n in &reach {
            for &(l, m) in &lang.graph.edges[n] {
                self.edge(map[n], l, map[m]);
            }
        }
        let accepts = lang.accepts.iter().filter(|&&a| map[a] != usize::MAX).map(|&a| map[a]).collect();
        (map[lang.start], accepts)
    }

    pub(crate) fn finish(self) -> Arc<Graph> {
        for e in &self.edges {
            debug_assert!(e.iter().all(|&(_, m)| m < self.edges.len()));
        }
        let mut edges = self.edges;
        for e in &mut edges {
            e.sort_unstable();
            e.dedup();
        }
        Arc::new(Graph { edges })
    }
}

/// A regular language over the visible letters of an [`Alphabet`].
#[derive(Clone, Debug)]
pub struct RegLang {
    alphabet: Arc<Alphabet>,
    graph: Arc<Graph>,
    start: usize,
    accepts: Vec<usize>,
}

impl RegLang {
    /// Wraps a graph node set; `accepts` is canonicalised.
    pub(crate) fn from_graph(alphabet: Arc<Alphabet>, graph: Arc<Graph>, start: usize, accepts: Vec<usize>) -> Self {
        let accepts: BTreeSet<usize> = accepts.into_iter().collect();
        Self { alphabet, graph, start, accepts: accepts.into_iter().collect() }
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        let mut b = GraphBuilder::new();
        let s = b.node();
        Self::from_graph(alphabet, b.finish(), s, vec![])
    }

    /// `{ε}`
    pub fn epsilon(alphabet: Arc<Alphabet>) -> Self {
        let mut b = GraphBuilder::new();
        let s = b.node();
        Self::from_graph(alphabet, b.finish(), s, vec![s])
    }

    pub fn from_words<'a>(alphabet: Arc<Alphabet>, words: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut b = GraphBuilder::new();
        let s = b.node();
        let f = b.node();
        for w in words {
            b.word_path(s, w, f);
        }
        Self::from_graph(alphabet, b.finish(), s, vec![f])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Number of NFA nodes (including unreachable ones of a shared graph).
    pub fn node_count(&self) -> usize {
        self.graph.len()
    }

    fn check(&self, other: &RegLang) -> Result<()> {
        if same_alphabet(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch("languages over different alphabets".into()))
        }
    }

    pub fn union(&self, other: &RegLang) -> Result<RegLang> {
        self.check(other)?;
        Ok(Self::union_all(self.alphabet.clone(), [self, other]))
    }

    /// Union of any number of languages over `alphabet` (all must share it).
    pub fn union_all<'a>(alphabet: Arc<Alphabet>, langs: impl IntoIterator<Item = &'a RegLang>) -> RegLang {
        let mut b = GraphBuilder::new();
        let s = b.node();
        let mut accepts = Vec::new();
        for l in langs {
            debug_assert!(same_alphabet(&alphabet, &l.alphabet));
            let (ls, la) = b.copy(l);
            b.edge(s, None, ls);
            accepts.extend(la);
        }
        Self::from_graph(alphabet, b.finish(), s, accepts)
    }

    pub fn concat(&self, other: &RegLang) -> Result<RegLang> {
        self.check(other)?;
        let mut b = GraphBuilder::new();
        let (s1, a1) = b.copy(self);
        let (s2, a2) = b.copy(other);
        for a in a1 {
            b.edge(a, None, s2);
        }
        Ok(Self::from_graph(self.alphabet.clone(), b.finish(), s1, a2))
    }

    /// `{w} · self`
    pub fn prefixed(&self, word: &Word) -> RegLang {
        let mut b = GraphBuilder::new();
        let s = b.node();
        let (ls, la) = b.copy(self);
        b.word_path(s, word, ls);
        Self::from_graph(self.alphabet.clone(), b.finish(), s, la)
    }

    pub fn star(&self) -> RegLang {
        let mut b = GraphBuilder::new();
        let s = b.node();
        let (ls, la) = b.copy(self);
        b.edge(s, None, ls);
        for a in la {
            b.edge(a, None, s);
        }
        Self::from_graph(self.alphabet.clone(), b.finish(), s, vec![s])
    }

    /// Same language with letters re-indexed into a larger alphabet (by name).
    pub fn relabel(&self, target: Arc<Alphabet>) -> Result<RegLang> {
        let map: Vec<Letter> = self
            .alphabet
            .visible()
            .iter()
            .map(|n| {
                target
                    .letter(n)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("letter {n:?} missing from target alphabet")))
            })
            .collect::<Result<_>>()?;
        let mut b = GraphBuilder::with_nodes(self.graph.len());
        for (n, es) in self.graph.edges.iter().enumerate() {
            for &(l, m) in es {
                b.edge(n, l.map(|a| map[a as usize]), m);
            }
        }
        Ok(Self::from_graph(target, b.finish(), self.start, self.accepts.clone()))
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.graph.len()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        let mut out = Vec::new();
        while let Some(n) = stack.pop() {
            out.push(n);
            for &(_, m) in &self.graph.edges[n] {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Sorted ε-closure of a node set.
    pub(crate) fn closure(&self, nodes: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut seen = vec![false; self.graph.len()];
        let mut stack: Vec<usize> = Vec::new();
        for n in nodes {
            if !seen[n] {
                seen[n] = true;
                stack.push(n);
            }
        }
        let mut out = Vec::new();
        while let Some(n) = stack.pop() {
            out.push(n);
            for &(l, m) in &self.graph.edges[n] {
                if l.is_none() && !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn step(&self, nodes: &[usize], letter: Letter) -> Vec<usize> {
        let next = nodes
            .iter()
            .flat_map(|&n| self.graph.edges[n].iter().filter(move |&&(l, _)| l == Some(letter)).map(|&(_, m)| m));
        self.closure(next.collect::<Vec<_>>())
    }

    pub(crate) fn start_set(&self) -> Vec<usize> {
        self.closure([self.start])
    }

    pub(crate) fn accepting(&self, nodes: &[usize]) -> bool {
        nodes.iter().any(|n| self.accepts.binary_search(n).is_ok())
    }

    pub fn member(&self, word: &Word) -> bool {
        let mut cur = self.start_set();
        for &a in word.letters() {
            if cur.is_empty() {
                return false;
            }
            cur = self.step(&cur, a);
        }
        self.accepting(&cur)
    }

    pub fn is_empty(&self) -> bool {
        !self.reachable().iter().any(|n| self.accepts.binary_search(n).is_ok())
    }

    /// Language equality, decided by Hopcroft–Karp over lazily built subset automata.
    pub fn equivalent(&self, other: &RegLang) -> Result<bool> {
        self.check(other)?;
        Ok(dfa::hopcroft_karp(self, other))
    }

    /// `self ⊆ other`
    pub fn is_subset(&self, other: &RegLang) -> Result<bool> {
        self.union(other)?.equivalent(other)
    }

    /// All members of length at most `max_len`, shortest first, then lexicographic.
    pub fn enumerate_upto(&self, max_len: usize) -> Vec<Word> {
        let dfa = Dfa::determinize(self);
        let live = dfa.co_reachable();
        let mut out = Vec::new();
        let mut layer: Vec<(Word, usize)> = vec![(Word::empty(), dfa.start())];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (w, q) in &layer {
                if dfa.is_accepting(*q) {
                    out.push(w.clone());
                }
                if len < max_len {
                    for a in self.alphabet.letters() {
                        let r = dfa.next(*q, a);
                        if live[r] {
                            let mut w2 = w.clone();
                            w2.push(a);
                            next.push((w2, r));
                        }
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// Minimal complete DFA of the language.
    pub fn minimal_dfa(&self) -> Dfa {
        Dfa::determinize(self).minimize()
    }

    /// Same language, re-encoded as its trimmed minimal DFA.
    pub fn minimized(&self) -> RegLang {
        self.minimal_dfa().to_reglang(self.alphabet.clone())
    }

    /// Graphviz rendering of the underlying NFA (reachable part).
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nfa {\n  rankdir=LR;\n  __start [shape=point];\n");
        let reach = self.reachable();
        for &n in &reach {
            let shape = if self.accepts.binary_search(&n).is_ok() { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  n{n} [shape={shape}];");
        }
        let _ = writeln!(s, "  __start -> n{};", self.start);
        for &n in &reach {
            for &(l, m) in &self.graph.edges[n] {
                let label = match l {
                    None => "ε".to_string(),
                    Some(a) => dot_escape(self.alphabet.letter_name(a)),
                };
                let _ = writeln!(s, "  n{n} -> n{m} [label=\"{label}\"];");
            }
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Alphabet> {
        Arc::new(Alphabet::new(["a", "b"], "eps").unwrap())
    }

    fn w(s: &str) -> Word {
        Word::parse(s, &ab()).unwrap()
    }

    fn words(ss: &[&str]) -> Vec<Word> {
        ss.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn empty_and_unit_languages() {
        let e = RegLang::from_words(ab(), &[]);
        assert!(e.is_empty());
        assert!(!e.member(&Word::empty()));
        let one = RegLang::from_words(ab(), &[Word::empty()]);
        assert!(one.member(&Word::empty()));
        assert!(!one.member(&w("a")));
        assert_eq!(one.enumerate_upto(3), vec![Word::empty()]);
    }

    #[test]
    fn membership_in_finite_language() {
        let l = RegLang::from_words(ab(), &words(&["ab", "b"]));
        assert!(l.member(&w("ab")));
        assert!(l.member(&w("b")));
        assert!(!l.member(&w("a")));
        assert_eq!(l.enumerate_upto(1), words(&["b"]));
    }

    #[test]
    fn regular_operations() {
        let a = RegLang::from_words(ab(), &words(&["a"]));
        let b = RegLang::from_words(ab(), &words(&["b"]));
        let u = a.union(&b).unwrap();
        assert_eq!(u.enumerate_upto(3), words(&["a", "b"]));
        let eps = RegLang::epsilon(ab());
        assert!(eps.concat(&u).unwrap().equivalent(&u).unwrap());
        let none = RegLang::empty(ab());
        assert!(none.star().equivalent(&eps).unwrap());
        assert!(!none.star().is_empty());
    }

    #[test]
    fn a_star_a_equals_a_a_star() {
        let a = RegLang::from_words(ab(), &words(&["a"]));
        let lhs = a.star().concat(&a).unwrap();
        let rhs = a.concat(&a.star()).unwrap();
        assert!(lhs.equivalent(&rhs).unwrap());
        assert!(!lhs.equivalent(&a.star()).unwrap());
    }

    #[test]
    fn epsilon_is_not_empty_language() {
        assert!(!RegLang::epsilon(ab()).equivalent(&RegLang::empty(ab())).unwrap());
    }

    #[test]
    fn enumerate_a_star_b_plus() {
        // (a*b)+ = a*b · (a*b)*
        let a = RegLang::from_words(ab(), &words(&["a"]));
        let b = RegLang::from_words(ab(), &words(&["b"]));
        let ab_ = a.star().concat(&b).unwrap();
        let l = ab_.concat(&ab_.star()).unwrap();
        assert_eq!(l.enumerate_upto(2), words(&["b", "ab", "bb"]));
        assert_eq!(l.enumerate_upto(0), vec![]);
    }

    #[test]
    fn alphabet_mismatch() {
        let other = Arc::new(Alphabet::new(["c"], "eps").unwrap());
        let r = RegLang::empty(ab()).union(&RegLang::empty(other));
        assert!(matches!(r, Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn relabel_preserves_words() {
        let small = Arc::new(Alphabet::new(["b"], "eps").unwrap());
        let l = RegLang::from_words(small.clone(), &[Word::parse("bb", &small).unwrap()]);
        let big = ab();
        let r = l.relabel(big.clone()).unwrap();
        assert_eq!(r.enumerate_upto(3), vec![w("bb")]);
    }

    #[test]
    fn minimized_is_equivalent() {
        let a = RegLang::from_words(ab(), &words(&["a", "ab", "abb"]));
        let l = a.star().concat(&a).unwrap();
        let m = l.minimized();
        assert!(m.equivalent(&l).unwrap());
        assert!(m.node_count() <= l.minimal_dfa().len());
    }

    #[test]
    fn dot_output_mentions_accepting_nodes() {
        let l = RegLang::from_words(ab(), &words(&["a"]));
        let dot = l.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("doublecircle"));
    }
}
