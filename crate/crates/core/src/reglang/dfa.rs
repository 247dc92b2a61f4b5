use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{GraphBuilder, RegLang};
use crate::kernel::{Alphabet, Letter};

/// Lazily explored subset automaton of an ε-NFA.
struct Explorer<'a> {
    lang: &'a RegLang,
    ids: HashMap<Vec<usize>, usize>,
    sets: Vec<Vec<usize>>,
    delta: Vec<Vec<Option<usize>>>,
}

impl<'a> Explorer<'a> {
    fn new(lang: &'a RegLang) -> Self {
        let mut e = Self { lang, ids: HashMap::new(), sets: Vec::new(), delta: Vec::new() };
        e.intern(lang.start_set());
        e
    }

    fn intern(&mut self, set: Vec<usize>) -> usize {
        if let Some(&id) = self.ids.get(&set) {
            return id;
        }
        let id = self.sets.len();
        self.ids.insert(set.clone(), id);
        self.sets.push(set);
        self.delta.push(vec![None; self.lang.alphabet.len()]);
        id
    }

    fn next(&mut self, q: usize, a: Letter) -> usize {
        if let Some(r) = self.delta[q][a as usize] {
            return r;
        }
        let set = self.lang.step(&self.sets[q], a);
        let r = self.intern(set);
        self.delta[q][a as usize] = Some(r);
        r
    }

    fn accepting(&self, q: usize) -> bool {
        self.lang.accepting(&self.sets[q])
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Hopcroft–Karp: union-find over pairs of subset states, explored on demand.
pub(super) fn hopcroft_karp(l1: &RegLang, l2: &RegLang) -> bool {
    let mut left = Explorer::new(l1);
    let mut right = Explorer::new(l2);
    // Union-find nodes: ("left", id) ↦ 2·id, ("right", id) ↦ 2·id + 1.
    let mut parent: Vec<usize> = Vec::new();
    let key = |side: usize, id: usize| 2 * id + side;
    let ensure = |parent: &mut Vec<usize>, k: usize| {
        while parent.len() <= k {
            let n = parent.len();
            parent.push(n);
        }
    };
    if left.accepting(0) != right.accepting(0) {
        return false;
    }
    let (k1, k2) = (key(0, 0), key(1, 0));
    ensure(&mut parent, k1.max(k2));
    parent[k1] = k2;
    let mut todo = vec![(0usize, 0usize)];
    let letters: Vec<Letter> = l1.alphabet.letters().collect();
    while let Some((p, q)) = todo.pop() {
        for &a in &letters {
            let p2 = left.next(p, a);
            let q2 = right.next(q, a);
            let (k1, k2) = (key(0, p2), key(1, q2));
            ensure(&mut parent, k1.max(k2));
            let (r1, r2) = (find(&mut parent, k1), find(&mut parent, k2));
            if r1 != r2 {
                if left.accepting(p2) != right.accepting(q2) {
                    return false;
                }
                parent[r1] = r2;
                todo.push((p2, q2));
            }
        }
    }
    true
}

/// A complete deterministic automaton over letters `0..letters`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    start: usize,
    accept: Vec<bool>,
    delta: Vec<Vec<usize>>,
}

impl Dfa {
    /// Full subset construction (reachable subsets only; the empty subset
    /// appears as a sink when needed).
    pub fn determinize(lang: &RegLang) -> Dfa {
        let mut ex = Explorer::new(lang);
        let mut q = 0;
        while q < ex.sets.len() {
            for a in lang.alphabet.letters() {
                ex.next(q, a);
            }
            q += 1;
        }
        let accept = (0..ex.sets.len()).map(|q| ex.accepting(q)).collect();
        let delta = ex.delta.into_iter().map(|row| row.into_iter().map(|r| r.expect("explored")).collect()).collect();
        Dfa { start: 0, accept, delta }
    }

    pub fn len(&self) -> usize {
        self.accept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accept.is_empty()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accept[q]
    }

    pub fn next(&self, q: usize, a: Letter) -> usize {
        self.delta[q][a as usize]
    }

    /// States from which some accepting state is reachable.
    pub fn co_reachable(&self) -> Vec<bool> {
        let mut live = self.accept.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..self.len() {
                if !live[q] && self.delta[q].iter().any(|&r| live[r]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        live
    }

    /// Moore partition refinement; states are renumbered in breadth-first
    /// order from the start, so equal languages give identical automata.
    pub fn minimize(&self) -> Dfa {
        let n = self.len();
        let letters = self.delta.first().map_or(0, Vec::len);
        let mut class: Vec<usize> = self.accept.iter().map(|&b| b as usize).collect();
        loop {
            let mut sig_ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let mut sig = Vec::with_capacity(letters + 1);
                sig.push(class[q]);
                sig.extend(self.delta[q].iter().map(|&r| class[r]));
                let fresh = sig_ids.len();
                next[q] = *sig_ids.entry(sig).or_insert(fresh);
            }
            let stable = sig_ids.len() == class.iter().collect::<std::collections::HashSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // Canonical BFS numbering of the quotient.
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut queue = std::collections::VecDeque::new();
        let mut reps = Vec::new();
        order.insert(class[self.start], 0);
        reps.push(self.start);
        queue.push_back(self.start);
        while let Some(q) = queue.pop_front() {
            for a in 0..letters {
                let r = self.delta[q][a];
                if let std::collections::hash_map::Entry::Vacant(e) = order.entry(class[r]) {
                    e.insert(reps.len());
                    reps.push(r);
                    queue.push_back(r);
                }
            }
        }
        let accept = reps.iter().map(|&q| self.accept[q]).collect();
        let delta = reps
            .iter()
            .map(|&q| (0..letters).map(|a| order[&class[self.delta[q][a]]]).collect())
            .collect();
        Dfa { start: 0, accept, delta }
    }

    /// The language as an NFA handle, with dead states dropped.
    pub fn to_reglang(&self, alphabet: Arc<Alphabet>) -> RegLang {
        let live = self.co_reachable();
        let mut b = GraphBuilder::with_nodes(self.len());
        for q in 0..self.len() {
            if !live[q] {
                continue;
            }
            for (a, &r) in self.delta[q].iter().enumerate() {
                if live[r] {
                    b.edge(q, Some(a as Letter), r);
                }
            }
        }
        let accepts = (0..self.len()).filter(|&q| self.accept[q]).collect();
        RegLang::from_graph(alphabet, b.finish(), self.start, accepts)
    }

    /// Plain-text listing: header, accepting states, then one line per
    /// transition that does not enter a dead state.
    pub fn describe(&self, alphabet: &Alphabet) -> String {
        let live = self.co_reachable();
        let mut s = String::new();
        let _ = writeln!(s, "dfa states={} start={}", self.len(), self.start);
        let acc: Vec<String> = (0..self.len()).filter(|&q| self.accept[q]).map(|q| q.to_string()).collect();
        let _ = writeln!(s, "accept: {}", acc.join(" "));
        for q in 0..self.len() {
            for (a, &r) in self.delta[q].iter().enumerate() {
                if live[r] {
                    let _ = writeln!(s, "{q} -{}-> {r}", alphabet.letter_name(a as Letter));
                }
            }
        }
        s
    }
}
