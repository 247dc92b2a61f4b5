//! Strong (kernel) bisimilarity by partition refinement, weak bisimilarity
//! through either saturator, and a relational oracle for the weak case.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{Alphabet, Effect, EnaSurface, Label, MonadKind, Morphism, StateSpace, System};
use crate::saturation::{saturate_free, star};

/// An equivalence relation on a state space, held as its set of blocks.
///
/// Blocks are numbered in order of their smallest member, so two partitions
/// describing the same relation compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    space: Arc<StateSpace>,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from arbitrary per-state labels.
    pub fn from_labels<L: Eq + Hash + Clone>(space: Arc<StateSpace>, labels: &[L]) -> Result<Self> {
        if labels.len() != space.len() {
            return Err(Error::SpaceMismatch("one label per state required".into()));
        }
        let mut ids: HashMap<L, usize> = HashMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            let fresh = ids.len();
            let id = *ids.entry(l.clone()).or_insert(fresh);
            if id == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[id].push(x);
            block_of.push(id);
        }
        Ok(Self { space, block_of, blocks })
    }

    /// Every state in its own block.
    pub fn discrete(space: Arc<StateSpace>) -> Self {
        let labels: Vec<usize> = (0..space.len()).collect();
        Self::from_labels(space, &labels).expect("sizes agree")
    }

    /// All states in one block.
    pub fn total(space: Arc<StateSpace>) -> Self {
        let labels = vec![0usize; space.len()];
        Self::from_labels(space, &labels).expect("sizes agree")
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_map(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| other.related(b[0], x)))
    }

    /// Merges the blocks containing `x` and `y`.
    pub fn merge(&self, x: usize, y: usize) -> Partition {
        let (bx, by) = (self.block_of[x], self.block_of[y]);
        let labels: Vec<usize> = self.block_of.iter().map(|&b| if b == by { bx } else { b }).collect();
        Partition::from_labels(self.space.clone(), &labels).expect("sizes agree")
    }

    /// The partition induced on the `space.len()` states starting at `offset`
    /// of a larger space.
    pub fn restrict(&self, space: Arc<StateSpace>, offset: usize) -> Result<Partition> {
        let labels = self
            .block_of
            .get(offset..offset + space.len())
            .ok_or_else(|| Error::SpaceMismatch("restriction out of range".into()))?
            .to_vec();
        Partition::from_labels(space, &labels)
    }

    /// Space whose states are the blocks, named after their smallest member.
    pub fn quotient_space(&self) -> Arc<StateSpace> {
        let names = self.blocks.iter().map(|b| self.space.name(b[0]).to_string());
        Arc::new(StateSpace::new(names).expect("block representatives are distinct"))
    }
}

/// Coarsest labelling refining `init` in which states with equal labels have
/// equal signatures. Each round groups every block by signature; the
/// signature sees the labels of the previous round.
fn refine<S, F>(init: Vec<usize>, mut signature: F) -> Vec<usize>
where
    S: Eq + Hash,
    F: FnMut(usize, &[usize]) -> S,
{
    let mut labels = init;
    let mut count = labels.iter().collect::<std::collections::HashSet<_>>().len();
    loop {
        let mut ids: HashMap<(usize, S), usize> = HashMap::new();
        let mut next = Vec::with_capacity(labels.len());
        for x in 0..labels.len() {
            let key = (labels[x], signature(x, &labels));
            let fresh = ids.len();
            next.push(*ids.entry(key).or_insert(fresh));
        }
        let new_count = ids.len();
        labels = next;
        if new_count == count {
            return labels;
        }
        count = new_count;
    }
}

/// `T(q)(α(x))` for the quotient map `q` given by `labels`.
fn kernel_signature(alpha: &System, x: usize, labels: &[usize]) -> Effect {
    alpha.at(x).map_states(|y| labels[y])
}

/// Coarsest kernel bisimulation of a single system: the largest equivalence
/// whose quotient map is a coalgebra homomorphism.
pub fn bisimilarity(alpha: &System) -> Result<Partition> {
    alpha.expect_system()?;
    let labels = refine(vec![0; alpha.len()], |x, l| kernel_signature(alpha, x, l));
    Partition::from_labels(alpha.source().clone(), &labels)
}

/// Places `β` next to `α`: states of `β` are shifted past those of `α` and
/// the names are prefixed `1:` and `2:`.
pub fn disjoint_sum(alpha: &System, beta: &System) -> Result<System> {
    alpha.expect_system()?;
    beta.expect_system()?;
    if alpha.kind() != beta.kind() {
        return Err(Error::MonadMismatch { expected: alpha.kind(), found: beta.kind() });
    }
    if alpha.alphabet() != beta.alphabet() {
        return Err(Error::AlphabetMismatch("systems use different alphabets".into()));
    }
    let n = alpha.len();
    let space = Arc::new(alpha.source().disjoint_union(beta.source(), "1:", "2:")?);
    let image = alpha
        .image()
        .iter()
        .cloned()
        .chain(beta.image().iter().map(|e| e.map_states(|y| y + n)))
        .collect();
    Morphism::system(alpha.kind(), alpha.alphabet().clone(), space, image)
}

/// Strong bisimilarity between two systems, as one partition of `α ⊎ β`.
pub fn strong_bisimilarity(alpha: &System, beta: &System) -> Result<Partition> {
    bisimilarity(&disjoint_sum(alpha, beta)?)
}

/// Whether `partition` is a kernel bisimulation on `α`.
pub fn is_bisimulation(alpha: &System, partition: &Partition) -> Result<bool> {
    alpha.expect_system()?;
    if **partition.space() != **alpha.source() {
        return Err(Error::SpaceMismatch("partition is over a different space".into()));
    }
    let labels = partition.block_map();
    Ok(partition.blocks().iter().all(|block| {
        let first = kernel_signature(alpha, block[0], labels);
        block[1..].iter().all(|&x| kernel_signature(alpha, x, labels) == first)
    }))
}

/// The system on blocks induced by a bisimulation: `β([x]) = T(q)(α(x))`.
pub fn quotient(alpha: &System, partition: &Partition) -> Result<System> {
    if !is_bisimulation(alpha, partition)? {
        return Err(Error::Invalid("partition is not a bisimulation".into()));
    }
    let labels = partition.block_map();
    let image = partition.blocks().iter().map(|b| kernel_signature(alpha, b[0], labels)).collect();
    Morphism::system(alpha.kind(), alpha.alphabet().clone(), partition.quotient_space(), image)
}

/// Quotient that joins the images of all members of each block and drops
/// silent self-loops on blocks. Used for weak minimization.
pub fn union_quotient(alpha: &System, partition: &Partition) -> Result<System> {
    alpha.expect_system()?;
    let labels = partition.block_map();
    let image = partition
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, members)| {
            let joined = members
                .iter()
                .map(|&x| kernel_signature(alpha, x, labels))
                .reduce(|a, e| a.union(&e))
                .expect("blocks are nonempty");
            match joined {
                Effect::Lts(v) => Effect::Lts(v.into_iter().filter(|&(l, y)| !(l == Label::Silent && y == b)).collect()),
                Effect::FreeLts(v) => Effect::FreeLts(v.into_iter().filter(|(w, y)| !(w.is_empty() && *y == b)).collect()),
                Effect::Ena { pairs, bare } => Effect::Ena {
                    pairs: pairs.into_iter().filter(|(w, y)| !(w.is_empty() && *y == b)).collect(),
                    bare,
                },
                e => e,
            }
        })
        .collect();
    Morphism::system(alpha.kind(), alpha.alphabet().clone(), partition.quotient_space(), image)
}

/// Quotient of an ε-NA by a bisimulation of its labelled part that respects finality.
pub fn quotient_ena(ena: &EnaSurface, partition: &Partition) -> Result<EnaSurface> {
    let labelled = quotient(ena.labelled(), partition)?;
    let finals = partition.blocks().iter().map(|b| ena.is_final(b[0])).collect();
    if partition.blocks().iter().any(|b| b.iter().any(|&x| ena.is_final(x) != ena.is_final(b[0]))) {
        return Err(Error::Invalid("partition mixes final and non-final states".into()));
    }
    EnaSurface::new(labelled, finals)
}

/// Strong bisimilarity of an ε-NA (labelled steps plus finality).
pub fn ena_bisimilarity(ena: &EnaSurface) -> Result<Partition> {
    bisimilarity(&ena.embed())
}

/// Weak bisimilarity of an LTS as strong bisimilarity of `α*`.
pub fn weak_bisimilarity_star(alpha: &System) -> Result<Partition> {
    alpha.expect_kind("weak_bisimilarity_star", &[MonadKind::Lts])?;
    bisimilarity(&star(alpha)?)
}

/// The labelled part of an ε-NA with acceptance made visible: a fresh letter
/// `✓` leads from each final state to a fresh inert sink state.
pub fn tick_lts(ena: &EnaSurface) -> Result<(System, usize)> {
    let alphabet = ena.alphabet();
    let mut tick = String::from("✓");
    while alphabet.letter(&tick).is_some() || alphabet.silent() == tick {
        tick.push('\'');
    }
    let mut letters = alphabet.visible().to_vec();
    letters.push(tick);
    let extended = Arc::new(Alphabet::new(letters, alphabet.silent())?);
    let tick_letter = Label::Visible((extended.len() - 1) as u32);
    let n = ena.len();
    let mut sink = String::from("⊥");
    while ena.space().index_of(&sink).is_some() {
        sink.push('\'');
    }
    let names = ena.space().names().iter().cloned().chain(std::iter::once(sink));
    let space = Arc::new(StateSpace::new(names)?);
    let mut image: Vec<Effect> = ena.labelled().image().to_vec();
    for (x, e) in image.iter_mut().enumerate() {
        if ena.is_final(x) {
            *e = e.union(&Effect::Lts(vec![(tick_letter, n)]));
        }
    }
    image.push(Effect::Lts(Vec::new()));
    Ok((Morphism::system(MonadKind::Lts, extended, space, image)?, n))
}

/// Surface-level saturation of an ε-NA: `x ⇒σ y` steps, and `x` is final
/// when a final state is silently reachable from it.
pub fn star_ena(ena: &EnaSurface) -> Result<EnaSurface> {
    let (lts, sink) = tick_lts(ena)?;
    let sat = star(&lts)?;
    let tick = Label::Visible((lts.alphabet().len() - 1) as u32);
    let mut finals = Vec::with_capacity(sink);
    let mut image = Vec::with_capacity(sink);
    for x in 0..sink {
        let Effect::Lts(pairs) = sat.at(x) else { unreachable!() };
        finals.push(pairs.contains(&(tick, sink)));
        image.push(Effect::lts(pairs.iter().copied().filter(|&(_, y)| y < sink).collect()));
    }
    let labelled = Morphism::system(MonadKind::Lts, ena.alphabet().clone(), ena.space().clone(), image)?;
    EnaSurface::new(labelled, finals)
}

/// Weak bisimilarity of an ε-NA through the finite saturator, with the final
/// marker treated as a terminating visible step.
pub fn weak_bisimilarity_star_ena(ena: &EnaSurface) -> Result<Partition> {
    let (lts, _) = tick_lts(ena)?;
    weak_bisimilarity_star(&lts)?.restrict(ena.space().clone(), 0)
}

/// Weak bisimilarity of a free-LTS or ε-NA system as bisimilarity of its
/// symbolic saturation: states stay together while, for every current block,
/// their languages into that block (and their bare languages) are equal.
pub fn weak_bisimilarity_free(alpha: &System) -> Result<Partition> {
    let matrix = saturate_free(alpha)?;
    let n = matrix.len();
    let mut labels = vec![0usize; n];
    let mut count = usize::from(n > 0);
    // Bare languages never change between rounds.
    let bare: Vec<_> = (0..n).map(|x| matrix.bare(x)).collect();
    loop {
        let blocks = Partition::from_labels(matrix.space().clone(), &labels)?.blocks().to_vec();
        let langs: Vec<Vec<_>> = (0..n).map(|x| blocks.iter().map(|b| matrix.block_lang(x, b)).collect()).collect();
        let same = |x: usize, r: usize| -> Result<bool> {
            if let (Some(bx), Some(br)) = (&bare[x], &bare[r]) {
                if !bx.equivalent(br)? {
                    return Ok(false);
                }
            }
            for (lx, lr) in langs[x].iter().zip(&langs[r]) {
                if !lx.equivalent(lr)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut next = vec![0usize; n];
        let mut fresh = 0;
        for block in &blocks {
            let mut reps: Vec<(usize, usize)> = Vec::new();
            for &x in block {
                let mut found = None;
                for &(r, id) in &reps {
                    if same(x, r)? {
                        found = Some(id);
                        break;
                    }
                }
                next[x] = match found {
                    Some(id) => id,
                    None => {
                        reps.push((x, fresh));
                        fresh += 1;
                        fresh - 1
                    }
                };
            }
        }
        labels = next;
        if fresh == count {
            break;
        }
        count = fresh;
    }
    Partition::from_labels(matrix.space().clone(), &labels)
}

/// Largest state count accepted by [`milner_oracle`].
pub const ORACLE_LIMIT: usize = 10;

/// Weak bisimilarity computed directly from the weak-arrow relations
/// `⇒τ = (→τ)*` and `⇒a = (→τ)*∘→a∘(→τ)*`, as the greatest relation with the
/// transfer property for every `σ ∈ Σ_τ`. Independent of the Kleisli machinery.
pub fn milner_oracle(alpha: &System) -> Result<Partition> {
    alpha.expect_kind("milner_oracle", &[MonadKind::Lts])?;
    alpha.expect_system()?;
    let n = alpha.len();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge { states: n, limit: ORACLE_LIMIT });
    }
    let sigma = alpha.alphabet().len();
    // step[l][x][y]: x →l y, with l = 0 for τ and l = a + 1 for letter a.
    let mut step = vec![vec![vec![false; n]; n]; sigma + 1];
    for x in 0..n {
        if let Effect::Lts(v) = alpha.at(x) {
            for &(l, y) in v {
                let i = match l {
                    Label::Silent => 0,
                    Label::Visible(a) => a as usize + 1,
                };
                step[i][x][y] = true;
            }
        }
    }
    let mut tau_star = step[0].clone();
    for (x, row) in tau_star.iter_mut().enumerate() {
        row[x] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if tau_star[i][k] && tau_star[k][j] {
                    tau_star[i][j] = true;
                }
            }
        }
    }
    let compose = |r: &Vec<Vec<bool>>, s: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| r[i][k] && s[k][j])).collect()).collect()
    };
    let mut weak = vec![tau_star.clone()];
    for rel in step.iter().skip(1) {
        weak.push(compose(&compose(&tau_star, rel), &tau_star));
    }
    let mut related = vec![vec![true; n]; n];
    let transfers = |related: &Vec<Vec<bool>>, x: usize, y: usize| {
        weak.iter().all(|w| (0..n).filter(|&x2| w[x][x2]).all(|x2| (0..n).any(|y2| w[y][y2] && related[x2][y2])))
    };
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if related[x][y] && !(transfers(&related, x, y) && transfers(&related, y, x)) {
                    related[x][y] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // The greatest weak bisimulation is an equivalence; label by the row.
    let labels: Vec<Vec<bool>> = related;
    Partition::from_labels(alpha.source().clone(), &labels)
}
