use super::effect::MonadKind;
use super::morphism::Morphism;
use crate::error::{Error, Result};

/// Result of a Kleene iteration.
#[derive(Clone, Debug)]
pub struct Fixpoint {
    pub value: Morphism,
    /// `true` when the iteration stabilised; `false` when fuel ran out first.
    pub exact: bool,
    /// Number of applications of the step function.
    pub iterations: usize,
}

/// Height of the lattice `(T Y)^X` when it is finite, plus one.
pub fn height_bound(kind: MonadKind, sources: usize, targets: usize, letters: usize) -> Option<usize> {
    match kind {
        MonadKind::Pow => Some(sources * targets + 1),
        MonadKind::Lts => Some(sources * (letters + 1) * targets + 1),
        MonadKind::FreeLts | MonadKind::Ena => None,
    }
}

/// Fuel used when the caller has no better estimate: ten times the lattice
/// height where one exists, else 1000.
pub fn default_fuel(kind: MonadKind, sources: usize, targets: usize, letters: usize) -> usize {
    height_bound(kind, sources, targets, letters).map_or(1000, |h| 10 * h)
}

/// Least fixed point of a monotone `step` by iteration from `bottom`.
///
/// Stops as soon as `step(x) == x`. An iterate that is not above its
/// predecessor is reported as [`Error::NonMonotoneDetected`].
pub fn lfp<F>(bottom: Morphism, fuel: usize, mut step: F) -> Result<Fixpoint>
where
    F: FnMut(&Morphism) -> Result<Morphism>,
{
    if fuel == 0 {
        return Err(Error::Invalid("lfp needs positive fuel".into()));
    }
    let mut current = bottom;
    for iteration in 1..=fuel {
        let next = step(&current)?;
        if next == current {
            return Ok(Fixpoint { value: current, exact: true, iterations: iteration });
        }
        if !current.leq(&next)? {
            return Err(Error::NonMonotoneDetected { iteration });
        }
        current = next;
    }
    Ok(Fixpoint { value: current, exact: false, iterations: fuel })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::kernel::{Alphabet, Effect, StateSpace, Word};

    #[test]
    fn identity_step_is_exact_after_one_iteration() {
        let sig = Arc::new(Alphabet::new(["a"], "tau").unwrap());
        let x = Arc::new(StateSpace::new(["x", "y"]).unwrap());
        let bot = Morphism::bottom(MonadKind::Lts, sig, x.clone(), x);
        let fp = lfp(bot.clone(), 5, |m| Ok(m.clone())).unwrap();
        assert!(fp.exact);
        assert_eq!(fp.iterations, 1);
        assert_eq!(fp.value, bot);
    }

    #[test]
    fn epsilon_loop_trace_is_bottom() {
        // α(x) = {(ε, x)} in the ε-NA monad; μx. x·α = ⊥.
        let sig = Arc::new(Alphabet::new(["a"], "eps").unwrap());
        let x = Arc::new(StateSpace::new(["x"]).unwrap());
        let alpha = Morphism::system(MonadKind::Ena, sig.clone(), x.clone(), vec![Effect::ena(vec![(Word::empty(), 0)], vec![])]).unwrap();
        let none = Arc::new(StateSpace::empty());
        let bot = Morphism::bottom(MonadKind::Ena, sig, x, none);
        let fp = lfp(bot.clone(), 10, |t| Morphism::compose(t, &alpha)).unwrap();
        assert!(fp.exact);
        assert_eq!(fp.value, bot);
    }

    #[test]
    fn shrinking_step_is_rejected() {
        let sig = Arc::new(Alphabet::new(["a"], "tau").unwrap());
        let x = Arc::new(StateSpace::new(["x"]).unwrap());
        let one = Morphism::identity(MonadKind::Lts, sig.clone(), x.clone());
        let bot = Morphism::bottom(MonadKind::Lts, sig, x.clone(), x);
        let b2 = bot.clone();
        let err = lfp(one, 5, move |_| Ok(b2.clone())).unwrap_err();
        assert_eq!(err, Error::NonMonotoneDetected { iteration: 1 });
    }

    #[test]
    fn fuel_exhaustion_is_flagged() {
        // Appends a longer word each round: never stabilises.
        let sig = Arc::new(Alphabet::new(["a"], "eps").unwrap());
        let x = Arc::new(StateSpace::new(["x"]).unwrap());
        let alpha = Morphism::system(MonadKind::FreeLts, sig.clone(), x.clone(), vec![Effect::free_lts(vec![(Word::letter(0), 0)])]).unwrap();
        let one = Morphism::identity(MonadKind::FreeLts, sig, x);
        let fp = lfp(one.clone(), 4, |m| one.join(&Morphism::compose(&alpha, m)?)).unwrap();
        assert!(!fp.exact);
        assert_eq!(fp.iterations, 4);
        assert_eq!(fp.value.at(0).size(), 5);
        assert!(lfp(one.clone(), 0, |m| Ok(m.clone())).is_err());
    }

    #[test]
    fn default_fuel_values() {
        assert_eq!(default_fuel(MonadKind::Lts, 3, 3, 2), 10 * (3 * 3 * 3 + 1));
        assert_eq!(default_fuel(MonadKind::Ena, 3, 3, 2), 1000);
    }
}
