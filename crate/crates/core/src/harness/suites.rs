//! One generator and one checker per suite. A checker returns `Some(reason)`
//! when the property fails on the instance.

use std::sync::Arc;

use serde_json::{json, Value};

use super::gen::{random_endomorphism, random_ena, random_lts, random_quotient, random_unfolding};
use super::rng::Prng;
use super::{GenConfig, Suite};
use crate::equivalence::{
    bisimilarity, ena_bisimilarity, milner_oracle, quotient, star_ena, weak_bisimilarity_free, weak_bisimilarity_star,
    weak_bisimilarity_star_ena, ORACLE_LIMIT,
};
use crate::error::{Error, Result};
use crate::io::{from_value, to_value};
use crate::kernel::{check_monad_laws, embed_underline, EnaSurface, MonadKind, Morphism, StateSpace, System};
use crate::saturation::{check_embedding_inequality, check_h_compat, star, star_axioms_check, Witness};
use crate::trace::{
    check_dagger_fixed_point, check_fixed_point, check_uniformity, conway_dagger, recast_ena, trace_exact,
    trace_iterate,
};

/// The systems (and plain maps) one case is checked on.
#[derive(Clone, Debug)]
pub struct Instance {
    pub systems: Vec<System>,
    pub maps: Vec<Vec<usize>>,
}

impl Instance {
    fn of(systems: Vec<System>) -> Self {
        Self { systems, maps: Vec::new() }
    }

    pub fn to_value(&self) -> Value {
        let systems: Vec<Value> = self.systems.iter().map(|s| to_value(s, None)).collect();
        json!({ "systems": systems, "maps": self.maps })
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let bad = |path: &str| Error::Schema { path: path.into(), reason: "malformed instance".into() };
        let systems = v["systems"]
            .as_array()
            .ok_or_else(|| bad("instance.systems"))?
            .iter()
            .map(|d| from_value(d).map(|m| m.system))
            .collect::<Result<_>>()?;
        let maps = serde_json::from_value(v["maps"].clone()).map_err(|_| bad("instance.maps"))?;
        Ok(Self { systems, maps })
    }
}

const KINDS: [MonadKind; 4] = [MonadKind::Pow, MonadKind::Lts, MonadKind::FreeLts, MonadKind::Ena];

/// A random plain map `X → Y` together with a system on `Y` that makes it a
/// lax homomorphism (`h♯·α ≤ β·h♯`) plus random extra steps.
fn lax_witness(rng: &mut Prng, cfg: &GenConfig, alpha: &System) -> (Vec<usize>, System) {
    let m = 1 + rng.below(alpha.len());
    let map: Vec<usize> = (0..alpha.len()).map(|_| rng.below(m)).collect();
    let space = Arc::new(StateSpace::numbered(m));
    let extra = random_endomorphism(rng, &GenConfig { transition_density: cfg.transition_density / 2.0, ..cfg.clone() }, MonadKind::Lts, &space);
    let mut image: Vec<_> = extra.image().to_vec();
    for x in 0..alpha.len() {
        image[map[x]] = image[map[x]].union(&alpha.at(x).map_states(|y| map[y]));
    }
    let beta = Morphism::system(MonadKind::Lts, alpha.alphabet().clone(), space, image).expect("valid");
    (map, beta)
}

pub(super) fn generate(suite: Suite, rng: &mut Prng, cfg: &GenConfig) -> Instance {
    match suite {
        Suite::MonadLaws => {
            let space = Arc::new(StateSpace::numbered(1 + rng.below(cfg.max_states)));
            let systems = KINDS
                .iter()
                .flat_map(|&k| (0..3).map(move |_| k))
                .map(|k| random_endomorphism(rng, cfg, k, &space))
                .collect();
            Instance::of(systems)
        }
        Suite::SaturationAxioms => {
            let alpha = random_lts(rng, cfg);
            let sat = star(&alpha).expect("star of an LTS");
            let noise = random_endomorphism(rng, cfg, MonadKind::Lts, alpha.source());
            let bigger = star(&alpha.join(&noise).expect("parallel")).expect("star of an LTS");
            let one = Morphism::identity(MonadKind::Lts, alpha.alphabet().clone(), alpha.source().clone());
            let reflexive = alpha.join(&one).expect("parallel");
            let partition = bisimilarity(&alpha).expect("refines");
            let q = quotient(&alpha, &partition).expect("stable");
            let (lax_map, lax) = lax_witness(rng, cfg, &alpha);
            let n = alpha.len();
            let m = 1 + rng.below(n);
            let random_map: Vec<usize> = (0..n).map(|_| rng.below(m)).collect();
            let random_target = random_endomorphism(rng, cfg, MonadKind::Lts, &Arc::new(StateSpace::numbered(m)));
            Instance {
                systems: vec![alpha, sat, bigger, reflexive, q, lax, random_target],
                maps: vec![partition.block_map().to_vec(), lax_map, random_map],
            }
        }
        Suite::HCompat | Suite::StrongImpliesWeak | Suite::WeakCoincide => {
            let lts = random_lts(rng, cfg);
            let ena = random_ena(rng, cfg).embed();
            Instance::of(vec![lts, ena])
        }
        Suite::TraceLfp | Suite::Dagger | Suite::WeakImpliesTrace => Instance::of(vec![random_ena(rng, cfg).embed()]),
        Suite::TraceUniformity => {
            let pair = if rng.chance(0.5) { random_quotient(rng, cfg) } else { random_unfolding(rng, cfg, 2) };
            Instance { systems: vec![pair.alpha, pair.beta], maps: vec![pair.map] }
        }
    }
}

fn need(inst: &Instance, systems: usize, maps: usize) -> Result<()> {
    if inst.systems.len() < systems || inst.maps.len() < maps {
        return Err(Error::Invalid("instance has too few systems or maps".into()));
    }
    Ok(())
}

fn fail(cond: bool, reason: impl FnOnce() -> String) -> Option<String> {
    (!cond).then(reason)
}

pub(super) fn check(suite: Suite, inst: &Instance) -> Result<Option<String>> {
    match suite {
        Suite::MonadLaws => {
            need(inst, 3, 0)?;
            let triples: Vec<_> =
                inst.systems.chunks_exact(3).map(|c| (c[0].clone(), c[1].clone(), c[2].clone())).collect();
            let report = check_monad_laws(&triples)?;
            Ok(report.violations.first().map(|v| {
                format!("{} fails for the {} monad", v.law, triples[v.sample].0.kind())
            }))
        }
        Suite::SaturationAxioms => {
            need(inst, 1, 0)?;
            let alpha = &inst.systems[0];
            let w = inst.maps.len();
            let split = inst.systems.len().checked_sub(w).filter(|&s| s >= 1).ok_or_else(|| Error::Invalid("bad layout".into()))?;
            let candidates = &inst.systems[1..split];
            let witnesses: Vec<Witness> = inst.maps.iter().zip(&inst.systems[split..])
                .map(|(map, target)| Witness { map: map.clone(), target: target.clone() })
                .collect();
            let r = star_axioms_check(alpha, candidates, &witnesses)?;
            Ok(fail(r.holds(), || format!("axiom report {r:?}")))
        }
        Suite::HCompat => {
            need(inst, 1, 0)?;
            let alpha = &inst.systems[0];
            if !check_h_compat(alpha)? {
                return Ok(Some("short projection of the free saturation differs from star".into()));
            }
            Ok(fail(check_embedding_inequality(alpha)?, || "embedded composite not below free composite".into()))
        }
        Suite::WeakCoincide => {
            need(inst, 2, 0)?;
            let lts = &inst.systems[0];
            let by_star = weak_bisimilarity_star(lts)?;
            if by_star != weak_bisimilarity_free(&embed_underline(lts)?)? {
                return Ok(Some("LTS: star and free partitions differ".into()));
            }
            if lts.len() <= ORACLE_LIMIT && by_star != milner_oracle(lts)? {
                return Ok(Some("LTS: star partition differs from the relational oracle".into()));
            }
            let ena = EnaSurface::from_embedded(&inst.systems[1])?;
            Ok(fail(weak_bisimilarity_star_ena(&ena)? == weak_bisimilarity_free(&inst.systems[1])?, || {
                "ε-NA: star and free partitions differ".into()
            }))
        }
        Suite::StrongImpliesWeak => {
            need(inst, 2, 0)?;
            let lts = &inst.systems[0];
            if !bisimilarity(lts)?.refines(&weak_bisimilarity_star(lts)?) {
                return Ok(Some("LTS: strong partition does not refine weak".into()));
            }
            let ena = EnaSurface::from_embedded(&inst.systems[1])?;
            Ok(fail(ena_bisimilarity(&ena)?.refines(&weak_bisimilarity_star_ena(&ena)?), || {
                "ε-NA: strong partition does not refine weak".into()
            }))
        }
        Suite::TraceLfp => {
            need(inst, 1, 0)?;
            let alpha = &inst.systems[0];
            let exact = trace_exact(alpha)?;
            if !check_fixed_point(alpha, &exact)? {
                return Ok(Some("exact trace is not a fixed point".into()));
            }
            let mut prev = trace_iterate(alpha, 0)?;
            for n in 1..=8 {
                let next = trace_iterate(alpha, n)?;
                for x in 0..alpha.len() {
                    let (p, q) = (prev.words(x).unwrap_or(&[]), next.words(x).unwrap_or(&[]));
                    if !p.iter().all(|w| q.binary_search(w).is_ok()) {
                        return Ok(Some(format!("iterate {n} lost a word at state {x}")));
                    }
                    if let Some(w) = q.iter().find(|w| !exact.lang(x).member(w)) {
                        return Ok(Some(format!("iterate {n} has {w:?} at state {x}, outside the exact trace")));
                    }
                }
                prev = next;
            }
            Ok(None)
        }
        Suite::TraceUniformity => {
            need(inst, 2, 1)?;
            let r = check_uniformity(&inst.systems[0], &inst.maps[0], &inst.systems[1])?;
            if !r.premise {
                return Ok(Some("generated map is not a homomorphism".into()));
            }
            Ok(fail(r.holds(), || "traces are not preserved along the homomorphism".into()))
        }
        Suite::Dagger => {
            need(inst, 1, 0)?;
            let alpha = &inst.systems[0];
            let f = recast_ena(alpha)?;
            let dagger = conway_dagger(&f)?;
            if !check_dagger_fixed_point(&f, &dagger)? {
                return Ok(Some("dagger violates its fixed-point law".into()));
            }
            let exact = trace_exact(alpha)?;
            for x in 0..alpha.len() {
                if !dagger.at(x, 0).equivalent(&exact.lang(x))? {
                    return Ok(Some(format!("dagger and trace differ at state {x}")));
                }
            }
            Ok(None)
        }
        Suite::WeakImpliesTrace => {
            need(inst, 1, 0)?;
            let alpha = &inst.systems[0];
            let ena = EnaSurface::from_embedded(alpha)?;
            let exact = trace_exact(alpha)?;
            for block in weak_bisimilarity_star_ena(&ena)?.blocks() {
                for &x in &block[1..] {
                    if !exact.lang(x).equivalent(&exact.lang(block[0]))? {
                        return Ok(Some(format!("weakly bisimilar states {} and {x} differ in trace", block[0])));
                    }
                }
            }
            let saturated = trace_exact(&star_ena(&ena)?.embed())?;
            if !saturated.equivalent(&exact)? {
                return Ok(Some("saturating the system changed its traces".into()));
            }
            let one = Morphism::identity(MonadKind::Ena, alpha.alphabet().clone(), alpha.source().clone());
            let reflexive = trace_exact(&one.join(alpha)?)?;
            Ok(fail(reflexive.equivalent(&exact)?, || "adding silent self-loops changed traces".into()))
        }
    }
}
