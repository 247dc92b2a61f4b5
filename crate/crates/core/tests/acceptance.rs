//! Acceptance criteria, one test per criterion. Each prints a single
//! `PASS`/`FAIL` line with its elapsed time and asserts the time budget.

use std::sync::Arc;
use std::time::{Duration, Instant};

use kleisli_core::equivalence::{milner_oracle, weak_bisimilarity_star};
use kleisli_core::harness::{random_ena, random_lts, run_suite, GenConfig, Prng, Suite};
use kleisli_core::io::{read_aut_in, read_json, trace_table_value, write_aut, write_json};
use kleisli_core::kernel::{Alphabet, EnaSurface, StateSpace, Word};
use kleisli_core::reglang::RegLang;
use kleisli_core::trace::{check_fixed_point, trace_exact, trace_iterate, TraceMap};

fn report(criterion: u32, title: &str, ok: bool, elapsed: Duration, budget: Duration, detail: &str) {
    let within = elapsed <= budget;
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    println!("criterion {criterion} [{verdict}] {title}: {detail} ({:.2?} of {:.0?})", elapsed, budget);
    assert!(ok, "criterion {criterion} failed: {detail}");
    assert!(within, "criterion {criterion} exceeded its time budget: {elapsed:?} > {budget:?}");
}

fn run_suites(suites: &[Suite], cfg: &GenConfig) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &s in suites {
        let r = run_suite(s, cfg).expect("valid config");
        ok &= r.passed();
        parts.push(format!("{s} {}/{} failed", r.failures.len(), r.cases));
        if !r.passed() {
            eprint!("{}", r.to_text());
        }
    }
    (ok, parts.join(", "))
}

const EXAMPLE: &str = r#"{
  "kind": "ena",
  "states": ["x", "y", "z"],
  "alphabet": ["a", "b"],
  "silent": "eps",
  "transitions": [
    {"from": "x", "label": "eps", "to": "y"},
    {"from": "y", "label": "a", "to": "y"},
    {"from": "y", "label": "b", "to": "z"},
    {"from": "z", "label": "eps", "to": "x"}
  ],
  "final": ["z"]
}"#;

#[test]
fn criterion_1_golden_trace_table() {
    let start = Instant::now();
    let alpha = read_json(EXAMPLE.as_bytes()).unwrap().system;
    let expected = [
        r#"{"x":[],"y":[],"z":["ε"]}"#,
        r#"{"x":[],"y":["b"],"z":["ε"]}"#,
        r#"{"x":["b"],"y":["ab","b"],"z":["ε"]}"#,
        r#"{"x":["ab","b"],"y":["aab","ab","b"],"z":["b","ε"]}"#,
    ];
    let mut ok = true;
    for (i, want) in expected.iter().enumerate() {
        let got = trace_table_value(&trace_iterate(&alpha, i + 1).unwrap()).unwrap().to_string();
        if got != *want {
            eprintln!("tr{}: got {got}, want {want}", i + 1);
            ok = false;
        }
    }
    report(1, "golden trace table", ok, start.elapsed(), Duration::from_secs(1), "tr1..tr4 byte-identical");
}

#[test]
fn criterion_2_non_least_fixed_point() {
    let start = Instant::now();
    let sigma = Arc::new(Alphabet::new(["a"], "eps").unwrap());
    let space = Arc::new(StateSpace::new(["x"]).unwrap());
    let alpha = EnaSurface::from_names(sigma.clone(), space.clone(), &[("x", "eps", "x")], &[]).unwrap().embed();
    let exact = trace_exact(&alpha).unwrap();
    let g = TraceMap::from_languages(space, vec![RegLang::from_words(sigma, [&Word::letter(0)])]).unwrap();
    let ok = exact.lang(0).is_empty() && check_fixed_point(&alpha, &g).unwrap() && exact.leq(&g).unwrap();
    report(2, "non-least fixed point", ok, start.elapsed(), Duration::from_secs(1), "tr(x) = ∅, g = g·α, tr ≤ g");
}

fn cfg(seed: u64, cases: usize, max_states: usize, alphabet_size: usize) -> GenConfig {
    GenConfig { seed, cases, max_states, alphabet_size, ..GenConfig::default() }
}

#[test]
fn criterion_3_h_compatibility() {
    let start = Instant::now();
    let (ok, detail) = run_suites(&[Suite::HCompat], &cfg(42, 500, 8, 3));
    report(3, "h-compatibility", ok, start.elapsed(), Duration::from_secs(60), &detail);
}

#[test]
fn criterion_4_weak_bisimulation_coincidence() {
    let start = Instant::now();
    let (ok, detail) = run_suites(&[Suite::WeakCoincide], &cfg(42, 500, 8, 3));
    report(4, "star/free weak bisimilarity coincide", ok, start.elapsed(), Duration::from_secs(120), &detail);
}

#[test]
fn criterion_5_milner_oracle() {
    let start = Instant::now();
    let c = cfg(5, 300, 7, 3);
    let mut failures = 0;
    for case in 0..c.cases {
        let alpha = random_lts(&mut Prng::for_case(c.seed, case), &c);
        if weak_bisimilarity_star(&alpha).unwrap() != milner_oracle(&alpha).unwrap() {
            failures += 1;
        }
    }
    let detail = format!("{failures}/{} failed", c.cases);
    report(5, "relational oracle agrees", failures == 0, start.elapsed(), Duration::from_secs(60), &detail);
}

#[test]
fn criterion_6_saturator_axioms_and_monad_laws() {
    let budget = Duration::from_secs(60);
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let mut detail = Vec::new();
    for suite in [Suite::SaturationAxioms, Suite::MonadLaws] {
        let start = Instant::now();
        let (pass, d) = run_suites(&[suite], &cfg(6, 500, 6, 3));
        let elapsed = start.elapsed();
        ok &= pass;
        slowest = slowest.max(elapsed);
        detail.push(format!("{d} in {elapsed:.2?}"));
    }
    report(6, "saturator axioms and monad laws (slowest suite)", ok, slowest, budget, &detail.join("; "));
}

#[test]
fn criterion_7_trace_laws() {
    let start = Instant::now();
    let (a, d1) = run_suites(&[Suite::TraceLfp, Suite::TraceUniformity], &cfg(7, 500, 8, 3));
    let (b, d2) = run_suites(&[Suite::Dagger], &cfg(7, 300, 8, 3));
    report(7, "trace laws", a && b, start.elapsed(), Duration::from_secs(120), &format!("{d1}, {d2}"));
}

#[test]
fn criterion_8_weak_bisimilarity_implies_trace_equivalence() {
    let start = Instant::now();
    let (ok, detail) = run_suites(&[Suite::StrongImpliesWeak, Suite::WeakImpliesTrace], &cfg(8, 500, 8, 3));
    report(8, "strong ⊆ weak ⊆ trace equivalence", ok, start.elapsed(), Duration::from_secs(120), &detail);
}

#[test]
fn criterion_9_format_round_trips() {
    let start = Instant::now();
    let c = cfg(9, 500, 8, 3);
    let mut failures = 0;
    for case in 0..c.cases {
        let mut rng = Prng::for_case(c.seed, case);
        let lts = random_lts(&mut rng, &c);
        let ena = random_ena(&mut rng, &c).embed();
        for system in [&lts, &ena] {
            let back = read_json(write_json(system, Some(0)).as_bytes()).unwrap();
            if back.system != *system || back.initial != Some(0) {
                failures += 1;
            }
        }
        let aut = write_aut(&lts, Some(0)).unwrap();
        let back = read_aut_in(aut.as_bytes(), lts.alphabet()).unwrap();
        if back.system != lts || write_aut(&back.system, back.initial).unwrap() != aut {
            failures += 1;
        }
    }
    let detail = format!("{failures}/{} failed", 3 * c.cases);
    report(9, "JSON and .aut round trips", failures == 0, start.elapsed(), Duration::from_secs(10), &detail);
}
