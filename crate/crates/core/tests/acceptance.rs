//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dmt_core::engine::{kb_to_conditionals, Engine, EntailmentVerdict, KnowledgeBase};
use dmt_core::semantics::{brute_force_satisfiable_many, enumerate_models, ModelSignature};
use dmt_core::syntax::{parse_formula, render_formula};
use dmt_core::tableau::{verify_branch_model, Verdict};
use dmt_core::{Formula, PreferentialModel, Prover};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_0001;
const VALIDITY_LIMIT: Duration = Duration::from_secs(1);
const FIXTURE_LIMIT: Duration = Duration::from_millis(100);
const ENTAILMENT_LIMIT: Duration = Duration::from_secs(10);
const ENTAILMENT_MAX_DEPTH: usize = 2;
const CORPUS_MAX_SIZE: usize = 6;
const ORACLE_WORLDS: usize = 3;
const CORPUS_LIMIT: Duration = Duration::from_secs(300);
const CONDITIONAL_PAIRS: usize = 200;
const CONDITIONAL_MAX_WORLDS: usize = 4;
const CONDITIONAL_MAX_SIZE: usize = 8;
const REORDER_FORMULAS: usize = 200;
const REORDER_MODELS: usize = 200;
const REORDER_REORDERS: usize = 3;
const BRIDGE_KBS: usize = 50;
const ROUND_TRIPS: u32 = 1_000;

type Outcome = Result<String, String>;

/// Resource or invariant errors met while running criteria 1 to 4.
#[derive(Default)]
struct Violations(Vec<String>);

impl Violations {
    fn decide(&mut self, prover: &Prover, f: &Formula) -> Option<Verdict> {
        match prover.decide(f) {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.push(format!("{f}: {e}"));
                None
            }
        }
    }
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(path).expect("fixture readable")
}

fn f(text: &str) -> Formula {
    parse_formula(text).expect("well-formed")
}

fn validity_suite(v: &mut Violations) -> Outcome {
    let prover = Prover::default();
    let valid = [
        "[[a]]p <-> ~<<a>>~p",
        "[[a]](p -> q) -> ([[a]]p -> [[a]]q)",
        "[[a]](p & q) -> [[a]]p & [[a]]q",
        "[[a]]p & [[a]]q -> [[a]](p & q)",
        "[[a]]false <-> [a]false",
        "<<a>>true <-> <a>true",
        "[[a]]true <-> true",
        "<<a>>false <-> false",
        "[a]p -> [[a]]p",
        "<<a>>p -> <a>p",
        "[[a]]p | [[a]]q -> [[a]](p | q)",
    ];
    for text in valid {
        let start = Instant::now();
        let Some(verdict) = v.decide(&prover, &Formula::not(f(text))) else {
            return Err(format!("{text}: error"));
        };
        if !verdict.is_closed() {
            return Err(format!("{text}: not valid"));
        }
        if start.elapsed() >= VALIDITY_LIMIT {
            return Err(format!("{text}: {:?}", start.elapsed()));
        }
    }
    let invalid = [
        "[[a]](p | q) -> [[a]]p | [[a]]q",
        "[[a]](p -> q) -> ([a]p -> [a]q)",
    ];
    for text in invalid {
        let start = Instant::now();
        let formula = f(text);
        let Some(verdict) = v.decide(&prover, &Formula::not(formula.clone())) else {
            return Err(format!("{text}: error"));
        };
        let Verdict::Open(open) = verdict else {
            return Err(format!("{text}: closed"));
        };
        if !verify_branch_model(&open.branch, &open.model) {
            return Err(format!("{text}: model fails its branch"));
        }
        if !matches!(open.model.holds_at(&open.root_world(), &formula), Ok(false)) {
            return Err(format!("{text}: root does not falsify"));
        }
        if start.elapsed() >= VALIDITY_LIMIT {
            return Err(format!("{text}: {:?}", start.elapsed()));
        }
    }
    Ok(format!(
        "{} valid, {} invalid with countermodels",
        valid.len(),
        invalid.len()
    ))
}

fn plant_model_checks() -> Outcome {
    let start = Instant::now();
    let m = PreferentialModel::from_json(&fixture("figure3.json")).map_err(|e| e.to_string())?;
    let global = [
        "(p & ~c) <-> h",
        "~p -> [[f]]p",
        "c -> [[f]]~h",
        "h -> <<m>>true",
        "<f>~h",
    ];
    for text in global {
        if !m.globally_true(&f(text)) {
            return Err(format!("{text} not globally true"));
        }
    }
    let local = [
        ("w1", "[[m]]false", true),
        ("w4", "[[m]]false", false),
        ("w4", "h & <<f>>~h", true),
    ];
    for (w, text, expected) in local {
        if !matches!(m.holds_at(w, &f(text)), Ok(b) if b == expected) {
            return Err(format!("{text} at {w} is not {expected}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= FIXTURE_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("7 checks in {elapsed:?}"))
}

fn entailments(v: &mut Violations) -> Outcome {
    let kb = KnowledgeBase::parse(&fixture("powerplant.kb")).map_err(|e| e.to_string())?;
    let engine = Engine::default();
    let mut depths = vec![];
    for text in [
        "p -> [[f]]~h",
        "[[m]]false -> (~p | c)",
        "(p | c) -> [[f]]~h",
    ] {
        let start = Instant::now();
        match engine.global_entails(&kb, &f(text), ENTAILMENT_MAX_DEPTH) {
            Ok(EntailmentVerdict::Entailed { depth }) => depths.push(depth),
            Ok(other) => return Err(format!("{text}: {other:?}")),
            Err(e) => {
                v.0.push(format!("{text}: {e}"));
                return Err(format!("{text}: {e}"));
            }
        }
        if start.elapsed() >= ENTAILMENT_LIMIT {
            return Err(format!("{text}: {:?}", start.elapsed()));
        }
    }
    Ok(format!("entailed at depths {depths:?}"))
}

fn oracle_equivalence(v: &mut Violations) -> Outcome {
    let start = Instant::now();
    let prover = Prover::default();
    let corpus = common::core_corpus(CORPUS_MAX_SIZE);
    let mut closed = vec![];
    for formula in &corpus {
        let Some(verdict) = v.decide(&prover, formula) else {
            return Err(format!("{formula}: error"));
        };
        match verdict {
            Verdict::Closed(_) => closed.push(formula.clone()),
            Verdict::Open(open) => {
                if !verify_branch_model(&open.branch, &open.model) {
                    return Err(format!("{formula}: model fails its branch"));
                }
                if !matches!(open.model.holds_at(&open.root_world(), formula), Ok(true)) {
                    return Err(format!("{formula}: root does not satisfy"));
                }
            }
        }
    }
    let sig = ModelSignature::new(&["p"], &["a"], ORACLE_WORLDS);
    let found = brute_force_satisfiable_many(&closed, &sig).map_err(|e| e.to_string())?;
    if let Some((formula, _)) = closed.iter().zip(&found).find(|(_, m)| m.is_some()) {
        return Err(format!("{formula}: closed but the oracle finds a model"));
    }
    let elapsed = start.elapsed();
    if elapsed >= CORPUS_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{} formulas, {} closed, 0 discrepancies in {elapsed:.1?}",
        corpus.len(),
        closed.len()
    ))
}

fn global_truth_as_conditional(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..CONDITIONAL_PAIRS {
        let m = common::model(rng, CONDITIONAL_MAX_WORLDS);
        let size = rng.random_range(1..=CONDITIONAL_MAX_SIZE);
        let formula = common::formula(rng, size);
        let c = dmt_core::Conditional::new(Formula::not(formula.clone()), Formula::Bottom);
        if m.globally_true(&formula) != m.holds_conditional(&c) {
            return Err(format!("{formula} on {}", m.to_json()));
        }
    }
    Ok(format!("{CONDITIONAL_PAIRS} pairs"))
}

fn classical_invariance(rng: &mut ChaCha8Rng) -> Outcome {
    let formulas: Vec<Formula> = (0..REORDER_FORMULAS)
        .map(|_| common::classical(rng, 8))
        .collect();
    for _ in 0..REORDER_MODELS {
        let m = common::model(rng, 4);
        let base: Vec<_> = formulas.iter().map(|f| m.extension(f)).collect();
        for _ in 0..REORDER_REORDERS {
            let pairs: Vec<(usize, usize)> = common::preference(rng, m.worlds())
                .iter()
                .map(|[a, b]| (m.world_index(a).unwrap(), m.world_index(b).unwrap()))
                .collect();
            let other = m.with_preference(&pairs).map_err(|e| e.to_string())?;
            if let Some((k, _)) = formulas
                .iter()
                .enumerate()
                .find(|(k, f)| other.extension(f) != base[*k])
            {
                return Err(format!("{} changes extension", formulas[k]));
            }
        }
    }
    Ok(format!(
        "{REORDER_FORMULAS} formulas x {REORDER_MODELS} models x {REORDER_REORDERS} orders"
    ))
}

fn bridge(rng: &mut ChaCha8Rng) -> Outcome {
    let sig = ModelSignature::new(&["p"], &["a"], 2);
    let models: Vec<PreferentialModel> =
        enumerate_models(&sig).map_err(|e| e.to_string())?.collect();
    for _ in 0..BRIDGE_KBS {
        let size = rng.random_range(1..=3);
        let kb = KnowledgeBase::new(
            (0..size)
                .map(|_| common::formula_over(rng, 5, &["p"], &["a"]))
                .collect(),
        );
        let conditionals = kb_to_conditionals(&kb);
        for m in &models {
            if m.satisfies_kb_globally(&kb.formulas)
                != conditionals.iter().all(|c| m.holds_conditional(c))
            {
                return Err(format!("{:?} on {}", kb.formulas, m.to_json()));
            }
        }
    }
    Ok(format!("{BRIDGE_KBS} kbs over {} models", models.len()))
}

fn round_trip() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: ROUND_TRIPS,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = common_strategy();
    for _ in 0..ROUND_TRIPS {
        let tree = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?;
        let formula = tree.current();
        let text = render_formula(&formula);
        match parse_formula(&text) {
            Ok(back) if back == formula => {}
            Ok(back) => return Err(format!("{text} parsed as {back:?}")),
            Err(e) => return Err(format!("{text}: {e}")),
        }
    }
    Ok(format!("{ROUND_TRIPS} formulas"))
}

fn common_strategy() -> impl Strategy<Value = Formula> {
    use proptest::prelude::*;
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bottom),
        "[a-z][a-z0-9_]{0,3}"
            .prop_filter("keyword", |s| s != "true" && s != "false")
            .prop_map(|s| Formula::atom(&s)),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        let m = prop_oneof![Just("a"), Just("f"), Just("m_1")];
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (m.clone(), inner.clone()).prop_map(|(m, a)| Formula::boxed(m, a)),
            (m.clone(), inner.clone()).prop_map(|(m, a)| Formula::dia(m, a)),
            (m.clone(), inner.clone()).prop_map(|(m, a)| Formula::def_box(m, a)),
            (m, inner).prop_map(|(m, a)| Formula::def_dia(m, a)),
        ]
    })
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = Violations::default();
    let results: Vec<(&str, Outcome)> = vec![
        ("validity suite", validity_suite(&mut violations)),
        ("power plant model", plant_model_checks()),
        ("power plant entailments", entailments(&mut violations)),
        ("tableau vs oracle", oracle_equivalence(&mut violations)),
        (
            "global truth vs conditional",
            global_truth_as_conditional(&mut rng),
        ),
        (
            "classical formulas ignore preference",
            classical_invariance(&mut rng),
        ),
        ("kb vs conditional translation", bridge(&mut rng)),
        ("parser round trip", round_trip()),
        ("assertions and limits", {
            let resource = violations
                .0
                .iter()
                .filter(|e| e.contains("resource limit"))
                .count();
            if violations.0.is_empty() {
                Ok("no invariant violations or resource errors in criteria 1-4".into())
            } else {
                Err(format!(
                    "{} errors ({resource} resource): {}",
                    violations.0.len(),
                    violations.0[0]
                ))
            }
        }),
    ];
    let mut failed = 0;
    for (k, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
