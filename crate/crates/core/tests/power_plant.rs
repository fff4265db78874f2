use std::path::PathBuf;
use std::time::Instant;

use dmt_core::engine::{Engine, EntailmentVerdict};
use dmt_core::{
    parse_formula, parse_statement, Formula, KnowledgeBase, PreferentialModel, Statement,
};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn f(text: &str) -> Formula {
    parse_formula(text).unwrap()
}

fn plant_model() -> PreferentialModel {
    PreferentialModel::from_json(&fixture("figure3.json")).unwrap()
}

#[test]
fn plant_model_is_totally_ordered() {
    let m = plant_model();
    assert_eq!(
        m.preference_pairs(),
        [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    );
}

#[test]
fn plant_model_global_claims() {
    let m = plant_model();
    for text in [
        "(p & ~c) <-> h",
        "~p -> [[f]]p",
        "c -> [[f]]~h",
        "h -> <<m>>true",
        "h -> <m>true",
        "<f>~h",
        "<<f>>~h",
    ] {
        assert!(m.globally_true(&f(text)), "{text}");
    }
}

#[test]
fn plant_model_local_claims() {
    let m = plant_model();
    assert!(m.holds_at("w1", &f("[[m]]false")).unwrap());
    assert!(!m.holds_at("w4", &f("[[m]]false")).unwrap());
    assert!(m.holds_at("w4", &f("h & <<f>>~h")).unwrap());
    assert_eq!(m.names(&m.extension(&f("[[m]]false"))), ["w1", "w2", "w3"]);
}

#[test]
fn plant_model_conditionals() {
    let m = plant_model();
    for text in ["h |~ <<m>>true", "true |~ p & c"] {
        let Statement::Conditional(c) = parse_statement(text).unwrap() else {
            unreachable!()
        };
        assert!(m.holds_conditional(&c), "{text}");
    }
    let Statement::Conditional(c) = parse_statement("true |~ h").unwrap() else {
        unreachable!()
    };
    assert!(!m.holds_conditional(&c));
}

#[test]
fn plant_model_satisfies_both_kb_readings() {
    let m = plant_model();
    for name in ["powerplant.kb", "powerplant_alt.kb"] {
        let kb = KnowledgeBase::parse(&fixture(name)).unwrap();
        assert_eq!(kb.formulas.len(), 5);
        assert!(m.satisfies_kb_globally(&kb.formulas), "{name}");
    }
}

#[test]
fn power_plant_entailments() {
    let engine = Engine::default();
    for name in ["powerplant.kb", "powerplant_alt.kb"] {
        let kb = KnowledgeBase::parse(&fixture(name)).unwrap();
        for text in [
            "p -> [[f]]~h",
            "[[m]]false -> (~p | c)",
            "(p | c) -> [[f]]~h",
        ] {
            let query = f(text);
            let start = Instant::now();
            let verdict = engine.global_entails(&kb, &query, 2).unwrap();
            let EntailmentVerdict::Entailed { depth } = verdict else {
                panic!("{name}: {text}: {verdict:?}");
            };
            assert!(depth <= 2);
            assert!(start.elapsed().as_secs() < 10);
        }
    }
}

#[test]
fn power_plant_non_entailment_is_certified() {
    let kb = KnowledgeBase::parse(&fixture("powerplant.kb")).unwrap();
    let query = f("p -> [f]~h");
    match Engine::default().global_entails(&kb, &query, 3).unwrap() {
        EntailmentVerdict::NotEntailed {
            countermodel,
            witness,
        } => {
            assert!(countermodel.satisfies_kb_globally(&kb.formulas));
            assert!(!countermodel.holds_at(&witness, &query).unwrap());
        }
        other => panic!("{other:?}"),
    }
}
