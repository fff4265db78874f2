//! Shared inputs for the benchmarks.

use dmt_core::{parse_formula, Formula};

/// Valid formulas whose negations the tableau must close.
pub const VALIDITIES: &[&str] = &[
    "[[a]]p <-> ~<<a>>~p",
    "[[a]](p -> q) -> ([[a]]p -> [[a]]q)",
    "[[a]](p & q) <-> [[a]]p & [[a]]q",
    "[a]p -> [[a]]p",
    "<<a>>p -> <a>p",
    "[[a]]p | [[a]]q -> [[a]](p | q)",
];

/// Invalid formulas with open tableaux for their negations.
pub const NON_VALIDITIES: &[&str] = &[
    "[[a]](p | q) -> [[a]]p | [[a]]q",
    "[[a]](p -> q) -> ([a]p -> [a]q)",
];

pub fn parse_all(texts: &[&str]) -> Vec<Formula> {
    texts
        .iter()
        .map(|t| parse_formula(t).expect("benchmark formula parses"))
        .collect()
}

/// `[a](... & <a>q) -> [[a]](... & <a>q)` nested `depth` times; valid at
/// every depth.
pub fn nested_defeasibility(depth: usize) -> Formula {
    let mut strict = Formula::atom("p");
    let mut defeasible = Formula::atom("p");
    for _ in 0..depth {
        strict = Formula::boxed(
            "a",
            Formula::and(strict, Formula::dia("a", Formula::atom("q"))),
        );
        defeasible = Formula::def_box(
            "a",
            Formula::and(defeasible, Formula::dia("a", Formula::atom("q"))),
        );
    }
    Formula::implies(strict, defeasible)
}
