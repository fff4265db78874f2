#![allow(dead_code)]

use std::collections::BTreeMap;

use dmt_core::semantics::RawModel;
use dmt_core::{Formula, PreferentialModel};
use rand::seq::SliceRandom;
use rand::Rng;

pub const ATOMS: [&str; 2] = ["p", "q"];
pub const MODALITIES: [&str; 2] = ["a", "b"];

/// A random formula over the full syntax with at most `budget` nodes.
pub fn formula<R: Rng>(rng: &mut R, budget: usize) -> Formula {
    formula_over(rng, budget, &ATOMS, &MODALITIES)
}

pub fn formula_over<R: Rng>(
    rng: &mut R,
    budget: usize,
    atoms: &[&str],
    modalities: &[&str],
) -> Formula {
    let again = |rng: &mut R, budget| formula_over(rng, budget, atoms, modalities);
    if budget <= 1 {
        return match rng.random_range(0..6) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => Formula::atom(atoms[rng.random_range(0..atoms.len())]),
        };
    }
    let m = modalities[rng.random_range(0..modalities.len())];
    match rng.random_range(0..10) {
        0 => Formula::atom(atoms[rng.random_range(0..atoms.len())]),
        1 => Formula::not(again(rng, budget - 1)),
        2 => Formula::boxed(m, again(rng, budget - 1)),
        3 => Formula::dia(m, again(rng, budget - 1)),
        4 => Formula::def_box(m, again(rng, budget - 1)),
        5 => Formula::def_dia(m, again(rng, budget - 1)),
        k => {
            let (a, b) = split(rng, budget - 1);
            let (a, b) = (again(rng, a), again(rng, b));
            match k {
                6 => Formula::and(a, b),
                7 => Formula::or(a, b),
                8 => Formula::implies(a, b),
                _ => Formula::iff(a, b),
            }
        }
    }
}

/// A random modality-free formula with at most `budget` nodes.
pub fn classical<R: Rng>(rng: &mut R, budget: usize) -> Formula {
    if budget <= 1 || rng.random_bool(0.2) {
        return Formula::atom(ATOMS[rng.random_range(0..ATOMS.len())]);
    }
    match rng.random_range(0..5) {
        0 => Formula::not(classical(rng, budget - 1)),
        k => {
            let (a, b) = split(rng, budget - 1);
            let (a, b) = (classical(rng, a), classical(rng, b));
            match k {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                3 => Formula::implies(a, b),
                _ => Formula::iff(a, b),
            }
        }
    }
}

fn split<R: Rng>(rng: &mut R, total: usize) -> (usize, usize) {
    if total < 2 {
        return (1, 1);
    }
    let left = rng.random_range(1..total);
    (left, total - left)
}

/// A random model with 1 to `max_worlds` worlds over [`ATOMS`] and
/// [`MODALITIES`].
pub fn model<R: Rng>(rng: &mut R, max_worlds: usize) -> PreferentialModel {
    let n = rng.random_range(1..=max_worlds);
    let worlds: Vec<String> = (1..=n).map(|k| format!("w{k}")).collect();
    let valuation: BTreeMap<String, Vec<String>> = worlds
        .iter()
        .map(|w| {
            let atoms = ATOMS
                .iter()
                .filter(|_| rng.random_bool(0.5))
                .map(|a| a.to_string())
                .collect();
            (w.clone(), atoms)
        })
        .collect();
    let mut relations = BTreeMap::new();
    for m in MODALITIES {
        let mut edges = vec![];
        for u in &worlds {
            for v in &worlds {
                if rng.random_bool(0.4) {
                    edges.push([u.clone(), v.clone()]);
                }
            }
        }
        relations.insert(m.to_string(), edges);
    }
    PreferentialModel::from_raw(&RawModel {
        atoms: ATOMS.iter().map(|a| a.to_string()).collect(),
        modalities: MODALITIES.iter().map(|m| m.to_string()).collect(),
        worlds: worlds.clone(),
        valuation,
        relations,
        preference: preference(rng, &worlds),
    })
    .expect("generated model is well formed")
}

/// Random strict partial order: a subset of a random linear order.
pub fn preference<R: Rng>(rng: &mut R, worlds: &[String]) -> Vec<[String; 2]> {
    let mut order = worlds.to_vec();
    order.shuffle(rng);
    let mut pairs = vec![];
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if rng.random_bool(0.5) {
                pairs.push([order[i].clone(), order[j].clone()]);
            }
        }
    }
    pairs
}

/// Every core formula over atom `p` and modality `a` with at most
/// `max_size` nodes.
pub fn core_corpus(max_size: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![vec![], vec![Formula::atom("p"), Formula::Bottom]];
    for n in 2..=max_size {
        let mut out = vec![];
        for sub in &by_size[n - 1] {
            out.push(Formula::not(sub.clone()));
            out.push(Formula::boxed("a", sub.clone()));
            out.push(Formula::def_box("a", sub.clone()));
        }
        for left in 1..n - 1 {
            for a in &by_size[left] {
                for b in &by_size[n - 1 - left] {
                    out.push(Formula::and(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(out);
    }
    by_size.concat()
}
