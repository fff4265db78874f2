//! Exhaustive enumeration of small preferential models, used as a
//! brute-force oracle for the tableau.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::model::PreferentialModel;
use super::worldset::WorldSet;
use crate::syntax::{Formula, Modality};

/// Default bound on worlds per enumerated model.
pub const DEFAULT_WORLD_CAP: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("at least one world is required")]
    NoWorlds,
    #[error("{requested} worlds exceeds the enumeration cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("signature too large to enumerate: {0} bits per model")]
    TooLarge(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSignature {
    pub atoms: Vec<String>,
    pub modalities: Vec<Modality>,
    pub max_worlds: usize,
}

impl ModelSignature {
    pub fn new(atoms: &[&str], modalities: &[&str], max_worlds: usize) -> Self {
        ModelSignature {
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            modalities: modalities
                .iter()
                .map(|m| crate::syntax::modality(m))
                .collect(),
            max_worlds,
        }
    }

    /// The atoms and modalities occurring in `formulas`.
    pub fn covering<'a>(
        formulas: impl IntoIterator<Item = &'a Formula>,
        max_worlds: usize,
    ) -> Self {
        let mut atoms = BTreeSet::new();
        let mut modalities = BTreeSet::new();
        for f in formulas {
            atoms.extend(f.atoms());
            modalities.extend(f.modalities());
        }
        ModelSignature {
            atoms: atoms.into_iter().collect(),
            modalities: modalities.into_iter().collect(),
            max_worlds,
        }
    }
}

/// All strict partial orders on `n` elements, as pair lists. Generated by
/// filtering irreflexive antisymmetric relations for transitivity.
pub fn strict_partial_orders(n: usize) -> Vec<Vec<(usize, usize)>> {
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let rel: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let has = |a, b| rel.contains(&(a, b));
        let antisymmetric = rel.iter().all(|&(a, b)| !has(b, a));
        let transitive = rel.iter().all(|&(a, b)| {
            rel.iter()
                .filter(|&&(c, _)| c == b)
                .all(|&(_, d)| has(a, d))
        });
        if antisymmetric && transitive {
            out.push(rel);
        }
    }
    out
}

/// Streams every model of the signature with 1 to `max_worlds` worlds in a
/// fixed order: world count, then preference, then relations, then
/// valuation.
pub struct ModelEnumerator {
    sig: ModelSignature,
    worlds: usize,
    orders: Vec<Vec<(usize, usize)>>,
    order: usize,
    relation_bits: u32,
    relation: u64,
    valuation_bits: u32,
    valuation: u64,
    done: bool,
}

impl ModelEnumerator {
    pub fn new(sig: &ModelSignature) -> Result<Self, EnumerationError> {
        Self::with_cap(sig, DEFAULT_WORLD_CAP)
    }

    pub fn with_cap(sig: &ModelSignature, cap: usize) -> Result<Self, EnumerationError> {
        if sig.max_worlds == 0 {
            return Err(EnumerationError::NoWorlds);
        }
        if sig.max_worlds > cap {
            return Err(EnumerationError::CapExceeded {
                requested: sig.max_worlds,
                cap,
            });
        }
        let n = sig.max_worlds as u32;
        let bits = n * n * sig.modalities.len() as u32 + n * sig.atoms.len() as u32;
        if bits > 62 || n * (n - 1) > 62 {
            return Err(EnumerationError::TooLarge(bits));
        }
        let mut e = ModelEnumerator {
            sig: sig.clone(),
            worlds: 0,
            orders: vec![],
            order: 0,
            relation_bits: 0,
            relation: 0,
            valuation_bits: 0,
            valuation: 0,
            done: false,
        };
        e.start_world_count(1);
        Ok(e)
    }

    fn start_world_count(&mut self, n: usize) {
        self.worlds = n;
        self.orders = strict_partial_orders(n);
        self.order = 0;
        self.relation_bits = (n * n * self.sig.modalities.len()) as u32;
        self.relation = 0;
        self.valuation_bits = (n * self.sig.atoms.len()) as u32;
        self.valuation = 0;
    }

    /// Total number of models the enumerator yields.
    pub fn count(sig: &ModelSignature) -> u128 {
        (1..=sig.max_worlds)
            .map(|n| {
                let bits = n * n * sig.modalities.len() + n * sig.atoms.len();
                strict_partial_orders(n).len() as u128 * (1u128 << bits)
            })
            .sum()
    }

    fn build(&self) -> PreferentialModel {
        let n = self.worlds;
        let worlds: Vec<String> = (1..=n).map(|i| format!("w{i}")).collect();
        let mut edges = BTreeMap::new();
        for (k, m) in self.sig.modalities.iter().enumerate() {
            let base = k * n * n;
            let pairs = (0..n * n)
                .filter(|slot| self.relation >> (base + slot) & 1 == 1)
                .map(|slot| (slot / n, slot % n))
                .collect();
            edges.insert(m.clone(), pairs);
        }
        let mut truth = BTreeMap::new();
        for (k, a) in self.sig.atoms.iter().enumerate() {
            let ws = WorldSet::from_indices(
                n,
                (0..n).filter(|w| self.valuation >> (k * n + w) & 1 == 1),
            );
            truth.insert(a.clone(), ws);
        }
        PreferentialModel::assemble(
            worlds,
            self.sig.atoms.iter().cloned().collect(),
            self.sig.modalities.iter().cloned().collect(),
            edges,
            truth,
            &self.orders[self.order],
        )
        .expect("enumerated preference is a strict partial order")
    }

    fn advance(&mut self) {
        self.valuation += 1;
        if self.valuation < 1 << self.valuation_bits {
            return;
        }
        self.valuation = 0;
        self.relation += 1;
        if self.relation < 1 << self.relation_bits {
            return;
        }
        self.relation = 0;
        self.order += 1;
        if self.order < self.orders.len() {
            return;
        }
        if self.worlds < self.sig.max_worlds {
            self.start_world_count(self.worlds + 1);
        } else {
            self.done = true;
        }
    }
}

impl Iterator for ModelEnumerator {
    type Item = PreferentialModel;

    fn next(&mut self) -> Option<PreferentialModel> {
        if self.done {
            return None;
        }
        let m = self.build();
        self.advance();
        Some(m)
    }
}

pub fn enumerate_models(sig: &ModelSignature) -> Result<ModelEnumerator, EnumerationError> {
    ModelEnumerator::new(sig)
}

/// First enumerated model and world satisfying `f`. `None` only means no
/// model exists within the signature's bounds.
pub fn brute_force_satisfiable(
    f: &Formula,
    sig: &ModelSignature,
) -> Result<Option<(PreferentialModel, String)>, EnumerationError> {
    Ok(brute_force_satisfiable_many(std::slice::from_ref(f), sig)?
        .pop()
        .flatten())
}

/// [`brute_force_satisfiable`] for several formulas in one pass over the
/// models.
pub fn brute_force_satisfiable_many(
    formulas: &[Formula],
    sig: &ModelSignature,
) -> Result<Vec<Option<(PreferentialModel, String)>>, EnumerationError> {
    let mut found: Vec<Option<(PreferentialModel, String)>> = vec![None; formulas.len()];
    let mut pending = formulas.len();
    for m in enumerate_models(sig)? {
        if pending == 0 {
            break;
        }
        for (f, slot) in formulas.iter().zip(found.iter_mut()) {
            if slot.is_some() {
                continue;
            }
            if let Some(w) = m.extension(f).iter().next() {
                *slot = Some((m.clone(), m.world_name(w).to_string()));
                pending -= 1;
            }
        }
    }
    Ok(found)
}
