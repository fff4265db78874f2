use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::worldset::WorldSet;
use crate::syntax::{is_identifier, Modality};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("world {0:?} declared twice")]
    DuplicateWorld(String),
    #[error("invalid world id {0:?}")]
    InvalidWorld(String),
    #[error("invalid name {0:?}")]
    InvalidName(String),
    #[error("unknown world {world:?} referenced in {context}")]
    UnknownWorld { world: String, context: String },
    #[error("atom {atom:?} in the valuation of {world:?} is not declared")]
    UnknownAtom { world: String, atom: String },
    #[error("relation given for undeclared modality {0:?}")]
    UnknownModality(String),
    #[error("preference is not a strict partial order: {0:?} is strictly preferred to itself")]
    PreferenceCycle(String),
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
}

/// On-disk model format. A preference pair `["a", "b"]` states that `a`
/// is strictly more preferred (more normal) than `b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    #[serde(default)]
    pub atoms: Vec<String>,
    #[serde(default)]
    pub modalities: Vec<String>,
    pub worlds: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default)]
    pub preference: Vec<[String; 2]>,
}

/// A finite preferential Kripke model: worlds, one accessibility relation
/// per modality, a valuation, and a strict partial order on worlds where
/// lower means more normal.
///
/// The preference is kept transitively closed, so `better(w)` is exactly
/// the set of worlds strictly preferred to `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferentialModel {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    atoms: BTreeSet<String>,
    modalities: BTreeSet<Modality>,
    successors: BTreeMap<Modality, Vec<WorldSet>>,
    truth: BTreeMap<String, WorldSet>,
    better: Vec<WorldSet>,
}

impl PreferentialModel {
    /// Builds a model from world-index data, closing the preference
    /// transitively and rejecting cycles.
    pub(crate) fn assemble(
        worlds: Vec<String>,
        atoms: BTreeSet<String>,
        modalities: BTreeSet<Modality>,
        edges: BTreeMap<Modality, Vec<(usize, usize)>>,
        truth: BTreeMap<String, WorldSet>,
        preference: &[(usize, usize)],
    ) -> Result<Self, ModelError> {
        let n = worlds.len();
        if n == 0 {
            return Err(ModelError::NoWorlds);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let mut successors = BTreeMap::new();
        for m in &modalities {
            let mut succ = vec![WorldSet::empty(n); n];
            for &(a, b) in edges.get(m).map(Vec::as_slice).unwrap_or_default() {
                succ[a].insert(b);
            }
            successors.insert(m.clone(), succ);
        }
        let better = close_preference(n, preference)
            .map_err(|w| ModelError::PreferenceCycle(worlds[w].clone()))?;
        Ok(PreferentialModel {
            worlds,
            index,
            atoms,
            modalities,
            successors,
            truth,
            better,
        })
    }

    /// Checks a parsed model file and closes its preference.
    pub fn from_raw(raw: &RawModel) -> Result<Self, ModelError> {
        if raw.worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        for w in &raw.worlds {
            if w.is_empty() {
                return Err(ModelError::InvalidWorld(w.clone()));
            }
        }
        let mut index = HashMap::new();
        for (i, w) in raw.worlds.iter().enumerate() {
            if index.insert(w.as_str(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let lookup = |w: &str, context: &str| {
            index
                .get(w)
                .copied()
                .ok_or_else(|| ModelError::UnknownWorld {
                    world: w.to_string(),
                    context: context.to_string(),
                })
        };

        let mut atoms = BTreeSet::new();
        for a in &raw.atoms {
            if !is_identifier(a) {
                return Err(ModelError::InvalidName(a.clone()));
            }
            atoms.insert(a.clone());
        }
        let mut modalities = BTreeSet::new();
        for m in &raw.modalities {
            modalities.insert(Modality::new(m.clone()).map_err(|e| ModelError::InvalidName(e.0))?);
        }

        let n = raw.worlds.len();
        let mut truth: BTreeMap<String, WorldSet> = atoms
            .iter()
            .map(|a| (a.clone(), WorldSet::empty(n)))
            .collect();
        for (w, true_atoms) in &raw.valuation {
            let wi = lookup(w, "valuation")?;
            for a in true_atoms {
                truth
                    .get_mut(a)
                    .ok_or_else(|| ModelError::UnknownAtom {
                        world: w.clone(),
                        atom: a.clone(),
                    })?
                    .insert(wi);
            }
        }

        let mut edges = BTreeMap::new();
        for (m, pairs) in &raw.relations {
            let modality = Modality::new(m.clone()).map_err(|e| ModelError::InvalidName(e.0))?;
            if !modalities.contains(&modality) {
                return Err(ModelError::UnknownModality(m.clone()));
            }
            let context = format!("relation {m}");
            let resolved = pairs
                .iter()
                .map(|[a, b]| Ok((lookup(a, &context)?, lookup(b, &context)?)))
                .collect::<Result<Vec<_>, ModelError>>()?;
            edges.insert(modality, resolved);
        }

        let preference = raw
            .preference
            .iter()
            .map(|[a, b]| Ok((lookup(a, "preference")?, lookup(b, "preference")?)))
            .collect::<Result<Vec<_>, ModelError>>()?;

        Self::assemble(
            raw.worlds.clone(),
            atoms,
            modalities,
            edges,
            truth,
            &preference,
        )
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let raw: RawModel = serde_json::from_str(text)?;
        Self::from_raw(&raw)
    }

    /// The model in file form, preference written transitively closed.
    pub fn to_raw(&self) -> RawModel {
        let name = |i: usize| self.worlds[i].clone();
        RawModel {
            atoms: self.atoms.iter().cloned().collect(),
            modalities: self
                .modalities
                .iter()
                .map(|m| m.as_str().to_string())
                .collect(),
            worlds: self.worlds.clone(),
            valuation: (0..self.worlds.len())
                .map(|w| (name(w), self.true_atoms(w)))
                .collect(),
            relations: self
                .successors
                .iter()
                .map(|(m, succ)| {
                    let pairs = succ
                        .iter()
                        .enumerate()
                        .flat_map(|(a, s)| s.iter().map(move |b| [name(a), name(b)]))
                        .collect();
                    (m.as_str().to_string(), pairs)
                })
                .collect(),
            preference: self
                .preference_pairs()
                .into_iter()
                .map(|(a, b)| [name(a), name(b)])
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("model serializes")
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }

    pub fn modalities(&self) -> &BTreeSet<Modality> {
        &self.modalities
    }

    pub fn all_worlds(&self) -> WorldSet {
        WorldSet::full(self.worlds.len())
    }

    /// `R_m(w)`; empty for modalities the model does not declare.
    pub fn successors(&self, m: &Modality, w: usize) -> WorldSet {
        self.successors
            .get(m)
            .map(|succ| succ[w].clone())
            .unwrap_or_else(|| WorldSet::empty(self.worlds.len()))
    }

    pub(crate) fn successor_table(&self, m: &Modality) -> Option<&[WorldSet]> {
        self.successors.get(m).map(Vec::as_slice)
    }

    /// Worlds where `atom` is true; empty for undeclared atoms.
    pub fn atom_extension(&self, atom: &str) -> WorldSet {
        self.truth
            .get(atom)
            .cloned()
            .unwrap_or_else(|| WorldSet::empty(self.worlds.len()))
    }

    pub fn true_atoms(&self, w: usize) -> Vec<String> {
        self.truth
            .iter()
            .filter(|(_, ws)| ws.contains(w))
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// Worlds strictly preferred to `w`.
    pub fn better(&self, w: usize) -> &WorldSet {
        &self.better[w]
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.better[b].contains(a)
    }

    /// All pairs `(a, b)` with `a` strictly preferred to `b`, closed.
    pub fn preference_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.worlds.len() {
            for a in self.better[b].iter() {
                out.push((a, b));
            }
        }
        out.sort_unstable();
        out
    }

    /// The same model with its preference replaced. Fails if the new
    /// relation has a cycle.
    pub fn with_preference(&self, pairs: &[(usize, usize)]) -> Result<Self, ModelError> {
        let better = close_preference(self.worlds.len(), pairs)
            .map_err(|w| ModelError::PreferenceCycle(self.worlds[w].clone()))?;
        Ok(PreferentialModel {
            better,
            ..self.clone()
        })
    }

    /// The same model with the truth value of `atom` flipped at `w`.
    pub fn with_atom_flipped(&self, w: usize, atom: &str) -> Self {
        let mut out = self.clone();
        out.atoms.insert(atom.to_string());
        let n = self.worlds.len();
        let ws = out
            .truth
            .entry(atom.to_string())
            .or_insert_with(|| WorldSet::empty(n));
        let flipped = WorldSet::from_indices(n, [w]);
        *ws = ws
            .union(&flipped)
            .intersection(&ws.intersection(&flipped).complement());
        out
    }
}

/// Transitive closure as `better[b] = {a | a < b}`. Returns the offending
/// world if the closure is not irreflexive.
fn close_preference(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<WorldSet>, usize> {
    let mut better = vec![WorldSet::empty(n); n];
    for &(a, b) in pairs {
        better[b].insert(a);
    }
    // Warshall: if k < b then everything below k is below b.
    for k in 0..n {
        let below_k = better[k].clone();
        for set in better.iter_mut() {
            if set.contains(k) {
                *set = set.union(&below_k);
            }
        }
    }
    match (0..n).find(|&w| better[w].contains(w)) {
        Some(w) => Err(w),
        None => Ok(better),
    }
}
