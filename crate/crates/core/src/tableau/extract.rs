use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::branch::{Branch, Label};
use super::table::Node;
use crate::semantics::{PreferentialModel, WorldSet};

/// Reads a preferential model off an open saturated branch: one world per
/// label, relations from the skeleton, an atom true exactly where it is
/// labelled, and the label preference as the order.
///
/// Labels carrying no formula (the minimal companion created when a
/// diamond witness is not itself most normal) are kept as worlds; dropping
/// them would leave the witness with no preferred sibling.
pub fn extract_model(b: &Branch) -> PreferentialModel {
    let table = b.table();
    let labels: Vec<Label> = b.labels().into_iter().collect();
    let index: HashMap<Label, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let n = labels.len();

    let mut truth: BTreeMap<String, WorldSet> = table
        .atoms()
        .iter()
        .map(|a| (a.clone(), WorldSet::empty(n)))
        .collect();
    for (label, f) in b.fact_ids() {
        if let Node::Atom(k) = table.node(f) {
            truth
                .get_mut(table.atom_name(k))
                .expect("atom interned")
                .insert(index[&label]);
        }
    }

    let edges = b
        .skeleton()
        .into_iter()
        .map(|(m, pairs)| {
            let pairs = pairs
                .into_iter()
                .map(|(a, c)| (index[&a], index[&c]))
                .collect();
            (m, pairs)
        })
        .collect();
    let preference: Vec<(usize, usize)> = b
        .preference()
        .iter()
        .map(|(a, c)| (index[a], index[c]))
        .collect();

    PreferentialModel::assemble(
        labels.iter().map(|l| l.world_name()).collect(),
        table.atoms().iter().cloned().collect(),
        table.modalities().iter().cloned().collect::<BTreeSet<_>>(),
        edges,
        truth,
        &preference,
    )
    .expect("branch preference is a strict partial order")
}

/// Checks that every labelled formula on the branch holds at its label's
/// world in `m`.
pub fn verify_branch_model(b: &Branch, m: &PreferentialModel) -> bool {
    let table = b.table();
    let mut extensions: HashMap<u32, WorldSet> = HashMap::new();
    b.fact_ids().all(|(label, f)| {
        let Some(w) = m.world_index(&label.world_name()) else {
            return false;
        };
        extensions
            .entry(f)
            .or_insert_with(|| m.extension(table.formula(f)))
            .contains(w)
    })
}
