use std::collections::HashMap;

use crate::syntax::{Formula, Modality};

pub type FormulaId = u32;
pub type ModalityId = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Atom(u32),
    Bottom,
    Not(FormulaId),
    And(FormulaId, FormulaId),
    Box(ModalityId, FormulaId),
    DefBox(ModalityId, FormulaId),
}

/// Hash-consed closure of a core formula: its subformulas, their
/// negations, and `false`. Rules only ever look formulas up here, so a rule
/// that would leave the closure is reported instead of silently growing it.
#[derive(Debug)]
pub struct FormulaTable {
    nodes: Vec<Node>,
    formulas: Vec<Formula>,
    lookup: HashMap<Node, FormulaId>,
    atoms: Vec<String>,
    modalities: Vec<Modality>,
    root: FormulaId,
    bottom: FormulaId,
}

impl FormulaTable {
    /// `core` must already be desugared.
    pub(crate) fn new(core: &Formula) -> Self {
        assert!(core.is_core(), "tableau input must be in core form");
        let mut t = FormulaTable {
            nodes: vec![],
            formulas: vec![],
            lookup: HashMap::new(),
            atoms: vec![],
            modalities: vec![],
            root: 0,
            bottom: 0,
        };
        t.root = t.intern(core);
        let subformulas = t.nodes.len() as FormulaId;
        for id in 0..subformulas {
            let negated = Formula::not(t.formulas[id as usize].clone());
            t.insert(Node::Not(id), negated);
        }
        t.bottom = t.insert(Node::Bottom, Formula::Bottom);
        t
    }

    fn intern(&mut self, f: &Formula) -> FormulaId {
        let node = match f {
            Formula::Atom(p) => {
                let k = match self.atoms.iter().position(|a| a == p) {
                    Some(k) => k,
                    None => {
                        self.atoms.push(p.clone());
                        self.atoms.len() - 1
                    }
                };
                Node::Atom(k as u32)
            }
            Formula::Bottom => Node::Bottom,
            Formula::Not(a) => Node::Not(self.intern(a)),
            Formula::And(a, b) => {
                let a = self.intern(a);
                Node::And(a, self.intern(b))
            }
            Formula::Box(m, a) => {
                let m = self.modality_id(m);
                Node::Box(m, self.intern(a))
            }
            Formula::DefBox(m, a) => {
                let m = self.modality_id(m);
                Node::DefBox(m, self.intern(a))
            }
            other => unreachable!("non-core connective in {other:?}"),
        };
        self.insert(node, f.clone())
    }

    fn insert(&mut self, node: Node, f: Formula) -> FormulaId {
        if let Some(&id) = self.lookup.get(&node) {
            return id;
        }
        let id = self.nodes.len() as FormulaId;
        self.nodes.push(node);
        self.formulas.push(f);
        self.lookup.insert(node, id);
        id
    }

    fn modality_id(&mut self, m: &Modality) -> ModalityId {
        match self.modalities.iter().position(|x| x == m) {
            Some(k) => k as ModalityId,
            None => {
                self.modalities.push(m.clone());
                (self.modalities.len() - 1) as ModalityId
            }
        }
    }

    pub(crate) fn node(&self, id: FormulaId) -> Node {
        self.nodes[id as usize]
    }

    pub fn formula(&self, id: FormulaId) -> &Formula {
        &self.formulas[id as usize]
    }

    /// Id of `~f`, if it is in the closure.
    pub fn negation(&self, id: FormulaId) -> Option<FormulaId> {
        self.lookup.get(&Node::Not(id)).copied()
    }

    pub fn root(&self) -> FormulaId {
        self.root
    }

    pub fn bottom(&self) -> FormulaId {
        self.bottom
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn atom_name(&self, k: u32) -> &str {
        &self.atoms[k as usize]
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn modality(&self, id: ModalityId) -> &Modality {
        &self.modalities[id as usize]
    }

    pub fn modalities(&self) -> &[Modality] {
        &self.modalities
    }
}
