use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use super::table::{FormulaId, FormulaTable, ModalityId, Node};
use super::TableauError;
use crate::syntax::{Formula, Modality};

/// A tableau label; each stands for a world of the extracted model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    pub const ROOT: Label = Label(0);

    /// Name of the corresponding world in an extracted model.
    pub fn world_name(self) -> String {
        format!("n{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledFormula {
    pub label: Label,
    pub formula: Formula,
}

impl fmt::Display for LabeledFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :: {}", self.label, self.formula)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Bottom,
    Not,
    And,
    Or,
    Box,
    Dia,
    DefBox,
    DefDia,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::Bottom => "bottom",
            RuleKind::Not => "not",
            RuleKind::And => "and",
            RuleKind::Or => "or",
            RuleKind::Box => "box",
            RuleKind::Dia => "dia",
            RuleKind::DefBox => "defbox",
            RuleKind::DefDia => "defdia",
        })
    }
}

/// One rule instance. Keys double as the applied-instance log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Instance {
    Not(Label, FormulaId),
    And(Label, FormulaId),
    Box(Label, FormulaId, Label),
    DefBox(Label, FormulaId, Label),
    Or(Label, FormulaId),
    DefDia(Label, FormulaId),
    Dia(Label, FormulaId),
}

impl Instance {
    // Non-branching propagation first, then splits, then label creation.
    fn priority(self) -> usize {
        match self {
            Instance::Not(..) | Instance::And(..) | Instance::Box(..) | Instance::DefBox(..) => 0,
            Instance::Or(..) => 1,
            Instance::DefDia(..) => 2,
            Instance::Dia(..) => 3,
        }
    }
}

/// Something a rule application added to the branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Addition {
    Fact(Label, FormulaId),
    Edge(ModalityId, Label, Label),
    Prefer(Label, Label),
    Minimal(ModalityId, Label, Label),
}

/// A logged rule application: the rule, its main labelled formula, and
/// what it added.
#[derive(Clone, Debug)]
pub struct RuleApplication {
    pub rule: RuleKind,
    /// 1 or 2 for the two sides of a split, 0 otherwise.
    pub side: u8,
    pub label: Label,
    pub(crate) formula: FormulaId,
    pub(crate) added: Vec<Addition>,
}

impl RuleApplication {
    /// `<rule> @ <label> :: <formula> => <new facts>`
    pub fn render(&self, table: &FormulaTable) -> String {
        let rule = match self.side {
            0 => self.rule.to_string(),
            s => format!("{}{s}", self.rule),
        };
        let mut line = format!("{rule} @ {} :: {}", self.label, table.formula(self.formula));
        if !self.added.is_empty() {
            let added: Vec<String> = self
                .added
                .iter()
                .map(|a| match *a {
                    Addition::Fact(n, f) => format!("{n} :: {}", table.formula(f)),
                    Addition::Edge(m, a, b) => format!("{a} -{}-> {b}", table.modality(m)),
                    Addition::Prefer(a, b) => format!("{a} < {b}"),
                    Addition::Minimal(m, n, k) => format!("{k} in min_{}({n})", table.modality(m)),
                })
                .collect();
            line.push_str(" => ");
            line.push_str(&added.join(", "));
        }
        line
    }
}

/// Persistent log so that splitting a branch shares its history.
#[derive(Debug)]
struct LogNode {
    entry: RuleApplication,
    prev: Option<Arc<LogNode>>,
}

/// Outcome of one [`Branch::step`].
#[derive(Debug)]
pub enum Step {
    /// No unapplied rule instance is left (or the branch is closed).
    Saturated,
    /// One rule was applied in place.
    Applied,
    /// A branching rule fired: `self` became the left branch, this is the
    /// right one.
    Split(Box<Branch>),
}

/// A tableau branch: labelled formulas, the skeleton of labelled edges per
/// modality, the label preference, and the labels asserted to be minimal
/// among the successors of a label.
#[derive(Clone, Debug)]
pub struct Branch {
    table: Arc<FormulaTable>,
    facts: IndexSet<(Label, FormulaId)>,
    by_label: BTreeMap<Label, Vec<FormulaId>>,
    successors: BTreeMap<(ModalityId, Label), Vec<Label>>,
    edges: Vec<(ModalityId, Label, Label)>,
    preference: Vec<(Label, Label)>,
    minimal: BTreeMap<(ModalityId, Label), Vec<Label>>,
    applied: HashSet<Instance>,
    queues: [VecDeque<Instance>; 4],
    next_label: u32,
    closed_at: Option<Label>,
    log: Option<Arc<LogNode>>,
    log_len: usize,
    clash: Option<(Label, FormulaId)>,
}

impl Branch {
    /// The single initial branch `{0 :: f}` for a desugared input.
    pub(crate) fn initial(table: Arc<FormulaTable>) -> Branch {
        let root = table.root();
        let mut b = Branch {
            table,
            facts: IndexSet::new(),
            by_label: BTreeMap::new(),
            successors: BTreeMap::new(),
            edges: vec![],
            preference: vec![],
            minimal: BTreeMap::new(),
            applied: HashSet::new(),
            queues: Default::default(),
            next_label: 1,
            closed_at: None,
            log: None,
            log_len: 0,
            clash: None,
        };
        let mut added = vec![];
        b.add_fact(Label::ROOT, root, &mut added);
        b
    }

    pub fn table(&self) -> &Arc<FormulaTable> {
        &self.table
    }

    /// Contains `n :: false` for some label.
    pub fn is_closed(&self) -> bool {
        self.closed_at.is_some()
    }

    pub fn closed_at(&self) -> Option<Label> {
        self.closed_at
    }

    /// Number of labels allocated so far, including ones used only on
    /// sibling branches.
    pub fn labels_allocated(&self) -> u32 {
        self.next_label
    }

    pub fn contains(&self, label: Label, f: &Formula) -> bool {
        self.facts
            .iter()
            .any(|&(n, id)| n == label && self.table.formula(id) == f)
    }

    pub fn formulas(&self) -> Vec<LabeledFormula> {
        self.facts
            .iter()
            .map(|&(label, id)| LabeledFormula {
                label,
                formula: self.table.formula(id).clone(),
            })
            .collect()
    }

    pub(crate) fn fact_ids(&self) -> impl Iterator<Item = (Label, FormulaId)> + '_ {
        self.facts.iter().copied()
    }

    /// Skeleton edges per modality.
    pub fn skeleton(&self) -> BTreeMap<Modality, BTreeSet<(Label, Label)>> {
        let mut out: BTreeMap<Modality, BTreeSet<(Label, Label)>> = BTreeMap::new();
        for &(m, a, b) in &self.edges {
            out.entry(self.table.modality(m).clone())
                .or_default()
                .insert((a, b));
        }
        out
    }

    /// Label preference pairs `(a, b)` meaning `a < b`.
    pub fn preference(&self) -> &[(Label, Label)] {
        &self.preference
    }

    /// Labels asserted minimal among the `m`-successors of a label.
    pub fn min_assertions(&self) -> BTreeMap<(Modality, Label), BTreeSet<Label>> {
        self.minimal
            .iter()
            .map(|(&(m, n), ks)| {
                (
                    (self.table.modality(m).clone(), n),
                    ks.iter().copied().collect(),
                )
            })
            .collect()
    }

    /// Every label that occurs in a formula, an edge or a preference pair.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out: BTreeSet<Label> = self.by_label.keys().copied().collect();
        for &(_, a, b) in &self.edges {
            out.insert(a);
            out.insert(b);
        }
        for &(a, b) in &self.preference {
            out.insert(a);
            out.insert(b);
        }
        out
    }

    /// Rule applications on this branch, oldest first.
    pub fn trace(&self) -> Vec<RuleApplication> {
        let mut out = Vec::with_capacity(self.log_len);
        let mut node = self.log.as_ref();
        while let Some(n) = node {
            out.push(n.entry.clone());
            node = n.prev.as_ref();
        }
        out.reverse();
        out
    }

    fn record(
        &mut self,
        rule: RuleKind,
        side: u8,
        label: Label,
        formula: FormulaId,
        added: Vec<Addition>,
    ) {
        self.log = Some(Arc::new(LogNode {
            entry: RuleApplication {
                rule,
                side,
                label,
                formula,
                added,
            },
            prev: self.log.take(),
        }));
        self.log_len += 1;
    }

    /// Logs a finished rule application, followed by the clash it caused.
    fn finish(
        &mut self,
        rule: RuleKind,
        side: u8,
        label: Label,
        formula: FormulaId,
        added: Vec<Addition>,
    ) {
        self.record(rule, side, label, formula, added);
        if let Some((n, f)) = self.clash.take() {
            let bottom = self.table.bottom();
            self.record(RuleKind::Bottom, 0, n, f, vec![Addition::Fact(n, bottom)]);
        }
    }

    pub fn trace_len(&self) -> usize {
        self.log_len
    }

    /// The last `count` rule applications, oldest first.
    pub fn recent(&self, count: usize) -> Vec<RuleApplication> {
        let mut out = Vec::with_capacity(count);
        let mut node = self.log.as_ref();
        while let Some(n) = node.filter(|_| out.len() < count) {
            out.push(n.entry.clone());
            node = n.prev.as_ref();
        }
        out.reverse();
        out
    }

    fn schedule(&mut self, inst: Instance) {
        if !self.applied.contains(&inst) {
            self.queues[inst.priority()].push_back(inst);
        }
    }

    fn add_fact(&mut self, n: Label, f: FormulaId, added: &mut Vec<Addition>) {
        if self.closed_at.is_some() || !self.facts.insert((n, f)) {
            return;
        }
        self.by_label.entry(n).or_default().push(f);
        added.push(Addition::Fact(n, f));

        let node = self.table.node(f);
        if node == Node::Bottom {
            self.closed_at = Some(n);
            return;
        }
        // Eager clash detection.
        let complement = match node {
            Node::Not(g) => Some(g),
            _ => self.table.negation(f),
        };
        if let Some(g) = complement {
            if self.facts.contains(&(n, g)) {
                let bottom = self.table.bottom();
                self.facts.insert((n, bottom));
                self.by_label.entry(n).or_default().push(bottom);
                self.closed_at = Some(n);
                self.clash = Some((n, f));
                return;
            }
        }

        match node {
            Node::Not(g) => match self.table.node(g) {
                Node::Not(_) => self.schedule(Instance::Not(n, f)),
                Node::And(..) => self.schedule(Instance::Or(n, f)),
                Node::Box(..) => self.schedule(Instance::Dia(n, f)),
                Node::DefBox(..) => self.schedule(Instance::DefDia(n, f)),
                Node::Atom(_) | Node::Bottom => {}
            },
            Node::And(..) => self.schedule(Instance::And(n, f)),
            Node::Box(m, _) => {
                for k in self.successors.get(&(m, n)).cloned().unwrap_or_default() {
                    self.schedule(Instance::Box(n, f, k));
                }
            }
            Node::DefBox(m, _) => {
                for k in self.minimal.get(&(m, n)).cloned().unwrap_or_default() {
                    self.schedule(Instance::DefBox(n, f, k));
                }
            }
            Node::Atom(_) | Node::Bottom => {}
        }
    }

    fn add_edge(&mut self, m: ModalityId, from: Label, to: Label, added: &mut Vec<Addition>) {
        self.edges.push((m, from, to));
        self.successors.entry((m, from)).or_default().push(to);
        added.push(Addition::Edge(m, from, to));
        for f in self.by_label.get(&from).cloned().unwrap_or_default() {
            if matches!(self.table.node(f), Node::Box(i, _) if i == m) {
                self.schedule(Instance::Box(from, f, to));
            }
        }
    }

    fn assert_minimal(
        &mut self,
        m: ModalityId,
        parent: Label,
        k: Label,
        added: &mut Vec<Addition>,
    ) {
        self.minimal.entry((m, parent)).or_default().push(k);
        added.push(Addition::Minimal(m, parent, k));
        for f in self.by_label.get(&parent).cloned().unwrap_or_default() {
            if matches!(self.table.node(f), Node::DefBox(i, _) if i == m) {
                self.schedule(Instance::DefBox(parent, f, k));
            }
        }
    }

    fn negation(&self, f: FormulaId) -> Result<FormulaId, TableauError> {
        self.table.negation(f).ok_or_else(|| {
            TableauError::InvariantViolation(format!(
                "negation of {} is outside the subformula closure",
                self.table.formula(f)
            ))
        })
    }

    fn fresh(&mut self) -> Label {
        let l = Label(self.next_label);
        self.next_label += 1;
        l
    }

    fn next_instance(&mut self) -> Option<Instance> {
        for q in &mut self.queues {
            while let Some(inst) = q.pop_front() {
                if self.applied.insert(inst) {
                    return Some(inst);
                }
            }
        }
        None
    }

    /// Applies the next pending rule instance.
    pub fn step(&mut self) -> Result<Step, TableauError> {
        if self.is_closed() {
            return Ok(Step::Saturated);
        }
        let Some(inst) = self.next_instance() else {
            return Ok(Step::Saturated);
        };
        let mut added = vec![];
        match inst {
            Instance::Not(n, f) => {
                let Node::Not(g) = self.table.node(f) else {
                    unreachable!()
                };
                let Node::Not(h) = self.table.node(g) else {
                    unreachable!()
                };
                self.add_fact(n, h, &mut added);
                self.finish(RuleKind::Not, 0, n, f, added);
            }
            Instance::And(n, f) => {
                let Node::And(a, b) = self.table.node(f) else {
                    unreachable!()
                };
                self.add_fact(n, a, &mut added);
                self.add_fact(n, b, &mut added);
                self.finish(RuleKind::And, 0, n, f, added);
            }
            Instance::Box(n, f, k) => {
                let Node::Box(_, g) = self.table.node(f) else {
                    unreachable!()
                };
                self.add_fact(k, g, &mut added);
                self.finish(RuleKind::Box, 0, n, f, added);
            }
            Instance::DefBox(n, f, k) => {
                let Node::DefBox(_, g) = self.table.node(f) else {
                    unreachable!()
                };
                self.add_fact(k, g, &mut added);
                self.finish(RuleKind::DefBox, 0, n, f, added);
            }
            Instance::DefDia(n, f) => {
                let Node::Not(g) = self.table.node(f) else {
                    unreachable!()
                };
                let Node::DefBox(m, body) = self.table.node(g) else {
                    unreachable!()
                };
                let neg = self.negation(body)?;
                let k = self.fresh();
                self.add_edge(m, n, k, &mut added);
                self.assert_minimal(m, n, k, &mut added);
                self.add_fact(k, neg, &mut added);
                self.finish(RuleKind::DefDia, 0, n, f, added);
            }
            Instance::Or(n, f) => {
                let Node::Not(g) = self.table.node(f) else {
                    unreachable!()
                };
                let Node::And(a, b) = self.table.node(g) else {
                    unreachable!()
                };
                let (na, nb) = (self.negation(a)?, self.negation(b)?);
                let mut right = self.clone();
                self.add_fact(n, na, &mut added);
                self.finish(RuleKind::Or, 1, n, f, added);
                let mut added = vec![];
                right.add_fact(n, nb, &mut added);
                right.finish(RuleKind::Or, 2, n, f, added);
                return Ok(Step::Split(Box::new(right)));
            }
            Instance::Dia(n, f) => {
                let Node::Not(g) = self.table.node(f) else {
                    unreachable!()
                };
                let Node::Box(m, body) = self.table.node(g) else {
                    unreachable!()
                };
                let neg = self.negation(body)?;
                // Left: the witness is itself most normal. Right: the
                // witness is not, and a fresh formula-free label below it is.
                let witness_left = self.fresh();
                let witness_right = self.fresh();
                let below = self.fresh();
                let mut right = self.clone();

                self.add_edge(m, n, witness_left, &mut added);
                self.assert_minimal(m, n, witness_left, &mut added);
                self.add_fact(witness_left, neg, &mut added);
                self.finish(RuleKind::Dia, 1, n, f, added);

                let mut added = vec![];
                right.add_edge(m, n, witness_right, &mut added);
                right.add_edge(m, n, below, &mut added);
                right.preference.push((below, witness_right));
                added.push(Addition::Prefer(below, witness_right));
                right.assert_minimal(m, n, below, &mut added);
                right.add_fact(witness_right, neg, &mut added);
                right.finish(RuleKind::Dia, 2, n, f, added);
                return Ok(Step::Split(Box::new(right)));
            }
        }
        Ok(Step::Applied)
    }

    /// Checks the structural invariants that must hold on every branch:
    /// the preference is irreflexive with no chain longer than one step,
    /// and no asserted-minimal label has a predecessor among its siblings.
    pub fn check_invariants(&self) -> Result<(), TableauError> {
        let violation = |msg: String| Err(TableauError::InvariantViolation(msg));
        for &(a, b) in &self.preference {
            if a == b {
                return violation(format!("label {a} preferred to itself"));
            }
            if self.preference.iter().any(|&(_, y)| y == a) {
                return violation(format!("preference chain of length > 2 through {a} < {b}"));
            }
        }
        for (&(m, n), ks) in &self.minimal {
            let siblings = self.successors.get(&(m, n)).cloned().unwrap_or_default();
            for &k in ks {
                if !siblings.contains(&k) {
                    return violation(format!(
                        "label {k} asserted minimal but not a successor of {n}"
                    ));
                }
                if self
                    .preference
                    .iter()
                    .any(|&(a, b)| b == k && siblings.contains(&a))
                {
                    return violation(format!(
                        "asserted-minimal label {k} has a preferred sibling"
                    ));
                }
            }
        }
        Ok(())
    }

    /// On a saturated branch: every successor is asserted minimal or has an
    /// asserted-minimal sibling strictly below it.
    pub fn check_minimality_coverage(&self) -> Result<(), TableauError> {
        for (&(m, n), succ) in &self.successors {
            let mins = self.minimal.get(&(m, n)).cloned().unwrap_or_default();
            for &k in succ {
                let covered = mins.contains(&k)
                    || self
                        .preference
                        .iter()
                        .any(|&(a, b)| b == k && mins.contains(&a));
                if !covered {
                    return Err(TableauError::InvariantViolation(format!(
                        "successor {k} of {n} via {} is neither minimal nor below a minimal label",
                        self.table.modality(m)
                    )));
                }
            }
        }
        Ok(())
    }
}
