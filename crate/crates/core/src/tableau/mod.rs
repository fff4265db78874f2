//! Labelled tableau for K with defeasible modalities.
//!
//! A branch holds labelled formulas `n :: a`, a skeleton of labelled edges
//! per modality, a preference between labels, and explicit assertions that
//! a label is among the most preferred successors of its parent. The rules:
//!
//! | rule     | premise                     | adds                                                    |
//! |----------|-----------------------------|---------------------------------------------------------|
//! | `bottom` | `n :: a`, `n :: ~a`         | `n :: false`                                            |
//! | `not`    | `n :: ~~a`                  | `n :: a`                                                |
//! | `and`    | `n :: a & b`                | `n :: a`, `n :: b`                                      |
//! | `or`     | `n :: ~(a & b)`             | `n :: ~a` \| `n :: ~b`                                  |
//! | `box`    | `n :: [i]a`, `n -i-> k`     | `k :: a`                                                |
//! | `dia`    | `n :: ~[i]a`                | fresh minimal `k :: ~a` \| fresh `k :: ~a` with fresh minimal `j < k` |
//! | `defbox` | `n :: [[i]]a`, `k` minimal  | `k :: a`                                                |
//! | `defdia` | `n :: ~[[i]]a`              | fresh minimal `k :: ~a`                                 |
//!
//! Rule instances wait in FIFO queues by class: propagation first, then
//! `or` splits, then `defdia`, then `dia`. Clashes are detected as soon as
//! a formula is added. Branches are explored depth first, left side first.

mod branch;
mod extract;
mod table;

use std::sync::Arc;

use thiserror::Error;

pub use branch::{Branch, Label, LabeledFormula, RuleApplication, RuleKind, Step};
pub use extract::{extract_model, verify_branch_model};
pub use table::{FormulaId, FormulaTable};

use crate::semantics::PreferentialModel;
use crate::syntax::Formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("resource limit exceeded: more than {limit} {what}")]
    ResourceExhausted { what: &'static str, limit: usize },
    #[error("tableau invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_rule_applications: usize,
    pub max_labels: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rule_applications: 10_000,
            max_labels: 1_000,
        }
    }
}

/// Trace of a closed tableau: the rule applications of every branch.
#[derive(Clone, Debug)]
pub struct ClosedTableau {
    pub table: Arc<FormulaTable>,
    pub branches: Vec<Vec<RuleApplication>>,
}

impl ClosedTableau {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![];
        for (k, steps) in self.branches.iter().enumerate() {
            out.push(format!("branch {k}:"));
            out.extend(steps.iter().map(|s| format!("  {}", s.render(&self.table))));
        }
        out
    }
}

/// An open saturated branch and the model extracted from it. The model
/// has been checked against every labelled formula on the branch.
#[derive(Clone, Debug)]
pub struct OpenTableau {
    pub branch: Branch,
    pub model: PreferentialModel,
}

impl OpenTableau {
    /// World of the root label, where the input formula holds.
    pub fn root_world(&self) -> String {
        Label::ROOT.world_name()
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Closed(ClosedTableau),
    Open(Box<OpenTableau>),
}

impl Verdict {
    pub fn is_closed(&self) -> bool {
        matches!(self, Verdict::Closed(_))
    }
}

/// Statistics of one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub rule_applications: usize,
    pub branches: usize,
    pub labels: usize,
}

/// Runs the tableau under resource limits.
#[derive(Clone, Debug)]
pub struct Prover {
    pub limits: Limits,
    /// Check the structural invariants after every rule application and
    /// minimality coverage on every saturated branch.
    pub check_invariants: bool,
}

impl Default for Prover {
    fn default() -> Self {
        Prover {
            limits: Limits::default(),
            check_invariants: true,
        }
    }
}

/// The single initial branch `{0 :: desugar(f)}`.
pub fn initial_tableau(f: &Formula) -> Vec<Branch> {
    let table = Arc::new(FormulaTable::new(&f.desugar()));
    vec![Branch::initial(table)]
}

/// One rule application; `None` once the branch is saturated.
pub fn step(mut b: Branch) -> Result<Option<Vec<Branch>>, TableauError> {
    Ok(match b.step()? {
        Step::Saturated => None,
        Step::Applied => Some(vec![b]),
        Step::Split(right) => Some(vec![b, *right]),
    })
}

impl Prover {
    pub fn new(limits: Limits) -> Self {
        Prover {
            limits,
            ..Prover::default()
        }
    }

    /// Decides satisfiability of `f`: `Closed` iff `f` is unsatisfiable.
    pub fn decide(&self, f: &Formula) -> Result<Verdict, TableauError> {
        self.run(f, None).map(|(v, _)| v)
    }

    pub fn decide_with_stats(&self, f: &Formula) -> Result<(Verdict, Stats), TableauError> {
        self.run(f, None)
    }

    /// Like [`Prover::decide`], also returning one line per rule
    /// application and branch event.
    pub fn decide_traced(
        &self,
        f: &Formula,
    ) -> Result<(Verdict, Stats, Vec<String>), TableauError> {
        let mut lines = vec![];
        let (v, stats) = self.run(f, Some(&mut lines))?;
        Ok((v, stats, lines))
    }

    fn run(
        &self,
        f: &Formula,
        mut trace: Option<&mut Vec<String>>,
    ) -> Result<(Verdict, Stats), TableauError> {
        let mut initial = initial_tableau(f);
        let table = initial[0].table().clone();
        let mut stack: Vec<(usize, Branch)> = vec![(0, initial.pop().unwrap())];
        let mut next_id = 1;
        let mut stats = Stats {
            branches: 1,
            ..Stats::default()
        };
        let mut closed = vec![];
        let mut emit = |line: String| {
            if let Some(t) = trace.as_deref_mut() {
                t.push(line);
            }
        };

        while let Some((mut id, mut b)) = stack.pop() {
            emit(format!("branch {id} open"));
            loop {
                if let Some(n) = b.closed_at() {
                    emit(format!("branch {id} closed at label {n}"));
                    closed.push(b.trace());
                    break;
                }
                let logged = b.trace_len();
                let outcome = b.step()?;
                if let Step::Saturated = outcome {
                    if self.check_invariants {
                        b.check_minimality_coverage()?;
                    }
                    let model = extract_model(&b);
                    if !verify_branch_model(&b, &model) {
                        return Err(TableauError::InvariantViolation(
                            "extracted model does not satisfy its branch".into(),
                        ));
                    }
                    emit(format!("branch {id} saturated open"));
                    return Ok((
                        Verdict::Open(Box::new(OpenTableau { branch: b, model })),
                        stats,
                    ));
                }

                stats.rule_applications += 1;
                stats.labels = stats.labels.max(b.labels_allocated() as usize);
                if stats.rule_applications > self.limits.max_rule_applications {
                    return Err(TableauError::ResourceExhausted {
                        what: "rule applications",
                        limit: self.limits.max_rule_applications,
                    });
                }
                if stats.labels > self.limits.max_labels {
                    return Err(TableauError::ResourceExhausted {
                        what: "labels",
                        limit: self.limits.max_labels,
                    });
                }
                if self.check_invariants {
                    b.check_invariants()?;
                }

                if let Step::Split(right) = outcome {
                    if self.check_invariants {
                        right.check_invariants()?;
                    }
                    let (left_id, right_id) = (next_id, next_id + 1);
                    next_id += 2;
                    stats.branches += 1;
                    emit(format!("split branch {id} -> {left_id} | {right_id}"));
                    for a in right.recent(right.trace_len() - logged) {
                        emit(a.render(&table));
                    }
                    stack.push((right_id, *right));
                    id = left_id;
                }
                for a in b.recent(b.trace_len() - logged) {
                    emit(a.render(&table));
                }
            }
        }
        Ok((
            Verdict::Closed(ClosedTableau {
                table,
                branches: closed,
            }),
            stats,
        ))
    }
}
