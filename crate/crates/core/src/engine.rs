//! Validity, countermodels and global entailment from a knowledge base.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::semantics::{
    enumerate_models, EnumerationError, ModelEnumerator, ModelSignature, PreferentialModel,
};
use crate::syntax::{parse_formula, Conditional, Formula, ParseError};
use crate::tableau::{Label, Prover, TableauError, Verdict};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("maximum depth {max_depth} is below the query's modal depth {needed}")]
    DepthTooSmall { max_depth: usize, needed: usize },
    #[error("countermodel failed re-verification: {0}")]
    Unverified(String),
}

/// A finite set of formulas, each required to be true in every world.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub formulas: Vec<Formula>,
}

impl KnowledgeBase {
    pub fn new(formulas: Vec<Formula>) -> Self {
        KnowledgeBase { formulas }
    }

    /// One formula per line; blank lines and `#` comments are skipped.
    /// Error positions refer to the whole text.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut formulas = vec![];
        for (k, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let f = parse_formula(line).map_err(|mut e| {
                e.line = k + 1;
                e
            })?;
            formulas.push(f);
        }
        Ok(KnowledgeBase { formulas })
    }

    pub fn modal_depth(&self) -> usize {
        self.formulas
            .iter()
            .map(Formula::modal_depth)
            .max()
            .unwrap_or(0)
    }
}

/// `~a |~ false` for every `a` in the knowledge base, in order.
pub fn kb_to_conditionals(kb: &KnowledgeBase) -> Vec<Conditional> {
    kb.formulas
        .iter()
        .map(|a| Conditional::new(Formula::not(a.clone()), Formula::Bottom))
        .collect()
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Validity {
    Valid,
    /// `formula` fails at `world` of `model`.
    Invalid {
        model: PreferentialModel,
        world: String,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum EntailmentVerdict {
    /// `C_depth & ~query` is unsatisfiable, where `C_0` is the conjunction
    /// of the knowledge base and `C_{j+1} = C_j & [i]C_j` over the relevant
    /// modalities.
    Entailed { depth: usize },
    /// The model makes every knowledge-base formula true everywhere and the
    /// query false at `witness`.
    NotEntailed {
        countermodel: PreferentialModel,
        witness: String,
    },
    /// Neither a proof nor a countermodel was found up to this depth.
    Unknown { depth: usize },
}

/// Runs queries with one prover configuration.
#[derive(Clone, Debug)]
pub struct Engine {
    pub prover: Prover,
    /// World bound for the brute-force countermodel search in
    /// [`Engine::global_entails`].
    pub search_max_worlds: usize,
    /// Upper bound on the number of models that search may visit.
    pub search_budget: u128,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            prover: Prover::default(),
            search_max_worlds: 3,
            search_budget: 250_000,
        }
    }
}

/// Default `max_depth` for [`Engine::global_entails`].
pub fn default_max_depth(query: &Formula) -> usize {
    query.modal_depth() + 2
}

impl Engine {
    pub fn new(prover: Prover) -> Self {
        Engine {
            prover,
            ..Engine::default()
        }
    }

    /// Satisfiability: a verified model and world, or `None`.
    pub fn satisfiable(
        &self,
        f: &Formula,
    ) -> Result<Option<(PreferentialModel, String)>, EngineError> {
        match self.prover.decide(f)? {
            Verdict::Closed(_) => Ok(None),
            Verdict::Open(open) => {
                let root = open.root_world();
                if !open.model.holds_at(&root, f).unwrap_or(false) {
                    return Err(EngineError::Unverified(format!("{f} fails at the root")));
                }
                Ok(Some((open.model, root)))
            }
        }
    }

    pub fn is_valid(&self, f: &Formula) -> Result<Validity, EngineError> {
        Ok(match self.countermodel(f)? {
            None => Validity::Valid,
            Some((model, world)) => Validity::Invalid { model, world },
        })
    }

    /// A model and world where `f` fails, if there is one.
    pub fn countermodel(
        &self,
        f: &Formula,
    ) -> Result<Option<(PreferentialModel, String)>, EngineError> {
        self.satisfiable(&Formula::not(f.clone()))
    }

    /// Decides `kb |= query` by box-closure deepening from the query's modal
    /// depth up to `max_depth`, certifying negative answers with a model.
    pub fn global_entails(
        &self,
        kb: &KnowledgeBase,
        query: &Formula,
        max_depth: usize,
    ) -> Result<EntailmentVerdict, EngineError> {
        let start = query.modal_depth();
        if max_depth < start {
            return Err(EngineError::DepthTooSmall {
                max_depth,
                needed: start,
            });
        }
        let modalities: BTreeSet<_> = kb
            .formulas
            .iter()
            .chain(std::iter::once(query))
            .flat_map(Formula::modalities)
            .collect();
        let deepen = |c: Formula| {
            let boxes: Vec<Formula> = modalities
                .iter()
                .map(|m| Formula::Box(m.clone(), Box::new(c.clone())))
                .collect();
            Formula::conjunction(std::iter::once(c).chain(boxes))
        };

        let mut closure = Formula::conjunction(kb.formulas.iter().cloned());
        for _ in 0..start {
            closure = deepen(closure);
        }
        let mut searched = false;
        for depth in start..=max_depth {
            if depth > start {
                closure = deepen(closure);
            }
            let probe = Formula::and(closure.clone(), Formula::not(query.clone()));
            let Verdict::Open(open) = self.prover.decide(&probe)? else {
                return Ok(EntailmentVerdict::Entailed { depth });
            };
            let root = Label::ROOT.world_name();
            if certifies(&open.model, kb, query, &root) {
                return Ok(EntailmentVerdict::NotEntailed {
                    countermodel: open.model,
                    witness: root,
                });
            }
            if !searched {
                searched = true;
                if let Some((countermodel, witness)) = self.search_countermodel(kb, query)? {
                    return Ok(EntailmentVerdict::NotEntailed {
                        countermodel,
                        witness,
                    });
                }
            }
        }
        Ok(EntailmentVerdict::Unknown { depth: max_depth })
    }

    /// Bounded brute-force search for a model of `kb` where `query` fails
    /// somewhere, within the world bound and model budget.
    fn search_countermodel(
        &self,
        kb: &KnowledgeBase,
        query: &Formula,
    ) -> Result<Option<(PreferentialModel, String)>, EngineError> {
        let mut sig = ModelSignature::covering(kb.formulas.iter().chain(std::iter::once(query)), 1);
        let mut worlds = 0;
        for n in 1..=self.search_max_worlds {
            sig.max_worlds = n;
            if ModelEnumerator::count(&sig) > self.search_budget {
                break;
            }
            worlds = n;
        }
        if worlds == 0 {
            return Ok(None);
        }
        sig.max_worlds = worlds;
        for m in ModelEnumerator::with_cap(&sig, worlds)? {
            if !m.satisfies_kb_globally(&kb.formulas) {
                continue;
            }
            if let Some(w) = m.extension(query).complement().iter().next() {
                let witness = m.world_name(w).to_string();
                return Ok(Some((m, witness)));
            }
        }
        Ok(None)
    }
}

fn certifies(m: &PreferentialModel, kb: &KnowledgeBase, query: &Formula, witness: &str) -> bool {
    m.satisfies_kb_globally(&kb.formulas) && matches!(m.holds_at(witness, query), Ok(false))
}

/// Bounded-model entailment: every enumerated model of `kb` makes `query`
/// true everywhere. Only evidence, never proof, beyond the bound.
pub fn entails_within(
    kb: &KnowledgeBase,
    query: &Formula,
    sig: &ModelSignature,
) -> Result<bool, EnumerationError> {
    Ok(enumerate_models(sig)?
        .all(|m| !m.satisfies_kb_globally(&kb.formulas) || m.globally_true(query)))
}
