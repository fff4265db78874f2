//! Decision procedures for multimodal K with defeasible modalities over
//! preferential Kripke models.
//!
//! * [`syntax`]: formulas, parser and printer.
//! * [`semantics`]: preferential models, satisfaction and a brute-force
//!   model enumerator.
//! * [`tableau`]: the labelled tableau with countermodel extraction.
//! * [`engine`]: validity, countermodels and knowledge-base entailment.

pub mod engine;
pub mod semantics;
pub mod syntax;
pub mod tableau;

pub use engine::{EntailmentVerdict, KnowledgeBase};
pub use semantics::{ModelSignature, PreferentialModel};
pub use syntax::{parse_formula, parse_statement, Conditional, Formula, Modality, Statement};
pub use tableau::{Prover, Verdict};
