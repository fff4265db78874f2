//! Formulas, their concrete syntax, and structural utilities.

mod formula;
mod parser;
mod render;

pub use formula::{modality, Conditional, Formula, InvalidIdentifier, Modality, Statement};
pub use parser::{parse_formula, parse_statement, ParseError};
pub use render::render_formula;

pub(crate) use formula::is_identifier;
