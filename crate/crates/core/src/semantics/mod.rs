//! Preferential Kripke models and the satisfaction relation for the
//! defeasible modalities and KLM conditionals.

mod enumerate;
mod eval;
mod model;
mod worldset;

pub use enumerate::{
    brute_force_satisfiable, brute_force_satisfiable_many, enumerate_models, strict_partial_orders,
    EnumerationError, ModelEnumerator, ModelSignature, DEFAULT_WORLD_CAP,
};
pub use model::{ModelError, PreferentialModel, RawModel};
pub use worldset::WorldSet;
