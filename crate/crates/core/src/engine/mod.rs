//! Conjunctive query evaluation: fact indexing, homomorphism enumeration and unification.

mod eval;
mod index;
mod matcher;
mod unify;

pub(crate) use eval::head_tuple;
pub use eval::{evaluate, evaluate_on, Answers};
pub use index::{FactIndex, IndexedFact};
pub use matcher::{homomorphisms, EngineError, MatchResult, Matches, Pattern};
pub use unify::unify;
