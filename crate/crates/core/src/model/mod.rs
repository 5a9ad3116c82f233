//! Logical vocabulary: terms, atoms, facts, queries, constraints, sources
//! and scored answers.

mod answer;
mod atom;
mod constraint;
mod degree;
mod homomorphism;
mod program;
mod query;
mod schema;
mod source;
mod term;

use thiserror::Error;

pub use answer::{CheckOutcome, Condition, ScoredAnswer, Witness, WitnessFact};
pub use atom::{Atom, Comparison, Fact};
pub use constraint::{Constraint, Context, EgdConstraint, NegativeConstraint, PositiveConstraint};
pub use degree::{Degree, DegreeError};
pub use homomorphism::Homomorphism;
pub use program::{validate_program, LoadItem, LoadReport, Program};
pub use query::ConjunctiveQuery;
pub use schema::Schema;
pub use source::{FederatedStore, Provenance, SourceDatabase};
pub use term::{NullGen, NullId, Symbol, Term};

use crate::chase::SpecialCycle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(
        "predicate `{predicate}` has arity {expected} but {origin} uses it with arity {found}"
    )]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
        origin: String,
    },
    #[error(
        "query `{query}` is not range-restricted: variable {variable} does not occur in the body"
    )]
    NotRangeRestricted { query: String, variable: String },
    #[error("query `{query}` is unsatisfiable: {reason}")]
    UnsatisfiableQuery { query: String, reason: String },
    #[error("query `{query}` is malformed: {reason}")]
    MalformedQuery { query: String, reason: String },
    #[error("positive constraints are not weakly acyclic: {0}")]
    NotWeaklyAcyclic(SpecialCycle),
    #[error("constraint `{id}` is malformed: {reason}")]
    MalformedConstraint { id: String, reason: String },
    #[error("malformed comparison {0}")]
    MalformedComparison(String),
    #[error("`{0}` is not a fact: facts hold constants only")]
    NonGroundFact(String),
    #[error("duplicate source id `{0}`")]
    DuplicateSource(String),
    #[error("duplicate constraint id `{0}`")]
    DuplicateConstraint(String),
}
