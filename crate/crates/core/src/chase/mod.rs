//! Weak-acyclicity analysis and the restricted chase.

pub mod acyclicity;
mod restricted;

pub use acyclicity::{
    check_weak_acyclicity, is_weakly_acyclic, DependencyGraph, Edge, EdgeKind, Position,
    SpecialCycle, WeakAcyclicity,
};
pub use restricted::{chase, ChaseError, ChaseResult, Firing, NullRecord};
pub(crate) use restricted::{chase_with, match_atom};
