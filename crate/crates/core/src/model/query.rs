use std::collections::BTreeSet;

use super::atom::{Atom, Comparison};
use super::degree::Degree;
use super::term::{Symbol, Term};
use super::ModelError;
use crate::util::TermClasses;

/// `q(u0) :- R1(u1), ..., Rn(un), comp1, ..., compm @tau d`.
///
/// Construction enforces range restriction (every head variable and every
/// comparison variable occurs in a body atom) and satisfiability (the
/// equality closure of the comparisons never equates two distinct constants).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ConjunctiveQuery {
    head: Atom,
    body: Vec<Atom>,
    comparisons: Vec<Comparison>,
    tau_in: Option<Degree>,
}

impl ConjunctiveQuery {
    pub fn new(
        head: Atom,
        body: Vec<Atom>,
        comparisons: Vec<Comparison>,
        tau_in: Option<Degree>,
    ) -> Result<Self, ModelError> {
        let q = ConjunctiveQuery {
            head,
            body,
            comparisons,
            tau_in,
        };
        q.check()?;
        Ok(q)
    }

    fn check(&self) -> Result<(), ModelError> {
        let describe = || self.to_string();
        if self.body.is_empty() {
            return Err(ModelError::MalformedQuery {
                query: describe(),
                reason: "the body has no atoms".into(),
            });
        }
        if self.head.has_nulls() || self.body.iter().any(Atom::has_nulls) {
            return Err(ModelError::MalformedQuery {
                query: describe(),
                reason: "labeled nulls cannot appear in a query".into(),
            });
        }
        let bound: BTreeSet<Symbol> = self.body.iter().flat_map(Atom::variable_set).collect();
        let unbound = self
            .head
            .variables()
            .into_iter()
            .chain(self.comparisons.iter().flat_map(|c| c.variables().cloned()))
            .find(|v| !bound.contains(v));
        if let Some(variable) = unbound {
            return Err(ModelError::NotRangeRestricted {
                query: describe(),
                variable: variable.to_string(),
            });
        }
        let mut classes = TermClasses::new();
        for c in &self.comparisons {
            if let Err((a, b)) = classes.union(&Term::Variable(c.left().clone()), c.right()) {
                return Err(ModelError::UnsatisfiableQuery {
                    query: describe(),
                    reason: format!("comparisons equate distinct constants {a} and {b}"),
                });
            }
        }
        Ok(())
    }

    pub fn head(&self) -> &Atom {
        &self.head
    }

    pub fn body(&self) -> &[Atom] {
        &self.body
    }

    pub fn comparisons(&self) -> &[Comparison] {
        &self.comparisons
    }

    /// The degree written in the query text, if any.
    pub fn tau_in(&self) -> Option<Degree> {
        self.tau_in
    }

    pub fn effective_tau(&self) -> Degree {
        self.tau_in.unwrap_or(Degree::ZERO)
    }

    pub fn with_tau(mut self, tau: Degree) -> Self {
        self.tau_in = Some(tau);
        self
    }

    pub fn arity(&self) -> usize {
        self.head.arity()
    }

    /// Variables of the body in order of first occurrence.
    pub fn body_variables(&self) -> Vec<Symbol> {
        let mut seen = BTreeSet::new();
        self.body
            .iter()
            .flat_map(Atom::variables)
            .filter(|v| seen.insert(v.clone()))
            .collect()
    }
}
