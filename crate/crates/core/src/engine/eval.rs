use std::collections::BTreeMap;

use super::index::FactIndex;
use super::matcher::{homomorphisms, EngineError, MatchResult};
use crate::model::{ConjunctiveQuery, Degree, FederatedStore, Symbol, Term};

/// Answers of a query grouped by head tuple, in tuple order.
pub type Answers = BTreeMap<Vec<Symbol>, Vec<MatchResult>>;

/// Evaluates `q` over the facts of the sources with `tau >= tau_in`.
pub fn evaluate(
    q: &ConjunctiveQuery,
    store: &FederatedStore,
    tau_in: Degree,
) -> Result<Answers, EngineError> {
    let index = FactIndex::trusted(store, tau_in, |tin, tau| tau >= tin);
    evaluate_on(q, &index)
}

/// Evaluates `q` over an already restricted fact set.
pub fn evaluate_on(q: &ConjunctiveQuery, index: &FactIndex) -> Result<Answers, EngineError> {
    let mut answers = Answers::new();
    for m in homomorphisms(q.body(), q.comparisons(), index)? {
        answers.entry(head_tuple(q, &m)).or_default().push(m);
    }
    Ok(answers)
}

pub(crate) fn head_tuple(q: &ConjunctiveQuery, m: &MatchResult) -> Vec<Symbol> {
    q.head()
        .terms
        .iter()
        .map(|t| match m.homomorphism.apply(t) {
            Term::Constant(c) => c,
            other => unreachable!("range-restricted head term {other} left unbound"),
        })
        .collect()
}
