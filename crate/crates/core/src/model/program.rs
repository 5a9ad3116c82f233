use std::fmt;

use super::constraint::Context;
use super::query::ConjunctiveQuery;
use super::schema::Schema;
use super::source::{FederatedStore, SourceDatabase};
use super::ModelError;
use crate::chase::check_weak_acyclicity;

/// Sources, context and queries that passed every load-time check.
#[derive(Clone, Debug)]
pub struct Program {
    pub store: FederatedStore,
    pub context: Context,
    pub queries: Vec<ConjunctiveQuery>,
    /// Arities of every predicate used by sources, constraints and query bodies.
    pub schema: Schema,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadItem {
    pub kind: &'static str,
    pub name: String,
    pub summary: String,
}

impl fmt::Display for LoadItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.kind, self.name, self.summary)
    }
}

/// One line per loaded item.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub items: Vec<LoadItem>,
}

/// Cross-checks a parsed program: arities agree everywhere, the positive
/// constraints are weakly acyclic and every query is well formed.
pub fn validate_program(
    sources: Vec<SourceDatabase>,
    context: Context,
    queries: Vec<ConjunctiveQuery>,
) -> Result<(Program, LoadReport), ModelError> {
    let mut report = LoadReport::default();
    for s in &sources {
        report.items.push(LoadItem {
            kind: "source",
            name: s.id().to_string(),
            summary: format!("{} facts, confidence {}", s.facts().len(), s.tau()),
        });
    }
    let store = FederatedStore::new(sources)?;
    let mut schema = store.schema().clone();

    for c in context.constraints() {
        for a in c.atoms() {
            schema.declare_atom(a, &format!("constraint {}", c.id()))?;
        }
    }
    check_weak_acyclicity(context.positives())?;
    report.items.push(LoadItem {
        kind: "context",
        name: "C".into(),
        summary: format!(
            "{} positive, {} negative, {} key constraints; weakly acyclic",
            context.positives().len(),
            context.negatives1().len() + context.negatives2().len(),
            context.egds().len()
        ),
    });

    for (i, q) in queries.iter().enumerate() {
        // reconstructing re-runs range restriction and satisfiability
        let q = ConjunctiveQuery::new(
            q.head().clone(),
            q.body().to_vec(),
            q.comparisons().to_vec(),
            q.tau_in(),
        )?;
        for a in q.body() {
            schema.declare_atom(a, &format!("query {}", i + 1))?;
        }
        report.items.push(LoadItem {
            kind: "query",
            name: (i + 1).to_string(),
            summary: q.to_string(),
        });
    }

    Ok((
        Program {
            store,
            context,
            queries,
            schema,
        },
        report,
    ))
}
