use std::collections::{BTreeMap, BTreeSet};

use super::atom::Fact;
use super::degree::Degree;
use super::schema::Schema;
use super::term::Symbol;
use super::ModelError;

/// A local source `(S, tau)`: a duplicate-free fact set with a confidence degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SourceDatabase {
    id: Symbol,
    tau: Degree,
    facts: BTreeSet<Fact>,
}

impl SourceDatabase {
    pub fn new(
        id: impl Into<Symbol>,
        tau: Degree,
        facts: impl IntoIterator<Item = Fact>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        let facts: BTreeSet<Fact> = facts.into_iter().collect();
        let mut schema = Schema::new();
        for f in &facts {
            schema.declare(f.predicate(), f.arity(), &format!("source {id}"))?;
        }
        Ok(SourceDatabase { id, tau, facts })
    }

    pub fn id(&self) -> &Symbol {
        &self.id
    }

    pub fn tau(&self) -> Degree {
        self.tau
    }

    /// Facts in canonical order (predicate, then arguments).
    pub fn facts(&self) -> &BTreeSet<Fact> {
        &self.facts
    }
}

/// Where a fact lives: the ids of every source holding it.
pub type Provenance = BTreeSet<Symbol>;

/// The federation of local sources, with a total provenance lookup.
#[derive(Clone, Debug)]
pub struct FederatedStore {
    sources: Vec<SourceDatabase>,
    provenance: BTreeMap<Fact, Provenance>,
    schema: Schema,
}

impl FederatedStore {
    pub fn new(sources: Vec<SourceDatabase>) -> Result<Self, ModelError> {
        let mut ids = BTreeSet::new();
        let mut schema = Schema::new();
        let mut provenance: BTreeMap<Fact, Provenance> = BTreeMap::new();
        for s in &sources {
            if !ids.insert(s.id.clone()) {
                return Err(ModelError::DuplicateSource(s.id.to_string()));
            }
            for f in &s.facts {
                schema.declare(f.predicate(), f.arity(), &format!("source {}", s.id))?;
                provenance
                    .entry(f.clone())
                    .or_default()
                    .insert(s.id.clone());
            }
        }
        Ok(FederatedStore {
            sources,
            provenance,
            schema,
        })
    }

    pub fn sources(&self) -> &[SourceDatabase] {
        &self.sources
    }

    pub fn source(&self, id: &str) -> Option<&SourceDatabase> {
        self.sources.iter().find(|s| s.id.as_str() == id)
    }

    /// Predicates and arities used by the stored facts.
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Ids of all sources holding `fact`; empty for facts not stored anywhere.
    pub fn provenance(&self, fact: &Fact) -> Provenance {
        self.provenance.get(fact).cloned().unwrap_or_default()
    }

    /// Every distinct stored fact with its provenance, in canonical order.
    pub fn facts(&self) -> impl Iterator<Item = (&Fact, &Provenance)> + '_ {
        self.provenance.iter()
    }

    /// Sources admitted by `cond(tau_in, tau)`.
    pub fn trusted_sources<'a>(
        &'a self,
        tau_in: Degree,
        cond: impl Fn(Degree, Degree) -> bool + 'a,
    ) -> impl Iterator<Item = &'a SourceDatabase> + 'a {
        self.sources.iter().filter(move |s| cond(tau_in, s.tau))
    }
}
