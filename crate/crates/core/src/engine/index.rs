use std::collections::{BTreeMap, HashMap};

use crate::model::{Atom, Degree, Fact, FederatedStore, Provenance, Schema, Symbol};

/// A fact visible to the matcher, with the trusted sources that hold it and
/// the degree charged when it is used (the best trusted source degree).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IndexedFact {
    pub fact: Fact,
    pub sources: Provenance,
    pub degree: Degree,
}

/// An immutable fact set with a per-predicate index and a per-argument index.
/// Every index list is in canonical fact order.
#[derive(Clone, Debug, Default)]
pub struct FactIndex {
    schema: Schema,
    facts: Vec<IndexedFact>,
    lookup: HashMap<Fact, usize>,
    by_pred: HashMap<Symbol, Vec<usize>>,
    by_arg: HashMap<(Symbol, usize, Symbol), Vec<usize>>,
}

impl FactIndex {
    /// Indexes `facts`. Duplicate facts are merged: sources united, best degree kept.
    pub fn new(schema: Schema, facts: impl IntoIterator<Item = IndexedFact>) -> Self {
        let mut merged: BTreeMap<Fact, (Provenance, Degree)> = BTreeMap::new();
        for f in facts {
            let e = merged
                .entry(f.fact)
                .or_insert_with(|| (Provenance::new(), Degree::ZERO));
            e.0.extend(f.sources);
            e.1 = e.1.max(f.degree);
        }
        let facts: Vec<IndexedFact> = merged
            .into_iter()
            .map(|(fact, (sources, degree))| IndexedFact {
                fact,
                sources,
                degree,
            })
            .collect();
        let mut index = FactIndex {
            schema,
            ..Default::default()
        };
        for (i, f) in facts.iter().enumerate() {
            let pred = f.fact.predicate().clone();
            for (pos, arg) in f.fact.args().enumerate() {
                index
                    .by_arg
                    .entry((pred.clone(), pos, arg.clone()))
                    .or_default()
                    .push(i);
            }
            index.by_pred.entry(pred).or_default().push(i);
            index.lookup.insert(f.fact.clone(), i);
        }
        index.facts = facts;
        index
    }

    /// Facts of the sources admitted by `cond(tau_in, tau)`. The schema is the
    /// whole store's, so predicates of untrusted sources stay known.
    pub fn trusted(
        store: &FederatedStore,
        tau_in: Degree,
        cond: impl Fn(Degree, Degree) -> bool,
    ) -> Self {
        let facts = store.trusted_sources(tau_in, cond).flat_map(|s| {
            s.facts().iter().map(move |f| IndexedFact {
                fact: f.clone(),
                sources: Provenance::from([s.id().clone()]),
                degree: s.tau(),
            })
        });
        FactIndex::new(store.schema().clone(), facts.collect::<Vec<_>>())
    }

    /// Adds predicate declarations (e.g. from a context) without adding facts.
    pub fn declare(&mut self, schema: &Schema) -> Result<(), crate::model::ModelError> {
        self.schema.merge(schema, "declaration")
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn facts(&self) -> &[IndexedFact] {
        &self.facts
    }

    pub fn fact(&self, i: usize) -> &IndexedFact {
        &self.facts[i]
    }

    pub fn get(&self, fact: &Fact) -> Option<&IndexedFact> {
        self.lookup.get(fact).map(|&i| &self.facts[i])
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        Fact::new(atom.clone()).is_ok_and(|f| self.lookup.contains_key(&f))
    }

    pub(crate) fn by_predicate(&self, pred: &Symbol) -> &[usize] {
        self.by_pred.get(pred).map(Vec::as_slice).unwrap_or(&[])
    }

    pub(crate) fn by_argument(&self, pred: &Symbol, pos: usize, value: &Symbol) -> &[usize] {
        // the tuple key needs owned symbols; Symbol clones are refcount bumps
        self.by_arg
            .get(&(pred.clone(), pos, value.clone()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}
