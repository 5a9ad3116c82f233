use std::collections::BTreeMap;

use super::atom::Atom;
use super::term::Term;

/// A finite mapping on terms. Terms outside the domain map to themselves,
/// which makes the mapping the identity on constants.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Homomorphism {
    mapping: BTreeMap<Term, Term>,
}

impl Homomorphism {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Term, Term)>) -> Self {
        Homomorphism {
            mapping: pairs.into_iter().collect(),
        }
    }

    /// Adds `from -> to`. Constants are never rebound.
    pub fn bind(&mut self, from: Term, to: Term) {
        debug_assert!(!from.is_constant(), "constants map to themselves");
        self.mapping.insert(from, to);
    }

    pub fn get(&self, t: &Term) -> Option<&Term> {
        self.mapping.get(t)
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Constant(_) => t.clone(),
            _ => self.mapping.get(t).cloned().unwrap_or_else(|| t.clone()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        a.map_terms(|t| self.apply(t))
    }

    /// `self` after `first`: maps `t` to `self(first(t))`.
    pub fn compose_after(&self, first: &Homomorphism) -> Homomorphism {
        let mut mapping: BTreeMap<Term, Term> = first
            .mapping
            .iter()
            .map(|(k, v)| (k.clone(), self.apply(v)))
            .collect();
        for (k, v) in &self.mapping {
            mapping.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Homomorphism { mapping }
    }

    /// Identity on constants and nulls mapped only to constants or nulls.
    pub fn is_well_formed(&self) -> bool {
        self.mapping.iter().all(|(k, v)| match k {
            Term::Constant(_) => k == v,
            Term::Null(_) => !v.is_variable(),
            Term::Variable(_) => true,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Term)> + '_ {
        self.mapping.iter()
    }
}
