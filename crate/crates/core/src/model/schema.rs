use std::collections::BTreeMap;

use super::atom::Atom;
use super::term::Symbol;
use super::ModelError;

/// Predicate arities. A predicate is declared by its first use and its arity
/// is locked from then on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schema {
    arities: BTreeMap<Symbol, usize>,
}

impl Schema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(
        &mut self,
        predicate: &Symbol,
        arity: usize,
        origin: &str,
    ) -> Result<(), ModelError> {
        match self.arities.get(predicate) {
            Some(&expected) if expected != arity => Err(ModelError::ArityMismatch {
                predicate: predicate.to_string(),
                expected,
                found: arity,
                origin: origin.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(predicate.clone(), arity);
                Ok(())
            }
        }
    }

    pub fn declare_atom(&mut self, atom: &Atom, origin: &str) -> Result<(), ModelError> {
        self.declare(&atom.predicate, atom.arity(), origin)
    }

    pub fn merge(&mut self, other: &Schema, origin: &str) -> Result<(), ModelError> {
        for (p, &a) in &other.arities {
            self.declare(p, a, origin)?;
        }
        Ok(())
    }

    pub fn arity(&self, predicate: &str) -> Option<usize> {
        self.arities.get(predicate).copied()
    }

    pub fn contains(&self, predicate: &str) -> bool {
        self.arities.contains_key(predicate)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, usize)> + '_ {
        self.arities.iter().map(|(p, a)| (p, *a))
    }
}
