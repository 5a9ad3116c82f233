use std::collections::BTreeSet;

use super::term::{NullId, Symbol, Term};
use super::ModelError;

/// `p(t1, ..., tn)`. Atoms order by predicate, then argument tuple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub predicate: Symbol,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<Symbol>, terms: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            terms,
        }
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut seen = BTreeSet::new();
        self.terms
            .iter()
            .filter_map(Term::as_variable)
            .filter(|v| seen.insert((*v).clone()))
            .cloned()
            .collect()
    }

    pub fn variable_set(&self) -> BTreeSet<Symbol> {
        self.terms
            .iter()
            .filter_map(Term::as_variable)
            .cloned()
            .collect()
    }

    pub fn nulls(&self) -> impl Iterator<Item = NullId> + '_ {
        self.terms.iter().filter_map(|t| match t {
            Term::Null(n) => Some(*n),
            _ => None,
        })
    }

    /// True when every term is a constant.
    pub fn is_ground(&self) -> bool {
        self.terms.iter().all(Term::is_constant)
    }

    pub fn has_variables(&self) -> bool {
        self.terms.iter().any(Term::is_variable)
    }

    pub fn has_nulls(&self) -> bool {
        self.terms.iter().any(Term::is_null)
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            terms: self.terms.iter().map(&mut f).collect(),
        }
    }
}

/// A ground atom: every argument is a constant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Fact(Atom);

impl Fact {
    pub fn new(atom: Atom) -> Result<Fact, ModelError> {
        if atom.is_ground() {
            Ok(Fact(atom))
        } else {
            Err(ModelError::NonGroundFact(atom.to_string()))
        }
    }

    /// Builds a fact from constant spellings.
    pub fn from_constants<S: AsRef<str>>(predicate: impl Into<Symbol>, args: &[S]) -> Fact {
        Fact(Atom::new(
            predicate,
            args.iter().map(Term::constant).collect(),
        ))
    }

    pub fn atom(&self) -> &Atom {
        &self.0
    }

    pub fn into_atom(self) -> Atom {
        self.0
    }

    pub fn predicate(&self) -> &Symbol {
        &self.0.predicate
    }

    pub fn arity(&self) -> usize {
        self.0.arity()
    }

    pub fn arg(&self, i: usize) -> &Symbol {
        match &self.0.terms[i] {
            Term::Constant(c) => c,
            _ => unreachable!("facts hold constants only"),
        }
    }

    pub fn args(&self) -> impl Iterator<Item = &Symbol> + '_ {
        (0..self.arity()).map(move |i| self.arg(i))
    }
}

impl TryFrom<Atom> for Fact {
    type Error = ModelError;

    fn try_from(atom: Atom) -> Result<Self, Self::Error> {
        Fact::new(atom)
    }
}

/// `X = a` or `X = Y`. The left side is always a variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Comparison {
    left: Symbol,
    right: Term,
}

impl Comparison {
    pub fn new(left: impl Into<Symbol>, right: Term) -> Result<Comparison, ModelError> {
        let left = left.into();
        if right.is_null() {
            return Err(ModelError::MalformedComparison(format!(
                "{left} = {right}: nulls cannot be compared"
            )));
        }
        Ok(Comparison { left, right })
    }

    pub fn left(&self) -> &Symbol {
        &self.left
    }

    pub fn right(&self) -> &Term {
        &self.right
    }

    pub fn variables(&self) -> impl Iterator<Item = &Symbol> + '_ {
        std::iter::once(&self.left).chain(self.right.as_variable())
    }
}
