use std::fmt;
use std::sync::Arc;

/// Interned-ish string used for constants, variable names, predicates and ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: impl AsRef<str>) -> Self {
        Symbol(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl AsRef<str> for Symbol {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Label of a labeled null. Rendered as `_:nK`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NullId(pub u64);

impl fmt::Display for NullId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:n{}", self.0)
    }
}

/// Hands out fresh null labels. Labels only ever increase.
#[derive(Clone, Debug)]
pub struct NullGen {
    next: u64,
}

impl NullGen {
    pub fn new() -> Self {
        NullGen { next: 1 }
    }

    /// A generator whose first label is larger than every null in `terms`.
    pub fn after<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Self {
        let max = terms
            .into_iter()
            .filter_map(|t| match t {
                Term::Null(n) => Some(n.0),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        NullGen { next: max + 1 }
    }

    pub fn fresh(&mut self) -> NullId {
        let id = NullId(self.next);
        self.next += 1;
        id
    }
}

impl Default for NullGen {
    fn default() -> Self {
        Self::new()
    }
}

/// A term is a constant, a labeled null or a variable. The kind is part of
/// the value: `Constant("X")` and `Variable("X")` are different terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Constant(Symbol),
    Null(NullId),
    Variable(Symbol),
}

impl Term {
    pub fn constant(s: impl AsRef<str>) -> Self {
        Term::Constant(Symbol::new(s))
    }

    pub fn var(s: impl AsRef<str>) -> Self {
        Term::Variable(Symbol::new(s))
    }

    pub fn null(n: u64) -> Self {
        Term::Null(NullId(n))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::Constant(_))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Term::Null(_))
    }

    pub fn as_constant(&self) -> Option<&Symbol> {
        match self {
            Term::Constant(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_variable(&self) -> Option<&Symbol> {
        match self {
            Term::Variable(v) => Some(v),
            _ => None,
        }
    }
}
