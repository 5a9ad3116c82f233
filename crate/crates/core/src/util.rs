use std::collections::BTreeMap;

use crate::model::{Symbol, Term};

/// Equality classes over terms. A class holds at most one constant, and the
/// constant (when present) is the class representative.
#[derive(Clone, Debug, Default)]
pub(crate) struct TermClasses {
    parent: BTreeMap<Term, Term>,
}

impl TermClasses {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn find(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        while let Some(p) = self.parent.get(&cur) {
            cur = p.clone();
        }
        cur
    }

    /// Merges the classes of `a` and `b`. Fails with the two constants when
    /// the merge would equate distinct constants.
    pub(crate) fn union(&mut self, a: &Term, b: &Term) -> Result<(), (Symbol, Symbol)> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return Ok(());
        }
        match (&ra, &rb) {
            (Term::Constant(x), Term::Constant(y)) => Err((x.clone(), y.clone())),
            (Term::Constant(_), _) => {
                self.parent.insert(rb, ra);
                Ok(())
            }
            (_, Term::Constant(_)) => {
                self.parent.insert(ra, rb);
                Ok(())
            }
            _ => {
                // smaller term stays representative so results are order-independent
                if ra < rb {
                    self.parent.insert(rb, ra);
                } else {
                    self.parent.insert(ra, rb);
                }
                Ok(())
            }
        }
    }
}
