use std::collections::BTreeMap;

use crate::model::{Atom, Homomorphism, Term};

fn walk<'a>(mut t: &'a Term, subst: &'a BTreeMap<Term, Term>) -> &'a Term {
    while let Some(next) = subst.get(t) {
        t = next;
    }
    t
}

/// Most general unifier of two atoms, or `None` when they do not unify.
///
/// Variables may bind to any term, nulls only to constants or nulls. When two
/// variables (or two nulls) meet, the smaller one is bound to the other. The
/// result is idempotent.
pub fn unify(a: &Atom, b: &Atom) -> Option<Homomorphism> {
    if a.predicate != b.predicate || a.arity() != b.arity() {
        return None;
    }
    let mut subst: BTreeMap<Term, Term> = BTreeMap::new();
    for (s, t) in a.terms.iter().zip(&b.terms) {
        let s = walk(s, &subst).clone();
        let t = walk(t, &subst).clone();
        if s == t {
            continue;
        }
        let (from, to) = match (&s, &t) {
            (Term::Constant(_), Term::Constant(_)) => return None,
            (Term::Variable(_), Term::Variable(_)) | (Term::Null(_), Term::Null(_)) => {
                if s < t {
                    (s, t)
                } else {
                    (t, s)
                }
            }
            (Term::Variable(_), _) => (s, t),
            (_, Term::Variable(_)) => (t, s),
            (Term::Null(_), Term::Constant(_)) => (s, t),
            (Term::Constant(_), Term::Null(_)) => (t, s),
        };
        subst.insert(from, to);
    }
    let resolved: Vec<(Term, Term)> = subst
        .keys()
        .map(|k| (k.clone(), walk(k, &subst).clone()))
        .collect();
    Some(Homomorphism::from_pairs(resolved))
}
