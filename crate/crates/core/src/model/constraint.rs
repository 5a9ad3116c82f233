use std::collections::BTreeSet;

use super::atom::{Atom, Comparison};
use super::term::Symbol;
use super::ModelError;
use crate::chase::acyclicity::check_weak_acyclicity;

fn no_nulls(id: &Symbol, atoms: &[&Atom]) -> Result<(), ModelError> {
    if atoms.iter().any(|a| a.has_nulls()) {
        return Err(ModelError::MalformedConstraint {
            id: id.to_string(),
            reason: "labeled nulls cannot appear in a constraint".into(),
        });
    }
    Ok(())
}

/// Linear TGD `L1(u1) -> exists y. L2(u2)`. Head-only variables are existential.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PositiveConstraint {
    id: Symbol,
    body: Atom,
    head: Atom,
}

impl PositiveConstraint {
    pub fn new(id: impl Into<Symbol>, body: Atom, head: Atom) -> Result<Self, ModelError> {
        let id = id.into();
        no_nulls(&id, &[&body, &head])?;
        Ok(PositiveConstraint { id, body, head })
    }

    pub fn id(&self) -> &Symbol {
        &self.id
    }

    pub fn body(&self) -> &Atom {
        &self.body
    }

    pub fn head(&self) -> &Atom {
        &self.head
    }

    /// Variables shared by body and head, in head order.
    pub fn frontier(&self) -> Vec<Symbol> {
        let body = self.body.variable_set();
        self.head
            .variables()
            .into_iter()
            .filter(|v| body.contains(v))
            .collect()
    }

    /// Head-only variables, in head order.
    pub fn existentials(&self) -> Vec<Symbol> {
        let body = self.body.variable_set();
        self.head
            .variables()
            .into_iter()
            .filter(|v| !body.contains(v))
            .collect()
    }
}

/// `phi(u), comp -> false` with one or two body atoms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NegativeConstraint {
    id: Symbol,
    atoms: Vec<Atom>,
    comparisons: Vec<Comparison>,
}

impl NegativeConstraint {
    pub fn new(
        id: impl Into<Symbol>,
        atoms: Vec<Atom>,
        comparisons: Vec<Comparison>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        let malformed = |reason: String| ModelError::MalformedConstraint {
            id: id.to_string(),
            reason,
        };
        if atoms.is_empty() || atoms.len() > 2 {
            return Err(malformed(format!(
                "a negative constraint has one or two body atoms, found {}",
                atoms.len()
            )));
        }
        no_nulls(&id, &atoms.iter().collect::<Vec<_>>())?;
        let vars: BTreeSet<Symbol> = atoms.iter().flat_map(Atom::variable_set).collect();
        if let Some(v) = comparisons
            .iter()
            .flat_map(|c| c.variables())
            .find(|v| !vars.contains(*v))
        {
            return Err(malformed(format!(
                "comparison variable {v} does not occur in a body atom"
            )));
        }
        if let [a1, a2] = atoms.as_slice() {
            let v1 = a1.variable_set();
            let v2 = a2.variable_set();
            let linked_by_comparison = comparisons.iter().any(|c| {
                let r = c.right().as_variable();
                (v1.contains(c.left()) && r.is_some_and(|r| v2.contains(r)))
                    || (v2.contains(c.left()) && r.is_some_and(|r| v1.contains(r)))
            });
            if !v1.is_empty() && !v2.is_empty() && v1.is_disjoint(&v2) && !linked_by_comparison {
                return Err(malformed(
                    "the two body atoms share no variable".to_string(),
                ));
            }
        }
        Ok(NegativeConstraint {
            id,
            atoms,
            comparisons,
        })
    }

    pub fn id(&self) -> &Symbol {
        &self.id
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn comparisons(&self) -> &[Comparison] {
        &self.comparisons
    }

    pub fn is_binary(&self) -> bool {
        self.atoms.len() == 2
    }
}

/// `L1(u1), L2(u2) -> u1' = u2'`, the equated sub-tuples given pairwise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EgdConstraint {
    id: Symbol,
    atom1: Atom,
    atom2: Atom,
    equalities: Vec<(Symbol, Symbol)>,
}

impl EgdConstraint {
    pub fn new(
        id: impl Into<Symbol>,
        atom1: Atom,
        atom2: Atom,
        equalities: Vec<(Symbol, Symbol)>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        let malformed = |reason: String| ModelError::MalformedConstraint {
            id: id.to_string(),
            reason,
        };
        no_nulls(&id, &[&atom1, &atom2])?;
        let v1 = atom1.variable_set();
        let v2 = atom2.variable_set();
        if v1.is_disjoint(&v2) {
            return Err(malformed("the two body atoms share no variable".into()));
        }
        if equalities.is_empty() {
            return Err(malformed("an equality head needs at least one pair".into()));
        }
        for (x1, x2) in &equalities {
            if !v1.contains(x1) {
                return Err(malformed(format!("{x1} does not occur in the first atom")));
            }
            if !v2.contains(x2) {
                return Err(malformed(format!("{x2} does not occur in the second atom")));
            }
        }
        Ok(EgdConstraint {
            id,
            atom1,
            atom2,
            equalities,
        })
    }

    pub fn id(&self) -> &Symbol {
        &self.id
    }

    pub fn atom1(&self) -> &Atom {
        &self.atom1
    }

    pub fn atom2(&self) -> &Atom {
        &self.atom2
    }

    pub fn equalities(&self) -> &[(Symbol, Symbol)] {
        &self.equalities
    }

    /// The atom on side `i` (0 or 1).
    pub fn side(&self, i: usize) -> &Atom {
        if i == 0 {
            &self.atom1
        } else {
            &self.atom2
        }
    }

    /// Equated variables as (variable on side `i`, variable on the other side).
    pub fn oriented_equalities(&self, i: usize) -> Vec<(Symbol, Symbol)> {
        self.equalities
            .iter()
            .map(|(a, b)| {
                if i == 0 {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                }
            })
            .collect()
    }
}

/// Any of the three constraint kinds, as they appear in a context file.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Constraint {
    Positive(PositiveConstraint),
    Negative(NegativeConstraint),
    Egd(EgdConstraint),
}

impl Constraint {
    pub fn id(&self) -> &Symbol {
        match self {
            Constraint::Positive(c) => c.id(),
            Constraint::Negative(c) => c.id(),
            Constraint::Egd(c) => c.id(),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        match self {
            Constraint::Positive(c) => vec![c.body(), c.head()],
            Constraint::Negative(c) => c.atoms().iter().collect(),
            Constraint::Egd(c) => vec![c.atom1(), c.atom2()],
        }
    }
}

/// A user context: positive, negative (one- and two-atom) and key constraints.
/// The positive set is weakly acyclic; order within each set is file order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Context {
    positives: Vec<PositiveConstraint>,
    negatives1: Vec<NegativeConstraint>,
    negatives2: Vec<NegativeConstraint>,
    egds: Vec<EgdConstraint>,
}

impl Context {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Partitions `constraints` by kind and checks weak acyclicity.
    pub fn new(constraints: impl IntoIterator<Item = Constraint>) -> Result<Self, ModelError> {
        let mut ctx = Context::default();
        let mut ids = BTreeSet::new();
        for c in constraints {
            if !ids.insert(c.id().clone()) {
                return Err(ModelError::DuplicateConstraint(c.id().to_string()));
            }
            match c {
                Constraint::Positive(p) => ctx.positives.push(p),
                Constraint::Negative(n) if n.is_binary() => ctx.negatives2.push(n),
                Constraint::Negative(n) => ctx.negatives1.push(n),
                Constraint::Egd(e) => ctx.egds.push(e),
            }
        }
        check_weak_acyclicity(&ctx.positives)?;
        Ok(ctx)
    }

    pub fn positives(&self) -> &[PositiveConstraint] {
        &self.positives
    }

    pub fn negatives1(&self) -> &[NegativeConstraint] {
        &self.negatives1
    }

    pub fn negatives2(&self) -> &[NegativeConstraint] {
        &self.negatives2
    }

    pub fn egds(&self) -> &[EgdConstraint] {
        &self.egds
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives1.len() + self.negatives2.len() + self.egds.len()
    }

    /// All constraints, grouped by kind in the order positives, N1, N2, keys.
    pub fn constraints(&self) -> Vec<Constraint> {
        self.positives
            .iter()
            .cloned()
            .map(Constraint::Positive)
            .chain(self.negatives1.iter().cloned().map(Constraint::Negative))
            .chain(self.negatives2.iter().cloned().map(Constraint::Negative))
            .chain(self.egds.iter().cloned().map(Constraint::Egd))
            .collect()
    }

    /// Keeps only the constraints whose id is in `ids`.
    pub fn restrict(&self, ids: &[&str]) -> Context {
        let keep = |id: &Symbol| ids.contains(&id.as_str());
        Context {
            positives: self
                .positives
                .iter()
                .filter(|c| keep(c.id()))
                .cloned()
                .collect(),
            negatives1: self
                .negatives1
                .iter()
                .filter(|c| keep(c.id()))
                .cloned()
                .collect(),
            negatives2: self
                .negatives2
                .iter()
                .filter(|c| keep(c.id()))
                .cloned()
                .collect(),
            egds: self.egds.iter().filter(|c| keep(c.id())).cloned().collect(),
        }
    }
}
