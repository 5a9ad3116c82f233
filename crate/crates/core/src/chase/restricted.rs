//! Restricted chase for linear TGDs.
//!
//! Passes repeat until nothing fires. In each pass constraints are taken in
//! input order and, for each constraint, candidate triggers in canonical atom
//! order. A trigger fires only when no extension of its body match already
//! satisfies the head; firing binds each existential variable to a fresh null.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::acyclicity::{is_weakly_acyclic, SpecialCycle};
use crate::model::{Atom, Homomorphism, NullGen, NullId, PositiveConstraint, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChaseError {
    #[error("positive constraints are not weakly acyclic: {0}")]
    NotWeaklyAcyclic(SpecialCycle),
    #[error("chase instance atom {0} contains a variable")]
    VariableInInstance(String),
    #[error("trace replay diverged at firing {index}: {reason}")]
    ReplayDiverged { index: usize, reason: String },
}

/// One rule application.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Firing {
    pub constraint: Symbol,
    pub trigger: Atom,
    /// Body match extended with the fresh nulls.
    pub bindings: Homomorphism,
    pub nulls: Vec<(Symbol, NullId)>,
    pub added: Atom,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NullRecord {
    pub null: NullId,
    pub variable: Symbol,
    pub constraint: Symbol,
    pub trigger: Atom,
}

#[derive(Clone, Debug, Default)]
pub struct ChaseResult {
    atoms: BTreeSet<Atom>,
    order: Vec<Atom>,
    input_len: usize,
    nulls: Vec<NullRecord>,
    trace: Vec<Firing>,
}

impl ChaseResult {
    /// All atoms, input included, in canonical order.
    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    /// Input atoms (deduplicated, input order) followed by added atoms in firing order.
    pub fn in_order(&self) -> &[Atom] {
        &self.order
    }

    pub fn added(&self) -> &[Atom] {
        &self.order[self.input_len..]
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn trace(&self) -> &[Firing] {
        &self.trace
    }

    pub fn nulls(&self) -> &[NullRecord] {
        &self.nulls
    }

    /// Re-applies the recorded firings to `input` and returns the resulting
    /// atom set. Fails if a trigger is missing or a firing produces a
    /// different atom than recorded.
    pub fn replay(
        &self,
        positives: &[PositiveConstraint],
        input: impl IntoIterator<Item = Atom>,
    ) -> Result<BTreeSet<Atom>, ChaseError> {
        let by_id: HashMap<&Symbol, &PositiveConstraint> =
            positives.iter().map(|c| (c.id(), c)).collect();
        let mut atoms: BTreeSet<Atom> = input.into_iter().collect();
        for (index, f) in self.trace.iter().enumerate() {
            let diverged = |reason: String| ChaseError::ReplayDiverged { index, reason };
            let c = by_id
                .get(&f.constraint)
                .ok_or_else(|| diverged(format!("unknown constraint {}", f.constraint)))?;
            if !atoms.contains(&f.trigger) {
                return Err(diverged(format!("trigger {} not present", f.trigger)));
            }
            let mut h = match_atom(c.body(), &f.trigger)
                .ok_or_else(|| diverged(format!("{} does not match {}", c.id(), f.trigger)))?;
            for (v, n) in &f.nulls {
                h.insert(v.clone(), Term::Null(*n));
            }
            let produced = instantiate(c.head(), &h);
            if produced != f.added {
                return Err(diverged(format!(
                    "produced {produced}, recorded {}",
                    f.added
                )));
            }
            atoms.insert(produced);
        }
        Ok(atoms)
    }
}

/// One-way match of a constraint atom onto an instance atom. Constraint
/// constants match only the identical constant; variables bind to any term.
pub(crate) fn match_atom(pattern: &Atom, target: &Atom) -> Option<BTreeMap<Symbol, Term>> {
    if pattern.predicate != target.predicate || pattern.arity() != target.arity() {
        return None;
    }
    let mut h = BTreeMap::new();
    for (p, t) in pattern.terms.iter().zip(&target.terms) {
        match p {
            Term::Variable(v) => match h.get(v) {
                Some(bound) if bound != t => return None,
                Some(_) => {}
                None => {
                    h.insert(v.clone(), t.clone());
                }
            },
            _ if p == t => {}
            _ => return None,
        }
    }
    Some(h)
}

fn instantiate(atom: &Atom, h: &BTreeMap<Symbol, Term>) -> Atom {
    atom.map_terms(|t| match t {
        Term::Variable(v) => h.get(v).cloned().unwrap_or_else(|| t.clone()),
        _ => t.clone(),
    })
}

/// Does some atom already satisfy `head` under `h`, with the unbound
/// (existential) head variables free?
fn head_satisfied<'a>(
    head: &Atom,
    h: &BTreeMap<Symbol, Term>,
    mut candidates: impl Iterator<Item = &'a Atom>,
) -> bool {
    candidates.any(|a| {
        let mut local: BTreeMap<&Symbol, &Term> = BTreeMap::new();
        head.terms.iter().zip(&a.terms).all(|(p, t)| match p {
            Term::Variable(v) => match h.get(v) {
                Some(bound) => bound == t,
                None => *local.entry(v).or_insert(t) == t,
            },
            _ => p == t,
        })
    })
}

/// Chases `instance` with `positives`. The instance may hold nulls but no
/// variables; fresh nulls are numbered above every null already present.
pub fn chase(
    positives: &[PositiveConstraint],
    instance: impl IntoIterator<Item = Atom>,
) -> Result<ChaseResult, ChaseError> {
    if let Some(cycle) = is_weakly_acyclic(positives).cycle {
        return Err(ChaseError::NotWeaklyAcyclic(cycle));
    }
    let instance: Vec<Atom> = instance.into_iter().collect();
    if let Some(a) = instance.iter().find(|a| a.has_variables()) {
        return Err(ChaseError::VariableInInstance(a.to_string()));
    }
    let mut nulls = NullGen::after(instance.iter().flat_map(|a| a.terms.iter()));
    Ok(chase_with(positives, instance, &mut nulls))
}

/// The chase loop. Variables in `instance` are treated as rigid values that
/// equal only themselves. The caller guarantees weak acyclicity.
pub(crate) fn chase_with(
    positives: &[PositiveConstraint],
    instance: Vec<Atom>,
    nulls: &mut NullGen,
) -> ChaseResult {
    let mut result = ChaseResult::default();
    let mut by_pred: HashMap<Symbol, BTreeSet<Atom>> = HashMap::new();
    for a in instance {
        if result.atoms.insert(a.clone()) {
            by_pred
                .entry(a.predicate.clone())
                .or_default()
                .insert(a.clone());
            result.order.push(a);
        }
    }
    result.input_len = result.order.len();

    let mut settled: HashSet<(usize, Atom)> = HashSet::new();
    loop {
        let mut changed = false;
        for (ci, c) in positives.iter().enumerate() {
            let triggers: Vec<Atom> = match by_pred.get(&c.body().predicate) {
                Some(set) => set.iter().cloned().collect(),
                None => continue,
            };
            for trigger in triggers {
                if settled.contains(&(ci, trigger.clone())) {
                    continue;
                }
                let Some(mut h) = match_atom(c.body(), &trigger) else {
                    settled.insert((ci, trigger));
                    continue;
                };
                let head_pred = &c.head().predicate;
                let satisfied = by_pred
                    .get(head_pred)
                    .is_some_and(|set| head_satisfied(c.head(), &h, set.iter()));
                settled.insert((ci, trigger.clone()));
                if satisfied {
                    continue;
                }
                let mut fresh = Vec::new();
                for z in c.existentials() {
                    let n = nulls.fresh();
                    result.nulls.push(NullRecord {
                        null: n,
                        variable: z.clone(),
                        constraint: c.id().clone(),
                        trigger: trigger.clone(),
                    });
                    h.insert(z.clone(), Term::Null(n));
                    fresh.push((z, n));
                }
                let added = instantiate(c.head(), &h);
                result.atoms.insert(added.clone());
                by_pred
                    .entry(head_pred.clone())
                    .or_default()
                    .insert(added.clone());
                result.order.push(added.clone());
                result.trace.push(Firing {
                    constraint: c.id().clone(),
                    trigger,
                    bindings: Homomorphism::from_pairs(
                        h.into_iter().map(|(v, t)| (Term::Variable(v), t)),
                    ),
                    nulls: fresh,
                    added,
                });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    result
}
