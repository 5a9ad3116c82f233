use std::collections::BTreeMap;

use super::report::Violation;
use super::{EgdMode, MinPolicy, TrustPolicy};
use crate::chase::match_atom;
use crate::engine::{FactIndex, Matches, Pattern};
use crate::model::{
    Atom, Condition, Context, Degree, EgdConstraint, Fact, FederatedStore, NegativeConstraint,
    Symbol, Term,
};

type Binding = BTreeMap<Symbol, Term>;

fn bind(t: &Term, nu: &Binding) -> Term {
    match t {
        Term::Variable(v) => nu.get(v).cloned().unwrap_or_else(|| t.clone()),
        _ => t.clone(),
    }
}

fn bind_atom(a: &Atom, nu: &Binding) -> Atom {
    a.map_terms(|t| bind(t, nu))
}

/// First trusted fact matching `atom` under the equalities `pairs`.
fn first_match(atom: Atom, pairs: &[(Term, Term)], index: &FactIndex) -> Option<Fact> {
    let mut ms = Matches::new_unchecked(Pattern::new(&[atom], pairs), index);
    ms.advance()
        .then(|| index.fact(ms.chosen()[0]).fact.clone())
}

/// Violations of one negative constraint triggered by the ground atom `l`,
/// and whether `l` triggered it at all.
pub(crate) fn negative_on(
    l: &Fact,
    c: &NegativeConstraint,
    index: &FactIndex,
) -> (bool, Vec<Violation>) {
    let mut triggered = false;
    let mut out = Vec::new();
    let comparisons = |nu: &Binding| -> Vec<(Term, Term)> {
        c.comparisons()
            .iter()
            .map(|cmp| {
                (
                    bind(&Term::Variable(cmp.left().clone()), nu),
                    bind(cmp.right(), nu),
                )
            })
            .collect()
    };
    let atoms = c.atoms();
    for i in 0..atoms.len() {
        let Some(nu) = match_atom(&atoms[i], l.atom()) else {
            continue;
        };
        triggered = true;
        let pairs = comparisons(&nu);
        if atoms.len() == 1 {
            if pairs.iter().all(|(a, b)| a == b) {
                out.push(Violation {
                    condition: Condition::UnaryNegative,
                    constraint: c.id().clone(),
                    atom: l.atom().clone(),
                    evidence: Vec::new(),
                });
            }
        } else if let Some(other) = first_match(bind_atom(&atoms[1 - i], &nu), &pairs, index) {
            out.push(Violation {
                condition: Condition::BinaryNegative,
                constraint: c.id().clone(),
                atom: l.atom().clone(),
                evidence: vec![other],
            });
        }
    }
    (triggered, out)
}

/// Violations of one key constraint triggered by the ground atom `l`.
pub(crate) fn egd_on(
    l: &Fact,
    c: &EgdConstraint,
    index: &FactIndex,
    mode: EgdMode,
) -> (bool, Vec<Violation>) {
    let mut triggered = false;
    let mut out = Vec::new();
    for i in 0..2 {
        let Some(nu) = match_atom(c.side(i), l.atom()) else {
            continue;
        };
        triggered = true;
        let other = bind_atom(c.side(1 - i), &nu);
        let pairs: Vec<(Term, Term)> = c
            .oriented_equalities(i)
            .into_iter()
            .map(|(mine, theirs)| {
                (
                    bind(&Term::Variable(mine), &nu),
                    bind(&Term::Variable(theirs), &nu),
                )
            })
            .collect();
        let mut ms = Matches::new_unchecked(Pattern::new(std::slice::from_ref(&other), &[]), index);
        let mut any = false;
        let mut conflict = None;
        while ms.advance() {
            any = true;
            let clash = pairs
                .iter()
                .any(|(expected, t)| ms.value(t).map(Term::Constant).as_ref() != Some(expected));
            if clash {
                conflict = Some(index.fact(ms.chosen()[0]).fact.clone());
                break;
            }
        }
        let violation = |evidence| Violation {
            condition: Condition::Key,
            constraint: c.id().clone(),
            atom: l.atom().clone(),
            evidence,
        };
        match conflict {
            Some(f) => out.push(violation(vec![f])),
            None if !any && mode == EgdMode::Strict => out.push(violation(Vec::new())),
            None => {}
        }
    }
    (triggered, out)
}

/// Outcome of checking one witness fact against every negative and key constraint.
#[derive(Clone, Debug, Default)]
pub(crate) struct FactCheck {
    /// Aligned with [`checked_constraints`].
    pub triggered: Vec<bool>,
    pub violations: Vec<Violation>,
}

/// Conditions (b), (c), (d) in that order: two-atom negatives, one-atom
/// negatives, key constraints.
pub(crate) fn checked_constraints(ctx: &Context) -> Vec<(Condition, Symbol)> {
    ctx.negatives2()
        .iter()
        .map(|c| (Condition::BinaryNegative, c.id().clone()))
        .chain(
            ctx.negatives1()
                .iter()
                .map(|c| (Condition::UnaryNegative, c.id().clone())),
        )
        .chain(ctx.egds().iter().map(|c| (Condition::Key, c.id().clone())))
        .collect()
}

pub(crate) fn check_fact(l: &Fact, ctx: &Context, index: &FactIndex, mode: EgdMode) -> FactCheck {
    let mut out = FactCheck::default();
    let negatives = ctx.negatives2().iter().chain(ctx.negatives1());
    for c in negatives {
        let (t, v) = negative_on(l, c, index);
        out.triggered.push(t);
        out.violations.extend(v);
    }
    for c in ctx.egds() {
        let (t, v) = egd_on(l, c, index, mode);
        out.triggered.push(t);
        out.violations.extend(v);
    }
    out
}

/// Conditions (b) and (c) for a ground atom over the trusted facts at `tau_in`.
pub fn check_negative(
    l: &Fact,
    negatives: &[NegativeConstraint],
    store: &FederatedStore,
    tau_in: Degree,
) -> Vec<Violation> {
    let index = FactIndex::trusted(store, tau_in, |a, b| MinPolicy.admits(a, b));
    negatives
        .iter()
        .flat_map(|c| negative_on(l, c, &index).1)
        .collect()
}

/// Condition (d) for a ground atom over the trusted facts at `tau_in`.
pub fn check_egd(
    l: &Fact,
    egds: &[EgdConstraint],
    store: &FederatedStore,
    tau_in: Degree,
    mode: EgdMode,
) -> Vec<Violation> {
    let index = FactIndex::trusted(store, tau_in, |a, b| MinPolicy.admits(a, b));
    egds.iter()
        .flat_map(|c| egd_on(l, c, &index, mode).1)
        .collect()
}
