//! Homomorphism enumeration: atom-at-a-time backtracking over a [`FactIndex`].
//!
//! Comparisons are folded into the pattern before matching. `X = a`
//! substitutes `a` for `X`; `X = Y` makes both variables share one slot.
//! Variables and nulls of the pattern are both treated as slots, so a null
//! shared between two atoms must be bound to the same constant in both.

use thiserror::Error;

use super::index::{FactIndex, IndexedFact};
use crate::model::{Atom, Comparison, Homomorphism, Symbol, Term};
use crate::util::TermClasses;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("atom {atom} has arity {found} but `{predicate}` has arity {expected}")]
    ArityMismatch {
        atom: String,
        predicate: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Slotted {
    Const(Symbol),
    Slot(usize),
}

/// A pattern with comparisons folded in, ready to be matched.
#[derive(Clone, Debug)]
pub struct Pattern {
    atoms: Vec<Atom>,
    compiled: Vec<Vec<Slotted>>,
    /// Every variable or null of the pattern and comparisons, with its resolution.
    terms: Vec<(Term, Slotted)>,
    slot_count: usize,
    contradiction: bool,
}

impl Pattern {
    /// `comparisons` are equalities between arbitrary terms; a pair of
    /// distinct constants makes the pattern unsatisfiable.
    pub fn new(atoms: &[Atom], comparisons: &[(Term, Term)]) -> Pattern {
        let mut classes = TermClasses::new();
        let mut contradiction = false;
        for (a, b) in comparisons {
            if classes.union(a, b).is_err() {
                contradiction = true;
            }
        }
        let mut reps: Vec<Term> = Vec::new();
        let mut terms: Vec<(Term, Slotted)> = Vec::new();
        let mut resolve = |t: &Term, terms: &mut Vec<(Term, Slotted)>| -> Slotted {
            if let Term::Constant(c) = t {
                return Slotted::Const(c.clone());
            }
            if let Some((_, s)) = terms.iter().find(|(u, _)| u == t) {
                return s.clone();
            }
            let s = match classes.find(t) {
                Term::Constant(c) => Slotted::Const(c),
                rep => match reps.iter().position(|r| *r == rep) {
                    Some(i) => Slotted::Slot(i),
                    None => {
                        reps.push(rep);
                        Slotted::Slot(reps.len() - 1)
                    }
                },
            };
            terms.push((t.clone(), s.clone()));
            s
        };
        let compiled: Vec<Vec<Slotted>> = atoms
            .iter()
            .map(|a| a.terms.iter().map(|t| resolve(t, &mut terms)).collect())
            .collect();
        for (a, b) in comparisons {
            resolve(a, &mut terms);
            resolve(b, &mut terms);
        }
        Pattern {
            atoms: atoms.to_vec(),
            compiled,
            terms,
            slot_count: reps.len(),
            contradiction,
        }
    }

    pub fn with_comparisons(atoms: &[Atom], comparisons: &[Comparison]) -> Pattern {
        let pairs: Vec<(Term, Term)> = comparisons
            .iter()
            .map(|c| (Term::Variable(c.left().clone()), c.right().clone()))
            .collect();
        Pattern::new(atoms, &pairs)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_contradictory(&self) -> bool {
        self.contradiction
    }

    /// Every predicate must be declared with the atom's arity.
    pub fn check(&self, index: &FactIndex) -> Result<(), EngineError> {
        for a in &self.atoms {
            match index.schema().arity(a.predicate.as_str()) {
                None => return Err(EngineError::UnknownPredicate(a.predicate.to_string())),
                Some(expected) if expected != a.arity() => {
                    return Err(EngineError::ArityMismatch {
                        atom: a.to_string(),
                        predicate: a.predicate.to_string(),
                        expected,
                        found: a.arity(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// One homomorphism from the pattern into the fact set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchResult {
    /// Maps every variable and null of the pattern to a constant.
    pub homomorphism: Homomorphism,
    /// `h(pattern[i])` for each pattern atom, in pattern order.
    pub facts: Vec<IndexedFact>,
}

struct Frame<'a> {
    candidates: &'a [usize],
    next: usize,
    trail_start: usize,
}

/// Lazy, deterministic enumeration of matches.
pub struct Matches<'a> {
    index: &'a FactIndex,
    pattern: Pattern,
    bindings: Vec<Option<Symbol>>,
    trail: Vec<usize>,
    chosen: Vec<usize>,
    stack: Vec<Frame<'a>>,
    started: bool,
    finished: bool,
}

/// Enumerates every `h` with `h(atoms) ⊆ index` satisfying `comparisons`.
pub fn homomorphisms<'a>(
    atoms: &[Atom],
    comparisons: &[Comparison],
    index: &'a FactIndex,
) -> Result<Matches<'a>, EngineError> {
    Matches::new(Pattern::with_comparisons(atoms, comparisons), index)
}

impl<'a> Matches<'a> {
    pub fn new(pattern: Pattern, index: &'a FactIndex) -> Result<Self, EngineError> {
        pattern.check(index)?;
        Ok(Self::new_unchecked(pattern, index))
    }

    /// Skips the schema check; predicates missing from the index simply have no facts.
    pub(crate) fn new_unchecked(pattern: Pattern, index: &'a FactIndex) -> Self {
        let slots = pattern.slot_count;
        Matches {
            index,
            finished: pattern.contradiction,
            pattern,
            bindings: vec![None; slots],
            trail: Vec::new(),
            chosen: Vec::new(),
            stack: Vec::new(),
            started: false,
        }
    }

    fn candidates(&self, depth: usize) -> &'a [usize] {
        let pred = &self.pattern.atoms[depth].predicate;
        let mut best: Option<&'a [usize]> = None;
        for (pos, s) in self.pattern.compiled[depth].iter().enumerate() {
            let value = match s {
                Slotted::Const(c) => Some(c),
                Slotted::Slot(i) => self.bindings[*i].as_ref(),
            };
            if let Some(v) = value {
                let list = self.index.by_argument(pred, pos, v);
                if best.is_none_or(|b| list.len() < b.len()) {
                    best = Some(list);
                }
            }
        }
        best.unwrap_or_else(|| self.index.by_predicate(pred))
    }

    fn try_bind(&mut self, depth: usize, fact_idx: usize) -> bool {
        let fact = &self.index.fact(fact_idx).fact;
        let pattern = &self.pattern.compiled[depth];
        if fact.arity() != pattern.len() {
            return false;
        }
        for (pos, s) in pattern.iter().enumerate() {
            let arg = fact.arg(pos);
            match s {
                Slotted::Const(c) => {
                    if c != arg {
                        return false;
                    }
                }
                Slotted::Slot(i) => match &self.bindings[*i] {
                    Some(b) if b != arg => return false,
                    Some(_) => {}
                    None => {
                        self.bindings[*i] = Some(arg.clone());
                        self.trail.push(*i);
                    }
                },
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().unwrap();
            self.bindings[i] = None;
        }
    }

    /// Moves to the next match. Returns false once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.finished {
            return false;
        }
        if !self.started {
            self.started = true;
            if self.pattern.atoms.is_empty() {
                self.finished = true;
                return true;
            }
            let candidates = self.candidates(0);
            self.stack.push(Frame {
                candidates,
                next: 0,
                trail_start: 0,
            });
        }
        loop {
            let Some(frame) = self.stack.last() else {
                self.finished = true;
                return false;
            };
            let depth = self.stack.len() - 1;
            let mark = frame.trail_start;
            self.undo_to(mark);
            self.chosen.truncate(depth);
            let frame = self.stack.last_mut().unwrap();
            if frame.next >= frame.candidates.len() {
                self.stack.pop();
                continue;
            }
            let fact_idx = frame.candidates[frame.next];
            frame.next += 1;
            if !self.try_bind(depth, fact_idx) {
                continue;
            }
            self.chosen.push(fact_idx);
            if depth + 1 == self.pattern.atoms.len() {
                return true;
            }
            let candidates = self.candidates(depth + 1);
            self.stack.push(Frame {
                candidates,
                next: 0,
                trail_start: self.trail.len(),
            });
        }
    }

    /// Value of a pattern term under the current match.
    pub fn value(&self, t: &Term) -> Option<Symbol> {
        if let Term::Constant(c) = t {
            return Some(c.clone());
        }
        let (_, s) = self.pattern.terms.iter().find(|(u, _)| u == t)?;
        match s {
            Slotted::Const(c) => Some(c.clone()),
            Slotted::Slot(i) => self.bindings[*i].clone(),
        }
    }

    /// Index positions of the matched facts, in pattern order.
    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn index(&self) -> &'a FactIndex {
        self.index
    }

    pub fn current(&self) -> MatchResult {
        let homomorphism = Homomorphism::from_pairs(self.pattern.terms.iter().map(|(t, s)| {
            let v = match s {
                Slotted::Const(c) => c.clone(),
                Slotted::Slot(i) => self.bindings[*i].clone().expect("slot bound after match"),
            };
            (t.clone(), Term::Constant(v))
        }));
        MatchResult {
            homomorphism,
            facts: self
                .chosen
                .iter()
                .map(|&i| self.index.fact(i).clone())
                .collect(),
        }
    }
}

impl Iterator for Matches<'_> {
    type Item = MatchResult;

    fn next(&mut self) -> Option<MatchResult> {
        self.advance().then(|| self.current())
    }
}
