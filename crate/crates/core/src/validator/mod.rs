//! Candidate answers with confidence, and the valid-answer filter.
//!
//! A candidate `t` is valid when, for some body match `h_t`, the chase of
//! `J = h_t(body(q))` by the positive constraints has a grounding `mu` of its
//! nulls into the trusted facts (condition (a)), and no fact of `mu(chase)`
//! triggers a violated two-atom negative constraint (b), one-atom negative
//! constraint (c) or key constraint (d). The degree of a valid answer
//! aggregates the degrees of all facts in `mu(chase)`, maximized over the
//! passing pairs `(h_t, mu)`.
//!
//! [`valid_answers`] chases every body match from scratch.
//! [`compiled_valid_answers`] chases one symbolic template per equality
//! pattern of the body match and memoizes the per-fact checks; both return
//! the same answers.

mod checks;
mod compiled;
mod naive;
mod policy;
mod report;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::engine::{EngineError, FactIndex, IndexedFact, MatchResult, Matches, Pattern};
use crate::model::{
    Atom, CheckOutcome, Condition, ConjunctiveQuery, Context, Degree, Fact, FederatedStore,
    Homomorphism, ModelError, Schema, ScoredAnswer, Symbol, Term, Witness, WitnessFact,
};

pub use checks::{check_egd, check_negative};
pub use compiled::compiled_valid_answers;
pub use naive::{candidate_answers, valid_answers};
pub use policy::{aggregate_confidence, MinPolicy, TrustPolicy};
pub use report::{CandidateReport, CandidateStatus, Validation, ValidationReport, Violation};

use checks::{checked_constraints, FactCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot aggregate an empty set of degrees")]
    EmptyDegreeSet,
}

/// How condition (d) treats a key sub-query with no answer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EgdMode {
    /// No second atom, no violation.
    #[default]
    Lenient,
    /// The answer must be exactly the expected singleton.
    Strict,
}

impl FromStr for EgdMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lenient" => Ok(EgdMode::Lenient),
            "strict" => Ok(EgdMode::Strict),
            other => Err(format!(
                "unknown key constraint mode `{other}` (expected strict or lenient)"
            )),
        }
    }
}

impl fmt::Display for EgdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EgdMode::Lenient => "lenient",
            EgdMode::Strict => "strict",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub egd_mode: EgdMode,
    pub policy: Arc<dyn TrustPolicy>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            egd_mode: EgdMode::Lenient,
            policy: Arc::new(MinPolicy),
        }
    }
}

impl Options {
    pub fn with_egd_mode(mut self, mode: EgdMode) -> Self {
        self.egd_mode = mode;
        self
    }
}

/// A valid-answer algorithm.
pub trait Validator: Send + Sync {
    fn name(&self) -> &str;

    fn validate(
        &self,
        q: &ConjunctiveQuery,
        tau_in: Degree,
        context: &Context,
        store: &FederatedStore,
        options: &Options,
    ) -> Result<Validation, ValidationError>;
}

/// Chases every body match separately.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaiveValidator;

impl Validator for NaiveValidator {
    fn name(&self) -> &str {
        "naive"
    }

    fn validate(
        &self,
        q: &ConjunctiveQuery,
        tau_in: Degree,
        context: &Context,
        store: &FederatedStore,
        options: &Options,
    ) -> Result<Validation, ValidationError> {
        valid_answers(q, tau_in, context, store, options)
    }
}

/// Reuses symbolic chase templates and memoized fact checks.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompiledValidator;

impl Validator for CompiledValidator {
    fn name(&self) -> &str {
        "compiled"
    }

    fn validate(
        &self,
        q: &ConjunctiveQuery,
        tau_in: Degree,
        context: &Context,
        store: &FederatedStore,
        options: &Options,
    ) -> Result<Validation, ValidationError> {
        compiled_valid_answers(q, tau_in, context, store, options)
    }
}

/// Trusted facts, with the context's predicates declared so constraint
/// sub-queries over predicates without facts simply find nothing.
pub(crate) fn trusted_index(
    store: &FederatedStore,
    tau_in: Degree,
    context: &Context,
    options: &Options,
) -> Result<FactIndex, ValidationError> {
    let policy = options.policy.clone();
    let mut index = FactIndex::trusted(store, tau_in, move |a, b| policy.admits(a, b));
    let mut schema = Schema::new();
    for c in context.constraints() {
        for a in c.atoms() {
            schema.declare_atom(a, &format!("constraint {}", c.id()))?;
        }
    }
    index.declare(&schema)?;
    Ok(index)
}

fn distinct_facts<'f>(facts: impl IntoIterator<Item = &'f IndexedFact>) -> Vec<WitnessFact> {
    let mut seen = HashSet::new();
    facts
        .into_iter()
        .filter(|f| seen.insert(&f.fact))
        .map(|f| WitnessFact {
            fact: f.fact.clone(),
            sources: f.sources.clone(),
            degree: f.degree,
        })
        .collect()
}

fn aggregate(options: &Options, facts: &[WitnessFact]) -> Result<Degree, ValidationError> {
    let degrees: Vec<Degree> = facts.iter().map(|f| f.degree).collect();
    options
        .policy
        .aggregate(&degrees)
        .ok_or(ValidationError::EmptyDegreeSet)
}

/// The chase of one answer image, in chase order.
pub(crate) struct Image<'c> {
    pub atoms: &'c [Atom],
    /// The constraint that added each atom; `None` for input atoms.
    pub producers: &'c [Option<Symbol>],
    /// Number of firings per positive constraint, in context order.
    pub firings: &'c [usize],
}

#[derive(Default)]
struct TupleState {
    provisional: Degree,
    passing: Vec<(Degree, Witness)>,
    failures: Vec<Violation>,
}

/// Accumulates per-candidate outcomes; shared by both validators.
pub(crate) struct Run<'a> {
    index: &'a FactIndex,
    context: &'a Context,
    options: &'a Options,
    checked: Vec<(Condition, Symbol)>,
    tuples: BTreeMap<Vec<Symbol>, TupleState>,
}

impl<'a> Run<'a> {
    pub fn new(index: &'a FactIndex, context: &'a Context, options: &'a Options) -> Self {
        Run {
            index,
            context,
            options,
            checked: checked_constraints(context),
            tuples: BTreeMap::new(),
        }
    }

    /// Records a body match and its provisional degree.
    pub fn candidate(&mut self, tuple: &[Symbol], m: &MatchResult) -> Result<(), ValidationError> {
        let degree = aggregate(self.options, &distinct_facts(&m.facts))?;
        let state = self.tuples.entry(tuple.to_vec()).or_default();
        state.provisional = state.provisional.max(degree);
        Ok(())
    }

    /// Checks conditions (a)-(d) for one body match whose chase is `image`.
    pub fn image(
        &mut self,
        tuple: &[Symbol],
        body_match: &Homomorphism,
        image: Image<'_>,
        check: &mut dyn FnMut(&Fact) -> FactCheck,
    ) -> Result<(), ValidationError> {
        let index = self.index;
        let nulls: Vec<Term> = {
            let mut seen = HashSet::new();
            image
                .atoms
                .iter()
                .flat_map(|a| a.nulls())
                .filter(|n| seen.insert(*n))
                .map(Term::Null)
                .collect()
        };
        let mut ms = Matches::new_unchecked(Pattern::new(image.atoms, &[]), index);
        let mut grounded = false;
        while ms.advance() {
            grounded = true;
            let facts = distinct_facts(ms.chosen().iter().map(|&i| index.fact(i)));
            let mut triggered = vec![0usize; self.checked.len()];
            let mut violations: Vec<Violation> = Vec::new();
            for f in &facts {
                let fc = check(&f.fact);
                for (count, hit) in triggered.iter_mut().zip(&fc.triggered) {
                    *count += usize::from(*hit);
                }
                for v in fc.violations {
                    if !violations.contains(&v) {
                        violations.push(v);
                    }
                }
            }
            let state = self.tuples.entry(tuple.to_vec()).or_default();
            if violations.is_empty() {
                let grounding = Homomorphism::from_pairs(nulls.iter().map(|n| {
                    let v = ms
                        .value(n)
                        .expect("every chase null is bound by a grounding");
                    (n.clone(), Term::Constant(v))
                }));
                let checks = self
                    .context
                    .positives()
                    .iter()
                    .zip(image.firings)
                    .map(|(c, &n)| CheckOutcome {
                        condition: Condition::Witnessed,
                        constraint: c.id().clone(),
                        triggered: n,
                    })
                    .chain(self.checked.iter().zip(&triggered).map(|((cond, id), &n)| {
                        CheckOutcome {
                            condition: *cond,
                            constraint: id.clone(),
                            triggered: n,
                        }
                    }))
                    .collect();
                let degree = aggregate(self.options, &facts)?;
                state.passing.push((
                    degree,
                    Witness {
                        body_match: body_match.clone(),
                        grounding,
                        facts,
                        checks,
                    },
                ));
            } else {
                for v in violations {
                    if !state.failures.contains(&v) {
                        state.failures.push(v);
                    }
                }
            }
        }
        if !grounded {
            let v = self.unwitnessed(&image);
            let state = self.tuples.entry(tuple.to_vec()).or_default();
            if !state.failures.contains(&v) {
                state.failures.push(v);
            }
        }
        Ok(())
    }

    /// The first chase atom whose addition leaves the chase prefix without a grounding.
    fn unwitnessed(&self, image: &Image<'_>) -> Violation {
        let len = image.atoms.len();
        let k = (1..=len)
            .find(|&k| {
                let mut ms =
                    Matches::new_unchecked(Pattern::new(&image.atoms[..k], &[]), self.index);
                !ms.advance()
            })
            .unwrap_or(len);
        let constraint = image.producers[k - 1]
            .clone()
            .unwrap_or_else(|| Symbol::new("query"));
        Violation {
            condition: Condition::Witnessed,
            constraint,
            atom: image.atoms[k - 1].clone(),
            evidence: Vec::new(),
        }
    }

    pub fn finish(self, tau_in: Degree) -> Validation {
        let mut out = Validation::default();
        for (tuple, state) in self.tuples {
            let status = if state.passing.is_empty() {
                CandidateStatus::Rejected(state.failures)
            } else {
                let mut best = 0;
                for (i, (d, _)) in state.passing.iter().enumerate() {
                    if *d > state.passing[best].0 {
                        best = i;
                    }
                }
                let tau_out = state.passing[best].0;
                let mut witnesses: Vec<Witness> = Vec::with_capacity(state.passing.len());
                let mut rest = state.passing.into_iter().map(|(_, w)| w);
                let mut before: Vec<Witness> = rest.by_ref().take(best).collect();
                witnesses.extend(rest.next());
                witnesses.append(&mut before);
                witnesses.extend(rest);
                if tau_in <= tau_out {
                    out.answers.push(ScoredAnswer {
                        tuple: tuple.clone(),
                        tau_out,
                        witness: witnesses[0].clone(),
                    });
                    CandidateStatus::Valid { tau_out, witnesses }
                } else {
                    CandidateStatus::BelowThreshold(tau_out)
                }
            };
            out.report.candidates.push(CandidateReport {
                tuple,
                provisional: state.provisional,
                status,
            });
        }
        out
    }
}
