use std::fmt;

use crate::model::{Atom, Condition, Degree, Fact, ScoredAnswer, Symbol, Witness};

/// One concrete reason a candidate failed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Violation {
    pub condition: Condition,
    pub constraint: Symbol,
    /// For (a), the chase atom without a trusted witness; otherwise the
    /// witness fact that triggered the constraint.
    pub atom: Atom,
    /// Trusted facts completing the violation, if any.
    pub evidence: Vec<Fact>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.condition {
            Condition::Witnessed => write!(
                f,
                "{} {}: no trusted witness for {}",
                self.condition, self.constraint, self.atom
            )?,
            _ => write!(
                f,
                "{} {}: violated by {}",
                self.condition, self.constraint, self.atom
            )?,
        }
        for (i, e) in self.evidence.iter().enumerate() {
            let sep = if i == 0 { " with " } else { ", " };
            write!(f, "{sep}{e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CandidateStatus {
    /// Valid; all passing witnesses, best first.
    Valid {
        tau_out: Degree,
        witnesses: Vec<Witness>,
    },
    /// Every witness failed; the distinct failures found.
    Rejected(Vec<Violation>),
    /// Passed every check but the aggregated degree fell below `tau_in`.
    BelowThreshold(Degree),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CandidateReport {
    pub tuple: Vec<Symbol>,
    /// The candidate's degree before validation.
    pub provisional: Degree,
    pub status: CandidateStatus,
}

impl CandidateReport {
    pub fn is_valid(&self) -> bool {
        matches!(self.status, CandidateStatus::Valid { .. })
    }

    pub fn violations(&self) -> &[Violation] {
        match &self.status {
            CandidateStatus::Rejected(v) => v,
            _ => &[],
        }
    }
}

/// Per-candidate outcome, in tuple order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub candidates: Vec<CandidateReport>,
}

impl ValidationReport {
    pub fn candidate(&self, tuple: &[&str]) -> Option<&CandidateReport> {
        self.candidates
            .iter()
            .find(|c| c.tuple.iter().map(Symbol::as_str).eq(tuple.iter().copied()))
    }

    pub fn rejected(&self) -> impl Iterator<Item = &CandidateReport> + '_ {
        self.candidates.iter().filter(|c| !c.is_valid())
    }
}

/// Valid answers in tuple order and the report explaining them.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Validation {
    pub answers: Vec<ScoredAnswer>,
    pub report: ValidationReport,
}

impl Validation {
    /// `(tuple, tau_out)` pairs, the part two validators must agree on.
    pub fn scores(&self) -> Vec<(Vec<Symbol>, Degree)> {
        self.answers
            .iter()
            .map(|a| (a.tuple.clone(), a.tau_out))
            .collect()
    }

    /// Same answers, degrees and per-candidate verdicts.
    pub fn agrees_with(&self, other: &Validation) -> bool {
        let verdicts = |v: &Validation| -> Vec<(Vec<Symbol>, bool)> {
            v.report
                .candidates
                .iter()
                .map(|c| (c.tuple.clone(), c.is_valid()))
                .collect()
        };
        self.scores() == other.scores() && verdicts(self) == verdicts(other)
    }
}
