use std::fmt;

use super::atom::Fact;
use super::degree::Degree;
use super::homomorphism::Homomorphism;
use super::source::Provenance;
use super::term::Symbol;

/// The four conditions a candidate must pass to be a valid answer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Condition {
    /// Every chase consequence has a trusted witness.
    Witnessed,
    /// No two-atom negative constraint is completed by trusted facts.
    BinaryNegative,
    /// No one-atom negative constraint matches.
    UnaryNegative,
    /// Key constraints agree with trusted facts.
    Key,
}

impl Condition {
    pub fn letter(self) -> char {
        match self {
            Condition::Witnessed => 'a',
            Condition::BinaryNegative => 'b',
            Condition::UnaryNegative => 'c',
            Condition::Key => 'd',
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.letter())
    }
}

/// A fact used by an answer, the sources holding it and the degree charged for it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WitnessFact {
    pub fact: Fact,
    pub sources: Provenance,
    pub degree: Degree,
}

/// How many chase atoms triggered a constraint while the answer was checked.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CheckOutcome {
    pub condition: Condition,
    pub constraint: Symbol,
    pub triggered: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Witness {
    /// The body homomorphism `h_t`.
    pub body_match: Homomorphism,
    /// Grounding of the chase nulls into trusted facts.
    pub grounding: Homomorphism,
    /// Body facts followed by the grounded chase facts, without repeats.
    pub facts: Vec<WitnessFact>,
    pub checks: Vec<CheckOutcome>,
}

impl Witness {
    pub fn degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.facts.iter().map(|f| f.degree)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScoredAnswer {
    pub tuple: Vec<Symbol>,
    pub tau_out: Degree,
    pub witness: Witness,
}
