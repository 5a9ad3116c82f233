use std::io::{self, IsTerminal, Write};

use contextdl::text::render_fact_constant;
use contextdl::validator::{CandidateStatus, Validation, Violation};
use contextdl::{ScoredAnswer, Symbol, WitnessFact};

/// `(Bob)`, `(a,"x y")`, `()`.
pub fn tuple_text(tuple: &[Symbol]) -> String {
    let parts: Vec<String> = tuple
        .iter()
        .map(|c| render_fact_constant(c.as_str()))
        .collect();
    format!("({})", parts.join(","))
}

/// One `(<tuple>) : <tau>` line per answer, sorted by tuple.
pub fn write_answers(out: &mut dyn Write, answers: &[ScoredAnswer]) -> io::Result<()> {
    let mut sorted: Vec<&ScoredAnswer> = answers.iter().collect();
    sorted.sort_by(|a, b| a.tuple.cmp(&b.tuple));
    for a in sorted {
        writeln!(out, "{} : {}", tuple_text(&a.tuple), a.tau_out)?;
    }
    Ok(())
}

pub fn witness_fact_text(w: &WitnessFact) -> String {
    let sources: Vec<&str> = w.sources.iter().map(Symbol::as_str).collect();
    format!("{} [{} {}]", w.fact, sources.join(","), w.degree)
}

fn write_violation(out: &mut dyn Write, v: &Violation) -> io::Result<()> {
    writeln!(out, "  {v}")
}

/// Every candidate with its verdict: witness facts of the best witness for
/// valid answers, failing conditions for the rest.
pub fn write_explanation(out: &mut dyn Write, v: &Validation) -> io::Result<()> {
    let mut candidates: Vec<_> = v.report.candidates.iter().collect();
    candidates.sort_by(|a, b| a.tuple.cmp(&b.tuple));
    for c in candidates {
        let tuple = tuple_text(&c.tuple);
        match &c.status {
            CandidateStatus::Valid { tau_out, witnesses } => {
                writeln!(
                    out,
                    "% {tuple} valid : {tau_out} (provisional {})",
                    c.provisional
                )?;
                for w in &witnesses[0].facts {
                    writeln!(out, "  {}", witness_fact_text(w))?;
                }
            }
            CandidateStatus::BelowThreshold(tau) => {
                writeln!(
                    out,
                    "% {tuple} below threshold : {tau} (provisional {})",
                    c.provisional
                )?;
            }
            CandidateStatus::Rejected(violations) => {
                writeln!(out, "% {tuple} rejected (provisional {})", c.provisional)?;
                for f in violations {
                    write_violation(out, f)?;
                }
            }
        }
    }
    Ok(())
}

/// Error and warning lines on stderr, colored when `CONTEXTDL_COLOR` allows.
pub struct Diagnostics<'a> {
    out: &'a mut dyn Write,
    color: bool,
}

impl<'a> Diagnostics<'a> {
    pub fn new(out: &'a mut dyn Write, color: bool) -> Self {
        Diagnostics { out, color }
    }

    /// `auto` (the default) colors only when stderr is a terminal.
    pub fn color_from_env() -> bool {
        match std::env::var("CONTEXTDL_COLOR").as_deref() {
            Ok("never") => false,
            _ => io::stderr().is_terminal(),
        }
    }

    fn line(&mut self, label: &str, ansi: &str, msg: &dyn std::fmt::Display) {
        let _ = if self.color {
            writeln!(self.out, "\x1b[{ansi}m{label}:\x1b[0m {msg}")
        } else {
            writeln!(self.out, "{label}: {msg}")
        };
    }

    pub fn error(&mut self, msg: impl std::fmt::Display) {
        self.line("error", "1;31", &msg);
    }
}
