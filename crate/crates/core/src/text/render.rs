use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use super::lexer::{is_ident_char, is_ident_start};
use crate::model::{
    Atom, Comparison, ConjunctiveQuery, Constraint, Context, EgdConstraint, Fact,
    NegativeConstraint, PositiveConstraint, SourceDatabase, Term,
};

fn is_number(s: &str) -> bool {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (s, None),
    };
    let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
    digits(int) && frac.is_none_or(digits)
}

fn is_word(s: &str) -> bool {
    s.starts_with(is_ident_start) && s.chars().all(is_ident_char)
}

fn quoted(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A constant as written in rule syntax: bare when it cannot be read as a
/// variable, `#Name` when capitalized, quoted otherwise.
pub fn render_constant(s: &str) -> String {
    if is_number(s) {
        s.to_string()
    } else if is_word(s) {
        if s.starts_with(|c: char| c.is_uppercase() || c == '_') {
            format!("#{s}")
        } else {
            s.to_string()
        }
    } else {
        quoted(s)
    }
}

/// A constant as written in fact syntax, where every identifier is a constant.
pub fn render_fact_constant(s: &str) -> String {
    if is_number(s) || is_word(s) {
        s.to_string()
    } else {
        quoted(s)
    }
}

fn write_atom(f: &mut impl fmt::Write, a: &Atom, fact_syntax: bool) -> fmt::Result {
    write!(f, "{}(", render_fact_constant(a.predicate.as_str()))?;
    for (i, t) in a.terms.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        match t {
            Term::Constant(c) if fact_syntax => f.write_str(&render_fact_constant(c.as_str()))?,
            t => write!(f, "{t}")?,
        }
    }
    f.write_str(")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(c) => f.write_str(&render_constant(c.as_str())),
            Term::Variable(v) => f.write_str(v.as_str()),
            Term::Null(n) => write!(f, "{n}"),
        }
    }
}

/// Atoms without variables print in fact syntax, others in rule syntax.
impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, self, !self.has_variables())
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, self.atom(), true)
    }
}

fn rule_atom(a: &Atom) -> String {
    let mut s = String::new();
    write_atom(&mut s, a, false).expect("writing to a String");
    s
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left(), self.right())
    }
}

fn body_text(atoms: &[Atom], comparisons: &[Comparison]) -> String {
    atoms
        .iter()
        .map(rule_atom)
        .chain(comparisons.iter().map(ToString::to_string))
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} :- {}",
            rule_atom(self.head()),
            body_text(self.body(), self.comparisons())
        )?;
        if let Some(tau) = self.tau_in() {
            write!(f, " @tau {tau}")?;
        }
        Ok(())
    }
}

impl fmt::Display for PositiveConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {}",
            render_fact_constant(self.id().as_str()),
            rule_atom(self.body()),
            rule_atom(self.head())
        )
    }
}

impl fmt::Display for NegativeConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> false",
            render_fact_constant(self.id().as_str()),
            body_text(self.atoms(), self.comparisons())
        )
    }
}

impl fmt::Display for EgdConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = self
            .equalities()
            .iter()
            .map(|(a, b)| format!("{a} = {b}"))
            .collect::<Vec<_>>()
            .join(", ");
        write!(
            f,
            "{}: {}, {} -> {head}",
            render_fact_constant(self.id().as_str()),
            rule_atom(self.atom1()),
            rule_atom(self.atom2())
        )
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Positive(c) => c.fmt(f),
            Constraint::Negative(c) => c.fmt(f),
            Constraint::Egd(c) => c.fmt(f),
        }
    }
}

/// Header line, then one fact per line sorted by predicate and arguments.
pub fn render_source(s: &SourceDatabase) -> String {
    let mut out = format!(
        "@source {} @confidence {}\n",
        render_fact_constant(s.id().as_str()),
        s.tau()
    );
    for fact in s.facts() {
        let _ = writeln!(out, "{fact}.");
    }
    out
}

/// One rule per line: positive, one-atom negative, two-atom negative, then key constraints.
pub fn render_context(ctx: &Context) -> String {
    ctx.constraints()
        .iter()
        .map(|c| format!("{c}.\n"))
        .collect()
}

pub fn render_query(q: &ConjunctiveQuery) -> String {
    q.to_string()
}

pub fn render_queries(qs: &[ConjunctiveQuery]) -> String {
    qs.iter().map(|q| format!("{q}.\n")).collect()
}

/// Distinct atoms in canonical order, one per line, in fact syntax.
pub fn render_instance<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> String {
    let sorted: BTreeSet<&Atom> = atoms.into_iter().collect();
    let mut out = String::new();
    for a in sorted {
        let _ = write_atom(&mut out, a, true);
        out.push_str(".\n");
    }
    out
}
