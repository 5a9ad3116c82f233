use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind};
use crate::model::{
    Atom, Comparison, ConjunctiveQuery, Constraint, Context, Degree, DegreeError, EgdConstraint,
    Fact, ModelError, NegativeConstraint, PositiveConstraint, Schema, SourceDatabase, Symbol, Term,
};

#[derive(Clone, Debug)]
enum RawTerm {
    /// Bare identifier, read by the file kind's convention.
    Ident(String),
    Const(String),
    Null(u64),
}

#[derive(Clone, Debug)]
struct RawAtom {
    predicate: String,
    args: Vec<RawTerm>,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
enum BodyItem {
    Atom(RawAtom),
    Eq(RawTerm, RawTerm, usize, usize),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn is_variable_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_uppercase() || c == '_')
}

/// Rule-file reading: uppercase-initial and `_`-initial identifiers are variables.
fn rule_term(t: &RawTerm) -> Term {
    match t {
        RawTerm::Ident(s) if is_variable_name(s) => Term::var(s),
        RawTerm::Ident(s) | RawTerm::Const(s) => Term::constant(s),
        RawTerm::Null(n) => Term::null(*n),
    }
}

/// Fact-file reading: every identifier is a constant.
fn fact_term(t: &RawTerm) -> Term {
    match t {
        RawTerm::Ident(s) | RawTerm::Const(s) => Term::constant(s),
        RawTerm::Null(n) => Term::null(*n),
    }
}

/// In a comparison, a variable-looking identifier that no body atom binds
/// can only be a constant (`C = Java`).
fn comparison_term(t: &RawTerm, bound: &BTreeSet<Symbol>) -> Term {
    match rule_term(t) {
        Term::Variable(v) if !bound.contains(&v) => Term::Constant(v),
        other => other,
    }
}

fn to_atom(raw: &RawAtom, read: impl Fn(&RawTerm) -> Term) -> Atom {
    Atom::new(raw.predicate.as_str(), raw.args.iter().map(read).collect())
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, ParseErrorKind::Syntax(msg.into()))
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_here(format!(
            "expected {wanted}, found {}",
            self.peek().describe()
        ))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn name(&mut self, wanted: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Number(s) => {
                self.bump();
                Ok(s)
            }
            Tok::Quoted(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn degree(&mut self) -> Result<Degree, ParseError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Number(s) => {
                self.bump();
                s.parse::<Degree>().map_err(|e| match e {
                    DegreeError::OutOfRange(s) => {
                        ParseError::new(line, col, ParseErrorKind::ConfidenceOutOfRange(s))
                    }
                    other => ParseError::new(line, col, ParseErrorKind::Syntax(other.to_string())),
                })
            }
            _ => Err(self.unexpected("a confidence degree")),
        }
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let t = match self.peek().clone() {
            Tok::Ident(s) => RawTerm::Ident(s),
            Tok::Hash(s) | Tok::Quoted(s) | Tok::Number(s) => RawTerm::Const(s),
            Tok::Null(n) => RawTerm::Null(n),
            _ => return Err(self.unexpected("a term")),
        };
        self.bump();
        Ok(t)
    }

    /// `pred(t1, ..., tn)`; with `allow_bare`, `pred` alone is a nullary atom.
    fn atom(&mut self, allow_bare: bool) -> Result<RawAtom, ParseError> {
        let (line, col) = self.here();
        let predicate = match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                s
            }
            _ => return Err(self.unexpected("a predicate name")),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            if *self.peek() != Tok::RParen {
                args.push(self.term()?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.term()?);
                }
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
        } else if !allow_bare {
            return Err(self.unexpected("`(`"));
        }
        Ok(RawAtom {
            predicate,
            args,
            line,
            col,
        })
    }

    /// Atoms and `t = t` comparisons separated by commas.
    fn body(&mut self) -> Result<Vec<BodyItem>, ParseError> {
        let mut items = vec![self.body_item()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.body_item()?);
        }
        Ok(items)
    }

    fn body_item(&mut self) -> Result<BodyItem, ParseError> {
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::LParen {
            return Ok(BodyItem::Atom(self.atom(false)?));
        }
        let (line, col) = self.here();
        let left = self
            .term()
            .map_err(|_| self.unexpected("an atom or a comparison"))?;
        self.expect(Tok::Eq, "`=`")?;
        let right = self.term()?;
        Ok(BodyItem::Eq(left, right, line, col))
    }
}

fn model_error(line: usize, col: usize, e: ModelError) -> ParseError {
    ParseError::new(line, col, ParseErrorKind::Model(e))
}

fn declare(
    schema: &mut Schema,
    atom: &Atom,
    line: usize,
    col: usize,
    origin: &str,
) -> Result<(), ParseError> {
    schema
        .declare_atom(atom, origin)
        .map_err(|e| model_error(line, col, e))
}

/// Parses `@source <id> @confidence <degree>` followed by facts `p(c1, ..., cn).`
pub fn parse_source_file(text: &str) -> Result<SourceDatabase, ParseError> {
    let mut p = Parser::new(text)?;
    let (id, tau) = parse_source_header(&mut p)?;
    let mut schema = Schema::new();
    let mut facts = Vec::new();
    while !p.at_eof() {
        let raw = p.atom(true)?;
        p.expect(Tok::Dot, "`.` after a fact")?;
        let atom = to_atom(&raw, fact_term);
        let fact = Fact::new(atom.clone()).map_err(|e| model_error(raw.line, raw.col, e))?;
        declare(
            &mut schema,
            &atom,
            raw.line,
            raw.col,
            &format!("source {id}"),
        )?;
        facts.push(fact);
    }
    SourceDatabase::new(id.as_str(), tau, facts).map_err(|e| model_error(1, 1, e))
}

fn parse_source_header(p: &mut Parser) -> Result<(String, Degree), ParseError> {
    match p.peek() {
        Tok::Directive(d) if d == "source" => {
            p.bump();
        }
        _ => return Err(p.unexpected("`@source <id> @confidence <degree>`")),
    }
    let id = p.name("a source id")?;
    match p.peek() {
        Tok::Directive(d) if d == "confidence" => {
            p.bump();
        }
        _ => return Err(p.unexpected("`@confidence`")),
    }
    Ok((id, p.degree()?))
}

/// Parses a chase instance: atoms in fact syntax, nulls allowed. A leading
/// `@source` header is accepted and ignored so source files can be chased.
pub fn parse_instance(text: &str) -> Result<Vec<Atom>, ParseError> {
    let mut p = Parser::new(text)?;
    if matches!(p.peek(), Tok::Directive(d) if d == "source") {
        parse_source_header(&mut p)?;
    }
    let mut schema = Schema::new();
    let mut atoms = Vec::new();
    while !p.at_eof() {
        let raw = p.atom(true)?;
        p.expect(Tok::Dot, "`.` after an atom")?;
        let atom = to_atom(&raw, fact_term);
        declare(&mut schema, &atom, raw.line, raw.col, "instance")?;
        atoms.push(atom);
    }
    Ok(atoms)
}

/// Parses rules `id: body -> head.` into a context. A head `false` makes a
/// negative constraint, a head of equalities makes a key constraint, and an
/// atom head makes a positive constraint.
pub fn parse_context_file(text: &str) -> Result<Context, ParseError> {
    let mut p = Parser::new(text)?;
    let mut constraints = Vec::new();
    let mut positions: BTreeMap<Symbol, (usize, usize)> = BTreeMap::new();
    let mut schema = Schema::new();
    while !p.at_eof() {
        let (line, col) = p.here();
        let id = p.name("a constraint id")?;
        p.expect(Tok::Colon, "`:` after the constraint id")?;
        let body = p.body()?;
        p.expect(Tok::Arrow, "`->`")?;
        let c = parse_rule_head(&mut p, &id, body, line, col)?;
        p.expect(Tok::Dot, "`.` at the end of the rule")?;
        for a in c.atoms() {
            declare(&mut schema, a, line, col, &format!("constraint {id}"))?;
        }
        positions.insert(Symbol::new(&id), (line, col));
        constraints.push(c);
    }
    Context::new(constraints).map_err(|e| {
        let (line, col) = match &e {
            ModelError::NotWeaklyAcyclic(cycle) => positions
                .get(&cycle.special_edge().constraint)
                .copied()
                .unwrap_or((1, 1)),
            ModelError::DuplicateConstraint(id) => {
                positions.get(id.as_str()).copied().unwrap_or((1, 1))
            }
            _ => (1, 1),
        };
        model_error(line, col, e)
    })
}

/// A comparison with the line and column where it starts.
type RawComparison = (RawTerm, RawTerm, usize, usize);

fn split_body(items: Vec<BodyItem>) -> (Vec<RawAtom>, Vec<RawComparison>) {
    let mut atoms = Vec::new();
    let mut eqs = Vec::new();
    for item in items {
        match item {
            BodyItem::Atom(a) => atoms.push(a),
            BodyItem::Eq(l, r, line, col) => eqs.push((l, r, line, col)),
        }
    }
    (atoms, eqs)
}

/// Orients `l = r` so the left side is a variable.
fn comparison(
    l: &RawTerm,
    r: &RawTerm,
    bound: &BTreeSet<Symbol>,
    line: usize,
    col: usize,
) -> Result<Comparison, ParseError> {
    let (l, r) = (comparison_term(l, bound), comparison_term(r, bound));
    let (left, right) = match (l, r) {
        (Term::Variable(v), other) => (v, other),
        (other, Term::Variable(v)) => (v, other),
        (a, b) => {
            return Err(model_error(
                line,
                col,
                ModelError::MalformedComparison(format!("{a} = {b}: one side must be a variable")),
            ))
        }
    };
    Comparison::new(left, right).map_err(|e| model_error(line, col, e))
}

fn parse_rule_head(
    p: &mut Parser,
    id: &str,
    body: Vec<BodyItem>,
    line: usize,
    col: usize,
) -> Result<Constraint, ParseError> {
    let malformed = |reason: &str| {
        model_error(
            line,
            col,
            ModelError::MalformedConstraint {
                id: id.to_string(),
                reason: reason.to_string(),
            },
        )
    };
    let (raw_atoms, raw_eqs) = split_body(body);
    let atoms: Vec<Atom> = raw_atoms.iter().map(|a| to_atom(a, rule_term)).collect();
    let bound: BTreeSet<Symbol> = atoms.iter().flat_map(Atom::variable_set).collect();

    let head_is_false =
        matches!(p.peek(), Tok::Ident(s) if s == "false") && *p.peek_at(1) != Tok::LParen;
    if head_is_false {
        p.bump();
        let comparisons = raw_eqs
            .iter()
            .map(|(l, r, line, col)| comparison(l, r, &bound, *line, *col))
            .collect::<Result<Vec<_>, _>>()?;
        return NegativeConstraint::new(id, atoms, comparisons)
            .map(Constraint::Negative)
            .map_err(|e| model_error(line, col, e));
    }

    if matches!(p.peek(), Tok::Ident(_)) && *p.peek_at(1) == Tok::LParen {
        let head = to_atom(&p.atom(false)?, rule_term);
        if !raw_eqs.is_empty() {
            return Err(malformed("positive constraints take no comparisons"));
        }
        let [body] = <[Atom; 1]>::try_from(atoms)
            .map_err(|_| malformed("positive constraints have exactly one body atom"))?;
        return PositiveConstraint::new(id, body, head)
            .map(Constraint::Positive)
            .map_err(|e| model_error(line, col, e));
    }

    // equality head: X1 = Y1, X2 = Y2, ...
    let mut pairs = Vec::new();
    loop {
        let (eline, ecol) = p.here();
        let l = rule_term(&p.term()?);
        p.expect(Tok::Eq, "`=` in the rule head")?;
        let r = rule_term(&p.term()?);
        match (l, r) {
            (Term::Variable(a), Term::Variable(b)) => pairs.push((a, b, eline, ecol)),
            _ => return Err(malformed("key constraint heads equate variables only")),
        }
        if *p.peek() != Tok::Comma {
            break;
        }
        p.bump();
    }
    if !raw_eqs.is_empty() {
        return Err(malformed("key constraints take no body comparisons"));
    }
    let [a1, a2] = <[Atom; 2]>::try_from(atoms)
        .map_err(|_| malformed("key constraints have exactly two body atoms"))?;
    let (v1, v2) = (a1.variable_set(), a2.variable_set());
    let equalities = pairs
        .into_iter()
        .map(|(a, b, _, _)| {
            if !(v1.contains(&a) && v2.contains(&b)) && v1.contains(&b) && v2.contains(&a) {
                (b, a)
            } else {
                (a, b)
            }
        })
        .collect();
    EgdConstraint::new(id, a1, a2, equalities)
        .map(Constraint::Egd)
        .map_err(|e| model_error(line, col, e))
}

fn parse_one_query(p: &mut Parser) -> Result<ConjunctiveQuery, ParseError> {
    let (line, col) = p.here();
    let head_raw = p.atom(false)?;
    p.expect(Tok::ColonDash, "`:-`")?;
    let (raw_atoms, raw_eqs) = split_body(p.body()?);
    let mut tau = None;
    if matches!(p.peek(), Tok::Directive(d) if d == "tau") {
        p.bump();
        tau = Some(p.degree()?);
    }
    let atoms: Vec<Atom> = raw_atoms.iter().map(|a| to_atom(a, rule_term)).collect();
    let mut schema = Schema::new();
    for (a, raw) in atoms.iter().zip(&raw_atoms) {
        declare(&mut schema, a, raw.line, raw.col, "the query body")?;
    }
    let bound: BTreeSet<Symbol> = atoms.iter().flat_map(Atom::variable_set).collect();
    let comparisons = raw_eqs
        .iter()
        .map(|(l, r, line, col)| comparison(l, r, &bound, *line, *col))
        .collect::<Result<Vec<_>, _>>()?;
    let head = to_atom(&head_raw, rule_term);
    ConjunctiveQuery::new(head, atoms, comparisons, tau).map_err(|e| model_error(line, col, e))
}

/// Parses `q(X, ...) :- atom, ..., X = t, ... @tau <degree>` with an optional final `.`.
pub fn parse_query(text: &str) -> Result<ConjunctiveQuery, ParseError> {
    let mut p = Parser::new(text)?;
    let q = parse_one_query(&mut p)?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(q)
}

/// Parses a query file: queries terminated by `.` (optional after the last one).
pub fn parse_query_file(text: &str) -> Result<Vec<ConjunctiveQuery>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while !p.at_eof() {
        out.push(parse_one_query(&mut p)?);
        if *p.peek() == Tok::Dot {
            p.bump();
        } else if !p.at_eof() {
            return Err(p.unexpected("`.` between queries"));
        }
    }
    Ok(out)
}
