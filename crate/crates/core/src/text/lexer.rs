use super::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Bare identifier; its reading (constant or variable) depends on the file kind.
    Ident(String),
    /// `#Name`: always a constant.
    Hash(String),
    Quoted(String),
    Number(String),
    Null(u64),
    /// `@source`, `@confidence`, `@tau`
    Directive(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    ColonDash,
    Arrow,
    Eq,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Hash(s) => format!("constant `#{s}`"),
            Tok::Quoted(s) => format!("string {s:?}"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Null(n) => format!("null `_:n{n}`"),
            Tok::Directive(s) => format!("`@{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::ColonDash => "`:-`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        let (line, col) = (cur.line, cur.col);
        let err = |msg: String| ParseError::new(line, col, ParseErrorKind::Syntax(msg));
        let Some(c) = cur.peek() else {
            out.push(Token {
                tok: Tok::Eof,
                line,
                col,
            });
            return Ok(out);
        };
        let tok = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '%' => {
                cur.take_while(|c| c != '\n');
                continue;
            }
            '(' | ')' | ',' | '.' | '=' => {
                cur.bump();
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    _ => Tok::Eq,
                }
            }
            ':' => {
                cur.bump();
                if cur.peek() == Some('-') {
                    cur.bump();
                    Tok::ColonDash
                } else {
                    Tok::Colon
                }
            }
            '-' => {
                cur.bump();
                if cur.peek() == Some('>') {
                    cur.bump();
                    Tok::Arrow
                } else {
                    return Err(err("expected `->`".into()));
                }
            }
            '@' => {
                cur.bump();
                let name = cur.take_while(is_ident_char);
                if name.is_empty() {
                    return Err(err("expected a directive name after `@`".into()));
                }
                Tok::Directive(name)
            }
            '#' => {
                cur.bump();
                let name = cur.take_while(is_ident_char);
                if name.is_empty() {
                    return Err(err("expected a name after `#`".into()));
                }
                Tok::Hash(name)
            }
            '"' => {
                cur.bump();
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        None => return Err(err("unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => match cur.bump() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some(other) => return Err(err(format!("unknown escape `\\{other}`"))),
                            None => return Err(err("unterminated string".into())),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Quoted(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = cur.take_while(|c| c.is_ascii_digit());
                // a fraction needs a digit after the dot; `1.` is a number then a terminator
                let mut ahead = cur.chars.clone();
                if ahead.next() == Some('.') && ahead.next().is_some_and(|c| c.is_ascii_digit()) {
                    cur.bump();
                    s.push('.');
                    s.push_str(&cur.take_while(|c| c.is_ascii_digit()));
                }
                Tok::Number(s)
            }
            c if is_ident_start(c) => {
                let mut ahead = cur.chars.clone();
                ahead.next();
                if c == '_' && ahead.peek() == Some(&':') {
                    cur.bump();
                    cur.bump();
                    if cur.bump() != Some('n') {
                        return Err(err("expected a null of the form `_:nK`".into()));
                    }
                    let digits = cur.take_while(|c| c.is_ascii_digit());
                    let n = digits
                        .parse()
                        .map_err(|_| err("expected a null of the form `_:nK`".into()))?;
                    Tok::Null(n)
                } else {
                    Tok::Ident(cur.take_while(is_ident_char))
                }
            }
            other => {
                return Err(err(format!("unexpected character `{other}`")));
            }
        };
        out.push(Token { tok, line, col });
    }
}
