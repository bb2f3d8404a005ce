//! The structured-text value grammar shared by input documents and reports.
//!
//! ```text
//! document := IDENT value
//! value    := object | list | string | integer | 'true' | 'false' | IDENT
//! object   := '{' [ pair { ',' pair } [','] ] '}'
//! pair     := (IDENT | string) ':' value
//! list     := '[' [ value { ',' value } [','] ] ']'
//! ```
//!
//! Bare identifiers in value position are words (used for builtin names and
//! enum-like fields); `true`/`false` are booleans. Rendering is canonical and
//! deterministic, and `parse(render(v)) = v`.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct DocError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Object(Vec<(String, Value)>),
    List(Vec<Value>),
    Str(String),
    Int(i64),
    Bool(bool),
    Word(String),
}

impl Value {
    pub fn field<'a>(&'a self, key: &str) -> Option<&'a Value> {
        match self {
            Value::Object(pairs) => pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_usize(&self) -> Option<usize> {
        self.as_int().and_then(|i| usize::try_from(i).ok())
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&str> {
        match self {
            Value::Word(s) => Some(s),
            _ => None,
        }
    }

    /// String content of either a quoted string or a bare word.
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Str(s) | Value::Word(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Int(i64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, message: impl Into<String>) -> DocError {
        DocError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn bump_char(&mut self) -> Option<char> {
        let c = *self.src.get(self.pos)? as char;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek_char(&self) -> Option<char> {
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn tokens(mut self) -> Result<Vec<(usize, usize, Tok)>, DocError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek_char(), Some(c) if c.is_whitespace()) {
                self.bump_char();
            }
            // comments: '#' to end of line
            if self.peek_char() == Some('#') {
                while matches!(self.peek_char(), Some(c) if c != '\n') {
                    self.bump_char();
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek_char() else {
                return Ok(out);
            };
            let tok = match c {
                '{' => {
                    self.bump_char();
                    Tok::LBrace
                }
                '}' => {
                    self.bump_char();
                    Tok::RBrace
                }
                '[' => {
                    self.bump_char();
                    Tok::LBracket
                }
                ']' => {
                    self.bump_char();
                    Tok::RBracket
                }
                ':' => {
                    self.bump_char();
                    Tok::Colon
                }
                ',' => {
                    self.bump_char();
                    Tok::Comma
                }
                '"' => {
                    self.bump_char();
                    let mut s = String::new();
                    loop {
                        match self.bump_char() {
                            None => return Err(self.err("unterminated string")),
                            Some('"') => break,
                            Some('\\') => match self.bump_char() {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                other => {
                                    return Err(self.err(format!(
                                        "unknown escape `\\{}`",
                                        other.map(String::from).unwrap_or_default()
                                    )))
                                }
                            },
                            Some(c) => s.push(c),
                        }
                    }
                    Tok::Str(s)
                }
                c if c == '-' || c.is_ascii_digit() => {
                    let mut s = String::new();
                    s.push(c);
                    self.bump_char();
                    while matches!(self.peek_char(), Some(d) if d.is_ascii_digit()) {
                        s.push(self.bump_char().expect("peeked"));
                    }
                    let i = s
                        .parse::<i64>()
                        .map_err(|_| self.err(format!("bad integer `{s}`")))?;
                    Tok::Int(i)
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while matches!(self.peek_char(), Some(d) if d.is_alphanumeric() || d == '_' || d == '-')
                    {
                        s.push(self.bump_char().expect("peeked"));
                    }
                    Tok::Word(s)
                }
                other => return Err(self.err(format!("unexpected character `{other}`"))),
            };
            out.push((line, col, tok));
        }
    }
}

struct Parser {
    toks: Vec<(usize, usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or((0, 0), |&(l, c, _)| (l, c))
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, DocError> {
        let (line, col) = self.here();
        Err(DocError {
            line,
            col,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, _, t)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, _, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn value(&mut self) -> Result<Value, DocError> {
        match self.bump() {
            Some(Tok::LBrace) => {
                let mut pairs = Vec::new();
                if self.peek() == Some(&Tok::RBrace) {
                    self.pos += 1;
                    return Ok(Value::Object(pairs));
                }
                loop {
                    let key = match self.bump() {
                        Some(Tok::Word(w)) => w,
                        Some(Tok::Str(s)) => s,
                        _ => return self.err("expected a field name"),
                    };
                    match self.bump() {
                        Some(Tok::Colon) => {}
                        _ => return self.err(format!("expected `:` after field `{key}`")),
                    }
                    let v = self.value()?;
                    pairs.push((key, v));
                    match self.bump() {
                        Some(Tok::Comma) => {
                            if self.peek() == Some(&Tok::RBrace) {
                                self.pos += 1;
                                break;
                            }
                        }
                        Some(Tok::RBrace) => break,
                        _ => return self.err("expected `,` or `}` in object"),
                    }
                }
                Ok(Value::Object(pairs))
            }
            Some(Tok::LBracket) => {
                let mut items = Vec::new();
                if self.peek() == Some(&Tok::RBracket) {
                    self.pos += 1;
                    return Ok(Value::List(items));
                }
                loop {
                    items.push(self.value()?);
                    match self.bump() {
                        Some(Tok::Comma) => {
                            if self.peek() == Some(&Tok::RBracket) {
                                self.pos += 1;
                                break;
                            }
                        }
                        Some(Tok::RBracket) => break,
                        _ => return self.err("expected `,` or `]` in list"),
                    }
                }
                Ok(Value::List(items))
            }
            Some(Tok::Str(s)) => Ok(Value::Str(s)),
            Some(Tok::Int(i)) => Ok(Value::Int(i)),
            Some(Tok::Word(w)) => match w.as_str() {
                "true" => Ok(Value::Bool(true)),
                "false" => Ok(Value::Bool(false)),
                _ => Ok(Value::Word(w)),
            },
            _ => self.err("expected a value"),
        }
    }
}

/// Parse a tagged document: `tag value`.
pub fn parse_document(text: &str) -> Result<(String, Value), DocError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let tag = match p.bump() {
        Some(Tok::Word(w)) => w,
        _ => return p.err("expected a document tag (e.g. `monoid {...}`)"),
    };
    let value = p.value()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after the document");
    }
    Ok((tag, value))
}

fn ident_safe(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-')
        && s != "true"
        && s != "false"
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn scalar_only(items: &[Value]) -> bool {
    items
        .iter()
        .all(|v| matches!(v, Value::Str(_) | Value::Int(_) | Value::Bool(_) | Value::Word(_)))
        || items.iter().all(|v| match v {
            Value::List(inner) => scalar_only(inner),
            _ => false,
        })
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Object(pairs) => {
            if pairs.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (k, val) in pairs {
                for _ in 0..indent + 2 {
                    out.push(' ');
                }
                if ident_safe(k) {
                    out.push_str(k);
                } else {
                    let _ = write!(out, "\"{}\"", escape(k));
                }
                out.push_str(": ");
                render_value(val, indent + 2, out);
                out.push_str(",\n");
            }
            for _ in 0..indent {
                out.push(' ');
            }
            out.push('}');
        }
        Value::List(items) => {
            if items.is_empty() {
                out.push_str("[]");
            } else if scalar_only(items) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    render_value(item, indent, out);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for item in items {
                    for _ in 0..indent + 2 {
                        out.push(' ');
                    }
                    render_value(item, indent + 2, out);
                    out.push_str(",\n");
                }
                for _ in 0..indent {
                    out.push(' ');
                }
                out.push(']');
            }
        }
        Value::Str(s) => {
            let _ = write!(out, "\"{}\"", escape(s));
        }
        Value::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Word(w) => out.push_str(w),
    }
}

/// Canonical rendering of a tagged document, ending in a newline.
pub fn render_document(tag: &str, value: &Value) -> String {
    let mut out = String::new();
    out.push_str(tag);
    out.push(' ');
    render_value(value, 0, &mut out);
    out.push('\n');
    out
}

pub fn obj(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

pub fn ints(values: impl IntoIterator<Item = usize>) -> Value {
    Value::List(values.into_iter().map(|v| Value::Int(v as i64)).collect())
}

pub fn strs(values: impl IntoIterator<Item = String>) -> Value {
    Value::List(values.into_iter().map(Value::Str).collect())
}
