//! Textual formula syntax.
//!
//! ```text
//! formula     := implication
//! implication := disjunction [ '->' implication ]
//! disjunction := conjunction { 'or' conjunction }
//! conjunction := unary { 'and' unary }
//! unary       := 'not' unary | quantifier | atom
//! quantifier  := ('forall' | 'exists') IDENT 'in' term '.' formula
//!              | ('Forall' | 'Exists') IDENT '.' formula
//! atom        := 'true' | 'false' | term ('in' | '=') term | '(' formula ')'
//! term        := IDENT | '@' IDENT | '{' [ term { ',' term } ] '}'
//! ```
//!
//! Capitalised quantifiers are ranked (they range over a universe's top
//! stratum); lowercase ones are bounded by a term. A quantifier body extends
//! as far right as possible. Bare identifiers are variables, `@label` is the
//! atom with that label, and brace literals are ground hereditarily finite
//! sets. `parse(print(f)) = f` for every formula.

use thiserror::Error;

use crate::hf::{NodeId, NodeKind, Store};
use crate::logic::{Formula, Term};

#[derive(Debug, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct FormulaParseError {
    pub offset: usize,
    pub message: String,
}

const KEYWORDS: &[&str] = &[
    "forall", "exists", "Forall", "Exists", "not", "and", "or", "true", "false", "in",
];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    AtomRef(String),
    Arrow,
    Dot,
    Equals,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, FormulaParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            c if c.is_whitespace() => i += 1,
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(FormulaParseError {
                        offset: i,
                        message: "expected `->`".into(),
                    });
                }
            }
            '.' => {
                toks.push((i, Tok::Dot));
                i += 1;
            }
            '=' => {
                toks.push((i, Tok::Equals));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '{' => {
                toks.push((i, Tok::LBrace));
                i += 1;
            }
            '}' => {
                toks.push((i, Tok::RBrace));
                i += 1;
            }
            ',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            '@' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len()
                    && ((bytes[j] as char).is_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                if j == start {
                    return Err(FormulaParseError {
                        offset: i,
                        message: "`@` must be followed by an atom label".into(),
                    });
                }
                toks.push((i, Tok::AtomRef(input[start..j].to_string())));
                i = j;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < bytes.len()
                    && ((bytes[j] as char).is_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                toks.push((start, Tok::Ident(input[start..j].to_string())));
                i = j;
            }
            other => {
                return Err(FormulaParseError {
                    offset: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    store: &'a mut Store,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.input_len, |&(o, _)| o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormulaParseError> {
        Err(FormulaParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), FormulaParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident_is(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn formula(&mut self) -> Result<Formula, FormulaParseError> {
        let left = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let right = self.formula()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaParseError> {
        let mut left = self.conjunction()?;
        while self.ident_is("or") {
            self.pos += 1;
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaParseError> {
        let mut left = self.unary()?;
        while self.ident_is("and") {
            self.pos += 1;
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        if self.ident_is("not") {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        for (kw, bounded, universal) in [
            ("forall", true, true),
            ("exists", true, false),
            ("Forall", false, true),
            ("Exists", false, false),
        ] {
            if self.ident_is(kw) {
                self.pos += 1;
                let var = self.variable_name()?;
                let bound = if bounded {
                    match self.peek() {
                        Some(Tok::Ident(s)) if s == "in" => {
                            self.pos += 1;
                        }
                        _ => return self.err("expected `in` after the bounded quantifier variable"),
                    }
                    Some(self.term()?)
                } else {
                    None
                };
                self.expect(&Tok::Dot, "`.` before the quantifier body")?;
                let body = self.formula()?;
                return Ok(match (bound, universal) {
                    (Some(b), true) => Formula::ball(&var, b, body),
                    (Some(b), false) => Formula::bex(&var, b, body),
                    (None, true) => Formula::rall(&var, body),
                    (None, false) => Formula::rex(&var, body),
                });
            }
        }
        self.atom()
    }

    fn variable_name(&mut self) -> Result<String, FormulaParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a variable name"),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaParseError> {
        if self.ident_is("true") {
            self.pos += 1;
            return Ok(Formula::True);
        }
        if self.ident_is("false") {
            self.pos += 1;
            return Ok(Formula::False);
        }
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let f = self.formula()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(f);
        }
        let left = self.term()?;
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "in" => {
                self.pos += 1;
                let right = self.term()?;
                Ok(Formula::Member(left, right))
            }
            Some(Tok::Equals) => {
                self.pos += 1;
                let right = self.term()?;
                Ok(Formula::Equal(left, right))
            }
            _ => self.err("expected `in` or `=` after a term"),
        }
    }

    fn term(&mut self) -> Result<Term, FormulaParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(Term::Var(s))
            }
            Some(Tok::AtomRef(_)) | Some(Tok::LBrace) => {
                let node = self.const_node()?;
                Ok(Term::Const(node))
            }
            _ => self.err("expected a term"),
        }
    }

    fn const_node(&mut self) -> Result<NodeId, FormulaParseError> {
        match self.bump() {
            Some(Tok::AtomRef(label)) => {
                match self.store.atoms().labels().iter().position(|l| *l == label) {
                    Some(i) => Ok(self.store.atom(i).expect("position is in range")),
                    None => self.err(format!("unknown atom label `{label}`")),
                }
            }
            Some(Tok::LBrace) => {
                let mut children = Vec::new();
                if self.peek() == Some(&Tok::RBrace) {
                    self.pos += 1;
                    return Ok(self.store.make_set(&[]));
                }
                loop {
                    children.push(self.const_node()?);
                    match self.bump() {
                        Some(Tok::Comma) => continue,
                        Some(Tok::RBrace) => break,
                        _ => return self.err("expected `,` or `}` in a set literal"),
                    }
                }
                Ok(self.store.make_set(&children))
            }
            _ => self.err("set literals are ground: expected `@atom` or `{...}`"),
        }
    }
}

/// Parse a formula, interning any set literals into the store.
pub fn parse_formula(store: &mut Store, input: &str) -> Result<Formula, FormulaParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        store,
        input_len: input.len(),
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after the formula");
    }
    Ok(f)
}

/// Parse a ground term (`@atom` or `{...}` literal) into a node.
pub fn parse_node(store: &mut Store, input: &str) -> Result<NodeId, FormulaParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        store,
        input_len: input.len(),
    };
    let n = p.const_node()?;
    if p.pos != p.toks.len() {
        return Err(FormulaParseError {
            offset: input.len(),
            message: "trailing input after the term".into(),
        });
    }
    Ok(n)
}

/// Render a node as a ground term: `@label` for atoms, braces for sets.
pub fn print_node(store: &Store, node: NodeId) -> String {
    match store.kind(node) {
        NodeKind::Atom(i) => format!("@{}", store.atoms().label(*i)),
        NodeKind::Set(cs) => {
            let inner: Vec<String> = cs.iter().map(|&c| print_node(store, c)).collect();
            format!("{{{}}}", inner.join(", "))
        }
    }
}

fn print_term(store: &Store, t: &Term) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::Const(n) => print_node(store, *n),
    }
}

// context levels: 0 formula, 1 or-operand, 2 and-operand, 3 unary-operand
fn print_at(store: &Store, f: &Formula, level: u8, out: &mut String) {
    let wrap = |needed: u8| level > needed;
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Member(a, b) => {
            out.push_str(&print_term(store, a));
            out.push_str(" in ");
            out.push_str(&print_term(store, b));
        }
        Formula::Equal(a, b) => {
            out.push_str(&print_term(store, a));
            out.push_str(" = ");
            out.push_str(&print_term(store, b));
        }
        Formula::Not(g) => {
            out.push_str("not ");
            print_at(store, g, 3, out);
        }
        Formula::And(a, b) => {
            if wrap(2) {
                out.push('(');
            }
            print_at(store, a, 2, out);
            out.push_str(" and ");
            print_at(store, b, 3, out);
            if wrap(2) {
                out.push(')');
            }
        }
        Formula::Or(a, b) => {
            if wrap(1) {
                out.push('(');
            }
            print_at(store, a, 1, out);
            out.push_str(" or ");
            print_at(store, b, 2, out);
            if wrap(1) {
                out.push(')');
            }
        }
        Formula::Implies(a, b) => {
            if wrap(0) {
                out.push('(');
            }
            print_at(store, a, 1, out);
            out.push_str(" -> ");
            print_at(store, b, 0, out);
            if wrap(0) {
                out.push(')');
            }
        }
        Formula::BoundedAll { var, bound, body } | Formula::BoundedEx { var, bound, body } => {
            let kw = if matches!(f, Formula::BoundedAll { .. }) {
                "forall"
            } else {
                "exists"
            };
            if wrap(0) {
                out.push('(');
            }
            out.push_str(kw);
            out.push(' ');
            out.push_str(var);
            out.push_str(" in ");
            out.push_str(&print_term(store, bound));
            out.push_str(" . ");
            print_at(store, body, 0, out);
            if wrap(0) {
                out.push(')');
            }
        }
        Formula::RankedAll { var, body } | Formula::RankedEx { var, body } => {
            let kw = if matches!(f, Formula::RankedAll { .. }) {
                "Forall"
            } else {
                "Exists"
            };
            if wrap(0) {
                out.push('(');
            }
            out.push_str(kw);
            out.push(' ');
            out.push_str(var);
            out.push_str(" . ");
            print_at(store, body, 0, out);
            if wrap(0) {
                out.push(')');
            }
        }
    }
}

/// Canonical rendering; `parse_formula(store, &print_formula(store, f))`
/// rebuilds `f` exactly.
pub fn print_formula(store: &Store, f: &Formula) -> String {
    let mut out = String::new();
    print_at(store, f, 0, &mut out);
    out
}
