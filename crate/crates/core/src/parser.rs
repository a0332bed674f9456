//! Concrete syntax for formulas and sequents.
//!
//! ```text
//! formula  := disj [ "->" formula ]
//! disj     := conj { "|" conj }
//! conj     := unary { "&" unary }
//! unary    := "~" unary | quant | atom | "(" formula ")"
//! quant    := ("forall" | "exists") x "." formula
//!           | ("Forall" | "Exists") X ":" k "." formula
//! atom     := "True" | "False" | X [ "(" terms ")" ] | p [ "(" terms ")" ]
//!           | term ("=" | "!=" | "<" | "<=") term
//! term     := prod { "+" prod }
//! prod     := tatom { "*" tatom }
//! tatom    := n | x | f [ "(" terms ")" ] | "(" term ")"
//! ```
//!
//! Second-order variables start with an upper-case letter, first-order
//! variables with a lower-case one. `~A` and `A -> B` are sugar for the dual
//! and for `~A | B`; the resulting syntax tree never contains a negation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{
    Formula, Registry, SecondOrderVar, Sequent, Sign, Term, ADD, EQ, LE, LT, MUL, TRUE,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("arity error at {span}: `{symbol}` expects {expected} argument(s), found {found}")]
    Arity { span: SourceSpan, symbol: String, expected: usize, found: usize },
    #[error("unknown symbol `{name}` at {span}")]
    UnknownSymbol { span: SourceSpan, name: String },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::Arity { span, .. }
            | ParseError::UnknownSymbol { span, .. } => *span,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Eq,
    Ne,
    Lt,
    Le,
    Plus,
    Star,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Num(n) => return write!(f, "`{n}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Plus => "+",
            Tok::Star => "*",
        };
        write!(f, "`{s}`")
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let two = |b: u8| bytes.get(i + 1) == Some(&b);
        let (tok, len) = match c {
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b',' => (Tok::Comma, 1),
            b'.' => (Tok::Dot, 1),
            b':' => (Tok::Colon, 1),
            b'~' => (Tok::Tilde, 1),
            b'&' => (Tok::Amp, 1),
            b'|' => (Tok::Bar, 1),
            b'+' => (Tok::Plus, 1),
            b'*' => (Tok::Star, 1),
            b'=' => (Tok::Eq, 1),
            b'-' if two(b'>') => (Tok::Arrow, 2),
            b'!' if two(b'=') => (Tok::Ne, 2),
            b'<' if two(b'=') => (Tok::Le, 2),
            b'<' => (Tok::Lt, 1),
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n = text[i..j].parse::<u64>().map_err(|_| ParseError::Syntax {
                    span: SourceSpan::new(i, j),
                    message: "numeral out of range".into(),
                })?;
                (Tok::Num(n), j - i)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                {
                    j += 1;
                }
                (Tok::Ident(text[i..j].to_string()), j - i)
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    span: SourceSpan::new(i, i + ch.len_utf8()),
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += len;
        out.push((tok, SourceSpan::new(start, i)));
    }
    Ok(out)
}

const KEYWORDS: [&str; 6] = ["forall", "exists", "Forall", "Exists", "True", "False"];

fn is_second_order_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase()) && !KEYWORDS.contains(&s)
}

struct Parser<'a> {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    len: usize,
    registry: &'a Registry,
    bound2: Vec<SecondOrderVar>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, registry: &'a Registry) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, len: text.len(), registry, bound2: Vec::new() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or(SourceSpan::new(self.len, self.len))
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let message = message.into();
        let message = match self.peek() {
            Some(t) => format!("{message}, found {t}"),
            None => format!("{message}, found end of input"),
        };
        Err(ParseError::Syntax { span: self.span(), message })
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.error(format!("expected {tok}"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.bump();
                Ok(self.unary()?.dual())
            }
            Some(Tok::Ident(k)) if k == "forall" || k == "exists" => {
                let forall = k == "forall";
                self.bump();
                let x = match self.bump() {
                    Some(Tok::Ident(x)) if !is_second_order_name(&x) && !KEYWORDS.contains(&x.as_str()) => x,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected a first-order variable");
                    }
                };
                self.expect(&Tok::Dot)?;
                let body = self.formula()?;
                Ok(if forall { Formula::forall(x, body) } else { Formula::exists(x, body) })
            }
            Some(Tok::Ident(k)) if k == "Forall" || k == "Exists" => {
                let forall = k == "Forall";
                self.bump();
                let name = match self.bump() {
                    Some(Tok::Ident(x)) if is_second_order_name(&x) => x,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected a second-order variable");
                    }
                };
                self.expect(&Tok::Colon)?;
                let arity = match self.bump() {
                    Some(Tok::Num(n)) => n as usize,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected an arity");
                    }
                };
                self.expect(&Tok::Dot)?;
                let var = SecondOrderVar::new(name, arity);
                self.bound2.push(var.clone());
                let body = self.formula();
                self.bound2.pop();
                let body = body?;
                Ok(if forall { Formula::forall2(var, body) } else { Formula::exists2(var, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(k)) if k == "True" => {
                self.bump();
                Ok(Formula::truth())
            }
            Some(Tok::Ident(k)) if k == "False" => {
                self.bump();
                Ok(Formula::falsity())
            }
            Some(Tok::Ident(name)) if is_second_order_name(&name) => {
                let start = self.span().start;
                self.bump();
                let args = if self.peek() == Some(&Tok::LParen) { self.arg_list()? } else { vec![] };
                let span = SourceSpan::new(start, self.prev_end());
                if let Some(b) = self.bound2.iter().rev().find(|b| b.name == name) {
                    if b.arity != args.len() {
                        return Err(ParseError::Arity {
                            span,
                            symbol: name,
                            expected: b.arity,
                            found: args.len(),
                        });
                    }
                }
                Ok(Formula::Var { var: name, sign: Sign::Pos, args })
            }
            Some(Tok::Ident(name)) if self.registry.predicate(&name).is_some() => {
                let start = self.span().start;
                self.bump();
                let args = if self.peek() == Some(&Tok::LParen) { self.arg_list()? } else { vec![] };
                let span = SourceSpan::new(start, self.prev_end());
                let expected = self.registry.predicate(&name).map(|p| p.arity).unwrap_or(0);
                if expected != args.len() {
                    return Err(ParseError::Arity { span, symbol: name, expected, found: args.len() });
                }
                Ok(Formula::Pred { symbol: name, sign: Sign::Pos, args })
            }
            Some(Tok::LParen) => {
                let save = self.pos;
                if let Ok(atom) = self.comparison() {
                    return Ok(atom);
                }
                self.pos = save;
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(_) => self.comparison(),
            None => self.error("expected a formula"),
        }
    }

    fn comparison(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        let (symbol, sign) = match self.peek() {
            Some(Tok::Eq) => (EQ, Sign::Pos),
            Some(Tok::Ne) => (EQ, Sign::Neg),
            Some(Tok::Lt) => (LT, Sign::Pos),
            Some(Tok::Le) => (LE, Sign::Pos),
            _ => return self.error("expected `=`, `!=`, `<` or `<=`"),
        };
        self.bump();
        let rhs = self.term()?;
        Ok(Formula::Pred { symbol: symbol.into(), sign, args: vec![lhs, rhs] })
    }

    fn arg_list(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.product()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.product()?;
            acc = Term::add(acc, rhs);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.term_atom()?;
        while self.eat(&Tok::Star) {
            let rhs = self.term_atom()?;
            acc = Term::mul(acc, rhs);
        }
        Ok(acc)
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.bump();
                Ok(Term::Const(n))
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(name))
                if !is_second_order_name(&name) && !KEYWORDS.contains(&name.as_str()) =>
            {
                let span = self.span();
                if let Some(f) = self.registry.function(&name) {
                    let arity = f.arity;
                    self.bump();
                    let args = if self.peek() == Some(&Tok::LParen) { self.arg_list()? } else { vec![] };
                    if args.len() != arity {
                        return Err(ParseError::Arity {
                            span: SourceSpan::new(span.start, self.prev_end()),
                            symbol: name,
                            expected: arity,
                            found: args.len(),
                        });
                    }
                    return Ok(Term::Apply(name, args));
                }
                if self.registry.predicate(&name).is_some() {
                    return self.error("expected a term");
                }
                if self.peek_at(1) == Some(&Tok::LParen) {
                    return Err(ParseError::UnknownSymbol { span, name });
                }
                self.bump();
                Ok(Term::Var(name))
            }
            _ => self.error("expected a term"),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            return self.error("unexpected trailing input");
        }
        Ok(())
    }
}

pub fn parse_formula(text: &str, registry: &Registry) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, registry)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Comma-separated formulas; the empty string is the empty sequent.
pub fn parse_sequent(text: &str, registry: &Registry) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text, registry)?;
    let mut formulas = Vec::new();
    if p.peek().is_none() {
        return Ok(Sequent::default());
    }
    loop {
        formulas.push(p.formula()?);
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.finish()?;
    Ok(Sequent::new(formulas))
}

/// Parses a corpus: one sequent per line, `#` starts a comment, blank
/// lines are skipped. Each entry carries its 1-based line number.
pub fn parse_corpus(
    text: &str,
    registry: &Registry,
) -> Vec<(usize, Result<Sequent, ParseError>)> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| {
            let t = line.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, line)| (i + 1, parse_sequent(line, registry)))
        .collect()
}

pub fn render_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, 0);
    s
}

// Term precedence: 0 sum, 1 product, 2 atom.
fn write_term(out: &mut String, t: &Term, min_prec: u8) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Const(n) => out.push_str(&n.to_string()),
        Term::Apply(f, args) if args.len() == 2 && (f == ADD || f == MUL) => {
            let (prec, op) = if f == ADD { (0, " + ") } else { (1, " * ") };
            let paren = prec < min_prec;
            if paren {
                out.push('(');
            }
            write_term(out, &args[0], prec);
            out.push_str(op);
            write_term(out, &args[1], prec + 1);
            if paren {
                out.push(')');
            }
        }
        Term::Apply(f, args) => {
            out.push_str(f);
            if !args.is_empty() {
                write_args(out, args);
            }
        }
    }
}

fn write_args(out: &mut String, args: &[Term]) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(out, a, 0);
    }
    out.push(')');
}

/// Single-line rendering with minimal parentheses; `parse ∘ render` is
/// the identity on syntax trees.
pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, 0, true);
    s
}

pub fn render_sequent(s: &Sequent) -> String {
    s.formulas.iter().map(render_formula).collect::<Vec<_>>().join(", ")
}

fn write_atom(out: &mut String, f: &Formula) {
    match f {
        Formula::Pred { symbol, sign, args } => {
            let infix = match symbol.as_str() {
                EQ if args.len() == 2 => Some(if *sign == Sign::Pos { " = " } else { " != " }),
                LT if args.len() == 2 => Some(" < "),
                LE if args.len() == 2 => Some(" <= "),
                _ => None,
            };
            if symbol == TRUE && args.is_empty() {
                out.push_str(if *sign == Sign::Pos { "True" } else { "False" });
                return;
            }
            if *sign == Sign::Neg && symbol != EQ {
                out.push('~');
            }
            match infix {
                Some(op) => {
                    write_term(out, &args[0], 0);
                    out.push_str(op);
                    write_term(out, &args[1], 0);
                }
                None => {
                    out.push_str(symbol);
                    if !args.is_empty() {
                        write_args(out, args);
                    }
                }
            }
        }
        Formula::Var { var, sign, args } => {
            if *sign == Sign::Neg {
                out.push('~');
            }
            out.push_str(var);
            if !args.is_empty() {
                write_args(out, args);
            }
        }
        _ => unreachable!("write_atom on a compound formula"),
    }
}

// Formula precedence: 1 `|`, 2 `&`, 3 atoms. Quantifiers extend to the
// right, so they need parentheses exactly when something follows them.
fn write_formula(out: &mut String, f: &Formula, min_prec: u8, tail: bool) {
    match f {
        Formula::Pred { .. } | Formula::Var { .. } => write_atom(out, f),
        Formula::Or(a, b) | Formula::And(a, b) => {
            let (prec, op) = if matches!(f, Formula::Or(..)) { (1, " | ") } else { (2, " & ") };
            let paren = prec < min_prec;
            if paren {
                out.push('(');
            }
            write_formula(out, a, prec, false);
            out.push_str(op);
            write_formula(out, b, prec + 1, tail || paren);
            if paren {
                out.push(')');
            }
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let kw = if matches!(f, Formula::Forall(..)) { "forall" } else { "exists" };
            if !tail {
                out.push('(');
            }
            out.push_str(kw);
            out.push(' ');
            out.push_str(x);
            out.push_str(". ");
            write_formula(out, a, 0, true);
            if !tail {
                out.push(')');
            }
        }
        Formula::Forall2(v, a) | Formula::Exists2(v, a) => {
            let kw = if matches!(f, Formula::Forall2(..)) { "Forall" } else { "Exists" };
            if !tail {
                out.push('(');
            }
            out.push_str(&format!("{kw} {}:{}. ", v.name, v.arity));
            write_formula(out, a, 0, true);
            if !tail {
                out.push(')');
            }
        }
    }
}
