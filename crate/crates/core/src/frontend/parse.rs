use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::{Polynomial, Rational, RationalFunction, Symbol, SymbolTable};
use crate::series::MultiIndex;

use super::FrontendError;

/// Text with the file position of every byte, so errors in values that
/// span continuation lines still point at the right place.
#[derive(Clone, Debug)]
pub struct Located {
    pub text: String,
    pub pos: Vec<(usize, usize)>,
}

impl Located {
    /// A standalone string starting at line 1, column 1.
    pub fn plain(text: &str) -> Located {
        let mut pos = Vec::with_capacity(text.len());
        let (mut line, mut col) = (1, 1);
        for b in text.bytes() {
            pos.push((line, col));
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Located { text: text.to_string(), pos }
    }

    pub fn at(&self, byte: usize) -> (usize, usize) {
        match self.pos.get(byte) {
            Some(&p) => p,
            None => self.pos.last().map_or((1, 1), |&(l, c)| (l, c + 1)),
        }
    }

    pub fn slice(&self, from: usize, to: usize) -> Located {
        Located { text: self.text[from..to].to_string(), pos: self.pos[from..to].to_vec() }
    }

    /// Strips surrounding whitespace, keeping positions aligned.
    pub fn trim(&self) -> Located {
        let start = self.text.len() - self.text.trim_start().len();
        let end = self.text.trim_end().len().max(start);
        self.slice(start, end)
    }

    /// Splits on `sep` outside parentheses.
    pub fn split_top(&self, sep: char) -> Vec<Located> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in self.text.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                c if c == sep && depth == 0 => {
                    out.push(self.slice(start, i).trim());
                    start = i + ch.len_utf8();
                }
                _ => {}
            }
        }
        out.push(self.slice(start, self.text.len()).trim());
        out
    }

    /// Splits once on a literal separator.
    pub fn split_once(&self, sep: &str) -> Option<(Located, Located)> {
        let i = self.text.find(sep)?;
        Some((self.slice(0, i).trim(), self.slice(i + sep.len(), self.text.len()).trim()))
    }

    pub fn error(&self, byte: usize, message: impl Into<String>) -> FrontendError {
        let (line, col) = self.at(byte);
        FrontendError::Syntax { line, col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
}

fn lex(src: &Located) -> Result<Vec<(Tok, usize)>, FrontendError> {
    let bytes = src.text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ';' => Tok::Semi,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src.text[start..i].parse().expect("digits")), start));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src.text[start..i].to_string()), start));
                continue;
            }
            other => return Err(src.error(start, format!("unexpected character `{other}`"))),
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

/// Sum of `coef * Π_f ∂^{β_f} φ` with factor lists kept sorted. A plain
/// algebraic expression has only the empty factor list.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FieldExpr {
    pub terms: BTreeMap<Vec<MultiIndex>, RationalFunction>,
}

impl FieldExpr {
    fn scalar(c: RationalFunction) -> FieldExpr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        FieldExpr { terms }
    }

    fn field(beta: MultiIndex) -> FieldExpr {
        let mut terms = BTreeMap::new();
        terms.insert(vec![beta], RationalFunction::one());
        FieldExpr { terms }
    }

    fn add(&self, other: &FieldExpr) -> FieldExpr {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let sum = match terms.remove(k) {
                Some(prev) => prev.add(v),
                None => v.clone(),
            };
            if !sum.is_zero() {
                terms.insert(k.clone(), sum);
            }
        }
        FieldExpr { terms }
    }

    fn neg(&self) -> FieldExpr {
        FieldExpr { terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect() }
    }

    fn mul(&self, other: &FieldExpr) -> FieldExpr {
        let mut out = FieldExpr::default();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let mut k = ka.clone();
                k.extend(kb.iter().cloned());
                k.sort();
                let mut one = BTreeMap::new();
                one.insert(k, va.mul(vb));
                out = out.add(&FieldExpr { terms: one });
            }
        }
        out
    }

    /// The value when no field factor occurs.
    pub fn as_scalar(&self) -> Option<RationalFunction> {
        match self.terms.len() {
            0 => Some(RationalFunction::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn has_field(&self) -> bool {
        self.terms.keys().any(|k| !k.is_empty())
    }
}

/// How `phi` and `d(phi; ...)` are read.
#[derive(Clone, Copy)]
pub struct FieldContext<'a> {
    pub field: &'a str,
    /// Variables allowed inside `d(...)`, by position in the multi-index.
    pub vars: &'a [String],
}

struct Parser<'a> {
    src: &'a Located,
    toks: Vec<(Tok, usize)>,
    at: usize,
    table: &'a SymbolTable,
    ctx: Option<FieldContext<'a>>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.at).map_or(self.src.text.len(), |&(_, o)| o)
    }

    fn err(&self, msg: impl Into<String>) -> FrontendError {
        self.src.error(self.offset(), msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FrontendError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<FieldExpr, FrontendError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldExpr, FrontendError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    let here = self.offset();
                    self.at += 1;
                    let rhs = self.unary()?;
                    let Some(d) = rhs.as_scalar() else {
                        return Err(self.src.error(here, "cannot divide by an expression in the field"));
                    };
                    if d.is_zero() {
                        return Err(self.src.error(here, "division by zero"));
                    }
                    let inv = d.recip().expect("nonzero");
                    acc = acc.mul(&FieldExpr::scalar(inv));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FieldExpr, FrontendError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn exponent(&mut self) -> Result<u32, FrontendError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let e = u32::try_from(n).map_err(|_| self.err("exponent too large"))?;
                self.at += 1;
                Ok(e)
            }
            _ => Err(self.err("expected a nonnegative integer exponent")),
        }
    }

    fn power(&mut self) -> Result<FieldExpr, FrontendError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let e = self.exponent()?;
        let mut acc = FieldExpr::scalar(RationalFunction::one());
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<FieldExpr, FrontendError> {
        let here = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(FieldExpr::scalar(RationalFunction::constant(Rational::from_integer(n))))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(ctx) = self.ctx {
                    if name == ctx.field {
                        return Ok(FieldExpr::field(vec![0; ctx.vars.len()]));
                    }
                    if name == "d" && self.peek() == Some(&Tok::LParen) {
                        return self.derivative(ctx);
                    }
                }
                match self.table.lookup(&name) {
                    Some(sym) => Ok(FieldExpr::scalar(RationalFunction::from_poly(Polynomial::var(sym)))),
                    None => {
                        let (line, col) = self.src.at(here);
                        Err(FrontendError::UnknownSymbol { name, line, col })
                    }
                }
            }
            Some(_) => Err(self.err("expected a number, symbol or `(`")),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    /// `d(phi; x^2 y)` after the `d`.
    fn derivative(&mut self, ctx: FieldContext<'_>) -> Result<FieldExpr, FrontendError> {
        self.expect(Tok::LParen, "`(`")?;
        match self.peek() {
            Some(Tok::Ident(n)) if n == ctx.field => self.at += 1,
            _ => return Err(self.err(format!("expected `{}`", ctx.field))),
        }
        self.expect(Tok::Semi, "`;`")?;
        let mut beta = vec![0u32; ctx.vars.len()];
        let mut any = false;
        while let Some(Tok::Ident(v)) = self.peek().cloned() {
            let Some(k) = ctx.vars.iter().position(|x| *x == v) else {
                return Err(self.err(format!("`{v}` is not a differentiation variable")));
            };
            self.at += 1;
            let e = if self.peek() == Some(&Tok::Caret) {
                self.at += 1;
                self.exponent()?
            } else {
                1
            };
            beta[k] += e;
            any = true;
        }
        if !any {
            return Err(self.err("expected a differentiation variable"));
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(FieldExpr::field(beta))
    }
}

fn run(src: &Located, table: &SymbolTable, ctx: Option<FieldContext<'_>>) -> Result<FieldExpr, FrontendError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(src.error(0, "empty expression"));
    }
    let mut p = Parser { src, toks, at: 0, table, ctx };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.err("unexpected token"));
    }
    Ok(e)
}

/// Parses an expression that may contain the field and its derivatives.
pub fn parse_field(src: &Located, table: &SymbolTable, ctx: FieldContext<'_>) -> Result<FieldExpr, FrontendError> {
    run(src, table, Some(ctx))
}

pub fn parse_rational_at(src: &Located, table: &SymbolTable) -> Result<RationalFunction, FrontendError> {
    Ok(run(src, table, None)?.as_scalar().expect("no field without a field context"))
}

/// Parses a quotient of polynomials.
pub fn parse_rational(text: &str, table: &SymbolTable) -> Result<RationalFunction, FrontendError> {
    parse_rational_at(&Located::plain(text), table)
}

/// Parses a polynomial; a constant denominator is allowed.
pub fn parse_polynomial_at(src: &Located, table: &SymbolTable) -> Result<Polynomial, FrontendError> {
    let rf = parse_rational_at(src, table)?;
    rf.as_polynomial().ok_or_else(|| src.error(0, "expected a polynomial"))
}

pub fn parse_polynomial(text: &str, table: &SymbolTable) -> Result<Polynomial, FrontendError> {
    parse_polynomial_at(&Located::plain(text), table)
}

/// A symbol name at the start of `src`, checked against the table.
pub fn parse_symbol(src: &Located, table: &SymbolTable) -> Result<Symbol, FrontendError> {
    let name = src.text.trim();
    table.lookup(name).ok_or_else(|| {
        let (line, col) = src.at(0);
        FrontendError::UnknownSymbol { name: name.to_string(), line, col }
    })
}
