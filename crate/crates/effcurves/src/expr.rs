//! Expression trees over named variables, a text format for them, and
//! symbolic differentiation.
//!
//! The text format: infix arithmetic, `^` integer powers, `pi`, function
//! names `sqrt exp log log2 sinh cosh asinh acosh min max floor abs`
//! (`arcsinh`/`arccosh` are accepted as aliases on input), `#` comments.
//! Inequalities are one per line: `EXPR >= 0 on VAR in [lo,hi], ...`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Log2,
    Sinh,
    Cosh,
    Asinh,
    Acosh,
    Floor,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Log2 => "log2",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Asinh => "asinh",
            Func::Acosh => "acosh",
            Func::Floor => "floor",
            Func::Abs => "abs",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "log2" => Func::Log2,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "asinh" | "arcsinh" => Func::Asinh,
            "acosh" | "arccosh" => Func::Acosh,
            "floor" => Func::Floor,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(BigRational),
    Pi,
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Apply(Func, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
}

pub fn var(name: &str) -> Expr {
    Expr::Var(name.to_string())
}

pub fn int(n: i64) -> Expr {
    Expr::Const(BigRational::from_integer(BigInt::from(n)))
}

pub fn rat(num: i64, den: i64) -> Expr {
    Expr::Const(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn min(a: Expr, b: Expr) -> Expr {
    Expr::Min(Box::new(a), Box::new(b))
}

pub fn max(a: Expr, b: Expr) -> Expr {
    Expr::Max(Box::new(a), Box::new(b))
}

impl Expr {
    pub fn pow(self, n: i64) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    pub fn apply(self, f: Func) -> Expr {
        Expr::Apply(f, Box::new(self))
    }

    pub fn sqrt(self) -> Expr {
        self.apply(Func::Sqrt)
    }

    pub fn exp(self) -> Expr {
        self.apply(Func::Exp)
    }

    pub fn log(self) -> Expr {
        self.apply(Func::Log)
    }

    pub fn log2(self) -> Expr {
        self.apply(Func::Log2)
    }

    pub fn sinh(self) -> Expr {
        self.apply(Func::Sinh)
    }

    pub fn cosh(self) -> Expr {
        self.apply(Func::Cosh)
    }

    pub fn asinh(self) -> Expr {
        self.apply(Func::Asinh)
    }

    pub fn acosh(self) -> Expr {
        self.apply(Func::Acosh)
    }

    pub fn floor_e(self) -> Expr {
        self.apply(Func::Floor)
    }

    pub fn abs_e(self) -> Expr {
        self.apply(Func::Abs)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) | Expr::Pi => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Min(a, b)
            | Expr::Max(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Apply(_, a) => a.collect_vars(out),
        }
    }

    /// Substitute `name := replacement` everywhere.
    pub fn substitute(&self, name: &str, replacement: &Expr) -> Expr {
        match self {
            Expr::Const(_) | Expr::Pi => self.clone(),
            Expr::Var(v) => {
                if v == name {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            Expr::Add(a, b) => Expr::Add(
                Box::new(a.substitute(name, replacement)),
                Box::new(b.substitute(name, replacement)),
            ),
            Expr::Sub(a, b) => Expr::Sub(
                Box::new(a.substitute(name, replacement)),
                Box::new(b.substitute(name, replacement)),
            ),
            Expr::Mul(a, b) => Expr::Mul(
                Box::new(a.substitute(name, replacement)),
                Box::new(b.substitute(name, replacement)),
            ),
            Expr::Div(a, b) => Expr::Div(
                Box::new(a.substitute(name, replacement)),
                Box::new(b.substitute(name, replacement)),
            ),
            Expr::Min(a, b) => Expr::Min(
                Box::new(a.substitute(name, replacement)),
                Box::new(b.substitute(name, replacement)),
            ),
            Expr::Max(a, b) => Expr::Max(
                Box::new(a.substitute(name, replacement)),
                Box::new(b.substitute(name, replacement)),
            ),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(name, replacement))),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.substitute(name, replacement)), *n),
            Expr::Apply(f, a) => Expr::Apply(*f, Box::new(a.substitute(name, replacement))),
        }
    }

    /// Partial derivative with respect to `name`; None if the expression
    /// contains a non-differentiable node (min, max, floor, abs) that
    /// depends on the variable.
    pub fn diff(&self, name: &str) -> Option<Expr> {
        match self {
            Expr::Const(_) | Expr::Pi => Some(int(0)),
            Expr::Var(v) => Some(if v == name { int(1) } else { int(0) }),
            Expr::Add(a, b) => Some(Expr::Add(Box::new(a.diff(name)?), Box::new(b.diff(name)?))),
            Expr::Sub(a, b) => Some(Expr::Sub(Box::new(a.diff(name)?), Box::new(b.diff(name)?))),
            Expr::Mul(a, b) => {
                let da = a.diff(name)?;
                let db = b.diff(name)?;
                Some(da * (**b).clone() + (**a).clone() * db)
            }
            Expr::Div(a, b) => {
                let da = a.diff(name)?;
                let db = b.diff(name)?;
                Some((da * (**b).clone() - (**a).clone() * db) / (**b).clone().pow(2))
            }
            Expr::Neg(a) => Some(Expr::Neg(Box::new(a.diff(name)?))),
            Expr::Pow(a, n) => {
                let da = a.diff(name)?;
                Some(int(*n) * (**a).clone().pow(n - 1) * da)
            }
            Expr::Apply(f, a) => {
                let da = a.diff(name)?;
                let u = (**a).clone();
                Some(match f {
                    Func::Sqrt => da / (int(2) * u.sqrt()),
                    Func::Exp => u.exp() * da,
                    Func::Log => da / u,
                    Func::Log2 => da / (u * int(2).log()),
                    Func::Sinh => u.cosh() * da,
                    Func::Cosh => u.sinh() * da,
                    Func::Asinh => da / (u.pow(2) + int(1)).sqrt(),
                    Func::Acosh => da / (u.pow(2) - int(1)).sqrt(),
                    Func::Floor | Func::Abs => {
                        if a.free_vars().contains(name) {
                            return None;
                        }
                        int(0)
                    }
                })
            }
            Expr::Min(a, b) | Expr::Max(a, b) => {
                if a.free_vars().contains(name) || b.free_vars().contains(name) {
                    return None;
                }
                Some(int(0))
            }
        }
    }

    /// Exact rational value if the expression is built from constants and
    /// rational operations only.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Expr::Const(q) => Some(q.clone()),
            Expr::Pi | Expr::Var(_) => None,
            Expr::Add(a, b) => Some(a.as_rational()? + b.as_rational()?),
            Expr::Sub(a, b) => Some(a.as_rational()? - b.as_rational()?),
            Expr::Mul(a, b) => Some(a.as_rational()? * b.as_rational()?),
            Expr::Div(a, b) => {
                let d = b.as_rational()?;
                if d.is_zero() {
                    None
                } else {
                    Some(a.as_rational()? / d)
                }
            }
            Expr::Neg(a) => Some(-a.as_rational()?),
            Expr::Pow(a, n) => {
                let base = a.as_rational()?;
                if *n >= 0 {
                    Some(rational_pow(&base, *n as u64))
                } else if base.is_zero() {
                    None
                } else {
                    Some(BigRational::one() / rational_pow(&base, (-*n) as u64))
                }
            }
            Expr::Apply(Func::Abs, a) => Some(a.as_rational()?.abs()),
            Expr::Apply(Func::Floor, a) => Some(a.as_rational()?.floor()),
            Expr::Apply(_, _) => None,
            Expr::Min(a, b) => Some(a.as_rational()?.min(b.as_rational()?)),
            Expr::Max(a, b) => Some(a.as_rational()?.max(b.as_rational()?)),
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(_, _) | Expr::Sub(_, _) => 1,
            Expr::Mul(_, _) | Expr::Div(_, _) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(_, _) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let p = self.precedence();
        if p < min_prec {
            write!(f, "(")?;
        }
        match self {
            Expr::Const(q) => {
                if q.is_negative() && min_prec > 1 {
                    write!(f, "({q})")?;
                    if p < min_prec {
                        write!(f, ")")?;
                    }
                    return Ok(());
                }
                write!(f, "{q}")?;
            }
            Expr::Pi => write!(f, "pi")?,
            Expr::Var(v) => write!(f, "{v}")?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 3)?;
            }
            Expr::Pow(a, n) => {
                a.fmt_prec(f, 5)?;
                if *n < 0 {
                    write!(f, "^({n})")?;
                } else {
                    write!(f, "^{n}")?;
                }
            }
            Expr::Apply(func, a) => write!(f, "{}({a})", func.name())?,
            Expr::Min(a, b) => write!(f, "min({a}, {b})")?,
            Expr::Max(a, b) => write!(f, "max({a}, {b})")?,
        }
        if p < min_prec {
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn rational_pow(q: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut sq = q.clone();
    let mut k = n;
    loop {
        if k % 2 == 1 {
            acc *= &sq;
        }
        k /= 2;
        if k == 0 {
            return acc;
        }
        sq = &sq * &sq;
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

/// One `EXPR >= 0 on VAR in [lo,hi], ...` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub expr: Expr,
    pub domains: Vec<(String, BigRational, BigRational)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Ge,
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws_and_comments(&mut self) {
        while let Some(c) = self.peek() {
            if c == b'#' {
                while let Some(c2) = self.peek() {
                    if c2 == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_tok(&mut self) -> Result<(Tok, u32, u32), ParseError> {
        self.skip_ws_and_comments();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek() else {
            return Ok((Tok::Eof, line, col));
        };
        let tok = match c {
            b'+' => {
                self.bump();
                Tok::Plus
            }
            b'-' => {
                self.bump();
                Tok::Minus
            }
            b'*' => {
                self.bump();
                Tok::Star
            }
            b'/' => {
                self.bump();
                Tok::Slash
            }
            b'^' => {
                self.bump();
                Tok::Caret
            }
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'[' => {
                self.bump();
                Tok::LBracket
            }
            b']' => {
                self.bump();
                Tok::RBracket
            }
            b',' => {
                self.bump();
                Tok::Comma
            }
            b'>' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    Tok::Ge
                } else {
                    return Err(self.err("expected '=' after '>'"));
                }
            }
            b'0'..=b'9' => {
                let mut int_part = String::new();
                while let Some(d) = self.peek() {
                    if d.is_ascii_digit() {
                        int_part.push(self.bump() as char);
                    } else {
                        break;
                    }
                }
                let mut frac_part = String::new();
                if self.peek() == Some(b'.') {
                    self.bump();
                    while let Some(d) = self.peek() {
                        if d.is_ascii_digit() {
                            frac_part.push(self.bump() as char);
                        } else {
                            break;
                        }
                    }
                    if frac_part.is_empty() {
                        return Err(self.err("expected digits after decimal point"));
                    }
                }
                let num: BigInt = format!("{int_part}{frac_part}").parse().unwrap();
                let den = BigInt::from(10u32).pow(frac_part.len() as u32);
                Tok::Num(BigRational::new(num, den))
            }
            b'e' | b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut ident = String::new();
                while let Some(d) = self.peek() {
                    if d.is_ascii_alphanumeric() || d == b'_' {
                        ident.push(self.bump() as char);
                    } else {
                        break;
                    }
                }
                Tok::Ident(ident)
            }
            other => return Err(self.err(format!("unexpected character '{}'", other as char))),
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    tok_line: u32,
    tok_col: u32,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>, ParseError> {
        let mut lexer = Lexer::new(src);
        let (tok, tok_line, tok_col) = lexer.next_tok()?;
        Ok(Parser { lexer, tok, tok_line, tok_col })
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.tok_line, col: self.tok_col, msg: msg.into() }
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (tok, line, col) = self.lexer.next_tok()?;
        self.tok = tok;
        self.tok_line = line;
        self.tok_col = col;
        Ok(())
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.tok == tok {
            self.advance()
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Plus => {
                    self.advance()?;
                    lhs = lhs + self.term()?;
                }
                Tok::Minus => {
                    self.advance()?;
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.tok {
                Tok::Star => {
                    self.advance()?;
                    lhs = lhs * self.unary()?;
                }
                Tok::Slash => {
                    self.advance()?;
                    let rhs = self.unary()?;
                    // fold literal fractions so 1/4 and 0.25 parse alike
                    lhs = match (&lhs, &rhs) {
                        (Expr::Const(a), Expr::Const(b)) if !b.is_zero() => {
                            Expr::Const(a / b)
                        }
                        _ => lhs / rhs,
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Minus {
            self.advance()?;
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Caret {
            self.advance()?;
            let n = self.integer_exponent()?;
            Ok(base.pow(n))
        } else {
            Ok(base)
        }
    }

    fn integer_exponent(&mut self) -> Result<i64, ParseError> {
        let mut neg = false;
        let mut parens = false;
        if self.tok == Tok::LParen {
            parens = true;
            self.advance()?;
        }
        if self.tok == Tok::Minus {
            neg = true;
            self.advance()?;
        }
        let Tok::Num(q) = self.tok.clone() else {
            return Err(self.err("expected integer exponent"));
        };
        if !q.is_integer() {
            return Err(self.err("exponent must be an integer"));
        }
        self.advance()?;
        if parens {
            self.expect(Tok::RParen, "')' after exponent")?;
        }
        let n: i64 = q
            .to_integer()
            .try_into()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(q) => {
                self.advance()?;
                Ok(Expr::Const(q))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.advance()?;
                if name == "pi" {
                    return Ok(Expr::Pi);
                }
                if self.tok == Tok::LParen {
                    self.advance()?;
                    if name == "min" || name == "max" {
                        let a = self.expr()?;
                        self.expect(Tok::Comma, "',' between arguments")?;
                        let b = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        return Ok(if name == "min" { min(a, b) } else { max(a, b) });
                    }
                    let Some(f) = Func::from_name(&name) else {
                        return Err(self.err(format!("unknown function '{name}'")));
                    };
                    let a = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(a.apply(f));
                }
                Ok(Expr::Var(name))
            }
            Tok::Eof => Err(self.err("unexpected end of input")),
            _ => Err(self.err("expected a value")),
        }
    }

    /// A constant used as a domain endpoint; must evaluate to a rational.
    fn rational_bound(&mut self) -> Result<BigRational, ParseError> {
        let line = self.tok_line;
        let col = self.tok_col;
        let e = self.expr()?;
        e.as_rational().ok_or(ParseError {
            line,
            col,
            msg: "domain endpoint must be a rational constant".into(),
        })
    }

    fn inequality(&mut self) -> Result<Inequality, ParseError> {
        let expr = self.expr()?;
        self.expect(Tok::Ge, "'>='")?;
        match self.tok.clone() {
            Tok::Num(q) if q.is_zero() => self.advance()?,
            _ => return Err(self.err("expected '0' after '>='")),
        }
        match self.tok.clone() {
            Tok::Ident(w) if w == "on" => self.advance()?,
            _ => return Err(self.err("expected 'on'")),
        }
        let mut domains = Vec::new();
        loop {
            let Tok::Ident(name) = self.tok.clone() else {
                return Err(self.err("expected a variable name"));
            };
            self.advance()?;
            match self.tok.clone() {
                Tok::Ident(w) if w == "in" => self.advance()?,
                _ => return Err(self.err("expected 'in'")),
            }
            self.expect(Tok::LBracket, "'['")?;
            let lo = self.rational_bound()?;
            self.expect(Tok::Comma, "','")?;
            let hi = self.rational_bound()?;
            self.expect(Tok::RBracket, "']'")?;
            if lo > hi {
                return Err(self.err(format!("empty domain for '{name}'")));
            }
            domains.push((name, lo, hi));
            if self.tok == Tok::Comma {
                self.advance()?;
            } else {
                break;
            }
        }
        Ok(Inequality { expr, domains })
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_inequality(line: &str) -> Result<Inequality, ParseError> {
    let mut p = Parser::new(line)?;
    let ineq = p.inequality()?;
    if p.tok != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(ineq)
}

/// A corpus file: blank lines and `#` comments between inequalities.
pub fn parse_corpus(text: &str) -> Result<Vec<Inequality>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut ineq = parse_inequality(line).map_err(|e| ParseError {
            line: i as u32 + 1,
            col: e.col,
            msg: e.msg,
        })?;
        ineq.domains.sort_by(|a, b| a.0.cmp(&b.0));
        out.push(ineq);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let e = parse_expr("2*arccosh(abs(chi)+1)").unwrap();
        assert!(matches!(e, Expr::Mul(_, _)));
        assert_eq!(e.free_vars().into_iter().collect::<Vec<_>>(), vec!["chi"]);
    }

    #[test]
    fn parse_errors_have_position() {
        let err = parse_expr("sinh(").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col >= 5);
        assert!(parse_expr("1 + $").is_err());
        assert!(parse_expr("nosuchfn(1)").is_err());
        assert!(parse_expr("x^y").is_err());
    }

    #[test]
    fn decimal_literals_are_exact() {
        let e = parse_expr("0.1").unwrap();
        assert_eq!(
            e.as_rational().unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(10))
        );
    }

    #[test]
    fn log2_monomial_is_rationally_opaque() {
        let e = parse_expr("log2(2^385 / eps0^60)").unwrap();
        let at_one = e.substitute("eps0", &int(1));
        // inner value is 2^385 exactly; checked numerically in the eval tests
        assert!(at_one.free_vars().is_empty());
    }

    #[test]
    fn render_round_trip() {
        let cases = [
            "2*arccosh(abs(chi)+1)",
            "-(x + y)*3 - -z^2",
            "min(x, max(y, 1/3)) + pi",
            "sinh(x)/(cosh(x) - 1)",
            "x^(-2) * (y - 0.25)^10",
            "log2(2^385 / eps0^60)",
        ];
        for c in cases {
            let e = parse_expr(c).unwrap();
            let rendered = e.render();
            let back = parse_expr(&rendered).unwrap();
            assert_eq!(e, back, "round trip failed for {c}: rendered {rendered}");
        }
    }

    #[test]
    fn inequality_lines() {
        let ineq = parse_inequality("sinh(x) - x >= 0 on x in [0, 10]").unwrap();
        assert_eq!(ineq.domains.len(), 1);
        assert_eq!(ineq.domains[0].0, "x");
        let multi =
            parse_inequality("x*y - 1 >= 0 on x in [1, 2], y in [1, 3/2]").unwrap();
        assert_eq!(multi.domains.len(), 2);
        assert_eq!(
            multi.domains[1].2,
            BigRational::new(BigInt::from(3), BigInt::from(2))
        );
        assert!(parse_inequality("x >= 1 on x in [0,1]").is_err());
        assert!(parse_inequality("x >= 0 on x in [2,1]").is_err());
    }

    #[test]
    fn corpus_with_comments() {
        let text = "# heading\n\nsinh(x) - x >= 0 on x in [0, 10] # tail note\n\nx >= 0 on x in [0, 1]\n";
        let v = parse_corpus(text).unwrap();
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn diff_rules() {
        let x = var("x");
        let d = x.clone().sinh().diff("x").unwrap();
        // derivative mentions cosh
        assert!(d.render().contains("cosh"));
        let d2 = (x.clone().pow(3)).diff("x").unwrap();
        assert!(d2.render().contains("^2"));
        assert!(x.clone().abs_e().diff("x").is_none());
        assert!(min(x.clone(), int(1)).diff("x").is_none());
        assert_eq!(var("y").abs_e().diff("x"), Some(int(0)));
    }

    #[test]
    fn exact_rational_eval() {
        let e = parse_expr("(2/3)^3 - 8/27").unwrap();
        assert_eq!(e.as_rational().unwrap(), BigRational::zero());
        assert!(parse_expr("sqrt(2)").unwrap().as_rational().is_none());
    }
}
