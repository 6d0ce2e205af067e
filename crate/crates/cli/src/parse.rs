//! Expression syntax for elements of M_q(n).
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' ['-'] int]
//! atom   := int | 'q' | 'z[' int ',' int ']' | '(' expr ')'
//! ```
//!
//! Products are noncommutative and evaluated in written order. Division is
//! only by nonzero scalars; negative powers are only allowed on scalars.

use std::fmt;

use mqalg::{gen_index, CommutationSystem, MqError, Polynomial, QRat};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Largest accepted exponent magnitude.
pub const MAX_EXPONENT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Int(BigInt),
    /// The parameter `q`.
    Q,
    Gen { row: i64, col: i64, pos: usize },
    Pow { base: Box<ExprAst>, exp: i64, pos: usize },
    /// Ordered product.
    Product(Vec<ExprAst>),
    Quotient { num: Box<ExprAst>, den: Box<ExprAst>, pos: usize },
    Sum(Vec<ExprAst>),
    Neg(Box<ExprAst>),
    Group(Box<ExprAst>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator z[{row},{col}] at position {pos} is out of range for n = {n}")]
    IndexOutOfRange { pos: usize, row: i64, col: i64, n: usize },
    #[error("negative power of a non-scalar at position {pos}")]
    NegativeGeneratorPower { pos: usize },
    #[error("division by a non-scalar at position {pos}")]
    NonScalarDivisor { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error(transparent)]
    Engine(#[from] MqError),
}

impl ParseError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, ParseError::Engine(e) if e.is_resource_limit())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Q,
    Z,
    LBracket,
    RBracket,
    Comma,
    Caret,
    Star,
    Slash,
    Plus,
    Minus,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Int(v) => return write!(f, "`{v}`"),
            Tok::Q => "q",
            Tok::Z => "z",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Caret => "^",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::LParen => "(",
            Tok::RParen => ")",
        };
        write!(f, "`{s}`")
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
                continue;
            }
            'q' => Tok::Q,
            'z' => Tok::Z,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '^' => Tok::Caret,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character `{other}`") }),
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |&(_, p)| p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn found(&self) -> String {
        self.peek().map_or("end of input".to_string(), |t| t.to_string())
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.found()))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.at += 1;
                Ok(v)
            }
            _ => self.error(format!("expected an integer, found {}", self.found())),
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut terms = Vec::new();
        let first_neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let t = self.term()?;
        terms.push(if first_neg { ExprAst::Neg(Box::new(t)) } else { t });
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(ExprAst::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { ExprAst::Sum(terms) })
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.unary()?;
        let mut factors = Vec::new();
        loop {
            if self.eat(&Tok::Star) {
                factors.push(acc);
                acc = self.unary()?;
            } else if self.peek() == Some(&Tok::Slash) {
                let pos = self.pos();
                self.at += 1;
                let den = self.unary()?;
                factors.push(acc);
                let num = if factors.len() == 1 { factors.pop().expect("one") } else { ExprAst::Product(std::mem::take(&mut factors)) };
                acc = ExprAst::Quotient { num: Box::new(num), den: Box::new(den), pos };
            } else {
                break;
            }
        }
        if factors.is_empty() {
            Ok(acc)
        } else {
            factors.push(acc);
            Ok(ExprAst::Product(factors))
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let pos = self.pos();
        self.at += 1;
        let negative = self.eat(&Tok::Minus);
        let v = self.int()?;
        let exp = match v.to_u64() {
            Some(e) if e <= MAX_EXPONENT => e as i64,
            _ => return Err(ParseError::Syntax { pos, msg: format!("exponent {v} exceeds {MAX_EXPONENT}") }),
        };
        Ok(ExprAst::Pow { base: Box::new(base), exp: if negative { -exp } else { exp }, pos })
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Int(_)) => Ok(ExprAst::Int(self.int()?)),
            Some(Tok::Q) => {
                self.at += 1;
                Ok(ExprAst::Q)
            }
            Some(Tok::Z) => {
                self.at += 1;
                self.expect(Tok::LBracket)?;
                let row = self.index()?;
                self.expect(Tok::Comma)?;
                let col = self.index()?;
                self.expect(Tok::RBracket)?;
                Ok(ExprAst::Gen { row, col, pos })
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(ExprAst::Group(Box::new(inner)))
            }
            _ => self.error(format!("expected a number, `q`, `z[i,j]` or `(`, found {}", self.found())),
        }
    }

    fn index(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let v = self.int()?;
        v.to_i64().ok_or(ParseError::Syntax { pos, msg: format!("index {v} is too large") })
    }
}

/// Parses `text` into an expression tree without evaluating it.
pub fn parse_ast(text: &str) -> Result<ExprAst, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.chars().count() };
    if p.peek().is_none() {
        return p.error("empty expression");
    }
    let ast = p.expr()?;
    if p.peek().is_some() {
        return p.error(format!("unexpected {}", p.found()));
    }
    Ok(ast)
}

fn as_scalar(p: &Polynomial) -> Option<QRat> {
    if p.is_zero() {
        return Some(QRat::zero());
    }
    match p.terms() {
        [t] if t.mono.is_one() => Some(t.coeff.clone()),
        _ => None,
    }
}

/// Evaluates an expression tree in the algebra described by `sys`.
pub fn eval(ast: &ExprAst, sys: &CommutationSystem) -> Result<Polynomial, ParseError> {
    let nvars = sys.nvars();
    let n = (1..=nvars).find(|k| k * k == nvars).unwrap_or(nvars);
    let scalar = |c: QRat| -> Result<Polynomial, ParseError> { Ok(Polynomial::constant(nvars, sys.coeff(&c)?)) };
    match ast {
        ExprAst::Int(v) => scalar(QRat::from_rational(v.clone().into())),
        ExprAst::Q => scalar(QRat::q()),
        ExprAst::Gen { row, col, pos } => {
            let id = gen_index(*row, *col, n)
                .map_err(|_| ParseError::IndexOutOfRange { pos: *pos, row: *row, col: *col, n })?;
            Ok(Polynomial::generator(nvars, id.linear))
        }
        ExprAst::Pow { base, exp, pos } => {
            if let ExprAst::Q = **base {
                return scalar(QRat::q_pow(*exp));
            }
            let b = eval(base, sys)?;
            if *exp < 0 {
                let c = as_scalar(&b).ok_or(ParseError::NegativeGeneratorPower { pos: *pos })?;
                let inv = c.inv().map_err(|_| ParseError::DivisionByZero { pos: *pos })?;
                return scalar(pow_scalar(&inv, exp.unsigned_abs()));
            }
            if let Some(c) = as_scalar(&b) {
                return scalar(pow_scalar(&c, *exp as u64));
            }
            let mut acc = Polynomial::one(nvars);
            for _ in 0..*exp {
                acc = sys.poly_mul(&acc, &b)?;
            }
            Ok(acc)
        }
        ExprAst::Product(fs) => {
            let mut acc = Polynomial::one(nvars);
            for f in fs {
                acc = sys.poly_mul(&acc, &eval(f, sys)?)?;
            }
            Ok(acc)
        }
        ExprAst::Quotient { num, den, pos } => {
            let d = eval(den, sys)?;
            let c = as_scalar(&d).ok_or(ParseError::NonScalarDivisor { pos: *pos })?;
            let inv = c.inv().map_err(|_| ParseError::DivisionByZero { pos: *pos })?;
            Ok(eval(num, sys)?.scale(&inv))
        }
        ExprAst::Sum(ts) => {
            let mut acc = Polynomial::zero(nvars);
            for t in ts {
                acc = acc.add(&eval(t, sys)?)?;
            }
            Ok(acc)
        }
        ExprAst::Neg(inner) => Ok(eval(inner, sys)?.neg()),
        ExprAst::Group(inner) => eval(inner, sys),
    }
}

fn pow_scalar(c: &QRat, e: u64) -> QRat {
    let mut acc = QRat::one();
    let mut base = c.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Parses and evaluates `text` to a canonical polynomial.
///
/// ```
/// use mqalg::{build_mq, MqSpec};
/// use mqalg_cli::parse_poly;
///
/// let sys = build_mq(&MqSpec::symbolic(2).unwrap()).unwrap();
/// let p = parse_poly("z[1,1]*z[2,2]", &sys).unwrap();
/// assert_eq!(p.to_string(), "z[2,2]*z[1,1] + (q^2-1)/q*z[2,1]*z[1,2]");
/// ```
pub fn parse_poly(text: &str, sys: &CommutationSystem) -> Result<Polynomial, ParseError> {
    eval(&parse_ast(text)?, sys)
}

/// Canonical text of `p`; `parse_poly(&format_poly(p), sys) == p`.
pub fn format_poly(p: &Polynomial) -> String {
    p.to_string()
}
