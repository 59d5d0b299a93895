//! A small recursive-descent parser and evaluator for scalar expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' exponent)?
//! exponent := '-'? integer ('^' exponent)?
//! atom   := integer | 'q' | 's' | call | '(' expr ')'
//! call   := ident '(' expr (',' expr)* ')'
//! ```
//!
//! Unary minus binds a whole factor, so `-q^2` is `-(q^2)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use qorient::lambda::adams;
use qorient::qcomb::{q_binom, q_fact, q_int};
use qorient::scalar::{cyclotomic, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdent { offset: usize, name: String },
    #[error("'{name}' at byte {offset} takes {expected} argument(s), got {got}")]
    Arity { offset: usize, name: String, expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("argument {index} of {name} must be a non-negative integer, got {value}")]
    BadArgument { name: &'static str, index: usize, value: String },
    #[error("exponent {0} is out of range")]
    ExponentRange(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("{0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    QInt,
    QFact,
    QBinom,
    Cyclotomic,
    Adams,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [Builtin::QInt, Builtin::QFact, Builtin::QBinom, Builtin::Cyclotomic, Builtin::Adams];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::QInt => "qint",
            Builtin::QFact => "qfact",
            Builtin::QBinom => "qbinom",
            Builtin::Cyclotomic => "cyclotomic",
            Builtin::Adams => "adams",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::QBinom | Builtin::Adams => 2,
            _ => 1,
        }
    }

    fn lookup(name: &str) -> Option<Builtin> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Q,
    S,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Builtin, Vec<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax<T>(&self, offset: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset, msg: msg.into() })
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.syntax(self.pos, format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.syntax(self.pos, format!("expected '{}', found end of input", c as char)),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == b'+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            let op = if c == b'*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.exponent()?;
            let e =
                e.to_i64().ok_or_else(|| ParseError::Syntax { offset: self.pos, msg: "exponent too large".into() })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    /// Integer exponent, right-associative: `2^3^2 = 2^9`.
    fn exponent(&mut self) -> Result<BigInt, ParseError> {
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let start = self.pos;
        let base = match self.integer()? {
            Some(n) => n,
            None => return self.syntax(start, "expected an integer exponent"),
        };
        let value = if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.exponent()?;
            let e = e
                .to_u32()
                .filter(|&e| e <= 64)
                .map_or_else(|| self.syntax(at, "exponent of an exponent must be in 0..=64"), Ok)?;
            num_traits::pow(base, e as usize)
        } else {
            base
        };
        Ok(if negative { -value } else { value })
    }

    fn integer(&mut self) -> Result<Option<BigInt>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Some(digits.parse().expect("digits parse")))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = match self.peek() {
            None => return self.syntax(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        if let Some(n) = self.integer()? {
            return Ok(Expr::Int(n));
        }
        let c = self.src[start];
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
            return match name {
                "q" => Ok(Expr::Q),
                "s" => Ok(Expr::S),
                _ => self.call(name, start),
            };
        }
        let ch = std::str::from_utf8(&self.src[start..]).ok().and_then(|s| s.chars().next()).unwrap_or('?');
        self.syntax(start, format!("unexpected '{ch}'"))
    }

    fn call(&mut self, name: &str, start: usize) -> Result<Expr, ParseError> {
        let Some(b) = Builtin::lookup(name) else {
            return Err(ParseError::UnknownIdent { offset: start, name: name.to_string() });
        };
        self.expect(b'(')?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(b')')?;
        if args.len() != b.arity() {
            return Err(ParseError::Arity {
                offset: start,
                name: name.to_string(),
                expected: b.arity(),
                got: args.len(),
            });
        }
        Ok(Expr::Call(b, args))
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(c) => p.syntax(p.pos, format!("unexpected '{}'", c as char)),
    }
}

fn small_nonneg(name: &'static str, index: usize, v: &Scalar) -> Result<u64, EvalError> {
    v.as_rational()
        .filter(|r| r.is_integer() && !r.is_negative())
        .and_then(|r| r.to_integer().to_u64())
        .ok_or_else(|| EvalError::BadArgument { name, index, value: v.to_string() })
}

impl Expr {
    pub fn eval(&self) -> Result<Scalar, EvalError> {
        Ok(match self {
            Expr::Int(n) => Scalar::from_bigint(n.clone()),
            Expr::Q => Scalar::q(),
            Expr::S => Scalar::s(),
            Expr::Neg(e) => -e.eval()?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval()?, b.eval()?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x.checked_div(&y)?,
                }
            }
            Expr::Pow(b, e) => {
                if e.unsigned_abs() > 10_000 {
                    return Err(EvalError::ExponentRange(e.to_string()));
                }
                b.eval()?.pow(*e)?
            }
            Expr::Call(f, args) => {
                let vals = args.iter().map(Expr::eval).collect::<Result<Vec<_>, _>>()?;
                let name = f.name();
                match f {
                    Builtin::QInt => q_int(small_nonneg(name, 1, &vals[0])?),
                    Builtin::QFact => q_fact(small_nonneg(name, 1, &vals[0])?),
                    Builtin::QBinom => {
                        let n = small_nonneg(name, 1, &vals[0])?;
                        let k = small_nonneg(name, 2, &vals[1])?;
                        q_binom(n, k).map_err(|e| EvalError::Domain(e.to_string()))?
                    }
                    Builtin::Cyclotomic => {
                        let d = small_nonneg(name, 1, &vals[0])?;
                        if d == 0 {
                            return Err(EvalError::BadArgument { name, index: 1, value: "0".into() });
                        }
                        cyclotomic(d)
                    }
                    Builtin::Adams => {
                        let k = small_nonneg(name, 2, &vals[1])?;
                        if k == 0 || k > u32::MAX as u64 {
                            return Err(EvalError::BadArgument { name, index: 2, value: k.to_string() });
                        }
                        adams(&vals[0], k as u32).map_err(|e| EvalError::Domain(e.to_string()))?
                    }
                }
            }
        })
    }
}

/// Prints with the minimal parentheses needed to re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: 1 sum, 2 product, 3 factor, 4 atom
        fn prec(e: &Expr) -> u8 {
            match e {
                Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
                Expr::Bin(..) => 2,
                Expr::Neg(_) | Expr::Pow(..) => 3,
                _ => 4,
            }
        }
        fn wrap(e: &Expr, min: u8) -> String {
            if prec(e) < min {
                format!("({e})")
            } else {
                e.to_string()
            }
        }
        match self {
            Expr::Int(n) if n.is_negative() => write!(f, "({n})"),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Q => write!(f, "q"),
            Expr::S => write!(f, "s"),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, 3)),
            Expr::Pow(b, e) => write!(f, "{}^{e}", wrap(b, 4)),
            Expr::Bin(op, a, b) => {
                let (sym, lp, rp) = match op {
                    BinOp::Add => ("+", 1, 2),
                    BinOp::Sub => ("-", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                };
                write!(f, "{} {sym} {}", wrap(a, lp), wrap(b, rp))
            }
            Expr::Call(b, args) => {
                let a: Vec<String> = args.iter().map(Expr::to_string).collect();
                write!(f, "{}({})", b.name(), a.join(", "))
            }
        }
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str) -> Result<Scalar, String> {
    let e = parse_expr(text).map_err(|e| e.to_string())?;
    e.eval().map_err(|e| e.to_string())
}
