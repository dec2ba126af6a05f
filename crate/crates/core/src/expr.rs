//! Scalar expressions in two variables.
//!
//! Variables `u` and `s` name the first parameter, `v` and `t` the second.
//! Besides numeric literals and `pi`, the grammar has `+ - * /`, unary minus,
//! integer powers `^n`, parentheses and the functions `sin cos sinh cosh exp
//! log sqrt`. `^` binds tightest and chains to the left, then unary minus,
//! then `* /`, then `+ -`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    U,
    V,
    S,
    T,
}

impl Var {
    /// 0 for the first parameter, 1 for the second.
    pub fn slot(self) -> usize {
        match self {
            Var::U | Var::S => 0,
            Var::V | Var::T => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::V => "v",
            Var::S => "s",
            Var::T => "t",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    /// Value and first two derivatives at `x`.
    pub fn eval3(self, x: f64) -> Result<(f64, f64, f64)> {
        Ok(match self {
            Func::Sin => (x.sin(), x.cos(), -x.sin()),
            Func::Cos => (x.cos(), -x.sin(), -x.cos()),
            Func::Sinh => (x.sinh(), x.cosh(), x.sinh()),
            Func::Cosh => (x.cosh(), x.sinh(), x.cosh()),
            Func::Exp => {
                let e = x.exp();
                (e, e, e)
            }
            Func::Log => {
                if x <= 0.0 {
                    return Err(Error::Domain(format!("log of non-positive value {x}")));
                }
                (x.ln(), 1.0 / x, -1.0 / (x * x))
            }
            Func::Sqrt => {
                if x <= 0.0 {
                    return Err(Error::Domain(format!("sqrt is not differentiable at {x}")));
                }
                let r = x.sqrt();
                (r, 0.5 / r, -0.25 / (r * x))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Abstract syntax tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(x: f64) -> Expr {
        Expr::Num(x)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// Replaces every variable by the given expressions, indexed by slot.
    pub fn substitute(&self, by: &[Expr; 2]) -> Expr {
        match self {
            Expr::Num(x) => Expr::Num(*x),
            Expr::Var(v) => by[v.slot()].clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(by))),
            Expr::Bin(op, a, b) => Expr::bin(*op, a.substitute(by), b.substitute(by)),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.substitute(by)), *n),
            Expr::Call(f, a) => Expr::call(*f, a.substitute(by)),
        }
    }

    pub fn uses_slot(&self, slot: usize) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => v.slot() == slot,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.uses_slot(slot),
            Expr::Bin(_, a, b) => a.uses_slot(slot) || b.uses_slot(slot),
        }
    }

    /// Plain evaluation at `(x1, x2)`.
    pub fn eval(&self, x1: f64, x2: f64) -> Result<f64> {
        Ok(match self {
            Expr::Num(x) => *x,
            Expr::Var(v) => [x1, x2][v.slot()],
            Expr::Neg(a) => -a.eval(x1, x2)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x1, x2)?, b.eval(x1, x2)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Domain("division by zero".into()));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(a, n) => {
                let a = a.eval(x1, x2)?;
                if *n < 0 && a == 0.0 {
                    return Err(Error::Domain("negative power of zero".into()));
                }
                a.powi(*n)
            }
            Expr::Call(f, a) => {
                let a = a.eval(x1, x2)?;
                match f {
                    Func::Log if a <= 0.0 => return Err(Error::Domain(format!("log of non-positive value {a}"))),
                    Func::Sqrt if a < 0.0 => return Err(Error::Domain(format!("sqrt of negative value {a}"))),
                    Func::Sqrt => a.sqrt(),
                    _ => f.eval3(a)?.0,
                }
            }
        })
    }

    fn is_atom(&self) -> bool {
        matches!(self, Expr::Num(x) if *x >= 0.0) || matches!(self, Expr::Var(_) | Expr::Call(..))
    }
}

/// Canonical, fully parenthesized form; parsing it gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) if *x >= 0.0 => write!(f, "{x:?}"),
            Expr::Num(x) => write!(f, "(-{:?})", -x),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Pow(a, n) if a.is_atom() => write!(f, "{a}^{n}"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == '.' {
            let bytes = rest.as_bytes();
            let mut end = 0;
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                end += 1;
            }
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut k = end + 1;
                if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    k += 1;
                }
                if k < bytes.len() && bytes[k].is_ascii_digit() {
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    end = k;
                }
            }
            let text = &rest[..end];
            let value = text
                .parse::<f64>()
                .map_err(|_| Error::Syntax { offset: start, message: format!("malformed number '{text}'") })?;
            self.pos += end;
            return Ok((Tok::Num(value), start));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let end = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            self.pos += end;
            return Ok((Tok::Ident(rest[..end].to_string()), start));
        }
        if "+-*/^()".contains(c) {
            self.pos += c.len_utf8();
            return Ok((Tok::Sym(c), start));
        }
        Err(Error::Syntax { offset: start, message: format!("unexpected character '{c}'") })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    offset: usize,
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<()> {
        let (t, o) = self.lexer.next()?;
        self.tok = t;
        self.offset = o;
        Ok(())
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        let found = match &self.tok {
            Tok::End => "end of input".to_string(),
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
        };
        Err(Error::Syntax { offset: self.offset, message: format!("{message}, found {found}") })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.tok == Tok::Sym(c) {
            self.advance()
        } else {
            self.error(&format!("expected '{c}'"))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.tok {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            lhs = Expr::bin(op, lhs, self.product()?);
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance()?;
            lhs = Expr::bin(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Sym('-') {
            self.advance()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while self.tok == Tok::Sym('^') {
            self.advance()?;
            let negative = self.tok == Tok::Sym('-');
            if negative {
                self.advance()?;
            }
            let n = match self.tok {
                Tok::Num(x) if x.fract() == 0.0 && x.abs() <= i32::MAX as f64 => x as i32,
                _ => return self.error("expected an integer exponent"),
            };
            self.advance()?;
            base = Expr::Pow(Box::new(base), if negative { -n } else { n });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(x) => {
                self.advance()?;
                Ok(Expr::Num(x))
            }
            Tok::Sym('(') => {
                self.advance()?;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.offset;
                self.advance()?;
                let var = match name.as_str() {
                    "u" => Some(Var::U),
                    "v" => Some(Var::V),
                    "s" => Some(Var::S),
                    "t" => Some(Var::T),
                    _ => None,
                };
                if let Some(v) = var {
                    return Ok(Expr::Var(v));
                }
                if name == "pi" {
                    return Ok(Expr::Num(std::f64::consts::PI));
                }
                match Func::from_name(&name) {
                    Some(f) => {
                        self.expect('(')?;
                        let arg = self.sum()?;
                        self.expect(')')?;
                        Ok(Expr::call(f, arg))
                    }
                    None => Err(Error::UnknownIdentifier { name, offset: at }),
                }
            }
            _ => self.error("expected an expression"),
        }
    }
}

/// Parses an expression.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { lexer: Lexer { src: text, pos: 0 }, tok: Tok::End, offset: 0 };
    p.advance()?;
    let e = p.sum()?;
    if p.tok != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}
