//! Second-order jets in two variables and their arithmetic.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::expr::{BinOp, Expr};
use crate::{Error, Result};

/// Value, gradient and Hessian of a function of two variables at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Jet2 { value, ..Default::default() }
    }

    /// The coordinate function for slot 0 or 1.
    pub fn variable(slot: usize, value: f64) -> Self {
        let mut j = Jet2::constant(value);
        if slot == 0 {
            j.d1 = 1.0;
        } else {
            j.d2 = 1.0;
        }
        j
    }

    pub fn grad(&self) -> [f64; 2] {
        [self.d1, self.d2]
    }

    pub fn hessian(&self) -> [[f64; 2]; 2] {
        [[self.d11, self.d12], [self.d12, self.d22]]
    }

    /// `φ ∘ self` for a scalar function with `φ(x), φ'(x), φ''(x)` given.
    pub fn compose(&self, (f0, f1, f2): (f64, f64, f64)) -> Self {
        Jet2 {
            value: f0,
            d1: f1 * self.d1,
            d2: f1 * self.d2,
            d11: f2 * self.d1 * self.d1 + f1 * self.d11,
            d12: f2 * self.d1 * self.d2 + f1 * self.d12,
            d22: f2 * self.d2 * self.d2 + f1 * self.d22,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Jet2 {
            value: c * self.value,
            d1: c * self.d1,
            d2: c * self.d2,
            d11: c * self.d11,
            d12: c * self.d12,
            d22: c * self.d22,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        let x = self.value;
        if x == 0.0 {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(self.compose((1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))))
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        let x = self.value;
        if n == 0 {
            return Ok(Jet2::constant(1.0));
        }
        if n < 0 && x == 0.0 {
            return Err(Error::Domain("negative power of zero".into()));
        }
        let nf = n as f64;
        let d1 = if n == 1 { 1.0 } else { nf * x.powi(n - 1) };
        let d2 = match n {
            1 => 0.0,
            2 => 2.0,
            _ => nf * (nf - 1.0) * x.powi(n - 2),
        };
        Ok(self.compose((x.powi(n), d1, d2)))
    }

    pub fn is_finite(&self) -> bool {
        [self.value, self.d1, self.d2, self.d11, self.d12, self.d22].iter().all(|x| x.is_finite())
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d11: self.d11 + o.d11,
            d12: self.d12 + o.d12,
            d22: self.d22 + o.d22,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value * o.value,
            d1: self.d1 * o.value + self.value * o.d1,
            d2: self.d2 * o.value + self.value * o.d2,
            d11: self.d11 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d11,
            d12: self.d12 * o.value + self.d1 * o.d2 + self.d2 * o.d1 + self.value * o.d12,
            d22: self.d22 * o.value + 2.0 * self.d2 * o.d2 + self.value * o.d22,
        }
    }
}

/// Second-order jet of `e` at `(x1, x2)`.
pub fn eval_jet2(e: &Expr, x1: f64, x2: f64) -> Result<Jet2> {
    Ok(match e {
        Expr::Num(x) => Jet2::constant(*x),
        Expr::Var(v) => Jet2::variable(v.slot(), [x1, x2][v.slot()]),
        Expr::Neg(a) => -eval_jet2(a, x1, x2)?,
        Expr::Bin(op, a, b) => {
            let a = eval_jet2(a, x1, x2)?;
            let b = eval_jet2(b, x1, x2)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a * b.recip()?,
            }
        }
        Expr::Pow(a, n) => eval_jet2(a, x1, x2)?.powi(*n)?,
        Expr::Call(f, a) => {
            let a = eval_jet2(a, x1, x2)?;
            a.compose(f.eval3(a.value)?)
        }
    })
}

/// Jet from central finite differences of a black-box function.
pub fn fd_jet2<F>(f: F, x1: f64, x2: f64, h: f64) -> Result<Jet2>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let c = f(x1, x2)?;
    let (p1, m1) = (f(x1 + h, x2)?, f(x1 - h, x2)?);
    let (p2, m2) = (f(x1, x2 + h)?, f(x1, x2 - h)?);
    let pp = f(x1 + h, x2 + h)?;
    let pm = f(x1 + h, x2 - h)?;
    let mp = f(x1 - h, x2 + h)?;
    let mm = f(x1 - h, x2 - h)?;
    Ok(Jet2 {
        value: c,
        d1: (p1 - m1) / (2.0 * h),
        d2: (p2 - m2) / (2.0 * h),
        d11: (p1 - 2.0 * c + m1) / (h * h),
        d12: (pp - pm - mp + mm) / (4.0 * h * h),
        d22: (p2 - 2.0 * c + m2) / (h * h),
    })
}
