use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{Rational, ScalarError, ScalarExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        match s {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            _ => None,
        }
    }
}

/// Unnormalized expression syntax.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprTree {
    Num(Rational),
    Var(String),
    Neg(Box<ExprTree>),
    Add(Vec<ExprTree>),
    Sub(Box<ExprTree>, Box<ExprTree>),
    Mul(Vec<ExprTree>),
    Div(Box<ExprTree>, Box<ExprTree>),
    Pow(Box<ExprTree>, i64),
    Call(Func, Box<ExprTree>),
}

impl ExprTree {
    pub fn var(name: &str) -> Self {
        ExprTree::Var(String::from(name))
    }

    pub fn int(n: i64) -> Self {
        ExprTree::Num(Rational::from_integer(n.into()))
    }

    pub fn normalize(&self) -> Result<ScalarExpr, ScalarError> {
        Ok(match self {
            ExprTree::Num(c) => ScalarExpr::from_rational(c.clone()),
            ExprTree::Var(v) => ScalarExpr::var(v),
            ExprTree::Neg(a) => -a.normalize()?,
            ExprTree::Add(xs) => {
                let mut acc = ScalarExpr::zero();
                for x in xs {
                    acc = &acc + &x.normalize()?;
                }
                acc
            }
            ExprTree::Sub(a, b) => &a.normalize()? - &b.normalize()?,
            ExprTree::Mul(xs) => {
                let mut acc = ScalarExpr::one();
                for x in xs {
                    acc = &acc * &x.normalize()?;
                }
                acc
            }
            ExprTree::Div(a, b) => a.normalize()?.checked_div(&b.normalize()?)?,
            ExprTree::Pow(a, e) => {
                let e = i32::try_from(*e).map_err(|_| ScalarError::BadExponent)?;
                a.normalize()?.powi(e)?
            }
            ExprTree::Call(f, a) => ScalarExpr::apply(*f, a.normalize()?),
        })
    }

    /// Direct numeric evaluation of the tree as written.
    pub fn eval_f64(&self, env: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
        Some(match self {
            ExprTree::Num(c) => c.to_f64()?,
            ExprTree::Var(v) => env(v)?,
            ExprTree::Neg(a) => -a.eval_f64(env)?,
            ExprTree::Add(xs) => {
                let mut s = 0.0;
                for x in xs {
                    s += x.eval_f64(env)?;
                }
                s
            }
            ExprTree::Sub(a, b) => a.eval_f64(env)? - b.eval_f64(env)?,
            ExprTree::Mul(xs) => {
                let mut s = 1.0;
                for x in xs {
                    s *= x.eval_f64(env)?;
                }
                s
            }
            ExprTree::Div(a, b) => {
                let d = b.eval_f64(env)?;
                if d == 0.0 {
                    return None;
                }
                a.eval_f64(env)? / d
            }
            ExprTree::Pow(a, e) => libm::pow(a.eval_f64(env)?, *e as f64),
            ExprTree::Call(f, a) => {
                let x = a.eval_f64(env)?;
                match f {
                    Func::Sin => libm::sin(x),
                    Func::Cos => libm::cos(x),
                    Func::Exp => libm::exp(x),
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            ExprTree::Add(_) | ExprTree::Sub(..) => 1,
            ExprTree::Neg(_) => 2,
            ExprTree::Mul(_) | ExprTree::Div(..) => 3,
            ExprTree::Num(c) if !c.is_integer() => 3,
            ExprTree::Num(c) if c.is_negative() => 2,
            ExprTree::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for ExprTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprTree::Num(c) => {
                if c.is_zero() {
                    f.write_str("0")
                } else if c.is_integer() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "{}/{}", c.numer(), c.denom())
                }
            }
            ExprTree::Var(v) => f.write_str(v),
            ExprTree::Neg(a) => {
                f.write_str("-")?;
                a.fmt_child(f, 3)
            }
            ExprTree::Add(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    match (i, x) {
                        (0, _) => x.fmt_child(f, 1)?,
                        (_, ExprTree::Neg(inner)) => {
                            f.write_str(" - ")?;
                            inner.fmt_child(f, 3)?;
                        }
                        _ => {
                            f.write_str(" + ")?;
                            x.fmt_child(f, 2)?;
                        }
                    }
                }
                Ok(())
            }
            ExprTree::Sub(a, b) => {
                a.fmt_child(f, 1)?;
                f.write_str(" - ")?;
                b.fmt_child(f, 2)
            }
            ExprTree::Mul(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    // a rational literal prints as p/q, which already binds as a product
                    x.fmt_child(f, if i == 0 { 3 } else { 4 })?;
                }
                Ok(())
            }
            ExprTree::Div(a, b) => {
                a.fmt_child(f, 3)?;
                f.write_str("/")?;
                b.fmt_child(f, 4)
            }
            ExprTree::Pow(a, e) => {
                a.fmt_child(f, 5)?;
                if *e < 0 {
                    write!(f, "^({e})")
                } else {
                    write!(f, "^{e}")
                }
            }
            ExprTree::Call(func, a) => write!(f, "{}({})", func.name(), a),
        }
    }
}
