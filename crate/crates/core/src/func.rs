//! Named real functions used as test functions and pointwise transforms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A continuous function of one real variable, addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case")]
pub enum TestFn {
    Identity,
    /// `x^k`
    Power { k: i32 },
    /// `clamp((x - center) / width, 0, 1)`
    Ramp { center: f64, width: f64 },
    Constant { c: f64 },
    /// `a x + b`
    Affine { a: f64, b: f64 },
}

impl TestFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            TestFn::Identity => x,
            TestFn::Power { k } => x.powi(k),
            TestFn::Ramp { center, width } => ((x - center) / width).clamp(0.0, 1.0),
            TestFn::Constant { c } => c,
            TestFn::Affine { a, b } => a * x + b,
        }
    }

    pub fn as_fn(&self) -> impl Fn(f64) -> f64 + '_ {
        move |x| self.eval(x)
    }
}

impl fmt::Display for TestFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFn::Identity => write!(f, "x"),
            TestFn::Power { k } => write!(f, "x^{k}"),
            TestFn::Ramp { center, width } => write!(f, "ramp({center},{width})"),
            TestFn::Constant { c } => write!(f, "{c}"),
            TestFn::Affine { a, b } => write!(f, "{a}*x+{b}"),
        }
    }
}

/// Parses `x`, `x^k`, `1-x`, `const:c`, `ramp:center:width`, `affine:a:b`.
impl FromStr for TestFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Specification(format!("unknown function `{s}`"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let s = s.trim();
        if s == "x" || s == "id" {
            return Ok(TestFn::Identity);
        }
        if s == "1-x" {
            return Ok(TestFn::Affine { a: -1.0, b: 1.0 });
        }
        if let Some(k) = s.strip_prefix("x^") {
            return k.parse().map(|k| TestFn::Power { k }).map_err(|_| bad());
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["const", c] => Ok(TestFn::Constant { c: num(c)? }),
            ["ramp", c, w] => Ok(TestFn::Ramp { center: num(c)?, width: num(w)? }),
            ["affine", a, b] => Ok(TestFn::Affine { a: num(a)?, b: num(b)? }),
            _ => Err(bad()),
        }
    }
}
