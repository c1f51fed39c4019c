//! Integer polynomials in ascending coefficient order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Integer-coefficient polynomial `c[0] + c[1] x + ... + c[d] x^d`.
///
/// The leading coefficient is always nonzero, so `degree` is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    /// `x^d p(1/x)`: roots become reciprocals.
    Reverse,
    /// `p(-x)`: roots become negations.
    Negate,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::EmptyPolynomial),
            Some(0) => Err(Error::ZeroLeadingCoefficient),
            Some(_) => Ok(IntPolynomial { coeffs }),
        }
    }

    /// Parses `"-1,-1,1"` (ascending degree, whitespace tolerated).
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, ',')
    }

    pub(crate) fn parse_with(text: &str, sep: char) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let coeffs = text
            .split(sep)
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<i64>()
                    .map_err(|_| Error::InvalidCoefficient(tok.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn height(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval_i64(&self, x: i64) -> i128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * x as i128 + c as i128)
    }

    /// True when `1` or `-1` is a root, i.e. the polynomial has a
    /// cyclotomic linear factor and cannot be a minimal polynomial of
    /// degree above one.
    pub fn has_unit_root(&self) -> bool {
        self.degree() > 1 && (self.eval_i64(1) == 0 || self.eval_i64(-1) == 0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }

    /// Evaluates `p` and `p'` together by Horner's rule.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c as f64;
        }
        (p, dp)
    }

    /// Running bound `sum |c_k| |z|^k` used to size the rounding error of
    /// a floating-point evaluation.
    pub fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * r + (c as f64).abs())
    }

    /// Reverse or negate, with the sign flipped so the leading coefficient
    /// is positive.
    pub fn transform(&self, which: Transform) -> Result<Self> {
        if self.degree() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let mut coeffs: Vec<i64> = match which {
            Transform::Reverse => {
                if self.coeffs[0] == 0 {
                    return Err(Error::ZeroConstantTerm);
                }
                self.coeffs.iter().rev().copied().collect()
            }
            Transform::Negate => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        };
        if *coeffs.last().expect("nonempty") < 0 {
            coeffs.iter_mut().for_each(|c| *c = -*c);
        }
        Self::new(coeffs)
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for IntPolynomial {
    /// Human-readable form, highest degree first: `x^4 - x - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{k}")?,
                _ => write!(f, "{a}x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
