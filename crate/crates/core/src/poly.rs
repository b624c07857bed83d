//! Integer polynomials in `q` (point counts) and their interpolation from
//! values at primes.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Polynomial in `q` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CountPolynomial(Vec<i64>);

impl CountPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> CountPolynomial {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        CountPolynomial(coeffs)
    }

    pub fn zero() -> CountPolynomial {
        CountPolynomial(Vec::new())
    }

    pub fn constant(c: i64) -> CountPolynomial {
        CountPolynomial::new(vec![c])
    }

    pub fn one() -> CountPolynomial {
        CountPolynomial::constant(1)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, q: i128) -> i128 {
        self.0.iter().rev().fold(0i128, |acc, &c| acc * q + c as i128)
    }

    /// `[n]_q = 1 + q + ... + q^(n-1)`.
    pub fn q_integer(n: u32) -> CountPolynomial {
        CountPolynomial::new(vec![1; n as usize])
    }

    /// `[n]_q! = [1]_q [2]_q ... [n]_q`.
    pub fn q_factorial(n: u32) -> CountPolynomial {
        (1..=n).fold(CountPolynomial::one(), |acc, k| &acc * &CountPolynomial::q_integer(k))
    }

    /// Exact division, `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &CountPolynomial) -> Option<CountPolynomial> {
        let dd = d.degree()?;
        let lead = *d.0.last().unwrap();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Some(CountPolynomial::zero()) } else { None };
        }
        let mut quot = vec![0i64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd];
            if c % lead != 0 {
                return None;
            }
            let f = c / lead;
            quot[k] = f;
            for (j, &dj) in d.0.iter().enumerate() {
                rem[k + j] -= f * dj;
            }
        }
        if rem.iter().all(|&c| c == 0) {
            Some(CountPolynomial::new(quot))
        } else {
            None
        }
    }

    /// Substitutes `q = v^2`.
    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.0.iter().enumerate().map(|(k, &c)| (2 * k as i32, c)))
    }

    /// The unique polynomial of degree below `points.len()` through the given
    /// `(q, value)` pairs; fails unless all coefficients are integers.
    pub fn interpolate(points: &[(u32, i128)]) -> Result<CountPolynomial> {
        let n = points.len();
        let xs: Vec<Ratio<i128>> = points.iter().map(|&(x, _)| Ratio::from_integer(x as i128)).collect();
        // Newton divided differences
        let mut dd: Vec<Ratio<i128>> = points.iter().map(|&(_, y)| Ratio::from_integer(y)).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
            }
        }
        let mut coeffs = vec![Ratio::from_integer(0i128); n.max(1)];
        for i in (0..n).rev() {
            // coeffs = coeffs * (q - x_i) + dd[i]
            let mut next = vec![Ratio::from_integer(0i128); n.max(1)];
            for k in 0..n {
                if k + 1 < n {
                    next[k + 1] += coeffs[k];
                }
                next[k] -= coeffs[k] * xs[i];
            }
            next[0] += dd[i];
            coeffs = next;
        }
        let ints = coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).map_err(|_| Error::InterpolationMismatch("coefficient overflow".into()))
                } else {
                    Err(Error::InterpolationMismatch(format!("non-integral coefficient {c}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CountPolynomial::new(ints))
    }
}

impl Add for &CountPolynomial {
    type Output = CountPolynomial;
    fn add(self, rhs: &CountPolynomial) -> CountPolynomial {
        let n = self.0.len().max(rhs.0.len());
        CountPolynomial::new(
            (0..n).map(|k| self.0.get(k).copied().unwrap_or(0) + rhs.0.get(k).copied().unwrap_or(0)).collect(),
        )
    }
}

impl Sub for &CountPolynomial {
    type Output = CountPolynomial;
    fn sub(self, rhs: &CountPolynomial) -> CountPolynomial {
        let n = self.0.len().max(rhs.0.len());
        CountPolynomial::new(
            (0..n).map(|k| self.0.get(k).copied().unwrap_or(0) - rhs.0.get(k).copied().unwrap_or(0)).collect(),
        )
    }
}

impl Mul for &CountPolynomial {
    type Output = CountPolynomial;
    fn mul(self, rhs: &CountPolynomial) -> CountPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return CountPolynomial::zero();
        }
        let mut out = vec![0i64; self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CountPolynomial::new(out)
    }
}

impl fmt::Display for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate().rev() {
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
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{a}q")?,
                (_, 1) => write!(f, "q^{k}")?,
                _ => write!(f, "{a}q^{k}")?,
            }
        }
        Ok(())
    }
}
