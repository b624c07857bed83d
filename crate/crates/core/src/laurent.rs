//! Laurent polynomials in `v` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

/// Sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly(BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly(BTreeMap::new())
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(0, 1)
    }

    /// `c v^e`.
    pub fn monomial(e: i32, c: i64) -> LaurentPoly {
        LaurentPoly::from_terms([(e, c)])
    }

    pub fn v_pow(e: i32) -> LaurentPoly {
        LaurentPoly::monomial(e, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> LaurentPoly {
        let mut m = BTreeMap::new();
        for (e, c) in terms {
            let slot = m.entry(e).or_insert(0i64);
            *slot = slot.checked_add(c).expect("Laurent coefficient overflow");
        }
        m.retain(|_, c| *c != 0);
        LaurentPoly(m)
    }

    pub fn terms(&self) -> &BTreeMap<i32, i64> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (-e, c)).collect())
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }

    pub fn scale(&self, k: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.0.iter().map(|(&e, &c)| (e, c.checked_mul(k).expect("Laurent coefficient overflow"))))
    }

    /// Value at `v = 1`.
    pub fn eval_at_one(&self) -> i64 {
        self.0.values().sum()
    }

    /// Terms with negative exponent.
    pub fn negative_part(&self) -> LaurentPoly {
        LaurentPoly(self.0.range(..0).map(|(&e, &c)| (e, c)).collect())
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.0.values().all(|&c| c >= 0)
    }

    /// Symmetric quantum integer `[n] = v^(n-1) + v^(n-3) + ... + v^(1-n)`.
    pub fn quantum_integer(n: u32) -> LaurentPoly {
        let n = n as i32;
        LaurentPoly::from_terms((0..n).map(|k| (n - 1 - 2 * k, 1)))
    }

    /// `[n]! = [1][2]...[n]`.
    pub fn quantum_factorial(n: u32) -> LaurentPoly {
        (1..=n).fold(LaurentPoly::one(), |acc, k| &acc * &LaurentPoly::quantum_integer(k))
    }

    /// Exact division, `None` if it leaves a remainder.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let dmax = d.max_exp().unwrap();
        let dlead = d.coeff(dmax);
        let dmin = d.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some(top) = rem.max_exp() {
            if top - dmax < rem.min_exp().unwrap() - dmin {
                return None;
            }
            let c = rem.coeff(top);
            if c % dlead != 0 {
                return None;
            }
            let f = LaurentPoly::monomial(top - dmax, c / dlead);
            quot.insert(top - dmax, c / dlead);
            rem = &rem - &(&f * d);
        }
        Some(LaurentPoly(quot))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.0.iter().chain(rhs.0.iter()).map(|(&e, &c)| (e, c)))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.0.iter().map(|(&e, &c)| (e, c)).chain(rhs.0.iter().map(|(&e, &c)| (e, -c))))
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e, -c)).collect())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out: BTreeMap<i32, i64> = BTreeMap::new();
        for (&a, &x) in &self.0 {
            for (&b, &y) in &rhs.0 {
                let slot = out.entry(a + b).or_insert(0);
                let prod = x.checked_mul(y).expect("Laurent coefficient overflow");
                *slot = slot.checked_add(prod).expect("Laurent coefficient overflow");
            }
        }
        out.retain(|_, c| *c != 0);
        LaurentPoly(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, &c)) in self.0.iter().rev().enumerate() {
            let a = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            }
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "v")?,
                (_, 1) => write!(f, "v^{e}")?,
                (1, _) => write!(f, "{a}v")?,
                _ => write!(f, "{a}v^{e}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as an exponent-to-coefficient map with string keys.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, i64> = self.0.iter().map(|(e, c)| (e.to_string(), *c)).collect();
        m.serialize(s)
    }
}
