//! Integer-valued polynomials written in the binomial basis
//! `C(n,0), C(n,1), …, C(n,d)` with exact integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::FormulaError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BinPoly {
    coeffs: Vec<BigInt>,
}

impl BinPoly {
    pub fn zero() -> Self {
        BinPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        BinPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        BinPoly::from_coeffs(vec![c])
    }

    /// The basis element `C(n, k)`.
    pub fn basis(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        BinPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        BinPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Value at an integer point, negative points included.
    pub fn eval(&self, n: i64) -> BigInt {
        let n = BigInt::from(n);
        let mut basis = BigInt::one();
        let mut total = BigInt::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                basis *= &n - (k - 1);
                basis /= k;
            }
            total += c * &basis;
        }
        total
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return BinPoly::zero();
        }
        BinPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Coefficients as decimal strings, lowest degree first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    pub fn from_decimal_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, FormulaError> {
        let coeffs = items
            .iter()
            .map(|s| {
                let s = s.as_ref();
                let digits = s.strip_prefix('-').unwrap_or(s);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(FormulaError::BadCoefficient(s.to_string()));
                }
                s.parse::<BigInt>()
                    .map_err(|_| FormulaError::BadCoefficient(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BinPoly::from_coeffs(coeffs))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        let coeffs = (0..len)
            .map(|k| {
                op(
                    self.coeffs.get(k).unwrap_or(&zero),
                    other.coeffs.get(k).unwrap_or(&zero),
                )
            })
            .collect();
        BinPoly::from_coeffs(coeffs)
    }
}

impl Add for &BinPoly {
    type Output = BinPoly;
    fn add(self, rhs: &BinPoly) -> BinPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &BinPoly {
    type Output = BinPoly;
    fn sub(self, rhs: &BinPoly) -> BinPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &BinPoly {
    type Output = BinPoly;
    fn neg(self) -> BinPoly {
        BinPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&BigInt> for &BinPoly {
    type Output = BinPoly;
    fn mul(self, rhs: &BigInt) -> BinPoly {
        self.scale(rhs)
    }
}

impl fmt::Display for BinPoly {
    /// `c0 + c1*C(n,1) + … + cd*C(n,d)` with zero terms omitted; negative
    /// coefficients after the first term print as ` - |c|*C(n,k)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = if first { c.clone() } else { c.abs() };
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if k == 0 {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*C(n,{k})")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
