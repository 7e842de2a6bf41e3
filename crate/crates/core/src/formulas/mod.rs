//! Exact counting: binomial-basis polynomials, the four count recursions,
//! and the registry of closed forms.
//!
//! [`Engine`] owns the memo tables. All four families reduce to one of two
//! recursions on the largest peak `m = max S` with `S₁ = S ∖ {m}` and
//! `S₂ = S₁ ∪ {m − 1}`:
//!
//! * plain families go through the polynomial `p(S)` with
//!   `p(S) = p(S₁)(m−1)·C(n,m−1) − 2·p(S₁) − p(S₂)`, then
//!   `#P(S,n) = p(S)(n)·2^(n−s−1)` and `#P_B(S,n) = p(S)(n)·2^(2n−s−1)`;
//! * prefixed-zero families recurse on counts directly, the suffix factor
//!   being `2^(2(n−m)+1)` for signed words and `2^(n−m)` for unsigned ones.
//!
//! Any set with consecutive entries (or, for plain families, containing 1)
//! contributes zero, which is what keeps the `S₂` branch total.

mod arith;
mod binpoly;
pub mod closed;

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::peakcore::{is_admissible, Count, Group, PeakError, PeakSet, Variant};

pub use arith::{binom_u, binomial, factorial, fibonacci, stirling2};
pub use binpoly::BinPoly;
pub use closed::{closed_form, closed_form_routes, RouteValue};

pub(crate) use arith::{binom_i, pow, pow2, three_pow_half};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("n must be at least 1, got {0}")]
    InvalidN(u32),
    #[error("binomial lower index must be nonnegative, got {0}")]
    NegativeK(i64),
    #[error("malformed polynomial coefficient {0:?}")]
    BadCoefficient(String),
    #[error(transparent)]
    Peak(#[from] PeakError),
    #[error("{0}")]
    Discrepancy(Box<Discrepancy>),
    #[error(
        "route {route} for {variant} S={{{set}}} n={n}: {numerator} is not divisible by {divisor}"
    )]
    InexactDivision {
        route: &'static str,
        variant: Variant,
        set: PeakSet,
        n: u32,
        numerator: BigInt,
        divisor: BigInt,
    },
    #[error("internal: negative count {value} for {variant} S={{{set}}} n={n}")]
    NegativeCount {
        variant: Variant,
        set: PeakSet,
        n: u32,
        value: BigInt,
    },
}

/// Equivalent closed-form routes produced different values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub variant: Variant,
    pub set: PeakSet,
    pub n: u32,
    pub routes: Vec<RouteValue>,
}

impl std::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "closed-form routes disagree for {} S={{{}}} n={}:",
            self.variant, self.set, self.n
        )?;
        for r in &self.routes {
            write!(f, " [{} = {}]", r.name, r.value)?;
        }
        Ok(())
    }
}

/// Memo key for a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountKey {
    pub variant: Variant,
    pub set: PeakSet,
    pub n: u32,
}

/// Counting engine with in-process memo tables.
///
/// Concurrent callers may race to fill the same cell; they compute the same
/// value and whichever write lands last wins.
#[derive(Debug, Default)]
pub struct Engine {
    polys: RwLock<HashMap<u64, BinPoly>>,
    counts: RwLock<HashMap<CountKey, BigUint>>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    /// The polynomial `p(S)` shared by `#P(S,n)` and `#P_B(S,n)`.
    pub fn poly(&self, set: PeakSet) -> BinPoly {
        self.poly_bits(set.bits())
    }

    /// Like [`Engine::poly`] but accepts raw positions, returning the zero
    /// polynomial for sets with consecutive entries.
    pub fn poly_of_positions(&self, positions: &[u32]) -> Result<BinPoly, FormulaError> {
        match PeakSet::new(positions) {
            Ok(set) => Ok(self.poly(set)),
            Err(PeakError::Consecutive(..)) => {
                // still reject anything that isn't increasing and positive
                for w in positions.windows(2) {
                    if w[1] <= w[0] {
                        return Err(PeakError::NotIncreasing(w[1], w[0]).into());
                    }
                }
                if let Some(&p) = positions.iter().find(|&&p| p == 0 || p > 64) {
                    return Err(PeakSet::new(&[p]).unwrap_err().into());
                }
                Ok(BinPoly::zero())
            }
            Err(e) => Err(e.into()),
        }
    }

    fn poly_bits(&self, bits: u64) -> BinPoly {
        if bits == 0 {
            return BinPoly::one();
        }
        if bits & 1 != 0 || bits & (bits >> 1) != 0 {
            return BinPoly::zero();
        }
        if let Some(p) = self.polys.read().unwrap().get(&bits) {
            return p.clone();
        }
        let m = 64 - bits.leading_zeros();
        let s1 = bits & !(1u64 << (m - 1));
        let s2 = s1 | (1u64 << (m - 2));
        let p1 = self.poly_bits(s1);
        let p2 = self.poly_bits(s2);
        let head = BinPoly::basis(m as usize - 1).scale(&p1.eval(m as i64 - 1));
        let result = &(&head - &p1.scale(&BigInt::from(2))) - &p2;
        self.polys.write().unwrap().insert(bits, result.clone());
        result
    }

    /// Exact size of the family `variant` with peak set `set` in length `n`;
    /// zero whenever `set` is not `n`-admissible for the variant.
    pub fn count(&self, variant: Variant, set: PeakSet, n: u32) -> Result<Count, FormulaError> {
        if n < 1 {
            return Err(FormulaError::InvalidN(n));
        }
        if !is_admissible(set, n, variant) {
            return Ok(Count::zero());
        }
        let key = CountKey { variant, set, n };
        if let Some(v) = self.cached(&key) {
            return Ok(Count(v));
        }
        let value = if variant.prefix_zero {
            self.hat_count(variant.group, set.bits(), n)
        } else {
            let s = set.len() as i64;
            let exponent = match variant.group {
                Group::Symmetric => n as i64 - s - 1,
                Group::Hyperoctahedral => 2 * n as i64 - s - 1,
            };
            self.poly(set).eval(n as i64) << exponent as usize
        };
        let value = value.to_biguint().ok_or(FormulaError::NegativeCount {
            variant,
            set,
            n,
            value: value.clone(),
        })?;
        self.counts.write().unwrap().insert(key, value.clone());
        Ok(Count(value))
    }

    fn cached(&self, key: &CountKey) -> Option<BigUint> {
        self.counts.read().unwrap().get(key).cloned()
    }

    fn hat_count(&self, group: Group, bits: u64, n: u32) -> BigInt {
        if bits & (bits >> 1) != 0 {
            return BigInt::zero();
        }
        if bits == 0 {
            return match group {
                Group::Symmetric => BigInt::one(),
                Group::Hyperoctahedral => three_pow_half(n as i64),
            };
        }
        let m = 64 - bits.leading_zeros();
        if m >= n {
            return BigInt::zero();
        }
        let set = PeakSet::from_bits_unchecked(bits);
        let key = CountKey {
            variant: Variant::new(group, true),
            set,
            n,
        };
        if let Some(v) = self.cached(&key) {
            return v.into();
        }
        let k = m - 1;
        let s1 = bits & !(1u64 << (m - 1));
        let suffix_exp = match group {
            Group::Symmetric => n - m,
            Group::Hyperoctahedral => 2 * (n - m) + 1,
        };
        let head: BigInt = (BigInt::from(binom_u(n as u64, k as u64))
            * self.hat_count(group, s1, k))
            << suffix_exp as usize;
        let s2_term = if k == 0 {
            BigInt::zero()
        } else {
            self.hat_count(group, s1 | (1u64 << (k - 1)), n)
        };
        let value = head - self.hat_count(group, s1, n) - s2_term;
        if let Some(v) = value.to_biguint() {
            self.counts.write().unwrap().insert(key, v);
        }
        value
    }

    /// Seeds the count memo, e.g. from a persisted cache.
    pub fn seed_count(&self, key: CountKey, value: Count) {
        self.counts.write().unwrap().insert(key, value.0);
    }

    pub fn seed_poly(&self, set: PeakSet, poly: BinPoly) {
        self.polys.write().unwrap().insert(set.bits(), poly);
    }

    /// Every memoised count, sorted by key.
    pub fn cached_counts(&self) -> Vec<(CountKey, Count)> {
        let mut out: Vec<_> = self
            .counts
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (*k, Count(v.clone())))
            .collect();
        out.sort_by_key(|a| a.0);
        out
    }

    pub fn cached_polys(&self) -> Vec<(PeakSet, BinPoly)> {
        let mut out: Vec<_> = self
            .polys
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (PeakSet::from_bits_unchecked(*k), v.clone()))
            .collect();
        out.sort_by_key(|a| a.0);
        out
    }
}

/// `p_d(n) = d!·Σᵢ 2ⁱ(−1)ⁱ·C(n, d−i)`, the numerator polynomial of the
/// single-peak count for unsigned words with a prepended zero.
pub fn pm_polynomial(d: u32) -> BinPoly {
    let d_fact = BigInt::from(factorial(d as u64));
    let coeffs = (0..=d)
        .map(|k| {
            let i = d - k;
            let term = &d_fact << i as usize;
            if i % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .collect();
    BinPoly::from_coeffs(coeffs)
}

/// Checks `p_d(n) = d!·C(n,d) − 2d·p_{d−1}(n)` at the given points.
pub fn pm_recursion_holds(d: u32, points: impl IntoIterator<Item = i64>) -> bool {
    if d == 0 {
        return pm_polynomial(0) == BinPoly::one();
    }
    let pd = pm_polynomial(d);
    let prev = pm_polynomial(d - 1);
    let d_fact = BigInt::from(factorial(d as u64));
    points.into_iter().all(|n| {
        let falling = &d_fact * binom_i(n, d as i64);
        pd.eval(n) == falling - BigInt::from(2 * d) * prev.eval(n)
    })
}

pub(crate) fn exact_div(
    numerator: BigInt,
    divisor: BigInt,
    route: &'static str,
    key: CountKey,
) -> Result<BigInt, FormulaError> {
    if (&numerator % &divisor).is_zero() {
        Ok(numerator / divisor)
    } else {
        Err(FormulaError::InexactDivision {
            route,
            variant: key.variant,
            set: key.set,
            n: key.n,
            numerator,
            divisor,
        })
    }
}

pub(crate) fn is_nonnegative(v: &BigInt) -> bool {
    !v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: &[u32]) -> PeakSet {
        PeakSet::new(p).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn poly_base_and_single_peak() {
        let e = Engine::new();
        assert_eq!(e.poly(PeakSet::EMPTY), BinPoly::one());
        let p2 = e.poly(set(&[2]));
        assert_eq!(p2.coeffs(), &[big(-2), big(1)]);
        // C(n-1, m-1) - 1 for several m, n
        for m in 2..12u32 {
            let p = e.poly(set(&[m]));
            for n in (m + 1)..30 {
                let expect = binom_i(n as i64 - 1, m as i64 - 1) - 1;
                assert_eq!(p.eval(n as i64), expect, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn zero_polynomial_convention() {
        let e = Engine::new();
        assert!(e.poly(set(&[1])).is_zero());
        assert!(e.poly(set(&[1, 4])).is_zero());
        assert!(e.poly_of_positions(&[2, 3]).unwrap().is_zero());
        assert!(e.poly_of_positions(&[3, 2]).is_err());
        assert!(e.poly_of_positions(&[0, 1]).is_err());
    }

    #[test]
    fn count_examples() {
        let e = Engine::new();
        assert_eq!(
            e.count(Variant::PB, set(&[2]), 4).unwrap(),
            Count::from(128)
        );
        assert_eq!(
            e.count(Variant::PB_HAT, PeakSet::EMPTY, 4).unwrap(),
            Count::from(41)
        );
        assert_eq!(
            e.count(Variant::P_HAT, set(&[1]), 4).unwrap(),
            Count::from(7)
        );
        assert_eq!(
            e.count(Variant::PB_HAT, set(&[3]), 4).unwrap(),
            Count::from(71)
        );
        assert_eq!(
            e.count(Variant::PB_HAT, set(&[1, 3]), 4).unwrap(),
            Count::from(57)
        );
        assert_eq!(e.count(Variant::P, set(&[2]), 3).unwrap(), Count::from(2));
        assert_eq!(e.count(Variant::P, set(&[2]), 4).unwrap(), Count::from(8));
        assert_eq!(
            e.count(Variant::P_HAT, set(&[1, 3]), 4).unwrap(),
            Count::from(5)
        );
    }

    #[test]
    fn count_zero_for_inadmissible() {
        let e = Engine::new();
        assert_eq!(e.count(Variant::PB, set(&[1]), 5).unwrap(), Count::zero());
        assert_eq!(
            e.count(Variant::P_HAT, set(&[4]), 4).unwrap(),
            Count::zero()
        );
        assert!(matches!(
            e.count(Variant::P, PeakSet::EMPTY, 0),
            Err(FormulaError::InvalidN(0))
        ));
    }

    #[test]
    fn empty_set_bases() {
        let e = Engine::new();
        for n in 1..20u32 {
            assert_eq!(
                e.count(Variant::P, PeakSet::EMPTY, n).unwrap().0,
                BigUint::one() << (n - 1) as usize
            );
            assert_eq!(
                e.count(Variant::PB, PeakSet::EMPTY, n).unwrap().0,
                BigUint::one() << (2 * n - 1) as usize
            );
            assert_eq!(
                e.count(Variant::P_HAT, PeakSet::EMPTY, n).unwrap(),
                Count::from(1)
            );
        }
    }

    #[test]
    fn pm_polynomial_examples() {
        assert_eq!(pm_polynomial(0), BinPoly::one());
        assert_eq!(pm_polynomial(1).coeffs(), &[big(-2), big(1)]);
        // d = 2: 2·C(n,2) − 4·C(n,1) + 8
        assert_eq!(pm_polynomial(2).coeffs(), &[big(8), big(-4), big(2)]);
        for d in 0..=15 {
            assert!(pm_recursion_holds(d, -10..40));
            assert_eq!(pm_polynomial(d).degree(), Some(d as usize));
        }
    }

    #[test]
    fn cache_seed_is_honoured() {
        let e = Engine::new();
        let key = CountKey {
            variant: Variant::PB_HAT,
            set: set(&[3]),
            n: 4,
        };
        e.seed_count(key, Count::from(71));
        assert_eq!(
            e.count(Variant::PB_HAT, set(&[3]), 4).unwrap(),
            Count::from(71)
        );
        assert_eq!(e.cached_counts().len(), 1);
    }
}
