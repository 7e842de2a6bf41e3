//! Exact integer kernels.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::FormulaError;

/// `C(n, k)` for any integer `n`, using the falling-factorial definition
/// `n(n−1)…(n−k+1)/k!` so negative `n` is covered too.
pub fn binomial(n: i64, k: i64) -> Result<BigInt, FormulaError> {
    if k < 0 {
        return Err(FormulaError::NegativeK(k));
    }
    Ok(binom_i(n, k))
}

/// `C(n, k)`, zero for `k < 0` or `0 <= n < k`.
pub(crate) fn binom_i(n: i64, k: i64) -> BigInt {
    if k < 0 || (n >= 0 && k > n) {
        return BigInt::zero();
    }
    let k = if n >= 0 { k.min(n - k) } else { k };
    let mut acc = BigInt::one();
    let n = BigInt::from(n);
    for i in 0..k {
        // product of i+1 consecutive integers is divisible by (i+1)!
        acc *= &n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` over naturals.
pub fn binom_u(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).product()
}

/// Stirling numbers of the second kind via `S(n,k) = k·S(n−1,k) + S(n−1,k−1)`.
pub fn stirling2(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k as usize;
    // row[j] = S(i, j) for the current i
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for _ in 0..n {
        for j in (1..=k).rev() {
            let grown = &row[j] * j + &row[j - 1];
            row[j] = grown;
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

/// Fibonacci numbers with `F₀ = 0`, `F₁ = F₂ = 1`.
pub fn fibonacci(n: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

pub(crate) fn pow2(e: i64) -> BigInt {
    assert!(e >= 0, "negative power of two: {e}");
    BigInt::one() << e as usize
}

pub(crate) fn pow(base: u32, e: i64) -> BigInt {
    assert!(e >= 0, "negative exponent: {e}");
    num_traits::pow(BigInt::from(base), e as usize)
}

/// `(3ⁿ + 1) / 2`.
pub(crate) fn three_pow_half(n: i64) -> BigInt {
    (pow(3, n) + 1u32) / 2u32
}
