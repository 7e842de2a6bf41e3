//! Closed forms for special peak-set shapes.
//!
//! Each route is written out term by term as an explicit sum, independent
//! of the recursions in the parent module (except where a formula is itself
//! stated recursively). When several routes apply to the same `(S, n)` they
//! are all evaluated and must agree.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{
    binom_i as c, exact_div, factorial, is_nonnegative, pm_polynomial, pow, pow2, three_pow_half,
    CountKey, Discrepancy, Engine, FormulaError,
};
use crate::peakcore::{is_admissible, Count, Group, PeakSet, Variant};

type Z = BigInt;

/// One evaluated closed-form route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteValue {
    pub name: &'static str,
    pub value: BigInt,
}

fn parity(v: i64) -> i64 {
    v.rem_euclid(2)
}

fn sign(i: i64) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Halves a doubled expression, failing loudly if the route left a remainder.
fn halve(twice: Z, route: &'static str, key: CountKey) -> Result<Z, FormulaError> {
    exact_div(twice, Z::from(2), route, key)
}

// ---- plain families ------------------------------------------------------

fn poly_single(m: i64, n: i64) -> Z {
    c(n - 1, m - 1) - 1
}

fn poly_two_m(m: i64, n: i64) -> Z {
    (m - 3) * c(n - 2, m - 1) + (m - 2) * c(n - 2, m - 2) - c(n - 2, 1)
}

fn poly_two_m_m2(m: i64, n: i64) -> Z {
    m * (m - 3) * c(n, m + 1) - 2 * (m - 3) * c(n - 2, m - 1) - 2 * (m - 2) * c(n - 2, m - 2)
        + 2 * c(n - 2, 1)
}

fn plain_scale(group: Group, n: i64, s: i64) -> Z {
    match group {
        Group::Symmetric => pow2(n - s - 1),
        Group::Hyperoctahedral => pow2(2 * n - s - 1),
    }
}

// ---- signed words with a prepended zero ----------------------------------

/// `Σ_{i=1}^{m} C(top, m−i)(3^{m−i}+1)4^i(−1)^{i+1}`.
fn hh_inner_sum(m: i64, top: i64) -> Z {
    (1..=m)
        .map(|i| c(top, m - i) * (pow(3, m - i) + 1) * pow(4, i) * sign(i + 1))
        .sum()
}

fn hh_single(m: i64, n: i64) -> Z {
    pow(4, n - m - 1) * hh_inner_sum(m, n) - parity(m) * three_pow_half(n)
}

fn hh_one_m(m: i64, n: i64) -> Z {
    pow2(2 * n - 2) * (c(n - 1, m - 1) - 1) - pow(4, n - m - 1) * hh_inner_sum(m, n)
        + parity(m) * three_pow_half(n)
}

fn hh_pair(m: i64, z: i64, n: i64) -> Z {
    let mut total = Z::zero();
    for i in 0..=z - 2 {
        let top = m + z - i - 1;
        let bracket = pow(4, z - i - 2) * hh_inner_sum(m, top) - parity(m) * three_pow_half(top);
        total += sign(i) * pow2(2 * (n - m - z + i + 1) - 1) * c(n, m + z - 1 - i) * bracket;
    }
    total - parity(z - 1) * (pow(4, n - m - 1) * hh_inner_sum(m, n) - parity(m) * three_pow_half(n))
}

fn hh_one_m_m2(m: i64, n: i64, key: CountKey) -> Result<Z, FormulaError> {
    let mut sum = Z::zero();
    for i in 1..=m {
        let x = (pow(3, m - i) + 1) * pow(4, i) * sign(i + 1);
        sum += x * (2 * c(n, m - i) - c(n, m + 1) * c(m + 1, m - i));
    }
    let twice = pow(4, n - m - 1) * sum
        + pow(4, n - 1) * ((m - 1) * c(n, m + 1) + 2 - 2 * c(n - 1, m - 1))
        + 2 * parity(m)
            * (c(n, m + 1) * three_pow_half(m + 1) * pow2(2 * (n - m - 1) - 1) - three_pow_half(n));
    halve(twice, "hyp-hat {1,m,m+2}", key)
}

// ---- unsigned words with a prepended zero --------------------------------

fn sh_single_alternating(m: i64, n: i64) -> Z {
    let sum: Z = (1..=m)
        .map(|i| pow2(n - i) * c(n, i - 1) * sign(m - i))
        .sum();
    sum - parity(m)
}

fn sh_single_polynomial(m: i64, n: i64, key: CountKey) -> Result<Z, FormulaError> {
    let p = pm_polynomial((m - 1) as u32).eval(n);
    let divisor = Z::from(factorial((m - 1) as u64));
    let q = exact_div(p * pow2(n - m), divisor, "sym-hat {m} polynomial", key)?;
    Ok(q - parity(m))
}

/// Counts by distance from the end: peak at `n − k`.
fn sh_single_tail(m: i64, n: i64) -> Z {
    let k = n - m;
    (0..k).map(|i| pow2(i) * c(n - (k - i), i + 1)).sum()
}

fn sh_single_tail_reindexed(m: i64, n: i64) -> Z {
    (0..=n - (m + 1)).map(|i| pow2(i) * c(m + i, i + 1)).sum()
}

fn sh_one_m(m: i64, n: i64) -> Z {
    let sum: Z = (1..=m - 2)
        .map(|i| c(n, m - i) * (pow2(m - i - 1) - 1) * pow2(n - (m - i + 1)) * sign(i + 1))
        .sum();
    sum - parity(m) * (pow2(n - 1) - 1)
}

fn sh_one_m_relation(m: i64, n: i64) -> Z {
    (c(n - 1, m - 1) - 1) * pow2(n - 2) - sh_single_alternating(m, n)
}

fn sh_one_m_m2(m: i64, n: i64, key: CountKey) -> Result<Z, FormulaError> {
    let sum: Z = (1..=m - 2)
        .map(|i| {
            (pow2(m - i - 1) - 1)
                * sign(i + 1)
                * pow2(n - m + i - 1)
                * (c(n, m + 1) * c(m + 1, m - i) - 2 * c(n, m - i))
        })
        .sum();
    let twice =
        sum + 2 * parity(m) * (pow2(n - 1) - 1 - c(n, m + 1) * pow2(n - m - 2) * (pow2(m) - 1));
    halve(twice, "sym-hat {1,m,m+2}", key)
}

fn sh_one_m_last(engine: &Engine, m: i64, n: i64, key: CountKey) -> Result<Z, FormulaError> {
    let sum: Z = (1..=m - 2)
        .map(|i| {
            (pow2(m - i - 1) - 1)
                * pow2(n - m + i - 1)
                * sign(i + 1)
                * (c(n, n - 2) * c(n - 2, m - i) - 2 * c(n, m - i))
        })
        .sum();
    let twice = sum - 2 * parity(m) * ((pow2(n - 2) - 2) * c(n, 2) - pow2(n - 1) + 1);
    let head = halve(twice, "sym-hat {1,m,n-1}", key)?;
    let tail = match PeakSet::new(&[1, m as u32, (n - 2) as u32]) {
        Ok(s) => engine.count(Variant::P_HAT, s, n as u32)?.to_signed(),
        Err(_) => Z::zero(),
    };
    Ok(head - tail)
}

fn sh_one_last(n: i64) -> Z {
    pow2(n - 2) * (n - 2) - (n - 1)
}

fn with_two_route(engine: &Engine, group: Group, set: PeakSet, n: i64) -> Z {
    engine.poly(set).eval(n) * plain_scale(group, n, set.len() as i64)
}

/// All closed-form routes registered for `(variant, set, n)`. Empty when no
/// pattern matches or the set is not admissible.
pub fn closed_form_routes(
    engine: &Engine,
    variant: Variant,
    set: PeakSet,
    n: u32,
) -> Result<Vec<RouteValue>, FormulaError> {
    if n < 1 {
        return Err(FormulaError::InvalidN(n));
    }
    if !is_admissible(set, n, variant) {
        return Ok(Vec::new());
    }
    let key = CountKey { variant, set, n };
    let pos: Vec<i64> = set.iter().map(i64::from).collect();
    let n = n as i64;
    let mut routes = Vec::new();
    let mut push = |name: &'static str, value: Z| routes.push(RouteValue { name, value });

    match (variant.group, variant.prefix_zero) {
        (group, false) => {
            let tag = |a: &'static str, b: &'static str| match group {
                Group::Symmetric => a,
                Group::Hyperoctahedral => b,
            };
            let scale = plain_scale(group, n, pos.len() as i64);
            match pos.as_slice() {
                [] => push(tag("sym {}", "hyp {}"), scale),
                &[m] => push(tag("sym {m}", "hyp {m}"), poly_single(m, n) * scale),
                &[2, m] => push(tag("sym {2,m}", "hyp {2,m}"), poly_two_m(m, n) * scale),
                &[2, m, m2] if m2 == m + 2 => push(
                    tag("sym {2,m,m+2}", "hyp {2,m,m+2}"),
                    poly_two_m_m2(m, n) * scale,
                ),
                _ => {}
            }
        }
        (Group::Hyperoctahedral, true) => {
            match pos.as_slice() {
                [] => push("hyp-hat {}", three_pow_half(n)),
                &[m] => push("hyp-hat {m}", hh_single(m, n)),
                &[a, b] => {
                    if a == 1 {
                        push("hyp-hat {1,m}", hh_one_m(b, n));
                    }
                    push("hyp-hat {m,m+z}", hh_pair(a, b - a, n));
                }
                &[1, m, m2] if m2 == m + 2 => {
                    push("hyp-hat {1,m,m+2}", hh_one_m_m2(m, n, key)?);
                }
                _ => {}
            }
            if set.min() == Some(2) {
                push(
                    "hyp-hat 2 in S",
                    with_two_route(engine, Group::Hyperoctahedral, set, n),
                );
            }
        }
        (Group::Symmetric, true) => {
            match pos.as_slice() {
                [] => push("sym-hat {}", Z::one()),
                &[m] => {
                    if m == 1 {
                        push("sym-hat {1}", pow2(n - 1) - 1);
                    }
                    push("sym-hat {m} alternating", sh_single_alternating(m, n));
                    push("sym-hat {m} polynomial", sh_single_polynomial(m, n, key)?);
                    push("sym-hat {m} tail", sh_single_tail(m, n));
                    push("sym-hat {m} tail reindexed", sh_single_tail_reindexed(m, n));
                }
                &[1, m] => {
                    push("sym-hat {1,m}", sh_one_m(m, n));
                    push("sym-hat {1,m} via {m}", sh_one_m_relation(m, n));
                    if m == n - 1 {
                        push("sym-hat {1,n-1}", sh_one_last(n));
                    }
                }
                &[1, m, last] => {
                    if last == m + 2 {
                        push("sym-hat {1,m,m+2}", sh_one_m_m2(m, n, key)?);
                    }
                    if last == n - 1 && (3..=n - 3).contains(&m) {
                        push("sym-hat {1,m,n-1}", sh_one_m_last(engine, m, n, key)?);
                    }
                }
                _ => {}
            }
            if set.min() == Some(2) {
                push(
                    "sym-hat 2 in S",
                    with_two_route(engine, Group::Symmetric, set, n),
                );
            }
        }
    }
    Ok(routes)
}

/// The closed-form value of `(variant, set, n)` when a registered pattern
/// applies. All matching routes are evaluated; if they disagree the result
/// is a [`FormulaError::Discrepancy`] carrying every value.
pub fn closed_form(
    engine: &Engine,
    variant: Variant,
    set: PeakSet,
    n: u32,
) -> Result<Option<Count>, FormulaError> {
    let routes = closed_form_routes(engine, variant, set, n)?;
    let Some(first) = routes.first() else {
        return Ok(None);
    };
    let agree = routes.iter().all(|r| r.value == first.value);
    if !agree || !is_nonnegative(&first.value) {
        return Err(FormulaError::Discrepancy(Box::new(Discrepancy {
            variant,
            set,
            n,
            routes,
        })));
    }
    Ok(Count::from_signed(&first.value))
}
