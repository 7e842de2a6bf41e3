//! Theorem checkers and the verification sweep.
//!
//! Every check is exact. [`verify_all`] runs the whole battery and returns a
//! [`VerificationReport`] with one record per `(check, parameters)` pair; a
//! failing record carries both sides and the full parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::formulas::{
    binom_u, closed_form_routes, fibonacci, pm_recursion_holds, stirling2, BinPoly, Engine,
    FormulaError,
};
use crate::oracle::{
    check_shape_bijection, enumerate_tally, OracleConfig, OracleError, TallyTable,
};
use crate::peakcore::{
    admissible_sets, is_admissible, reflect_set, Count, Group, PeakError, PeakSet, Variant,
};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("S={{{set}}} is not {n}-admissible for {variant}")]
    Inadmissible {
        variant: Variant,
        set: PeakSet,
        n: u32,
    },
    #[error("decomposition needs a set without position 1, got S={{{0}}}")]
    ContainsOne(PeakSet),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Peak(#[from] PeakError),
}

/// What the parity theorems say about a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    /// Plain families: the count carries a positive power of two.
    AlwaysEvenByDivisibility,
    NoTheorem,
}

impl Parity {
    pub fn conforms(self, count: &Count) -> bool {
        match self {
            Parity::Even | Parity::AlwaysEvenByDivisibility => count.is_even(),
            Parity::Odd => !count.is_even(),
            Parity::NoTheorem => true,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::AlwaysEvenByDivisibility => "even (power of two)",
            Parity::NoTheorem => "no theorem",
        }
    }
}

pub fn parity_predict(variant: Variant, set: PeakSet, n: u32) -> Result<Parity, AnalysisError> {
    if n < 1 || !is_admissible(set, n, variant) {
        return Err(AnalysisError::Inadmissible { variant, set, n });
    }
    let s = set.len() as i64;
    let n_i = n as i64;
    Ok(match (variant.group, variant.prefix_zero) {
        (Group::Hyperoctahedral, true) => {
            if set.has_even() || n % 2 == 1 {
                Parity::Even
            } else {
                Parity::Odd
            }
        }
        (Group::Symmetric, true) => {
            if set.has_even() {
                Parity::Even
            } else {
                Parity::Odd
            }
        }
        (Group::Hyperoctahedral, false) if 2 * n_i - s > 1 => Parity::AlwaysEvenByDivisibility,
        (Group::Symmetric, false) if n_i - s > 1 => Parity::AlwaysEvenByDivisibility,
        _ => Parity::NoTheorem,
    })
}

fn plain(group: Group) -> Variant {
    Variant::new(group, false)
}

fn hat(group: Group) -> Variant {
    Variant::new(group, true)
}

/// Reversal symmetry for the plain family of `group`.
pub fn check_symmetry(
    engine: &Engine,
    set: PeakSet,
    n: u32,
    group: Group,
) -> Result<bool, AnalysisError> {
    let reflected = reflect_set(set, n)?;
    let v = plain(group);
    Ok(engine.count(v, set, n)? == engine.count(v, reflected, n)?)
}

/// `#P(S,n) = #P̂(S,n) + #P̂(S ∪ {1},n)` for either group.
pub fn check_decomposition(
    engine: &Engine,
    set: PeakSet,
    n: u32,
    group: Group,
) -> Result<bool, AnalysisError> {
    let (lhs, first, second) =
        decomposition_terms(set, n, group, |v, s| Ok(engine.count(v, s, n)?.0))?;
    Ok(lhs == first + second)
}

fn with_one(set: PeakSet) -> Option<PeakSet> {
    PeakSet::from_bits(set.bits() | 1).ok()
}

type Terms = (BigUint, BigUint, BigUint);

fn decomposition_terms(
    set: PeakSet,
    _n: u32,
    group: Group,
    mut value: impl FnMut(Variant, PeakSet) -> Result<BigUint, AnalysisError>,
) -> Result<Terms, AnalysisError> {
    if set.contains(1) {
        return Err(AnalysisError::ContainsOne(set));
    }
    let lhs = value(plain(group), set)?;
    let first = value(hat(group), set)?;
    let second = match with_one(set) {
        Some(s) => value(hat(group), s)?,
        None => BigUint::zero(),
    };
    Ok((lhs, first, second))
}

/// `#P_B(S,n) = 2ⁿ·#P(S,n)`.
pub fn check_ratio(engine: &Engine, set: PeakSet, n: u32) -> Result<bool, AnalysisError> {
    let signed = engine.count(Variant::PB, set, n)?;
    let unsigned = engine.count(Variant::P, set, n)?;
    Ok(signed.0 == unsigned.0 << n as usize)
}

/// One row of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub params: Value,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub lhs_engine: &'static str,
    pub rhs_engine: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n_max_sym: u32,
    pub n_max_hyp: u32,
    pub closed_form_n_max: u32,
    pub wall_time_secs: f64,
    pub pass: bool,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// `check -> (passed, failed)`, in first-seen order.
    pub fn summary(&self) -> Vec<(&'static str, usize, usize)> {
        let mut order: Vec<&'static str> = Vec::new();
        let mut tally: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
        for r in &self.records {
            let e = tally.entry(r.check).or_insert_with(|| {
                order.push(r.check);
                (0, 0)
            });
            if r.pass {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        order
            .into_iter()
            .map(|c| (c, tally[c].0, tally[c].1))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialises")
    }

    /// Summary table plus every failing row; with `all_rows` every row.
    pub fn render_text(&self, all_rows: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "verification: sym n<={}, hyp n<={}, closed forms n<={}",
            self.n_max_sym, self.n_max_hyp, self.closed_form_n_max
        );
        let _ = writeln!(out, "{:<28} {:>8} {:>6}", "check", "pass", "fail");
        for (check, pass, fail) in self.summary() {
            let _ = writeln!(out, "{check:<28} {pass:>8} {fail:>6}");
        }
        let rows: Vec<&CheckRecord> = if all_rows {
            self.records.iter().collect()
        } else {
            self.failures().collect()
        };
        for r in rows {
            let _ = writeln!(
                out,
                "{} {} {} | {} [{}] vs {} [{}]{}",
                if r.pass { "ok  " } else { "FAIL" },
                r.check,
                r.params,
                r.lhs,
                r.lhs_engine,
                r.rhs,
                r.rhs_engine,
                r.note
                    .as_deref()
                    .map(|n| format!(" ({n})"))
                    .unwrap_or_default()
            );
        }
        let failures = self.failures().count();
        let _ = writeln!(
            out,
            "{} ({} checks, {} failures) in {:.2}s",
            if failures == 0 { "PASS" } else { "FAIL" },
            self.records.len(),
            failures,
            self.wall_time_secs
        );
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n_max_sym: u32,
    pub n_max_hyp: u32,
    /// Closed forms are swept against the recursion up to this length.
    pub closed_form_n_max: u32,
    /// Below this length every admissible set is tried against the closed
    /// forms; above it only the registered shape families are.
    pub closed_form_exhaustive_n: u32,
    pub oracle: OracleConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_max_sym: 10,
            n_max_hyp: 8,
            closed_form_n_max: 30,
            closed_form_exhaustive_n: 12,
            oracle: OracleConfig::default(),
        }
    }
}

fn params(variant: Variant, set: PeakSet, n: u32) -> Value {
    json!({ "variant": variant.token(), "set": set.to_string(), "n": n })
}

struct Recorder {
    records: Vec<CheckRecord>,
}

impl Recorder {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        check: &'static str,
        params: Value,
        lhs: impl ToString,
        rhs: impl ToString,
        pass: bool,
        engines: (&'static str, &'static str),
        note: Option<String>,
    ) {
        self.records.push(CheckRecord {
            check,
            params,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
            lhs_engine: engines.0,
            rhs_engine: engines.1,
            note,
        });
    }
}

/// Runs every check with default options for the given caps.
pub fn verify_all(n_max_sym: u32, n_max_hyp: u32) -> Result<VerificationReport, AnalysisError> {
    let options = VerifyOptions {
        n_max_sym,
        n_max_hyp,
        ..VerifyOptions::default()
    };
    verify_with(&Engine::new(), &options)
}

pub fn verify_with(
    engine: &Engine,
    options: &VerifyOptions,
) -> Result<VerificationReport, AnalysisError> {
    let start = Instant::now();
    let mut rec = Recorder {
        records: Vec::new(),
    };

    let mut tables: BTreeMap<(Variant, u32), TallyTable> = BTreeMap::new();
    for variant in Variant::ALL {
        let cap = if variant.is_signed() {
            options.n_max_hyp
        } else {
            options.n_max_sym
        };
        for n in 1..=cap {
            tables.insert((variant, n), enumerate_tally(variant, n, &options.oracle)?);
        }
    }

    for ((variant, n), table) in &tables {
        sweep_table(engine, &mut rec, *variant, *n, table)?;
    }
    structural_identities(&mut rec, &tables, options)?;
    fibonacci_law(&mut rec)?;
    shape_bijection(&mut rec, options.n_max_hyp.min(8))?;
    closed_form_sweep(engine, &mut rec, options)?;
    polynomial_laws(engine, &mut rec);

    let records = rec.records;
    let pass = records.iter().all(|r| r.pass);
    Ok(VerificationReport {
        n_max_sym: options.n_max_sym,
        n_max_hyp: options.n_max_hyp,
        closed_form_n_max: options.closed_form_n_max,
        wall_time_secs: start.elapsed().as_secs_f64(),
        pass,
        records,
    })
}

/// Formula vs oracle, group order, support, parity, and closed forms for
/// one exhaustive table.
fn sweep_table(
    engine: &Engine,
    rec: &mut Recorder,
    variant: Variant,
    n: u32,
    table: &TallyTable,
) -> Result<(), AnalysisError> {
    let p = json!({ "variant": variant.token(), "n": n });
    let order = variant.group_order(n);
    let total = table.total();
    rec.push(
        "group_order",
        p.clone(),
        &total,
        &order,
        total == order,
        ("oracle", "identity"),
        None,
    );

    let support: Vec<PeakSet> = table.nonzero().map(|(s, _)| s).collect();
    let all_admissible = support.iter().all(|&s| is_admissible(s, n, variant));
    let fib_index = if variant.prefix_zero { n + 1 } else { n } as u64;
    let predicted = fibonacci(fib_index);
    rec.push(
        "tally_support",
        p,
        support.len(),
        &predicted,
        all_admissible && BigUint::from(support.len()) == predicted,
        ("oracle", "fibonacci"),
        (!all_admissible).then(|| "inadmissible key with nonzero count".to_string()),
    );

    for set in admissible_sets(n, variant)? {
        let oracle = table.get(set);
        let formula = engine.count(variant, set, n)?;
        rec.push(
            "oracle_vs_formula",
            params(variant, set, n),
            &formula,
            &oracle,
            formula == oracle,
            ("formula", "oracle"),
            None,
        );

        let prediction = parity_predict(variant, set, n)?;
        if variant.prefix_zero {
            rec.push(
                "parity",
                params(variant, set, n),
                &oracle,
                prediction.label(),
                prediction.conforms(&oracle),
                ("oracle", "theorem"),
                None,
            );
        } else {
            let s = set.len() as u64;
            let exponent = match variant.group {
                Group::Symmetric => n as u64 - s - 1,
                Group::Hyperoctahedral => 2 * n as u64 - s - 1,
            };
            let divides = oracle.value().trailing_zeros().unwrap_or(u64::MAX) >= exponent;
            rec.push(
                "divisibility",
                params(variant, set, n),
                &oracle,
                format!("multiple of 2^{exponent}"),
                divides,
                ("oracle", "theorem"),
                None,
            );
        }

        closed_form_record(
            engine,
            rec,
            "closed_form_vs_oracle",
            variant,
            set,
            n,
            &oracle,
            "oracle",
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn closed_form_record(
    engine: &Engine,
    rec: &mut Recorder,
    check: &'static str,
    variant: Variant,
    set: PeakSet,
    n: u32,
    reference: &Count,
    reference_engine: &'static str,
) {
    match closed_form_routes(engine, variant, set, n) {
        Ok(routes) => {
            if routes.is_empty() {
                return;
            }
            let target = reference.to_signed();
            let pass = routes.iter().all(|r| r.value == target);
            let note = routes
                .iter()
                .map(|r| format!("{} = {}", r.name, r.value))
                .collect::<Vec<_>>()
                .join("; ");
            let shown = if pass {
                target.to_string()
            } else {
                routes
                    .iter()
                    .map(|r| r.value.to_string())
                    .collect::<Vec<_>>()
                    .join(" / ")
            };
            rec.push(
                check,
                params(variant, set, n),
                shown,
                reference,
                pass,
                ("closed", reference_engine),
                Some(note),
            );
        }
        Err(e) => rec.push(
            check,
            params(variant, set, n),
            "error",
            reference,
            false,
            ("closed", reference_engine),
            Some(e.to_string()),
        ),
    }
}

fn structural_identities(
    rec: &mut Recorder,
    tables: &BTreeMap<(Variant, u32), TallyTable>,
    options: &VerifyOptions,
) -> Result<(), AnalysisError> {
    for group in [Group::Symmetric, Group::Hyperoctahedral] {
        let cap = match group {
            Group::Symmetric => options.n_max_sym,
            Group::Hyperoctahedral => options.n_max_hyp,
        };
        for n in 1..=cap {
            let plain_t = &tables[&(plain(group), n)];
            let hat_t = &tables[&(hat(group), n)];
            for set in admissible_sets(n, plain(group))? {
                let p = json!({ "group": group.token(), "set": set.to_string(), "n": n });

                let reflected = reflect_set(set, n)?;
                let (a, b) = (plain_t.get(set), plain_t.get(reflected));
                rec.push(
                    "symmetry",
                    p.clone(),
                    &a,
                    &b,
                    a == b,
                    ("oracle", "oracle"),
                    Some(format!("reflected S={{{reflected}}}")),
                );

                let (lhs, first, second) = decomposition_terms(set, n, group, |v, s| {
                    let t = if v.prefix_zero { hat_t } else { plain_t };
                    Ok(t.get(s).0)
                })?;
                let two_in_set = set.contains(2);
                let pass = lhs == &first + &second && (!two_in_set || second.is_zero());
                rec.push(
                    "decomposition",
                    p,
                    &lhs,
                    &first + &second,
                    pass,
                    ("oracle", "oracle"),
                    Some(format!("{first} + {second}")),
                );
            }
        }
    }

    for n in 1..=options.n_max_sym.min(options.n_max_hyp) {
        let signed = &tables[&(Variant::PB, n)];
        let unsigned = &tables[&(Variant::P, n)];
        for set in admissible_sets(n, Variant::P)? {
            let lhs = signed.get(set).0;
            let rhs = unsigned.get(set).0 << n as usize;
            rec.push(
                "ratio",
                json!({ "set": set.to_string(), "n": n }),
                &lhs,
                &rhs,
                lhs == rhs,
                ("oracle", "oracle"),
                None,
            );
        }
    }
    Ok(())
}

fn fibonacci_law(rec: &mut Recorder) -> Result<(), AnalysisError> {
    for variant in Variant::ALL {
        for n in 1..=20u32 {
            let len = admissible_sets(n, variant)?.len();
            let index = if variant.prefix_zero { n + 1 } else { n };
            let expected = fibonacci(index as u64);
            rec.push(
                "fibonacci",
                json!({ "variant": variant.token(), "n": n }),
                len,
                &expected,
                BigUint::from(len) == expected,
                ("enumeration", "fibonacci"),
                None,
            );
        }
    }
    Ok(())
}

fn shape_bijection(rec: &mut Recorder, n_max: u32) -> Result<(), AnalysisError> {
    for n in 1..=n_max {
        let summary = check_shape_bijection(n)?;
        let stirling: BigUint = (1..=3).map(|k| stirling2(n as u64 + 1, k)).sum();
        let three_power = (num_traits::pow(BigUint::from(3u32), n as usize) + 1u32) / 2u32;
        let pass = summary.is_bijection()
            && BigUint::from(summary.partitions) == stirling
            && stirling == three_power;
        rec.push(
            "shape_bijection",
            json!({ "n": n }),
            summary.distinct_images,
            &three_power,
            pass,
            ("enumeration", "stirling"),
            Some(format!(
                "words={} partitions={} round_trips={} covers={}",
                summary.words, summary.partitions, summary.round_trips, summary.covers_partitions
            )),
        );
    }
    Ok(())
}

/// Sets matching at least one registered closed-form shape for length `n`.
fn shape_family_sets(n: u32) -> BTreeSet<PeakSet> {
    let mut out = BTreeSet::new();
    let mut add = |p: &[u32]| {
        if let Ok(s) = PeakSet::new(p) {
            out.insert(s);
        }
    };
    add(&[]);
    for m in 1..n {
        add(&[m]);
        add(&[1, m]);
        add(&[2, m]);
        add(&[2, m, m + 2]);
        add(&[1, m, m + 2]);
        add(&[1, m, n - 1]);
        for b in m + 2..n {
            add(&[m, b]);
        }
    }
    out
}

fn closed_form_sweep(
    engine: &Engine,
    rec: &mut Recorder,
    options: &VerifyOptions,
) -> Result<(), AnalysisError> {
    for n in 1..=options.closed_form_n_max {
        for variant in Variant::ALL {
            let sets: Vec<PeakSet> = if n <= options.closed_form_exhaustive_n {
                admissible_sets(n, variant)?
            } else {
                shape_family_sets(n)
                    .into_iter()
                    .filter(|&s| is_admissible(s, n, variant))
                    .collect()
            };
            for set in sets {
                let recursion = engine.count(variant, set, n)?;
                closed_form_record(
                    engine,
                    rec,
                    "closed_form_vs_recursion",
                    variant,
                    set,
                    n,
                    &recursion,
                    "formula",
                );
            }
        }
    }
    Ok(())
}

/// `C(n−1, m−1) − 1` as a binomial-basis polynomial, built independently of
/// the recursion from `C(n−1,k) = Σⱼ (−1)^(k−j) C(n,j)`.
pub fn single_peak_reference(m: u32) -> BinPoly {
    let k = m as usize - 1;
    let mut coeffs: Vec<BigInt> = (0..=k)
        .map(|j| {
            if (k - j).is_multiple_of(2) {
                BigInt::one()
            } else {
                -BigInt::one()
            }
        })
        .collect();
    coeffs[0] -= 1;
    BinPoly::from_coeffs(coeffs)
}

fn polynomial_laws(engine: &Engine, rec: &mut Recorder) {
    for set in admissible_sets(16, Variant::P).expect("n in range") {
        let poly = engine.poly(set);
        let expected = set.max().map_or(0, |m| m as usize - 1);
        let degree = poly.degree();
        rec.push(
            "poly_degree",
            json!({ "set": set.to_string() }),
            degree.map_or("none".to_string(), |d| d.to_string()),
            expected,
            degree == Some(expected),
            ("formula", "theorem"),
            None,
        );
    }
    for m in 2..=24u32 {
        let set = PeakSet::new(&[m]).expect("single position");
        let poly = engine.poly(set);
        let reference = single_peak_reference(m);
        // also cross-check pointwise against plain binomials
        let pointwise = (m + 1..m + 12)
            .all(|n| BigInt::from(binom_u(n as u64 - 1, m as u64 - 1)) - 1 == poly.eval(n as i64));
        rec.push(
            "poly_single_peak",
            json!({ "m": m }),
            &poly,
            &reference,
            poly == reference && pointwise,
            ("formula", "identity"),
            None,
        );
    }
    for d in 0..=15u32 {
        let points = (-10i64..40).collect::<Vec<_>>();
        rec.push(
            "pm_recursion",
            json!({ "d": d, "points": points.len() }),
            if pm_recursion_holds(d, points.iter().copied()) {
                "holds"
            } else {
                "fails"
            },
            "holds",
            pm_recursion_holds(d, points),
            ("formula", "identity"),
            None,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: &[u32]) -> PeakSet {
        PeakSet::new(p).unwrap()
    }

    #[test]
    fn parity_examples() {
        assert_eq!(
            parity_predict(Variant::PB_HAT, set(&[3]), 4).unwrap(),
            Parity::Odd
        );
        assert_eq!(
            parity_predict(Variant::P_HAT, PeakSet::EMPTY, 5).unwrap(),
            Parity::Odd
        );
        assert_eq!(
            parity_predict(Variant::PB_HAT, set(&[2, 5]), 9).unwrap(),
            Parity::Even
        );
        assert_eq!(
            parity_predict(Variant::PB_HAT, PeakSet::EMPTY, 3).unwrap(),
            Parity::Even
        );
        assert_eq!(
            parity_predict(Variant::PB, PeakSet::EMPTY, 1).unwrap(),
            Parity::AlwaysEvenByDivisibility
        );
        assert_eq!(
            parity_predict(Variant::P, PeakSet::EMPTY, 1).unwrap(),
            Parity::NoTheorem
        );
        assert_eq!(
            parity_predict(Variant::P, set(&[2]), 3).unwrap(),
            Parity::AlwaysEvenByDivisibility
        );
        assert!(parity_predict(Variant::P, set(&[1]), 3).is_err());
    }

    #[test]
    fn identity_examples() {
        let e = Engine::new();
        assert!(check_symmetry(&e, set(&[2]), 5, Group::Hyperoctahedral).unwrap());
        assert_eq!(
            e.count(Variant::PB, set(&[2]), 5).unwrap(),
            Count::from(768)
        );
        assert!(check_symmetry(&e, PeakSet::EMPTY, 6, Group::Symmetric).unwrap());
        assert!(check_symmetry(&e, set(&[2, 4]), 7, Group::Hyperoctahedral).unwrap());

        assert!(check_decomposition(&e, set(&[3]), 4, Group::Hyperoctahedral).unwrap());
        assert!(check_decomposition(&e, PeakSet::EMPTY, 2, Group::Hyperoctahedral).unwrap());
        assert!(check_decomposition(&e, set(&[2]), 4, Group::Symmetric).unwrap());
        assert!(check_decomposition(&e, set(&[1]), 4, Group::Symmetric).is_err());

        assert!(check_ratio(&e, PeakSet::EMPTY, 3).unwrap());
        assert!(check_ratio(&e, set(&[2]), 4).unwrap());
        assert!(check_ratio(&e, set(&[2, 4]), 5).unwrap());
    }

    #[test]
    fn trivial_sweep_passes() {
        let options = VerifyOptions {
            n_max_sym: 1,
            n_max_hyp: 1,
            closed_form_n_max: 6,
            closed_form_exhaustive_n: 6,
            ..VerifyOptions::default()
        };
        let report = verify_with(&Engine::new(), &options).unwrap();
        assert!(report.passed(), "{}", report.render_text(false));
        let formula_rows = report
            .records
            .iter()
            .filter(|r| r.check == "oracle_vs_formula")
            .count();
        assert_eq!(formula_rows, 4);
    }

    #[test]
    fn reference_polynomial() {
        // m = 2: C(n,1) − 1 − 1 = n − 2
        assert_eq!(
            single_peak_reference(2).coeffs(),
            &[BigInt::from(-2), BigInt::from(1)]
        );
    }
}
