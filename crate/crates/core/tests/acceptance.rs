//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Runs without the libtest harness so the
//! lines are always shown. Every tolerance is exact integer equality.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use peaktally::analysis::{verify_with, CheckRecord, VerificationReport, VerifyOptions};
use peaktally::formulas::{fibonacci, Engine};
use peaktally::oracle::{oracle_count, OracleConfig};
use peaktally::peakcore::{admissible_sets, Count, PeakSet, Variant};

const N_MAX_SYM: u32 = 10;
const N_MAX_HYP: u32 = 8;
const CLOSED_N_MAX: u32 = 30;
const TOLERANCE: &str = "exact";

struct Outcome {
    id: u32,
    title: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new(id: u32, title: &'static str) -> Self {
        Outcome {
            id,
            title,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, report: &VerificationReport, checks: &[&str]) {
        for r in rows(report, checks) {
            self.expect(r.pass, || describe(r));
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }

    fn line(&self) -> String {
        format!(
            "criterion {} {:<34} {} ({} checks, {} failures, tolerance {TOLERANCE})",
            self.id,
            self.title,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.failures.len()
        )
    }
}

fn rows<'a>(
    report: &'a VerificationReport,
    checks: &'a [&'a str],
) -> impl Iterator<Item = &'a CheckRecord> {
    report
        .records
        .iter()
        .filter(move |r| checks.contains(&r.check))
}

fn describe(r: &CheckRecord) -> String {
    format!("{} {} lhs={} rhs={}", r.check, r.params, r.lhs, r.rhs)
}

fn set(p: &[u32]) -> PeakSet {
    PeakSet::new(p).unwrap()
}

fn cap(variant: Variant) -> u32 {
    if variant.is_signed() {
        N_MAX_HYP
    } else {
        N_MAX_SYM
    }
}

/// Number of `(variant, S, n)` triples the equivalence sweep must cover.
fn expected_sweep_rows() -> usize {
    Variant::ALL
        .iter()
        .map(|&v| {
            (1..=cap(v))
                .map(|n| admissible_sets(n, v).unwrap().len())
                .sum::<usize>()
        })
        .sum()
}

fn criterion_1(report: &VerificationReport) -> Outcome {
    let mut o = Outcome::new(1, "oracle-formula equivalence");
    o.absorb(
        report,
        &["oracle_vs_formula", "group_order", "tally_support"],
    );
    let covered: BTreeSet<String> = rows(report, &["oracle_vs_formula"])
        .map(|r| r.params.to_string())
        .collect();
    let expected = expected_sweep_rows();
    o.expect(covered.len() == expected, || {
        format!(
            "sweep covered {} triples, expected {expected}",
            covered.len()
        )
    });
    o
}

fn criterion_2(engine: &Engine, config: &OracleConfig) -> Outcome {
    let mut o = Outcome::new(2, "reference sequences");
    let hat_b = [2u64, 5, 14, 41, 122, 365];
    for (i, &want) in hat_b.iter().enumerate() {
        let n = i as u32 + 1;
        let got = engine.count(Variant::PB_HAT, PeakSet::EMPTY, n).unwrap();
        o.expect(got == Count::from(want), || {
            format!("hat B n={n}: {got} != {want}")
        });
        let brute = oracle_count(Variant::PB_HAT, PeakSet::EMPTY, n, config).unwrap();
        o.expect(brute == Count::from(want), || {
            format!("hat B oracle n={n}: {brute}")
        });
    }
    for n in 1..=12u32 {
        let b = engine.count(Variant::PB, PeakSet::EMPTY, n).unwrap();
        let want = Count(BigUint::from(1u32) << (2 * n - 1) as usize);
        o.expect(b == want, || format!("B empty n={n}: {b} != {want}"));

        let s = engine.count(Variant::P_HAT, PeakSet::EMPTY, n).unwrap();
        o.expect(s == Count::from(1), || format!("hat S empty n={n}: {s}"));

        let one = engine.count(Variant::P_HAT, set(&[1]), n).unwrap();
        let want = Count::from((1u64 << (n - 1)) - 1);
        o.expect(one == want, || {
            format!("hat S {{1}} n={n}: {one} != {want}")
        });
        if n <= N_MAX_SYM {
            let brute = oracle_count(Variant::P_HAT, set(&[1]), n, config).unwrap();
            o.expect(brute == want, || {
                format!("hat S {{1}} oracle n={n}: {brute}")
            });
        }
    }
    o
}

fn criterion_3(report: &VerificationReport) -> Outcome {
    let mut o = Outcome::new(3, "fibonacci law");
    o.absorb(report, &["fibonacci"]);
    for v in Variant::ALL {
        for n in 1..=20u32 {
            let len = admissible_sets(n, v).unwrap().len();
            let want = fibonacci(if v.prefix_zero {
                n as u64 + 1
            } else {
                n as u64
            });
            o.expect(BigUint::from(len) == want, || {
                format!("{v} n={n}: {len} != {want}")
            });
        }
    }
    o
}

fn criterion_4(report: &VerificationReport) -> Outcome {
    let mut o = Outcome::new(4, "parity theorems");
    o.absorb(report, &["parity"]);
    let hat_rows: usize = [Variant::P_HAT, Variant::PB_HAT]
        .iter()
        .map(|&v| {
            (1..=cap(v))
                .map(|n| admissible_sets(n, v).unwrap().len())
                .sum::<usize>()
        })
        .sum();
    let seen = rows(report, &["parity"]).count();
    o.expect(seen == hat_rows, || {
        format!("parity rows {seen}, expected {hat_rows}")
    });
    o
}

fn criterion_5(report: &VerificationReport) -> Outcome {
    let mut o = Outcome::new(5, "structural identities");
    o.absorb(
        report,
        &["symmetry", "decomposition", "ratio", "divisibility"],
    );
    for check in ["symmetry", "decomposition", "ratio", "divisibility"] {
        let seen = rows(report, &[check]).count();
        o.expect(seen > 0, || format!("no {check} rows"));
    }
    let spot = rows(report, &["decomposition"]).any(|r| {
        r.params["group"] == "hyp"
            && r.params["set"] == "3"
            && r.params["n"] == 4
            && r.note.as_deref() == Some("71 + 57")
            && r.lhs == "128"
    });
    o.expect(spot, || "missing 128 = 71 + 57 decomposition row".into());
    o
}

fn criterion_6(report: &VerificationReport, engine: &Engine, config: &OracleConfig) -> Outcome {
    let mut o = Outcome::new(6, "closed-form registry");
    o.absorb(
        report,
        &["closed_form_vs_recursion", "closed_form_vs_oracle"],
    );
    let max_n = rows(report, &["closed_form_vs_recursion"])
        .filter_map(|r| r.params["n"].as_u64())
        .max()
        .unwrap_or(0);
    o.expect(max_n == CLOSED_N_MAX as u64, || {
        format!("closed forms swept to n={max_n}, expected {CLOSED_N_MAX}")
    });
    let spots = [
        (Variant::PB_HAT, vec![3], 4, 71u64),
        (Variant::PB_HAT, vec![1, 3], 4, 57),
        (Variant::P_HAT, vec![1, 3], 4, 5),
        (Variant::P, vec![2], 4, 8),
    ];
    for (v, p, n, want) in spots {
        let s = set(&p);
        let want = Count::from(want);
        let formula = engine.count(v, s, n).unwrap();
        let brute = oracle_count(v, s, n, config).unwrap();
        let closed = peaktally::formulas::closed_form(engine, v, s, n).unwrap();
        o.expect(
            formula == want && brute == want && closed == Some(want.clone()),
            || format!("{v} {{{s}}} n={n}: formula {formula}, oracle {brute}, closed {closed:?}"),
        );
    }
    o
}

fn criterion_7(report: &VerificationReport) -> Outcome {
    let mut o = Outcome::new(7, "partition bijection");
    o.absorb(report, &["shape_bijection"]);
    let ns: BTreeSet<u64> = rows(report, &["shape_bijection"])
        .filter_map(|r| r.params["n"].as_u64())
        .collect();
    o.expect(ns == (1..=8).collect(), || {
        format!("bijection covered n in {ns:?}")
    });
    o
}

fn criterion_8(report: &VerificationReport) -> Outcome {
    let mut o = Outcome::new(8, "polynomial engine");
    o.absorb(report, &["poly_degree", "poly_single_peak", "pm_recursion"]);
    let pm: BTreeSet<u64> = rows(report, &["pm_recursion"])
        .filter(|r| r.params["points"] == 50)
        .filter_map(|r| r.params["d"].as_u64())
        .collect();
    o.expect(pm == (0..=15).collect(), || {
        format!("pm recursion covered d in {pm:?}")
    });
    o
}

fn main() {
    let config = OracleConfig::default();
    let options = VerifyOptions {
        n_max_sym: N_MAX_SYM,
        n_max_hyp: N_MAX_HYP,
        closed_form_n_max: CLOSED_N_MAX,
        oracle: config,
        ..VerifyOptions::default()
    };
    let engine = Engine::new();
    let report = verify_with(&engine, &options).expect("verification runs");

    let outcomes = [
        criterion_1(&report),
        criterion_2(&engine, &config),
        criterion_3(&report),
        criterion_4(&report),
        criterion_5(&report),
        criterion_6(&report, &engine, &config),
        criterion_7(&report),
        criterion_8(&report),
    ];

    println!(
        "acceptance: {} report rows in {:.1}s",
        report.records.len(),
        report.wall_time_secs
    );
    for o in &outcomes {
        println!("{}", o.line());
        for f in o.failures.iter().take(10) {
            println!("    {f}");
        }
    }
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
