//! The acceptance gate: one line per criterion, each with pinned parameters and a
//! wall-clock budget.

use std::io::Write;
use std::time::{Duration, Instant};

use qwitt::cli::{run_suites, RunOptions, SuiteConfig};
use qwitt::report::{Report, Status};
use sha2::{Digest, Sha256};

const SEED: u64 = 1;
/// Full-suite budget for criterion 12.
const TOTAL_BUDGET: Duration = Duration::from_secs(15 * 60);

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    config: SuiteConfig,
    /// Only records with these names count; empty means all.
    names: &'static [&'static str],
}

fn cfg(suites: &[&str]) -> SuiteConfig {
    SuiteConfig { suites: suites.iter().map(|s| s.to_string()).collect(), seed: SEED, ..SuiteConfig::default() }
}

fn strings(xs: &[&str]) -> Option<Vec<String>> {
    Some(xs.iter().map(|s| s.to_string()).collect())
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion {
            id: 1,
            title: "ghost maps are ring homomorphisms",
            budget: secs(30),
            config: SuiteConfig {
                ms: Some(vec![2, 3, 4, 6, 8, 12]),
                rings: strings(&["z", "zmod:4", "f3", "poly:z:T"]),
                trials: Some(200),
                ..cfg(&["ghost-hom"])
            },
            names: &[],
        },
        Criterion {
            id: 2,
            title: "F V = m/d and V F = [m/d]_{q^d} on presented q-Witt rings",
            budget: secs(120),
            config: SuiteConfig {
                ms: Some((1..=12).collect()),
                rings: strings(&["f2", "f3", "zmod:4"]),
                ..cfg(&["fvrel"])
            },
            names: &[],
        },
        Criterion {
            id: 3,
            title: "augmented Koszul complex is exact",
            budget: secs(120),
            config: SuiteConfig {
                ms: Some(vec![6, 12]),
                rings: strings(&["f2", "zmod:4", "poly:zmod:2:x/x^2"]),
                ..cfg(&["koszul"])
            },
            names: &[],
        },
        Criterion {
            id: 4,
            title: "qW_m(Z) = Z[q]/(q^m - 1) via c_m",
            budget: secs(10),
            config: SuiteConfig { ms: Some((1..=12).collect()), trials: Some(50), ..cfg(&["lambda-iso"]) },
            names: &[],
        },
        Criterion {
            id: 5,
            title: "W_m(R) injects into qW_m(R)",
            budget: secs(60),
            config: SuiteConfig {
                ms: Some((1..=6).collect()),
                rings: strings(&["f2", "f3", "zmod:4"]),
                ..cfg(&["injectivity"])
            },
            names: &["witt-injective"],
        },
        Criterion {
            id: 6,
            title: "Jackson derivative, q-Leibniz rule and d d = 0",
            budget: secs(10),
            config: SuiteConfig { trials: Some(200), ..cfg(&["calculus"]) },
            names: &[],
        },
        Criterion {
            id: 7,
            title: "tensor decomposition of the two-term model complexes",
            budget: secs(30),
            config: SuiteConfig { ms: Some(vec![2, 4, 8, 3, 9, 27]), prec_p: Some(8), ..cfg(&["ke"]) },
            names: &["ke-tensor-iso"],
        },
        Criterion {
            id: 8,
            title: "q-Hodge cohomology at prime-power level is p-torsion-free",
            budget: secs(180),
            config: SuiteConfig {
                ms: Some(vec![2, 4, 3, 9]),
                vars: Some(vec![1, 2]),
                maxdeg: Some(8),
                prec_p: Some(8),
                ..cfg(&["pcomplete"])
            },
            names: &["p-torsion-free"],
        },
        Criterion {
            id: 9,
            title: "degree-0 image lattice equals H^0, and H^1 matches its prediction",
            budget: secs(180),
            config: SuiteConfig {
                ms: Some(vec![2, 3, 4, 6]),
                vars: Some(vec![1]),
                maxdeg: Some(12),
                prec_q: Some(8),
                prec_p: Some(8),
                ..cfg(&["h0-image"])
            },
            names: &[],
        },
        Criterion {
            id: 10,
            title: "q-V and q-FV axioms on the cohomological model",
            budget: secs(180),
            config: SuiteConfig {
                ms: Some(vec![1, 2, 3, 4, 6]),
                vars: Some(vec![1, 2]),
                maxdeg: Some(6),
                ..cfg(&["qv", "qfv"])
            },
            names: &[],
        },
        Criterion {
            id: 11,
            title: "p-local product decomposition of qW_6",
            budget: secs(60),
            config: SuiteConfig { ms: Some(vec![6]), rings: strings(&["zmod:4", "f3"]), ..cfg(&["zp-decomp"]) },
            names: &[],
        },
    ]
}

fn verdict(report: &Report, names: &[&str]) -> (bool, usize, usize) {
    let relevant: Vec<_> =
        report.records.iter().filter(|r| names.is_empty() || names.contains(&r.check.name.as_str())).collect();
    let bad = relevant.iter().filter(|r| r.check.status != Status::Pass).count();
    (!relevant.is_empty() && bad == 0, relevant.len(), bad)
}

fn line(text: String) {
    // Written to the raw handle so the gate is visible without --nocapture.
    let _ = writeln!(std::io::stderr(), "{text}");
}

fn digest(r: &Report) -> String {
    Sha256::digest(r.to_json().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn acceptance_gate() {
    let start = Instant::now();
    let mut all_ok = true;
    let mut reports = Vec::new();
    for c in criteria() {
        let t = Instant::now();
        let report = run_suites(&c.config, RunOptions::default()).expect("criterion runs");
        let elapsed = t.elapsed();
        let (ok, n, bad) = verdict(&report, c.names);
        let in_budget = elapsed <= c.budget;
        let pass = ok && in_budget;
        all_ok &= pass;
        line(format!(
            "criterion {:>2}: {} - {} ({n} checks, {bad} not passed, {:.1}s of {}s)",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        ));
        if !ok {
            for r in report.records.iter().filter(|r| r.check.status != Status::Pass).take(5) {
                line(format!("    {} {}: {:?}", r.suite, r.key, r.check.witness));
            }
        }
        reports.push((c, report));
    }
    // Criterion 12: the whole gate within budget, and a second run of every suite
    // reproduces byte-identical reports.
    let mut identical = true;
    for (c, first) in &reports {
        let again = run_suites(&c.config, RunOptions::default()).expect("criterion reruns");
        identical &= digest(first) == digest(&again);
    }
    let total = start.elapsed();
    let pass12 = identical && total <= TOTAL_BUDGET;
    all_ok &= pass12;
    line(format!(
        "criterion 12: {} - full gate in {:.1}s of {}s, reports byte-identical on rerun: {identical}",
        if pass12 { "PASS" } else { "FAIL" },
        total.as_secs_f64(),
        TOTAL_BUDGET.as_secs()
    ));
    assert!(all_ok, "acceptance gate failed");
}
