use std::time::Instant;

use rayon::prelude::*;

use crate::qcomplex::{check_d_squared, check_jackson_powers, check_ke_level, check_q_leibniz, QComplexError};
use crate::qdrwmodel::{run_suite, QdrwError, SuiteParams};
use crate::qwittring::{
    check_fv_relations, check_ghost_isomorphism, check_koszul_exact, check_lambda_iso, check_torsion_bound,
    check_verschiebung_injective, check_witt_injective, check_zp_decomposition, QWittError, MAX_PRESENTED_LEVEL,
};
use crate::report::{CheckRecord, Report, ReportRecord};
use crate::ringkit::{prime_power, CoeffRing, RingError};
use crate::wittcore::{check_ghost_homomorphism, WittError, DEFAULT_TABLE_CAP};

use super::config::SuiteConfig;
use super::CliError;

/// Every suite `verify` knows, in report order.
pub const ALL_SUITES: [&str; 16] = [
    "calculus",
    "fvrel",
    "ghost",
    "ghost-hom",
    "h0-image",
    "injectivity",
    "ke",
    "koszul",
    "lambda-iso",
    "localisation",
    "pcomplete",
    "qfv",
    "qv",
    "torsion",
    "vseq",
    "zp-decomp",
];

/// Parameters a suite uses when the configuration leaves them unset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defaults {
    pub ms: Vec<u64>,
    pub rings: Vec<&'static str>,
    pub vars: Vec<usize>,
    pub maxdeg: u32,
    pub prec_q: u32,
    pub prec_p: u32,
    pub trials: usize,
}

pub fn defaults(suite: &str) -> Defaults {
    let base = Defaults { ms: vec![], rings: vec![], vars: vec![1], maxdeg: 6, prec_q: 8, prec_p: 8, trials: 3 };
    let up_to = |n: u64| (1..=n).collect::<Vec<_>>();
    match suite {
        "ghost-hom" => {
            Defaults { ms: vec![2, 3, 4, 6, 8, 12], rings: vec!["z", "zmod:4", "f3", "poly:z:T"], trials: 200, ..base }
        }
        "fvrel" => Defaults { ms: up_to(12), rings: vec!["f2", "f3", "zmod:4"], ..base },
        "koszul" => Defaults { ms: vec![6, 12], rings: vec!["f2", "zmod:4", "poly:zmod:2:x/x^2"], ..base },
        "injectivity" => Defaults { ms: up_to(6), rings: vec!["f2", "f3", "zmod:4"], ..base },
        "lambda-iso" => Defaults { ms: up_to(12), trials: 50, ..base },
        "calculus" => Defaults { trials: 200, ..base },
        "ke" => Defaults { ms: vec![2, 4, 8, 3, 9, 27], ..base },
        "zp-decomp" => Defaults { ms: vec![6], rings: vec!["zmod:4", "f3"], ..base },
        "localisation" => Defaults { ms: vec![6], rings: vec!["zmod:5"], ..base },
        "torsion" => Defaults { ms: vec![2, 3, 4, 6], rings: vec!["f2", "zmod:4", "poly:zmod:2:x/x^2"], ..base },
        "qv" | "qfv" => Defaults { ms: vec![1, 2, 3, 4, 6], vars: vec![1, 2], ..base },
        "ghost" => Defaults { ms: vec![2, 3, 4, 6, 8, 9], vars: vec![1, 2], ..base },
        "h0-image" => Defaults { ms: vec![2, 3, 4, 6], maxdeg: 12, ..base },
        "vseq" => Defaults { ms: vec![2, 3, 4, 8, 9], vars: vec![1, 2], ..base },
        "pcomplete" => Defaults { ms: vec![2, 4, 3, 9], vars: vec![1, 2], maxdeg: 8, ..base },
        _ => base,
    }
}

/// Configuration fully resolved for one suite.
#[derive(Clone, Debug)]
struct Resolved {
    ms: Vec<u64>,
    rings: Vec<CoeffRing>,
    vars: Vec<usize>,
    maxdeg: u32,
    prec_q: u32,
    prec_p: u32,
    trials: usize,
}

fn resolve(suite: &str, cfg: &SuiteConfig) -> Result<Resolved, CliError> {
    let d = defaults(suite);
    let specs: Vec<String> = cfg.rings.clone().unwrap_or_else(|| d.rings.iter().map(|s| s.to_string()).collect());
    let rings = specs
        .iter()
        .map(|s| s.parse::<CoeffRing>().map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let r = Resolved {
        ms: cfg.ms.clone().unwrap_or(d.ms),
        rings,
        vars: cfg.vars.clone().unwrap_or(d.vars),
        maxdeg: cfg.maxdeg.unwrap_or(d.maxdeg),
        prec_q: cfg.prec_q.unwrap_or(d.prec_q),
        prec_p: cfg.prec_p.unwrap_or(d.prec_p),
        trials: cfg.trials.unwrap_or(d.trials),
    };
    if r.ms.contains(&0) {
        return Err(CliError::Usage("levels must be positive".into()));
    }
    let presented = ["fvrel", "koszul", "injectivity", "zp-decomp", "localisation", "torsion"];
    if presented.contains(&suite) {
        if let Some(bad) = r.rings.iter().find(|x| x.modulus_u64().is_none()) {
            return Err(CliError::Usage(format!("suite {suite} needs finite rings, got {bad}")));
        }
        if let Some(m) = r.ms.iter().find(|&&m| m > MAX_PRESENTED_LEVEL) {
            return Err(CliError::Usage(format!("suite {suite} supports m <= {MAX_PRESENTED_LEVEL}, got {m}")));
        }
    }
    if let Some(m) = r.ms.iter().find(|&&m| m > DEFAULT_TABLE_CAP) {
        return Err(CliError::Usage(format!("m = {m} exceeds the Witt table cap {DEFAULT_TABLE_CAP}")));
    }
    Ok(r)
}

#[derive(Debug, thiserror::Error)]
enum SuiteError {
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error(transparent)]
    QWitt(#[from] QWittError),
    #[error(transparent)]
    Complex(#[from] QComplexError),
    #[error(transparent)]
    Qdrw(#[from] QdrwError),
}

fn ring_inexact(e: &RingError) -> bool {
    matches!(e, RingError::InexactDivision(_))
}

fn witt_inexact(e: &WittError) -> bool {
    match e {
        WittError::InexactDivision(_) => true,
        WittError::Ring(r) => ring_inexact(r),
        _ => false,
    }
}

fn qwitt_inexact(e: &QWittError) -> bool {
    match e {
        QWittError::InexactDivision(_) => true,
        QWittError::Witt(w) => witt_inexact(w),
        QWittError::Ring(r) => ring_inexact(r),
        _ => false,
    }
}

fn complex_inexact(e: &QComplexError) -> bool {
    match e {
        QComplexError::InexactDivision(_) => true,
        QComplexError::Ring(r) => ring_inexact(r),
        _ => false,
    }
}

impl SuiteError {
    fn is_inexact(&self) -> bool {
        match self {
            SuiteError::Witt(e) => witt_inexact(e),
            SuiteError::QWitt(e) => qwitt_inexact(e),
            SuiteError::Complex(e) => complex_inexact(e),
            SuiteError::Qdrw(e) => match e {
                QdrwError::Complex(c) => complex_inexact(c),
                QdrwError::QWitt(q) => qwitt_inexact(q),
                QdrwError::Witt(w) => witt_inexact(w),
                QdrwError::Ring(r) => ring_inexact(r),
                _ => false,
            },
        }
    }
}

#[derive(Clone, Debug)]
enum Job {
    Ring(CoeffRing, u64),
    Level(u64),
    Model(u64, usize),
    Once,
}

struct Case {
    suite: &'static str,
    job: Job,
    params: Resolved,
    seed: u64,
}

fn cases_for(suite: &'static str, r: &Resolved) -> Vec<Job> {
    match suite {
        "calculus" => vec![Job::Once],
        "lambda-iso" => r.ms.iter().map(|&m| Job::Level(m)).collect(),
        "ke" => r.ms.iter().filter(|&&m| prime_power(m).is_some()).map(|&m| Job::Level(m)).collect(),
        "qv" | "qfv" | "ghost" | "h0-image" | "vseq" | "pcomplete" => {
            r.vars.iter().flat_map(|&n| r.ms.iter().map(move |&m| Job::Model(m, n))).collect()
        }
        _ => r.rings.iter().flat_map(|ring| r.ms.iter().map(move |&m| Job::Ring(ring.clone(), m))).collect(),
    }
}

fn run_case(c: &Case) -> Result<Vec<CheckRecord>, SuiteError> {
    let p = &c.params;
    Ok(match (&c.job, c.suite) {
        (Job::Once, _) => vec![
            check_jackson_powers(20)?,
            check_q_leibniz(p.trials, c.seed)?,
            check_d_squared(p.trials, c.seed.wrapping_add(1)),
        ],
        (Job::Level(m), "lambda-iso") => check_lambda_iso(*m, p.trials, c.seed)?,
        (Job::Level(m), _) => check_ke_level(*m, p.prec_p)?,
        (Job::Model(m, n), suite) => {
            let params = SuiteParams {
                ms: vec![*m],
                nvars: *n,
                maxdeg: p.maxdeg,
                prec_q: p.prec_q,
                prec_p: p.prec_p,
                seed: c.seed,
                trials: p.trials,
            };
            run_suite(suite, &params)?
        }
        (Job::Ring(ring, m), suite) => match suite {
            "ghost-hom" => vec![check_ghost_homomorphism(ring, *m, p.trials, c.seed)?],
            "fvrel" => check_fv_relations(ring, *m)?,
            "koszul" => vec![check_koszul_exact(ring, *m)?],
            "injectivity" => {
                let mut v = vec![check_witt_injective(ring, *m)?];
                v.extend(check_verschiebung_injective(ring, *m)?);
                v
            }
            "zp-decomp" => vec![check_zp_decomposition(ring, *m)?],
            "localisation" => vec![check_ghost_isomorphism(ring, *m)?],
            _ => vec![check_torsion_bound(ring, *m)?],
        },
    })
}

/// Options that do not change which checks run.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub timings: bool,
    pub progress: bool,
}

/// Expands `all`, checks names and returns suites in canonical order.
pub fn expand_suites(names: &[String]) -> Result<Vec<&'static str>, CliError> {
    let mut out = Vec::new();
    for n in names {
        if n == "all" {
            out.extend(ALL_SUITES);
        } else {
            let s =
                ALL_SUITES.iter().find(|s| **s == n).ok_or_else(|| CliError::Usage(format!("unknown suite {n:?}")))?;
            out.push(*s);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Runs every case of every configured suite in parallel and assembles the sorted report.
pub fn run_suites(cfg: &SuiteConfig, opts: RunOptions) -> Result<Report, CliError> {
    let mut cases = Vec::new();
    for suite in expand_suites(&cfg.suites)? {
        let r = resolve(suite, cfg)?;
        for (i, job) in cases_for(suite, &r).into_iter().enumerate() {
            let seed = cfg.seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            cases.push(Case { suite, job, params: r.clone(), seed });
        }
    }
    let results: Vec<Result<Vec<ReportRecord>, CliError>> = cases
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let out = run_case(c);
            let ms = start.elapsed().as_millis() as u64;
            let checks = match out {
                Ok(v) => v,
                Err(e) if e.is_inexact() => return Err(CliError::Inexact(format!("{}: {e}", c.suite))),
                Err(e) => {
                    vec![CheckRecord::new("suite-error").param("case", format!("{:?}", c.job)).fail(e.to_string())]
                }
            };
            if opts.progress {
                let fails = checks.iter().filter(|x| !x.passed()).count();
                eprintln!("[{}] {:?}: {} checks, {} not passed", c.suite, c.job, checks.len(), fails);
            }
            let t = opts.timings.then_some(ms);
            Ok(checks.into_iter().map(|x| ReportRecord::new(c.suite, x, t)).collect())
        })
        .collect();
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    let config = serde_json::to_value(cfg).expect("config serializes");
    Ok(Report::new(config, records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suites: &[&str]) -> SuiteConfig {
        SuiteConfig { suites: suites.iter().map(|s| s.to_string()).collect(), ..SuiteConfig::default() }
    }

    #[test]
    fn suite_names() {
        assert_eq!(expand_suites(&["ke".into(), "calculus".into(), "ke".into()]).unwrap(), ["calculus", "ke"]);
        assert_eq!(expand_suites(&["all".into()]).unwrap().len(), ALL_SUITES.len());
        assert!(expand_suites(&["nope".into()]).is_err());
    }

    #[test]
    fn empty_and_small_runs() {
        let r = run_suites(&cfg(&[]), RunOptions::default()).unwrap();
        assert!(r.records.is_empty() && !r.has_failures());
        let mut c = cfg(&["fvrel", "koszul"]);
        c.ms = Some(vec![2, 3]);
        c.rings = Some(vec!["f3".into()]);
        let r = run_suites(&c, RunOptions::default()).unwrap();
        assert!(r.summary.pass > 0 && !r.has_failures(), "{}", r.to_text());
    }

    #[test]
    fn usage_errors() {
        let mut c = cfg(&["fvrel"]);
        c.rings = Some(vec!["z".into()]);
        assert!(matches!(run_suites(&c, RunOptions::default()), Err(CliError::Usage(_))));
        c.rings = Some(vec!["bogus".into()]);
        assert!(matches!(run_suites(&c, RunOptions::default()), Err(CliError::Usage(_))));
    }
}
