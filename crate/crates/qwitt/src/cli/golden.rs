//! Frozen values computed by the engine, each cross-checked by a second computation.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::qcomplex::{local_factors, multidegree_complex, order_mod};
use crate::qwittring::{image_order, presented_ring, LambdaModel, LambdaStructure, LinearMap};
use crate::ringkit::{
    cyclotomic, cyclotomic_coeffs, divisors, prime_factors, q_pow_minus_one, upoly_mul, CoeffRing, QPoly,
};
use crate::wittcore::{ghost, teichmuller, witt_mul, WittVector};

use super::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub name: String,
    pub value: String,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub entries: Vec<GoldenEntry>,
}

/// A freshly computed value and whether its oracle agreed.
#[derive(Clone, Debug)]
pub struct Computed {
    pub entry: GoldenEntry,
    pub oracle_ok: bool,
}

#[derive(Clone, Debug, Default)]
pub struct GoldenOutcome {
    pub created: bool,
    pub written: bool,
    pub diffs: Vec<String>,
    pub oracle_failures: Vec<String>,
}

impl GoldenOutcome {
    /// Oracle disagreement, or a diff that was not written.
    pub fn rejected(&self) -> bool {
        !self.oracle_failures.is_empty() || (!self.diffs.is_empty() && !self.written)
    }
}

enum Spec {
    Cyclotomic(u64),
    QwOrder(&'static str, u64),
    Teichmuller(u64),
    Hodge(u64, Vec<u32>),
    WittProduct(u64),
}

fn specs() -> Vec<Spec> {
    let mut out: Vec<Spec> = (1..=12).map(Spec::Cyclotomic).collect();
    for ring in ["f2", "f3", "zmod:4"] {
        for m in [1, 2, 3, 4, 6] {
            out.push(Spec::QwOrder(ring, m));
        }
    }
    out.extend([2, 3, 4, 6].map(Spec::Teichmuller));
    out.extend([2, 3, 4, 6, 12].map(Spec::WittProduct));
    for v in 0..=4 {
        out.push(Spec::Hodge(4, vec![v]));
    }
    for v in [[1, 2], [2, 2], [3, 6], [6, 6]] {
        out.push(Spec::Hodge(6, v.to_vec()));
    }
    out
}

fn entry(name: String, value: String, provenance: &str, oracle_ok: bool) -> Computed {
    Computed { entry: GoldenEntry { name, value, provenance: provenance.to_string() }, oracle_ok }
}

fn compute(spec: &Spec) -> Result<Computed, CliError> {
    let err = |e: &dyn std::fmt::Display| CliError::Failed(e.to_string());
    Ok(match spec {
        Spec::Cyclotomic(m) => {
            let prod =
                divisors(*m).iter().fold(vec![BigInt::from(1)], |acc, &d| upoly_mul(&acc, &cyclotomic_coeffs(d)));
            entry(
                format!("cyclotomic/{m}"),
                cyclotomic(*m).to_string(),
                "cyclotomic(m); oracle: product over d | m equals q^m - 1",
                prod == q_pow_minus_one(*m as usize),
            )
        }
        Spec::QwOrder(spec, m) => {
            let ring: CoeffRing = spec.parse().map_err(|e| err(&e))?;
            let p = presented_ring(&ring, *m).map_err(|e| err(&e))?;
            let factors: Vec<String> = p.invariant_factors().iter().map(ToString::to_string).collect();
            let value = format!("order {} factors [{}]", p.order(), factors.join(", "));
            // |qW_m| = |R[q]/Φ_m| * |ker gh_1| with the kernel spanned by the images of V_p.
            let mut dims = Vec::new();
            let mut maps = Vec::new();
            for l in prime_factors(*m) {
                let low = presented_ring(&ring, m / l).map_err(|e| err(&e))?;
                dims.push(low.dim());
                maps.push(low.verschiebung_map(&p).map_err(|e| err(&e))?);
            }
            let blocks: Vec<(usize, usize, &LinearMap)> = maps.iter().enumerate().map(|(i, mp)| (i, 0, mp)).collect();
            let joint = LinearMap::block(&dims, &[p.dim()], &blocks);
            let kernel = if maps.is_empty() { BigInt::from(1) } else { image_order(&joint, p.group()) };
            let cyc = p.cyclotomic_group().map_err(|e| err(&e))?.order();
            entry(
                format!("qw-order/{spec}/{m}"),
                value,
                "presented ring; oracle: |R[q]/Phi_m| times the order of the span of the Verschiebung images",
                kernel * cyc == p.order(),
            )
        }
        Spec::Teichmuller(m) => {
            let lam = LambdaStructure::polynomial(1);
            let t = QPoly::var(0, 1);
            let c = lam.teichmuller(&t, *m).map_err(|e| err(&e))?;
            let model = LambdaModel::new(lam.clone(), *m).map_err(|e| err(&e))?;
            let tau = teichmuller(lam.ring(), &t, *m);
            let mut ok = true;
            for d in divisors(*m) {
                ok &=
                    model.ghost(&c, d).map_err(|e| err(&e))? == ghost(lam.ring(), &tau, m / d).map_err(|e| err(&e))?;
            }
            entry(
                format!("c-teichmuller/{m}"),
                c.to_string(),
                "c_m of the Teichmuller vector of T via the epsilon coordinates; oracle: congruence with every ghost component",
                ok,
            )
        }
        Spec::WittProduct(m) => {
            // Fixed factors x = (1, 2, 3, ..) and y = (3, -1, 3, -1, ..) over Z.
            let z = CoeffRing::integers();
            let n = divisors(*m).len() as i64;
            let x = WittVector::new(*m, (1..=n).map(|i| z.from_int(i)).collect()).map_err(|e| err(&e))?;
            let y = WittVector::new(*m, (0..n).map(|i| z.from_int(if i % 2 == 0 { 3 } else { -1 })).collect())
                .map_err(|e| err(&e))?;
            let xy = witt_mul(&z, &x, &y).map_err(|e| err(&e))?;
            let mut ok = true;
            for d in divisors(*m) {
                let g = |w: &WittVector| ghost(&z, w, d).map_err(|e| err(&e));
                ok &= g(&xy)? == z.mul(&g(&x)?, &g(&y)?);
            }
            entry(
                format!("witt-product/z/{m}"),
                xy.to_text(&z),
                "universal product polynomials; oracle: ghost components multiply",
                ok,
            )
        }
        Spec::Hodge(m, v) => {
            let c = multidegree_complex(*m, v).map_err(|e| err(&e))?;
            let mut parts = Vec::new();
            let mut ok = true;
            for deg in 0..=c.length() {
                let h = crate::qcomplex::cohomology(&c, deg);
                let f: Vec<String> = h.invariant_factors().iter().map(ToString::to_string).collect();
                parts.push(format!("H{deg} [{}]", f.join(", ")));
                for p in prime_factors(*m) {
                    let counted = order_mod(&c, deg, p.pow(3)).map_err(|e| err(&e))?;
                    ok &= counted == local_factors(&c, deg, p, 3).iter().product::<BigInt>();
                }
            }
            let vs: Vec<String> = v.iter().map(ToString::to_string).collect();
            entry(
                format!("qhodge/{m}/{}", vs.join(",")),
                parts.join("; "),
                "integral invariant factors; oracle: direct count of H^i mod p^3 against universal coefficients",
                ok,
            )
        }
    })
}

/// Computes every golden value with its oracle, in name order.
pub fn compute_all() -> Result<Vec<Computed>, CliError> {
    let mut out = specs().par_iter().map(compute).collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.entry.name.cmp(&b.entry.name));
    Ok(out)
}

fn diff(old: &GoldenFile, new: &GoldenFile) -> Vec<String> {
    let a: BTreeMap<&str, &str> = old.entries.iter().map(|e| (e.name.as_str(), e.value.as_str())).collect();
    let b: BTreeMap<&str, &str> = new.entries.iter().map(|e| (e.name.as_str(), e.value.as_str())).collect();
    let mut out = Vec::new();
    for (k, v) in &a {
        match b.get(k) {
            None => out.push(format!("- {k}: {v}")),
            Some(w) if w != v => {
                out.push(format!("- {k}: {v}"));
                out.push(format!("+ {k}: {w}"));
            }
            _ => {}
        }
    }
    for (k, w) in &b {
        if !a.contains_key(k) {
            out.push(format!("+ {k}: {w}"));
        }
    }
    out
}

fn render(file: &GoldenFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("golden file serializes");
    s.push('\n');
    s
}

/// Recomputes the golden file at `path`. Writes it when absent, or when it changed and
/// `force` is set; `check_only` never writes.
pub fn update(path: &Path, force: bool, check_only: bool) -> Result<GoldenOutcome, CliError> {
    let computed = compute_all()?;
    let mut outcome = GoldenOutcome {
        oracle_failures: computed.iter().filter(|c| !c.oracle_ok).map(|c| c.entry.name.clone()).collect(),
        ..GoldenOutcome::default()
    };
    let fresh = GoldenFile { entries: computed.into_iter().map(|c| c.entry).collect() };
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let old: GoldenFile =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        outcome.diffs = diff(&old, &fresh);
    } else {
        outcome.created = !check_only;
        outcome.diffs = fresh.entries.iter().map(|e| format!("+ {}: {}", e.name, e.value)).collect();
    }
    let may_write = outcome.oracle_failures.is_empty() && !check_only && (outcome.created || force);
    if may_write && !outcome.diffs.is_empty() {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(e.to_string()))?;
        }
        std::fs::write(path, render(&fresh)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        outcome.written = true;
    }
    Ok(outcome)
}
