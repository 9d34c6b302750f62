use std::collections::BTreeMap;

use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::qcomplex::hodge_cohomology;
use crate::qwittring::{check_fv_relations, check_lambda_iso, check_witt_injective, presented_ring, LambdaStructure};
use crate::ringkit::{divisors, prime_power, CoeffRing};
use crate::wittcore::{
    frobenius, ghost, ghost_vector, teichmuller, verschiebung, witt_add, witt_decompose, witt_mul, WittVector,
};

use super::{CliError, Emit, Sink};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WittOp {
    Add,
    Mul,
    Ghost,
    Frob,
    Versch,
    Teich,
    Decompose,
}

#[derive(Args, Debug)]
pub struct WittcalcArgs {
    #[arg(value_enum)]
    op: WittOp,
    #[arg(long)]
    ring: String,
    #[arg(long)]
    m: u64,
    /// A Witt vector `(c_1, .., c_m)`, or a ring element for `teich`.
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: Option<String>,
    /// Index of F or V.
    #[arg(long)]
    k: Option<u64>,
    /// Ghost component (all when omitted).
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum QwittCommand {
    /// Invariant factors, order and F/V tables of qW_m(R) for a finite ring.
    Present {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        m: u64,
    },
    /// The comparison map c_m of a Witt vector over Z or Z[T].
    Cmap {
        #[arg(long)]
        m: u64,
        #[arg(long, value_parser = ["z", "polyT"])]
        lambda: String,
        #[arg(long)]
        element: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum QhodgeCommand {
    /// H^* of qHodge/(q^m - 1), one row per multidegree and degree.
    Cohomology {
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        #[arg(long, default_value_t = crate::qcomplex::DEFAULT_MAXDEG)]
        maxdeg: u32,
        /// Report H^* ⊗ Z/p^prec instead of integral groups.
        #[arg(long)]
        p: Option<u64>,
        /// Sets m = p^alpha.
        #[arg(long)]
        alpha: Option<u32>,
        #[arg(long, default_value_t = 8)]
        prec: u32,
    },
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn emit_value(v: &Value, text: String, emit: Emit, sink: &Sink) -> Result<i32, CliError> {
    let out = match emit {
        Emit::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        Emit::Csv | Emit::Text => text,
    };
    sink.write(&out)?;
    Ok(0)
}

pub fn wittcalc(a: &WittcalcArgs, emit: Emit, sink: &Sink) -> Result<i32, CliError> {
    let ring: CoeffRing = a.ring.parse().map_err(usage)?;
    let m = a.m;
    if m == 0 {
        return Err(usage("--m must be positive"));
    }
    let vec = |s: &str| WittVector::parse(s, &ring, m).map_err(usage);
    let need_k = || a.k.ok_or_else(|| usage("--k is required"));
    let result: Value = match a.op {
        WittOp::Add | WittOp::Mul => {
            let y = a.y.as_deref().ok_or_else(|| usage("--y is required"))?;
            let (x, y) = (vec(&a.x)?, vec(y)?);
            let r = if a.op == WittOp::Add { witt_add(&ring, &x, &y) } else { witt_mul(&ring, &x, &y) };
            Value::String(r.map_err(usage)?.to_text(&ring))
        }
        WittOp::Ghost => {
            let x = vec(&a.x)?;
            match a.n {
                Some(n) => Value::String(ring.format_elem(&ghost(&ring, &x, n).map_err(usage)?)),
                None => {
                    let g = ghost_vector(&ring, &x);
                    let map: BTreeMap<String, String> =
                        divisors(m).iter().zip(&g).map(|(d, p)| (d.to_string(), ring.format_elem(p))).collect();
                    json!(map)
                }
            }
        }
        WittOp::Frob => Value::String(frobenius(&ring, &vec(&a.x)?, need_k()?).map_err(usage)?.to_text(&ring)),
        WittOp::Versch => Value::String(verschiebung(&ring, &vec(&a.x)?, need_k()?).map_err(usage)?.to_text(&ring)),
        WittOp::Teich => {
            let r = ring.parse_elem(&a.x).map_err(usage)?;
            Value::String(teichmuller(&ring, &r, m).to_text(&ring))
        }
        WittOp::Decompose => {
            let parts = witt_decompose(&vec(&a.x)?);
            let map: BTreeMap<String, String> =
                parts.iter().map(|(d, c)| (d.to_string(), ring.format_elem(c))).collect();
            json!(map)
        }
    };
    let text = match &result {
        Value::String(s) => format!("{s}\n"),
        Value::Object(o) => o.iter().map(|(k, v)| format!("{k}: {}\n", v.as_str().unwrap_or_default())).collect(),
        other => format!("{other}\n"),
    };
    let op = format!("{:?}", a.op).to_lowercase();
    emit_value(&json!({"op": op, "ring": ring.to_string(), "m": m, "result": result}), text, emit, sink)
}

pub fn qwitt(c: &QwittCommand, emit: Emit, sink: &Sink) -> Result<i32, CliError> {
    match c {
        QwittCommand::Present { ring, m } => present(ring, *m, emit, sink),
        QwittCommand::Cmap { m, lambda, element } => {
            let lam = if lambda == "z" { LambdaStructure::integers() } else { LambdaStructure::polynomial(1) };
            let ring = if lambda == "z" { CoeffRing::integers() } else { "poly:z:T".parse().map_err(usage)? };
            let w = WittVector::parse(element, &ring, *m).map_err(usage)?;
            let c = lam.c_map(&w).map_err(|e| CliError::Failed(e.to_string()))?;
            let s = ring.format_elem(&c);
            emit_value(&json!({"m": m, "lambda": lambda, "element": element, "c_map": s}), format!("{s}\n"), emit, sink)
        }
    }
}

fn present(spec: &str, m: u64, emit: Emit, sink: &Sink) -> Result<i32, CliError> {
    let ring: CoeffRing = spec.parse().map_err(usage)?;
    if m == 0 {
        return Err(usage("--m must be positive"));
    }
    let fail = |e: crate::qwittring::QWittError| CliError::Failed(e.to_string());
    let status = |r: &crate::report::CheckRecord| json!({"name": r.key(), "status": r.status.to_string()});
    let v = if ring.modulus_u64().is_some() {
        let p = presented_ring(&ring, m).map_err(usage)?;
        let mut fr = BTreeMap::new();
        let mut vr = BTreeMap::new();
        for d in divisors(m) {
            let pd = presented_ring(&ring, d).map_err(fail)?;
            fr.insert((m / d).to_string(), p.frobenius_map(&pd).map_err(fail)?.images().to_vec());
            vr.insert((m / d).to_string(), pd.verschiebung_map(&p).map_err(fail)?.images().to_vec());
        }
        let mut checks: Vec<Value> = check_fv_relations(&ring, m).map_err(fail)?.iter().map(status).collect();
        checks.push(status(&check_witt_injective(&ring, m).map_err(fail)?));
        json!({
            "backend": "presented",
            "m": m,
            "ring": ring.to_string(),
            "order": p.order().to_string(),
            "invariant_factors": p.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "frobenius": fr,
            "verschiebung": vr,
            "checks": checks,
        })
    } else if ring == CoeffRing::integers() {
        let checks: Vec<Value> = check_lambda_iso(m, 10, 1).map_err(fail)?.iter().map(status).collect();
        json!({
            "backend": "lambda",
            "m": m,
            "ring": "z",
            "order": "infinite",
            "invariant_factors": vec!["0"; m as usize],
            "checks": checks,
        })
    } else {
        return Err(usage(format!("{ring} has no finite presentation; use `qwitt cmap`")));
    };
    let text = format!(
        "qW_{m}({}): order {}, invariant factors {}\n",
        v["ring"].as_str().unwrap_or_default(),
        v["order"].as_str().unwrap_or_default(),
        v["invariant_factors"]
    );
    emit_value(&v, text, emit, sink)
}

pub fn qhodge(c: &QhodgeCommand, emit: Emit, sink: &Sink) -> Result<i32, CliError> {
    let QhodgeCommand::Cohomology { m, vars, maxdeg, p, alpha, prec } = c;
    let m = match (m, p, alpha) {
        (Some(m), Some(p), Some(a)) if p.pow(*a) != *m => return Err(usage(format!("m = {m} is not {p}^{a}"))),
        (Some(m), _, _) => *m,
        (None, Some(p), Some(a)) => p.pow(*a),
        _ => return Err(usage("give --m, or --p with --alpha")),
    };
    if m == 0 {
        return Err(usage("--m must be positive"));
    }
    if let Some(p) = p {
        if prime_power(*p) != Some((*p, 1)) {
            return Err(usage(format!("{p} is not prime")));
        }
    }
    let rows = hodge_cohomology(*vars, m, *maxdeg, p.map(|p| (p, *prec))).map_err(usage)?;
    let join = |xs: &[String]| xs.join(" ");
    let text = match emit {
        Emit::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["multidegree", "degree", "invariant_factors", "q_action_charpoly"]).map_err(usage)?;
            for r in &rows {
                let md: Vec<String> = r.multidegree.iter().map(ToString::to_string).collect();
                w.write_record([
                    join(&md),
                    r.degree.to_string(),
                    join(&r.invariant_factors),
                    join(&r.q_action_charpoly),
                ])
                .map_err(usage)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| usage(e.error()))?).expect("utf-8")
        }
        _ => rows
            .iter()
            .map(|r| {
                format!(
                    "{:?} H^{}: [{}] charpoly [{}]\n",
                    r.multidegree,
                    r.degree,
                    r.invariant_factors.join(", "),
                    r.q_action_charpoly.join(", ")
                )
            })
            .collect(),
    };
    emit_value(&json!(rows), text, emit, sink)
}
