use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::ringkit::{divisors, CoeffRing, Mono, QPoly};

use super::WittError;

/// Default upper bound on the truncation level for which tables are built.
pub const DEFAULT_TABLE_CAP: u64 = 60;

/// Environment variable naming the directory of the on-disk table cache.
pub const CACHE_ENV: &str = "QWITT_CACHE_DIR";

/// Universal addition, multiplication and negation polynomials for `W_m`.
///
/// Variables are `X_d` (index `k`) and `Y_d` (index `k + r`) where `d` is the
/// `k`-th divisor of `m` and `r` the number of divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittTable {
    m: u64,
    divisors: Vec<u64>,
    add: Vec<QPoly>,
    mul: Vec<QPoly>,
    neg: Vec<QPoly>,
}

impl WittTable {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Addition polynomial `S_d` for the `k`-th divisor.
    pub fn add_poly(&self, k: usize) -> &QPoly {
        &self.add[k]
    }

    pub fn mul_poly(&self, k: usize) -> &QPoly {
        &self.mul[k]
    }

    pub fn neg_poly(&self, k: usize) -> &QPoly {
        &self.neg[k]
    }

    /// Variable names `X1, X2, .., Y1, ..` used in the text format.
    pub fn var_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.divisors.iter().map(|d| format!("X{d}")).collect();
        names.extend(self.divisors.iter().map(|d| format!("Y{d}")));
        names
    }

    /// Builds the table by inverting the ghost map over the integers.
    pub fn build(m: u64) -> Result<Self, WittError> {
        let divs = divisors(m);
        let r = divs.len();
        let nv = 2 * r;
        let gx = |n: u64| ghost_poly(&divs, n, 0, nv);
        let gy = |n: u64| ghost_poly(&divs, n, r, nv);
        let add = solve_ghost_inverse(&divs, nv, |n| &gx(n) + &gy(n))?;
        let mul = solve_ghost_inverse(&divs, nv, |n| &gx(n) * &gy(n))?;
        let neg = solve_ghost_inverse(&divs, nv, |n| -&gx(n))?;
        Ok(WittTable { m, divisors: divs, add, mul, neg })
    }

    /// Serialises in the polynomial text format, one `S<d> = ...` line per polynomial.
    pub fn to_text(&self) -> String {
        let names = self.var_names();
        let mut out = format!("# universal Witt polynomials, m = {}\n", self.m);
        for (tag, polys) in [("S", &self.add), ("P", &self.mul), ("N", &self.neg)] {
            for (d, p) in self.divisors.iter().zip(polys.iter()) {
                out.push_str(&format!("{tag}{d} = {}\n", p.to_text(&names)));
            }
        }
        out
    }

    pub fn from_text(m: u64, text: &str) -> Result<Self, WittError> {
        let divs = divisors(m);
        let r = divs.len();
        let mut names: Vec<String> = divs.iter().map(|d| format!("X{d}")).collect();
        names.extend(divs.iter().map(|d| format!("Y{d}")));
        let mut slots: HashMap<String, QPoly> = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, body) =
                line.split_once(" = ").ok_or_else(|| WittError::Cache(format!("malformed line {line:?}")))?;
            let p = QPoly::parse(body, &names).map_err(|e| WittError::Cache(e.to_string()))?;
            slots.insert(key.to_string(), p);
        }
        let take = |tag: &str, slots: &mut HashMap<String, QPoly>| -> Result<Vec<QPoly>, WittError> {
            divs.iter()
                .map(|d| {
                    slots.remove(&format!("{tag}{d}")).ok_or_else(|| WittError::Cache(format!("missing {tag}{d}")))
                })
                .collect()
        };
        let add = take("S", &mut slots)?;
        let mul = take("P", &mut slots)?;
        let neg = take("N", &mut slots)?;
        if !slots.is_empty() || add.iter().chain(&mul).chain(&neg).any(|p| p.nvars() != 2 * r) {
            return Err(WittError::Cache("unexpected entries in table file".into()));
        }
        Ok(WittTable { m, divisors: divs, add, mul, neg })
    }
}

/// `gh_n = Σ_{d|n} d X_d^{n/d}` over the variables starting at `offset`.
pub(crate) fn ghost_poly(divs: &[u64], n: u64, offset: usize, nvars: usize) -> QPoly {
    let mut p = QPoly::zero(nvars);
    for (k, &d) in divs.iter().enumerate() {
        if n.is_multiple_of(d) {
            let mut t = vec![0; nvars];
            t[offset + k] = (n / d) as u32;
            p.add_term(Mono { q: 0, t }, BigInt::from(d));
        }
    }
    p
}

/// Solves `gh_n(Z) = target(n)` for `Z_n`, `n` running over `divs` ascending, by exact
/// division by `n`.
pub(crate) fn solve_ghost_inverse(
    divs: &[u64],
    nvars: usize,
    target: impl Fn(u64) -> QPoly,
) -> Result<Vec<QPoly>, WittError> {
    let mut out: Vec<QPoly> = Vec::with_capacity(divs.len());
    for &n in divs {
        let mut acc = target(n);
        for (k, &d) in divs.iter().enumerate() {
            if d < n && n % d == 0 {
                acc = &acc - &out[k].pow((n / d) as u32).scale(&BigInt::from(d));
            }
        }
        let z = acc
            .div_exact_int(&BigInt::from(n))
            .map_err(|e| WittError::InexactDivision(format!("solving coordinate {n}: {e}")))?;
        debug_assert_eq!(z.nvars(), nvars);
        out.push(z);
    }
    Ok(out)
}

/// Universal Frobenius polynomials `F_k : W_m -> W_{m/k}` in the variables `X_d`, `d | m`.
#[derive(Clone, Debug)]
pub struct FrobeniusTable {
    m: u64,
    k: u64,
    polys: Vec<QPoly>,
}

impl FrobeniusTable {
    pub fn build(m: u64, k: u64) -> Result<Self, WittError> {
        if k == 0 || !m.is_multiple_of(k) {
            return Err(WittError::NotDivisor { d: k, m });
        }
        let divs = divisors(m);
        let target_divs = divisors(m / k);
        let nv = divs.len();
        let polys = solve_ghost_inverse(&target_divs, nv, |n| ghost_poly(&divs, n * k, 0, nv))?;
        Ok(FrobeniusTable { m, k, polys })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn polys(&self) -> &[QPoly] {
        &self.polys
    }
}

/// Memoised monomial values for evaluating many universal polynomials at one point.
pub(crate) struct MonomialCache<'a> {
    ring: &'a CoeffRing,
    powers: Vec<Vec<QPoly>>,
    memo: HashMap<Vec<u32>, QPoly>,
}

impl<'a> MonomialCache<'a> {
    pub(crate) fn new(ring: &'a CoeffRing, values: &[QPoly]) -> Self {
        let powers = values.iter().map(|v| vec![ring.one(), v.clone()]).collect();
        MonomialCache { ring, powers, memo: HashMap::new() }
    }

    fn power(&mut self, i: usize, e: u32) -> QPoly {
        let e = e as usize;
        while self.powers[i].len() <= e {
            let next = self.ring.mul(self.powers[i].last().unwrap(), &self.powers[i][1]);
            self.powers[i].push(next);
        }
        self.powers[i][e].clone()
    }

    pub(crate) fn monomial(&mut self, exps: &[u32]) -> QPoly {
        if let Some(v) = self.memo.get(exps) {
            return v.clone();
        }
        let mut acc: Option<QPoly> = None;
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                let p = self.power(i, e);
                acc = Some(match acc {
                    None => p,
                    Some(a) => self.ring.mul(&a, &p),
                });
            }
        }
        let v = acc.unwrap_or_else(|| self.ring.one());
        self.memo.insert(exps.to_vec(), v.clone());
        v
    }
}

/// Evaluates a polynomial in `X`-variables `[0, split)` and `Y`-variables `[split, n)`,
/// grouping terms by their `X`-part so each `X`-monomial is multiplied once.
pub(crate) fn eval_split(
    ring: &CoeffRing,
    p: &QPoly,
    split: usize,
    xs: &mut MonomialCache<'_>,
    ys: &mut MonomialCache<'_>,
) -> QPoly {
    let mut groups: std::collections::BTreeMap<Vec<u32>, QPoly> = std::collections::BTreeMap::new();
    for (mono, c) in p.terms() {
        let (xa, ya) = mono.t.split_at(split);
        let ymon = ys.monomial(ya);
        let term = ring.scale(&ymon, c);
        let slot = groups.entry(xa.to_vec()).or_insert_with(|| ring.zero());
        *slot = ring.add(slot, &term);
    }
    let mut acc = ring.zero();
    for (xa, inner) in groups {
        if inner.is_zero() {
            continue;
        }
        let xmon = xs.monomial(&xa);
        acc = ring.add(&acc, &ring.mul(&xmon, &inner));
    }
    acc
}

/// Evaluates a polynomial at one point.
pub(crate) fn eval_at(ring: &CoeffRing, p: &QPoly, cache: &mut MonomialCache<'_>) -> QPoly {
    let mut acc = ring.zero();
    for (mono, c) in p.terms() {
        let v = cache.monomial(&mono.t);
        acc = ring.add(&acc, &ring.scale(&v, c));
    }
    acc
}

fn memo() -> &'static Mutex<HashMap<u64, Arc<WittTable>>> {
    static M: OnceLock<Mutex<HashMap<u64, Arc<WittTable>>>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

fn frob_memo() -> &'static Mutex<HashMap<(u64, u64), Arc<FrobeniusTable>>> {
    type Memo = Mutex<HashMap<(u64, u64), Arc<FrobeniusTable>>>;
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_file(m: u64) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|d| PathBuf::from(d).join(format!("witt_table_m{m}.txt")))
}

/// Table for `W_m` with the default cap, memoised in memory and (if `QWITT_CACHE_DIR`
/// is set) on disk.
pub fn witt_table(m: u64) -> Result<Arc<WittTable>, WittError> {
    witt_table_with_cap(m, DEFAULT_TABLE_CAP)
}

pub fn witt_table_with_cap(m: u64, cap: u64) -> Result<Arc<WittTable>, WittError> {
    if m == 0 || m > cap {
        return Err(WittError::CapExceeded { m, cap });
    }
    let mut guard = memo().lock().expect("table memo poisoned");
    if let Some(t) = guard.get(&m) {
        return Ok(t.clone());
    }
    let table = match cache_file(m) {
        Some(path) if path.exists() => {
            let text =
                std::fs::read_to_string(&path).map_err(|e| WittError::Cache(format!("{}: {e}", path.display())))?;
            WittTable::from_text(m, &text)?
        }
        Some(path) => {
            let t = WittTable::build(m)?;
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(|e| WittError::Cache(e.to_string()))?;
            }
            std::fs::write(&path, t.to_text()).map_err(|e| WittError::Cache(format!("{}: {e}", path.display())))?;
            t
        }
        None => WittTable::build(m)?,
    };
    let table = Arc::new(table);
    guard.insert(m, table.clone());
    Ok(table)
}

/// Drops the in-memory tables so the next lookup consults the disk cache again.
pub fn clear_table_memo() {
    memo().lock().expect("table memo poisoned").clear();
}

pub fn frobenius_table(m: u64, k: u64) -> Result<Arc<FrobeniusTable>, WittError> {
    if m > DEFAULT_TABLE_CAP {
        return Err(WittError::CapExceeded { m, cap: DEFAULT_TABLE_CAP });
    }
    let mut guard = frob_memo().lock().expect("frobenius memo poisoned");
    if let Some(t) = guard.get(&(m, k)) {
        return Ok(t.clone());
    }
    let t = Arc::new(FrobeniusTable::build(m, k)?);
    guard.insert((m, k), t.clone());
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables_match_hand_values() {
        let t1 = WittTable::build(1).unwrap();
        let n1 = t1.var_names();
        assert_eq!(t1.add_poly(0).to_text(&n1), "1*Y1 + 1*X1");
        assert_eq!(t1.mul_poly(0).to_text(&n1), "1*X1*Y1");
        let t2 = WittTable::build(2).unwrap();
        let n2 = t2.var_names();
        let s2 = QPoly::parse("X2 + Y2 - X1*Y1", &n2).unwrap();
        assert_eq!(t2.add_poly(1), &s2);
        let p2 = QPoly::parse("X1^2*Y2 + X2*Y1^2 + 2*X2*Y2", &n2).unwrap();
        assert_eq!(t2.mul_poly(1), &p2);
    }

    #[test]
    fn text_round_trip() {
        let t = WittTable::build(6).unwrap();
        let back = WittTable::from_text(6, &t.to_text()).unwrap();
        assert_eq!(back, t);
        assert!(WittTable::from_text(6, "S1 = X1 +").is_err());
        assert!(WittTable::from_text(6, "S1 = X1").is_err());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(witt_table_with_cap(13, 12), Err(WittError::CapExceeded { .. })));
    }

    #[test]
    fn frobenius_two_on_w2() {
        // F_2(x_1, x_2) = x_1^2 + 2 x_2
        let f = FrobeniusTable::build(2, 2).unwrap();
        let names = vec!["X1".to_string(), "X2".to_string()];
        assert_eq!(f.polys()[0], QPoly::parse("X1^2 + 2*X2", &names).unwrap());
        assert!(FrobeniusTable::build(6, 4).is_err());
    }
}
