use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::RingError;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            m.data[i * cols..(i + 1) * cols].clone_from_slice(r);
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(&big, cols)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix");
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free Bareiss elimination (square matrices only).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * c;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * c;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `D`, length `min(rows, cols)`, with `d_i | d_{i+1}`.
    pub diag: Vec<BigInt>,
    pub rank: usize,
}

impl Snf {
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diag
    }

    /// The diagonal matrix `D`.
    pub fn d_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

/// Smith normal form with tracked transforms. Pivoting picks the nonzero entry of
/// smallest absolute value, ties broken by lowest (row, col).
pub fn snf(a: &IntMatrix) -> Snf {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                let (qt, rem) = d.get(i, t).div_mod_floor(d.get(t, t));
                let qn = -qt;
                d.add_row(i, t, &qn);
                u.add_row(i, t, &qn);
                if !rem.is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..c {
                let (qt, rem) = d.get(t, j).div_mod_floor(d.get(t, t));
                let qn = -qt;
                d.add_col(j, t, &qn);
                v.add_col(j, t, &qn);
                if !rem.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A smaller remainder appeared in the pivot row or column: re-pivot there.
                let (pi, pj) = min_pivot_cross(&d, t).expect("pivot cross cannot vanish");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column cleared; enforce divisibility of the remaining block.
            let piv = d.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(d.get(i, j) % &piv).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let diag: Vec<BigInt> = (0..r.min(c)).map(|i| d.get(i, i).clone()).collect();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    Snf { u, v, diag, rank }
}

fn min_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                best = Some((a, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn min_pivot_cross(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut cands: Vec<(usize, usize)> = (t..d.rows()).map(|i| (i, t)).collect();
    cands.extend((t + 1..d.cols()).map(|j| (t, j)));
    cands.sort();
    let mut best: Option<(BigInt, usize, usize)> = None;
    for (i, j) in cands {
        let x = d.get(i, j);
        if x.is_zero() {
            continue;
        }
        let a = x.abs();
        if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
            best = Some((a, i, j));
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Row Hermite normal form basis of the lattice spanned by `gens` (each of length `dim`).
/// Rows are returned with strictly increasing pivot columns and positive pivots;
/// entries above each pivot are reduced into `[0, pivot)`.
pub fn hnf_basis(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while col < dim && !rows.is_empty() {
        // Euclid on column `col` among the remaining rows.
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv =
                *nz.iter().min_by(|&&a, &&b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b))).unwrap();
            let pv = rows[piv][col].clone();
            let prow = rows[piv].clone();
            for &i in &nz {
                if i == piv {
                    continue;
                }
                let qt = rows[i][col].div_floor(&pv);
                for (x, y) in rows[i].iter_mut().zip(&prow) {
                    *x -= &qt * y;
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut r = rows.swap_remove(i);
            if r[col].is_negative() {
                for x in r.iter_mut() {
                    *x = -&*x;
                }
            }
            basis.push(r);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        col += 1;
    }
    // Reduce above pivots.
    let pivots: Vec<usize> = basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
    for k in 0..basis.len() {
        let pc = pivots[k];
        for i in 0..k {
            let qt = basis[i][pc].div_floor(&basis[k][pc]);
            if !qt.is_zero() {
                let rk = basis[k].clone();
                for (x, y) in basis[i].iter_mut().zip(&rk) {
                    *x -= &qt * y;
                }
            }
        }
    }
    basis
}

/// A sublattice of `Z^dim` stored by its Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn span(gens: &[Vec<BigInt>], dim: usize) -> Self {
        let basis = hnf_basis(gens, dim);
        let pivots = basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
        Lattice { dim, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let mut rest = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            // Entries left of the pivot must already be cleared.
            if rest[..pc].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (qt, r) = rest[pc].div_rem(&row[pc]);
            if !r.is_zero() {
                return None;
            }
            if !qt.is_zero() {
                for (x, y) in rest.iter_mut().zip(row) {
                    *x -= &qt * y;
                }
            }
            out.push(qt);
        }
        if rest.iter().all(Zero::is_zero) {
            Some(out)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    /// Index `[Z^dim : L]` for a full-rank lattice.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() < self.dim {
            return None;
        }
        Some(self.basis.iter().zip(&self.pivots).map(|(r, &p)| r[p].clone()).product())
    }
}

/// Basis of `{x in Z^cols : A x = 0}` as columns of `V` beyond the rank.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = snf(a);
    (s.rank..a.cols()).map(|j| s.v.col(j)).collect()
}

/// Solves `A x = b` over the integers, returning one solution if any exists.
pub fn solve_integral(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = snf(a);
    solve_with_snf(&s, a.cols(), b)
}

pub fn solve_with_snf(s: &Snf, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = s.u.mul_vec(b);
    let mut z = vec![BigInt::zero(); cols];
    for (i, y) in ub.iter().enumerate() {
        let d = s.diag.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !y.is_zero() {
                return None;
            }
        } else {
            let (qt, r) = y.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            z[i] = qt;
        }
    }
    Some(s.v.mul_vec(&z))
}

/// Checks `U A V = D` and `det U, det V = ±1`.
pub fn verify_snf(a: &IntMatrix, s: &Snf) -> Result<(), RingError> {
    let lhs = s.u.mul(a).mul(&s.v);
    if lhs != s.d_matrix() {
        return Err(RingError::Internal("U*A*V differs from D".into()));
    }
    for (name, m) in [("U", &s.u), ("V", &s.v)] {
        if !m.determinant().abs().is_one() {
            return Err(RingError::Internal(format!("{name} is not unimodular")));
        }
    }
    for w in s.diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        if !ok || w[0].is_negative() {
            return Err(RingError::Internal("divisibility chain broken".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(snf(&id).diag, big(&[1, 1]));
        let a = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let s = snf(&a);
        assert_eq!(s.diag, big(&[2, 4]));
        verify_snf(&a, &s).unwrap();
        let z = IntMatrix::zeros(3, 2);
        assert_eq!(snf(&z).diag, big(&[0, 0]));
    }

    #[test]
    fn determinant_matches_hand_value() {
        let a = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(a.determinant(), BigInt::from(-8));
        let b = IntMatrix::from_i64(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]);
        assert_eq!(b.determinant(), BigInt::from(-3));
    }

    #[test]
    fn hnf_and_lattice_membership() {
        let l = Lattice::span(&[big(&[2, 0]), big(&[1, 3])], 2);
        assert_eq!(l.index(), Some(BigInt::from(6)));
        assert!(l.contains(&big(&[3, 3])));
        assert!(!l.contains(&big(&[1, 0])));
        let c = l.coords(&big(&[4, 6])).unwrap();
        let back: Vec<BigInt> = (0..2).map(|j| &c[0] * &l.basis()[0][j] + &c[1] * &l.basis()[1][j]).collect();
        assert_eq!(back, big(&[4, 6]));
    }

    #[test]
    fn kernel_and_solve() {
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert!(solve_integral(&a, &big(&[3, 6])).is_some());
        assert!(solve_integral(&a, &big(&[3, 5])).is_none());
        let b = IntMatrix::from_i64(&[&[2]]);
        assert!(solve_integral(&b, &big(&[3])).is_none());
    }
}
