//! Row-major dense complex matrices and the small amount of dense linear
//! algebra the library needs: Householder QR with column pivoting, Gaussian
//! elimination with partial pivoting, minimum-norm least squares and
//! null-space extraction.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, entries })
    }

    /// Real row-major convenience constructor; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, columns: &[Vec<Complex64>]) -> Self {
        Self::from_fn(nrows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let src = rhs.row(k);
                for (o, &b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Extracts the block `rows x cols` starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> DenseMatrix {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Householder QR with column pivoting, `A P = Q R`.
///
/// `R` lives in the upper triangle of `packed`; reflectors are kept
/// separately as unit vectors so `Q` is never formed unless asked for.
#[derive(Clone, Debug)]
pub struct PivotedQr {
    packed: DenseMatrix,
    reflectors: Vec<Vec<Complex64>>,
    perm: Vec<usize>,
}

impl PivotedQr {
    pub fn new(a: &DenseMatrix) -> Self {
        Self::factor(a, true)
    }

    /// Plain Householder QR, no column exchanges.
    pub fn unpivoted(a: &DenseMatrix) -> Self {
        Self::factor(a, false)
    }

    fn factor(a: &DenseMatrix, pivot: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut r = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let steps = m.min(n);
        let mut reflectors = Vec::with_capacity(steps);
        for k in 0..steps {
            if pivot {
                let mut best = k;
                let mut best_norm = -1.0;
                for j in k..n {
                    let s: f64 = (k..m).map(|i| r[(i, j)].norm_sqr()).sum();
                    if s > best_norm {
                        best_norm = s;
                        best = j;
                    }
                }
                if best != k {
                    for i in 0..m {
                        r.entries.swap(i * n + k, i * n + best);
                    }
                    perm.swap(k, best);
                }
            }
            let x: Vec<Complex64> = (k..m).map(|i| r[(i, k)]).collect();
            let xnorm = vec_norm(&x);
            let mut v = x;
            if xnorm == 0.0 {
                reflectors.push(vec![ZERO; m - k]);
                continue;
            }
            let phase = if v[0].norm() == 0.0 { ONE } else { v[0] / v[0].norm() };
            let alpha = -phase * xnorm;
            v[0] -= alpha;
            let vnorm = vec_norm(&v);
            for c in v.iter_mut() {
                *c /= vnorm;
            }
            // apply I - 2 v v^H to the trailing block
            for j in k..n {
                let dot: Complex64 = (k..m).map(|i| v[i - k].conj() * r[(i, j)]).sum();
                let s = dot * 2.0;
                for i in k..m {
                    r[(i, j)] -= s * v[i - k];
                }
            }
            r[(k, k)] = alpha;
            for i in k + 1..m {
                r[(i, k)] = ZERO;
            }
            reflectors.push(v);
        }
        PivotedQr {
            packed: r,
            reflectors,
            perm,
        }
    }

    /// Column permutation: column `j` of `A P` is column `perm()[j]` of `A`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// The upper-trapezoidal factor (`min(m,n) x n`).
    pub fn r(&self) -> DenseMatrix {
        let k = self.packed.rows().min(self.packed.cols());
        DenseMatrix::from_fn(
            k,
            self.packed.cols(),
            |i, j| {
                if j >= i {
                    self.packed[(i, j)]
                } else {
                    ZERO
                }
            },
        )
    }

    pub fn diag_abs(&self) -> Vec<f64> {
        let k = self.packed.rows().min(self.packed.cols());
        (0..k).map(|i| self.packed[(i, i)].norm()).collect()
    }

    /// Number of diagonal entries of `R` above `rel_tol * |R_00|`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let d = self.diag_abs();
        let Some(&top) = d.first() else { return 0 };
        if top == 0.0 {
            return 0;
        }
        d.iter().take_while(|&&x| x > rel_tol * top).count()
    }

    /// `Q^H b`.
    pub fn apply_qh(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut y = b.to_vec();
        for (k, v) in self.reflectors.iter().enumerate() {
            reflect(v, &mut y[k..]);
        }
        y
    }

    /// `Q x` where `x` has length `m`.
    pub fn apply_q(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = x.to_vec();
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            reflect(v, &mut y[k..]);
        }
        y
    }

    /// Thin `Q` (`m x min(m,n)`).
    pub fn thin_q(&self) -> DenseMatrix {
        let m = self.packed.rows();
        let k = m.min(self.packed.cols());
        let cols: Vec<Vec<Complex64>> = (0..k)
            .map(|j| {
                let mut e = vec![ZERO; m];
                e[j] = ONE;
                self.apply_q(&e)
            })
            .collect();
        DenseMatrix::from_columns(m, &cols)
    }
}

fn reflect(v: &[Complex64], y: &mut [Complex64]) {
    let dot: Complex64 = v.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum();
    let s = dot * 2.0;
    for (yi, vi) in y.iter_mut().zip(v) {
        *yi -= s * vi;
    }
}

/// Relative threshold used by the dense rank decisions below.
pub fn default_rank_tol(m: usize, n: usize) -> f64 {
    (m.max(n) as f64) * f64::EPSILON * 16.0
}

/// Minimum-norm least-squares solution via a complete orthogonal
/// decomposition (`A P = Q R`, then `R_1^H = Z T`).
pub fn min_norm_least_squares(a: &DenseMatrix, b: &[Complex64], rel_tol: f64) -> Vec<Complex64> {
    assert_eq!(b.len(), a.rows(), "rhs length mismatch");
    let n = a.cols();
    let qr = PivotedQr::new(a);
    let rank = qr.rank(rel_tol);
    if rank == 0 {
        return vec![ZERO; n];
    }
    let r = qr.r();
    let r1 = r.submatrix(0, 0, rank, n);
    let cod = PivotedQr::unpivoted(&r1.adjoint());
    let t = cod.r(); // rank x rank, upper
    let c = &qr.apply_qh(b)[..rank];
    // T^H u = c, forward substitution
    let mut u = vec![ZERO; rank];
    for i in 0..rank {
        let mut s = c[i];
        for j in 0..i {
            s -= t[(j, i)].conj() * u[j];
        }
        u[i] = s / t[(i, i)].conj();
    }
    let mut padded = u;
    padded.resize(n, ZERO);
    let xp = cod.apply_q(&padded);
    let mut x = vec![ZERO; n];
    for (j, &p) in qr.perm().iter().enumerate() {
        x[p] = xp[j];
    }
    x
}

/// Orthonormal-free null-space basis `[-R11^{-1} R12; I]` (permuted back),
/// one column per unit of corank at the given relative tolerance.
pub fn null_space(a: &DenseMatrix, rel_tol: f64) -> Vec<Vec<Complex64>> {
    let n = a.cols();
    let qr = PivotedQr::new(a);
    let rank = qr.rank(rel_tol);
    let r = qr.r();
    let mut basis = Vec::with_capacity(n - rank);
    for t in rank..n {
        let mut xp = vec![ZERO; n];
        xp[t] = ONE;
        for i in (0..rank).rev() {
            let mut s = -r[(i, t)];
            for j in i + 1..rank {
                s -= r[(i, j)] * xp[j];
            }
            xp[i] = s / r[(i, i)];
        }
        let mut x = vec![ZERO; n];
        for (j, &p) in qr.perm().iter().enumerate() {
            x[p] = xp[j];
        }
        basis.push(x);
    }
    basis
}

/// Dense Gaussian elimination with partial pivoting.
pub fn gepp_solve(a: &DenseMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let floor = a.max_abs() * f64::EPSILON * n as f64;
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, m[(i, k)].norm()))
            .fold((k, -1.0), |acc, it| if it.1 > acc.1 { it } else { acc });
        if pmax <= floor {
            let rank = k;
            return Err(Error::Singular { rank, corank: n - rank });
        }
        if p != k {
            for j in 0..n {
                m.entries.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let piv = m[(k, k)];
        for i in k + 1..n {
            let l = m[(i, k)] / piv;
            if l == ZERO {
                continue;
            }
            for j in k..n {
                let t = m[(k, j)];
                m[(i, j)] -= l * t;
            }
            let t = x[k];
            x[i] -= l * t;
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= m[(i, j)] * x[j];
        }
        x[i] = s / m[(i, i)];
    }
    Ok(x)
}
