//! Displacement structure of `M_g` and of the Gauss-Newton Jacobian.
//!
//! A matrix `A` (`m x n`) is Toeplitz-like when
//! `Z_m^1 A - A Z_n^θ = G H` for thin generators `G` (`m x α`) and
//! `H` (`α x n`), where `Z_n^θ` is the down-shift with `θ` in the top-right
//! corner. Multiplication matrices have `α <= 2`; the Jacobian of the
//! residual `(g, v) -> M_g v` has `α <= 3`.
//!
//! The unitary Fourier matrix `F_n[k][i] = ω^{ki} / sqrt(n)`, `ω = e^{2πi/n}`,
//! diagonalizes `Z_n^1`. With `δ^n = θ` and `D = diag(δ^j)`,
//! `C = F_m A D^{-1} F_n^H` satisfies `D_1 C - C D_2 = (F_m G)(H D^{-1} F_n^H)`
//! with `D_1 = diag(ω_m^i)` and `D_2 = δ diag(ω_n^j)`: a Cauchy-like matrix
//! with the same displacement rank, which is what the GKO elimination runs on.

use std::f64::consts::PI;
use std::sync::Once;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::bezout::MultMatrix;
use crate::error::{Error, Result};
use crate::matrix::{vec_norm, DenseMatrix, PivotedQr};
use crate::poly::Polynomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative cutoff used when compressing generators to their numerical rank.
pub const COMPRESSION_TOL: f64 = 1e-12;

/// Toeplitz-like generators `(G, H, θ)` of an `nrows x ncols` matrix.
#[derive(Clone, Debug)]
pub struct ToeplitzGenerators {
    nrows: usize,
    ncols: usize,
    g: DenseMatrix,
    h: DenseMatrix,
    theta: Complex64,
}

impl ToeplitzGenerators {
    pub fn new(g: DenseMatrix, h: DenseMatrix, theta: Complex64) -> Result<Self> {
        if g.cols() != h.rows() {
            return Err(Error::DimensionMismatch(format!(
                "G has {} columns, H has {} rows",
                g.cols(),
                h.rows()
            )));
        }
        if (theta.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("|theta| = {} != 1", theta.norm())));
        }
        Ok(ToeplitzGenerators {
            nrows: g.rows(),
            ncols: h.cols(),
            g,
            h,
            theta,
        })
    }

    /// Generators of a dense matrix, compressed to its numerical displacement rank.
    pub fn from_dense(a: &DenseMatrix, theta: Complex64) -> Result<Self> {
        let disp = displaced(a, theta);
        let qr = PivotedQr::new(&disp);
        let scale = disp.max_abs();
        let rank = (0..qr.diag_abs().len())
            .take_while(|&i| qr.diag_abs()[i] > COMPRESSION_TOL * scale)
            .count();
        let q = qr.thin_q();
        let r = qr.r();
        let g = q.submatrix(0, 0, a.rows(), rank);
        let mut h = DenseMatrix::zeros(rank, a.cols());
        for i in 0..rank {
            for j in 0..a.cols() {
                h[(i, qr.perm()[j])] = r[(i, j)];
            }
        }
        Self::new(g, h, theta)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn alpha(&self) -> usize {
        self.g.cols()
    }

    pub fn g(&self) -> &DenseMatrix {
        &self.g
    }

    pub fn h(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn theta(&self) -> Complex64 {
        self.theta
    }

    /// `G H`, the displaced matrix the generators stand for.
    pub fn displacement(&self) -> DenseMatrix {
        self.g.matmul(&self.h).expect("shapes checked at construction")
    }
}

/// `Z_n^θ`: ones on the subdiagonal, `θ` in the top-right corner.
pub fn circulant(n: usize, theta: Complex64) -> DenseMatrix {
    let mut z = DenseMatrix::zeros(n, n);
    for i in 1..n {
        z[(i, i - 1)] = ONE;
    }
    if n > 0 {
        z[(0, n - 1)] += theta;
    }
    z
}

/// `Z_m^1 A - A Z_n^θ`, formed densely.
pub fn displaced(a: &DenseMatrix, theta: Complex64) -> DenseMatrix {
    let (m, n) = (a.rows(), a.cols());
    DenseMatrix::from_fn(m, n, |i, j| {
        let za = a[((i + m - 1) % m, j)];
        let az = if j + 1 < n { a[(i, j + 1)] } else { theta * a[(i, 0)] };
        za - az
    })
}

/// `x p mod f` for `p` of degree below `d`, `f` monic of degree `d`.
pub(crate) fn shift_mod(monic: &[Complex64], p: &[Complex64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    let top = p[d - 1];
    (0..d)
        .map(|i| {
            let shifted = if i > 0 { p[i - 1] } else { ZERO };
            shifted - top * monic[i]
        })
        .collect()
}

/// Rank-revealing recompression of `G H` (`G`: `m x α`, `H`: `α x n`).
///
/// `reference` is a magnitude for the displaced matrix; singular values
/// below `COMPRESSION_TOL * max(σ_1, reference)` are dropped so an exactly
/// cancelling product (e.g. `g = 1`) compresses to `α = 0`.
fn compress(g: DenseMatrix, h: DenseMatrix, reference: f64) -> (DenseMatrix, DenseMatrix) {
    let (m, n, alpha) = (g.rows(), h.cols(), g.cols());
    if alpha == 0 {
        return (g, h);
    }
    let qr1 = PivotedQr::new(&g);
    let r1 = qr1.r();
    let k1 = r1.rows();
    // K = R P^T H
    let mut k = DenseMatrix::zeros(k1, n);
    for i in 0..k1 {
        for (t, &p) in qr1.perm().iter().enumerate() {
            let rit = r1[(i, t)];
            if rit == ZERO {
                continue;
            }
            for j in 0..n {
                k[(i, j)] += rit * h[(p, j)];
            }
        }
    }
    let qr2 = PivotedQr::new(&k.adjoint());
    let diag = qr2.diag_abs();
    let top = diag.first().copied().unwrap_or(0.0);
    let cutoff = COMPRESSION_TOL * top.max(reference);
    let rank = diag.iter().take_while(|&&s| s > cutoff).count();
    let r2 = qr2.r();
    // W = P2 R2^H restricted to the leading `rank` columns
    let mut w = DenseMatrix::zeros(k1, rank);
    for (j, &p) in qr2.perm().iter().enumerate() {
        for t in 0..rank {
            w[(p, t)] = r2[(t, j)].conj();
        }
    }
    let q1 = qr1.thin_q();
    let new_g = q1.matmul(&w).expect("inner dimensions agree");
    let q2 = qr2.thin_q();
    let new_h = DenseMatrix::from_fn(rank, n, |t, j| q2[(j, t)].conj());
    debug_assert_eq!(new_g.rows(), m);
    (new_g, new_h)
}

/// Generators (`α <= 2`) of `M_g`, assembled from its first and last
/// columns and last row.
///
/// With `u = e_0 + f_{0..d-1}` (monic `f`), every column `j < d-1` of the
/// displaced matrix equals `u M_g[d-1][j]`; only the last column differs, by
/// `x^d g mod f - θ g mod f`.
pub fn generators_of_mult_matrix(f: &Polynomial, g: &Polynomial, theta: Complex64) -> Result<ToeplitzGenerators> {
    let mm = MultMatrix::new(f, g)?;
    generators_from_mult(&mm, theta)
}

pub(crate) fn generators_from_mult(mm: &MultMatrix, theta: Complex64) -> Result<ToeplitzGenerators> {
    let d = mm.dim();
    if d < 2 {
        return Err(Error::DegreeTooSmall { degree: d, min: 2 });
    }
    let monic = mm.modulus();
    let first = mm.column(0)?;
    let last = mm.column(d - 1)?;
    let last_row = mm.row(d - 1)?;
    let u = shift_vector(monic);
    let next = shift_mod(monic, &last);
    let w: Vec<Complex64> = next.iter().zip(&first).map(|(a, b)| a - theta * b).collect();
    let g = DenseMatrix::from_columns(d, &[u.clone(), w.clone()]);
    let mut h = DenseMatrix::zeros(2, d);
    h.row_mut(0).copy_from_slice(&last_row);
    h[(1, d - 1)] = ONE;
    let reference = (vec_norm(&u) * vec_norm(&last_row)).max(vec_norm(&w));
    let (g, h) = compress(g, h, reference);
    ToeplitzGenerators::new(g, h, theta)
}

/// `e_0 + f_{0..d-1}`: the column direction shared by `Z^1 - Frob(f)`.
fn shift_vector(monic: &[Complex64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    let mut u = monic[..d].to_vec();
    u[0] += ONE;
    u
}

/// Generators (`α <= 3`) of the Jacobian of `(g, v) -> M_g v` with respect to
/// `[g_0..g_m, v_0..v_{k-1}]`.
///
/// Both column blocks follow the recurrence `col_{j+1} = Frob(f) col_j`, so
/// the displaced matrix is `u * (last row)` plus corrections in the last
/// column of each block.
pub fn generators_of_jacobian(
    f: &Polynomial,
    g: &Polynomial,
    v: &Polynomial,
    theta: Complex64,
) -> Result<ToeplitzGenerators> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let k = v.degree().ok_or(Error::ZeroPolynomial)?;
    let m = g.degree().ok_or(Error::ZeroPolynomial)?;
    if k < 1 || k >= d {
        return Err(Error::DimensionMismatch(format!(
            "cofactor degree {k} must lie in 1..{d}"
        )));
    }
    if (v.coeff(k) - ONE).norm() > 1e-12 {
        return Err(Error::InvalidArgument("cofactor must be monic".into()));
    }
    jacobian_generators(f, g.coeffs(), &v.padded(k + 1), m, theta)
}

/// Shared by the public wrapper and the Gauss-Newton loop, where `g` may
/// carry a vanishing leading coordinate (`g.len() <= m + 1`).
pub(crate) fn jacobian_generators(
    f: &Polynomial,
    g: &[Complex64],
    v: &[Complex64],
    m: usize,
    theta: Complex64,
) -> Result<ToeplitzGenerators> {
    let k = v.len() - 1;
    let mg = MultMatrix::new(f, &Polynomial::new(g.to_vec()))?;
    let mv = MultMatrix::new(f, &Polynomial::new(v.to_vec()))?;
    let d = mg.dim();
    let monic = mg.modulus();
    let ncols = m + 1 + k;

    // g-block: columns x^j v mod f, j = 0..=m (continued past d by shifting)
    let v_row = mv.row(d - 1)?;
    let mut last_row = Vec::with_capacity(ncols);
    let a_m = if m < d {
        last_row.extend_from_slice(&v_row[..=m]);
        mv.column(m)?
    } else {
        last_row.extend_from_slice(&v_row);
        let mut col = mv.column(d - 1)?;
        for _ in d..=m {
            col = shift_mod(monic, &col);
            last_row.push(col[d - 1]);
        }
        col
    };
    let a_next = shift_mod(monic, &a_m);
    let a_0 = v
        .iter()
        .copied()
        .chain(std::iter::repeat(ZERO))
        .take(d)
        .collect::<Vec<_>>();

    // v-block: columns x^i g mod f, i = 0..k-1
    let g_row = mg.row(d - 1)?;
    last_row.extend_from_slice(&g_row[..k]);
    let b_0 = mg.column(0)?;
    let b_k = mg.column(k)?;

    let u = shift_vector(monic);
    let w1: Vec<Complex64> = a_next.iter().zip(&b_0).map(|(a, b)| a - b).collect();
    let w2: Vec<Complex64> = b_k.iter().zip(&a_0).map(|(b, a)| b - theta * a).collect();
    let gen = DenseMatrix::from_columns(d, &[u.clone(), w1.clone(), w2.clone()]);
    let mut h = DenseMatrix::zeros(3, ncols);
    h.row_mut(0).copy_from_slice(&last_row);
    h[(1, m)] = ONE;
    h[(2, ncols - 1)] = ONE;
    let reference = (vec_norm(&u) * vec_norm(&last_row))
        .max(vec_norm(&w1))
        .max(vec_norm(&w2));
    let (gen, h) = compress(gen, h, reference);
    ToeplitzGenerators::new(gen, h, theta)
}

/// Cauchy-like generators: `C[i][j] = (G_i . H_j) / (d1_i - d2_j)`.
#[derive(Clone, Debug)]
pub struct CauchyGenerators {
    pub d1: Vec<Complex64>,
    pub d2: Vec<Complex64>,
    pub g: DenseMatrix,
    pub h: DenseMatrix,
    /// Column scaling root `δ` (`δ^n = θ`) used by the coordinate maps.
    delta: Complex64,
}

/// Which side of `C = F_m A D^{-1} F_n^H` a vector lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Right-hand sides / images (length `m`): `b -> F_m b`.
    Row,
    /// Unknowns (length `n`): `v -> F_n D v`.
    Column,
}

impl CauchyGenerators {
    /// Raw Cauchy-like generators; coordinate maps assume `δ = 1`.
    pub fn new(d1: Vec<Complex64>, d2: Vec<Complex64>, g: DenseMatrix, h: DenseMatrix) -> Result<Self> {
        if g.rows() != d1.len() || h.cols() != d2.len() || g.cols() != h.rows() {
            return Err(Error::DimensionMismatch(format!(
                "G {}x{}, H {}x{}, nodes {} and {}",
                g.rows(),
                g.cols(),
                h.rows(),
                h.cols(),
                d1.len(),
                d2.len()
            )));
        }
        Ok(CauchyGenerators {
            d1,
            d2,
            g,
            h,
            delta: ONE,
        })
    }

    pub fn nrows(&self) -> usize {
        self.d1.len()
    }

    pub fn ncols(&self) -> usize {
        self.d2.len()
    }

    pub fn alpha(&self) -> usize {
        self.g.cols()
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    /// Smallest `|d1_i - d2_j|`.
    pub fn min_node_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for a in &self.d1 {
            for b in &self.d2 {
                best = best.min((a - b).norm());
            }
        }
        best
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let num: Complex64 = (0..self.alpha()).map(|a| self.g[(i, a)] * self.h[(a, j)]).sum();
        num / (self.d1[i] - self.d2[j])
    }

    /// Dense reconstruction (test and debug use).
    pub fn reconstruct(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.nrows(), self.ncols(), |i, j| self.entry(i, j))
    }

    /// Maps a vector into Cauchy coordinates.
    pub fn forward(&self, x: &[Complex64], side: Side) -> Vec<Complex64> {
        match side {
            Side::Row => {
                assert_eq!(x.len(), self.nrows());
                fourier(x)
            }
            Side::Column => {
                assert_eq!(x.len(), self.ncols());
                let scaled: Vec<Complex64> = x
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| c * self.delta.powu(j as u32))
                    .collect();
                fourier(&scaled)
            }
        }
    }

    /// Inverse of [`CauchyGenerators::forward`].
    pub fn backward(&self, y: &[Complex64], side: Side) -> Vec<Complex64> {
        match side {
            Side::Row => {
                assert_eq!(y.len(), self.nrows());
                fourier_adjoint(y)
            }
            Side::Column => {
                assert_eq!(y.len(), self.ncols());
                let inv = self.delta.inv();
                fourier_adjoint(y)
                    .into_iter()
                    .enumerate()
                    .map(|(j, c)| c * inv.powu(j as u32))
                    .collect()
            }
        }
    }
}

/// `F x` with `F[k][i] = e^{2πi ki/n} / sqrt(n)`.
pub fn fourier(x: &[Complex64]) -> Vec<Complex64> {
    transform(x, true)
}

/// `F^H x`.
pub fn fourier_adjoint(x: &[Complex64]) -> Vec<Complex64> {
    transform(x, false)
}

fn transform(x: &[Complex64], positive: bool) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::new();
    // rustfft's inverse uses the positive exponent, both unnormalized
    let fft = if positive {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut buf = x.to_vec();
    fft.process(&mut buf);
    let s = 1.0 / (n as f64).sqrt();
    for c in buf.iter_mut() {
        *c *= s;
    }
    buf
}

/// Dense unitary Fourier matrix, same convention as [`fourier`].
pub fn fourier_matrix(n: usize) -> DenseMatrix {
    let s = 1.0 / (n as f64).sqrt();
    DenseMatrix::from_fn(n, n, |k, i| {
        Complex64::from_polar(s, 2.0 * PI * ((k * i) % n) as f64 / n as f64)
    })
}

static FOURIER_CHECK: Once = Once::new();

/// Asserts that `F Z_4^1 F^H = diag(ω^k)` for the FFT backend in use.
fn fourier_self_check() {
    FOURIER_CHECK.call_once(|| {
        let n = 4;
        let z = circulant(n, ONE);
        // columns of F^H via the fast path
        let fh_cols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = ONE;
                fourier_adjoint(&e)
            })
            .collect();
        let fh = DenseMatrix::from_columns(n, &fh_cols);
        let zfh = z.matmul(&fh).expect("square");
        let cols: Vec<Vec<Complex64>> = (0..n).map(|j| fourier(&zfh.column(j))).collect();
        let prod = DenseMatrix::from_columns(n, &cols);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j {
                    Complex64::from_polar(1.0, 2.0 * PI * i as f64 / n as f64)
                } else {
                    ZERO
                };
                assert!(
                    (prod[(i, j)] - want).norm() < 1e-12,
                    "Fourier convention drift: F Z F^H is not diag(w^k)"
                );
            }
        }
    });
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Default `θ` for an `m x n` Toeplitz-like matrix.
///
/// Node angles differ by `φ + 2πt/L` with `L = lcm(m, n)` and integer `t`,
/// so `φ = π/L` (`θ = e^{inφ}`) maximizes the minimum node distance, which
/// is then `2 sin(π/(2L))`. For square matrices this is `θ = -1`.
pub fn default_theta(m: usize, n: usize) -> Complex64 {
    if m == n {
        return Complex64::new(-1.0, 0.0);
    }
    let lcm = m / gcd(m, n) * n;
    Complex64::from_polar(1.0, PI * n as f64 / lcm as f64)
}

/// Minimum node distance reached by [`default_theta`].
pub fn default_node_separation(m: usize, n: usize) -> f64 {
    let lcm = m / gcd(m, n) * n;
    2.0 * (PI / (2.0 * lcm as f64)).sin()
}

/// Principal `n`-th root of `θ`.
fn column_root(theta: Complex64, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, theta.arg() / n as f64)
}

/// Transforms Toeplitz-like generators into Cauchy-like ones for
/// `F_m A D^{-1} F_n^H`; `O((m + n) α log(m + n))`.
pub fn toeplitz_to_cauchy(tg: &ToeplitzGenerators) -> CauchyGenerators {
    fourier_self_check();
    let (m, n, alpha) = (tg.nrows(), tg.ncols(), tg.alpha());
    let delta = column_root(tg.theta(), n);
    let d1: Vec<Complex64> = (0..m)
        .map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / m as f64))
        .collect();
    let d2: Vec<Complex64> = (0..n)
        .map(|j| delta * Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect();
    let mut g = DenseMatrix::zeros(m, alpha);
    for a in 0..alpha {
        let col = fourier(&tg.g().column(a));
        for i in 0..m {
            g[(i, a)] = col[i];
        }
    }
    let inv = delta.inv();
    let mut h = DenseMatrix::zeros(alpha, n);
    for a in 0..alpha {
        let scaled: Vec<Complex64> = tg
            .h()
            .row(a)
            .iter()
            .enumerate()
            .map(|(j, &c)| c * inv.powu(j as u32))
            .collect();
        h.row_mut(a).copy_from_slice(&fourier_adjoint(&scaled));
    }
    CauchyGenerators { d1, d2, g, h, delta }
}

/// Dense oracle for the transform: `F_m A D^{-1} F_n^H`.
pub fn dense_cauchy_transform(a: &DenseMatrix, theta: Complex64) -> DenseMatrix {
    let (m, n) = (a.rows(), a.cols());
    let delta = column_root(theta, n);
    let dinv = DenseMatrix::from_fn(n, n, |i, j| if i == j { delta.inv().powu(i as u32) } else { ZERO });
    fourier_matrix(m)
        .matmul(a)
        .and_then(|x| x.matmul(&dinv))
        .and_then(|x| x.matmul(&fourier_matrix(n).adjoint()))
        .expect("shapes agree")
}
