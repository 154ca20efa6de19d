//! Gaussian elimination on Cauchy-like generators (the GKO algorithm).
//!
//! Each step rebuilds one column and one row of the current Schur
//! complement from the generators, picks a pivot, and updates the
//! generators by the rank-one Schur rule
//!
//! ```text
//! G_2 <- G_2 - l g_1^T        H_2 <- H_2 - h_1 u^T / u_11
//! ```
//!
//! so an `m x n` factorization costs `O(α m n)` instead of `O(m n min(m,n))`.

use num_complex::Complex64;

use crate::displacement::CauchyGenerators;
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, PivotedQr};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Smallest admissible `|d1_i - d2_j|`.
pub const NODE_FLOOR: f64 = 1e-10;

/// Default relative pivot threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pivoting {
    /// Row partial pivoting, as in GEPP.
    Partial,
    /// Gu's approximate complete pivoting: the right generator is kept
    /// orthonormal, the row with the largest left-generator norm selects a
    /// column by its largest entry, then rows are pivoted within it.
    #[default]
    Gu,
}

/// `P1 C P2 = L U`.
///
/// Row `i` of `P1 C` is row `p1[i]` of `C`; column `j` of `C P2` is column
/// `p2[j]` of `C`. `L` is `m x r` unit lower trapezoidal and `U` is `r x n`
/// upper trapezoidal with `r = min(m, n)`.
#[derive(Clone, Debug)]
pub struct StructuredLU {
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub l: DenseMatrix,
    pub u: DenseMatrix,
    /// `|u_kk|` in elimination order.
    pub pivots: Vec<f64>,
    /// Number of generator orthonormalizations performed.
    pub reorthogonalizations: usize,
}

impl StructuredLU {
    pub fn nrows(&self) -> usize {
        self.l.rows()
    }

    pub fn ncols(&self) -> usize {
        self.u.cols()
    }

    /// `P1^T L U P2^T`, formed densely.
    pub fn reconstruct(&self) -> DenseMatrix {
        let lu = self.l.matmul(&self.u).expect("factor shapes agree");
        let mut out = DenseMatrix::zeros(lu.rows(), lu.cols());
        for (i, &pi) in self.p1.iter().enumerate() {
            for (j, &pj) in self.p2.iter().enumerate() {
                out[(pi, pj)] = lu[(i, j)];
            }
        }
        out
    }

    /// Euclidean norms of the rows of `U`.
    pub fn u_row_norms(&self) -> Vec<f64> {
        (0..self.u.rows())
            .map(|i| self.u.row(i).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// `L^{-1} P1 b` restricted to the first `r` rows.
    fn forward(&self, b: &[Complex64]) -> Vec<Complex64> {
        let r = self.l.cols();
        let mut y: Vec<Complex64> = self.p1.iter().map(|&p| b[p]).collect();
        for i in 0..r {
            let yi = y[i];
            if yi == ZERO {
                continue;
            }
            for t in i + 1..y.len() {
                y[t] -= self.l[(t, i)] * yi;
            }
        }
        y.truncate(r);
        y
    }

    /// Back substitution with the leading `r x r` block of `U`.
    fn backward(&self, y: &[Complex64], r: usize) -> Vec<Complex64> {
        let mut x = vec![ZERO; r];
        for i in (0..r).rev() {
            let mut s = y[i];
            for j in i + 1..r {
                s -= self.u[(i, j)] * x[j];
            }
            x[i] = s / self.u[(i, i)];
        }
        x
    }

    fn unpermute_columns(&self, xp: &[Complex64]) -> Vec<Complex64> {
        let mut x = vec![ZERO; self.ncols()];
        for (j, &p) in self.p2.iter().enumerate() {
            x[p] = xp[j];
        }
        x
    }
}

/// Rank information read off the pivots of a [`StructuredLU`].
#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub numerical_rank: usize,
    pub corank: usize,
    /// Pivot magnitudes in elimination order.
    pub pivot_magnitudes: Vec<f64>,
    /// Position (in the descending sort) after which the largest
    /// log-magnitude drop occurs.
    pub gap_location: Option<usize>,
    /// Absolute threshold actually applied.
    pub threshold_used: f64,
    /// Row norms of `U`, for callers preferring that criterion.
    pub u_row_norms: Vec<f64>,
}

impl RankReport {
    /// A report carrying only a known rank, for callers that skip the
    /// factorization.
    pub fn from_rank(rank: usize, n: usize) -> Self {
        RankReport {
            numerical_rank: rank,
            corank: n - rank,
            pivot_magnitudes: Vec::new(),
            gap_location: None,
            threshold_used: 0.0,
            u_row_norms: Vec::new(),
        }
    }

    /// Pivot magnitudes sorted in nonincreasing order.
    pub fn sorted_pivots(&self) -> Vec<f64> {
        let mut p = self.pivot_magnitudes.clone();
        p.sort_by(|a, b| b.total_cmp(a));
        p
    }
}

/// Pivoted LU of a Cauchy-like matrix given by its generators.
pub fn gko_lu(cg: &CauchyGenerators, pivoting: Pivoting) -> Result<StructuredLU> {
    let (m, n, alpha) = (cg.nrows(), cg.ncols(), cg.alpha());
    let steps = m.min(n);
    // row-major working copies
    let mut g: Vec<Complex64> = cg.g.entries().to_vec();
    let mut h: Vec<Complex64> = cg.h.entries().to_vec();
    let mut d1 = cg.d1.clone();
    let mut d2 = cg.d2.clone();
    let mut p1: Vec<usize> = (0..m).collect();
    let mut p2: Vec<usize> = (0..n).collect();
    let mut l = DenseMatrix::zeros(m, steps);
    let mut u = DenseMatrix::zeros(steps, n);
    let mut pivots = Vec::with_capacity(steps);
    let mut col = vec![ZERO; m];
    let mut row = vec![ZERO; n];
    let mut reorth = 0;

    let dot = |g: &[Complex64], h: &[Complex64], i: usize, j: usize| -> Complex64 {
        let mut s = ZERO;
        for a in 0..alpha {
            s += g[i * alpha + a] * h[a * n + j];
        }
        s
    };
    let denom = |d1i: Complex64, d2j: Complex64, row: usize, colj: usize| -> Result<Complex64> {
        let den = d1i - d2j;
        let dist = den.norm();
        if dist < NODE_FLOOR {
            return Err(Error::NodeCollision {
                row,
                col: colj,
                distance: dist,
            });
        }
        Ok(den)
    };

    for k in 0..steps {
        if pivoting == Pivoting::Gu && alpha > 0 {
            // with orthonormal rows in H, row i of the Schur complement
            // scales with |G_i|; its largest entry picks the column
            orthonormalize_rows(&mut g, &mut h, alpha, n, k, m);
            reorth += 1;
            let mut lead = (k, -1.0);
            for i in k..m {
                let s: f64 = g[i * alpha..(i + 1) * alpha].iter().map(|c| c.norm_sqr()).sum();
                if s > lead.1 {
                    lead = (i, s);
                }
            }
            let i = lead.0;
            let mut best = (k, -1.0);
            for j in k..n {
                let mag = (dot(&g, &h, i, j) / denom(d1[i], d2[j], p1[i], p2[j])?).norm();
                if mag > best.1 {
                    best = (j, mag);
                }
            }
            let q = best.0;
            if q != k {
                for a in 0..alpha {
                    h.swap(a * n + k, a * n + q);
                }
                d2.swap(k, q);
                p2.swap(k, q);
                for t in 0..k {
                    let tmp = u[(t, k)];
                    u[(t, k)] = u[(t, q)];
                    u[(t, q)] = tmp;
                }
            }
        }

        // column k of the Schur complement
        let mut best = (k, -1.0);
        for i in k..m {
            let c = dot(&g, &h, i, k) / denom(d1[i], d2[k], p1[i], p2[k])?;
            col[i] = c;
            let mag = c.norm();
            if mag > best.1 {
                best = (i, mag);
            }
        }
        let p = best.0;
        if p != k {
            for a in 0..alpha {
                g.swap(k * alpha + a, p * alpha + a);
            }
            d1.swap(k, p);
            p1.swap(k, p);
            col.swap(k, p);
            for t in 0..k {
                let tmp = l[(k, t)];
                l[(k, t)] = l[(p, t)];
                l[(p, t)] = tmp;
            }
        }
        let piv = col[k];
        pivots.push(piv.norm());
        l[(k, k)] = ONE;
        row[k] = piv;
        for j in k + 1..n {
            row[j] = dot(&g, &h, k, j) / denom(d1[k], d2[j], p1[k], p2[j])?;
        }
        u.row_mut(k)[k..].copy_from_slice(&row[k..]);
        if piv == ZERO {
            // zero column in the Schur complement: nothing to eliminate
            continue;
        }
        for i in k + 1..m {
            let li = col[i] / piv;
            l[(i, k)] = li;
            if li != ZERO {
                for a in 0..alpha {
                    let gk = g[k * alpha + a];
                    g[i * alpha + a] -= li * gk;
                }
            }
        }
        for j in k + 1..n {
            let s = row[j] / piv;
            if s != ZERO {
                for a in 0..alpha {
                    let hk = h[a * n + k];
                    h[a * n + j] -= hk * s;
                }
            }
        }
    }

    Ok(StructuredLU {
        p1,
        p2,
        l,
        u,
        pivots,
        reorthogonalizations: reorth,
    })
}

/// Makes the rows of the trailing right generator `H[:, start..]`
/// orthonormal, absorbing the triangular factor into `G[start..]`; the
/// product `G H` on the trailing block is unchanged.
fn orthonormalize_rows(g: &mut [Complex64], h: &mut [Complex64], alpha: usize, n: usize, start: usize, m: usize) {
    let cols = n - start;
    // H_trail^H = Q R  =>  H_trail = R^H Q^H, G H_trail = (G R^H) Q^H
    let block = DenseMatrix::from_fn(cols, alpha, |j, a| h[a * n + start + j].conj());
    let qr = PivotedQr::unpivoted(&block);
    let q = qr.thin_q();
    let r = qr.r();
    let kk = r.rows();
    for j in 0..cols {
        for a in 0..alpha {
            h[a * n + start + j] = if a < kk { q[(j, a)].conj() } else { ZERO };
        }
    }
    for i in start..m {
        let old: Vec<Complex64> = g[i * alpha..(i + 1) * alpha].to_vec();
        for a in 0..alpha {
            g[i * alpha + a] = if a < kk {
                (0..alpha).map(|b| old[b] * r[(a, b)].conj()).sum()
            } else {
                ZERO
            };
        }
    }
}

/// Counts pivots above `tol * max |u_kk|`; ties go to the smaller rank.
pub fn estimate_rank(lu: &StructuredLU, tol: f64) -> RankReport {
    let pivots = lu.pivots.clone();
    let top = pivots.iter().copied().fold(0.0, f64::max);
    let threshold = tol * top;
    let rank = if top == 0.0 {
        0
    } else {
        pivots.iter().filter(|&&p| p > threshold).count()
    };
    let mut sorted = pivots.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let gap_location = if top == 0.0 {
        None
    } else {
        let floor = top * 1e-300_f64.max(f64::MIN_POSITIVE);
        sorted
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i + 1, (w[0].max(floor) / w[1].max(floor)).ln()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    };
    RankReport {
        numerical_rank: rank,
        corank: lu.ncols() - rank,
        pivot_magnitudes: pivots,
        gap_location,
        threshold_used: threshold,
        u_row_norms: lu.u_row_norms(),
    }
}

/// Solves the square system `C x = rhs` from its factorization.
pub fn solve(lu: &StructuredLU, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = lu.ncols();
    if lu.nrows() != n || rhs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} factorization with rhs of length {}",
            lu.nrows(),
            n,
            rhs.len()
        )));
    }
    check_nonsingular(lu, n)?;
    let y = lu.forward(rhs);
    Ok(lu.unpermute_columns(&lu.backward(&y, n)))
}

/// Basic solution of a wide (`m <= n`) system: the trailing `n - m`
/// coordinates (after `P2`) are set to zero. Not the minimum-norm solution.
pub fn solve_basic(lu: &StructuredLU, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let (m, n) = (lu.nrows(), lu.ncols());
    if m > n || rhs.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "basic solution needs a wide system, got {m}x{n} with rhs of length {}",
            rhs.len()
        )));
    }
    check_nonsingular(lu, m)?;
    let y = lu.forward(rhs);
    let mut xp = lu.backward(&y, m);
    xp.resize(n, ZERO);
    Ok(lu.unpermute_columns(&xp))
}

fn check_nonsingular(lu: &StructuredLU, r: usize) -> Result<()> {
    let top = lu.pivots.iter().copied().fold(0.0, f64::max);
    let floor = top * f64::EPSILON * (lu.ncols().max(1) as f64);
    let rank = lu.pivots[..r].iter().filter(|&&p| p > floor).count();
    if top == 0.0 || rank < r {
        return Err(Error::Singular { rank, corank: r - rank });
    }
    Ok(())
}

/// Null-space basis of the factored matrix at numerical rank `rank`:
/// column `t` solves `U11 w = -U[:, rank + t]` and sets coordinate
/// `rank + t` to one (before undoing `P2`).
pub fn null_space(lu: &StructuredLU, rank: usize) -> Result<Vec<Vec<Complex64>>> {
    let n = lu.ncols();
    if rank >= n {
        return Err(Error::FullRank);
    }
    let mut basis = Vec::with_capacity(n - rank);
    for t in rank..n {
        let rhs: Vec<Complex64> = (0..rank).map(|i| -lu.u[(i, t)]).collect();
        let mut xp = lu.backward(&rhs, rank);
        xp.resize(n, ZERO);
        xp[t] = ONE;
        basis.push(lu.unpermute_columns(&xp));
    }
    Ok(basis)
}

/// One null vector (the first of [`null_space`]) of the Cauchy-like matrix.
pub fn null_vector(cg: &CauchyGenerators, rank: usize) -> Result<Vec<Complex64>> {
    let lu = gko_lu(cg, Pivoting::default())?;
    null_space(&lu, rank).map(|mut b| b.swap_remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezout::barnett_mult_matrix;
    use crate::displacement::{default_theta, generators_of_mult_matrix, toeplitz_to_cauchy, Side, ToeplitzGenerators};
    use crate::matrix::vec_norm;
    use crate::poly::Polynomial;
    use crate::testkit::{dense_gepp_solve, random_monic, random_poly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real(cs: &[f64]) -> Polynomial {
        Polynomial::from_real(cs)
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn random_toeplitz_like(rng: &mut impl Rng, n: usize, alpha: usize) -> ToeplitzGenerators {
        let g = DenseMatrix::from_fn(n, alpha, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let h = DenseMatrix::from_fn(alpha, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        ToeplitzGenerators::new(g, h, default_theta(n, n)).unwrap()
    }

    #[test]
    fn one_by_one() {
        let cg = CauchyGenerators::new(
            vec![c(1.0)],
            vec![c(-1.0)],
            DenseMatrix::from_real_rows(&[&[1.0]]),
            DenseMatrix::from_real_rows(&[&[1.0]]),
        )
        .unwrap();
        let lu = gko_lu(&cg, Pivoting::Partial).unwrap();
        assert_eq!(lu.u[(0, 0)], c(0.5));
        assert_eq!(cg.entry(0, 0), c(0.5));
    }

    #[test]
    fn node_collision_reported() {
        let cg = CauchyGenerators::new(
            vec![c(1.0), c(-1.0)],
            vec![c(0.0), c(-1.0)],
            DenseMatrix::from_real_rows(&[&[1.0], &[1.0]]),
            DenseMatrix::from_real_rows(&[&[1.0, 1.0]]),
        )
        .unwrap();
        match gko_lu(&cg, Pivoting::Partial) {
            Err(Error::NodeCollision { row, col, .. }) => assert_eq!((row, col), (1, 1)),
            other => panic!("expected collision, got {other:?}"),
        }
    }

    #[test]
    fn factorization_reconstructs_and_bounds_l() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for n in [4usize, 17, 64, 128] {
            let cg = toeplitz_to_cauchy(&random_toeplitz_like(&mut rng, n, 2));
            let dense = cg.reconstruct();
            for piv in [Pivoting::Partial, Pivoting::Gu] {
                let lu = gko_lu(&cg, piv).unwrap();
                let err = lu.reconstruct().sub(&dense).frobenius_norm();
                assert!(err <= 1e3 * n as f64 * f64::EPSILON * dense.frobenius_norm(), "n = {n}");
                for i in 0..n {
                    for j in 0..i {
                        assert!(lu.l[(i, j)].norm() <= 1.0);
                    }
                }
            }
        }
    }

    #[test]
    fn rectangular_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for (m, n) in [(6, 11), (11, 6), (20, 27)] {
            let g = DenseMatrix::from_fn(m, 3, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            let h = DenseMatrix::from_fn(3, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            let tg = ToeplitzGenerators::new(g, h, default_theta(m, n)).unwrap();
            let cg = toeplitz_to_cauchy(&tg);
            let lu = gko_lu(&cg, Pivoting::Gu).unwrap();
            let dense = cg.reconstruct();
            assert!(lu.reconstruct().sub(&dense).frobenius_norm() <= 1e-10 * dense.frobenius_norm());
        }
    }

    #[test]
    fn structured_solve_matches_gepp() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for n in [32usize, 64] {
            let tg = random_toeplitz_like(&mut rng, n, 2);
            // recover a dense Toeplitz-like A from its generators: solve the
            // displacement equation column by column is awkward, so go the
            // other way and compare in Cauchy coordinates.
            let cg = toeplitz_to_cauchy(&tg);
            let dense = cg.reconstruct();
            let b: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let lu = gko_lu(&cg, Pivoting::Gu).unwrap();
            let x = solve(&lu, &b).unwrap();
            let x_ref = dense_gepp_solve(&dense, &b).unwrap();
            let err: f64 = x
                .iter()
                .zip(&x_ref)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-9 * vec_norm(&x_ref), "n = {n}, err {err}");
            let res = dense.mul_vec(&x);
            let rn: f64 = res.iter().zip(&b).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            assert!(rn <= 1e-9 * vec_norm(&b));
        }
    }

    #[test]
    fn identity_like_solve() {
        let f = real(&[0.3, -0.2, 0.5, 0.1, 1.0]);
        let theta = default_theta(4, 4);
        let cg = toeplitz_to_cauchy(&generators_of_mult_matrix(&f, &real(&[2.0]), theta).unwrap());
        let lu = gko_lu(&cg, Pivoting::Partial).unwrap();
        let b = vec![c(1.0), c(-2.0), c(3.0), c(0.5)];
        let bhat = cg.forward(&b, Side::Row);
        let x = cg.backward(&solve(&lu, &bhat).unwrap(), Side::Column);
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi / 2.0).norm() < 1e-13);
        }
    }

    #[test]
    fn rank_examples() {
        let theta = default_theta(2, 2);
        let f = real(&[2.0, -3.0, 1.0]);
        let g = real(&[-3.0, 2.0, 1.0]);
        let cg = toeplitz_to_cauchy(&generators_of_mult_matrix(&f, &g, theta).unwrap());
        let lu = gko_lu(&cg, Pivoting::Gu).unwrap();
        let report = estimate_rank(&lu, DEFAULT_RANK_TOL);
        assert_eq!((report.numerical_rank, report.corank), (1, 1));
        assert_eq!(report.gap_location, Some(1));

        let basis = null_space(&lu, 1).unwrap();
        assert_eq!(basis.len(), 1);
        let v = cg.backward(&basis[0], Side::Column);
        // proportional to (-2, 1), i.e. s(x) = x - 2
        let ratio = v[0] / v[1];
        assert!((ratio - c(-2.0)).norm() < 1e-12);

        let f = real(&[0.3, -0.2, 0.5, 0.1, 1.0]);
        let cg = toeplitz_to_cauchy(&generators_of_mult_matrix(&f, &real(&[1.0]), Complex64::new(1.0, 0.0)).unwrap());
        // alpha = 0 with theta = 1: every Cauchy entry is zero... but M_g = I.
        // The identity is not Cauchy-like for coinciding nodes, so use theta = -1.
        assert_eq!(cg.alpha(), 0);
        let cg = toeplitz_to_cauchy(&generators_of_mult_matrix(&f, &real(&[1.0]), theta).unwrap());
        let report = estimate_rank(&gko_lu(&cg, Pivoting::Gu).unwrap(), DEFAULT_RANK_TOL);
        assert_eq!((report.numerical_rank, report.corank), (4, 0));

        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..10 {
            let f = random_monic(&mut rng, 10);
            let g = random_poly(&mut rng, 10);
            let cg = toeplitz_to_cauchy(&generators_of_mult_matrix(&f, &g, theta).unwrap());
            let report = estimate_rank(&gko_lu(&cg, Pivoting::Gu).unwrap(), DEFAULT_RANK_TOL);
            assert_eq!(report.corank, 0);
        }
    }

    #[test]
    fn rank_deficient_solve_errors() {
        let theta = default_theta(2, 2);
        let cg = toeplitz_to_cauchy(
            &generators_of_mult_matrix(&real(&[2.0, -3.0, 1.0]), &real(&[-3.0, 2.0, 1.0]), theta).unwrap(),
        );
        let lu = gko_lu(&cg, Pivoting::Partial).unwrap();
        assert!(matches!(
            solve(&lu, &[c(1.0), c(1.0)]),
            Err(Error::Singular { corank: 1, .. })
        ));
        assert!(matches!(null_space(&lu, 2), Err(Error::FullRank)));
    }

    #[test]
    fn zero_matrix_null_vector() {
        // g = f: M_g = 0
        let f = real(&[1.0, -2.0, 0.5, 1.0]);
        let theta = default_theta(3, 3);
        let cg = toeplitz_to_cauchy(&generators_of_mult_matrix(&f, &f, theta).unwrap());
        let lu = gko_lu(&cg, Pivoting::Gu).unwrap();
        let report = estimate_rank(&lu, DEFAULT_RANK_TOL);
        assert_eq!(report.corank, 3);
        let w = null_vector(&cg, 0).unwrap();
        assert!((vec_norm(&w) - 1.0).abs() < 1e-15);
        assert_eq!(vec_norm(&cg.reconstruct().mul_vec(&w)), 0.0);
    }

    #[test]
    fn planted_null_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let pts = crate::testkit::separated_points(&mut rng, 21, 1.0, 0.2);
        let f = Polynomial::from_roots(&pts[..12]);
        let mut groots = pts[..3].to_vec();
        groots.extend_from_slice(&pts[12..]);
        let g = Polynomial::from_roots(&groots);
        let theta = default_theta(12, 12);
        let cg = toeplitz_to_cauchy(&generators_of_mult_matrix(&f, &g, theta).unwrap());
        let lu = gko_lu(&cg, Pivoting::Gu).unwrap();
        let report = estimate_rank(&lu, DEFAULT_RANK_TOL);
        assert_eq!(report.numerical_rank, 9);
        let c_dense = cg.reconstruct();
        let m_dense = barnett_mult_matrix(&f, &g).unwrap();
        for w in null_space(&lu, 9).unwrap() {
            assert!(vec_norm(&c_dense.mul_vec(&w)) <= 1e-8 * c_dense.frobenius_norm() * vec_norm(&w));
            let v = cg.backward(&w, Side::Column);
            assert!(vec_norm(&m_dense.mul_vec(&v)) <= 1e-8 * m_dense.frobenius_norm() * vec_norm(&v));
        }
    }
}
