//! Brute-force oracles and reproducible instance generators.
//!
//! Everything here is deliberately slow and simple: multiplication matrices
//! come from repeated polynomial division, linear systems from dense
//! elimination, Jacobians from finite differences. The structured code
//! paths are validated against these.
//!
//! Random instances use [`ChaCha8Rng`] seeded with a `u64`, so a given
//! `(arguments, seed)` pair always yields the same instance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{self, DenseMatrix, PivotedQr};
use crate::poly::Polynomial;

/// Uniform sample in `[-1, 1]`.
fn sym(rng: &mut impl Rng) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

/// Random polynomial of exact degree `deg`, real and imaginary parts in `[-1, 1]`.
pub fn random_poly(rng: &mut impl Rng, deg: usize) -> Polynomial {
    let mut coeffs: Vec<Complex64> = (0..=deg).map(|_| Complex64::new(sym(rng), sym(rng))).collect();
    // keep the leading coefficient away from zero so the degree is exact
    coeffs[deg] = Complex64::from_polar(rng.gen_range(0.5..=1.0), rng.gen_range(0.0..std::f64::consts::TAU));
    Polynomial::new(coeffs)
}

/// Random monic polynomial with complex lower coefficients in `[-1, 1]^2`.
pub fn random_monic(rng: &mut impl Rng, deg: usize) -> Polynomial {
    let mut coeffs: Vec<Complex64> = (0..deg).map(|_| Complex64::new(sym(rng), sym(rng))).collect();
    coeffs.push(Complex64::new(1.0, 0.0));
    Polynomial::new(coeffs)
}

/// Random monic polynomial with real lower coefficients uniform in `[-1, 1]`.
pub fn random_real_monic(rng: &mut impl Rng, deg: usize) -> Polynomial {
    let mut coeffs: Vec<f64> = (0..deg).map(|_| sym(rng)).collect();
    coeffs.push(1.0);
    Polynomial::from_real(&coeffs)
}

/// `count` points in the disc of the given radius, pairwise at least `sep` apart.
///
/// Rejection sampling; panics if the packing is hopeless.
pub fn separated_points(rng: &mut impl Rng, count: usize, radius: f64, sep: f64) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while pts.len() < count {
        attempts += 1;
        assert!(
            attempts < 1_000_000,
            "cannot place {count} points with separation {sep}"
        );
        let z = Complex64::new(sym(rng), sym(rng)) * radius;
        if z.norm() > radius {
            continue;
        }
        if pts.iter().all(|p| (p - z).norm() >= sep) {
            pts.push(z);
        }
    }
    pts
}

/// `M_g` built column by column from `x^j g mod f` using polynomial division.
pub fn brute_force_mult_matrix(f: &Polynomial, g: &Polynomial) -> Result<DenseMatrix> {
    let d = f
        .degree()
        .filter(|&d| d >= 1)
        .ok_or(Error::DegreeTooSmall { degree: 0, min: 1 })?;
    let cols: Vec<Vec<Complex64>> = (0..d)
        .map(|j| {
            let p = &Polynomial::monomial(j) * g;
            p.rem(f).map(|r| r.padded(d))
        })
        .collect::<Result<_>>()?;
    Ok(DenseMatrix::from_columns(d, &cols))
}

/// Dense GEPP, `O(n^3)`.
pub fn dense_gepp_solve(a: &DenseMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    matrix::gepp_solve(a, b)
}

/// Minimum-norm least-squares solution by orthogonal triangularization.
pub fn dense_least_squares(a: &DenseMatrix, b: &[Complex64]) -> Vec<Complex64> {
    matrix::min_norm_least_squares(a, b, matrix::default_rank_tol(a.rows(), a.cols()))
}

/// Numerical rank from the `R` diagonal of a column-pivoted QR.
pub fn dense_rank(a: &DenseMatrix, rel_tol: f64) -> usize {
    PivotedQr::new(a).rank(rel_tol)
}

/// Dense square `A` with `Z^1 A - A Z^θ = G H` (`θ != 1`), built column
/// by column from the shift recurrence: `A[:, j+1] = Z A[:, j] - R[:, j]`
/// and `(1 - θ) A[:, 0] = Σ_t Z^{n-1-t} R[:, t]`.
pub fn toeplitz_like_dense(g: &DenseMatrix, h: &DenseMatrix, theta: Complex64) -> Result<DenseMatrix> {
    let n = g.rows();
    if h.cols() != n || g.cols() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "generators {}x{} and {}x{} do not form a square matrix",
            g.rows(),
            g.cols(),
            h.rows(),
            h.cols()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    if (one - theta).norm() < 1e-12 {
        return Err(Error::InvalidArgument("theta = 1 makes the operator singular".into()));
    }
    let r = g.matmul(h)?;
    // cyclic down-shift
    let z = |x: &[Complex64]| -> Vec<Complex64> { (0..n).map(|i| x[(i + n - 1) % n]).collect() };
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    for t in 0..n {
        s = z(&s);
        for (si, ri) in s.iter_mut().zip(r.column(t)) {
            *si += ri;
        }
    }
    let mut col: Vec<Complex64> = s.iter().map(|c| c / (one - theta)).collect();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let next: Vec<Complex64> = z(&col).iter().zip(r.column(j)).map(|(a, b)| a - b).collect();
        cols.push(std::mem::replace(&mut col, next));
    }
    Ok(DenseMatrix::from_columns(n, &cols))
}

/// Classical Euclidean algorithm on monic-normalized remainders. A remainder
/// counts as zero once its norm drops below `tol` times the norm of the
/// current divisor.
pub fn euclid_gcd(f: &Polynomial, g: &Polynomial, tol: f64) -> Polynomial {
    let (mut a, mut b) = match (f.monic(), g.monic()) {
        (Ok(a), Ok(b)) => {
            if a.degree() >= b.degree() {
                (a, b)
            } else {
                (b, a)
            }
        }
        (Ok(a), Err(_)) | (Err(_), Ok(a)) => return a,
        (Err(_), Err(_)) => return Polynomial::zero(),
    };
    loop {
        let r = a.rem(&b).expect("b is nonzero");
        if r.is_zero() || r.norm() <= tol * b.norm() {
            return b;
        }
        a = b;
        b = r.monic().expect("r is nonzero");
        if b.degree() == Some(0) {
            return Polynomial::one();
        }
    }
}

/// A synthetic pair with a planted common factor.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub f: Polynomial,
    pub g_exact: Polynomial,
    pub g_observed: Polynomial,
    /// The planted common factor.
    pub common: Polynomial,
    /// Exact cofactor of `f`, i.e. `f / common`.
    pub cofactor: Polynomial,
    pub gcd_degree: usize,
    pub eta: f64,
    pub seed: u64,
}

impl PlantedInstance {
    /// 2-norm and max-norm of the perturbation added to `g`.
    pub fn perturbation_norms(&self) -> (f64, f64) {
        let n = self.g_exact.coeffs().len().max(self.g_observed.coeffs().len());
        let diffs: Vec<f64> = (0..n)
            .map(|i| (self.g_observed.coeff(i) - self.g_exact.coeff(i)).norm())
            .collect();
        let two = diffs.iter().map(|x| x * x).sum::<f64>().sqrt();
        let inf = diffs.iter().copied().fold(0.0, f64::max);
        (two, inf)
    }
}

/// `f = c h`, `g = w h` with `c`, `w`, `h` random real monic factors
/// (coefficients uniform in `[-1, 1]`), then every coefficient of `g`
/// (leading one included) is perturbed by a uniform draw from `[-eta, eta]`.
pub fn plant_instance(n: usize, m: usize, gcd_degree: usize, eta: f64, seed: u64) -> Result<PlantedInstance> {
    if gcd_degree > n.min(m) || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "gcd degree {gcd_degree} incompatible with degrees ({n}, {m})"
        )));
    }
    if !(eta >= 0.0) {
        return Err(Error::InvalidArgument(format!("eta must be nonnegative, got {eta}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_real_monic(&mut rng, gcd_degree);
    let c = random_real_monic(&mut rng, n - gcd_degree);
    let w = random_real_monic(&mut rng, m - gcd_degree);
    let f = &c * &h;
    let g_exact = &w * &h;
    let noisy: Vec<f64> = g_exact
        .padded(m + 1)
        .iter()
        .map(|z| z.re + eta * sym(&mut rng))
        .collect();
    Ok(PlantedInstance {
        f,
        g_observed: Polynomial::from_real(&noisy),
        g_exact,
        common: h,
        cofactor: c,
        gcd_degree,
        eta,
        seed,
    })
}

/// Planted instance built from roots: `f` has `n` roots, `g` shares
/// `gcd_degree` of them and has `m - gcd_degree` others, all pairwise at
/// least `sep` apart inside the unit disc. No perturbation.
pub fn plant_separated(n: usize, m: usize, gcd_degree: usize, sep: f64, seed: u64) -> Result<PlantedInstance> {
    if gcd_degree > n.min(m) || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "gcd degree {gcd_degree} incompatible with degrees ({n}, {m})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = separated_points(&mut rng, n + m - gcd_degree, 1.0, sep);
    let common = Polynomial::from_roots(&pts[..gcd_degree]);
    let cofactor = Polynomial::from_roots(&pts[gcd_degree..n]);
    let f = &common * &cofactor;
    let g_exact = &common * &Polynomial::from_roots(&pts[n..]);
    Ok(PlantedInstance {
        f,
        g_observed: g_exact.clone(),
        g_exact,
        common,
        cofactor,
        gcd_degree,
        eta: 0.0,
        seed,
    })
}

/// The residual map `(g, v) -> coefficients of g v mod f` over the free
/// coordinates `[g_0..g_m, v_0..v_{k-1}]` (`v_k = 1` fixed).
fn residual_map(f: &Polynomial, g: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let d = f.degree().expect("nonzero modulus");
    let p = &Polynomial::new(g.to_vec()) * &Polynomial::new(v.to_vec());
    p.rem(f).expect("nonzero modulus").padded(d)
}

/// Dense Jacobian of the residual map by brute-force remainders:
/// column `j < m+1` is `x^j v mod f`, column `m+1+i` is `x^i g mod f`.
pub fn brute_force_jacobian(f: &Polynomial, g: &Polynomial, v: &Polynomial) -> Result<DenseMatrix> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let m = g.degree().ok_or(Error::ZeroPolynomial)?;
    let k = v.degree().ok_or(Error::ZeroPolynomial)?;
    let mut cols = Vec::with_capacity(m + 1 + k);
    for j in 0..=m {
        cols.push((&Polynomial::monomial(j) * v).rem(f)?.padded(d));
    }
    for i in 0..k {
        cols.push((&Polynomial::monomial(i) * g).rem(f)?.padded(d));
    }
    Ok(DenseMatrix::from_columns(d, &cols))
}

/// Central differences of the residual map in each of the `m + k + 1` free
/// coordinates. `m` and `k` are the lengths of `g` and `v` minus one, read
/// from the coefficient vectors so zero inputs are allowed.
pub fn finite_difference_jacobian(f: &Polynomial, g: &[Complex64], v: &[Complex64], step: f64) -> DenseMatrix {
    assert!(step > 0.0, "step must be positive");
    assert!(!v.is_empty(), "v needs at least its fixed leading coordinate");
    let d = f.degree().expect("nonzero modulus");
    let k = v.len() - 1;
    let mut cols = Vec::with_capacity(g.len() + k);
    let h = Complex64::new(step, 0.0);
    for j in 0..g.len() + k {
        let (mut gp, mut gm, mut vp, mut vm) = (g.to_vec(), g.to_vec(), v.to_vec(), v.to_vec());
        if j < g.len() {
            gp[j] += h;
            gm[j] -= h;
        } else {
            vp[j - g.len()] += h;
            vm[j - g.len()] -= h;
        }
        let rp = residual_map(f, &gp, &vp);
        let rm = residual_map(f, &gm, &vm);
        cols.push(rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * step)).collect());
    }
    DenseMatrix::from_columns(d, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(cs: &[f64]) -> Polynomial {
        Polynomial::from_real(cs)
    }

    #[test]
    fn brute_force_examples() {
        let m = brute_force_mult_matrix(&real(&[-1.0, 0.0, 1.0]), &real(&[0.0, 1.0])).unwrap();
        assert_eq!(m, DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let m = brute_force_mult_matrix(&real(&[3.0, 1.0, 0.5, 1.0]), &real(&[1.0])).unwrap();
        assert_eq!(m, DenseMatrix::identity(3));
    }

    #[test]
    fn euclid_examples() {
        let f = real(&[2.0, -3.0, 1.0]);
        let g = real(&[-3.0, 2.0, 1.0]);
        let e = euclid_gcd(&f, &g, 1e-10);
        assert!(e.distance(&real(&[-1.0, 1.0])) < 1e-12);
        assert_eq!(
            euclid_gcd(&real(&[1.0, 1.0]), &real(&[-1.0, 1.0]), 1e-10),
            Polynomial::one()
        );
        let f = real(&[2.0, 0.0, 4.0]);
        assert_eq!(euclid_gcd(&f, &f, 1e-10), f.monic().unwrap());
    }

    #[test]
    fn toeplitz_like_oracle_satisfies_displacement_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 9;
        let g = DenseMatrix::from_fn(n, 2, |_, _| Complex64::new(sym(&mut rng), sym(&mut rng)));
        let h = DenseMatrix::from_fn(2, n, |_, _| Complex64::new(sym(&mut rng), sym(&mut rng)));
        let theta = Complex64::new(-1.0, 0.0);
        let a = toeplitz_like_dense(&g, &h, theta).unwrap();
        let r = g.matmul(&h).unwrap();
        let disp = crate::displacement::displaced(&a, theta);
        assert!(disp.sub(&r).frobenius_norm() <= 1e-13 * r.frobenius_norm());
        assert!(toeplitz_like_dense(&g, &h, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn planted_instances() {
        let a = plant_instance(8, 7, 3, 1e-5, 42).unwrap();
        let b = plant_instance(8, 7, 3, 1e-5, 42).unwrap();
        assert_eq!(a.g_observed, b.g_observed);
        assert_eq!(a.f, b.f);
        assert_eq!(a.f.degree(), Some(8));
        assert_eq!(a.g_exact.degree(), Some(7));
        let (_, inf) = a.perturbation_norms();
        assert!(inf <= 1e-5 && inf > 0.0);
        let clean = plant_instance(8, 7, 3, 0.0, 42).unwrap();
        assert_eq!(clean.g_observed, clean.g_exact);
        assert!(plant_instance(3, 2, 4, 0.0, 1).is_err());
        let coprime = plant_instance(6, 6, 0, 0.0, 3).unwrap();
        assert_eq!(euclid_gcd(&coprime.f, &coprime.g_exact, 1e-10), Polynomial::one());
        let sep = plant_separated(10, 9, 4, 0.2, 5).unwrap();
        let e = euclid_gcd(&sep.f, &sep.g_exact, 1e-9);
        assert!(e.distance(&sep.common) < 1e-8);
    }

    #[test]
    fn least_squares_oracle_examples() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let a = DenseMatrix::from_real_rows(&[&[1.0, 0.0]]);
        let x = dense_least_squares(&a, &[c(1.0)]);
        assert!((x[0] - c(1.0)).norm() < 1e-15 && x[1].norm() < 1e-15);
        assert_eq!(
            dense_least_squares(&DenseMatrix::zeros(2, 2), &[c(1.0), c(2.0)]),
            vec![c(0.0); 2]
        );
    }

    #[test]
    fn finite_differences_of_linear_block_are_exact() {
        let f = real(&[0.5, -1.0, 0.25, 2.0, 1.0]);
        let g = real(&[1.0, -0.5, 0.75]);
        let v = real(&[0.2, -0.3, 1.0]);
        let fd = finite_difference_jacobian(&f, g.coeffs(), v.coeffs(), 1e-6);
        let exact = brute_force_jacobian(&f, &g, &v).unwrap();
        assert!(fd.sub(&exact).frobenius_norm() <= 1e-8 * exact.frobenius_norm());
        let z = vec![Complex64::new(0.0, 0.0); 3];
        let fd0 = finite_difference_jacobian(&f, &z, &z, 1e-6);
        // d/dv of g v vanishes at g = 0 and d/dg of g v at v = 0 as well
        assert!(fd0.max_abs() < 1e-12);
    }
}
