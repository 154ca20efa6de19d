//! The approximate GCD pipeline and the exact kernel-based GCD.
//!
//! For a monic `f` of degree `d`, the kernel of `M_g` consists of the
//! polynomials of degree below `d` that are multiples of `f / gcd(f, g)`.
//! The pipeline estimates the rank `k` of `M_g`, takes the monic kernel
//! polynomial of degree `k` as an initial cofactor `v`, and minimizes
//! `F(g, v) = ||M_g v||^2` over the coefficients of `g` and the free
//! coefficients of `v` with Gauss-Newton steps.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bezout::{barnett_mult_matrix, MultMatrix};
use crate::displacement::{
    default_theta, generators_from_mult, jacobian_generators, shift_mod, toeplitz_to_cauchy, Side,
};
use crate::error::{Error, Result};
use crate::gko::{self, estimate_rank, gko_lu, Pivoting, RankReport};
use crate::matrix::{self, vec_norm, DenseMatrix, PivotedQr};
use crate::poly::Polynomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative size below which the leading coefficient of an echelon kernel
/// polynomial is treated as vanishing.
const LEADING_FLOOR: f64 = 1e-8;

/// Relative step size below which the iteration is considered stalled.
const STAGNATION: f64 = 1e-14;

/// Consecutive residual increases tolerated before giving up.
const MAX_INCREASES: usize = 3;

/// Relative remainder of `f / v~` below which `v~` counts as a divisor.
const DIVISION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct AgcdConfig {
    /// Relative pivot threshold for the rank decision.
    pub rank_tol: f64,
    /// Stop once `||M_g v|| <= newton_tol * ||g||`.
    pub newton_tol: f64,
    pub max_iters: usize,
    /// Displacement parameter; `None` picks the default for each shape.
    pub theta: Option<Complex64>,
    /// Use the generator-based solvers; otherwise dense reference paths.
    pub use_structured_solver: bool,
    pub pivoting: Pivoting,
}

impl Default for AgcdConfig {
    fn default() -> Self {
        AgcdConfig {
            rank_tol: gko::DEFAULT_RANK_TOL,
            newton_tol: 1e-12,
            max_iters: 50,
            theta: None,
            use_structured_solver: true,
            pivoting: Pivoting::Gu,
        }
    }
}

impl AgcdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rank_tol > 0.0) || !(self.newton_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive (rank_tol = {}, newton_tol = {})",
                self.rank_tol, self.newton_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        if let Some(t) = self.theta {
            if ((t.norm() - 1.0).abs() > 1e-12) || !t.re.is_finite() {
                return Err(Error::InvalidArgument(format!("theta must have modulus one, got {t}")));
            }
        }
        Ok(())
    }

    fn theta_for(&self, m: usize, n: usize) -> Complex64 {
        self.theta.unwrap_or_else(|| default_theta(m, n))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AgcdDiagnostics {
    /// The residual test was met (as opposed to stalling or running out of
    /// iterations).
    pub converged: bool,
    /// The step size fell below the stagnation floor.
    pub stagnated: bool,
    /// The echelon kernel polynomial had a vanishing leading coefficient and
    /// the initial cofactor came from the fallback solve.
    pub repivoted: bool,
    /// How many times the rank estimate was lowered because the refined
    /// cofactor did not divide `f`.
    pub rank_lowered: usize,
    /// Number of Gauss-Newton steps that fell back to the dense solver.
    pub dense_fallbacks: usize,
    /// Largest imaginary part dropped when returning real output.
    pub imag_dropped: f64,
    /// Random combination coefficients used by [`agcd_multi`].
    pub combination: Vec<Complex64>,
    /// `||M_g v||^2` at the initial guess.
    pub initial_residual: f64,
    /// The initial cofactor.
    pub v_initial: Polynomial,
    /// `||M_g v||` after each accepted step.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct AgcdResult {
    pub g_tilde: Polynomial,
    /// Monic cofactor of degree `k`.
    pub v_tilde: Polynomial,
    /// Monic, of degree `deg f - k`.
    pub gcd: Polynomial,
    pub degree: usize,
    /// `||M_{g~} v~||^2`, recomputed by direct remainder.
    pub residual: f64,
    /// `||g - g~||`.
    pub distance: f64,
    pub iterations: usize,
    pub rank_report: RankReport,
    pub diagnostics: AgcdDiagnostics,
}

/// `||g v mod f||^2` through the Barnett columns of `M_g`.
pub fn functional(f: &Polynomial, g: &Polynomial, v: &Polynomial) -> Result<f64> {
    let mm = MultMatrix::new(f, g)?;
    let d = mm.dim();
    check_cofactor_degree(v, d)?;
    Ok(sq_norm(&mm.apply(&v.padded(d))))
}

/// `||g v mod f||^2` by polynomial multiplication and remainder.
pub fn functional_direct(f: &Polynomial, g: &Polynomial, v: &Polynomial) -> Result<f64> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    check_cofactor_degree(v, d)?;
    Ok(direct_residual(f, g, v)?.powi(2))
}

fn check_cofactor_degree(v: &Polynomial, d: usize) -> Result<()> {
    match v.degree() {
        Some(k) if k >= d => Err(Error::DimensionMismatch(format!(
            "cofactor degree {k} must be below {d}"
        ))),
        _ => Ok(()),
    }
}

fn direct_residual(f: &Polynomial, g: &Polynomial, v: &Polynomial) -> Result<f64> {
    Ok((g * v).rem(f)?.norm())
}

fn sq_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Jacobian of `(g, v) -> g v mod f` with respect to
/// `[g_0..g_m, v_0..v_{k-1}]`, where `m = deg g`, `k = deg v`, `v` monic.
pub fn dense_jacobian(f: &Polynomial, g: &Polynomial, v: &Polynomial) -> Result<DenseMatrix> {
    let m = g.degree().ok_or(Error::ZeroPolynomial)?;
    let k = v.degree().ok_or(Error::ZeroPolynomial)?;
    let monic = f.monic()?;
    jacobian_dense(&monic, &g.padded(m + 1), &v.padded(k + 1))
}

/// Columns `x^j v mod f` then `x^i g mod f`, both by the shift recurrence.
fn jacobian_dense(monic: &Polynomial, g: &[Complex64], v: &[Complex64]) -> Result<DenseMatrix> {
    let d = monic.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::DegreeTooSmall { degree: 0, min: 1 });
    }
    let fc = monic.coeffs();
    let k = v.len() - 1;
    let mut cols = Vec::with_capacity(g.len() + k);
    let mut col = Polynomial::new(v.to_vec()).rem(monic)?.padded(d);
    for _ in 0..g.len() {
        let next = shift_mod(fc, &col);
        cols.push(std::mem::replace(&mut col, next));
    }
    let mut col = Polynomial::new(g.to_vec()).rem(monic)?.padded(d);
    for _ in 0..k {
        let next = shift_mod(fc, &col);
        cols.push(std::mem::replace(&mut col, next));
    }
    Ok(DenseMatrix::from_columns(d, &cols))
}

/// Column echelon reduction of a kernel basis: eliminates rows `d-1`,
/// `d-2`, ... until one column is left; that column holds the kernel
/// polynomial of least degree. Returns it with its degree.
fn kernel_echelon(basis: &[Vec<Complex64>]) -> Option<(Vec<Complex64>, usize)> {
    let mut cols: Vec<Vec<Complex64>> = basis.to_vec();
    let d = cols.first()?.len();
    let mut row = d;
    while cols.len() > 1 && row > 0 {
        row -= 1;
        let (p, mag) = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c[row].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if mag == 0.0 {
            continue;
        }
        let pivot = cols.swap_remove(p);
        for c in cols.iter_mut() {
            let s = c[row] / pivot[row];
            for (ci, pi) in c.iter_mut().zip(&pivot) {
                *ci -= s * pi;
            }
            c[row] = ZERO;
        }
    }
    let s = cols.swap_remove(0);
    let top = s.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let deg = s.iter().rposition(|c| c.norm() > 1e-12 * top)?;
    Some((s, deg))
}

/// Exact GCD from the kernel of `M_g`: the kernel polynomial `s` of least
/// degree generates the annihilator of `g`, and `gcd(f, g) = f / s`.
///
/// `f` is assumed squarefree.
///
/// ```
/// use mgcd::{exact_gcd, Polynomial};
///
/// let f = Polynomial::from_real(&[2.0, -3.0, 1.0]); // (x - 1)(x - 2)
/// let g = Polynomial::from_real(&[-3.0, 2.0, 1.0]); // (x - 1)(x + 3)
/// let h = exact_gcd(&f, &g).unwrap();
/// assert!(h.distance(&Polynomial::from_real(&[-1.0, 1.0])) < 1e-12);
/// ```
pub fn exact_gcd(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let monic = f.monic()?;
    let d = monic.degree().unwrap_or(0);
    if d == 0 {
        return Ok(Polynomial::one());
    }
    if vanishes_modulo(&monic, g, 1e-10)? {
        return Ok(monic);
    }
    let m = barnett_mult_matrix(&monic, g)?;
    let basis = matrix::null_space(&m, 1e-10);
    if basis.is_empty() {
        return Ok(Polynomial::one());
    }
    let (s, deg) = match kernel_echelon(&basis) {
        Some(found) => found,
        // the whole space: g = 0 mod f
        None => return Ok(monic),
    };
    let s = Polynomial::new(s[..=deg].to_vec());
    let (q, _) = monic.divmod(&s)?;
    let gcd = q.monic()?;
    Ok(if monic.is_real() && g.is_real() {
        gcd.real_part().0
    } else {
        gcd
    })
}

/// Monic degree-`k` approximate kernel polynomial of `M_g` by least squares
/// on the leading `k` columns.
fn cofactor_by_least_squares(m: &DenseMatrix, k: usize) -> Vec<Complex64> {
    let d = m.rows();
    let a = DenseMatrix::from_fn(d, k, |i, j| m[(i, j)]);
    let rhs: Vec<Complex64> = (0..d).map(|i| -m[(i, k)]).collect();
    let mut v = matrix::min_norm_least_squares(&a, &rhs, matrix::default_rank_tol(d, k));
    v.push(ONE);
    v
}

/// Gauss-Newton minimization of `||M_g v||^2` from `(g0, v0)`.
///
/// `v0` must be monic of degree `k` with `1 <= k < deg f`. Only
/// `g_0..g_m` and `v_0..v_{k-1}` move.
pub fn gauss_newton_refine(f: &Polynomial, g0: &Polynomial, v0: &Polynomial, cfg: &AgcdConfig) -> Result<AgcdResult> {
    cfg.validate()?;
    let monic = f.monic()?;
    let d = monic.degree().unwrap_or(0);
    let k = v0.degree().ok_or(Error::ZeroPolynomial)?;
    if k == 0 || k >= d {
        return Err(Error::DimensionMismatch(format!(
            "cofactor degree {k} must lie in 1..{d}"
        )));
    }
    if (v0.coeff(k) - ONE).norm() > 1e-12 {
        return Err(Error::InvalidArgument("initial cofactor must be monic".into()));
    }
    let m = g0.degree().ok_or(Error::ZeroPolynomial)?;
    let real = monic.is_real() && g0.is_real() && v0.is_real();
    let gnorm = g0.norm();

    let mut g = g0.padded(m + 1);
    let mut v = v0.padded(k + 1);
    let mut diag = AgcdDiagnostics {
        v_initial: v0.clone(),
        ..Default::default()
    };
    let mut r = residual_vector(&monic, &g, &v)?;
    let mut res = vec_norm(&r);
    diag.initial_residual = res * res;
    diag.history.push(res);
    let mut best = (res, g.clone(), v.clone());
    let mut increases = 0;
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        if res <= cfg.newton_tol * gnorm {
            diag.converged = true;
            break;
        }
        let (mut y, fell_back) = newton_step(&monic, &g, &v, &r, cfg)?;
        if fell_back {
            diag.dense_fallbacks += 1;
        }
        if real {
            for c in y.iter_mut() {
                *c = Complex64::new(c.re, 0.0);
            }
        }
        let znorm = (sq_norm(&g) + sq_norm(&v[..k])).sqrt();
        for (gi, yi) in g.iter_mut().zip(&y) {
            *gi -= yi;
        }
        for (vi, yi) in v[..k].iter_mut().zip(&y[m + 1..]) {
            *vi -= yi;
        }
        iterations += 1;
        let prev = res;
        r = residual_vector(&monic, &g, &v)?;
        res = vec_norm(&r);
        diag.history.push(res);
        if !res.is_finite() {
            increases = MAX_INCREASES;
        } else if res < best.0 {
            best = (res, g.clone(), v.clone());
        }
        if !(res < prev) && res > cfg.newton_tol * gnorm {
            increases += 1;
            if increases >= MAX_INCREASES {
                return Err(Error::Diverged {
                    best_residual: best.0 * best.0,
                    best_g: Polynomial::new(best.1),
                    best_v: Polynomial::new(best.2),
                });
            }
        } else {
            increases = 0;
        }
        if vec_norm(&y) <= STAGNATION * znorm {
            diag.stagnated = true;
            break;
        }
    }
    if best.0 <= cfg.newton_tol * gnorm {
        diag.converged = true;
    }

    let (_, g_best, v_best) = best;
    let mut g_tilde = Polynomial::new(g_best);
    let mut v_tilde = Polynomial::new(v_best);
    if real {
        let (gr, gi) = g_tilde.real_part();
        let (vr, vi) = v_tilde.real_part();
        diag.imag_dropped = gi.max(vi);
        g_tilde = gr;
        v_tilde = vr;
    }
    let (q, _) = monic.divmod(&v_tilde)?;
    let gcd = q.monic()?;
    let residual = direct_residual(&monic, &g_tilde, &v_tilde)?.powi(2);
    Ok(AgcdResult {
        distance: g0.distance(&g_tilde),
        degree: d - k,
        g_tilde,
        v_tilde,
        gcd,
        residual,
        iterations,
        rank_report: RankReport::from_rank(k, d),
        diagnostics: diag,
    })
}

/// `g v mod f` through Barnett's formula.
fn residual_vector(monic: &Polynomial, g: &[Complex64], v: &[Complex64]) -> Result<Vec<Complex64>> {
    let mm = MultMatrix::new(monic, &Polynomial::new(g.to_vec()))?;
    let d = mm.dim();
    let mut x = v.to_vec();
    x.resize(d, ZERO);
    Ok(mm.apply(&x))
}

/// A solution of `J y = r`; the flag reports a dense fallback.
fn newton_step(
    monic: &Polynomial,
    g: &[Complex64],
    v: &[Complex64],
    r: &[Complex64],
    cfg: &AgcdConfig,
) -> Result<(Vec<Complex64>, bool)> {
    if cfg.use_structured_solver {
        if let Some(y) = structured_step(monic, g, v, r, cfg) {
            return Ok((y, false));
        }
    }
    dense_step(monic, g, v, r).map(|y| (y, cfg.use_structured_solver))
}

/// Basic solution through the GKO factorization of the Jacobian's
/// Cauchy-like form. Returns `None` whenever the structured path fails.
fn structured_step(
    monic: &Polynomial,
    g: &[Complex64],
    v: &[Complex64],
    r: &[Complex64],
    cfg: &AgcdConfig,
) -> Option<Vec<Complex64>> {
    let d = r.len();
    let n = g.len() + v.len() - 1;
    let tg = jacobian_generators(monic, g, v, g.len() - 1, cfg.theta_for(d, n)).ok()?;
    let cg = toeplitz_to_cauchy(&tg);
    let lu = gko_lu(&cg, cfg.pivoting).ok()?;
    let yhat = gko::solve_basic(&lu, &cg.forward(r, Side::Row)).ok()?;
    let y = cg.backward(&yhat, Side::Column);
    y.iter().all(|c| c.re.is_finite() && c.im.is_finite()).then_some(y)
}

/// Minimum-norm solution by complete orthogonal decomposition.
fn dense_step(monic: &Polynomial, g: &[Complex64], v: &[Complex64], r: &[Complex64]) -> Result<Vec<Complex64>> {
    let j = jacobian_dense(monic, g, v)?;
    let tol = matrix::default_rank_tol(j.rows(), j.cols());
    let rank = PivotedQr::new(&j.adjoint()).rank(tol);
    if rank < j.rows() {
        return Err(Error::JacobianRankCollapse { rank, rows: j.rows() });
    }
    Ok(matrix::min_norm_least_squares(&j, r, tol))
}

/// Rank of `M_g` from the pivots of a structured (or dense) LU.
/// `||g mod f|| <= tol ||g||`, i.e. `M_g` is zero at this tolerance. Pivots
/// of `M_g` alone cannot tell this apart from a well-scaled full-rank matrix.
fn vanishes_modulo(monic: &Polynomial, g: &Polynomial, tol: f64) -> Result<bool> {
    Ok(g.rem(monic)?.norm() <= tol * g.norm())
}

/// Numerical rank of the multiplication matrix of `g` modulo `f`, as used by
/// [`agcd`]: the rank is zero when `g mod f` is negligible next to `g`,
/// otherwise it is read off the pivots of the (structured or dense)
/// factorization.
///
/// ```
/// use mgcd::{mult_matrix_rank, AgcdConfig, Polynomial};
///
/// let f = Polynomial::from_real(&[2.0, -3.0, 1.0]);
/// let cfg = AgcdConfig::default();
/// assert_eq!(mult_matrix_rank(&f, &Polynomial::from_real(&[-3.0, 2.0, 1.0]), &cfg).unwrap().corank, 1);
/// assert_eq!(mult_matrix_rank(&f, &f, &cfg).unwrap().corank, 2);
/// ```
pub fn mult_matrix_rank(f: &Polynomial, g: &Polynomial, cfg: &AgcdConfig) -> Result<RankReport> {
    cfg.validate()?;
    let monic = f.monic()?;
    let mm = MultMatrix::new(&monic, g)?;
    Ok(rank_of_mult(&mm, &monic, g, cfg)?.0)
}

fn rank_of_mult(
    mm: &MultMatrix,
    monic: &Polynomial,
    g: &Polynomial,
    cfg: &AgcdConfig,
) -> Result<(RankReport, Vec<Vec<Complex64>>)> {
    let d = mm.dim();
    if vanishes_modulo(monic, g, cfg.rank_tol)? {
        let mut report = RankReport::from_rank(0, d);
        report.threshold_used = cfg.rank_tol * g.norm();
        let kernel = (0..d)
            .map(|t| (0..d).map(|i| if i == t { ONE } else { ZERO }).collect())
            .collect();
        return Ok((report, kernel));
    }
    if cfg.use_structured_solver && d >= 2 {
        let tg = generators_from_mult(mm, cfg.theta_for(d, d))?;
        let cg = toeplitz_to_cauchy(&tg);
        if let Ok(lu) = gko_lu(&cg, cfg.pivoting) {
            let report = estimate_rank(&lu, cfg.rank_tol);
            let kernel = if report.corank > 0 {
                gko::null_space(&lu, report.numerical_rank)?
                    .into_iter()
                    .map(|w| cg.backward(&w, Side::Column))
                    .collect()
            } else {
                Vec::new()
            };
            return Ok((report, kernel));
        }
    }
    // a 1x1 pivot is only small relative to g itself
    let reference = if d == 1 { g.norm() } else { 0.0 };
    dense_rank_of(&mm.dense(), cfg.rank_tol, reference)
}

/// Dense counterpart: pivots of a column-pivoted QR.
fn dense_rank_of(a: &DenseMatrix, tol: f64, reference: f64) -> Result<(RankReport, Vec<Vec<Complex64>>)> {
    let d = a.cols();
    let qr = PivotedQr::new(a);
    let pivots = qr.diag_abs();
    let top = pivots.first().copied().unwrap_or(0.0).max(reference);
    let rank = if top == 0.0 {
        0
    } else {
        pivots.iter().filter(|&&p| p > tol * top).count()
    };
    let report = RankReport {
        numerical_rank: rank,
        corank: d - rank,
        gap_location: None,
        threshold_used: tol * top,
        u_row_norms: Vec::new(),
        pivot_magnitudes: pivots,
    };
    let kernel = if rank < d {
        // the trailing right singular directions of the pivoted R
        null_space_at_rank(a, rank)
    } else {
        Vec::new()
    };
    Ok((report, kernel))
}

/// `d - rank` null vectors of `A` from the pivoted QR of `A`:
/// `[-R11^{-1} R12 e_t; e_t]`, permuted back.
fn null_space_at_rank(a: &DenseMatrix, rank: usize) -> Vec<Vec<Complex64>> {
    let d = a.cols();
    let qr = PivotedQr::new(a);
    let r = qr.r();
    let perm = qr.perm();
    (rank..d)
        .map(|t| {
            let mut x = vec![ZERO; d];
            for i in (0..rank).rev() {
                let mut s = -r[(i, t)];
                for j in i + 1..rank {
                    s -= r[(i, j)] * x[j];
                }
                x[i] = s / r[(i, i)];
            }
            x[t] = ONE;
            let mut out = vec![ZERO; d];
            for (j, &p) in perm.iter().enumerate() {
                out[p] = x[j];
            }
            out
        })
        .collect()
}

/// Approximate GCD of an exact `f` and a perturbed `g`.
///
/// ```
/// use mgcd::{agcd, AgcdConfig, Polynomial};
///
/// let f = Polynomial::from_real(&[2.0, -3.0, 1.0]);
/// let g = Polynomial::from_real(&[-3.0, 2.0, 1.0]);
/// let out = agcd(&f, &g, &AgcdConfig::default()).unwrap();
/// assert!(out.gcd.distance(&Polynomial::from_real(&[-1.0, 1.0])) < 1e-12);
/// assert_eq!(out.v_tilde.degree(), Some(1));
/// ```
pub fn agcd(f: &Polynomial, g: &Polynomial, cfg: &AgcdConfig) -> Result<AgcdResult> {
    cfg.validate()?;
    let monic = f.monic()?;
    let d = match monic.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegreeTooSmall { degree: 0, min: 1 }),
    };
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let real = monic.is_real() && g.is_real();
    let mm = MultMatrix::new(&monic, g)?;
    let (report, kernel) = rank_of_mult(&mm, &monic, g, cfg)?;
    let k = report.numerical_rank;

    if k == d {
        // coprime at this tolerance: v~ = f annihilates trivially
        return Ok(trivial_result(
            &monic,
            g,
            monic.clone(),
            Polynomial::one(),
            g.clone(),
            report,
        ));
    }
    if k == 0 {
        // g = 0 mod f up to tolerance: drop the remainder
        let g_tilde = g - &g.rem(&monic)?;
        return Ok(trivial_result(
            &monic,
            g,
            Polynomial::one(),
            monic.clone(),
            g_tilde,
            report,
        ));
    }

    let echelon = kernel_echelon(&kernel).filter(|(s, deg)| {
        let top = s.iter().map(|c| c.norm()).fold(0.0, f64::max);
        *deg == k && s[k].norm() > LEADING_FLOOR * top
    });
    let repivoted = echelon.is_none();
    let v0 = match echelon {
        Some((s, _)) => {
            let lead = s[k];
            s[..=k].iter().map(|c| c / lead).collect()
        }
        None => cofactor_by_least_squares(&mm.dense(), k),
    };
    let mut out = refine_from(&monic, g, v0, real, cfg)?;
    out.diagnostics.repivoted = repivoted;

    // an overestimated rank leaves a spurious factor in v~
    let mut lowered = 0;
    let mut j = k;
    while !divides(&out.v_tilde, &monic)? && j > 1 {
        j -= 1;
        lowered += 1;
        if let Ok(retry) = refine_from(&monic, g, cofactor_by_least_squares(&mm.dense(), j), real, cfg) {
            if divides(&retry.v_tilde, &monic)? {
                out = retry;
                out.diagnostics.repivoted = true;
                out.diagnostics.rank_lowered = lowered;
                break;
            }
        }
    }
    out.rank_report = report;
    Ok(out)
}

fn divides(v: &Polynomial, monic: &Polynomial) -> Result<bool> {
    Ok(monic.divmod(v)?.1.norm() <= DIVISION_TOL * monic.norm())
}

fn refine_from(
    monic: &Polynomial,
    g: &Polynomial,
    mut v0: Vec<Complex64>,
    real: bool,
    cfg: &AgcdConfig,
) -> Result<AgcdResult> {
    let k = v0.len() - 1;
    if real {
        for c in v0.iter_mut() {
            *c = Complex64::new(c.re, 0.0);
        }
    }
    let v0 = Polynomial::new(v0);
    if v0.degree() != Some(k) {
        let d = monic.degree().unwrap_or(0);
        return Err(Error::Singular { rank: k, corank: d - k });
    }
    gauss_newton_refine(monic, g, &v0, cfg)
}

fn trivial_result(
    monic: &Polynomial,
    g: &Polynomial,
    v_tilde: Polynomial,
    gcd: Polynomial,
    g_tilde: Polynomial,
    report: RankReport,
) -> AgcdResult {
    let residual = (&g_tilde * &v_tilde)
        .rem(monic)
        .map(|p| p.norm().powi(2))
        .unwrap_or(0.0);
    AgcdResult {
        distance: g.distance(&g_tilde),
        degree: gcd.degree().unwrap_or(0),
        diagnostics: AgcdDiagnostics {
            converged: true,
            initial_residual: residual,
            v_initial: v_tilde.clone(),
            ..Default::default()
        },
        g_tilde,
        v_tilde,
        gcd,
        residual,
        iterations: 0,
        rank_report: report,
    }
}

/// Approximate common factor of `f` and several perturbed polynomials via
/// a random combination `g = Σ c_i g_i` with `c_i` uniform in the unit disc.
pub fn agcd_multi(f: &Polynomial, gs: &[Polynomial], cfg: &AgcdConfig, seed: u64) -> Result<AgcdResult> {
    if gs.is_empty() {
        return Err(Error::InvalidArgument("need at least one polynomial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let combination: Vec<Complex64> = gs.iter().map(|_| unit_disc(&mut rng)).collect();
    let mut g = Polynomial::zero();
    for (gi, &c) in gs.iter().zip(&combination) {
        g = &g + &gi.scale(c);
    }
    let mut out = agcd(f, &g, cfg)?;
    out.diagnostics.combination = combination;
    Ok(out)
}

fn unit_disc(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 && z.norm() > 1e-3 {
            return z;
        }
    }
}
