//! Bézout matrices and the multiplication matrix of `g` in `C[x]/(f)`.
//!
//! The Bézoutian of `f` and `g` is the bivariate polynomial
//! `(f(x) g(y) - f(y) g(x)) / (x - y)`; its coefficient matrix `B_{f,g}` is
//! symmetric. Writing `M_g` for the matrix of `h -> g h mod f` in the basis
//! `1, x, ..., x^{d-1}`, the two are linked by Barnett's factorization
//!
//! ```text
//! B_{g,f} = M_g B_{1,f}        so        M_g = B_{g,f} B_{1,f}^{-1}
//! ```
//!
//! which lets us produce any row or column of `M_g` with one product by
//! `B_{g,f}` and one triangular Hankel solve, without dividing by `f`.
//!
//! Note the argument order: the Bézout matrix is antisymmetric in its
//! arguments, and it is `B_{g,f}` (not `B_{f,g}`) that gives `+M_g`.
//!
//! When `f` has roots outside the unit disc the entries of `B_{1,f}^{-1}`
//! grow like a power of the largest root, and the product with `B_{g,f}`
//! cancels that growth. [`MultMatrix`] therefore keeps `B_{g,f}` and the
//! Hankel solve in double-double arithmetic and rounds only the result.

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::poly::Polynomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex double-double.
type Dd = Complex<TwoFloat>;

fn dd(c: Complex64) -> Dd {
    Complex::new(TwoFloat::from(c.re), TwoFloat::from(c.im))
}

fn round(c: Dd) -> Complex64 {
    Complex64::new(f64::from(c.re), f64::from(c.im))
}

fn dd_zero() -> Dd {
    dd(ZERO)
}

/// Coefficient matrix of the Bézoutian of `f` and `g`, size `max(deg f, deg g)`.
///
/// Entries follow from comparing coefficients in
/// `(x - y) Θ(x, y) = f(x) g(y) - f(y) g(x)`, which gives
/// `θ[i][j] = θ[i+1][j-1] + (f[i+1] g[j] - f[j] g[i+1])`.
pub fn bezout_matrix(f: &Polynomial, g: &Polynomial) -> Result<DenseMatrix> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.degree().unwrap_or(0).max(g.degree().unwrap_or(0));
    let cross = |p: usize, q: usize| f.coeff(p) * g.coeff(q) - f.coeff(q) * g.coeff(p);
    let mut b = DenseMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let prev = if j > 0 && i + 1 < n { b[(i + 1, j - 1)] } else { ZERO };
            b[(i, j)] = prev + cross(i + 1, j);
        }
    }
    Ok(b)
}

/// `B_{1,f}`: triangular Hankel, entry `(i, j) = -f[i+j+1]`.
pub fn hankel_bezout(f: &Polynomial) -> Result<DenseMatrix> {
    let d = degree_at_least(f, 1)?;
    Ok(DenseMatrix::from_fn(d, d, |i, j| -f.coeff(i + j + 1)))
}

/// Frobenius companion matrix of `f` (multiplication by `x` modulo `f`).
pub fn frobenius(f: &Polynomial) -> Result<DenseMatrix> {
    let d = degree_at_least(f, 1)?;
    let lead = f.coeff(d);
    let mut m = DenseMatrix::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            m[(i + 1, i)] = Complex64::new(1.0, 0.0);
        }
        m[(i, d - 1)] = -f.coeff(i) / lead;
    }
    Ok(m)
}

fn degree_at_least(p: &Polynomial, min: usize) -> Result<usize> {
    match p.degree() {
        Some(d) if d >= min => Ok(d),
        other => Err(Error::DegreeTooSmall {
            degree: other.unwrap_or(0),
            min,
        }),
    }
}

/// Multiplication by `g` in `C[x]/(f)`, represented through Barnett's
/// factorization. Holds `B_{g,f}` and the monic modulus; rows, columns and
/// products with `M_g` cost `O(d^2)` each.
#[derive(Clone, Debug)]
pub struct MultMatrix {
    /// Monic modulus coefficients, length `d + 1`.
    modulus: Vec<Complex64>,
    /// Leading coefficient of the caller's `f` (divided out).
    lead: Complex64,
    bezout: DenseMatrix,
    /// `B_{g,f}` in double-double, row-major.
    exact: Vec<Dd>,
}

impl MultMatrix {
    /// Requires `deg f >= 1`. A non-monic `f` is normalized; `g` of degree
    /// above `deg f` is first reduced modulo `f`.
    pub fn new(f: &Polynomial, g: &Polynomial) -> Result<Self> {
        let d = degree_at_least(f, 1)?;
        let lead = f.coeff(d);
        let fm = f.monic()?;
        let g = match g.degree() {
            Some(m) if m > d => g.rem(&fm)?,
            _ => g.clone(),
        };
        let exact = bezout_dd(&g.padded(d + 1), fm.coeffs());
        let bezout = DenseMatrix::from_row_major(d, d, exact.iter().map(|&c| round(c)).collect())?;
        Ok(MultMatrix {
            modulus: fm.into_coeffs(),
            lead,
            bezout,
            exact,
        })
    }

    pub fn dim(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Leading coefficient removed from the modulus during normalization.
    pub fn modulus_scale(&self) -> Complex64 {
        self.lead
    }

    pub fn modulus(&self) -> &[Complex64] {
        &self.modulus
    }

    /// `B_{g,f}`.
    pub fn bezout(&self) -> &DenseMatrix {
        &self.bezout
    }

    /// Solves `B_{1,f} x = b` by substitution along antidiagonals.
    pub fn hankel_solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        hankel_solve(&self.modulus, b)
    }

    /// `M_g x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        assert_eq!(x.len(), d, "vector length mismatch");
        let y = hankel_solve_dd(&self.modulus, x.iter().map(|&c| dd(c)).collect());
        (0..d)
            .map(|i| {
                let row = &self.exact[i * d..(i + 1) * d];
                round(row.iter().zip(&y).fold(dd_zero(), |acc, (&b, &yj)| acc + b * yj))
            })
            .collect()
    }

    /// Column `j` of `M_g`, i.e. the coefficients of `x^j g mod f`.
    pub fn column(&self, j: usize) -> Result<Vec<Complex64>> {
        let d = self.dim();
        if j >= d {
            return Err(Error::IndexOutOfRange { index: j, dim: d });
        }
        let mut e = vec![ZERO; d];
        e[j] = Complex64::new(1.0, 0.0);
        Ok(self.apply(&e))
    }

    /// Row `j` of `M_g`, using the symmetry of both Bézout factors.
    pub fn row(&self, j: usize) -> Result<Vec<Complex64>> {
        let d = self.dim();
        if j >= d {
            return Err(Error::IndexOutOfRange { index: j, dim: d });
        }
        let col: Vec<Dd> = (0..d).map(|i| self.exact[i * d + j]).collect();
        Ok(hankel_solve_dd(&self.modulus, col).into_iter().map(round).collect())
    }

    /// Assembles `M_g` column by column.
    pub fn dense(&self) -> DenseMatrix {
        let d = self.dim();
        let cols: Vec<Vec<Complex64>> = (0..d).map(|j| self.column(j).expect("index in range")).collect();
        DenseMatrix::from_columns(d, &cols)
    }
}

/// Solves `B_{1,f} x = b` for monic `f` given as ascending coefficients.
///
/// Row `d-1-t` of the system involves only `x_0..x_t`, so the unknowns are
/// recovered in order from the last row up.
pub(crate) fn hankel_solve(monic: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    assert_eq!(b.len(), d, "rhs length mismatch");
    let lead = monic[d];
    let mut x = vec![ZERO; d];
    for t in 0..d {
        let mut s = b[d - 1 - t];
        for j in 0..t {
            s += monic[d - t + j] * x[j];
        }
        x[t] = -s / lead;
    }
    x
}

/// `B_{g,f}` for `deg g <= d = deg f` by the same recurrence as
/// [`bezout_matrix`]; products of doubles are exact in double-double.
fn bezout_dd(g: &[Complex64], f: &[Complex64]) -> Vec<Dd> {
    let d = f.len() - 1;
    let coeff = |p: &[Complex64], i: usize| p.get(i).copied().unwrap_or(ZERO);
    let cross = |p: usize, q: usize| dd(coeff(g, p)) * dd(coeff(f, q)) - dd(coeff(g, q)) * dd(coeff(f, p));
    let mut b = vec![dd_zero(); d * d];
    for j in 0..d {
        for i in 0..d {
            let prev = if j > 0 && i + 1 < d {
                b[(i + 1) * d + j - 1]
            } else {
                dd_zero()
            };
            b[i * d + j] = prev + cross(i + 1, j);
        }
    }
    b
}

/// [`hankel_solve`] in double-double for a monic modulus (`monic[d] = 1`).
fn hankel_solve_dd(monic: &[Complex64], b: Vec<Dd>) -> Vec<Dd> {
    let d = monic.len() - 1;
    debug_assert_eq!(monic[d], Complex64::new(1.0, 0.0));
    let coeffs: Vec<Dd> = monic.iter().map(|&c| dd(c)).collect();
    let mut x = vec![dd_zero(); d];
    for t in 0..d {
        let mut s = b[d - 1 - t];
        for j in 0..t {
            s += coeffs[d - t + j] * x[j];
        }
        x[t] = -s;
    }
    x
}

/// Matrix of `h -> g h mod f` via Barnett's formula.
pub fn barnett_mult_matrix(f: &Polynomial, g: &Polynomial) -> Result<DenseMatrix> {
    Ok(MultMatrix::new(f, g)?.dense())
}

/// Column `j` of `M_g` without forming the matrix.
pub fn mult_matrix_column(f: &Polynomial, g: &Polynomial, j: usize) -> Result<Vec<Complex64>> {
    MultMatrix::new(f, g)?.column(j)
}

/// Row `j` of `M_g` without forming the matrix.
pub fn mult_matrix_row(f: &Polynomial, g: &Polynomial, j: usize) -> Result<Vec<Complex64>> {
    MultMatrix::new(f, g)?.row(j)
}
