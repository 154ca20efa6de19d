//! Univariate polynomials with complex coefficients in the monomial basis.
//!
//! Coefficients are stored in ascending order: `coeffs()[i]` multiplies
//! `x^i`. Every constructor canonicalizes its input by dropping trailing
//! coefficients whose magnitude is at most [`TRIM_TOL`] times the largest
//! coefficient magnitude, so the last stored coefficient is always the
//! leading one. The zero polynomial has no coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative magnitude below which trailing coefficients are dropped.
pub const TRIM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a canonical polynomial from ascending coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        trim_trailing(&mut coeffs);
        Polynomial { coeffs }
    }

    /// Embeds real ascending coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Builds the monic polynomial `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Degree, or `None` for the zero polynomial (degree -1 by convention).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every coefficient has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Euclidean division: returns `(q, r)` with `self = b q + r`, `deg r < deg b`.
    pub fn divmod(&self, b: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead = b.coeffs[db];
        let Some(da) = self.degree() else {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        };
        if da < db {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); da - db + 1];
        for i in (0..=da - db).rev() {
            let q = rem[i + db] / lead;
            quot[i] = q;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[i + j] -= q * bj;
            }
        }
        rem.truncate(db);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Remainder of the division by `b`.
    pub fn rem(&self, b: &Polynomial) -> Result<Polynomial> {
        self.divmod(b).map(|(_, r)| r)
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Result<Polynomial> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        let mut coeffs: Vec<_> = self.coeffs.iter().map(|&c| c / lead).collect();
        if let Some(last) = coeffs.last_mut() {
            *last = Complex64::new(1.0, 0.0);
        }
        Ok(Polynomial { coeffs })
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Euclidean norm of the coefficient difference, shorter vector zero-padded.
    pub fn distance(&self, other: &Polynomial) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|i| (self.coeff(i) - other.coeff(i)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Drops imaginary parts; returns the polynomial and the largest dropped magnitude.
    pub fn real_part(&self) -> (Polynomial, f64) {
        let dropped = self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        let p = Polynomial::new(self.coeffs.iter().map(|c| Complex64::new(c.re, 0.0)).collect());
        (p, dropped)
    }

    /// Coefficients padded with zeros (or truncated) to length `n`.
    pub fn padded(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|i| self.coeff(i)).collect()
    }

    /// Renders the text format: one `re im` line per coefficient, ascending.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.coeffs {
            out.push_str(&format!("{:.14e} {:.14e}\n", c.re, c.im));
        }
        out
    }

    /// Parses the text format. Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Polynomial> {
        let mut coeffs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: idx + 1,
                msg: format!("{msg}: {raw:?}"),
            };
            let mut parts = line.split_whitespace();
            let (Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err("expected two fields `re im`"));
            };
            let re: f64 = re.parse().map_err(|_| err("bad real part"))?;
            let im: f64 = im.parse().map_err(|_| err("bad imaginary part"))?;
            coeffs.push(Complex64::new(re, im));
        }
        Ok(Polynomial::new(coeffs))
    }
}

fn trim_trailing(coeffs: &mut Vec<Complex64>) {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 || !max.is_finite() {
        if max == 0.0 {
            coeffs.clear();
        }
        return;
    }
    let cutoff = TRIM_TOL * max;
    while coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
        coeffs.pop();
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Polynomial::from_text(s)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match i {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn real(cs: &[f64]) -> Polynomial {
        Polynomial::from_real(cs)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(real(&[-1.0, 0.0, 1.0]).eval(c(2.0)), c(3.0));
        assert_eq!(Polynomial::zero().eval(c(5.0)), c(0.0));
        assert_eq!(real(&[2.0, -3.0, 1.0]).eval(c(1.0)), c(0.0));
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = real(&[-1.0, 0.0, 1.0]).divmod(&real(&[-1.0, 1.0])).unwrap();
        assert_eq!(q, real(&[1.0, 1.0]));
        assert!(r.is_zero());

        let (q, r) = real(&[0.0, 1.0]).divmod(&real(&[-1.0, 0.0, 1.0])).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, real(&[0.0, 1.0]));

        // x^3 = x (x^2 - 1) + x
        let (q, r) = Polynomial::monomial(3).divmod(&real(&[-1.0, 0.0, 1.0])).unwrap();
        assert_eq!(q, real(&[0.0, 1.0]));
        assert_eq!(r, real(&[0.0, 1.0]));
    }

    #[test]
    fn divmod_by_zero_fails() {
        assert!(matches!(
            real(&[1.0]).divmod(&Polynomial::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn monic_examples() {
        assert_eq!(real(&[-2.0, 0.0, 2.0]).monic().unwrap(), real(&[-1.0, 0.0, 1.0]));
        assert_eq!(real(&[3.0, 1.0]).monic().unwrap(), real(&[3.0, 1.0]));
        assert_eq!(real(&[3.0]).monic().unwrap(), real(&[1.0]));
        assert!(Polynomial::zero().monic().is_err());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&real(&[1.0, 1.0]) * &real(&[-1.0, 1.0]), real(&[-1.0, 0.0, 1.0]));
        let p = real(&[1.0, 2.0, 3.0]);
        assert!((&p + &(-&p)).is_zero());
        assert_eq!(real(&[-1.0, 0.0, 1.0]).scale(c(2.0)), real(&[-2.0, 0.0, 2.0]));
    }

    #[test]
    fn distance_examples() {
        let p = real(&[1.0, 2.0]);
        assert_eq!(p.distance(&p), 0.0);
        assert_eq!(real(&[0.0, 1.0]).distance(&Polynomial::zero()), 1.0);
        assert_eq!(real(&[3.0, 4.0]).distance(&Polynomial::zero()), 5.0);
    }

    #[test]
    fn canonical_trimming() {
        let p = Polynomial::new(vec![c(1.0), c(2.0), c(1e-14), c(0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Polynomial::new(vec![c(0.0), c(0.0)]).degree(), None);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let p = Polynomial::new(vec![Complex64::new(1.5, -2.0), c(0.1), c(-3.0)]);
        assert_eq!(Polynomial::from_text(&p.to_text()).unwrap(), p);
        let text = "# header\n\n1 0\n  2 0.5\n";
        let q: Polynomial = text.parse().unwrap();
        assert_eq!(q.coeffs(), &[c(1.0), Complex64::new(2.0, 0.5)]);
        match Polynomial::from_text("1 0\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Polynomial::from_text("1 0 3\n").is_err());
    }

    #[test]
    fn from_roots_matches_product() {
        let p = Polynomial::from_roots(&[c(1.0), c(2.0)]);
        assert_eq!(p, real(&[2.0, -3.0, 1.0]));
    }

    fn unit_disc() -> impl Strategy<Value = Complex64> {
        (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(unit_disc(), 1..=max_deg + 1).prop_map(Polynomial::new)
    }

    proptest! {
        #[test]
        fn divmod_round_trip(a in poly(30), b in poly(30)) {
            prop_assume!(!b.is_zero() && !a.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            let back = &(&b * &q) + &r;
            // backward-error scale: b*q and r can both dwarf ||a||
            prop_assert!(back.distance(&a) <= 1e-12 * (a.norm() + b.norm() * q.norm() + r.norm()));
            if let Some(dr) = r.degree() {
                prop_assert!(dr < b.degree().unwrap());
            }
        }

        #[test]
        fn monic_is_idempotent(p in poly(20)) {
            prop_assume!(!p.is_zero());
            let m = p.monic().unwrap();
            prop_assert_eq!(m.monic().unwrap(), m);
        }

        #[test]
        fn eval_is_linear(p in poly(20), q in poly(20), x in unit_disc()) {
            let lhs = (&p + &q).eval(x);
            let rhs = p.eval(x) + q.eval(x);
            let scale = p.eval(x).norm() + q.eval(x).norm() + 1.0;
            prop_assert!((lhs - rhs).norm() <= 1e-13 * scale);
        }
    }
}
