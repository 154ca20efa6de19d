//! Approximate GCD of an exact polynomial `f` and a perturbed polynomial `g`.
//!
//! The multiplication matrix `M_g` of `g` in `C[x]/(f)` is built from
//! Bézout matrices (Barnett's formula). Its kernel has dimension
//! `deg gcd(f, g)` and is spanned by multiples of the cofactor `f / gcd`.
//! Because `M_g` has displacement rank at most two, its rank and kernel can
//! be computed in quadratic time by Gaussian elimination on generators
//! after a Fourier transform to Cauchy-like form. A Gauss-Newton iteration
//! then moves `g` to a nearby polynomial with an exact common factor.
//!
//! ```
//! use mgcd::{agcd, AgcdConfig, Polynomial};
//!
//! // f = (x - 1)(x - 2)(x + 3), g = (x - 1)(x - 2)(x - 5) + noise
//! let f = Polynomial::from_real(&[6.0, -7.0, 0.0, 1.0]);
//! let g = Polynomial::from_real(&[-10.0 + 1e-7, 17.0, -8.0, 1.0]);
//! let result = agcd(&f, &g, &AgcdConfig::default()).unwrap();
//! assert_eq!(result.gcd.degree(), Some(2));
//! assert!(result.residual < 1e-10);
//! ```

// `!(x > 0.0)` also rejects NaN; index loops mirror the triangular solves
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod agcd;
pub mod bezout;
pub mod cli;
pub mod displacement;
pub mod error;
pub mod gko;
pub mod matrix;
pub mod poly;
pub mod testkit;

pub use num_complex::Complex64;

pub use agcd::{
    agcd, agcd_multi, dense_jacobian, exact_gcd, functional, gauss_newton_refine, mult_matrix_rank, AgcdConfig,
    AgcdDiagnostics, AgcdResult,
};
pub use bezout::{barnett_mult_matrix, bezout_matrix, hankel_bezout, MultMatrix};
pub use displacement::{
    generators_of_jacobian, generators_of_mult_matrix, toeplitz_to_cauchy, CauchyGenerators, Side, ToeplitzGenerators,
};
pub use error::{Error, Result};
pub use gko::{estimate_rank, gko_lu, null_space, null_vector, solve, Pivoting, RankReport, StructuredLU};
pub use matrix::DenseMatrix;
pub use poly::Polynomial;
