//! Guide chapters compiled as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/multiplication-matrix.md")]
pub mod multiplication_matrix {}

#[doc = include_str!("../../../book/src/displacement.md")]
pub mod displacement {}

#[doc = include_str!("../../../book/src/gko.md")]
pub mod gko {}

#[doc = include_str!("../../../book/src/agcd.md")]
pub mod agcd {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
