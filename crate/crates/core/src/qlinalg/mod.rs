//! Dense complex linear algebra over small finite bases.
//!
//! Composite spaces use one fixed row-major convention: the joint index of
//! `(i_a, i_b)` in `a ⊗ b` is `i_a * dim_b + i_b`. The data register is always
//! the major factor and the program register the minor one.

mod ket;
mod operator;
mod su2;
mod svd;

pub use ket::Ket;
pub use operator::Operator;
pub use su2::{su2_exp, su2_log, u1_rotation, Su2Log};
pub(crate) use su2::sinc;
pub use svd::singular_values;

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

/// Normalization tolerance for kets flagged as states.
pub const TOL_NORM: f64 = 1e-10;

/// Relative singular-value threshold below which an operator is treated as singular.
pub const TOL_SINGULAR: f64 = 1e-9;

/// Shorthand for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };
