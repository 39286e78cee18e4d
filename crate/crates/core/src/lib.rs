//! Exact polarization algebras of homogeneous polynomial maps.
//!
//! A homogeneous map `H: k^n → k^n` of degree `m` corresponds to a symmetric
//! `m`-ary algebra on `k^n` whose restitution `<X, ..., X>` is `H`. This
//! crate builds that correspondence over the rationals and the structural
//! tests that go with it: Keller/Engel, derived and upper series,
//! triangulation, the formal inverse of `X - H`, and the one-generated free
//! algebra.
//!
//! Everything here is `no_std` and only needs `alloc`.
#![no_std]
extern crate alloc;

pub mod algebra;
pub mod error;
pub mod matrix;
pub mod poly;
pub mod polarize;
pub mod series;

pub use error::{Error, Result};
pub use matrix::{is_keller, jacobian, rref, PolyMatrix, QMatrix, Rref};
pub use poly::{int, rat, Homogeneity, Monomial, PolyMap, Polynomial, Rational};
pub use polarize::{polarize, polarize_with_arity, StructTensor, SymAlgebra};

