//! Numerical geometry and harmonic analysis on the Siegel upper half space
//! `H_n`, the Siegel-Jacobi space `H_{n,m} = H_n x C^(m,n)` and the
//! Siegel-Jacobi disk `D_{n,m}`.
//!
//! The crate provides, at desk scale (`1 <= n <= 3`, `1 <= m <= 2`):
//!
//! * validated domain types (points of the three spaces, symplectic and
//!   Jacobi group elements) over a small dense-matrix kernel,
//! * the transitive group actions and the Jacobi multiplication law,
//! * the partial Cayley transform between disk and space,
//! * the invariant metric tensors, the invariant volume element, metric
//!   pullback and a generic Laplace-Beltrami operator,
//! * a truncated-Taylor jet engine (order <= 4) powering exact evaluation
//!   of the closed-form invariant differential operators and the
//!   operator-invariance harness,
//! * the unitary-invariant polynomial families on the tangent space,
//! * Minkowski and Siegel reduction with fundamental-domain membership,
//!   and the closed volume formula for the Siegel modular variety,
//! * K-Bessel quadrature, the eigenfunction catalog on `H_1 x C`,
//!   truncated Eisenstein sums and the torus spectral basis.
//!
//! Everything is pure: values are immutable after construction and all
//! operations are deterministic functions, safe to share across threads.
//! The crate is `no_std` (with `alloc`); IO, JSON formats and the command
//! line front end live in the companion `sjspace-cli` crate.

#![cfg_attr(not(test), no_std)]
// tensor contractions are written with explicit indices on purpose
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod action;
pub mod bessel;
pub mod cayley;
pub mod chart;
pub mod config;
pub mod diffops;
pub mod domain;
pub mod error;
pub mod fields;
pub mod invariants;
pub mod jet;
pub mod matrix;
pub mod metric;
pub mod num;
pub mod reduction;
pub mod rng;
pub mod special;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use matrix::Mat;
pub use num::{Cx, C64};
