//! Kirkwood-Dirac (KD) quasiprobability distributions for finite-dimensional
//! quantum states.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerics:
//!
//! - [`state`]: kets, density operators, orthonormal bases, observables and
//!   eigenspace partitions.
//! - [`random`]: seeded Haar sampling of kets, unitaries and bases.
//! - [`kd`]: standard, extended and coarse-grained KD distributions,
//!   marginals, state reconstruction and postselection.
//! - [`classicality`]: support-count certificates of nonclassicality and
//!   direct classification of distributions.
//! - [`measures`]: total nonclassicality, negativity and nonreality, and the
//!   dimension bound on total nonclassicality.
//! - [`mubs`]: mutually unbiased bases and bound-saturating instances.
//! - [`witness`]: Hermitian witnesses for real and imaginary parts of KD
//!   entries, with closed-form eigenpairs.
//! - [`channels`]: depolarization and convex mixing.
//! - [`oracle`]: brute-force evaluation paths and randomized falsification
//!   scans.
//!
//! Axis convention: axis 0 of a distribution is the basis whose projector
//! acts first on the state, so for two bases `q[i][j] = <f_j|a_i><a_i|rho|f_j>`
//! with `i` indexing `A` and `j` indexing `F`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod channels;
pub mod classicality;
mod error;
pub mod fixtures;
pub mod kd;
pub mod measures;
pub mod mubs;
pub mod oracle;
pub mod random;
pub mod state;
pub mod tol;
pub mod witness;

pub use error::{Error, Result};
pub use kd::{Axis, KdDistribution, PostselectionOutcome};
pub use state::{
    inner_product, observable_matrix, projector, DensityOperator, EigenspacePartition, Ket, Observable,
    OrthonormalBasis,
};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
