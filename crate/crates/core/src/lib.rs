//! Quaternionic linear algebra, the Sp(2)Sp(1)-orbit structure of the real
//! Grassmannians `Gr_k(H^2)`, and the invariant valuations on `H^2`.
//!
//! The crate is organised bottom-up:
//!
//! * [`quat`]: quaternions, the hermitian form `K` on `H^2`, Sp(1) rotations.
//! * [`hherm`]: hyperhermitian matrices and their Moore spectral data.
//! * [`orbit`]: classification of `k`-planes into orbit invariants `[λ]`.
//! * [`invariants`]: the invariant functions `f_{k,i}` and Laplace eigenfunctions.
//! * [`spectral`]: orbit volumes and finite-difference Laplacian checks.
//! * [`cosine`]: Siegel Γ, cosine-transform multipliers, Monte Carlo transforms.
//! * [`valuation`]: Crofton construction of the invariant valuation basis.

#![allow(clippy::needless_range_loop)]

pub mod cosine;
pub mod error;
pub mod exact;
pub mod hherm;
pub mod invariants;
pub mod linalg;
pub mod mc;
pub mod orbit;
pub mod quat;
pub mod spectral;
pub mod valuation;

pub use error::{Error, Result};
