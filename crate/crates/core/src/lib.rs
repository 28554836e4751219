//! Direct scattering transform and exact soliton synthesis for the "bad"
//! Boussinesq equation `u_tt = u_xx + (u^2)_xx + u_xxxx`.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] holds the special functions `l_j`, `z_j`, the Lax matrices,
//!   the symmetry matrices and the region geometry of the spectral plane.
//! * [`direct`] maps sampled initial data to eigenfunctions, scattering
//!   matrices, reflection coefficients, soliton poles and residue constants.
//! * [`jump`] assembles the jump matrices of the Riemann–Hilbert problem.
//! * [`soliton`] synthesises one-solitons, breathers and N-pole solutions.
//! * [`verify`] provides independent residual checks and the round trip.
//! * [`io`] defines the file formats shared with the command-line tool.

// `!(a > b)` is used deliberately so that NaN fails the comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod direct;
pub mod error;
pub mod io;
pub mod jump;
pub mod linalg;
pub mod soliton;
pub mod spectral;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64 as C64;

/// 3×3 complex matrix.
pub type M3 = nalgebra::Matrix3<C64>;
/// Complex 3-vector.
pub type V3 = nalgebra::Vector3<C64>;

pub use direct::{InitialData, ScatteringData};
pub use soliton::{Grid, SolitonSpec, SolutionField};
pub use spectral::{classify, SpectralPoint};
