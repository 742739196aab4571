//! Nonsingular M-matrix certification and matrix-polytope search.
//!
//! The crate is organised around five pieces:
//!
//! - [`linalg`]: dense square matrices over `f64` or exact rationals, with
//!   determinants, leading principal minors, Schur complements, eigenvalues
//!   and spectral radius.
//! - [`cert`]: five independent characterizations of nonsingular M-matrices
//!   and a consensus report.
//! - [`reduction`]: the stable-set to M-matrix-polytope reduction, its
//!   closed-form determinant and the nonnegative splitting `B = I - M`.
//! - [`oracle`]: brute-force maximum independent sets and a multi-start
//!   Motzkin-Straus solver used as ground truth.
//! - [`search`]: feasibility search over convex combinations (general,
//!   symmetric/convex, spectral radius, Hurwitz).
//!
//! The [`cli`] module backs the `mpoly` binary.

pub mod cert;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod reduction;
pub mod search;

pub use cert::{certify, CertificationReport, Condition, Consensus};
pub use error::{Error, Result};
pub use linalg::{AnyMatrix, Matrix, Rational, Scalar, Status, Tolerance, Verdict};
pub use reduction::{Graph, ReductionInstance, SimplexPoint};
