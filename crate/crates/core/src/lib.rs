//! Combinatorial quantization toolkit: exact graph algebras, mapping class
//! group representations and coend operators for finite-dimensional
//! factorizable ribbon Hopf algebras presented by structure tensors.
//!
//! Everything is computed over an exact cyclotomic field Q(zeta_N); all
//! algebraic identities are verified as exact tensor or matrix equalities.

pub mod coend;
pub mod error;
pub mod fixture;
pub mod graph;
pub mod groups;
pub mod heisenberg;
pub mod hopf;
pub mod linalg;
pub mod mcg;
pub mod report;
pub mod ribbon;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
