//! Exact constructions for the multispecies inhomogeneous t-PushTASEP: the
//! Markov generator, the `S^{k,1}(z)` vertex weights, commuting transfer
//! matrices, and suites that check the identities relating them.
//!
//! All arithmetic is exact. Algorithms are generic over [`scalar::Field`];
//! the aliases below fix the arbitrary-precision instantiation used by the
//! CLI and the verification suites.

pub mod combinatorics;
pub mod error;
pub mod export;
pub mod linalg;
pub mod poly;
pub mod processes;
pub mod rmatrix;
pub mod scalar;
pub mod sparse;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Rational;

/// Polynomial in the spectral parameter with rational coefficients.
pub type PolyZ = poly::Poly<Rational>;
/// Dense rational vector, e.g. a stationary state on a sector basis.
pub type RationalVector = Vec<Rational>;
pub type RationalMatrix = sparse::SparseMatrix<Rational>;
pub type PolyMatrix = sparse::SparseMatrix<PolyZ>;
