//! Computational harmonic analysis for SU(3): an exact Gelfand-Tsetlin
//! calculus, tensor product decompositions, phase operators, the overlap
//! coefficients between the two Gelfand-Tsetlin bases, the infinitesimal
//! split-Cartan action of the unitary principal series, and finite-level
//! diagnostics for the normalized BGG operators.
//!
//! Exact data (patterns, norms, generator matrices in the unnormalized basis)
//! uses arbitrary-precision rationals. Everything that needs square roots is
//! derived from it in double precision.

pub mod bgg;
pub mod error;
pub mod exec;
pub mod gt;
pub mod harmonic;
pub mod linop;
pub mod overlaps;
pub mod principal;
pub mod rep;
pub mod report;
pub mod tensor;

pub use error::{Error, Result};
pub use gt::{GTPattern, Generator, Irrep, IrrepLabel, Weight};
pub use linop::{BasisId, LinOp};
