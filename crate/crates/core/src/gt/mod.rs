//! Exact Gelfand-Tsetlin calculus for gl(3).

mod action;
mod cache;
mod irrep;
mod label;
mod norm;
mod pattern;

pub use action::{act_on_pattern, Generator};
pub use cache::{load_irrep, save_irrep, IrrepCache, CACHE_VERSION};
pub use irrep::{adjoint, normalize, normalize_dense, Irrep};
pub use label::{IrrepLabel, Weight, ALPHA1, ALPHA2, RHO};
pub use norm::{factorial, norm_sq};
pub use pattern::{enumerate_patterns, weight_multiplicities, weight_multiplicity, weight_space_patterns, GTPattern};
