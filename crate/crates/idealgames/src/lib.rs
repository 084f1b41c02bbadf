//! Gradings, games and reductions for ideals on countable sets, at finite resolution.

pub mod clopen;
pub mod error;
pub mod exact;
pub mod game;
pub mod ground;
pub mod hypergraph;
pub mod ideals;
pub mod katetov;
pub mod scalar;
pub mod strategies;
pub mod tree;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rationals, used for the `RATIONALS_01` ground set.
pub type Rational = num_rational::Ratio<i64>;
/// Floating point instantiation of the generic real-line routines.
pub type Real = f64;
