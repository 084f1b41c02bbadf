//! Numeric bound for the computations that live on the real line.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

pub trait Scalar: Num + PartialOrd + Clone + FromPrimitive + Debug {}

impl<T> Scalar for T where T: Num + PartialOrd + Clone + FromPrimitive + Debug {}

/// `2^-e` in `T`, built by repeated halving so it stays exact for rationals.
pub fn half_pow<T: Scalar>(e: u32) -> T {
    let two = T::one() + T::one();
    (0..e).fold(T::one(), |acc, _| acc / two.clone())
}
