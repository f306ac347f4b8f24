//! Exact Siegel theta coefficients for Niemeier lattices and quaternary
//! forms of discriminant 11², and the finite congruence checks built on them.
//!
//! The exact linear algebra in [`linalg`] is generic over the integer ring;
//! the aliases below fix the types used throughout the rest of the crate.

pub mod congruence;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod linalg;
pub mod shortvec;
pub mod theta;

pub use error::{Error, Result};

/// Arbitrary-precision integer used for coefficients and determinants.
pub type Int = num_bigint::BigInt;
/// Exact rationals over [`Int`].
pub type Rational = num_rational::BigRational;
/// Machine integers for the fixed-size fast paths.
pub type SmallInt = i64;
/// Rationals over machine integers.
pub type SmallRational = num_rational::Ratio<i64>;
