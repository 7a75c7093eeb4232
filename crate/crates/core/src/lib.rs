//! Hurwitz quaternions and the metacommutation permutation.
//!
//! For an odd prime `p` and a Hurwitz prime `ξ` of norm `q ≠ p`, rewriting
//! `πξ = ξ′π′` permutes the `p + 1` left-associate classes of primes above
//! `p`. This crate computes that permutation two independent ways, analyses
//! its cycle structure, predicts the cycle length from cyclotomic
//! polynomials over 𝔽_p, and constructs primes `ξ` with prescribed behaviour.

pub mod arith;
pub mod classes;
pub mod cycles;
pub mod error;
pub mod fixed;
pub mod fp;
pub mod hurwitz;
pub mod metacommute;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use hurwitz::{HurwitzInt, UNITS};
