//! Experiments on the discrete exponentiation map `x ↦ gˣ mod p`.
//!
//! The map is a permutation of `{1, …, p−1}` whenever `g` is a primitive root.
//! This crate builds it explicitly and measures it in two ways:
//!
//! * as a permutation ([`elgamal`], [`permstat`]): cycle counts and `k`-cycle
//!   counts compared against the exact statistics of uniform random permutations;
//! * as a point set ([`sidon`], [`discrepancy`]): the graph `{(gˣ, x)}` inside
//!   `ℤₚ × ℤ_{p−1}` is a Sidon set, its nontrivial character sums are small, and
//!   it is equidistributed in boxes.
//!
//! Everything is exact or double precision at desk scale (`p` up to roughly 10⁵);
//! arithmetic is on `u64` with `u128` intermediate products.

pub mod discrepancy;
pub mod elgamal;
mod error;
pub mod numth;
pub mod permstat;
pub mod rng;
pub mod sidon;
pub mod svg;

pub use error::{Error, Result};
pub use numth::GroupParams;
