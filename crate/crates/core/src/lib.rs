//! Kazhdan–Lusztig ideals, pipe dreams, subword complexes and Schubert
//! multiplicities, computed exactly.

pub mod cache;
pub mod cli;
pub mod complex;
pub mod error;
pub mod groebner;
pub mod ideal;
pub mod ktheory;
pub mod mult;
pub mod nilhecke;
pub mod perm;
pub mod pipedreams;
pub mod poly;
pub mod sampler;

pub use error::{KlError, Result};
pub use perm::{Cell, Permutation};
