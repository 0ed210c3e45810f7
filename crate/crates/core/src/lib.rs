//! Rank-metric decoding toolkit: arithmetic in `F_{q^m}`, linearized
//! polynomials, Gabidulin codes with an error and column-erasure decoder, a
//! randomized decoder that guesses parts of the error row space to decode
//! beyond the unique decoding radius, and exact evaluation of the associated
//! success probabilities and work factors.

pub mod analysis;
pub mod channel;
pub mod error;
pub mod ffield;
pub mod gabidulin;
pub mod instance;
pub mod linpoly;
pub mod randdec;

pub use error::{Error, Result};
