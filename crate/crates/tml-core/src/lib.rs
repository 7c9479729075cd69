//! Core library of the toroidal moment lab: prime-field contexts, Dirichlet
//! characters, torus exponential sums, toric-congruence counting, central
//! L-values, and second moments of L(½,χ^a)L(½,χ^b) along the character
//! group of F_q^×.

pub mod chars;
pub mod error;
pub mod expsum;
pub mod fft;
pub mod field;
pub mod lfun;
pub mod moment;
pub mod registry;
pub mod toric;

pub use error::{Error, Result};
