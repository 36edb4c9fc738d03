//! Exact-arithmetic engine for filtered chain complexes and their spectral
//! sequences.
//!
//! All homological data is computed over Z or F_p with arbitrary-precision
//! integers; there is no floating point anywhere. Filtered complexes live on
//! a finite filtration window with explicit profiles describing the levels
//! beyond it, which makes limits, colimits and page stabilization honest
//! finite computations.

pub mod ring;
pub mod matrix;
pub mod group;
pub mod complex;
pub mod filtration;
pub mod sseq;
pub mod taumod;
pub mod taubss;
pub mod omnibus;
pub mod cosimplicial;

pub use ring::Ring;
pub use matrix::Matrix;
