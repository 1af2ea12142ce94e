//! Exact combinatorics and unit-ball geometry of the higher-order Schreier
//! spaces `X^p_{S_n}` (including the ladder limit `S_omega`).
//!
//! Everything here is exact: set arithmetic over `u32` indices, scalar
//! arithmetic over arbitrary-precision rationals, and — where p-th roots are
//! unavoidable — a small closed class of radical expressions with decidable
//! sign. No floating point is used anywhere, so every decision procedure
//! (membership, maximality, extremality, dual norms, polyhedrality margins)
//! returns an answer that is correct, not approximately correct.
//!
//! The crate is `no_std`-compatible (it needs `alloc`); the `std` feature
//! (on by default) only adds `std::error::Error` impls and is what the
//! companion CLI crate builds against.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod families;
pub mod scalar;

pub mod vectors;

pub mod extremality;
pub mod lambda;

pub mod dual;
pub mod isometry;

pub mod oracle;
pub mod rng;

mod simplex;

pub use dual::{DualRep, Functional, MarginReport};
pub use error::{Error, Result};
pub use extremality::ExtremeReport;
pub use families::{IndexSet, OrderIndex};
pub use isometry::{
    CertCheck, IsometryWitness, LemmaCheck, ProofBlock, ProofCert, SignedPerm, WitnessSearch,
};
pub use lambda::{AveragedVector, DecompCert, DecompPiece};
pub use scalar::{PScalar, Radical, Sign};
pub use vectors::{GapReport, NormWitness, RadicalVector, SparseVector};
