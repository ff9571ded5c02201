//! Exact symbolic engine for quantum transport matrices on planar directed
//! networks with q-commuting face weights: the quantum torus, network
//! measurements, triangle transports, R-matrix identities, amalgamation,
//! classical cluster mutations with the braid action, and the log-canonical
//! Poisson bracket.

pub mod classical;
pub mod error;
pub mod matrix;
pub mod anq;
pub mod network;
pub mod qtorus;
pub mod rat;
pub mod sln;
pub mod tensor;

pub use error::{QgError, Result};
