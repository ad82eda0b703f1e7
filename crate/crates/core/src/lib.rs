//! Relative entropy of entanglement toolkit.
//!
//! * [`matkit`]: dense complex matrices, Jacobi eigensolver, partial trace/transpose.
//! * [`states`]: density matrices, Pauli (Hilbert-Schmidt) form, canonical form, families.
//! * [`measures`]: entropies, relative entropy, concurrence, PPT test.
//! * [`extremal`]: stationarity conditions a closest separable state must satisfy.
//! * [`boundopt`]: the three-parameter upper bound and a brute-force closest-PPT search.
//! * [`cli`]: the `ree` command line front end.

pub mod error;
pub mod matkit;
pub mod states;
pub mod measures;
pub mod extremal;
pub mod boundopt;
pub mod cli;

pub use error::{Error, Result};
