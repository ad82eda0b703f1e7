//! The three-parameter upper bound for two qubits, an independent
//! closest-PPT search over all density matrices, and parameter sweeps.

mod bound;
mod oracle;
pub mod quasi_newton;
pub mod simplex;
mod sweep;

pub use bound::{upper_bound_ree, BoundDiagnostics, BoundOptions, BoundResult, FEASIBILITY_TOL, LOG_FLOOR};
pub use oracle::{closest_ppt_oracle, closest_ppt_oracle_with, OracleOptions, OracleResult};
pub use sweep::{sweep, SweepFamily, SweepRow};
