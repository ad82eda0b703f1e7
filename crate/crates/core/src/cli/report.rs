//! JSON reports. Output depends only on the inputs and the seed.

use serde::Serialize;

use crate::boundopt::{BoundDiagnostics, BoundResult, OracleResult};
use crate::error::Result;
use crate::extremal::{ConditionReport, WeakConstraintReport};
use crate::matkit::ComplexMatrix;
use crate::states::{DensityMatrix, Mat3, Vec3};

pub const TOOL: &str = "ree";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&crate::matkit::C64) -> f64| {
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect()).collect()
        };
        MatrixJson {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateDigest {
    pub dims: [usize; 2],
    pub label: Option<String>,
    pub eigenvalues: Vec<f64>,
}

impl StateDigest {
    pub fn new(rho: &DensityMatrix, label: Option<String>) -> Result<Self> {
        Ok(StateDigest {
            dims: [rho.dims().0, rho.dims().1],
            label,
            eigenvalues: rho.eig()?.values,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report<R> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub input: StateDigest,
    pub results: R,
}

impl<R: Serialize> Report<R> {
    pub fn new(command: &'static str, seed: u64, input: StateDigest, results: R) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command,
            seed,
            input,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rotations {
    pub o_a: Mat3,
    pub o_b: Mat3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResults {
    pub value_nats: f64,
    pub value_bits: f64,
    pub tau_star: Vec3,
    pub sigma_star: MatrixJson,
    pub sigma_star_ppt_min_eigenvalue: f64,
    pub rotations: Rotations,
    pub diagnostics: BoundDiagnostics,
    pub conditions: Option<[ConditionReport; 2]>,
}

impl BoundResults {
    pub fn new(b: &BoundResult) -> Result<Self> {
        Ok(BoundResults {
            value_nats: b.value.nats,
            value_bits: b.value.bits,
            tau_star: b.tau_star,
            sigma_star: b.sigma_star.matrix().into(),
            sigma_star_ppt_min_eigenvalue: crate::measures::ppt_check(&b.sigma_star)?.min_eigenvalue,
            rotations: Rotations {
                o_a: b.rotations.0,
                o_b: b.rotations.1,
            },
            diagnostics: b.diagnostics.clone(),
            conditions: b.conditions.clone().map(|(a, c)| [a, c]),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResults {
    pub value_nats: f64,
    pub value_bits: f64,
    pub sigma_star: MatrixJson,
    pub sigma_star_ppt_min_eigenvalue: f64,
    pub starts: usize,
    pub best_start: usize,
    pub per_start_nats: Vec<f64>,
}

impl OracleResults {
    pub fn new(o: &OracleResult) -> Result<Self> {
        Ok(OracleResults {
            value_nats: o.value.nats,
            value_bits: o.value.bits,
            sigma_star: o.sigma_star.matrix().into(),
            sigma_star_ppt_min_eigenvalue: crate::measures::ppt_check(&o.sigma_star)?.min_eigenvalue,
            starts: o.starts,
            best_start: o.best_start,
            per_start_nats: o.per_start.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResults {
    pub sigma: StateDigest,
    pub relative_entropy_nats: f64,
    pub conditions: [ConditionReport; 2],
    pub category: &'static str,
    /// Present for two-qubit `rho` already in canonical form.
    pub weak_constraints: Option<WeakConstraintReport>,
}
