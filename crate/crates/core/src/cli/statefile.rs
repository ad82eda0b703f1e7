//! JSON state files.
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "label": "pure(p=0.5)",
//!   "matrix_re": [[0.5, 0.0, 0.0, 0.5], ...],
//!   "matrix_im": [[0.0, 0.0, 0.0, 0.0], ...]
//! }
//! ```
//!
//! Files written by [`write_state`] parse back to the same bits, and writing
//! the parsed state again reproduces the file byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matkit::{ComplexMatrix, C64};
use crate::states::DensityMatrix;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: (usize, usize),
    #[serde(default)]
    pub label: Option<String>,
    pub matrix_re: Vec<Vec<f64>>,
    pub matrix_im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix, label: Option<String>) -> Self {
        let m = rho.matrix();
        let n = m.rows();
        StateFile {
            dims: rho.dims(),
            label,
            matrix_re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect(),
            matrix_im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }

    fn check_shape(&self, field: &str, rows: &[Vec<f64>]) -> Result<()> {
        let n = self.dims.0 * self.dims.1;
        if rows.len() != n {
            return Err(Error::input(format!(
                "{field}: {} rows, expected {n} for dims [{}, {}]",
                rows.len(),
                self.dims.0,
                self.dims.1
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("{field}: row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::input(format!("{field}: entry [{i}][{j}] is not finite")));
            }
        }
        Ok(())
    }

    /// Validates shape and the density-matrix invariants.
    pub fn to_state(&self) -> Result<DensityMatrix> {
        if self.dims.0 == 0 || self.dims.1 == 0 {
            return Err(Error::input("dims: subsystem dimensions must be positive"));
        }
        self.check_shape("matrix_re", &self.matrix_re)?;
        self.check_shape("matrix_im", &self.matrix_im)?;
        let n = self.matrix_re.len();
        let m = ComplexMatrix::from_fn(n, n, |i, j| C64::new(self.matrix_re[i][j], self.matrix_im[i][j]));
        DensityMatrix::new(m, self.dims)
    }

    pub fn to_json(&self) -> String {
        let num = |x: f64| serde_json::to_string(&x).expect("finite");
        let block = |rows: &[Vec<f64>]| {
            let lines: Vec<String> = rows
                .iter()
                .map(|r| format!("    [{}]", r.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")))
                .collect();
            format!("[\n{}\n  ]", lines.join(",\n"))
        };
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"dims\": [{}, {}],", self.dims.0, self.dims.1);
        if let Some(label) = &self.label {
            let _ = writeln!(out, "  \"label\": {},", serde_json::to_string(label).expect("string"));
        }
        let _ = writeln!(out, "  \"matrix_re\": {},", block(&self.matrix_re));
        let _ = writeln!(out, "  \"matrix_im\": {}", block(&self.matrix_im));
        out.push_str("}\n");
        out
    }
}

pub fn parse_state_str(text: &str) -> Result<(DensityMatrix, Option<String>)> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok((file.to_state()?, file.label))
}

pub fn parse_state_file(path: &Path) -> Result<(DensityMatrix, Option<String>)> {
    let text = std::fs::read_to_string(path)?;
    parse_state_str(&text)
}

pub fn write_state(path: &Path, rho: &DensityMatrix, label: Option<String>) -> Result<()> {
    std::fs::write(path, StateFile::from_state(rho, label).to_json())?;
    Ok(())
}
