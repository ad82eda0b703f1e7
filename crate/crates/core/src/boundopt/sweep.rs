use rayon::prelude::*;

use super::bound::{upper_bound_ree, BoundOptions};
use super::oracle::{closest_ppt_oracle_with, OracleOptions};
use crate::error::{Error, Result};
use crate::states::{make_family, DensityMatrix, FamilySpec};

/// One-parameter families that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// `sqrt(p)|00> + sqrt(1-p)|11>`, parameter `p`.
    Pure,
    /// Weights `(lambda1, 1 - lambda1, 0, 0)`, parameter `lambda1`.
    BellDiagonal,
    /// Singlet fidelity `f`.
    Werner,
}

impl SweepFamily {
    pub const NAMES: [&'static str; 3] = ["pure", "bell-diagonal", "werner"];

    pub fn parse(family: &str, param: &str) -> Result<Self> {
        let fam = match family {
            "pure" => SweepFamily::Pure,
            "bell-diagonal" | "bell_diagonal" => SweepFamily::BellDiagonal,
            "werner" => SweepFamily::Werner,
            other => {
                return Err(Error::input(format!(
                    "unknown family {other:?}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        };
        if param != fam.param_name() {
            return Err(Error::input(format!(
                "family {family} is swept over {:?}, not {param:?}",
                fam.param_name()
            )));
        }
        Ok(fam)
    }

    pub fn param_name(self) -> &'static str {
        match self {
            SweepFamily::Pure => "p",
            SweepFamily::BellDiagonal => "lambda1",
            SweepFamily::Werner => "f",
        }
    }

    pub fn state(self, x: f64) -> Result<DensityMatrix> {
        make_family(&match self {
            SweepFamily::Pure => FamilySpec::Pure { p: x },
            SweepFamily::BellDiagonal => FamilySpec::BellDiagonal {
                weights: [x, 1.0 - x, 0.0, 0.0],
            },
            SweepFamily::Werner => FamilySpec::Werner { f: x },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub bound_nats: f64,
    pub bound_bits: f64,
    pub oracle_nats: Option<f64>,
    /// Residuals at the bound's minimizer; NaN when the conditions are undefined there.
    pub filter_residual_a: f64,
    pub filter_residual_b: f64,
    pub unitary_residual_a: f64,
    pub unitary_residual_b: f64,
}

/// Bound (and optionally oracle) values on `steps` equally spaced parameter values.
pub fn sweep(
    family: SweepFamily,
    from: f64,
    to: f64,
    steps: usize,
    bound: &BoundOptions,
    oracle: Option<&OracleOptions>,
) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(Error::input(format!("sweep needs at least 2 steps, got {steps}")));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::input("sweep range must be finite"));
    }
    let params: Vec<f64> = (0..steps)
        .map(|k| {
            if k == steps - 1 {
                to
            } else {
                from + (to - from) * k as f64 / (steps - 1) as f64
            }
        })
        .collect();
    // validate every point before doing any optimization
    let states = params.iter().map(|&x| family.state(x)).collect::<Result<Vec<_>>>()?;
    params
        .par_iter()
        .zip(states.par_iter())
        .map(|(&param, rho)| {
            let b = upper_bound_ree(rho, bound)?;
            let oracle_nats = match oracle {
                Some(o) => Some(closest_ppt_oracle_with(rho, o)?.value.nats),
                None => None,
            };
            let (fa, fb, ua, ub) = match &b.conditions {
                Some((a, bb)) => (a.filter_residual, bb.filter_residual, a.unitary_residual, bb.unitary_residual),
                None => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
            };
            Ok(SweepRow {
                param,
                bound_nats: b.value.nats,
                bound_bits: b.value.bits,
                oracle_nats,
                filter_residual_a: fa,
                filter_residual_b: fb,
                unitary_residual_a: ua,
                unitary_residual_b: ub,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_checks_param() {
        assert_eq!(SweepFamily::parse("pure", "p").unwrap(), SweepFamily::Pure);
        assert_eq!(SweepFamily::parse("bell-diagonal", "lambda1").unwrap(), SweepFamily::BellDiagonal);
        assert!(SweepFamily::parse("pure", "f").is_err());
        assert!(SweepFamily::parse("ghz", "p").is_err());
    }

    #[test]
    fn pure_sweep_endpoints() {
        let rows = sweep(SweepFamily::Pure, 0.0, 1.0, 11, &BoundOptions::default(), None).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.windows(2).all(|w| w[0].param < w[1].param));
        assert!(rows[0].bound_nats.abs() < 1e-9 && rows[10].bound_nats.abs() < 1e-9);
        for r in &rows {
            let p = r.param;
            let h = if p == 0.0 || p == 1.0 { 0.0 } else { -p * p.ln() - (1.0 - p) * (1.0 - p).ln() };
            assert!((r.bound_nats - h).abs() < 1e-4, "p={p}: {} vs {h}", r.bound_nats);
        }
    }

    #[test]
    fn bell_diagonal_threshold() {
        let rows = sweep(SweepFamily::BellDiagonal, 0.5, 1.0, 6, &BoundOptions::default(), None).unwrap();
        assert!(rows[0].bound_nats.abs() < 1e-9);
        assert!(rows.windows(2).all(|w| w[1].bound_nats >= w[0].bound_nats - 1e-9));
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(sweep(SweepFamily::Pure, 0.0, 1.0, 1, &BoundOptions::default(), None).is_err());
        assert!(sweep(SweepFamily::Pure, 0.0, 1.5, 3, &BoundOptions::default(), None).is_err());
    }
}
