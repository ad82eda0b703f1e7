use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::matkit::{kron, ComplexMatrix, C64, ZERO};

const SUM_TOL: f64 = 1e-12;

/// Named state families.
///
/// Bell-diagonal weights are ordered `Phi+, Phi-, Psi+, Psi-`. Werner and
/// isotropic states are parameterized by their fidelity `F` with the singlet
/// and with the maximally entangled state `sum_i |ii>/sqrt(d)` respectively.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// `sqrt(p)|00> + sqrt(1-p)|11>`
    Pure { p: f64 },
    /// `p|00><00| + (1-p)|11><11|`, the closest separable state of `Pure { p }`.
    PureClosest { p: f64 },
    BellDiagonal { weights: [f64; 4] },
    Werner { f: f64 },
    /// `sum_i a_i |ii>` on `d (x) d`, `d = amplitudes.len()`.
    MaximallyCorrelated { amplitudes: Vec<f64> },
    Isotropic { d: usize, f: f64 },
    Product { a: ComplexMatrix, b: ComplexMatrix },
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::input(format!("{name} = {x} is outside [0, 1]")));
    }
    Ok(())
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The four Bell vectors in the order `Phi+, Phi-, Psi+, Psi-`.
fn bell_vectors() -> [[C64; 4]; 4] {
    let s = real(std::f64::consts::FRAC_1_SQRT_2);
    [
        [s, ZERO, ZERO, s],
        [s, ZERO, ZERO, -s],
        [ZERO, s, s, ZERO],
        [ZERO, s, -s, ZERO],
    ]
}

fn maximally_entangled(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    let a = real(1.0 / (d as f64).sqrt());
    for i in 0..d {
        v[i * d + i] = a;
    }
    v
}

/// `f |v><v| + (1 - f) (I - |v><v|) / (n - 1)` for a unit vector `v`.
fn mix_with_complement(v: &[C64], f: f64) -> ComplexMatrix {
    let n = v.len();
    let proj = ComplexMatrix::outer(v);
    let rest = &ComplexMatrix::identity(n) - &proj;
    &proj.scale(f) + &rest.scale((1.0 - f) / (n as f64 - 1.0))
}

pub fn make_family(spec: &FamilySpec) -> Result<DensityMatrix> {
    match spec {
        FamilySpec::Pure { p } => {
            check_unit("p", *p)?;
            DensityMatrix::pure(&[real(p.sqrt()), ZERO, ZERO, real((1.0 - p).sqrt())], (2, 2))
        }
        FamilySpec::PureClosest { p } => {
            check_unit("p", *p)?;
            Ok(DensityMatrix::new_unchecked(ComplexMatrix::diag(&[*p, 0.0, 0.0, 1.0 - p]), (2, 2)))
        }
        FamilySpec::BellDiagonal { weights } => {
            if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
                return Err(Error::input("Bell-diagonal weights must be nonnegative"));
            }
            let total: f64 = weights.iter().sum();
            if (total - 1.0).abs() > SUM_TOL {
                return Err(Error::input(format!("Bell-diagonal weights sum to {total}, not 1")));
            }
            let mut m = ComplexMatrix::zeros(4, 4);
            for (w, v) in weights.iter().zip(bell_vectors()) {
                m = &m + &ComplexMatrix::outer(&v).scale(*w);
            }
            Ok(DensityMatrix::new_unchecked(m, (2, 2)))
        }
        FamilySpec::Werner { f } => {
            check_unit("F", *f)?;
            let singlet = bell_vectors()[3];
            Ok(DensityMatrix::new_unchecked(mix_with_complement(&singlet, *f), (2, 2)))
        }
        FamilySpec::MaximallyCorrelated { amplitudes } => {
            let d = amplitudes.len();
            if d < 2 {
                return Err(Error::input("maximally correlated state needs at least two amplitudes"));
            }
            let norm: f64 = amplitudes.iter().map(|a| a * a).sum();
            if (norm - 1.0).abs() > SUM_TOL {
                return Err(Error::input(format!("squared amplitudes sum to {norm}, not 1")));
            }
            let mut v = vec![ZERO; d * d];
            for (i, a) in amplitudes.iter().enumerate() {
                v[i * d + i] = real(*a);
            }
            DensityMatrix::pure(&v, (d, d))
        }
        FamilySpec::Isotropic { d, f } => {
            if *d < 2 {
                return Err(Error::input(format!("isotropic state needs d >= 2, got {d}")));
            }
            check_unit("F", *f)?;
            Ok(DensityMatrix::new_unchecked(
                mix_with_complement(&maximally_entangled(*d), *f),
                (*d, *d),
            ))
        }
        FamilySpec::Product { a, b } => {
            let ra = DensityMatrix::new(a.clone(), (a.rows(), 1))?;
            let rb = DensityMatrix::new(b.clone(), (b.rows(), 1))?;
            Ok(DensityMatrix::new_unchecked(
                kron(ra.matrix(), rb.matrix()),
                (a.rows(), b.rows()),
            ))
        }
    }
}

/// Single-qubit state with Bloch vector `r` (|r| <= 1).
pub fn qubit_state(r: [f64; 3]) -> Result<ComplexMatrix> {
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if len > 1.0 + 1e-12 {
        return Err(Error::input(format!("Bloch vector has length {len} > 1")));
    }
    let [x, y, z] = r;
    ComplexMatrix::from_vec(
        2,
        2,
        vec![
            real((1.0 + z) / 2.0),
            C64::new(x / 2.0, -y / 2.0),
            C64::new(x / 2.0, y / 2.0),
            real((1.0 - z) / 2.0),
        ],
    )
}
