//! Entropic and entanglement quantities.
//!
//! Logarithms are natural; [`EntropyValue`] carries the base-2 value alongside.

use serde::Serialize;

use crate::error::Result;
use crate::matkit::{
    hermitian_eig, kron, partial_transpose, ComplexMatrix, EigDecomposition, Party, SUPPORT_CUTOFF,
};
use crate::states::{DensityMatrix, Vec3};

/// Eigenvalues of `rho` above this belong to its support.
pub const RHO_SUPPORT_CUTOFF: f64 = 1e-12;
/// Minimum squared overlap of each support vector of `rho` with `supp sigma`.
pub const SUPPORT_OVERLAP_TOL: f64 = 1e-9;
/// A partial transpose with min eigenvalue at or above `-PPT_TOL` counts as PSD.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue {
    pub nats: f64,
    pub bits: f64,
    pub infinite: bool,
}

impl EntropyValue {
    pub fn from_nats(nats: f64) -> Self {
        EntropyValue {
            nats,
            bits: nats / std::f64::consts::LN_2,
            infinite: false,
        }
    }

    pub fn infinite() -> Self {
        EntropyValue {
            nats: f64::INFINITY,
            bits: f64::INFINITY,
            infinite: true,
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.infinite
    }
}

pub(crate) fn spectrum_entropy(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&x| x >= SUPPORT_CUTOFF)
        .map(|&x| -x * x.ln())
        .sum()
}

pub(crate) fn operator_entropy(m: &ComplexMatrix) -> Result<f64> {
    Ok(spectrum_entropy(&hermitian_eig(m)?.values))
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<EntropyValue> {
    Ok(EntropyValue::from_nats(operator_entropy(rho.matrix())?))
}

/// Largest deficit `1 - |P_sigma v|^2` over support vectors `v` of `rho`.
///
/// Zero means `supp rho` lies inside `supp sigma`; the relative entropy is
/// treated as infinite when the deficit exceeds [`SUPPORT_OVERLAP_TOL`].
pub(crate) fn support_deficit(rho: &EigDecomposition, sigma: &EigDecomposition) -> f64 {
    let n = rho.dim();
    let mut worst: f64 = 0.0;
    for (k, &lambda) in rho.values.iter().enumerate() {
        if lambda <= RHO_SUPPORT_CUTOFF {
            continue;
        }
        let mut captured = 0.0;
        for (j, &mu) in sigma.values.iter().enumerate() {
            if mu < SUPPORT_CUTOFF {
                continue;
            }
            let overlap: crate::matkit::C64 = (0..n)
                .map(|i| sigma.vectors[(i, j)].conj() * rho.vectors[(i, k)])
                .sum();
            captured += overlap.norm_sqr();
        }
        worst = worst.max(1.0 - captured);
    }
    worst
}

/// `-Tr rho log sigma` with the logarithm taken on `supp sigma`.
pub(crate) fn cross_entropy(rho: &ComplexMatrix, sigma: &EigDecomposition, floor: f64) -> f64 {
    let n = sigma.dim();
    let mut acc = 0.0;
    for (k, &mu) in sigma.values.iter().enumerate() {
        let mu = if floor > 0.0 { mu.max(floor) } else { mu };
        if mu < SUPPORT_CUTOFF {
            continue;
        }
        // <k|rho|k>
        let mut w = 0.0;
        for i in 0..n {
            let vi = sigma.vectors[(i, k)];
            if vi.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                w += (vi.conj() * rho[(i, j)] * sigma.vectors[(j, k)]).re;
            }
        }
        acc -= w * mu.ln();
    }
    acc
}

/// `S(rho || sigma) = Tr rho log rho - Tr rho log sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<EntropyValue> {
    rho.require_same_dims(sigma)?;
    let er = rho.eig()?;
    let es = sigma.eig()?;
    if support_deficit(&er, &es) > SUPPORT_OVERLAP_TOL {
        return Ok(EntropyValue::infinite());
    }
    let value = cross_entropy(rho.matrix(), &es, 0.0) - spectrum_entropy(&er.values);
    Ok(EntropyValue::from_nats(value))
}

fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let y = crate::matkit::pauli_y();
    let yy = kron(&y, &y);
    &(&yy * &rho.conj()) * &yy
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    rho.require_two_qubit("concurrence")?;
    let eig = rho.eig()?;
    let sqrt_rho = crate::matkit::spectral_map(&eig, |x| x.max(0.0).sqrt());
    let m = &(&sqrt_rho * &spin_flip(rho.matrix())) * &sqrt_rho;
    let mu: Vec<f64> = hermitian_eig(&m.hermitian_part())?
        .values
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .collect();
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptCheck {
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
}

/// Smallest eigenvalue of the partial transpose on B.
pub fn ppt_check(rho: &DensityMatrix) -> Result<PptCheck> {
    let pt = partial_transpose(rho.matrix(), rho.dims(), Party::B)?;
    let min_eigenvalue = hermitian_eig(&pt.hermitian_part())?.min_value();
    Ok(PptCheck {
        is_ppt: min_eigenvalue >= -PPT_TOL,
        min_eigenvalue,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OctahedronCheck {
    pub inside: bool,
    pub margin: f64,
}

/// Membership of a diagonal correlation vector in `|t1| + |t2| + |t3| <= 1`.
pub fn octahedron_check(tau: &Vec3) -> OctahedronCheck {
    let margin = 1.0 - tau.iter().map(|x| x.abs()).sum::<f64>();
    OctahedronCheck {
        inside: margin >= 0.0,
        margin,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Uncorrelated {
    /// `rho_A (x) rho_B`
    pub sigma: DensityMatrix,
    /// `S(rho || sigma)`
    pub distance: EntropyValue,
    /// `S(rho_A) + S(rho_B) - S(rho)`, in nats.
    pub mutual_information: f64,
}

/// Closest product state under the relative entropy, with the mutual
/// information computed independently for comparison.
pub fn closest_uncorrelated(rho: &DensityMatrix) -> Result<Uncorrelated> {
    let ra = rho.reduced(Party::A);
    let rb = rho.reduced(Party::B);
    let sigma = DensityMatrix::new_unchecked(kron(&ra, &rb), rho.dims());
    let distance = relative_entropy(rho, &sigma)?;
    let mutual_information =
        operator_entropy(&ra)? + operator_entropy(&rb)? - operator_entropy(rho.matrix())?;
    Ok(Uncorrelated {
        sigma,
        distance,
        mutual_information,
    })
}
