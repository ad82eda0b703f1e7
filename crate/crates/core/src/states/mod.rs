//! Bipartite density matrices and their representations.

mod family;
mod generators;
mod hs;
pub mod random;

pub use family::{make_family, qubit_state, FamilySpec};
pub use generators::{bloch_vector, generator_basis, GeneratorBasis};
pub use hs::{canonical_form, from_hilbert_schmidt, to_hilbert_schmidt, Canonical, HilbertSchmidtForm, Mat3, Vec3};

use crate::error::{Error, Invariant, Result};
use crate::matkit::{hermitian_eig, partial_trace, ComplexMatrix, EigDecomposition, Party};

/// Tolerance on Hermiticity, trace and positivity of an accepted state.
pub const STATE_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace operator on `C^dA (x) C^dB`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: (usize, usize),
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` against the density-matrix invariants.
    pub fn new(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        let n = dims.0 * dims.1;
        if dims.0 == 0 || dims.1 == 0 || !matrix.is_square() || matrix.rows() != n {
            return Err(Error::dim(format!(
                "{}x{} matrix does not match subsystem dims {}x{}",
                matrix.rows(),
                matrix.cols(),
                dims.0,
                dims.1
            )));
        }
        let herm = matrix.hermiticity_error();
        if herm > STATE_TOL {
            return Err(Error::NotAState {
                invariant: Invariant::Hermiticity,
                deviation: herm,
            });
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::NotAState {
                invariant: Invariant::Trace,
                deviation: (tr - 1.0).abs(),
            });
        }
        let min = hermitian_eig(&matrix)?.min_value();
        if min < -STATE_TOL {
            return Err(Error::NotAState {
                invariant: Invariant::Positivity,
                deviation: -min,
            });
        }
        Ok(DensityMatrix { dims, matrix })
    }

    /// Skips validation; for callers that construct states by a PSD,
    /// trace-normalized recipe.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix, dims: (usize, usize)) -> Self {
        debug_assert_eq!(matrix.rows(), dims.0 * dims.1);
        DensityMatrix { dims, matrix }
    }

    pub fn maximally_mixed(dims: (usize, usize)) -> Self {
        let n = dims.0 * dims.1;
        Self::new_unchecked(ComplexMatrix::identity(n).scale(1.0 / n as f64), dims)
    }

    /// Normalized projector onto a (not necessarily normalized) pure state.
    pub fn pure(amplitudes: &[crate::matkit::C64], dims: (usize, usize)) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::input("pure state needs a nonzero, finite vector"));
        }
        let m = ComplexMatrix::outer(amplitudes).scale(1.0 / norm);
        if m.rows() != dims.0 * dims.1 {
            return Err(Error::dim(format!(
                "{} amplitudes do not match dims {}x{}",
                amplitudes.len(),
                dims.0,
                dims.1
            )));
        }
        Ok(Self::new_unchecked(m, dims))
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    pub fn party_dim(&self, party: Party) -> usize {
        match party {
            Party::A => self.dims.0,
            Party::B => self.dims.1,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eig(&self) -> Result<EigDecomposition> {
        hermitian_eig(&self.matrix)
    }

    /// Reduced state of `party` (the other factor is traced out).
    pub fn reduced(&self, party: Party) -> ComplexMatrix {
        partial_trace(&self.matrix, self.dims, party.other()).expect("dims checked at construction")
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == (2, 2)
    }

    pub(crate) fn require_two_qubit(&self, what: &str) -> Result<()> {
        if !self.is_two_qubit() {
            return Err(Error::dim(format!(
                "{what} needs a two-qubit state, got dims {}x{}",
                self.dims.0, self.dims.1
            )));
        }
        Ok(())
    }

    pub(crate) fn require_same_dims(&self, other: &DensityMatrix) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::dim(format!(
                "states have dims {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    /// Conjugates by a unitary `u`: `u rho u^dagger`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let m = &(u * &self.matrix) * &u.adjoint();
        Self::new_unchecked(m.hermitian_part(), self.dims)
    }
}
