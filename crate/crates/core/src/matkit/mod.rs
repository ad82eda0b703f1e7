//! Dense complex matrices sized for few-qudit density operators.
//!
//! Everything here is a pure function of its inputs. Matrices are stored
//! row-major and are small enough (n <= 16) that no blocking or BLAS is used.

mod eig;

use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub use num_complex::Complex64 as C64;

pub use eig::{hermitian_eig, matrix_function, spectral_map, EigDecomposition, MatrixFn};

use crate::error::{Error, Result};

/// Tolerance for accepting a matrix as Hermitian on input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as exact zeros by the spectral functions.
pub const SUPPORT_CUTOFF: f64 = 1e-14;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Which factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::A => Party::B,
            Party::B => Party::A,
        }
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Projector |v><v| onto an (unnormalized) column vector.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance between two equally shaped matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |M - M^dagger|, or infinity for non-square input.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut err: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// (M + M^dagger)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Re Tr(self * other), the Hilbert-Schmidt pairing for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dim(format!(
                "{what}: shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Tensor (Kronecker) product.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows, a.cols, b.rows, b.cols);
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

fn check_bipartite(m: &ComplexMatrix, dims: (usize, usize)) -> Result<()> {
    let n = dims.0 * dims.1;
    if !m.is_square() || m.rows != n {
        return Err(Error::dim(format!(
            "{}x{} matrix does not match subsystem dims {}x{}",
            m.rows, m.cols, dims.0, dims.1
        )));
    }
    Ok(())
}

/// Traces out the party `over`, returning the operator on the remaining factor.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), over: Party) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let out = match over {
        Party::A => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
        Party::B => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
    };
    Ok(out)
}

/// Transposes the factor `on` in the computational product basis.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: (usize, usize),
    on: Party,
) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let db = dims.1;
    Ok(ComplexMatrix::from_fn(m.rows, m.cols, |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        match on {
            Party::A => m[(j * db + k, i * db + l)],
            Party::B => m[(i * db + l, j * db + k)],
        }
    }))
}

/// Entrywise product `[a o b]_ij = a_ij b_ij`.
pub fn hadamard_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_shape(b, "hadamard product")?;
    Ok(ComplexMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| x * y).collect(),
    })
}

/// Embeds a single-party operator as `X (x) I` or `I (x) X`.
pub fn lift(op: &ComplexMatrix, dims: (usize, usize), party: Party) -> ComplexMatrix {
    match party {
        Party::A => kron(op, &ComplexMatrix::identity(dims.1)),
        Party::B => kron(&ComplexMatrix::identity(dims.0), op),
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

pub fn paulis() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kron_of_paulis() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &pauli_z()), ComplexMatrix::diag(&[1.0, -1.0, 1.0, -1.0]));
        assert_eq!(kron(&pauli_z(), &pauli_z()), ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]));
        let k = kron(&ComplexMatrix::zeros(2, 2), &ComplexMatrix::zeros(3, 3));
        assert_eq!((k.rows(), k.cols()), (6, 6));
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexMatrix::outer(&[c(s), ZERO, ZERO, c(s)]);
        let red = partial_trace(&phi, (2, 2), Party::A).unwrap();
        assert!(red.max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_of_schmidt_state() {
        let p: f64 = 0.9;
        let psi = ComplexMatrix::outer(&[c(p.sqrt()), ZERO, ZERO, c((1.0 - p).sqrt())]);
        let red = partial_trace(&psi, (2, 2), Party::A).unwrap();
        assert!(red.max_abs_diff(&ComplexMatrix::diag(&[0.9, 0.1])) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(partial_trace(&m, (2, 3), Party::A), Err(Error::Dimension(_))));
        assert!(matches!(partial_transpose(&m, (3, 2), Party::B), Err(Error::Dimension(_))));
    }

    #[test]
    fn partial_trace_of_product_factorizes() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(0.7), C64::new(0.1, 0.2), C64::new(0.1, -0.2), c(0.3)]).unwrap();
        let b = ComplexMatrix::diag(&[0.2, 0.5, 0.3]);
        let ab = kron(&a, &b);
        assert!(partial_trace(&ab, (2, 3), Party::A).unwrap().max_abs_diff(&b) < 1e-15);
        assert!(partial_trace(&ab, (2, 3), Party::B).unwrap().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn singlet_partial_transpose_has_negative_half() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = ComplexMatrix::outer(&[ZERO, c(s), c(-s), ZERO]);
        let pt = partial_transpose(&singlet, (2, 2), Party::B).unwrap();
        let eig = hermitian_eig(&pt).unwrap();
        assert!((eig.values[3] + 0.5).abs() < 1e-12);
        // partial transposes on either side share a spectrum
        let pta = partial_transpose(&singlet, (2, 2), Party::A).unwrap();
        let eiga = hermitian_eig(&pta).unwrap();
        for (x, y) in eig.values.iter().zip(&eiga.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn hadamard_cases() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = ComplexMatrix::from_real(2, 2, &[5.0, 6.0, 7.0, 8.0]).unwrap();
        let expect = ComplexMatrix::from_real(2, 2, &[5.0, 12.0, 21.0, 32.0]).unwrap();
        assert_eq!(hadamard_product(&a, &b).unwrap(), expect);
        let ones = ComplexMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        assert_eq!(hadamard_product(&a, &ones).unwrap(), a);
        assert_eq!(hadamard_product(&a, &ComplexMatrix::zeros(2, 2)).unwrap(), ComplexMatrix::zeros(2, 2));
        assert!(hadamard_product(&a, &ComplexMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = paulis();
        assert!((&x * &y).max_abs_diff(&z.scale_c(I)) < 1e-15);
        assert!(y.is_hermitian(0.0));
    }
}
