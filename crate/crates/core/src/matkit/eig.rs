use super::{ComplexMatrix, C64, HERMITIAN_TOL, SUPPORT_CUTOFF, ZERO};
use crate::error::{Error, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `M = V diag(values) V^dagger` of a Hermitian matrix.
///
/// Values are sorted in descending order and column `k` of `vectors` belongs
/// to `values[k]`. Each eigenvector is normalized so that its largest-magnitude
/// component is real and positive, which makes the output reproducible bit for
/// bit for a fixed input.
#[derive(Debug, Clone, PartialEq)]
pub struct EigDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Expresses `m` in the eigenbasis: `V^dagger m V`.
    pub fn to_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors.adjoint() * m) * &self.vectors
    }

    /// Maps an eigenbasis operator back: `V m V^dagger`.
    pub fn from_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors * m) * &self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.from_eigenbasis(&ComplexMatrix::diag(&self.values))
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigDecomposition> {
    if !m.is_square() {
        return Err(Error::dim(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let herm_err = m.hermiticity_error();
    if herm_err > HERMITIAN_TOL {
        return Err(Error::input(format!(
            "matrix is not Hermitian (max |M - M^dagger| = {herm_err:e})"
        )));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for sweep in 0..=MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= OFF_DIAGONAL_TOL * scale {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NotConverged {
                sweeps: MAX_SWEEPS,
                off_norm: off,
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the sweep order for exactly equal eigenvalues
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        let col = v.column(src);
        let phase = fix_phase(&col);
        for i in 0..n {
            vectors[(i, k)] = col[i] * phase;
        }
    }
    Ok(EigDecomposition { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `J = diag(1, e^{-i phi}) R(theta)`
/// acting on rows/columns `p`, `q`, then accumulates `V <- V J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let zeta = (aqq - app) / (2.0 * mag);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Unit phase that makes the first largest-magnitude component real positive.
fn fix_phase(col: &[C64]) -> C64 {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in col.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag <= 0.0 {
        return C64::new(1.0, 0.0);
    }
    col[best].conj() / best_mag
}

/// Spectral functions needed by the entropic quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFn {
    Log,
    Sqrt,
}

/// Applies `f` to the spectrum of a Hermitian PSD matrix.
///
/// With `support_only`, eigenvalues below [`SUPPORT_CUTOFF`] are mapped to
/// zero, so the result acts as the zero operator on the null space.
pub fn matrix_function(m: &ComplexMatrix, f: MatrixFn, support_only: bool) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let min = eig.min_value();
    if min < -HERMITIAN_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    if f == MatrixFn::Log && !support_only && min <= SUPPORT_CUTOFF {
        return Err(Error::Singular { min_eigenvalue: min });
    }
    Ok(spectral_map(&eig, |x| {
        if support_only && x < SUPPORT_CUTOFF {
            return 0.0;
        }
        match f {
            MatrixFn::Log => x.ln(),
            MatrixFn::Sqrt => x.max(0.0).sqrt(),
        }
    }))
}

/// Reassembles `V diag(f(values)) V^dagger`.
pub fn spectral_map(eig: &EigDecomposition, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let mapped: Vec<f64> = eig.values.iter().map(|&x| f(x)).collect();
    eig.from_eigenbasis(&ComplexMatrix::diag(&mapped))
}
