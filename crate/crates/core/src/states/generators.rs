use crate::error::{Error, Result};
use crate::matkit::{ComplexMatrix, C64};

/// Generalized Gell-Mann matrices: `d^2 - 1` traceless Hermitian generators
/// with `Tr(J_a J_b) = 2 delta_ab`.
///
/// Ordering is all symmetric generators, then all antisymmetric ones, then
/// the diagonal ones; for `d = 2` this is exactly `(sigma_x, sigma_y, sigma_z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    d: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `sum_a n_a J_a`
    pub fn combine(&self, n: &[f64]) -> Result<ComplexMatrix> {
        if n.len() != self.len() {
            return Err(Error::dim(format!(
                "direction has {} components, basis has {}",
                n.len(),
                self.len()
            )));
        }
        let mut m = ComplexMatrix::zeros(self.d, self.d);
        for (c, j) in n.iter().zip(&self.generators) {
            m = &m + &j.scale(*c);
        }
        Ok(m)
    }

    /// Inverse of [`bloch_vector`] for an operator with trace `trace`:
    /// `X = (trace/d) I + (1/2) sum_a v_a J_a`.
    pub fn reconstruct(&self, trace: f64, v: &[f64]) -> Result<ComplexMatrix> {
        let traceless = self.combine(v)?.scale(0.5);
        Ok(&ComplexMatrix::identity(self.d).scale(trace / self.d as f64) + &traceless)
    }
}

pub fn generator_basis(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::input(format!("SU(d) generators need d >= 2, got {d}")));
    }
    let mut symmetric = Vec::new();
    let mut antisymmetric = Vec::new();
    for j in 0..d {
        for k in j + 1..d {
            let mut s = ComplexMatrix::zeros(d, d);
            s[(j, k)] = C64::new(1.0, 0.0);
            s[(k, j)] = C64::new(1.0, 0.0);
            symmetric.push(s);
            let mut a = ComplexMatrix::zeros(d, d);
            a[(j, k)] = C64::new(0.0, -1.0);
            a[(k, j)] = C64::new(0.0, 1.0);
            antisymmetric.push(a);
        }
    }
    let mut generators = symmetric;
    generators.extend(antisymmetric);
    for l in 1..d {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for x in diag.iter_mut().take(l) {
            *x = scale;
        }
        diag[l] = -(l as f64) * scale;
        generators.push(ComplexMatrix::diag(&diag));
    }
    Ok(GeneratorBasis { d, generators })
}

/// Real coefficients `v_a = Tr(X J_a)`.
pub fn bloch_vector(x: &ComplexMatrix, basis: &GeneratorBasis) -> Result<Vec<f64>> {
    if !x.is_square() || x.rows() != basis.d {
        return Err(Error::dim(format!(
            "{}x{} operator does not match a d = {} generator basis",
            x.rows(),
            x.cols(),
            basis.d
        )));
    }
    Ok(basis.generators.iter().map(|j| x.trace_product(j).re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::paulis;

    #[test]
    fn qubit_basis_is_pauli() {
        let b = generator_basis(2).unwrap();
        for (g, p) in b.generators().iter().zip(paulis()) {
            assert_eq!(g, &p);
        }
    }

    #[test]
    fn counts_and_orthogonality() {
        for d in 2..=5 {
            let b = generator_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            for (a, ja) in b.generators().iter().enumerate() {
                assert!(ja.trace().norm() < 1e-12);
                assert!(ja.is_hermitian(0.0));
                for (c, jc) in b.generators().iter().enumerate() {
                    let want = if a == c { 2.0 } else { 0.0 };
                    assert!((ja.trace_product(jc) - want).norm() < 1e-12);
                }
            }
        }
        assert!(generator_basis(1).is_err());
    }

    #[test]
    fn bloch_of_simple_operators() {
        let b = generator_basis(2).unwrap();
        let v = bloch_vector(&ComplexMatrix::diag(&[0.9, 0.1]), &b).unwrap();
        assert!(v[0].abs() < 1e-15 && v[1].abs() < 1e-15 && (v[2] - 0.8).abs() < 1e-15);
        let b3 = generator_basis(3).unwrap();
        let mixed = ComplexMatrix::identity(3).scale(1.0 / 3.0);
        assert!(bloch_vector(&mixed, &b3).unwrap().iter().all(|x| x.abs() < 1e-15));
        assert!(bloch_vector(&mixed, &b).is_err());
    }
}
