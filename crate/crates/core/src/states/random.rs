//! Seeded random states and unitaries for sampling-based checks.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::DensityMatrix;
use crate::matkit::{kron, ComplexMatrix, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Complex Ginibre matrix with standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Hilbert-Schmidt distributed state: `G G^dagger / Tr(G G^dagger)`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize)) -> DensityMatrix {
    let n = dims.0 * dims.1;
    let g = ginibre(rng, n, n);
    let a = &g * &g.adjoint();
    let tr = a.trace().re;
    DensityMatrix::new_unchecked(a.scale(1.0 / tr).hermitian_part(), dims)
}

/// Haar unitary from Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize)) -> ComplexMatrix {
    let ua = random_unitary(rng, dims.0);
    let ub = random_unitary(rng, dims.1);
    kron(&ua, &ub)
}

/// Uniform direction on the unit sphere in `R^k`.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut *rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_state(&mut rng, (2, 2));
        DensityMatrix::new(rho.matrix().clone(), (2, 2)).unwrap();
        let u = random_unitary(&mut rng, 4);
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        let n = random_direction(&mut rng, 3);
        assert!((n.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
