use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Invariant, Result};
use crate::matkit::{hermitian_eig, kron, paulis, ComplexMatrix};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Pauli expansion of a two-qubit state:
/// `rho = (I + r_a.sigma (x) I + I (x) r_b.sigma + sum_nm t_nm sigma_n (x) sigma_m) / 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HilbertSchmidtForm {
    pub r_a: Vec3,
    pub r_b: Vec3,
    pub t: Mat3,
}

impl HilbertSchmidtForm {
    pub fn zero() -> Self {
        HilbertSchmidtForm {
            r_a: [0.0; 3],
            r_b: [0.0; 3],
            t: [[0.0; 3]; 3],
        }
    }

    pub fn t_diagonal(&self) -> Vec3 {
        [self.t[0][0], self.t[1][1], self.t[2][2]]
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    m = m.max(self.t[i][j].abs());
                }
            }
        }
        m
    }

    /// The 4x4 operator, without any positivity check.
    pub(crate) fn assemble(&self) -> ComplexMatrix {
        let p = paulis();
        let id = ComplexMatrix::identity(2);
        let mut m = ComplexMatrix::identity(4);
        let mut acc = |coef: f64, op: ComplexMatrix| {
            if coef != 0.0 {
                m = &m + &op.scale(coef);
            }
        };
        for n in 0..3 {
            acc(self.r_a[n], kron(&p[n], &id));
            acc(self.r_b[n], kron(&id, &p[n]));
            for k in 0..3 {
                acc(self.t[n][k], kron(&p[n], &p[k]));
            }
        }
        m.scale(0.25)
    }
}

/// Pauli coefficients of a two-qubit state.
pub fn to_hilbert_schmidt(rho: &DensityMatrix) -> Result<HilbertSchmidtForm> {
    rho.require_two_qubit("Hilbert-Schmidt expansion")?;
    let p = paulis();
    let id = ComplexMatrix::identity(2);
    let m = rho.matrix();
    let coef = |op: &ComplexMatrix| m.trace_product(op).re;
    let mut h = HilbertSchmidtForm::zero();
    for n in 0..3 {
        h.r_a[n] = coef(&kron(&p[n], &id));
        h.r_b[n] = coef(&kron(&id, &p[n]));
        for k in 0..3 {
            h.t[n][k] = coef(&kron(&p[n], &p[k]));
        }
    }
    Ok(h)
}

/// Assembles the state and rejects operators that are not PSD.
pub fn from_hilbert_schmidt(h: &HilbertSchmidtForm) -> Result<DensityMatrix> {
    let m = h.assemble();
    let min = hermitian_eig(&m)?.min_value();
    if min < -super::STATE_TOL {
        return Err(Error::NotAState {
            invariant: Invariant::Positivity,
            deviation: -min,
        });
    }
    Ok(DensityMatrix::new_unchecked(m, (2, 2)))
}

/// A two-qubit state brought to diagonal-T form by local rotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Canonical {
    pub state: DensityMatrix,
    pub form: HilbertSchmidtForm,
    /// Rotation applied to Alice's Bloch sphere.
    pub o_a: Mat3,
    /// Rotation applied to Bob's Bloch sphere.
    pub o_b: Mat3,
}

impl Canonical {
    /// Maps a correlation matrix from the canonical frame back to the input frame.
    pub fn t_to_input_frame(&self, t: &Mat3) -> Mat3 {
        mat_mul(&mat_mul(&transpose(&self.o_a), t), &self.o_b)
    }
}

/// Diagonalizes the T-matrix with special-orthogonal rotations on each side.
///
/// The output satisfies `T' = O_A T O_B^T = diag(-|t1|, -|t2|, sign(det T) |t3|)`
/// with `|t1| >= |t2| >= |t3|`; Bloch vectors transform as `r_a' = O_A r_a`,
/// `r_b' = O_B r_b`. Rotations in SO(3) lift to local unitaries, so the spectrum
/// and every local-unitary invariant of the state are unchanged.
pub fn canonical_form(rho: &DensityMatrix) -> Result<Canonical> {
    let h = to_hilbert_schmidt(rho)?;
    let (mut u, _, mut v) = svd3(&h.t);
    // fold reflections into the sign of the smallest entry, then flip the
    // two largest together
    if det(&u) < 0.0 {
        negate_col(&mut u, 2);
    }
    if det(&v) < 0.0 {
        negate_col(&mut v, 2);
    }
    negate_col(&mut u, 0);
    negate_col(&mut u, 1);

    let o_a = transpose(&u);
    let o_b = transpose(&v);
    let form = HilbertSchmidtForm {
        r_a: mat_vec(&o_a, &h.r_a),
        r_b: mat_vec(&o_b, &h.r_b),
        t: mat_mul(&mat_mul(&o_a, &h.t), &transpose(&o_b)),
    };
    let state = DensityMatrix::new_unchecked(form.assemble(), (2, 2));
    Ok(Canonical { state, form, o_a, o_b })
}

/// One-sided Jacobi SVD `T = U diag(s) V^T`, singular values descending.
fn svd3(t: &Mat3) -> (Mat3, Vec3, Mat3) {
    let mut w = *t;
    let mut v = identity3();
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..2 {
            for j in i + 1..3 {
                let alpha: f64 = (0..3).map(|k| w[k][i] * w[k][i]).sum();
                let beta: f64 = (0..3).map(|k| w[k][j] * w[k][j]).sum();
                let gamma: f64 = (0..3).map(|k| w[k][i] * w[k][j]).sum();
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let tn = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + tn * tn).sqrt();
                let s = c * tn;
                for m in [&mut w, &mut v] {
                    for row in m.iter_mut() {
                        let (x, y) = (row[i], row[j]);
                        row[i] = c * x - s * y;
                        row[j] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec3 = std::array::from_fn(|j| (0..3).map(|k| w[k][j] * w[k][j]).sum::<f64>().sqrt());
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let mut u = [[0.0; 3]; 3];
    let mut vs = [[0.0; 3]; 3];
    let mut sv = [0.0; 3];
    let tiny = 1e-14 * norms[order[0]].max(f64::MIN_POSITIVE);
    let mut have = 0;
    for (k, &src) in order.iter().enumerate() {
        sv[k] = norms[src];
        for r in 0..3 {
            vs[r][k] = v[r][src];
        }
        if norms[src] > tiny {
            for r in 0..3 {
                u[r][k] = w[r][src] / norms[src];
            }
            have = k + 1;
        }
    }
    complete_basis(&mut u, have);
    (u, sv, vs)
}

/// Fills columns `have..3` of `u` so that its columns are orthonormal.
fn complete_basis(u: &mut Mat3, have: usize) {
    if have == 0 {
        *u = identity3();
        return;
    }
    if have == 1 {
        let a = col(u, 0);
        // axis least aligned with a, then Gram-Schmidt
        let mut axis = 0;
        for k in 1..3 {
            if a[k].abs() < a[axis].abs() {
                axis = k;
            }
        }
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        let d = dot(&a, &e);
        let mut b = [e[0] - d * a[0], e[1] - d * a[1], e[2] - d * a[2]];
        let nb = dot(&b, &b).sqrt();
        b.iter_mut().for_each(|x| *x /= nb);
        set_col(u, 1, &b);
    }
    if have <= 2 {
        let c = cross(&col(u, 0), &col(u, 1));
        set_col(u, 2, &c);
    }
}

pub(crate) fn identity3() -> Mat3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

pub(crate) fn transpose(a: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub(crate) fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

pub(crate) fn mat_vec(a: &Mat3, x: &Vec3) -> Vec3 {
    std::array::from_fn(|i| (0..3).map(|k| a[i][k] * x[k]).sum())
}

pub(crate) fn det(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn col(a: &Mat3, j: usize) -> Vec3 {
    [a[0][j], a[1][j], a[2][j]]
}

fn set_col(a: &mut Mat3, j: usize, c: &Vec3) {
    for r in 0..3 {
        a[r][j] = c[r];
    }
}

fn negate_col(a: &mut Mat3, j: usize) {
    for row in a.iter_mut() {
        row[j] = -row[j];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::{C64, ZERO};

    fn c64(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn singlet() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[ZERO, C64::new(s, 0.0), C64::new(-s, 0.0), ZERO], (2, 2)).unwrap()
    }

    #[test]
    fn maximally_mixed_has_zero_form() {
        let h = to_hilbert_schmidt(&DensityMatrix::maximally_mixed((2, 2))).unwrap();
        assert_eq!(h, HilbertSchmidtForm::zero());
        let back = from_hilbert_schmidt(&HilbertSchmidtForm::zero()).unwrap();
        assert!(back.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-16);
    }

    #[test]
    fn singlet_expansion() {
        let h = to_hilbert_schmidt(&singlet()).unwrap();
        assert!(h.r_a.iter().chain(&h.r_b).all(|x| x.abs() < 1e-15));
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { -1.0 } else { 0.0 };
                assert!((h.t[i][j] - want).abs() < 1e-15);
            }
        }
        let mut f = HilbertSchmidtForm::zero();
        f.t = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
        assert!(from_hilbert_schmidt(&f).unwrap().matrix().max_abs_diff(singlet().matrix()) < 1e-15);
    }

    #[test]
    fn pure_schmidt_expansion() {
        let p: f64 = 0.9;
        let rho = DensityMatrix::pure(&[c64(p.sqrt()), ZERO, ZERO, c64((1.0 - p).sqrt())], (2, 2)).unwrap();
        let h = to_hilbert_schmidt(&rho).unwrap();
        assert!((h.r_a[2] - 0.8).abs() < 1e-14 && (h.r_b[2] - 0.8).abs() < 1e-14);
        assert!((h.t[0][0] - 0.6).abs() < 1e-14);
        assert!((h.t[1][1] + 0.6).abs() < 1e-14);
        assert!((h.t[2][2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unphysical_form_is_rejected() {
        let mut f = HilbertSchmidtForm::zero();
        f.t = identity3();
        match from_hilbert_schmidt(&f) {
            Err(Error::NotAState { invariant: Invariant::Positivity, deviation }) => {
                assert!((deviation - 0.5).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn canonical_singlet_is_fixed() {
        let c = canonical_form(&singlet()).unwrap();
        assert_eq!(c.form.t_diagonal().map(|x| (x * 1e12).round() / 1e12), [-1.0, -1.0, -1.0]);
        assert!(c.state.matrix().max_abs_diff(singlet().matrix()) < 1e-14);
    }

    #[test]
    fn canonical_orders_and_signs() {
        // pure(0.9): T = diag(0.6, -0.6, 1), det < 0
        let p: f64 = 0.9;
        let rho = DensityMatrix::pure(&[c64(p.sqrt()), ZERO, ZERO, c64((1.0 - p).sqrt())], (2, 2)).unwrap();
        let c = canonical_form(&rho).unwrap();
        let d = c.form.t_diagonal();
        assert!((d[0] + 1.0).abs() < 1e-12 && (d[1] + 0.6).abs() < 1e-12 && (d[2] + 0.6).abs() < 1e-12);
        assert!(c.form.max_off_diagonal() < 1e-12);
        assert!((det(&c.o_a) - 1.0).abs() < 1e-12 && (det(&c.o_b) - 1.0).abs() < 1e-12);
        let norm = |r: &Vec3| dot(r, r).sqrt();
        assert!((norm(&c.form.r_a) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_t_gets_rotations() {
        let mut f = HilbertSchmidtForm::zero();
        f.t = [[0.0, 0.3, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
        let rho = from_hilbert_schmidt(&f).unwrap();
        let c = canonical_form(&rho).unwrap();
        assert!(c.form.max_off_diagonal() < 1e-14);
        assert!((c.form.t[0][0] + 0.3).abs() < 1e-14);
        assert!((det(&c.o_a) - 1.0).abs() < 1e-14 && (det(&c.o_b) - 1.0).abs() < 1e-14);
    }
}
