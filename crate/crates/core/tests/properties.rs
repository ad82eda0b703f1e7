use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ree_core::extremal::{compute_g, g_entry};
use ree_core::matkit::{hermitian_eig, kron, partial_trace, Party};
use ree_core::measures::{concurrence, relative_entropy};
use ree_core::states::random::{random_local_unitary, random_state};
use ree_core::states::{canonical_form, from_hilbert_schmidt, to_hilbert_schmidt};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn to_nalgebra(m: &ree_core::matkit::ComplexMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| Complex::new(m[(i, j)].re, m[(i, j)].im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_nalgebra(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let rho = random_state(&mut rng(seed), (da, db));
        let ours = hermitian_eig(rho.matrix()).unwrap();
        let mut theirs: Vec<f64> = to_nalgebra(rho.matrix()).symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in ours.values.iter().zip(&theirs) {
            prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        prop_assert!(ours.reconstruct().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn g_is_symmetric_and_nonnegative(a in 1e-6f64..1.0, b in 1e-6f64..1.0) {
        let g = g_entry(a, b);
        prop_assert_eq!(g.to_bits(), g_entry(b, a).to_bits());
        prop_assert!(g >= -1e-12);
        prop_assert_eq!(g_entry(a, a), 0.0);
    }

    #[test]
    fn g_matrix_has_zero_diagonal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, (2, 2));
        let sigma = random_state(&mut r, (2, 2));
        let g = compute_g(&rho, &sigma).unwrap();
        for i in 0..g.dim() {
            prop_assert_eq!(g.get(i, i), 0.0);
            for j in 0..g.dim() {
                prop_assert_eq!(g.get(i, j), g.get(j, i));
            }
        }
    }

    #[test]
    fn canonical_form_is_diagonal_and_unitarily_equivalent(seed in any::<u64>()) {
        let rho = random_state(&mut rng(seed), (2, 2));
        let c = canonical_form(&rho).unwrap();
        prop_assert!(c.form.max_off_diagonal() <= 1e-10);
        let t = c.form.t_diagonal();
        prop_assert!(t[0].abs() >= t[1].abs() - 1e-12 && t[1].abs() >= t[2].abs() - 1e-12);
        let before = hermitian_eig(rho.matrix()).unwrap().values;
        let after = hermitian_eig(c.state.matrix()).unwrap().values;
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&c.state).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn hilbert_schmidt_roundtrip(seed in any::<u64>()) {
        let rho = random_state(&mut rng(seed), (2, 2));
        let back = from_hilbert_schmidt(&to_hilbert_schmidt(&rho).unwrap()).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn relative_entropy_is_local_unitary_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, (2, 3));
        let sigma = random_state(&mut r, (2, 3));
        let u = random_local_unitary(&mut r, (2, 3));
        let d0 = relative_entropy(&rho, &sigma).unwrap().nats;
        let d1 = relative_entropy(&rho.conjugate_by(&u), &sigma.conjugate_by(&u)).unwrap().nats;
        prop_assert!(d0 >= -1e-10);
        prop_assert!((d0 - d1).abs() < 1e-9);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_state(&mut r, (2, 1));
        let b = random_state(&mut r, (3, 1));
        let ab = kron(a.matrix(), b.matrix());
        prop_assert!(partial_trace(&ab, (2, 3), Party::B).unwrap().max_abs_diff(a.matrix()) < 1e-14);
        prop_assert!(partial_trace(&ab, (2, 3), Party::A).unwrap().max_abs_diff(b.matrix()) < 1e-14);
    }
}
