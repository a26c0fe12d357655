use holonomy::linalg::{exp_i_hermitian, general_eigenvalues, hermitian_eig, psd_sqrt};
use holonomy::{Complex64, SquareMatrix};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_matrix(rng: &mut StdRng, n: usize) -> SquareMatrix {
    let data = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SquareMatrix::from_vec(n, data).unwrap()
}

fn random_hermitian(rng: &mut StdRng, n: usize) -> SquareMatrix {
    let a = random_matrix(rng, n);
    a.add(&a.adjoint()).unwrap().scale(Complex64::new(0.5, 0.0))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

#[test]
fn spectrum_sum_and_product_on_random_matrices() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst_sum = 0.0f64;
    let mut worst_prod = 0.0f64;
    for i in 0..1000 {
        let n = 2 + i % 10;
        let a = random_matrix(&mut rng, n);
        let s = general_eigenvalues(&a).unwrap();
        worst_sum = worst_sum.max((s.sum() - a.trace()).norm() / (1.0 + a.trace().norm()));
        worst_prod = worst_prod.max(rel(s.product(), a.determinant()));
    }
    assert!(worst_sum < 1e-8, "{worst_sum:e}");
    assert!(worst_prod < 1e-8, "{worst_prod:e}");
}

#[test]
fn power_sums_match_trace_powers() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in 2..=11 {
        let a = random_matrix(&mut rng, n);
        let s = general_eigenvalues(&a).unwrap();
        for k in 1..=5 {
            let t = a.pow(k).trace();
            assert!((s.power_sum(k) - t).norm() < 1e-9 * t.norm().max(1.0), "n={n} k={k}");
        }
    }
}

#[test]
fn spectrum_is_sorted_by_modulus() {
    let mut rng = StdRng::seed_from_u64(11);
    for n in 2..=11 {
        let s = general_eigenvalues(&random_matrix(&mut rng, n)).unwrap();
        for w in s.values().windows(2) {
            assert!(w[0].norm() >= w[1].norm());
        }
    }
}

#[test]
fn graded_diagonal_similarity() {
    // strongly graded sandwich, like ρ^{1/2} U ρ^{1/2} deep in the pure limit
    let mut rng = StdRng::seed_from_u64(3);
    for n in [3usize, 7, 11] {
        let h = random_hermitian(&mut rng, n);
        let u = exp_i_hermitian(&h, 1.0).unwrap();
        let d: Vec<f64> = (0..n).map(|k| (-2.5 * k as f64).exp()).collect();
        let s = SquareMatrix::from_real_diagonal(&d).unwrap();
        let m = s.matmul(&u).unwrap().matmul(&s).unwrap();
        let sp = general_eigenvalues(&m).unwrap();
        let det = m.determinant();
        assert!(rel(sp.product(), det) < 1e-8, "n={n}: {:e}", rel(sp.product(), det));
        // same spectrum as ρU with ρ = s²
        let rho = s.matmul(&s).unwrap();
        let other = general_eigenvalues(&rho.matmul(&u).unwrap()).unwrap();
        for (x, y) in sp.values().iter().zip(other.values()) {
            assert!((x - y).norm() < 1e-12, "n={n}");
        }
    }
}

#[test]
fn jacobi_reconstructs_random_hermitian() {
    let mut rng = StdRng::seed_from_u64(19);
    for n in 1..=16 {
        let h = random_hermitian(&mut rng, n);
        let e = hermitian_eig(&h).unwrap();
        let back = e.map_spectrum(|x| Complex64::new(x, 0.0));
        assert!(back.max_abs_diff(&h) < 1e-12, "n={n}");
        let vv = e.vectors.adjoint().matmul(&e.vectors).unwrap();
        assert!(vv.max_abs_diff(&SquareMatrix::identity(n).unwrap()) < 1e-12);
        for w in e.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }
}

#[test]
fn psd_sqrt_squares_back() {
    let mut rng = StdRng::seed_from_u64(23);
    for n in 2..=8 {
        let a = random_matrix(&mut rng, n);
        let p = a.matmul(&a.adjoint()).unwrap();
        let r = psd_sqrt(&p).unwrap();
        assert!(r.matmul(&r).unwrap().max_abs_diff(&p) < 1e-11);
        assert!(r.hermitian_defect() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_group_law(seed in any::<u64>(), n in 1usize..9, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, n);
        let lhs = exp_i_hermitian(&h, s).unwrap().matmul(&exp_i_hermitian(&h, t).unwrap()).unwrap();
        let rhs = exp_i_hermitian(&h, s + t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
        let u = exp_i_hermitian(&h, s).unwrap();
        let uu = u.matmul(&u.adjoint()).unwrap();
        prop_assert!(uu.max_abs_diff(&SquareMatrix::identity(n).unwrap()) < 1e-12);
    }

    #[test]
    fn det_multiplicative(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        let ab = a.matmul(&b).unwrap().determinant();
        let prod = a.determinant() * b.determinant();
        prop_assert!((ab - prod).norm() <= 1e-10 * prod.norm().max(1e-300) + 1e-13);
    }

    #[test]
    fn eigen_trace_identity(seed in any::<u64>(), n in 1usize..12) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, n);
        let s = general_eigenvalues(&a).unwrap();
        prop_assert!((s.sum() - a.trace()).norm() < 1e-10 * (1.0 + a.frobenius_norm()));
        prop_assert_eq!(s.len(), n);
    }
}
