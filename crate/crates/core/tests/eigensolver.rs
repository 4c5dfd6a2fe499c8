use magspec_core::eigensolver::*;
use magspec_core::sparse::{dot, SparseHermitian, SparseSymmetric, C64};
use magspec_core::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

fn random_hermitian(n: usize, seed: u64) -> SparseHermitian {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut u = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    let mut rows = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        rows[i][i] = C64::new(u(), 0.0);
        for j in 0..i {
            let v = C64::new(u(), u());
            rows[i][j] = v;
            rows[j][i] = v.conj();
        }
    }
    SparseHermitian::from_dense(&rows)
}

fn dense_eigs(h: &SparseHermitian) -> Vec<f64> {
    let n = h.dim();
    let d = h.to_dense_c64();
    let m = DMatrix::from_fn(n, n, |i, j| d[i][j]);
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn diagonal_matrix() {
    let n = 100;
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { (i + 1) as f64 } else { 0.0 }).collect()).collect();
    let h = SparseSymmetric::from_dense(&rows);
    let r = lowest_eigs(&h, 3, 1e-10, 2000, 7).unwrap();
    assert!(r.converged);
    for (i, e) in r.eigenvalues.iter().enumerate() {
        assert!((e - (i + 1) as f64).abs() < 1e-10);
    }
    assert!(r.residual_norms.iter().all(|x| *x < 1e-10));
}

#[test]
fn random_hermitian_matches_dense() {
    for seed in 0..20 {
        let h = random_hermitian(200, 1000 + seed);
        let dense = dense_eigs(&h);
        let r = lowest_eigs(&h, 4, 1e-9, 5000, seed).unwrap();
        assert!(r.converged, "seed {seed}: {:?}", r.residual_norms);
        for (i, e) in r.eigenvalues.iter().enumerate() {
            assert!((e - dense[i]).abs() < 1e-8, "seed {seed} #{i}: {e} vs {}", dense[i]);
        }
    }
}

#[test]
fn filtered_run_matches_dense() {
    let h = random_hermitian(300, 5);
    let dense = dense_eigs(&h);
    let mut opts = LanczosOptions::new(5, 1e-9, 3000, 3);
    opts.filter_degree = 8;
    let r = lowest_eigs_with(&h, &opts).unwrap();
    assert!(r.converged, "{:?}", r.residual_norms);
    for (i, e) in r.eigenvalues.iter().enumerate() {
        assert!((e - dense[i]).abs() < 1e-8, "#{i}: {e} vs {}", dense[i]);
    }
}

#[test]
fn vectors_are_orthonormal_and_deterministic() {
    let h = random_hermitian(150, 9);
    let a = lowest_eigs(&h, 5, 1e-9, 3000, 42).unwrap();
    let b = lowest_eigs(&h, 5, 1e-9, 3000, 42).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
    assert_eq!(a.residual_norms, b.residual_norms);
    for i in 0..5 {
        for j in 0..5 {
            let d = dot(&a.eigenvectors[i], &a.eigenvectors[j]).norm();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((d - expect).abs() < 1e-8);
        }
    }
}

#[test]
fn dimension_guard() {
    let h = random_hermitian(4, 1);
    assert!(matches!(lowest_eigs(&h, 4, 1e-8, 100, 0), Err(Error::DimensionTooSmall { .. })));
    // small problems exhaust the space and are exact
    let r = lowest_eigs(&h, 3, 1e-10, 100, 0).unwrap();
    let d = dense_eigs(&h);
    for i in 0..3 {
        assert!((r.eigenvalues[i] - d[i]).abs() < 1e-12);
    }
}

#[test]
fn rayleigh_refine_examples() {
    let h = random_hermitian(80, 2);
    let r = lowest_eigs(&h, 1, 1e-11, 3000, 1).unwrap();
    let v = &r.eigenvectors[0];
    let (e, res) = rayleigh_refine(&h, v).unwrap();
    assert!((e - r.eigenvalues[0]).abs() < 1e-12);
    assert!(res < 1e-10);
    // a perturbation of size ε gives a residual of order ε
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    let w = seeded_vector(80, &mut rng);
    for eps in [1e-3, 1e-5] {
        let p: Vec<C64> = v.iter().zip(&w).map(|(a, b)| a + b * eps).collect();
        let (_, res) = rayleigh_refine(&h, &p).unwrap();
        assert!(res > 0.01 * eps && res < 10.0 * eps, "{res} at {eps}");
    }
    // global phase does not matter
    let rotated: Vec<C64> = v.iter().map(|x| x * C64::from_polar(1.0, 0.7)).collect();
    assert!((rayleigh_refine(&h, &rotated).unwrap().1 - res).abs() < 1e-12);
    assert_eq!(rayleigh_refine(&h, &vec![C64::new(0.0, 0.0); 80]), Err(Error::ZeroVector));
}

#[test]
fn oscillator_as_matrix() {
    // h_osc with a = √2 on [-10, 10], n = 2001
    let n = 2001;
    let hstep = 20.0 / (n - 1) as f64;
    let a2 = 2.0;
    let mut t = Vec::new();
    for i in 0..n {
        let y = -10.0 + i as f64 * hstep;
        t.push((i, i, 2.0 / (hstep * hstep) + a2 * y * y));
        if i + 1 < n {
            t.push((i, i + 1, -1.0 / (hstep * hstep)));
            t.push((i + 1, i, -1.0 / (hstep * hstep)));
        }
    }
    let h = SparseSymmetric::from_triplets(n, t);
    let mut opts = LanczosOptions::new(1, 1e-7, 5000, 0);
    opts.filter_degree = 20;
    let r = lowest_eigs_with(&h, &opts).unwrap();
    assert!(r.converged);
    assert!((r.eigenvalues[0] - 2f64.sqrt()).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn jacobi_matches_dense(seed in 0u64..1000, n in 2usize..12) {
        let h = random_hermitian(n, seed);
        let d = h.to_dense_c64();
        let (vals, vecs) = jacobi_hermitian(&d);
        let dense = dense_eigs(&h);
        for i in 0..n {
            prop_assert!((vals[i] - dense[i]).abs() < 1e-12);
            // A v = λ v
            for r in 0..n {
                let av: C64 = (0..n).map(|c| d[r][c] * vecs[c][i]).sum();
                prop_assert!((av - vecs[r][i] * vals[i]).norm() < 1e-12);
            }
        }
    }
}
