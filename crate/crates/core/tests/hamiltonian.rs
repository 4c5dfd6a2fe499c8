use magspec_core::eigensolver::{lowest_eigs, lowest_eigs_with, LanczosOptions};
use magspec_core::hamiltonian::*;
use magspec_core::model::*;
use magspec_core::sparse::{HermitianOperator, SparseHermitian, C64};
use magspec_core::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn dense_lowest(h: &SparseHermitian) -> f64 {
    let n = h.dim();
    let d = h.to_dense_c64();
    let m = DMatrix::from_fn(n, n, |i, j| d[i][j]);
    m.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn ground(h: &SparseHermitian) -> f64 {
    let mut o = LanczosOptions::new(1, 1e-8, 5000, 3);
    o.filter_degree = 12;
    let r = lowest_eigs_with(h, &o).unwrap();
    assert!(r.converged);
    r.eigenvalues[0]
}

fn real_vector(n: usize, seed: u64) -> Vec<C64> {
    // small LCG is enough for test data
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..n)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            C64::new((s >> 11) as f64 / (1u64 << 53) as f64 - 0.5, 0.0)
        })
        .collect()
}

#[test]
fn assembled_matrices_are_exactly_hermitian() {
    let g = Grid2D::new(3.0, 4.0, 31, 41, Boundary::Dirichlet).unwrap();
    let v = PotentialSpec::square_well(1.0, 1.0, 101).unwrap();
    for scheme in [Scheme::Peierls, Scheme::DirectCentral] {
        for bc in [Boundary::Dirichlet, Boundary::Neumann] {
            let g = Grid2D { bc, ..g };
            let h = assemble(&ModelParams::delta(1.0, 1.3, -1.0), &g, scheme).unwrap();
            assert_eq!(h.hermitian_defect(), 0.0);
            let h = assemble(&ModelParams::regular(1.0, 1.3, -2.0, v.clone()), &g, scheme).unwrap();
            assert_eq!(h.hermitian_defect(), 0.0);
        }
    }
}

#[test]
fn free_box_modes() {
    let (nx, ny) = (41, 61);
    let g = Grid2D::new(2.0, 3.0, nx, ny, Boundary::Dirichlet).unwrap();
    let h = assemble(&ModelParams::delta(0.0, 0.0, 0.0), &g, Scheme::Peierls).unwrap();
    let e = ground(&h);
    let mode = |n: usize, h: f64| 4.0 / (h * h) * (std::f64::consts::PI / (2.0 * (n + 1) as f64)).sin().powi(2);
    assert!((e - mode(nx, g.hx) - mode(ny, g.hy)).abs() < 1e-8);
    // continuum box is [-(l + h), l + h] because the wall sits one spacing out
    let cont = std::f64::consts::PI.powi(2) / 4.0 * (1.0 / 2.1f64.powi(2) + 1.0 / 3.1f64.powi(2));
    assert!((e - cont).abs() < 1e-3, "{e} vs {cont}");
}

#[test]
fn landau_ground_near_one_on_small_box() {
    let g = Grid2D::new(6.0, 6.0, 121, 121, Boundary::Dirichlet).unwrap();
    let h = assemble(&ModelParams::delta(0.0, 1.0, 0.0), &g, Scheme::Peierls).unwrap();
    let e = ground(&h);
    assert!((e - 1.0).abs() < 0.01, "{e}");
}

#[test]
fn real_form_identity() {
    let g = Grid2D::new(3.0, 3.0, 41, 41, Boundary::Dirichlet).unwrap();
    let p = ModelParams::delta(1.0, 1.0, -1.0);
    let h = assemble(&p, &g, Scheme::DirectCentral).unwrap();
    let t = assemble_nonmagnetic_tilde(&p, &g).unwrap();
    for seed in 0..10 {
        let u = real_vector(g.dim(), seed);
        let a = form_value(&h, &u).unwrap();
        let b = form_value(&t, &u).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn delta_term_vanishes_away_from_the_line() {
    let g = Grid2D::new(3.0, 3.0, 31, 31, Boundary::Dirichlet).unwrap();
    let h1 = assemble(&ModelParams::delta(1.0, 1.0, -1.0), &g, Scheme::Peierls).unwrap();
    let h0 = assemble(&ModelParams::delta(1.0, 1.0, 0.0), &g, Scheme::Peierls).unwrap();
    let i0 = g.zero_column().unwrap();
    let mut u = real_vector(g.dim(), 4);
    for j in 0..g.ny {
        u[g.index(i0, j)] = C64::new(0.0, 0.0);
    }
    assert_eq!(form_value(&h1, &u).unwrap(), form_value(&h0, &u).unwrap());
    assert_eq!(form_value(&h1, &vec![C64::new(0.0, 0.0); g.dim()]), Err(Error::ZeroVector));
}

#[test]
fn tilde_at_zero_field_is_direct_central() {
    let g = Grid2D::new(3.0, 3.0, 31, 31, Boundary::Dirichlet).unwrap();
    let p = ModelParams::delta(1.2, 0.0, -1.0);
    let t = assemble_nonmagnetic_tilde(&p, &g).unwrap();
    let h = assemble(&p, &g, Scheme::DirectCentral).unwrap();
    assert_eq!(t.to_complex(), h);
}

#[test]
fn tilde_ground_bounds_the_magnetic_ground_and_is_real() {
    let g = Grid2D::new(6.0, 6.0, 121, 121, Boundary::Dirichlet).unwrap();
    let p = ModelParams::delta(1.0, 1.0, -1.0);
    let t = assemble_nonmagnetic_tilde(&p, &g).unwrap();
    let r = lowest_eigs(&t, 1, 1e-8, 5000, 0).unwrap();
    assert!(r.converged);
    // the real ground vector is a trial function for the magnetic form
    let hm = assemble(&p, &g, Scheme::DirectCentral).unwrap();
    let m = lowest_eigs(&hm, 1, 1e-8, 5000, 0).unwrap();
    assert!(m.eigenvalues[0] <= r.eigenvalues[0] + 1e-7, "{} {}", m.eigenvalues[0], r.eigenvalues[0]);
    assert!(r.eigenvalues[0] > 0.0);
    let v = &r.eigenvectors[0];
    let big = v.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
    let phase = big.conj() / big.norm();
    let imag = v.iter().map(|x| (x * phase).im.abs()).fold(0.0, f64::max);
    assert!(imag <= 1e-8, "{imag}");
}

#[test]
fn peierls_and_central_agree_to_second_order() {
    let p = ModelParams::delta(1.0, 1.0, -1.0);
    let opts = AssemblyOptions { scheme: Scheme::Peierls, delta_coupling: DeltaCoupling::FormConsistent };
    let gaps: Vec<f64> = [(61, 61), (121, 121)]
        .iter()
        .map(|&(nx, ny)| {
            let g = Grid2D::new(5.0, 5.0, nx, ny, Boundary::Dirichlet).unwrap();
            let a = ground(&assemble_with(&p, &g, opts).unwrap());
            let b = ground(&assemble(&p, &g, Scheme::DirectCentral).unwrap());
            (a - b).abs()
        })
        .collect();
    let ratio = gaps[0] / gaps[1];
    assert!((3.0..5.0).contains(&ratio), "gap ratio {ratio} from {gaps:?}");
}

#[test]
fn mirror_is_an_exact_similarity() {
    let g = Grid2D::new(3.0, 2.0, 31, 21, Boundary::Dirichlet).unwrap();
    let perm = mirror_permutation(&g);
    for scheme in [Scheme::Peierls, Scheme::DirectCentral] {
        let h = assemble(&ModelParams::delta(1.0, 1.5, -1.7), &g, scheme).unwrap();
        let m = assemble(&ModelParams::delta(1.0, 1.5, 1.7), &g, scheme).unwrap();
        assert_eq!(h.permuted(&perm), m);
    }
    let v = PotentialSpec::square_well(0.5, 2.0, 101).unwrap();
    let h = assemble(&ModelParams::regular(1.0, 1.5, -1.7, v), &g, Scheme::Peierls).unwrap();
    assert_eq!(h.permuted(&perm), h);
}

#[test]
fn models_coincide_at_zero_coupling() {
    let g = Grid2D::new(3.0, 2.0, 31, 21, Boundary::Neumann).unwrap();
    let v = PotentialSpec::square_well(0.5, 2.0, 101).unwrap();
    for scheme in [Scheme::Peierls, Scheme::DirectCentral] {
        let a = assemble(&ModelParams::delta(1.0, 1.5, 0.0), &g, scheme).unwrap();
        let b = assemble(&ModelParams::regular(1.0, 1.5, 0.0, v.clone()), &g, scheme).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn subcritical_and_critical_are_nonnegative() {
    let g = Grid2D::new(6.0, 6.0, 121, 121, Boundary::Dirichlet).unwrap();
    for lambda in [-1.0, -2.0] {
        let e = ground(&assemble(&ModelParams::delta(1.0, 1.0, lambda), &g, Scheme::Peierls).unwrap());
        assert!(e >= -1e-3, "lambda {lambda}: {e}");
    }
}

#[test]
fn enlarging_the_box_never_raises_the_ground_energy() {
    let p = ModelParams::delta(1.0, 1.0, -3.0);
    let mut last = f64::INFINITY;
    for ly in [2.0, 4.0, 6.0] {
        let g = Grid2D::with_spacing(3.0, ly, 0.1, 0.1, Boundary::Dirichlet).unwrap();
        let e = ground(&assemble(&p, &g, Scheme::Peierls).unwrap());
        assert!(e <= last + 1e-9);
        last = e;
    }
}

#[test]
fn lanczos_matches_dense_on_small_grid() {
    let g = Grid2D::new(3.0, 3.0, 21, 21, Boundary::Dirichlet).unwrap();
    let h = assemble(&ModelParams::delta(1.0, 1.0, -1.0), &g, Scheme::Peierls).unwrap();
    let e = lowest_eigs(&h, 1, 1e-10, 3000, 0).unwrap().eigenvalues[0];
    assert!((e - dense_lowest(&h)).abs() < 1e-8);
}

#[test]
fn misaligned_grid_is_rejected_but_far_windows_are_fine() {
    let g = Grid2D::window(0.05, 0.0, 1.0, 1.0, 0.1, 0.1).unwrap();
    assert_eq!(assemble(&ModelParams::delta(1.0, 1.0, -1.0), &g, Scheme::Peierls), Err(Error::GridMisaligned));
    let g = Grid2D::window(20.0, 0.0, 1.0, 1.0, 0.1, 0.1).unwrap();
    assert!(assemble(&ModelParams::delta(1.0, 1.0, -1.0), &g, Scheme::Peierls).is_ok());
}

#[test]
fn matrix_market_header() {
    let g = Grid2D::new(1.0, 1.0, 3, 3, Boundary::Dirichlet).unwrap();
    let h = assemble(&ModelParams::delta(1.0, 1.0, -1.0), &g, Scheme::Peierls).unwrap();
    let mm = h.to_matrix_market();
    assert!(mm.starts_with("%%MatrixMarket matrix coordinate complex hermitian\n9 9 "));
    assert_eq!(mm.lines().count(), 2 + (h.nnz() + 9) / 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn real_form_identity_holds_for_any_parameters(omega in 0.1f64..3.0, b in 0.0f64..3.0, lambda in -4.0f64..0.0, seed in 0u64..1000) {
        let g = Grid2D::new(2.0, 2.0, 21, 21, Boundary::Neumann).unwrap();
        let p = ModelParams::delta(omega, b, lambda);
        let h = assemble(&p, &g, Scheme::DirectCentral).unwrap();
        let t = assemble_nonmagnetic_tilde(&p, &g).unwrap();
        let u = real_vector(g.dim(), seed);
        let (a, c) = (form_value(&h, &u).unwrap(), form_value(&t, &u).unwrap());
        prop_assert!((a - c).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn gershgorin_brackets_rayleigh_quotients(b in 0.0f64..3.0, lambda in -4.0f64..0.0, seed in 0u64..1000) {
        let g = Grid2D::new(2.0, 2.0, 21, 21, Boundary::Dirichlet).unwrap();
        let h = assemble(&ModelParams::delta(1.0, b, lambda), &g, Scheme::Peierls).unwrap();
        let (lo, hi) = h.spectral_bounds();
        let q = form_value(&h, &real_vector(g.dim(), seed)).unwrap();
        prop_assert!(lo <= q && q <= hi);
    }
}
