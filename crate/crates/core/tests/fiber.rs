use magspec_core::comparison::Tridiag;
use magspec_core::fiber::*;
use magspec_core::model::*;
use magspec_core::Error;
use proptest::prelude::*;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn neumann(n: f64, h: f64) -> Grid1D {
    Grid1D::with_spacing(n, h, Boundary::Neumann).unwrap()
}

#[test]
fn centred_fiber_approaches_the_oscillator() {
    // Richardson pair on a wide strip: a = √2 ground level
    let (c, f) = (neumann(10.0, 0.02), neumann(10.0, 0.01));
    let e1 = fiber_operator(1.0, 1.0, 0.0, c).unwrap().eigenvalue(0);
    let e2 = fiber_operator(1.0, 1.0, 0.0, f).unwrap().eigenvalue(0);
    assert!(((4.0 * e2 - e1) / 3.0 - SQRT2).abs() < 1e-8);
}

#[test]
fn zero_field_fiber_is_the_shifted_oscillator() {
    let g = neumann(8.0, 0.02);
    let xi = 1.7;
    let t = fiber_operator(1.3, 0.0, xi, g).unwrap();
    let osc = Tridiag::schrodinger(g, |y| 1.69 * y * y);
    for k in 0..3 {
        assert!((t.eigenvalue(k) - osc.eigenvalue(k) - 1.69 * xi * xi / 1.69).abs() < 1e-10);
    }
}

#[test]
fn coarse_fiber_grid_is_rejected() {
    let g = neumann(5.0, 0.5);
    assert!(matches!(fiber_operator(1.0, 1.0, 0.0, g), Err(Error::GridTooCoarse { .. })));
}

#[test]
fn band_is_even_in_momentum() {
    let g = neumann(6.0, 0.02);
    for xi in [0.3, 2.0, 7.5] {
        let a = fiber_operator(1.0, 0.7, xi, g).unwrap().eigenvalue(0);
        let b = fiber_operator(1.0, 0.7, -xi, g).unwrap().eigenvalue(0);
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }
}

#[test]
fn band_minimum_at_n40_clears_the_threshold() {
    let p = ModelParams::delta(1.0, 1.0, 0.0);
    let b = band_scan(&p, 40.0, None, 201).unwrap();
    assert_eq!(b.xi_samples.len(), b.band_min.len());
    assert!(b.min >= SQRT2 - 0.05, "{}", b.min);
    assert!(b.min <= b.band_min.iter().cloned().fold(f64::INFINITY, f64::min) + 1e-14);
}

#[test]
fn band_deficit_does_not_grow_with_the_strip() {
    let p = ModelParams::delta(1.0, 1.0, 0.0);
    let d: Vec<f64> = [20.0, 40.0, 80.0]
        .iter()
        .map(|&n| (SQRT2 - band_scan(&p, n, None, 101).unwrap().min).max(0.0))
        .collect();
    assert!(d[2] <= 0.5 * d[1] + 1e-8, "{d:?}");
    let c = fit_inverse_n(&[20.0, 40.0, 80.0], &d);
    assert!(c.abs() < 1.0, "{c}");
}

#[test]
fn zero_field_band_minimum_sits_at_zero_momentum() {
    let p = ModelParams::delta(1.0, 0.0, 0.0);
    let b = band_scan(&p, 6.0, Some((-2.0, 2.0)), 41).unwrap();
    assert!(b.argmin.abs() < 1e-5, "{}", b.argmin);
    // Neumann oscillator value, extrapolated like the scan itself
    let h = b.h;
    let e1 = Tridiag::schrodinger(neumann(6.0, h), |y| y * y).eigenvalue(0);
    let e2 = Tridiag::schrodinger(Grid1D::new(6.0, 2 * ((12.0 / h).round() as usize) + 1, Boundary::Neumann).unwrap(), |y| y * y)
        .eigenvalue(0);
    assert!((b.min - (4.0 * e2 - e1) / 3.0).abs() < 1e-9);
}

#[test]
fn band_scan_needs_three_samples() {
    let p = ModelParams::delta(1.0, 1.0, 0.0);
    assert!(matches!(band_scan(&p, 5.0, None, 2), Err(Error::InvalidGrid(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn neumann_lies_below_dirichlet(xi in -6.0f64..6.0, b in 0.0f64..2.0) {
        let n = 4.0;
        let en = fiber_operator(1.0, b, xi, neumann(n, 0.02)).unwrap().eigenvalue(0);
        let ed = fiber_operator(1.0, b, xi, Grid1D::with_spacing(n, 0.02, Boundary::Dirichlet).unwrap()).unwrap().eigenvalue(0);
        prop_assert!(en <= ed + 1e-12);
    }

    #[test]
    fn band_exceeds_the_momentum_offset(xi in -20.0f64..20.0, b in 0.0f64..2.0, omega in 0.3f64..2.0) {
        let a2 = omega * omega + b * b;
        let e = fiber_operator(omega, b, xi, neumann(3.0, 0.02)).unwrap().eigenvalue(0);
        prop_assert!(e >= omega * omega * xi * xi / a2 - 1e-9);
    }
}

#[test]
fn bracketing_pieces_match_their_formulas() {
    let c = bracketing_lower_bound_sm(&ModelParams::delta(1.0, 1.0, -1.0), 2.0).unwrap();
    assert_eq!(c.piece("outer_plus"), Some(3.0));
    assert_eq!(c.piece("outer_minus"), Some(4.0));
    let m = c.pieces.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
    assert_eq!(c.overall_lower_bound, m);
    let crit = bracketing_lower_bound_sm(&ModelParams::delta(1.0, 1.0, -2.0), 5.0).unwrap();
    assert_eq!(crit.piece("outer_plus"), Some(0.0));
    assert!(matches!(
        bracketing_lower_bound_sm(&ModelParams::delta(1.0, 1.0, -3.0), 5.0),
        Err(Error::SupercriticalInput { .. })
    ));
}

#[test]
fn transverse_bound_matches_the_half_oscillators() {
    // λ = 0: plain oscillator of frequency ω
    assert!((transverse_ground(1.5, 0.0).unwrap() - 1.5).abs() < 1e-4);
    // critical: free on y > 0, so the bound collapses to 0
    assert!(transverse_ground(1.0, -2.0).unwrap().abs() < 0.05);
}

#[test]
fn certificate_lies_below_the_neumann_ground_state() {
    use magspec_core::eigensolver::lowest_eigs;
    use magspec_core::hamiltonian::{assemble, Scheme};
    let p = ModelParams::delta(1.0, 1.0, -1.0);
    let g = Grid2D::with_spacing(4.0, 4.0, 0.1, 0.1, Boundary::Neumann).unwrap();
    let h = assemble(&p, &g, Scheme::DirectCentral).unwrap();
    let r = lowest_eigs(&h, 3, 1e-8, 5000, 0).unwrap();
    let c = bracketing_lower_bound_sm(&p, 4.0).unwrap();
    for e in r.eigenvalues {
        assert!(c.overall_lower_bound <= e + 1e-6, "{} > {e}", c.overall_lower_bound);
    }
}

#[test]
fn regular_growth_is_quadratic_in_log_height() {
    let v = PotentialSpec::square_well(1.0, 1.0, 2001).unwrap();
    let p = ModelParams::regular(1.0, 1.0, -0.5, v.clone());
    let t = bracketing_growth_regular(&p, &v, 0.1, &[10.0, 100.0, 1000.0, 1e4]).unwrap();
    assert!((t.exponent - 2.0).abs() < 0.1, "{}", t.exponent);
    assert!(t.rows.windows(2).all(|w| w[1].bound > w[0].bound));
    // no attraction, ε small: (1 + ln n)² ω², up to the box bias of the 1D solve
    let t0 = bracketing_growth_regular(&p.with_lambda(0.0), &v, 1e-6, &[10.0]).unwrap();
    assert!((t0.rows[0].bound / (1.0 + 10f64.ln()).powi(2) - 1.0).abs() < 2e-3, "{:?}", t0);
    let strong = p.with_lambda(-20.0);
    assert!(matches!(bracketing_growth_regular(&strong, &v, 0.1, &[10.0]), Err(Error::NotSubcritical { .. })));
}
