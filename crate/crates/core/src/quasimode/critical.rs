//! Weyl sequences at the critical coupling `λ = -2ω`.
//!
//! `ψ_n = h(xy) e^{i√μ y} χ(y/n)` with `h(t) = √ω e^{-ω|t|}`, the zero-energy
//! state of `L₀`. On the lattice each row uses the exact discrete bound state
//! of the matched δ coupling, and the wavenumber is the lattice one, so the
//! remainder comes only from the `y` dependence of the profile.

use super::cutoff::Cutoff;
use super::{Construction, Quasimode, QuasimodeMeta};
use crate::error::{Error, Result};
use crate::hamiltonian::{AssemblyOptions, DeltaCoupling, Scheme};
use crate::model::{Grid2D, ModelKind, ModelParams};
use crate::sparse::C64;

/// Default spacing of the critical window grid.
pub const CRITICAL_H: f64 = 0.025;

/// Window grid for `ψ_n`: `x` out to 40 decay lengths at `y = n`, `y` over
/// `[n, 2n]` with two spare cells.
pub fn critical_grid(omega: f64, n: f64, h: f64) -> Result<Grid2D> {
    let lx = 40.0 / (omega * n);
    let (ylo, yhi) = (n - 2.0 * h, 2.0 * n + 2.0 * h);
    Grid2D::window(0.0, 0.5 * (ylo + yhi), lx, 0.5 * (yhi - ylo), h, h)
}

pub fn build_critical(params: &ModelParams, mu: f64, n: f64, h: f64) -> Result<Quasimode> {
    if params.kind != ModelKind::DeltaLine {
        return Err(Error::UnsupportedCombination("critical builder handles the delta model".into()));
    }
    let offset = params.lambda + 2.0 * params.omega;
    if offset.abs() > 1e-12 * params.omega.max(1.0) {
        return Err(Error::NotCritical { offset });
    }
    if !(mu >= 0.0) {
        return Err(Error::UnsupportedCombination(format!("critical sequence needs mu >= 0, got {mu}")));
    }
    if !(n >= 1.0) {
        return Err(Error::InvalidGrid(format!("n must be at least 1, got {n}")));
    }
    let grid = critical_grid(params.omega, n, h)?;
    let i0 = grid.zero_column().ok_or(Error::GridMisaligned)?;
    let (hx, hy) = (grid.hx, grid.hy);
    let chi = Cutoff::ChiFixed;
    // e^{iκy} solves the lattice equation -Δ_h u = μ u exactly
    let kappa = if mu > 0.0 { 2.0 / hy * (mu.sqrt() * hy / 2.0).min(1.0).asin() } else { 0.0 };
    let b = params.b_field;

    let mut values = vec![C64::new(0.0, 0.0); grid.dim()];
    for j in 0..grid.ny {
        let y = grid.y(j);
        let c = chi.eval(y / n);
        if c == 0.0 {
            continue;
        }
        let w = DeltaCoupling::Matched.weight(params.lambda, y, hx).abs();
        let s = (w * hx * hx / 2.0).asinh();
        let r = (-s).exp();
        // Σ_i hx r^{2|i-i0|} = hx (1 + r²)/(1 - r²), scaled to 1/y
        let amp = (1.0 / (y * hx * (1.0 + r * r) / (1.0 - r * r))).sqrt();
        for i in 0..grid.nx {
            let x = grid.x(i);
            let d = (i as i64 - i0 as i64).unsigned_abs() as i32;
            let m = amp * r.powi(d) * c;
            values[grid.index(i, j)] = C64::from_polar(m, kappa * y - b * x * y);
        }
    }
    Ok(Quasimode {
        grid,
        values,
        mu,
        params: params.clone(),
        construction: Construction::Critical,
        assembly: AssemblyOptions { scheme: Scheme::Peierls, delta_coupling: DeltaCoupling::Matched },
        meta: QuasimodeMeta { n: Some(n), ..Default::default() },
    })
}
