//! Wave packets certifying `[√(ω² + B²), ∞)` in the essential spectrum.
//!
//! In our gauge the fiber at momentum `ξ` is centred at `y = -ξB/a²`, so the
//! packet superposes `g(y + ξB/a²) e^{iξx}` over a momentum window `E`.

use serde::{Deserialize, Serialize};

use super::cutoff::Cutoff;
use super::{Construction, Quasimode, QuasimodeMeta};
use crate::error::{Error, Result};
use crate::hamiltonian::{AssemblyOptions, Scheme};
use crate::model::{Grid2D, ModelParams};
use crate::quad::Composite;
use crate::sparse::C64;

/// Momentum window `(δ₁, δ₂)` with `δ_{1,2} = √((μ̃ ∓ ε) a²)/ω`, `μ̃ = μ - a`.
pub fn build_E_window(mu: f64, eps: f64, omega: f64, b_field: f64) -> Result<(f64, f64)> {
    let a2 = omega * omega + b_field * b_field;
    let mu_tilde = mu - a2.sqrt();
    if !(mu_tilde > eps) || !(eps >= 0.0) {
        return Err(Error::WindowEmpty { mu_tilde, eps });
    }
    Ok((((mu_tilde - eps) * a2).sqrt() / omega, ((mu_tilde + eps) * a2).sqrt() / omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketOptions {
    pub k: f64,
    pub alpha: f64,
    pub m: f64,
    /// Grid spacing in both directions.
    pub h: f64,
    /// Minimum number of Gauss-Legendre nodes in `ξ`.
    pub min_nodes: usize,
    pub scheme: Scheme,
}

impl PacketOptions {
    pub fn new(k: f64) -> Self {
        PacketOptions { k, alpha: 2.0, m: 8.0, h: 0.1, min_nodes: 200, scheme: Scheme::DirectCentral }
    }
}

/// Largest `m` tried before giving up on the norm bound.
const MAX_M: f64 = 64.0;

/// `η` on `(1, m)`: plateau `[1.25, m - 0.25]`.
pub fn eta_profile(m: f64) -> Cutoff {
    Cutoff::Plateau { lo: 1.0, hi: m, ramp: 0.25 }
}

/// `χ` on `(-1, 1)`: plateau `[-0.75, 0.75]`.
pub fn packet_chi() -> Cutoff {
    Cutoff::Plateau { lo: -1.0, hi: 1.0, ramp: 0.25 }
}

/// Squared relative residual bound `70 ε² ‖η‖²∞ ‖χ‖²∞`.
pub fn packet_residual_bound(eps: f64, m: f64) -> f64 {
    70.0 * eps * eps * eta_profile(m).sup_norm().powi(2) * packet_chi().sup_norm().powi(2)
}

/// Half-height beyond which the Gaussian factor is below `1e-17` for every
/// momentum in the window; the window is cut there instead of at `y = ±k`.
fn y_extent(a: f64, b_field: f64, xi_max: f64, k: f64) -> f64 {
    let centre = xi_max * b_field / (a * a);
    (centre + (2.0 * 40.0 / a).sqrt()).min(k)
}

/// The packet `φ_{k,α,m}` sampled on its own window grid
/// `[k, mk] × [-Y, Y]` (one extra cell on each side). `m` is doubled until
/// `‖φ‖² ≥ 1/64`.
pub fn build_subcritical_packet(params: &ModelParams, mu: f64, eps: f64, opts: &PacketOptions) -> Result<Quasimode> {
    let (omega, b) = (params.omega, params.b_field);
    let (d1, d2) = build_E_window(mu, eps, omega, b)?;
    let mut m = opts.m;
    loop {
        let q = sample_packet(params, mu, eps, d1, d2, m, opts)?;
        if q.l2_norm().powi(2) >= 1.0 / 64.0 {
            return Ok(q);
        }
        m *= 2.0;
        if m > MAX_M {
            return Err(Error::QuadratureUnderResolved { m: m as usize });
        }
    }
}

fn sample_packet(
    params: &ModelParams,
    mu: f64,
    eps: f64,
    d1: f64,
    d2: f64,
    m: f64,
    opts: &PacketOptions,
) -> Result<Quasimode> {
    let (omega, b) = (params.omega, params.b_field);
    let a2 = omega * omega + b * b;
    let a = a2.sqrt();
    let k = opts.k;
    let (xlo, xhi) = (k - opts.h, m * k + opts.h);
    let ymax = y_extent(a, b, d2, k) + opts.h;
    let grid = Grid2D::window(0.5 * (xlo + xhi), 0.0, 0.5 * (xhi - xlo), ymax, opts.h, opts.h)?;

    // enough nodes to follow the phase ξ(x - αk) across the window
    let spread = (grid.x_range().1 - opts.alpha * k).abs().max((grid.x_range().0 - opts.alpha * k).abs());
    let nodes = opts.min_nodes.max((2.0 * (d2 - d1) * spread) as usize + 32);
    let quad = Composite::new(nodes).nodes(d1, d2, 1);

    let vol = d2 - d1;
    let pref = 1.0 / (2.0 * std::f64::consts::PI * vol).sqrt();
    let gnorm = (a / std::f64::consts::PI).powf(0.25);
    let eta = eta_profile(m);
    let chi = packet_chi();
    let ex: Vec<f64> = (0..grid.nx).map(|i| eta.eval(grid.x(i) / k)).collect();
    let cy: Vec<f64> = (0..grid.ny).map(|j| chi.eval(grid.y(j) / k)).collect();

    let mut values = vec![C64::new(0.0, 0.0); grid.dim()];
    for &(xi, w) in &quad {
        let shift = xi * b / a2;
        let col: Vec<f64> = (0..grid.ny)
            .map(|j| {
                let z = grid.y(j) + shift;
                w * pref * gnorm * (-0.5 * a * z * z).exp() * cy[j]
            })
            .collect();
        let row: Vec<C64> = (0..grid.nx).map(|i| C64::from_polar(ex[i], xi * (grid.x(i) - opts.alpha * k))).collect();
        for j in 0..grid.ny {
            if col[j] == 0.0 {
                continue;
            }
            let base = grid.index(0, j);
            for i in 0..grid.nx {
                values[base + i] += row[i] * col[j];
            }
        }
    }
    Ok(Quasimode {
        grid,
        values,
        mu,
        params: params.clone(),
        construction: Construction::SubcriticalPacket,
        assembly: AssemblyOptions::new(opts.scheme),
        meta: QuasimodeMeta {
            k: Some(k),
            alpha: Some(opts.alpha),
            m: Some(m),
            eps: Some(eps),
            nodes: Some(nodes),
            ..Default::default()
        },
    })
}
