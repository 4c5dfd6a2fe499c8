//! Landau-level orbitals for `ω = 0`, `λ = 0`.
//!
//! Each fiber `(ξ + By)² - ∂²_y` has the eigenfunctions `φ_n(y + ξ/B)` at
//! `(2n + 1)B`; a Gaussian superposition over `ξ` is localized in both
//! directions and is an eigenfunction of the continuum operator.

use super::{Construction, Quasimode, QuasimodeMeta};
use crate::error::{Error, Result};
use crate::hamiltonian::{AssemblyOptions, Scheme};
use crate::model::{Grid2D, ModelParams};
use crate::quad::Composite;
use crate::sparse::C64;

/// Normalized Hermite functions `φ_0 … φ_n` at `z` (unit frequency).
pub fn hermite_functions(n: usize, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let p0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * z * z).exp();
    out.push(p0);
    if n >= 1 {
        out.push(std::f64::consts::SQRT_2 * z * p0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * z * out[k - 1] - ((kf - 1.0) / kf).sqrt() * out[k - 2];
        out.push(next);
    }
    out
}

/// Orbital of level `level` centred at `centre` with momentum spread `sigma`,
/// sampled on `grid` in the Landau gauge. Its energy is `(2·level + 1)B`.
pub fn landau_orbital(
    params: &ModelParams,
    grid: Grid2D,
    level: usize,
    sigma: f64,
    centre: (f64, f64),
    scheme: Scheme,
) -> Result<Quasimode> {
    let b = params.b_field;
    if !(b > 0.0) || params.omega != 0.0 || params.lambda != 0.0 {
        return Err(Error::UnsupportedCombination("Landau orbitals need omega = 0, lambda = 0, B > 0".into()));
    }
    let (x0, y0) = centre;
    let xi0 = -b * y0;
    let quad = Composite::new(16).nodes(xi0 - 8.0 * sigma, xi0 + 8.0 * sigma, 8);
    let sb = b.sqrt();
    let scale = b.powf(0.25);
    let mut values = vec![C64::new(0.0, 0.0); grid.dim()];
    for &(xi, w) in &quad {
        let weight = w * (-0.5 * ((xi - xi0) / sigma).powi(2)).exp();
        let row: Vec<C64> = (0..grid.nx).map(|i| C64::from_polar(1.0, xi * (grid.x(i) - x0))).collect();
        for j in 0..grid.ny {
            let z = sb * (grid.y(j) + xi / b);
            let amp = weight * scale * hermite_functions(level, z)[level];
            if amp.abs() < 1e-300 {
                continue;
            }
            let base = grid.index(0, j);
            for (i, r) in row.iter().enumerate() {
                values[base + i] += r * amp;
            }
        }
    }
    Ok(Quasimode {
        grid,
        values,
        mu: (2 * level + 1) as f64 * b,
        params: params.clone(),
        construction: Construction::LandauOrbital,
        assembly: AssemblyOptions::new(scheme),
        meta: QuasimodeMeta { level: Some(level), ..Default::default() },
    })
}

/// Rayleigh-Ritz values of `H` on the span of `orbitals` and the Frobenius
/// norm `r` of the residual block. `H` then has as many eigenvalues (with
/// multiplicity) as there are orbitals, each within `r` of a distinct Ritz value.
pub fn ritz_certificate<H: crate::sparse::HermitianOperator + ?Sized>(h: &H, orbitals: &[Quasimode]) -> Result<(Vec<f64>, f64)> {
    use crate::eigensolver::jacobi_hermitian;
    use crate::sparse::dot;
    let m = orbitals.len();
    let n = h.dim();
    // Gram-Schmidt twice for stability
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m);
    for q in orbitals {
        if q.values.len() != n {
            return Err(Error::GridMismatch { grid: q.values.len(), dim: n });
        }
        let mut v = q.values.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &v);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = crate::sparse::norm(&v);
        if !(nv > 1e-8 * crate::sparse::norm(&q.values)) {
            return Err(Error::ZeroVector);
        }
        v.iter_mut().for_each(|x| *x /= nv);
        basis.push(v);
    }
    let hb: Vec<Vec<C64>> = basis
        .iter()
        .map(|v| {
            let mut out = vec![C64::new(0.0, 0.0); n];
            h.apply(v, &mut out);
            out
        })
        .collect();
    let small: Vec<Vec<C64>> = (0..m).map(|i| (0..m).map(|j| dot(&basis[i], &hb[j])).collect()).collect();
    let (vals, vecs) = jacobi_hermitian(&small);
    let mut frob = 0.0;
    for (k, &theta) in vals.iter().enumerate() {
        let mut r = vec![C64::new(0.0, 0.0); n];
        for j in 0..m {
            let c = vecs[j][k];
            for t in 0..n {
                r[t] += c * (hb[j][t] - basis[j][t] * theta);
            }
        }
        frob += crate::sparse::norm(&r).powi(2);
    }
    Ok((vals, frob.sqrt()))
}
