//! Trial functions showing that the discrete spectrum below `√(ω² + B²)` is
//! non-empty.
//!
//! For real `u` the magnetic form equals the form of the nonmagnetic operator
//! `-Δ + (ω² + B²)y² + λy²V(xy)`, also on the lattice (DirectCentral scheme).
//! The trial `φ = k^{-1/2} χ(x/k) g(y)` with `g` the oscillator ground state
//! is separable, so its form is evaluated without assembling the 2D matrix.

use serde::{Deserialize, Serialize};

use crate::comparison::Tridiag;
use crate::error::{Error, Result};
use crate::hamiltonian::{assemble_nonmagnetic_tilde, form_value};
use crate::model::{Boundary, Grid1D, Grid2D, ModelKind, ModelParams};
use crate::quasimode::Cutoff;
use crate::sparse::C64;

/// Profile in `x/k`: plateau on `[-1/2, 1/2]`, so the minimum there is 1.
pub fn trial_chi() -> Cutoff {
    Cutoff::Plateau { lo: -1.0, hi: 1.0, ramp: 0.5 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub k: f64,
    /// Rayleigh quotient of the trial function.
    pub value: f64,
    /// `value - e_osc`.
    pub offset: f64,
}

/// Fit `offset ≈ a/k² - b/k` by least squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetFit {
    /// Coefficient of `1/k²` (kinetic term in `x`).
    pub kinetic: f64,
    /// Coefficient of `1/k`; positive for an attractive potential.
    pub attraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub threshold: f64,
    /// Ground energy of the discrete transverse oscillator, the lattice value
    /// of the threshold.
    pub e_osc: f64,
    pub rows: Vec<TrialRow>,
    /// First `k` whose value lies below both `threshold` and `e_osc`.
    pub first_below: Option<f64>,
    pub fit: Option<OffsetFit>,
}

/// Spacing of the trial grids.
pub const TRIAL_H: f64 = 0.05;

/// Lattice Rayleigh quotient of the separable trial `χ(x/k) g(y)` on the
/// grid `[-k, k] × [-Y, Y]`, together with the oscillator ground energy.
pub fn trial_value(params: &ModelParams, k: f64, h: f64) -> Result<(f64, f64)> {
    let a2 = params.omega * params.omega + params.b_field * params.b_field;
    let ly = 8.0 / a2.sqrt().sqrt();
    let gy = Grid1D::with_spacing(ly, h, Boundary::Dirichlet)?;
    let gx = Grid1D::with_spacing(k, h, Boundary::Dirichlet)?;
    let ty = Tridiag::schrodinger(gy, |y| a2 * y * y);
    let e_osc = ty.eigenvalue(0);
    let v = ty.eigenvector(e_osc)?;
    let chi = trial_chi();
    let u: Vec<f64> = (0..gx.n).map(|i| chi.eval(gx.x(i) / k)).collect();
    let tx = Tridiag::schrodinger(gx, |_| 0.0);
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let utu: f64 = u.iter().zip(tx.apply(&u)).map(|(a, b)| a * b).sum();
    let vtv: f64 = v.iter().zip(ty.apply(&v)).map(|(a, b)| a * b).sum();
    let mut pot = 0.0;
    if params.lambda != 0.0 {
        for (j, vj) in v.iter().enumerate() {
            let y = gy.x(j);
            let mut row = 0.0;
            for (i, ui) in u.iter().enumerate() {
                if *ui != 0.0 {
                    row += ui * ui * line_weight(params, gx.x(i), y, h)?;
                }
            }
            pot += vj * vj * row;
        }
    }
    Ok(((utu * vv + uu * vtv + pot) / (uu * vv), e_osc))
}

/// Diagonal entry of the λ-term at node `(x, y)` as assembled for the tilde operator.
fn line_weight(params: &ModelParams, x: f64, y: f64, h: f64) -> Result<f64> {
    match params.kind {
        ModelKind::RegularV => {
            let v = params.potential.as_ref().ok_or(Error::MissingPotential)?;
            Ok(params.lambda * y * y * v.average((x - h / 2.0) * y, (x + h / 2.0) * y))
        }
        ModelKind::DeltaLine => Ok(if x.abs() < 0.5 * h { params.lambda * y / h } else { 0.0 }),
    }
}

/// The trial quotients for `k_list`, the first `k` below threshold and the
/// fitted decomposition of the offsets.
pub fn existence_scan(params: &ModelParams, k_list: &[f64], h: f64) -> Result<ExistenceReport> {
    let threshold = params.threshold();
    let mut rows = Vec::with_capacity(k_list.len());
    let mut e_osc = f64::NAN;
    for &k in k_list {
        let (value, e) = trial_value(params, k, h)?;
        e_osc = e;
        rows.push(TrialRow { k, value, offset: value - e });
    }
    let first_below = rows.iter().find(|r| r.value < threshold && r.value < e_osc).map(|r| r.k);
    Ok(ExistenceReport { threshold, e_osc, fit: fit_offsets(&rows), rows, first_below })
}

/// Least squares for `offset = a/k² - b/k`.
pub fn fit_offsets(rows: &[TrialRow]) -> Option<OffsetFit> {
    if rows.len() < 2 {
        return None;
    }
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for r in rows {
        let (p, q) = (1.0 / (r.k * r.k), -1.0 / r.k);
        s11 += p * p;
        s12 += p * q;
        s22 += q * q;
        r1 += p * r.offset;
        r2 += q * r.offset;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() < 1e-300 {
        return None;
    }
    Some(OffsetFit { kinetic: (r1 * s22 - r2 * s12) / det, attraction: (s11 * r2 - s12 * r1) / det })
}

/// Separable trial sampled on a 2D grid, for cross-checks against the
/// assembled operators.
pub fn trial_on_grid(params: &ModelParams, k: f64, grid: &Grid2D) -> Result<Vec<C64>> {
    let a2 = params.omega * params.omega + params.b_field * params.b_field;
    let ty = Tridiag::schrodinger(grid.y_grid(), |y| a2 * y * y);
    let v = ty.eigenvector(ty.eigenvalue(0))?;
    let chi = trial_chi();
    let mut out = vec![C64::new(0.0, 0.0); grid.dim()];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            out[grid.index(i, j)] = C64::new(chi.eval(grid.x(i) / k) * v[j], 0.0);
        }
    }
    Ok(out)
}

/// The route through the nonmagnetic ground state: its lowest eigenvector is
/// real and, fed to the magnetic form, gives the same value.
pub fn tilde_route_value(params: &ModelParams, grid: &Grid2D, tol: f64) -> Result<(f64, f64)> {
    let t = assemble_nonmagnetic_tilde(params, grid)?;
    let r = crate::eigensolver::lowest_eigs(&t, 1, tol, 20_000, 0)?;
    if !r.converged {
        return Err(Error::NoConvergence("nonmagnetic ground state".into()));
    }
    let w = &r.eigenvectors[0];
    let big = w.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).ok_or(Error::ZeroVector)?;
    let phase = big.conj() / big.norm();
    let v: Vec<C64> = w.iter().map(|z| C64::new((z * phase).re, 0.0)).collect();
    let h = crate::hamiltonian::assemble(params, grid, crate::hamiltonian::Scheme::DirectCentral)?;
    Ok((r.eigenvalues[0], form_value(&h, &v)?))
}
