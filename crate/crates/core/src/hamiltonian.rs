//! Finite-difference assembly of `(i∇ + A)² + ω²y² + λyδ(x)` and
//! `(i∇ + A)² + ω²y² + λy²V(xy)` in the Landau gauge `A = (-By, 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Boundary, Grid2D, ModelKind, ModelParams};
use crate::sparse::{dot, norm, HermitianOperator, SparseHermitian, SparseSymmetric, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Hopping `-e^{±iθ_j}/hx²` along x with `θ_j = B y_j hx`.
    #[default]
    Peierls,
    /// Real Laplacian plus central differences for `-2iBy∂x` and `B²y²`.
    DirectCentral,
}

/// Weight of the δ line on the node `(0, y_j)`, divided by `hx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaCoupling {
    /// `λ y_j`, the quadrature of the form term.
    FormConsistent,
    /// `λ y_j √(1 + (λ y_j hx)²/16)`: the lattice bound state of each row sits
    /// exactly at `-(λ y_j)²/4`. Only meaningful with [`Scheme::Peierls`], where
    /// each row is gauge equivalent to the free lattice Laplacian.
    Matched,
}

impl DeltaCoupling {
    pub fn default_for(scheme: Scheme) -> Self {
        match scheme {
            Scheme::Peierls => DeltaCoupling::Matched,
            Scheme::DirectCentral => DeltaCoupling::FormConsistent,
        }
    }

    /// Diagonal entry added at `(0, y)`.
    pub fn weight(self, lambda: f64, y: f64, hx: f64) -> f64 {
        let k = lambda * y;
        match self {
            DeltaCoupling::FormConsistent => k / hx,
            DeltaCoupling::Matched => k * (1.0 + (k * hx).powi(2) / 16.0).sqrt() / hx,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyOptions {
    pub scheme: Scheme,
    pub delta_coupling: DeltaCoupling,
}

impl AssemblyOptions {
    pub fn new(scheme: Scheme) -> Self {
        AssemblyOptions { scheme, delta_coupling: DeltaCoupling::default_for(scheme) }
    }
}

/// Assembles with the default δ coupling of `scheme`.
pub fn assemble(params: &ModelParams, grid: &Grid2D, scheme: Scheme) -> Result<SparseHermitian> {
    assemble_with(params, grid, AssemblyOptions::new(scheme))
}

/// Parameters are not re-validated here so that `ω = 0` (Landau levels) and
/// `λ > 0` (mirror images) can be assembled; only `B ≥ 0` and the presence of
/// a potential are checked.
pub fn assemble_with(params: &ModelParams, grid: &Grid2D, opts: AssemblyOptions) -> Result<SparseHermitian> {
    if opts.scheme == Scheme::DirectCentral && opts.delta_coupling == DeltaCoupling::Matched {
        return Err(Error::UnsupportedCombination("matched delta coupling requires the Peierls scheme".into()));
    }
    let scalar = scalar_part(params, grid, opts.delta_coupling, params.omega * params.omega)?;
    let b = params.b_field;
    let (nx, ny) = (grid.nx, grid.ny);
    let ihx2 = 1.0 / (grid.hx * grid.hx);
    let ihy2 = 1.0 / (grid.hy * grid.hy);
    let neumann = grid.bc == Boundary::Neumann;
    let mut t = Vec::with_capacity(5 * grid.dim());
    for j in 0..ny {
        let y = grid.y(j);
        let (fwd, diag_extra) = match opts.scheme {
            Scheme::Peierls => (-C64::from_polar(1.0, b * y * grid.hx) * ihx2, 0.0),
            Scheme::DirectCentral => (C64::new(-ihx2, -b * y / grid.hx), b * b * y * y),
        };
        for i in 0..nx {
            let idx = grid.index(i, j);
            let links_x = if neumann { (i > 0) as usize + (i + 1 < nx) as usize } else { 2 };
            let links_y = if neumann { (j > 0) as usize + (j + 1 < ny) as usize } else { 2 };
            let d = links_x as f64 * ihx2 + links_y as f64 * ihy2 + diag_extra + scalar[idx];
            if j > 0 {
                t.push((idx, idx - nx, C64::new(-ihy2, 0.0)));
            }
            if i > 0 {
                t.push((idx, idx - 1, fwd.conj()));
            }
            t.push((idx, idx, C64::new(d, 0.0)));
            if i + 1 < nx {
                t.push((idx, idx + 1, fwd));
            }
            if j + 1 < ny {
                t.push((idx, idx + nx, C64::new(-ihy2, 0.0)));
            }
        }
    }
    Ok(SparseHermitian::from_triplets(grid.dim(), t))
}

/// Diagonal `shift(y) + λ-term` for every node.
fn scalar_part(params: &ModelParams, grid: &Grid2D, coupling: DeltaCoupling, osc: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; grid.dim()];
    for j in 0..grid.ny {
        let y = grid.y(j);
        for i in 0..grid.nx {
            out[grid.index(i, j)] = osc * y * y;
        }
    }
    if params.b_field < 0.0 {
        return Err(Error::RejectsNegativeField(params.b_field));
    }
    let lambda = params.lambda;
    match params.kind {
        ModelKind::DeltaLine => {
            if lambda != 0.0 {
                if let Some(i0) = delta_column(grid)? {
                    for j in 0..grid.ny {
                        out[grid.index(i0, j)] += coupling.weight(lambda, grid.y(j), grid.hx);
                    }
                }
            }
        }
        ModelKind::RegularV => {
            let v = params.potential.as_ref().ok_or(Error::MissingPotential)?;
            if lambda != 0.0 {
                for j in 0..grid.ny {
                    let y = grid.y(j);
                    for i in 0..grid.nx {
                        let x = grid.x(i);
                        let avg = v.average((x - grid.hx / 2.0) * y, (x + grid.hx / 2.0) * y);
                        out[grid.index(i, j)] += lambda * y * y * avg;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Column carrying the δ line: `None` when the window does not reach `x = 0`.
fn delta_column(grid: &Grid2D) -> Result<Option<usize>> {
    let (x_lo, x_hi) = grid.x_range();
    if x_lo > 0.0 || x_hi < 0.0 {
        return Ok(None);
    }
    grid.zero_column().map(Some).ok_or(Error::GridMisaligned)
}

/// `-Δ + (ω² + B²)y² + λyδ(x)` (or the regular analogue) as a real matrix.
pub fn assemble_nonmagnetic_tilde(params: &ModelParams, grid: &Grid2D) -> Result<SparseSymmetric> {
    let a2 = params.omega * params.omega + params.b_field * params.b_field;
    let flat = ModelParams { omega: a2.sqrt(), b_field: 0.0, ..params.clone() };
    let h = assemble_with(&flat, grid, AssemblyOptions::new(Scheme::DirectCentral))?;
    let n = h.dim();
    let mut t = Vec::with_capacity(h.nnz());
    for i in 0..n {
        for (j, v) in h.row(i) {
            t.push((i, j, v.re));
        }
    }
    Ok(SparseSymmetric::from_triplets(n, t))
}

/// Rayleigh quotient `Re⟨u, Hu⟩ / ⟨u, u⟩`.
pub fn form_value<H: HermitianOperator + ?Sized>(h: &H, u: &[C64]) -> Result<f64> {
    let nu = norm(u);
    if !(nu > 0.0) {
        return Err(Error::ZeroVector);
    }
    let mut hu = vec![C64::new(0.0, 0.0); u.len()];
    h.apply(u, &mut hu);
    Ok(dot(u, &hu).re / (nu * nu))
}

/// Index map of `(x, y) -> (-x, -y)` on a grid centred at the origin.
pub fn mirror_permutation(grid: &Grid2D) -> Vec<usize> {
    let mut p = vec![0; grid.dim()];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            p[grid.index(i, j)] = grid.index(grid.nx - 1 - i, grid.ny - 1 - j);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matched_weight_reproduces_continuum_bound_state() {
        // lattice bound state of coupling β: 2 sinh s = |β| h, E = -(4/h²) sinh²(s/2)
        let (lambda, y, h) = (-2.0, 7.0, 0.05);
        let beta = DeltaCoupling::Matched.weight(lambda, y, h) * h;
        let s = (beta.abs() * h / 2.0).asinh();
        let e = -4.0 / (h * h) * (s / 2.0).sinh().powi(2);
        assert!((e + (lambda * y).powi(2) / 4.0).abs() < 1e-9);
    }

    #[test]
    fn matched_central_is_rejected() {
        let g = Grid2D::new(1.0, 1.0, 11, 11, Boundary::Dirichlet).unwrap();
        let opts = AssemblyOptions { scheme: Scheme::DirectCentral, delta_coupling: DeltaCoupling::Matched };
        assert!(matches!(
            assemble_with(&ModelParams::delta(1.0, 1.0, -1.0), &g, opts),
            Err(Error::UnsupportedCombination(_))
        ));
    }
}
