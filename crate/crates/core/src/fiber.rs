//! Fibers of the strip operator after a partial Fourier transform in `x`, and
//! Neumann-bracketing lower bounds.
//!
//! In the gauge `A = (-By, 0)` the fiber at momentum `ξ` is
//! `-d²/dy² + a²(y + ξB/a²)² + ω²ξ²/a²` with `a² = ω² + B²`. The mirror
//! `y -> -y` maps it to the fiber at `-ξ`, so band functions are even in `ξ`.

use serde::{Deserialize, Serialize};

use crate::comparison::{inf_L_eps, Tridiag};
use crate::error::{Error, Result};
use crate::model::{Boundary, Grid1D, ModelKind, ModelParams, PotentialSpec};

/// Fiber `h(ξ)` on `grid` (normally Neumann on `[-n, n]`).
pub fn fiber_operator(omega: f64, b_field: f64, xi: f64, grid: Grid1D) -> Result<Tridiag> {
    let a2 = omega * omega + b_field * b_field;
    let limit = 0.2 / a2.sqrt().sqrt();
    if grid.h > limit {
        return Err(Error::GridTooCoarse { h: grid.h, limit });
    }
    let shift = xi * b_field / a2;
    let offset = omega * omega * xi * xi / a2;
    Ok(Tridiag::schrodinger(grid, |y| a2 * (y + shift).powi(2) + offset))
}

/// Lowest eigenvalues of the fibers over a set of momenta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandFunction {
    pub xi_samples: Vec<f64>,
    pub band_min: Vec<f64>,
    pub n: f64,
    /// Global minimum after refining around the best sample.
    pub min: f64,
    pub argmin: f64,
    /// Grid spacing of the coarse solve; values are extrapolated from `h` and `h/2`.
    pub h: f64,
}

/// Default spacing for strips of frequency `a`.
fn fiber_spacing(a: f64) -> f64 {
    (0.025f64).min(0.1 / a.sqrt())
}

/// Momentum range covering fiber centres up to five Gaussian widths outside the strip.
pub fn default_xi_range(omega: f64, b_field: f64, n: f64) -> (f64, f64) {
    let a2 = omega * omega + b_field * b_field;
    let a = a2.sqrt();
    let m = if b_field > 0.0 { a2 * (n + 5.0 / a.sqrt()) / b_field } else { 2.0 * a.sqrt() * a / omega };
    (-m, m)
}

/// Richardson-extrapolated lowest Neumann fiber eigenvalue.
struct FiberEval {
    omega: f64,
    b_field: f64,
    coarse: Grid1D,
    fine: Grid1D,
}

impl FiberEval {
    fn new(omega: f64, b_field: f64, n: f64, bc: Boundary) -> Result<Self> {
        let a = (omega * omega + b_field * b_field).sqrt();
        let coarse = Grid1D::with_spacing(n, fiber_spacing(a), bc)?;
        let fine = Grid1D::new(n, 2 * (coarse.n - 1) + 1, bc)?;
        Ok(FiberEval { omega, b_field, coarse, fine })
    }

    fn lowest(&self, xi: f64) -> Result<f64> {
        let e1 = fiber_operator(self.omega, self.b_field, xi, self.coarse)?.eigenvalue(0);
        let e2 = fiber_operator(self.omega, self.b_field, xi, self.fine)?.eigenvalue(0);
        Ok((4.0 * e2 - e1) / 3.0)
    }
}

/// Samples the lowest band of the Neumann strip `|y| < n` and locates its
/// minimum (golden-section refinement around the best sample).
pub fn band_scan(params: &ModelParams, n: f64, xi_range: Option<(f64, f64)>, n_xi: usize) -> Result<BandFunction> {
    band_scan_bc(params, n, xi_range, n_xi, Boundary::Neumann)
}

pub fn band_scan_bc(
    params: &ModelParams,
    n: f64,
    xi_range: Option<(f64, f64)>,
    n_xi: usize,
    bc: Boundary,
) -> Result<BandFunction> {
    if n_xi < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 momentum samples, got {n_xi}")));
    }
    if !(n > 0.0) {
        return Err(Error::InvalidGrid(format!("strip half-width must be positive, got {n}")));
    }
    let (omega, b) = (params.omega, params.b_field);
    let (lo, hi) = xi_range.unwrap_or_else(|| default_xi_range(omega, b, n));
    let ev = FiberEval::new(omega, b, n, bc)?;
    let xi_samples: Vec<f64> = (0..n_xi).map(|i| lo + (hi - lo) * i as f64 / (n_xi - 1) as f64).collect();
    let band_min = xi_samples.iter().map(|&xi| ev.lowest(xi)).collect::<Result<Vec<_>>>()?;
    let best = (0..n_xi).min_by(|&i, &j| band_min[i].total_cmp(&band_min[j])).unwrap();
    let (mut min, mut argmin) = (band_min[best], xi_samples[best]);
    let a = xi_samples[best.saturating_sub(1)];
    let c = xi_samples[(best + 1).min(n_xi - 1)];
    let (x, fx) = golden_min(|xi| ev.lowest(xi), a, c, 1e-7 * (1.0 + (hi - lo).abs()))?;
    if fx < min {
        min = fx;
        argmin = x;
    }
    Ok(BandFunction { xi_samples, band_min, n, min, argmin, h: ev.coarse.h })
}

fn golden_min(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// Least-squares `c` in `deficit ≈ c/n`.
pub fn fit_inverse_n(ns: &[f64], deficits: &[f64]) -> f64 {
    let num: f64 = ns.iter().zip(deficits).map(|(n, d)| d / n).sum();
    let den: f64 = ns.iter().map(|n| 1.0 / (n * n)).sum();
    num / den
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketPiece {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketingCertificate {
    pub n: f64,
    pub pieces: Vec<BracketPiece>,
    /// Minimum over all pieces, a lower bound for the whole operator.
    pub overall_lower_bound: f64,
    /// `min(outer+, outer-, band minimum)`: lower bound for the essential spectrum.
    pub essential_lower_bound: f64,
}

impl BracketingCertificate {
    pub fn piece(&self, name: &str) -> Option<f64> {
        self.pieces.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

/// Half-width used for the whole-line transverse bound.
const TRANSVERSE_HALF_WIDTH: f64 = 40.0;

/// Ground energy of `-d²/dy² + W(y)` where `W = (ω² - λ²/4)y²` for `y > 0`
/// and `ω²y²` for `y < 0`. Row by row the δ line costs at least `-(λy)²/4`,
/// so `H ≥ 1 ⊗ (-d²/dy² + W)` and this is a lower bound for the whole
/// operator. Neumann truncation only lowers it further.
pub fn transverse_ground(omega: f64, lambda: f64) -> Result<f64> {
    let grid = Grid1D::with_spacing(TRANSVERSE_HALF_WIDTH, 0.01, Boundary::Neumann)?;
    let up = omega * omega - lambda * lambda / 4.0;
    let t = Tridiag::schrodinger(grid, |y| if y > 0.0 { up * y * y } else { omega * omega * y * y });
    let e = t.eigenvalue(0);
    // outside the window W already exceeds the ground level
    let edge = up.min(omega * omega) * TRANSVERSE_HALF_WIDTH.powi(2);
    Ok(e.min(edge))
}

/// Lower bounds of the δ-line model from Neumann bracketing at strip height `n`.
pub fn bracketing_lower_bound_sm(params: &ModelParams, n: f64) -> Result<BracketingCertificate> {
    let (omega, lambda) = (params.omega, params.lambda);
    if params.kind != ModelKind::DeltaLine {
        return Err(Error::UnsupportedCombination("bracketing certificate is for the delta-line model".into()));
    }
    if lambda < -2.0 * omega * (1.0 + 1e-12) {
        return Err(Error::SupercriticalInput { lambda });
    }
    let outer_plus = n * n * (omega * omega - lambda * lambda / 4.0);
    let outer_minus = n * n * omega * omega;
    let band = band_scan(&params.with_lambda(0.0), n, None, 201)?;
    let central = transverse_ground(omega, lambda)?;
    let pieces = vec![
        BracketPiece { name: "outer_plus".into(), value: outer_plus },
        BracketPiece { name: "outer_minus".into(), value: outer_minus },
        BracketPiece { name: "central_band_min".into(), value: band.min },
        BracketPiece { name: "central_ground".into(), value: central },
    ];
    Ok(BracketingCertificate {
        n,
        overall_lower_bound: pieces.iter().map(|p| p.value).fold(f64::INFINITY, f64::min),
        essential_lower_bound: outer_plus.min(outer_minus).min(band.min),
        pieces,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub eps: f64,
    pub inf_l_eps: f64,
    pub rows: Vec<GrowthRow>,
    /// Least-squares slope of `ln bound` against `ln(1 + ln n)`.
    pub exponent: f64,
}

/// Strip lower bounds `(1 - ε)(1 + ln n)² inf σ(L_ε(V))` of the regular model.
pub fn bracketing_growth_regular(params: &ModelParams, v: &PotentialSpec, eps: f64, n_list: &[f64]) -> Result<GrowthTable> {
    let inf = inf_L_eps(params.omega, params.lambda, eps, v, 1e-10)?;
    if !(inf > 0.0) {
        return Err(Error::NotSubcritical { inf });
    }
    let rows: Vec<GrowthRow> = n_list
        .iter()
        .map(|&n| GrowthRow { n, bound: (1.0 - eps) * (1.0 + n.ln()).powi(2) * inf })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| (1.0 + r.n.ln()).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.bound.ln()).collect();
    Ok(GrowthTable { eps, inf_l_eps: inf, exponent: slope(&xs, &ys), rows })
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
