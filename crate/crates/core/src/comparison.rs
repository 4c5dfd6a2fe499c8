//! One-dimensional comparison operators `-d² + ω² + λδ` and `-d² + ω² + λV`,
//! the magnetic oscillator, and the critical coupling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Boundary, Grid1D, PotentialSpec};
use crate::sparse::SparseSymmetric;

/// Symmetric tridiagonal matrix tied to the grid it discretizes.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiag {
    pub diag: Vec<f64>,
    /// `offdiag[i]` couples nodes `i` and `i + 1`.
    pub offdiag: Vec<f64>,
    pub grid: Grid1D,
}

impl Tridiag {
    /// `-d²/dx² + w(x)` with the three-point stencil. Dirichlet keeps the full
    /// `2/h²` diagonal at the ends; Neumann drops the missing link.
    pub fn schrodinger(grid: Grid1D, w: impl Fn(f64) -> f64) -> Self {
        let n = grid.n;
        let ih2 = 1.0 / (grid.h * grid.h);
        let mut diag: Vec<f64> = (0..n).map(|i| 2.0 * ih2 + w(grid.x(i))).collect();
        if grid.bc == Boundary::Neumann {
            diag[0] -= ih2;
            diag[n - 1] -= ih2;
        }
        Tridiag { diag, offdiag: vec![-ih2; n - 1], grid }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + x.abs());
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Eigenvalue number `k` (0-based, ascending) by bisection to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * (lo.abs() + hi.abs()) + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Solves `(T - s I) x = rhs` by the Thomas algorithm. Fails on an exactly
    /// singular pivot.
    pub fn solve_shifted(&self, s: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut piv = self.diag[0] - s;
        for i in 0..n {
            if i > 0 {
                let e = self.offdiag[i - 1];
                piv = self.diag[i] - s - e * c[i - 1];
                d[i] = rhs[i] - e * d[i - 1];
            } else {
                d[0] = rhs[0];
            }
            if piv == 0.0 || !piv.is_finite() {
                return Err(Error::SolveFailed(format!("zero pivot at row {i}")));
            }
            if i + 1 < n {
                c[i] = self.offdiag[i] / piv;
            }
            d[i] /= piv;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }

    /// Eigenvector for an eigenvalue estimate `e`, by inverse iteration.
    /// Returned with unit Euclidean norm.
    pub fn eigenvector(&self, e: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let shift = e - 1e-13 * (lo.abs() + hi.abs()).max(1.0);
        // start vector with no symmetry, so odd and even states are both reached
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_749_895).fract()).collect();
        for _ in 0..4 {
            let mut w = self.solve_shifted(shift, &v)?;
            let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(nrm > 0.0) || !nrm.is_finite() {
                return Err(Error::SolveFailed("inverse iteration produced a degenerate vector".into()));
            }
            w.iter_mut().for_each(|x| *x /= nrm);
            v = w;
        }
        // fix the sign so the largest entry is positive
        let imax = (0..n).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap();
        if v[imax] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(v)
    }

    /// Euclidean residual `‖Tv - ev‖ / ‖v‖`.
    pub fn residual(&self, e: f64, v: &[f64]) -> f64 {
        let tv = self.apply(v);
        let r: f64 = tv.iter().zip(v).map(|(a, b)| (a - e * b).powi(2)).sum();
        (r / v.iter().map(|x| x * x).sum::<f64>()).sqrt()
    }

    pub fn rayleigh(&self, v: &[f64]) -> f64 {
        let tv = self.apply(v);
        tv.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>()
    }

    pub fn to_sparse(&self) -> SparseSymmetric {
        let n = self.len();
        let mut t = Vec::with_capacity(3 * n);
        for i in 0..n {
            t.push((i, i, self.diag[i]));
            if i + 1 < n {
                t.push((i, i + 1, self.offdiag[i]));
                t.push((i + 1, i, self.offdiag[i]));
            }
        }
        SparseSymmetric::from_triplets(n, t)
    }
}

/// Ground state of a 1D operator, either in closed form or sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundData {
    pub energy: f64,
    pub eigenfunction: Eigenfunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Eigenfunction {
    /// `(a/π)^{1/4} e^{-a z²/2}`
    Gaussian { a: f64 },
    /// `√(|λ|/2) e^{-|λ||x|/2}`
    DeltaWell { lambda: f64 },
    /// Node values on `grid`, unit norm under the trapezoid rule.
    Samples { grid: Grid1D, values: Vec<f64> },
}

impl GroundData {
    /// Value at `x`; samples are interpolated linearly and vanish off the grid.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.eigenfunction {
            Eigenfunction::Gaussian { a } => (a / std::f64::consts::PI).powf(0.25) * (-a * x * x / 2.0).exp(),
            Eigenfunction::DeltaWell { lambda } => delta_eigenfunction(*lambda, x),
            Eigenfunction::Samples { grid, values } => {
                let u = (x - grid.x(0)) / grid.h;
                if !(u >= 0.0) || u > (grid.n - 1) as f64 {
                    return 0.0;
                }
                let i = (u.floor() as usize).min(grid.n - 2);
                let t = u - i as f64;
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }
}

/// Trapezoid-rule `∫ v²` over node values with spacing `h`.
pub fn trapezoid_norm_sq(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    let inner: f64 = v.iter().map(|x| x * x).sum();
    h * (inner - 0.5 * (v[0] * v[0] + v[n - 1] * v[n - 1]))
}

/// `inf σ` of `-d² + ω² + λδ` on the line: `ω² - λ²/4` for `λ < 0`, else `ω²`.
pub fn exact_inf_L(omega: f64, lambda: f64) -> f64 {
    if lambda < 0.0 {
        omega * omega - lambda * lambda / 4.0
    } else {
        omega * omega
    }
}

/// Normalized bound state of `-d² + λδ`, `λ < 0`.
pub fn delta_eigenfunction(lambda: f64, x: f64) -> f64 {
    let k = lambda.abs();
    (k / 2.0).sqrt() * (-k * x.abs() / 2.0).exp()
}

/// Default truncation for 1D solves: `l = 20·max(1, 2/|λ|, 2/ω)`, spacing
/// `0.01·min(1, 1/|λ|)`.
pub fn default_grid_1d(omega: f64, lambda: f64) -> Grid1D {
    let mut scale = 1.0f64;
    if lambda != 0.0 {
        scale = scale.max(2.0 / lambda.abs());
    }
    scale = scale.max(2.0 / omega);
    let l = 20.0 * scale;
    let h = 0.01 * (1.0f64).min(1.0 / lambda.abs().max(1e-300));
    Grid1D::with_spacing(l, h, Boundary::Dirichlet).expect("positive extents")
}

/// Discretizes `-d² + [ω²] + λδ(x)` (no potential) or `-d² + [ω²] + λV(x)`.
///
/// The δ enters as `λ/h` on the diagonal at `x = 0`. The potential enters
/// through its average over each node's cell, which keeps second order for
/// piecewise continuous `V`.
pub fn assemble_L(
    omega: f64,
    lambda: f64,
    grid: &Grid1D,
    potential: Option<&PotentialSpec>,
    include_omega: bool,
) -> Result<Tridiag> {
    let shift = if include_omega { omega * omega } else { 0.0 };
    let h = grid.h;
    match potential {
        None => {
            if lambda != 0.0 && h > 0.1 / lambda.abs() {
                return Err(Error::GridTooCoarse { h, limit: 0.1 / lambda.abs() });
            }
            let i0 = grid.zero_node().ok_or(Error::GridMisaligned)?;
            let mut t = Tridiag::schrodinger(*grid, |_| shift);
            t.diag[i0] += lambda / h;
            Ok(t)
        }
        Some(v) => Ok(Tridiag::schrodinger(*grid, |x| shift + lambda * v.average(x - h / 2.0, x + h / 2.0))),
    }
}

/// Smallest eigenvalue of `t`, certified by an inverse-iteration residual.
pub fn inf_spectrum_1d(t: &Tridiag, tol: f64) -> Result<f64> {
    Ok(lowest_eigenpairs_1d(t, 1, tol)?.remove(0).0)
}

/// The `k ≤ 8` lowest eigenpairs with Euclidean-normalized vectors.
pub fn lowest_eigenpairs_1d(t: &Tridiag, k: usize, tol: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    if k == 0 || k > 8 || k > t.len() {
        return Err(Error::DimensionTooSmall { n: t.len(), k });
    }
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let e = t.eigenvalue(j);
        let v = t.eigenvector(e)?;
        let r = t.residual(e, &v);
        if !(r <= tol) {
            return Err(Error::NoConvergence(format!("eigenvalue {j}: residual {r:.3e} above {tol:.3e}")));
        }
        out.push((e, v));
    }
    Ok(out)
}

/// Ground state of `t` as a sampled [`GroundData`], unit trapezoid norm.
pub fn ground_state(t: &Tridiag, tol: f64) -> Result<GroundData> {
    let (energy, mut v) = lowest_eigenpairs_1d(t, 1, tol)?.remove(0);
    let nrm = trapezoid_norm_sq(&v, t.grid.h).sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    Ok(GroundData { energy, eigenfunction: Eigenfunction::Samples { grid: t.grid, values: v } })
}

/// Ground state of `-d²/dy² + (ω²+B²)y²`.
pub fn oscillator_ground(omega: f64, b_field: f64) -> GroundData {
    let a = omega.hypot(b_field);
    GroundData { energy: a, eigenfunction: Eigenfunction::Gaussian { a } }
}

/// Grid operator `-d²/dy² + a² y²`.
pub fn oscillator_tridiag(a: f64, grid: Grid1D) -> Tridiag {
    Tridiag::schrodinger(grid, |y| a * a * y * y)
}

/// Grid used for every coupling inside [`critical_lambda`].
pub fn critical_grid(omega: f64, v: &PotentialSpec) -> Grid1D {
    let s0 = v.s0();
    let l = s0 + 20.0 * (1.0f64).max(2.0 / omega);
    let h = (0.002f64).min(s0 / 50.0);
    Grid1D::with_spacing(l, h, Boundary::Dirichlet).expect("positive extents")
}

/// Result of the critical-coupling search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalLambda {
    pub lambda_star: f64,
    /// `inf σ(L(V))` at `lambda_star` on the search grid.
    pub inf_at_star: f64,
    pub bisection_steps: usize,
}

/// Coupling `λ* < 0` at which `inf σ(-d² + ω² + λV)` crosses zero.
pub fn critical_lambda(omega: f64, v: &PotentialSpec, tol: f64) -> Result<CriticalLambda> {
    let int_v = v.integral();
    if !(int_v > 0.0) {
        return Err(Error::InvalidPotential("V vanishes identically".into()));
    }
    let grid = critical_grid(omega, v);
    let negative = |lambda: f64| -> bool {
        let t = assemble_L(omega, lambda, &grid, Some(v), true).expect("regular assembly");
        t.count_below(0.0) > 0
    };
    let mut hi = -tol.max(1e-12);
    let mut lo = -4.0 * omega * (v.s0() + 1.0) / int_v;
    if negative(hi) {
        // already negative at vanishing coupling: only possible through rounding
        return Err(Error::BracketFailure { max_abs_lambda: hi.abs() });
    }
    while !negative(lo) {
        hi = lo;
        lo *= 2.0;
        if lo.abs() > 1e6 {
            return Err(Error::BracketFailure { max_abs_lambda: 1e6 });
        }
    }
    let mut steps = 0;
    while hi - lo > 1e-13 * lo.abs() && steps < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if negative(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    let lambda_star = 0.5 * (lo + hi);
    let t = assemble_L(omega, lambda_star, &grid, Some(v), true)?;
    let inf_at_star = t.eigenvalue(0);
    if !(inf_at_star.abs() <= tol) {
        return Err(Error::NoConvergence(format!("inf at lambda* is {inf_at_star:.3e}")));
    }
    Ok(CriticalLambda { lambda_star, inf_at_star, bisection_steps: steps })
}

/// Critical coupling of the δ model.
pub fn critical_lambda_delta(omega: f64) -> f64 {
    -2.0 * omega
}

/// `inf σ(-d² + ω² + λ/(1-ε)·V)`.
pub fn inf_L_eps(omega: f64, lambda: f64, eps: f64, v: &PotentialSpec, tol: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidGrid(format!("eps must lie in (0, 1), got {eps}")));
    }
    inf_L_V(omega, lambda / (1.0 - eps), v, tol)
}

/// `inf σ(-d² + ω² + λV)` on the critical-search grid.
pub fn inf_L_V(omega: f64, lambda: f64, v: &PotentialSpec, tol: f64) -> Result<f64> {
    let grid = critical_grid(omega, v);
    inf_spectrum_1d(&assemble_L(omega, lambda, &grid, Some(v), true)?, tol)
}

/// Coupling at which `inf σ(L(V))` equals `target ∈ (0, ω²)`, by bisection.
pub fn lambda_for_inf(omega: f64, v: &PotentialSpec, target: f64) -> Result<f64> {
    let grid = critical_grid(omega, v);
    let below = |lambda: f64| {
        let t = assemble_L(omega, lambda, &grid, Some(v), true).expect("regular assembly");
        t.count_below(target) > 0
    };
    let mut hi = 0.0;
    let mut lo = -1.0 / v.integral();
    while !below(lo) {
        hi = lo;
        lo *= 2.0;
        if lo.abs() > 1e6 {
            return Err(Error::BracketFailure { max_abs_lambda: 1e6 });
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
