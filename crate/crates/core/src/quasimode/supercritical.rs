//! Weyl sequences for the supercritical regime.
//!
//! Scaling `x -> √c x` maps `H(ω, B, λ)` to `H(cω, cB, cλ)/c`; with
//! `c = 1/√(λ²/4 - ω²)` the comparison operator `L` has its bound state at
//! `-1`. In that normalization and in the gauge `A = (0, Bx)`
//!
//! `ψ = (h(xy) + f(xy)/y²) e^{iθ(y)} χ_k(y/n)`,  `θ' = √(y² + μ)`,
//!
//! where `Lh = -h` and `(L + 1)f = ih + 2ith' + 2Bth`. In the variables
//! `t = xy`, `s = ln(y/n)` the measure `dx dy` becomes `dt ds`, so norms and
//! residuals are evaluated by tensor Gauss-Legendre quadrature for any `k`.

use serde::{Deserialize, Serialize};

use super::cutoff::Cutoff;
use super::{Construction, Quasimode, QuasimodeMeta};
use crate::comparison::{assemble_L, Tridiag};
use crate::error::{Error, Result};
use crate::hamiltonian::{AssemblyOptions, DeltaCoupling, Scheme};
use crate::model::{Grid1D, Grid2D, ModelKind, ModelParams, PotentialSpec};
use crate::quad::Composite;
use crate::sparse::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Scale factor `c` and the normalized parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub c: f64,
    pub params: ModelParams,
}

impl Normalization {
    /// Spectral value in normalized units.
    pub fn to_normalized(&self, mu: f64) -> f64 {
        self.c * mu
    }

    pub fn to_original(&self, mu_n: f64) -> f64 {
        mu_n / self.c
    }
}

/// Normalization of a supercritical δ-line model.
pub fn normalize_delta(params: &ModelParams) -> Result<Normalization> {
    let inf = params.omega * params.omega - params.lambda * params.lambda / 4.0;
    if !(inf < 0.0) {
        return Err(Error::NotSupercritical { inf });
    }
    let c = 1.0 / (-inf).sqrt();
    let params = ModelParams {
        omega: c * params.omega,
        b_field: c * params.b_field,
        lambda: c * params.lambda,
        ..params.clone()
    };
    Ok(Normalization { c, params })
}

/// Normalization of a supercritical regular model: `V` is rescaled to
/// `V(c ·)` and `λ` to `c²λ`, given `inf σ(L(V)) = inf` (negative).
pub fn normalize_regular(params: &ModelParams, inf: f64) -> Result<Normalization> {
    if !(inf < 0.0) {
        return Err(Error::NotSupercritical { inf });
    }
    let v = params.potential.as_ref().ok_or(Error::MissingPotential)?;
    let c = 1.0 / (-inf).sqrt();
    let scaled = PotentialSpec::new(v.s0() / c, v.samples().to_vec(), v.interpolation())?;
    let params = ModelParams {
        omega: c * params.omega,
        b_field: c * params.b_field,
        lambda: c * c * params.lambda,
        potential: Some(scaled),
        ..params.clone()
    };
    Ok(Normalization { c, params })
}

/// Piecewise cubic Hermite interpolant on a uniform grid, optionally with a
/// derivative jump at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermite {
    pub grid: Grid1D,
    pub values: Vec<C64>,
    /// Derivative used where the node is the left end of a cell.
    d_right: Vec<C64>,
    /// Derivative used where the node is the right end of a cell.
    d_left: Vec<C64>,
}

impl Hermite {
    /// Derivatives by second-order differences that never straddle `split`.
    pub fn new(grid: Grid1D, values: Vec<C64>, split: Option<usize>) -> Self {
        let n = values.len();
        let h = grid.h;
        let fwd = |i: usize| (values[i + 1] * 4.0 - values[i] * 3.0 - values[i + 2]) / (2.0 * h);
        let bwd = |i: usize| (values[i] * 3.0 - values[i - 1] * 4.0 + values[i - 2]) / (2.0 * h);
        let mut d_right = vec![C64::new(0.0, 0.0); n];
        let mut d_left = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let (l, r) = if i == 0 {
                let d = fwd(0);
                (d, d)
            } else if i + 1 == n {
                let d = bwd(i);
                (d, d)
            } else if Some(i) == split {
                (bwd(i), fwd(i))
            } else {
                let d = (values[i + 1] - values[i - 1]) / (2.0 * h);
                (d, d)
            };
            d_left[i] = l;
            d_right[i] = r;
        }
        Hermite { grid, values, d_right, d_left }
    }

    /// Value and first derivative; zero outside the grid.
    pub fn eval(&self, t: f64) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        let n = self.values.len();
        let h = self.grid.h;
        let u = (t - self.grid.x(0)) / h;
        if !(u >= 0.0) || u > (n - 1) as f64 {
            return (zero, zero);
        }
        let i = (u.floor() as usize).min(n - 2);
        let s = u - i as f64;
        let (s2, s3) = (s * s, s * s * s);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.d_right[i] * h, self.d_left[i + 1] * h);
        let val = v0 * (2.0 * s3 - 3.0 * s2 + 1.0) + m0 * (s3 - 2.0 * s2 + s) + v1 * (3.0 * s2 - 2.0 * s3) + m1 * (s3 - s2);
        let der = (v0 * (6.0 * s2 - 6.0 * s) + m0 * (3.0 * s2 - 4.0 * s + 1.0) + v1 * (6.0 * s - 6.0 * s2) + m1 * (3.0 * s2 - 2.0 * s))
            / h;
        (val, der)
    }
}

/// Normalized bound state `h` of the comparison operator at energy `-1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// `√q e^{-q|t|}` with `q = |λ|/2`.
    Delta { omega: f64, lambda: f64 },
    /// Ground state of `L(V)` sampled on a grid.
    Regular { omega: f64, lambda: f64, potential: PotentialSpec, samples: Hermite },
}

impl Kernel {
    pub fn delta(omega: f64, lambda: f64) -> Result<Self> {
        check_normalized(omega * omega - lambda * lambda / 4.0)?;
        Ok(Kernel::Delta { omega, lambda })
    }

    /// `h`, `h'` and `h''` away from `t = 0` (δ case).
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Kernel::Delta { lambda, .. } => {
                let q = lambda.abs() / 2.0;
                let h = q.sqrt() * (-q * t.abs()).exp();
                (h, -q * t.signum() * h, q * q * h)
            }
            Kernel::Regular { omega, lambda, potential, samples } => {
                let (h, d) = samples.eval(t);
                (h.re, d.re, (omega * omega + lambda * potential.eval(t) + 1.0) * h.re)
            }
        }
    }

    /// `ω² + 1` plus the regular part of the potential: `f'' = well·f - rhs`.
    fn well(&self, t: f64) -> f64 {
        match self {
            Kernel::Delta { omega, .. } => omega * omega + 1.0,
            Kernel::Regular { omega, lambda, potential, .. } => omega * omega + 1.0 + lambda * potential.eval(t),
        }
    }

    /// Right-hand side `ih + 2ith' + 2Bth`.
    pub fn rhs(&self, b_field: f64, t: f64) -> C64 {
        let (h, h1, _) = self.eval(t);
        C64::new(2.0 * b_field * t * h, h + 2.0 * t * h1)
    }

    /// Half-width beyond which `h` and `f` are negligible.
    fn reach(&self) -> f64 {
        match self {
            Kernel::Delta { omega, .. } => 50.0 / (omega * omega + 1.0).sqrt(),
            Kernel::Regular { omega, potential, .. } => potential.s0() + 50.0 / (omega * omega + 1.0).sqrt(),
        }
    }

    /// Panel breakpoints for quadrature over `t`.
    fn breaks(&self) -> Vec<f64> {
        let r = self.reach();
        match self {
            Kernel::Delta { .. } => vec![-r, 0.0, r],
            Kernel::Regular { potential, .. } => {
                let s0 = potential.s0();
                vec![-r, -s0, 0.0, s0, r]
            }
        }
    }

    /// `∫ (ih + 2ith' + 2Bth) h dt`, which vanishes in exact arithmetic.
    pub fn orthogonality_integral(&self, b_field: f64) -> C64 {
        let rule = Composite::new(16);
        let mut acc = C64::new(0.0, 0.0);
        for (t, w) in rule.nodes_between(&self.breaks(), 400) {
            acc += self.rhs(b_field, t) * self.eval(t).0 * w;
        }
        acc
    }
}

fn check_normalized(inf: f64) -> Result<()> {
    if (inf + 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { inf });
    }
    Ok(())
}

/// Default grid for the `f` equation.
pub fn default_f_grid(kernel: &Kernel) -> Result<Grid1D> {
    let q = match kernel {
        Kernel::Delta { lambda, .. } => lambda.abs() / 2.0,
        Kernel::Regular { omega, .. } => (omega * omega + 1.0).sqrt(),
    };
    Grid1D::with_spacing(kernel.reach(), (1e-3f64).min(0.02 / q), crate::model::Boundary::Dirichlet)
}

/// Solution of `(L + 1)f = ih + 2ith' + 2Bth` orthogonal to `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct FSolution {
    pub kernel: Kernel,
    pub b_field: f64,
    pub f: Hermite,
    /// Grid-norm residual of the discrete equation after deflation.
    pub ode_residual: f64,
    /// `|∫ rhs·h dt|` by quadrature.
    pub orthogonality_defect: f64,
    /// Component of the discrete right-hand side along the discrete kernel.
    pub deflated: f64,
    /// Discrete ground energy of `L + 1` (zero in exact arithmetic).
    pub ground_offset: f64,
}

impl FSolution {
    /// `f`, `f'`, `f''` with the second derivative taken from the equation.
    pub fn eval(&self, t: f64) -> (C64, C64, C64) {
        let (f, f1) = self.f.eval(t);
        (f, f1, f * self.kernel.well(t) - self.kernel.rhs(self.b_field, t))
    }
}

/// δ-line case. The lattice coupling is matched, so the discrete `L + 1`
/// has its kernel exactly at zero.
pub fn solve_f_ode(omega: f64, lambda: f64, b_field: f64, grid: Grid1D) -> Result<FSolution> {
    let kernel = Kernel::delta(omega, lambda)?;
    let i0 = grid.zero_node().ok_or(Error::GridMisaligned)?;
    let limit = 0.1 / lambda.abs();
    if grid.h > limit {
        return Err(Error::GridTooCoarse { h: grid.h, limit });
    }
    let mut t = Tridiag::schrodinger(grid, |_| omega * omega + 1.0);
    t.diag[i0] += DeltaCoupling::Matched.weight(lambda, 1.0, grid.h);
    solve_deflated(kernel, b_field, t, Some(i0))
}

/// Regular case with a symmetric potential; `(ω, λ, V)` must satisfy
/// `inf σ(L(V)) = -1` up to discretization error.
pub fn solve_f_ode_regular(omega: f64, lambda: f64, b_field: f64, v: &PotentialSpec, grid: Grid1D) -> Result<FSolution> {
    if !v.is_symmetric() {
        return Err(Error::UnsupportedCombination("the regular construction needs a symmetric potential".into()));
    }
    let mut t = assemble_L(omega, lambda, &grid, Some(v), true)?;
    t.diag.iter_mut().for_each(|d| *d += 1.0);
    let e0 = t.eigenvalue(0);
    if e0.abs() > 1e-3 {
        return Err(Error::NotNormalized { inf: e0 - 1.0 });
    }
    let mut g = t.eigenvector(e0)?;
    let scale = 1.0 / crate::comparison::trapezoid_norm_sq(&g, grid.h).sqrt();
    g.iter_mut().for_each(|x| *x *= scale);
    let samples = Hermite::new(grid, g.iter().map(|&x| C64::new(x, 0.0)).collect(), None);
    let kernel = Kernel::Regular { omega, lambda, potential: v.clone(), samples };
    solve_deflated(kernel, b_field, t, None)
}

fn solve_deflated(kernel: Kernel, b_field: f64, t: Tridiag, split: Option<usize>) -> Result<FSolution> {
    let grid = t.grid;
    let n = t.len();
    let e0 = t.eigenvalue(0);
    let v0 = t.eigenvector(e0)?;
    // a shift well off the eigenvalue keeps the factorization safe; the
    // refinement loop below converges at the rate δ/(e₁ - e₀)
    let shift = e0 - 1e-4 * e0.abs().max(1.0);
    let rhs: Vec<C64> = (0..n).map(|i| kernel.rhs(b_field, grid.x(i))).collect();
    let proj = |x: &[C64]| -> C64 { x.iter().zip(&v0).map(|(a, b)| a * b).sum() };
    let deflate = |x: &mut [C64]| {
        let c = proj(x);
        x.iter_mut().zip(&v0).for_each(|(a, b)| *a -= c * b);
    };
    let defect = proj(&rhs);
    let mut g = rhs.clone();
    deflate(&mut g);
    let solve = |r: &[C64]| -> Result<Vec<C64>> {
        let re = t.solve_shifted(shift, &r.iter().map(|z| z.re).collect::<Vec<_>>())?;
        let im = t.solve_shifted(shift, &r.iter().map(|z| z.im).collect::<Vec<_>>())?;
        Ok(re.into_iter().zip(im).map(|(a, b)| C64::new(a, b)).collect())
    };
    let apply = |x: &[C64], s: f64| -> Vec<C64> {
        let re = t.apply(&x.iter().map(|z| z.re).collect::<Vec<_>>());
        let im = t.apply(&x.iter().map(|z| z.im).collect::<Vec<_>>());
        re.into_iter().zip(im).zip(x).map(|((a, b), z)| C64::new(a, b) - z * s).collect()
    };
    let mut f = vec![C64::new(0.0, 0.0); n];
    let gn = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..40 {
        let tf = apply(&f, e0);
        let r: Vec<C64> = g.iter().zip(&tf).map(|(a, b)| a - b).collect();
        if r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() <= 1e-14 * gn {
            break;
        }
        let corr = solve(&r)?;
        f.iter_mut().zip(&corr).for_each(|(a, b)| *a += b);
        deflate(&mut f);
    }
    if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SolveFailed("non-finite solution of the f equation".into()));
    }
    let tf = apply(&f, e0);
    let ode_residual = (g.iter().zip(&tf).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * grid.h).sqrt();
    let orthogonality_defect = kernel.orthogonality_integral(b_field).norm();
    if orthogonality_defect > 1e-6 {
        return Err(Error::OrthogonalityViolated { value: orthogonality_defect });
    }
    Ok(FSolution {
        kernel,
        b_field,
        f: Hermite::new(grid, f, split),
        ode_residual,
        orthogonality_defect,
        deflated: defect.norm(),
        ground_offset: e0,
    })
}

/// `ε_μ(y) = ∫_{√|μ|}^y √(s² + μ) ds` by adaptive Simpson quadrature;
/// `y²/2` when `μ = 0`.
pub fn phase_eps_mu(mu: f64, y: f64) -> f64 {
    if mu == 0.0 {
        return 0.5 * y * y;
    }
    let f = |s: f64| (s * s + mu).max(0.0).sqrt();
    let a = mu.abs().sqrt();
    adaptive_simpson(&f, a, y, 1e-10 * (1.0 + y * y))
}

/// Closed form of [`phase_eps_mu`].
pub fn phase_eps_mu_closed(mu: f64, y: f64) -> f64 {
    let prim = |s: f64| {
        let r = (s * s + mu).max(0.0).sqrt();
        0.5 * (s * r + mu * (s + r).ln())
    };
    if mu == 0.0 {
        return 0.5 * y * y;
    }
    prim(y) - prim(mu.abs().sqrt())
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Supercritical sequence element, stored in normalized units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupercriticalQuasimode {
    pub normalization: Normalization,
    /// Target in original units.
    pub mu: f64,
    pub chi: Cutoff,
    pub n_k: f64,
    /// `∫zχ'²` of the cutoff.
    pub eps: f64,
    /// Norm in original units (equal to the normalized one).
    pub norm: f64,
    /// `‖Hψ - μψ‖` in original units.
    pub residual: f64,
    pub rel_residual: f64,
    #[serde(skip)]
    f: Option<FSolution>,
}

/// Cached per-`t` data for the tensor quadrature.
struct TNode {
    t: f64,
    w: f64,
    h: (f64, f64, f64),
    f: (C64, C64, C64),
    g: C64,
}

/// Builds `ψ_k` for `params` (original units) with cutoff `chi` of the
/// log family and inner scale `n_k`.
pub fn build_supercritical(params: &ModelParams, mu: f64, chi: Cutoff, n_k: f64, f: &FSolution) -> Result<SupercriticalQuasimode> {
    let norm_map = match params.kind {
        ModelKind::DeltaLine => normalize_delta(params)?,
        ModelKind::RegularV => {
            // the kernel was built for the normalized operator
            let (omega, lambda) = match &f.kernel {
                Kernel::Regular { omega, lambda, .. } => (*omega, *lambda),
                Kernel::Delta { .. } => return Err(Error::UnsupportedCombination("delta kernel for a regular model".into())),
            };
            let c = omega / params.omega;
            let _ = lambda;
            let v = params.potential.as_ref().ok_or(Error::MissingPotential)?;
            let scaled = PotentialSpec::new(v.s0() / c, v.samples().to_vec(), v.interpolation())?;
            Normalization {
                c,
                params: ModelParams {
                    omega: c * params.omega,
                    b_field: c * params.b_field,
                    lambda: c * c * params.lambda,
                    potential: Some(scaled),
                    ..params.clone()
                },
            }
        }
    };
    let np = &norm_map.params;
    if (np.b_field - f.b_field).abs() > 1e-12 * (1.0 + np.b_field) {
        return Err(Error::UnsupportedCombination("f was solved for a different field".into()));
    }
    let mu_n = norm_map.to_normalized(mu);
    if !matches!(chi, Cutoff::ChiKLog { .. }) {
        return Err(Error::UnsupportedCombination("supercritical sequence needs the log cutoff".into()));
    }
    if n_k * n_k + mu_n <= 0.0 {
        return Err(Error::InvalidGrid(format!("n_k = {n_k} too small for mu = {mu_n}")));
    }
    let (norm_sq, res_sq) = integrate(np.b_field, mu_n, &chi, n_k, f);
    let eps = chi.integrals().1;
    let norm = norm_sq.sqrt();
    let residual = res_sq.sqrt() / norm_map.c;
    Ok(SupercriticalQuasimode {
        normalization: norm_map,
        mu,
        chi,
        n_k,
        eps,
        norm,
        residual,
        rel_residual: residual / norm,
        f: Some(f.clone()),
    })
}

fn t_nodes(f: &FSolution) -> Vec<TNode> {
    let rule = Composite::new(10);
    rule.nodes_between(&f.kernel.breaks(), 200)
        .into_iter()
        .map(|(t, w)| TNode { t, w, h: f.kernel.eval(t), f: f.eval(t), g: f.kernel.rhs(f.b_field, t) })
        .collect()
}

/// Remainder `e^{-iθ}(H - μ)ψ` at `(t, y)` and the amplitude `e^{-iθ}ψ`,
/// normalized units, gauge `(0, Bx)`.
fn remainder(b: f64, mu: f64, chi: &Cutoff, n: f64, node: &TNode, y: f64) -> (C64, C64) {
    let t = node.t;
    let (h, h1, h2) = node.h;
    let (f, f1, f2) = node.f;
    let iy = 1.0 / y;
    let iy2 = iy * iy;
    let p = f * iy2 + h;
    let pt = f1 * iy2 + h1;
    let ptt = f2 * iy2 + h2;
    let py = f * (-2.0 * iy2 * iy);
    let pty = f1 * (-2.0 * iy2 * iy);
    let pyy = f * (6.0 * iy2 * iy2);
    let (x0, x1, x2) = chi.eval3(y / n);
    let (x1, x2) = (x1 / n, x2 / (n * n));
    let tr = t * iy;
    let dp = pt * tr + py;
    let d2p = ptt * (tr * tr) + pty * (2.0 * tr) + pyy;
    let u = p * x0;
    let uy = dp * x0 + p * x1;
    let uyy = d2p * x0 + dp * (2.0 * x1) + p * x2;
    let th1 = y * (1.0 + mu * iy2).sqrt();
    let th2 = y / th1;
    let r = -uyy - I * uy * (2.0 * th1) - I * u * th2 + I * uy * (2.0 * b * tr) - u * (2.0 * b * tr * th1)
        + u * (b * b * tr * tr)
        + node.g * x0;
    (r, u)
}

fn s_nodes(chi: &Cutoff) -> Vec<(f64, f64)> {
    let br: Vec<f64> = chi.breakpoints().iter().map(|z| z.ln()).collect();
    Composite::new(12).nodes_between(&br, 24)
}

/// `(‖ψ‖², ‖(H - μ)ψ‖²)` in normalized units.
fn integrate(b: f64, mu: f64, chi: &Cutoff, n: f64, f: &FSolution) -> (f64, f64) {
    let tn = t_nodes(f);
    let sn = s_nodes(chi);
    let (mut nsq, mut rsq) = (0.0, 0.0);
    for &(s, ws) in &sn {
        let y = n * s.exp();
        for node in &tn {
            let (r, u) = remainder(b, mu, chi, n, node, y);
            nsq += ws * node.w * u.norm_sqr();
            rsq += ws * node.w * r.norm_sqr();
        }
    }
    (nsq, rsq)
}

impl SupercriticalQuasimode {
    /// `[n_k, k n_k]` in normalized units.
    pub fn y_support(&self) -> (f64, f64) {
        let (lo, hi) = self.chi.support();
        (lo * self.n_k, hi * self.n_k)
    }

    /// Remainder `(H - μ)ψ` and `ψ` at a point `(x, y)` of the normalized plane,
    /// gauge `(0, Bx)`, with the phase included. Used for cross-checks.
    pub fn pointwise(&self, x: f64, y: f64) -> Result<(C64, C64)> {
        let f = self.f.as_ref().ok_or(Error::UnsupportedCombination("solution not attached".into()))?;
        let t = x * y;
        let node = TNode { t, w: 0.0, h: f.kernel.eval(t), f: f.eval(t), g: f.kernel.rhs(f.b_field, t) };
        let mu_n = self.normalization.to_normalized(self.mu);
        let (r, u) = remainder(self.normalization.params.b_field, mu_n, &self.chi, self.n_k, &node, y);
        let phase = C64::from_polar(1.0, phase_eps_mu(mu_n, y));
        Ok((r * phase, u * phase))
    }

    /// Samples `ψ` on a grid in original units and the Landau gauge.
    pub fn sample_on(&self, grid: Grid2D) -> Result<Quasimode> {
        let c = self.normalization.c;
        let s = c.sqrt();
        let (_, ytop) = self.y_support();
        let available = grid.y_range().1 / s;
        if ytop > available {
            return Err(Error::SupportOverflow { needed: ytop * s, available: grid.y_range().1 });
        }
        let f = self.f.as_ref().ok_or(Error::UnsupportedCombination("solution not attached".into()))?;
        let b = self.normalization.params.b_field;
        let mu_n = self.normalization.to_normalized(self.mu);
        let mut values = vec![C64::new(0.0, 0.0); grid.dim()];
        for j in 0..grid.ny {
            let y = grid.y(j) / s;
            let x0 = self.chi.eval(y / self.n_k);
            if x0 == 0.0 {
                continue;
            }
            let theta = phase_eps_mu(mu_n, y);
            for i in 0..grid.nx {
                let x = grid.x(i) / s;
                let t = x * y;
                let amp = f.f.eval(t).0 / (y * y) + f.kernel.eval(t).0;
                // Landau gauge: multiply by e^{-iBxy}
                values[grid.index(i, j)] = amp * x0 * C64::from_polar(1.0 / s, theta - b * x * y);
            }
        }
        Ok(Quasimode {
            grid,
            values,
            mu: self.mu,
            params: self.original_params(),
            construction: Construction::Supercritical,
            assembly: AssemblyOptions::new(Scheme::DirectCentral),
            meta: QuasimodeMeta {
                k: Some(self.chi.support().1),
                n: Some(self.n_k),
                eps: Some(self.eps),
                ..Default::default()
            },
        })
    }

    fn original_params(&self) -> ModelParams {
        let c = self.normalization.c;
        let p = &self.normalization.params;
        match p.kind {
            ModelKind::DeltaLine => ModelParams { omega: p.omega / c, b_field: p.b_field / c, lambda: p.lambda / c, ..p.clone() },
            ModelKind::RegularV => {
                let v = p.potential.as_ref().map(|v| {
                    PotentialSpec::new(v.s0() * c, v.samples().to_vec(), v.interpolation()).expect("rescaled potential")
                });
                ModelParams {
                    omega: p.omega / c,
                    b_field: p.b_field / c,
                    lambda: p.lambda / (c * c),
                    potential: v,
                    ..p.clone()
                }
            }
        }
    }
}

/// Dyadic schedule in `ln k` (`k_{j+1} = k_j²`) with inner scales chosen so
/// that successive supports are disjoint: `n_{j+1} > k_j n_j`.
pub fn disjoint_schedule(k0: f64, n0: f64, count: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(count);
    let (mut k, mut n) = (k0, n0);
    for _ in 0..count {
        out.push((k, n));
        n = (k * n).ceil() + 1.0;
        k *= k;
    }
    out
}
