//! Physical parameters, truncated grids and tabulated potentials.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the two Hamiltonians is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// `(i∇+A)² + ω²y² + λ y δ(x)`
    DeltaLine,
    /// `(i∇+A)² + ω²y² + λ y² V(xy)`
    RegularV,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub b_field: f64,
    pub lambda: f64,
    pub kind: ModelKind,
    pub potential: Option<PotentialSpec>,
}

/// Sign of `inf σ(L)` for the δ model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl ModelParams {
    pub fn delta(omega: f64, b_field: f64, lambda: f64) -> Self {
        ModelParams { omega, b_field, lambda, kind: ModelKind::DeltaLine, potential: None }
    }

    pub fn regular(omega: f64, b_field: f64, lambda: f64, potential: PotentialSpec) -> Self {
        ModelParams { omega, b_field, lambda, kind: ModelKind::RegularV, potential: Some(potential) }
    }

    /// `√(ω²+B²)`, the bottom of the essential spectrum in the subcritical case.
    pub fn threshold(&self) -> f64 {
        self.omega.hypot(self.b_field)
    }

    /// Regime of the δ model; `|λ + 2ω| ≤ 1e-12·ω` counts as critical.
    pub fn delta_regime(&self) -> Regime {
        let offset = self.lambda + 2.0 * self.omega;
        if offset.abs() <= 1e-12 * self.omega.max(1.0) {
            Regime::Critical
        } else if offset > 0.0 {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        ModelParams { lambda, ..self.clone() }
    }
}

/// Checks the parameter invariants and returns the parameters unchanged.
pub fn validate_params(p: ModelParams) -> Result<ModelParams> {
    if !(p.omega > 0.0) {
        return Err(Error::RejectsNonpositiveOmega(p.omega));
    }
    if !(p.lambda <= 0.0) {
        return Err(Error::RejectsPositiveLambda(p.lambda));
    }
    if !(p.b_field >= 0.0) {
        return Err(Error::RejectsNegativeField(p.b_field));
    }
    if p.kind == ModelKind::RegularV && p.potential.is_none() {
        return Err(Error::MissingPotential);
    }
    Ok(p)
}

/// Witnessing constants of the essential self-adjointness criterion with
/// `a_m = m`, `b_m = m + 1`, `ν_m = m + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsaReport {
    pub big_k: f64,
    pub small_k: f64,
    pub holds: bool,
}

/// The potential `λ y² V(xy)` is bounded below by `-k ν_m` on the strip
/// `m ≤ |y| < m + 1` once `k = |λ|‖V‖∞`; `(b_m - a_m)² ν_m = m + 1 > 1/2` and
/// `Σ 1/ν_m` diverges, so the predicate reduces to finiteness of `‖V‖∞`.
pub fn esa_condition_check(p: &ModelParams, v: &PotentialSpec) -> EsaReport {
    let sup = v.sup_norm();
    let small_k = p.lambda.abs() * sup;
    EsaReport { big_k: 0.5, small_k, holds: sup.is_finite() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Dirichlet,
    Neumann,
}

/// Uniform node-centred grid on `[c - l, c + l]` with an odd node count.
///
/// Dirichlet truncation keeps every node as an unknown and places the wall one
/// spacing outside the last node; Neumann drops the missing links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub l: f64,
    pub n: usize,
    pub h: f64,
    pub bc: Boundary,
    #[serde(default)]
    pub center: f64,
}

impl Grid1D {
    pub fn new(l: f64, n: usize, bc: Boundary) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidGrid(format!("half-width must be positive, got {l}")));
        }
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidGrid(format!("node count must be odd and >= 3, got {n}")));
        }
        Ok(Grid1D { l, n, h: 2.0 * l / (n - 1) as f64, bc, center: 0.0 })
    }

    /// Grid with spacing at most `h` covering `[-l, l]`.
    pub fn with_spacing(l: f64, h: f64, bc: Boundary) -> Result<Self> {
        let cells = (2.0 * l / h).ceil().max(2.0) as usize;
        let cells = cells + cells % 2;
        Grid1D::new(l, cells + 1, bc)
    }

    pub fn centered_at(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn mid(&self) -> usize {
        (self.n - 1) / 2
    }

    /// Node coordinate; symmetric grids give `x(mid - j) = -x(mid + j)` exactly.
    pub fn x(&self, i: usize) -> f64 {
        self.center + (i as f64 - self.mid() as f64) * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Index of the node at coordinate 0, if there is one.
    pub fn zero_node(&self) -> Option<usize> {
        node_at_zero(self.center, self.h, self.n)
    }
}

fn node_at_zero(center: f64, h: f64, n: usize) -> Option<usize> {
    let shift = -center / h;
    let j = shift.round();
    if (shift - j).abs() > 1e-9 {
        return None;
    }
    let i = (n - 1) as f64 / 2.0 + j;
    (i >= 0.0 && i <= (n - 1) as f64).then_some(i as usize)
}

/// Rectangular grid `[x0 - lx, x0 + lx] × [y0 - ly, y0 + ly]`, x running fastest
/// in the linear index `j·nx + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub bc: Boundary,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
}

impl Grid2D {
    pub fn new(lx: f64, ly: f64, nx: usize, ny: usize, bc: Boundary) -> Result<Self> {
        let gx = Grid1D::new(lx, nx, bc)?;
        let gy = Grid1D::new(ly, ny, bc)?;
        Ok(Grid2D { lx, ly, nx, ny, hx: gx.h, hy: gy.h, bc, x0: 0.0, y0: 0.0 })
    }

    /// Grid with spacings at most `hx`, `hy`.
    pub fn with_spacing(lx: f64, ly: f64, hx: f64, hy: f64, bc: Boundary) -> Result<Self> {
        let gx = Grid1D::with_spacing(lx, hx, bc)?;
        let gy = Grid1D::with_spacing(ly, hy, bc)?;
        Grid2D::new(lx, ly, gx.n, gy.n, bc)
    }

    /// Window grid with exact spacings `hx`, `hy` centred at `(x0, y0)`.
    /// The half-widths are rounded up to whole cells.
    pub fn window(x0: f64, y0: f64, lx: f64, ly: f64, hx: f64, hy: f64) -> Result<Self> {
        if !(hx > 0.0 && hy > 0.0) {
            return Err(Error::InvalidGrid("spacings must be positive".into()));
        }
        let cx = (lx / hx).ceil().max(1.0) as usize;
        let cy = (ly / hy).ceil().max(1.0) as usize;
        Ok(Grid2D {
            lx: cx as f64 * hx,
            ly: cy as f64 * hy,
            nx: 2 * cx + 1,
            ny: 2 * cy + 1,
            hx,
            hy,
            bc: Boundary::Dirichlet,
            x0,
            y0,
        })
    }

    pub fn dim(&self) -> usize {
        self.nx * self.ny
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + (i as f64 - ((self.nx - 1) / 2) as f64) * self.hx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + (j as f64 - ((self.ny - 1) / 2) as f64) * self.hy
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x(0), self.x(self.nx - 1))
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y(0), self.y(self.ny - 1))
    }

    /// Column index of the line `x = 0`, if it is a node.
    pub fn zero_column(&self) -> Option<usize> {
        node_at_zero(self.x0, self.hx, self.nx)
    }

    /// Area element of the grid quadrature.
    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    pub fn x_grid(&self) -> Grid1D {
        Grid1D { l: self.lx, n: self.nx, h: self.hx, bc: self.bc, center: self.x0 }
    }

    pub fn y_grid(&self) -> Grid1D {
        Grid1D { l: self.ly, n: self.ny, h: self.hy, bc: self.bc, center: self.y0 }
    }

    /// Same spacings, scaled domain: the grid seen after `x -> x / s`.
    pub fn scaled(&self, s: f64) -> Self {
        Grid2D {
            lx: self.lx * s,
            ly: self.ly * s,
            hx: self.hx * s,
            hy: self.hy * s,
            x0: self.x0 * s,
            y0: self.y0 * s,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    #[default]
    Linear,
    /// Cubic spline with zero end slopes.
    CubicClamped,
}

/// Compactly supported `V ≥ 0` tabulated on a uniform grid over `[-s0, s0]`.
///
/// Internally the interpolant is stored as one cubic per table cell together
/// with the running integral, so point values, cell averages and `∫V` are all
/// exact for the interpolant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialRepr", into = "PotentialRepr")]
pub struct PotentialSpec {
    s0: f64,
    samples: Vec<f64>,
    interpolation: Interpolation,
    step: f64,
    coeffs: Vec<[f64; 4]>,
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PotentialRepr {
    s0: f64,
    samples: Vec<f64>,
    interpolation: Interpolation,
}

impl TryFrom<PotentialRepr> for PotentialSpec {
    type Error = Error;
    fn try_from(r: PotentialRepr) -> Result<Self> {
        PotentialSpec::new(r.s0, r.samples, r.interpolation)
    }
}

impl From<PotentialSpec> for PotentialRepr {
    fn from(p: PotentialSpec) -> Self {
        PotentialRepr { s0: p.s0, samples: p.samples, interpolation: p.interpolation }
    }
}

impl PotentialSpec {
    pub fn new(s0: f64, samples: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if !(s0 > 0.0) || !s0.is_finite() {
            return Err(Error::InvalidPotential(format!("s0 must be positive, got {s0}")));
        }
        if samples.len() < 3 {
            return Err(Error::InvalidPotential("need at least 3 samples".into()));
        }
        if let Some(v) = samples.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidPotential(format!("sample {v} is negative or not finite")));
        }
        if samples[0] != 0.0 || samples[samples.len() - 1] != 0.0 {
            return Err(Error::InvalidPotential("V(±s0) must vanish".into()));
        }
        let step = 2.0 * s0 / (samples.len() - 1) as f64;
        let coeffs = match interpolation {
            Interpolation::Linear => samples
                .windows(2)
                .map(|w| [w[0], (w[1] - w[0]) / step, 0.0, 0.0])
                .collect(),
            Interpolation::CubicClamped => clamped_spline(&samples, step),
        };
        let mut cumulative = Vec::with_capacity(samples.len());
        cumulative.push(0.0);
        for c in &coeffs {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + poly_integral(c, step));
        }
        Ok(PotentialSpec { s0, samples, interpolation, step, coeffs, cumulative })
    }

    /// Tabulates `f` at `n` uniform nodes over `[-s0, s0]`; the end values are
    /// forced to zero.
    pub fn from_fn(s0: f64, n: usize, interpolation: Interpolation, f: impl Fn(f64) -> f64) -> Result<Self> {
        let step = 2.0 * s0 / (n.max(2) - 1) as f64;
        let mut samples: Vec<f64> = (0..n).map(|i| f(-s0 + i as f64 * step)).collect();
        if let Some(first) = samples.first_mut() {
            *first = 0.0;
        }
        if let Some(last) = samples.last_mut() {
            *last = 0.0;
        }
        PotentialSpec::new(s0, samples, interpolation)
    }

    /// `height · 𝟙[-a, a]`, approximated by linear ramps one table cell wide.
    pub fn square_well(a: f64, height: f64, n: usize) -> Result<Self> {
        let mut samples = vec![height; n];
        samples[0] = 0.0;
        samples[n - 1] = 0.0;
        PotentialSpec::new(a, samples, Interpolation::Linear)
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn sup_norm(&self) -> f64 {
        match self.interpolation {
            Interpolation::Linear => self.samples.iter().cloned().fold(0.0, f64::max),
            Interpolation::CubicClamped => {
                let mut m = 0.0f64;
                for c in &self.coeffs {
                    for q in 0..=16 {
                        m = m.max(poly_eval(c, self.step * q as f64 / 16.0).abs());
                    }
                }
                m
            }
        }
    }

    /// Whether `V(s) = V(-s)` holds for the table.
    pub fn is_symmetric(&self) -> bool {
        let n = self.samples.len();
        (0..n / 2).all(|i| (self.samples[i] - self.samples[n - 1 - i]).abs() <= 1e-12 * self.sup_norm().max(1.0))
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let u = (s + self.s0) / self.step;
        let i = (u.floor().max(0.0) as usize).min(self.coeffs.len() - 1);
        (i, s + self.s0 - i as f64 * self.step)
    }

    /// `V(s)`; exactly zero outside `[-s0, s0]`.
    pub fn eval(&self, s: f64) -> f64 {
        if !(s.abs() < self.s0) {
            return 0.0;
        }
        let (i, t) = self.locate(s);
        poly_eval(&self.coeffs[i], t)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        if !(s.abs() < self.s0) {
            return 0.0;
        }
        let (i, t) = self.locate(s);
        let c = &self.coeffs[i];
        c[1] + t * (2.0 * c[2] + 3.0 * t * c[3])
    }

    /// `∫_{-s0}^{s} V`.
    pub fn primitive(&self, s: f64) -> f64 {
        if s <= -self.s0 {
            return 0.0;
        }
        if s >= self.s0 {
            return *self.cumulative.last().unwrap();
        }
        let (i, t) = self.locate(s);
        self.cumulative[i] + poly_integral(&self.coeffs[i], t)
    }

    pub fn integral(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Mean of `V` over `[a, b]`; falls back to the point value for a
    /// degenerate interval.
    pub fn average(&self, a: f64, b: f64) -> f64 {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if b - a <= 1e-14 * (1.0 + a.abs()) {
            return self.eval(0.5 * (a + b));
        }
        (self.primitive(b) - self.primitive(a)) / (b - a)
    }

    /// Parses the two-column file format with the `# potential s0=<float>` header.
    pub fn parse(text: &str, interpolation: Interpolation) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty potential file".into()))?;
        let s0 = header
            .strip_prefix('#')
            .map(str::trim)
            .and_then(|h| h.strip_prefix("potential"))
            .map(str::trim)
            .and_then(|h| h.strip_prefix("s0="))
            .ok_or_else(|| Error::Parse(format!("bad header line: {header}")))?
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad s0: {e}")))?;
        let mut s = Vec::new();
        let mut v = Vec::new();
        for line in lines {
            if line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse(format!("expected two columns: {line}")));
            };
            s.push(a.parse::<f64>().map_err(|e| Error::Parse(format!("{a}: {e}")))?);
            v.push(b.parse::<f64>().map_err(|e| Error::Parse(format!("{b}: {e}")))?);
        }
        if s.len() < 3 {
            return Err(Error::Parse("need at least 3 rows".into()));
        }
        let step = 2.0 * s0 / (s.len() - 1) as f64;
        for (i, si) in s.iter().enumerate() {
            let expect = -s0 + i as f64 * step;
            if (si - expect).abs() > 1e-9 * s0.max(1.0) {
                return Err(Error::Parse(format!("row {i}: s = {si} is not on the uniform grid over [-s0, s0]")));
            }
        }
        PotentialSpec::new(s0, v, interpolation)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("# potential s0={:?}\n", self.s0);
        for (i, v) in self.samples.iter().enumerate() {
            let s = -self.s0 + i as f64 * self.step;
            let _ = writeln!(out, "{s:.17e} {v:.17e}");
        }
        out
    }
}

fn poly_eval(c: &[f64; 4], t: f64) -> f64 {
    c[0] + t * (c[1] + t * (c[2] + t * c[3]))
}

fn poly_integral(c: &[f64; 4], t: f64) -> f64 {
    t * (c[0] + t * (c[1] / 2.0 + t * (c[2] / 3.0 + t * c[3] / 4.0)))
}

/// Spline through `y` with zero slope at both ends, one cubic per cell.
fn clamped_spline(y: &[f64], h: f64) -> Vec<[f64; 4]> {
    let n = y.len();
    // second derivatives m from the clamped system, solved by the Thomas algorithm
    let mut sub = vec![1.0; n];
    let mut dia = vec![4.0; n];
    let mut sup = vec![1.0; n];
    let mut rhs = vec![0.0; n];
    dia[0] = 2.0;
    dia[n - 1] = 2.0;
    rhs[0] = 6.0 / h * ((y[1] - y[0]) / h);
    rhs[n - 1] = 6.0 / h * (-(y[n - 1] - y[n - 2]) / h);
    for i in 1..n - 1 {
        rhs[i] = 6.0 / (h * h) * (y[i + 1] - 2.0 * y[i] + y[i - 1]);
    }
    sub[0] = 0.0;
    sup[n - 1] = 0.0;
    for i in 1..n {
        let w = sub[i] / dia[i - 1];
        dia[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / dia[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / dia[i];
    }
    (0..n - 1)
        .map(|i| {
            [
                y[i],
                (y[i + 1] - y[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0,
                m[i] / 2.0,
                (m[i + 1] - m[i]) / (6.0 * h),
            ]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        assert!(validate_params(ModelParams::delta(1.0, 1.0, -1.0)).is_ok());
        assert_eq!(
            validate_params(ModelParams::delta(0.0, 1.0, -1.0)),
            Err(Error::RejectsNonpositiveOmega(0.0))
        );
        assert_eq!(
            validate_params(ModelParams::delta(1.0, 1.0, 0.5)),
            Err(Error::RejectsPositiveLambda(0.5))
        );
        let mut p = ModelParams::delta(1.0, 1.0, -1.0);
        p.kind = ModelKind::RegularV;
        assert_eq!(validate_params(p), Err(Error::MissingPotential));
    }

    #[test]
    fn esa_examples() {
        let v = PotentialSpec::square_well(1.0, 1.0, 101).unwrap();
        let r = esa_condition_check(&ModelParams::regular(1.0, 1.0, -1.0, v.clone()), &v);
        assert!(r.holds);
        assert_eq!(r.big_k, 0.5);
        assert_eq!(r.small_k, 1.0);
        let r = esa_condition_check(&ModelParams::regular(1.0, 1.0, 0.0, v.clone()), &v);
        assert_eq!(r.small_k, 0.0);
        let v2 = PotentialSpec::square_well(1.0, 2.0, 101).unwrap();
        let r = esa_condition_check(&ModelParams::regular(1.0, 1.0, -3.0, v2.clone()), &v2);
        assert_eq!(r.small_k, 6.0);
    }

    #[test]
    fn zero_node_is_exact() {
        let g = Grid2D::new(14.0, 3.0, 561, 61, Boundary::Dirichlet).unwrap();
        let i0 = g.zero_column().unwrap();
        assert_eq!(i0, 280);
        assert_eq!(g.x(i0), 0.0);
        assert_eq!(g.y(30), 0.0);
        for j in 0..g.ny {
            assert_eq!(g.y(j), -g.y(g.ny - 1 - j));
        }
        assert!(Grid2D::new(1.0, 1.0, 4, 5, Boundary::Dirichlet).is_err());
    }

    #[test]
    fn window_zero_column() {
        let g = Grid2D::window(0.3, 10.0, 1.0, 2.0, 0.1, 0.1).unwrap();
        assert_eq!(g.zero_column(), Some(7));
        let g = Grid2D::window(0.05, 0.0, 1.0, 2.0, 0.1, 0.1).unwrap();
        assert_eq!(g.zero_column(), None);
        let g = Grid2D::window(50.0, 0.0, 1.0, 2.0, 0.1, 0.1).unwrap();
        assert_eq!(g.zero_column(), None);
    }

    #[test]
    fn potential_support_and_integral() {
        let v = PotentialSpec::from_fn(2.0, 401, Interpolation::Linear, |s| (4.0 - s * s).max(0.0)).unwrap();
        assert_eq!(v.eval(2.0), 0.0);
        assert_eq!(v.eval(-7.5), 0.0);
        assert!((v.integral() - 32.0 / 3.0).abs() < 1e-3);
        let c = PotentialSpec::from_fn(2.0, 401, Interpolation::CubicClamped, |s| (4.0 - s * s).max(0.0)).unwrap();
        assert!((c.integral() - 32.0 / 3.0).abs() < 1e-3);
        assert!((c.eval(0.3) - (4.0 - 0.09)).abs() < 1e-4);
        assert!((v.average(-1.0, 1.0) - (8.0 - 2.0 / 3.0) / 2.0).abs() < 1e-3);
    }

    #[test]
    fn potential_file_round_trip() {
        let v = PotentialSpec::square_well(1.0, 1.5, 21).unwrap();
        let text = v.to_file_string();
        let w = PotentialSpec::parse(&text, Interpolation::Linear).unwrap();
        assert_eq!(v, w);
        assert!(PotentialSpec::parse("# potential s0=1\n-1 0\n0 1\n", Interpolation::Linear).is_err());
        assert!(PotentialSpec::parse("# nope\n-1 0\n0 1\n1 0\n", Interpolation::Linear).is_err());
        assert!(PotentialSpec::parse("# potential s0=1\n-1 0\n0.2 1\n1 0\n", Interpolation::Linear).is_err());
    }

    #[test]
    fn potential_rejects_bad_tables() {
        assert!(PotentialSpec::new(1.0, vec![0.0, -1.0, 0.0], Interpolation::Linear).is_err());
        assert!(PotentialSpec::new(1.0, vec![0.0, 1.0, 0.5], Interpolation::Linear).is_err());
        assert!(PotentialSpec::new(0.0, vec![0.0, 1.0, 0.0], Interpolation::Linear).is_err());
    }
}
