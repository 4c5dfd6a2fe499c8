//! Thick-restart Lanczos for the lowest eigenpairs of a Hermitian operator.
//!
//! The Krylov basis is kept orthonormal by classical Gram-Schmidt against every
//! stored vector, repeated once when the first pass cancels more than 30% of
//! the norm. At a restart the lowest `k + (m - k)/2` Ritz vectors are kept and
//! the projected matrix becomes an arrowhead, which is diagonalized together
//! with the new Lanczos rows by a cyclic Jacobi method.
//!
//! Optionally the operator is replaced by `-T_d(((b + c) - 2H)/(b - c))`, a
//! Chebyshev polynomial that maps the unwanted part `[c, b]` of the spectrum
//! into `[-1, 1]` and pushes the wanted eigenvalues far below `-1`. The same
//! eigenvectors are then found with fewer orthogonalizations.
//!
//! Start vectors are drawn from xoshiro256++ seeded through splitmix64: with
//! state `s`, the output is `rotl(s0 + s3, 23) + s0` and the update is
//! `t = s1 << 17; s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)`.
//! Each complex entry takes two outputs, mapped to `[-1, 1)` via the top 53 bits.

use std::cell::Cell;

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::{axpy, dot, norm, HermitianOperator, C64};

/// Knobs of [`lowest_eigs_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosOptions {
    pub k: usize,
    /// Absolute residual `‖Hv - Ev‖` required of every returned pair.
    pub tol: f64,
    /// Budget of Lanczos steps.
    pub max_iter: usize,
    pub seed: u64,
    /// Krylov basis size before a restart; `None` picks `max(2k + 16, 32)`.
    pub basis: Option<usize>,
    /// Degree of the Chebyshev filter; 0 runs plain Lanczos.
    pub filter_degree: usize,
}

impl LanczosOptions {
    pub fn new(k: usize, tol: f64, max_iter: usize, seed: u64) -> Self {
        LanczosOptions { k, tol, max_iter, seed, basis: None, filter_degree: 0 }
    }
}

/// Lowest eigenpairs with their certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub residual_norms: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<C64>>,
    /// Lanczos steps taken.
    pub iterations: usize,
    /// Applications of the original operator.
    pub matvecs: usize,
    pub restarts: usize,
    pub converged: bool,
    pub seed: u64,
}

/// Lowest `k` eigenpairs by plain thick-restart Lanczos.
pub fn lowest_eigs<H: HermitianOperator + ?Sized>(
    h: &H,
    k: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<SpectrumResult> {
    lowest_eigs_with(h, &LanczosOptions::new(k, tol, max_iter, seed))
}

/// `(E, ‖Hv - Ev‖/‖v‖)` with `E = Re⟨v, Hv⟩/⟨v, v⟩`.
pub fn rayleigh_refine<H: HermitianOperator + ?Sized>(h: &H, v: &[C64]) -> Result<(f64, f64)> {
    let nv = norm(v);
    if !(nv > 0.0) {
        return Err(Error::ZeroVector);
    }
    let mut hv = vec![C64::new(0.0, 0.0); v.len()];
    h.apply(v, &mut hv);
    let e = dot(v, &hv).re / (nv * nv);
    axpy(C64::new(-e, 0.0), v, &mut hv);
    Ok((e, norm(&hv) / nv))
}

/// Deterministic start vector of unit norm.
pub fn seeded_vector(n: usize, rng: &mut Xoshiro256PlusPlus) -> Vec<C64> {
    let mut unit = || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * 2.0 - 1.0;
    let mut v: Vec<C64> = (0..n).map(|_| C64::new(unit(), unit())).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    v
}

struct Counted<'a, H: ?Sized> {
    inner: &'a H,
    count: Cell<usize>,
}

impl<H: HermitianOperator + ?Sized> Counted<'_, H> {
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.count.set(self.count.get() + 1);
        self.inner.apply(x, y);
    }
}

/// `-T_d(((b + c) - 2H)/(b - c))` applied through the three-term recurrence.
struct Filter<'a, 'b, H: ?Sized> {
    h: &'a Counted<'b, H>,
    b: f64,
    c: f64,
    degree: usize,
}

impl<H: HermitianOperator + ?Sized> Filter<'_, '_, H> {
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let n = x.len();
        let e = 2.0 / (self.b - self.c);
        let s = (self.b + self.c) / (self.b - self.c);
        // u(x) = s x - e H x
        let u = |v: &[C64], out: &mut [C64]| {
            self.h.apply(v, out);
            for (o, vi) in out.iter_mut().zip(v) {
                *o = vi * s - *o * e;
            }
        };
        let mut prev = x.to_vec();
        let mut cur = vec![C64::new(0.0, 0.0); n];
        u(x, &mut cur);
        let mut next = vec![C64::new(0.0, 0.0); n];
        for _ in 1..self.degree {
            u(&cur, &mut next);
            for (nx, p) in next.iter_mut().zip(&prev) {
                *nx = *nx * 2.0 - p;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        for (yi, ci) in y.iter_mut().zip(&cur) {
            *yi = -ci;
        }
    }

    /// Value of the filter polynomial at a scalar.
    fn eval(&self, x: f64) -> f64 {
        let u = ((self.b + self.c) - 2.0 * x) / (self.b - self.c);
        let (mut p, mut c) = (1.0, u);
        for _ in 1..self.degree {
            let nx = 2.0 * u * c - p;
            p = c;
            c = nx;
        }
        -c
    }
}

/// Lowest `k` eigenpairs with full control over the Lanczos parameters.
pub fn lowest_eigs_with<H: HermitianOperator + ?Sized>(h: &H, opts: &LanczosOptions) -> Result<SpectrumResult> {
    let n = h.dim();
    let k = opts.k;
    if k == 0 || k >= n {
        return Err(Error::DimensionTooSmall { n, k });
    }
    let m = opts.basis.unwrap_or((2 * k + 16).max(32)).max(k + 2).min(n);
    let counted = Counted { inner: h, count: Cell::new(0) };
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(opts.seed);
    let start = seeded_vector(n, &mut rng);
    let (lo, hi) = h.spectral_bounds();

    let outcome = if opts.filter_degree > 1 && m < n {
        // short unrestarted pass to place the filter cut above the wanted part
        let probe = Krylov::run_probe(&counted, &start, m, &mut rng, hi - lo)?;
        let extra = (k / 2).max(4);
        let c = probe[(k + extra).min(probe.len() - 1)];
        let c = if c >= hi { 0.5 * (probe[k.min(probe.len() - 1)] + hi) } else { c };
        let filter = Filter { h: &counted, b: hi + 1e-9 * (hi - lo).abs().max(1.0), c, degree: opts.filter_degree };
        let scale = filter.eval(lo).abs().max(1.0);
        trlan(
            n,
            k,
            m,
            opts,
            &start,
            &mut rng,
            scale,
            |x, y| filter.apply(x, y),
            &counted,
            true,
        )?
    } else {
        trlan(n, k, m, opts, &start, &mut rng, (hi - lo).abs().max(1.0), |x, y| counted.apply(x, y), &counted, false)?
    };
    let (eigenvalues, residual_norms, eigenvectors, iterations, restarts) = outcome;
    let converged = residual_norms.iter().all(|r| *r <= opts.tol);
    Ok(SpectrumResult {
        eigenvalues,
        residual_norms,
        eigenvectors,
        iterations,
        matvecs: counted.count.get(),
        restarts,
        converged,
        seed: opts.seed,
    })
}

type Outcome = (Vec<f64>, Vec<f64>, Vec<Vec<C64>>, usize, usize);
type Certified = (Vec<f64>, Vec<f64>, Vec<Vec<C64>>);

struct Krylov;

impl Krylov {
    /// Ritz values of an `m`-step unrestarted Lanczos run.
    fn run_probe<H: HermitianOperator + ?Sized>(
        h: &Counted<'_, H>,
        start: &[C64],
        m: usize,
        rng: &mut Xoshiro256PlusPlus,
        scale: f64,
    ) -> Result<Vec<f64>> {
        let n = start.len();
        let mut basis = vec![start.to_vec()];
        let mut t = vec![vec![0.0; m]; m];
        let mut w = vec![C64::new(0.0, 0.0); n];
        for j in 0..m {
            h.apply(&basis[j], &mut w);
            t[j][j] = dot(&basis[j], &w).re;
            orthogonalize(&mut w, &basis);
            if j + 1 == m {
                break;
            }
            let beta = norm(&w);
            let next = if beta > 1e-10 * scale { scaled(&w, 1.0 / beta) } else { fresh(n, &basis, rng)? };
            let beta = if beta > 1e-10 * scale { beta } else { 0.0 };
            t[j][j + 1] = beta;
            t[j + 1][j] = beta;
            basis.push(next);
        }
        let (vals, _) = jacobi_real(&t);
        Ok(vals)
    }
}

fn scaled(w: &[C64], a: f64) -> Vec<C64> {
    w.iter().map(|x| x * a).collect()
}

/// Two-pass classical Gram-Schmidt of `w` against `basis`; the second pass runs
/// only when the first removes a sizeable part of `w`.
fn orthogonalize(w: &mut [C64], basis: &[Vec<C64>]) {
    for pass in 0..2 {
        let before = norm(w);
        let coeffs: Vec<C64> = basis.iter().map(|v| dot(v, w)).collect();
        for (v, c) in basis.iter().zip(&coeffs) {
            axpy(-c, v, w);
        }
        if pass == 0 && norm(w) > 0.7 * before {
            break;
        }
    }
}

/// Random unit vector orthogonal to `basis`.
fn fresh(n: usize, basis: &[Vec<C64>], rng: &mut Xoshiro256PlusPlus) -> Result<Vec<C64>> {
    for _ in 0..5 {
        let mut v = seeded_vector(n, rng);
        orthogonalize(&mut v, basis);
        orthogonalize(&mut v, basis);
        let nv = norm(&v);
        if nv > 1e-8 {
            return Ok(scaled(&v, 1.0 / nv));
        }
    }
    Err(Error::BreakdownUnrecoverable)
}

/// Thick-restart Lanczos on `op`; Ritz vectors are certified against `h`.
#[allow(clippy::too_many_arguments)]
fn trlan<H: HermitianOperator + ?Sized>(
    n: usize,
    k: usize,
    m: usize,
    opts: &LanczosOptions,
    start: &[C64],
    rng: &mut Xoshiro256PlusPlus,
    scale: f64,
    op: impl Fn(&[C64], &mut [C64]),
    h: &Counted<'_, H>,
    filtered: bool,
) -> Result<Outcome> {
    let mut basis: Vec<Vec<C64>> = vec![start.to_vec()];
    let mut t = vec![vec![0.0; m]; m];
    let mut first = 0;
    let mut steps = 0;
    let mut restarts = 0;
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut best: Option<Certified> = None;
    loop {
        let mut beta_last = 0.0;
        let mut residual_vec: Option<Vec<C64>> = None;
        let mut exhausted = false;
        let mut len = m;
        for j in first..m {
            op(&basis[j], &mut w);
            steps += 1;
            t[j][j] = dot(&basis[j], &w).re;
            orthogonalize(&mut w, &basis);
            let beta = norm(&w);
            let small = !(beta > 1e-10 * scale);
            if j + 1 < m {
                let next = if small {
                    if basis.len() == n {
                        exhausted = true;
                        len = j + 1;
                        break;
                    }
                    fresh(n, &basis, rng)?
                } else {
                    scaled(&w, 1.0 / beta)
                };
                let beta = if small { 0.0 } else { beta };
                t[j][j + 1] = beta;
                t[j + 1][j] = beta;
                basis.push(next);
            } else if small {
                beta_last = 0.0;
                exhausted = basis.len() == n;
                if !exhausted {
                    residual_vec = Some(fresh(n, &basis, rng)?);
                }
            } else {
                beta_last = beta;
                residual_vec = Some(scaled(&w, 1.0 / beta));
            }
        }
        let tm: Vec<Vec<f64>> = t[..len].iter().map(|r| r[..len].to_vec()).collect();
        let (theta, y) = jacobi_real(&tm);
        let estimates: Vec<f64> = (0..len).map(|i| (beta_last * y[len - 1][i]).abs()).collect();

        let budget_spent = steps >= opts.max_iter;
        let check = exhausted || budget_spent || filtered || estimates[..k].iter().all(|r| *r <= opts.tol);
        if check {
            let ritz: Vec<Vec<C64>> = (0..k.min(len)).map(|i| combine(&basis[..len], &y, i)).collect();
            let out = certify(h, ritz);
            let done = out.1.iter().all(|r| *r <= opts.tol);
            let better = best.as_ref().is_none_or(|b| max_of(&out.1) < max_of(&b.1));
            if done || exhausted || budget_spent {
                let chosen = if done || better { out } else { best.take().unwrap() };
                return Ok((chosen.0, chosen.1, chosen.2, steps, restarts));
            }
            if better {
                best = Some(out);
            }
        }

        // restart with the lowest Ritz vectors and the residual direction
        let keep = (k + (m - k) / 2).min(m - 1);
        let rotated: Vec<Vec<C64>> = (0..keep).map(|i| combine(&basis[..len], &y, i)).collect();
        basis = rotated;
        basis.push(residual_vec.expect("residual available when not exhausted"));
        for row in t.iter_mut() {
            row.iter_mut().for_each(|x| *x = 0.0);
        }
        for i in 0..keep {
            t[i][i] = theta[i];
            let s = beta_last * y[len - 1][i];
            t[i][keep] = s;
            t[keep][i] = s;
        }
        first = keep;
        restarts += 1;
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max)
}

fn combine(basis: &[Vec<C64>], y: &[Vec<f64>], col: usize) -> Vec<C64> {
    let n = basis[0].len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (l, v) in basis.iter().enumerate() {
        let c = y[l][col];
        if c != 0.0 {
            for (o, x) in out.iter_mut().zip(v) {
                *o += x * c;
            }
        }
    }
    out
}

/// Rayleigh-Ritz of `h` on the span of `vecs`, then explicit residuals.
fn certify<H: HermitianOperator + ?Sized>(h: &Counted<'_, H>, vecs: Vec<Vec<C64>>) -> Certified {
    let p = vecs.len();
    let n = vecs[0].len();
    // re-orthonormalize (the filtered basis can lose a little orthogonality)
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(p);
    for v in vecs {
        let mut v = v;
        orthogonalize(&mut v, &q);
        orthogonalize(&mut v, &q);
        let nv = norm(&v);
        q.push(scaled(&v, 1.0 / nv));
    }
    let mut hq: Vec<Vec<C64>> = Vec::with_capacity(p);
    for v in &q {
        let mut w = vec![C64::new(0.0, 0.0); n];
        h.apply(v, &mut w);
        hq.push(w);
    }
    let mut a = vec![vec![C64::new(0.0, 0.0); p]; p];
    for i in 0..p {
        for j in 0..p {
            a[i][j] = dot(&q[i], &hq[j]);
        }
    }
    for i in 0..p {
        for j in 0..i {
            let avg = 0.5 * (a[i][j] + a[j][i].conj());
            a[i][j] = avg;
            a[j][i] = avg.conj();
        }
        a[i][i] = C64::new(a[i][i].re, 0.0);
    }
    let (vals, z) = jacobi_hermitian(&a);
    let mut vectors = Vec::with_capacity(p);
    let mut residuals = Vec::with_capacity(p);
    for (col, &e) in vals.iter().enumerate() {
        let mut x = vec![C64::new(0.0, 0.0); n];
        let mut hx = vec![C64::new(0.0, 0.0); n];
        for l in 0..p {
            axpy(z[l][col], &q[l], &mut x);
            axpy(z[l][col], &hq[l], &mut hx);
        }
        let nx = norm(&x);
        x.iter_mut().for_each(|v| *v /= nx);
        hx.iter_mut().for_each(|v| *v /= nx);
        axpy(C64::new(-e, 0.0), &x, &mut hx);
        residuals.push(norm(&hx));
        vectors.push(x);
    }
    (vals, residuals, vectors)
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi; eigenvalues
/// ascending, eigenvectors as columns `y[row][col]`.
pub fn jacobi_real(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; m]; m];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let total: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if off <= 1e-16 * total || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
                for j in 0..m {
                    let (x, y) = (a[p][j], a[q][j]);
                    a[p][j] = c * x - s * y;
                    a[q][j] = s * x + c * y;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let vals = order.iter().map(|&i| a[i][i]).collect();
    let vecs = (0..m).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    (vals, vecs)
}

/// Cyclic Jacobi for a complex Hermitian matrix; eigenvectors as columns.
pub fn jacobi_hermitian(a: &[Vec<C64>]) -> (Vec<f64>, Vec<Vec<C64>>) {
    let m = a.len();
    let zero = C64::new(0.0, 0.0);
    let mut a: Vec<Vec<C64>> = a.to_vec();
    let mut v = vec![vec![zero; m]; m];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    let total: f64 = a.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    off += x.norm_sqr();
                }
            }
        }
        let off = off.sqrt();
        if off <= 1e-16 * total || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p][q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                // diag(1, e^{-iφ}) makes the pair real, then a real rotation
                let ph = apq / r;
                let phc = ph.conj();
                let theta = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // columns: U_pp = c, U_pq = s, U_qp = -s e^{-iφ}, U_qq = c e^{-iφ}
                let upq = C64::new(s, 0.0);
                let uqp = -phc * s;
                let uqq = phc * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * c + y * uqp;
                    row[q] = x * upq + y * uqq;
                }
                for j in 0..m {
                    let (x, y) = (a[p][j], a[q][j]);
                    a[p][j] = x * c + y * uqp.conj();
                    a[q][j] = x * upq + y * uqq.conj();
                }
                a[p][q] = zero;
                a[q][p] = zero;
                a[p][p] = C64::new(a[p][p].re, 0.0);
                a[q][q] = C64::new(a[q][q].re, 0.0);
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * c + y * uqp;
                    row[q] = x * upq + y * uqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let vals = order.iter().map(|&i| a[i][i].re).collect();
    let vecs = (0..m).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_two_by_two() {
        let (vals, vecs) = jacobi_real(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((vals[0] - 1.0).abs() < 1e-15 && (vals[1] - 3.0).abs() < 1e-15);
        assert!((vecs[0][0].abs() - 0.5f64.sqrt()).abs() < 1e-15);
        let i = C64::new(0.0, 1.0);
        let a = vec![vec![C64::new(1.0, 0.0), i], vec![-i, C64::new(1.0, 0.0)]];
        let (vals, _) = jacobi_hermitian(&a);
        assert!(vals[0].abs() < 1e-15 && (vals[1] - 2.0).abs() < 1e-15);
    }
}
