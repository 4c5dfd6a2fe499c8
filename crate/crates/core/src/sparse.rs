//! Compressed-row matrices and the operator trait used by the eigensolver.

use std::fmt::Write as _;

use num_complex::Complex64;

pub type C64 = Complex64;

/// Scalar types a [`CsrMatrix`] can hold.
pub trait Scalar: Copy + Default + PartialEq + std::fmt::Debug + std::ops::Add<Output = Self> + 'static {
    fn conj(self) -> Self;
    fn to_c64(self) -> C64;
    fn abs(self) -> f64;
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
}

impl Scalar for C64 {
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn to_c64(self) -> C64 {
        self
    }
    fn abs(self) -> f64 {
        self.norm()
    }
}

/// Square compressed-row matrix with sorted, duplicate-free column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

/// Complex Hermitian matrix; the Hermitian structure is guaranteed by the
/// assemblers, not by this type.
pub type SparseHermitian = CsrMatrix<C64>;
/// Real symmetric matrix.
pub type SparseSymmetric = CsrMatrix<f64>;

impl<T: Scalar> CsrMatrix<T> {
    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) out of range for dimension {n}");
            if last == Some((r, c)) {
                let x = values.last_mut().unwrap();
                *x = *x + v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { n, row_ptr, col_idx, values }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let mut t = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v != T::default() {
                    t.push((i, j, *v));
                }
            }
        }
        Self::from_triplets(n, t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => T::default(),
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `max |a_ij - conj(a_ji)|` over the stored pattern.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                let w = self.get(j, i).conj();
                worst = worst.max((v.to_c64() - w.to_c64()).norm());
            }
        }
        worst
    }

    /// Matrix of `P A Pᵀ` where `perm[i]` is the image of index `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                t.push((perm[i], perm[j], v));
            }
        }
        Self::from_triplets(self.n, t)
    }

    /// Gershgorin interval enclosing the spectrum of a Hermitian matrix.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut d = 0.0;
            let mut r = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    d = v.to_c64().re;
                } else {
                    r += v.abs();
                }
            }
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    pub fn to_dense_c64(&self) -> Vec<Vec<C64>> {
        let mut m = vec![vec![C64::new(0.0, 0.0); self.n]; self.n];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v.to_c64();
            }
        }
        m
    }

    /// MatrixMarket coordinate dump of the lower triangle.
    pub fn to_matrix_market(&self) -> String {
        let complex = std::any::TypeId::of::<T>() == std::any::TypeId::of::<C64>();
        let (field, sym) = if complex { ("complex", "hermitian") } else { ("real", "symmetric") };
        let mut entries = Vec::new();
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                if j <= i {
                    entries.push((i, j, v.to_c64()));
                }
            }
        }
        let mut out = format!("%%MatrixMarket matrix coordinate {field} {sym}\n{} {} {}\n", self.n, self.n, entries.len());
        for (i, j, v) in entries {
            if complex {
                let _ = writeln!(out, "{} {} {:.17e} {:.17e}", i + 1, j + 1, v.re, v.im);
            } else {
                let _ = writeln!(out, "{} {} {:.17e}", i + 1, j + 1, v.re);
            }
        }
        out
    }
}

impl CsrMatrix<f64> {
    pub fn to_complex(&self) -> SparseHermitian {
        CsrMatrix {
            n: self.n,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|v| C64::new(*v, 0.0)).collect(),
        }
    }

    pub fn matvec_real(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            y[i] = acc;
        }
    }
}

/// A Hermitian linear operator on `ℂⁿ`.
pub trait HermitianOperator {
    fn dim(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[C64], y: &mut [C64]);
    /// Interval containing the spectrum.
    fn spectral_bounds(&self) -> (f64, f64);
}

impl HermitianOperator for SparseHermitian {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        for i in 0..self.n {
            let mut acc = C64::new(0.0, 0.0);
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            y[i] = acc;
        }
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        self.gershgorin()
    }
}

impl HermitianOperator for SparseSymmetric {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        for i in 0..self.n {
            let mut acc = C64::new(0.0, 0.0);
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += x[self.col_idx[p]] * self.values[p];
            }
            y[i] = acc;
        }
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        self.gershgorin()
    }
}

pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (a, b) in x.iter().zip(y) {
        re += a.re * b.re + a.im * b.im;
        im += a.re * b.im - a.im * b.re;
    }
    C64::new(re, im)
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `y += a x`
pub fn axpy(a: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scale(a: f64, x: &mut [C64]) {
    for v in x {
        *v *= a;
    }
}
