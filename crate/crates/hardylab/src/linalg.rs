//! Minimal dense complex linear algebra: matrices in row-major storage,
//! matrix/vector products, power iteration for the top singular value, and
//! an LU solver used by inverse iteration.
//!
//! Only the top singular value is ever needed for norms, so there is no
//! general eigensolver here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type CVec = Vec<Complex64>;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<CVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CVec {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> CVec {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            *o = acc;
        }
        out
    }

    /// Aᴴx without materializing the adjoint.
    pub fn adjoint_matvec(&self, x: &[Complex64]) -> CVec {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            let row = self.row(i);
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    /// Dense product, ikj loop order.
    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, factor: Complex64) -> CMatrix {
        let data = self.data.iter().map(|a| a * factor).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Keep only the first `cols` columns.
    pub fn restrict_columns(&self, cols: usize) -> CMatrix {
        assert!(cols <= self.cols);
        let mut out = CMatrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            out.data[i * cols..(i + 1) * cols]
                .copy_from_slice(&self.data[i * self.cols..i * self.cols + cols]);
        }
        out
    }

    /// Largest singular value by power iteration on AᴴA.
    pub fn operator_norm(&self, tol: f64, cap: usize) -> NormEstimate {
        power_iteration_norm(
            |x| self.matvec(x),
            |x| self.adjoint_matvec(x),
            self.cols,
            tol,
            cap,
        )
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a power-iteration norm computation. `value` is always a valid
/// lower bound for the true norm; `converged` reports whether the relative
/// change dropped below tolerance before the iteration cap.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// σ_max via power iteration on AᴴA given the two matvec closures.
/// Deterministic start vector; stops when the Rayleigh estimate stabilizes
/// to relative `tol` or at `cap` iterations (returning the best estimate
/// with `converged = false`).
pub fn power_iteration_norm(
    apply: impl Fn(&[Complex64]) -> CVec,
    apply_adjoint: impl Fn(&[Complex64]) -> CVec,
    dim: usize,
    tol: f64,
    cap: usize,
) -> NormEstimate {
    if dim == 0 {
        return NormEstimate { value: 0.0, converged: true, iterations: 0 };
    }
    // Deterministic start with slowly varying phase so it is not orthogonal
    // to the top singular vector in the structured cases we meet.
    let mut v: CVec = (0..dim)
        .map(|j| Complex64::from_polar(1.0 + j as f64 / (dim as f64 + 1.0), 0.1 * j as f64))
        .collect();
    normalize(&mut v);
    let mut sigma = 0.0f64;
    for it in 1..=cap {
        let av = apply(&v);
        let mut w = apply_adjoint(&av);
        let norm_av2 = av.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let new_sigma = norm_av2.sqrt(); // ‖Av‖ for unit v
        let wnorm = normalize(&mut w);
        if wnorm == 0.0 {
            return NormEstimate { value: 0.0, converged: true, iterations: it };
        }
        v = w;
        if (new_sigma - sigma).abs() <= tol * new_sigma.max(1e-300) {
            return NormEstimate { value: new_sigma, converged: true, iterations: it };
        }
        sigma = new_sigma;
    }
    NormEstimate { value: sigma, converged: false, iterations: cap }
}

/// SplitMix64: tiny deterministic PRNG for reproducible randomized trials
/// (seeded runs must produce byte-identical reports).
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn symmetric(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.symmetric(), self.symmetric())
    }
}

pub fn normalize(v: &mut [Complex64]) -> f64 {
    let n = vec_norm(v);
    if n > 0.0 {
        for c in v.iter_mut() {
            *c /= n;
        }
    }
    n
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨u, v⟩ = Σ u_i conj(v_i), the H²-style inner product.
pub fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn axpy(y: &mut [Complex64], alpha: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// LU decomposition with partial pivoting; solves Ax = b in place.
/// Returns None when a pivot collapses to (numerical) zero.
pub fn lu_solve(a: &CMatrix, b: &[Complex64]) -> Option<CVec> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    assert_eq!(n, b.len());
    let mut lu = a.clone();
    let mut x: CVec = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (pivot_row, pivot_mag) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if pivot_mag < 1e-300 {
            return None;
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = tmp;
            }
            perm.swap(k, pivot_row);
            x.swap(k, pivot_row);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= factor * v;
            }
            let xk = x[k];
            x[i] -= factor * xk;
        }
    }
    // Back substitution.
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= lu[(i, j)] * x[j];
        }
        x[i] = acc / lu[(i, i)];
    }
    Some(x)
}

/// Null-ish vector of (A − λI) by shifted inverse iteration. Returns the
/// normalized vector together with the residual ‖(A − λI)v‖, which doubles
/// as an upper bound for the smallest singular value of A − λI.
pub fn inverse_iteration(a: &CMatrix, lambda: Complex64, iters: usize) -> (CVec, f64) {
    let n = a.rows();
    let scale = a.max_abs().max(1.0);
    // Tiny shift keeps the LU factorization regular when λ is exactly an
    // eigenvalue; inverse iteration still converges to its eigenvector.
    let mut shifted = a.clone();
    let jitter = Complex64::new(1e-13 * scale, 1e-13 * scale);
    for i in 0..n {
        shifted[(i, i)] -= lambda + jitter;
    }
    let mut v: CVec = (0..n)
        .map(|j| Complex64::from_polar(1.0, 0.7 * j as f64 + 0.3))
        .collect();
    normalize(&mut v);
    for _ in 0..iters {
        match lu_solve(&shifted, &v) {
            Some(mut w) => {
                if normalize(&mut w) == 0.0 {
                    break;
                }
                v = w;
            }
            None => break,
        }
    }
    // Residual against the unshifted system.
    let mut av = a.matvec(&v);
    for (avi, vi) in av.iter_mut().zip(&v) {
        *avi -= lambda * vi;
    }
    (v, vec_norm(&av))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_norm_is_one() {
        let id = CMatrix::identity(8);
        let est = id.operator_norm(1e-10, 1000);
        assert!((est.value - 1.0).abs() < 1e-9);
        assert!(est.converged);
    }

    #[test]
    fn norm_of_diagonal_is_max_entry() {
        let mut m = CMatrix::zeros(4, 4);
        for (i, &d) in [0.5, 2.5, 1.0, 0.2].iter().enumerate() {
            m[(i, i)] = c(d, 0.0);
        }
        let est = m.operator_norm(1e-10, 5000);
        assert!((est.value - 2.5).abs() < 1e-7, "got {}", est.value);
    }

    #[test]
    fn matmul_against_hand_product() {
        let a = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0)],
        ]);
        let b = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, -1.0)],
        ]);
        let p = a.matmul(&b);
        assert_eq!(p[(0, 0)], c(0.0, 1.0));
        assert_eq!(p[(0, 1)], c(2.0, 0.0)); // 1·1 + i·(−i) = 1 + 1
        assert_eq!(p[(1, 0)], c(0.0, 0.0));
        assert_eq!(p[(1, 1)], c(2.0, 0.0));
    }

    #[test]
    fn lu_solves_small_system() {
        let a = CMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(3.0, 1.0)],
        ]);
        let b = vec![c(5.0, 0.0), c(10.0, 2.0)];
        let x = lu_solve(&a, &b).unwrap();
        let back = a.matvec(&x);
        for (got, want) in back.iter().zip(&b) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_iteration_finds_planted_eigenvector() {
        // A = diag(1, 2, 5): eigenvector for 2 is e₁.
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = c(1.0, 0.0);
        a[(1, 1)] = c(2.0, 0.0);
        a[(2, 2)] = c(5.0, 0.0);
        let (v, resid) = inverse_iteration(&a, c(2.0, 0.0), 8);
        assert!(resid < 1e-10, "residual {resid}");
        assert!(v[1].norm() > 0.999);
    }

    #[test]
    fn adjoint_matvec_consistency() {
        let a = CMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(0.5, -1.0)],
            vec![c(0.0, 1.0), c(2.0, 0.0)],
        ]);
        let x = vec![c(0.3, 0.7), c(-1.0, 0.2)];
        let y = vec![c(1.0, -0.5), c(0.4, 0.9)];
        // ⟨Ax, y⟩ = ⟨x, Aᴴy⟩
        let lhs = dot(&a.matvec(&x), &y);
        let rhs = dot(&x, &a.adjoint_matvec(&y));
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
