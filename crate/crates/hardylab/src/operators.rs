//! Matrices of Toeplitz, composition, and weighted composition operators in
//! the monomial basis of truncated H², plus reproducing kernels and
//! Wold-shift data.
//!
//! The `valid_block` of an [`OperatorMatrix`] counts the leading columns
//! that the truncation captures completely: column k of the infinite
//! operator is supported in rows < N, so no information leaked past the
//! window. Matrix identities are asserted exactly on such blocks and with
//! computed tail bounds elsewhere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{dot, vec_norm, CMatrix, CVec, NormEstimate};
use crate::series::{ExactDegree, PowerSeries};
use crate::symbol::SymbolSpec;
use crate::{Error, Result};

/// Default tolerance knobs for operator-norm power iteration.
pub const NORM_TOL: f64 = 1e-8;
pub const NORM_CAP: usize = 10_000;

/// N×N complex matrix of an operator on truncated H² (column k is the image
/// of zᵏ), with exactness bookkeeping.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub entries: CMatrix,
    pub truncation: usize,
    /// Columns 0..valid_block−1 are complete: the infinite operator's column
    /// fits inside the window, so no truncation leakage occurred.
    pub valid_block: usize,
    pub label: String,
}

impl OperatorMatrix {
    pub fn from_matrix(entries: CMatrix, valid_block: usize, label: impl Into<String>) -> Self {
        let truncation = entries.rows();
        assert_eq!(entries.rows(), entries.cols(), "operator matrices are square");
        assert!(valid_block <= truncation);
        OperatorMatrix { entries, truncation, valid_block, label: label.into() }
    }

    pub fn identity(n: usize) -> Self {
        OperatorMatrix::from_matrix(CMatrix::identity(n), n, "I")
    }

    /// Largest singular value by power iteration (tolerance 10⁻⁸, capped,
    /// with a convergence flag; the estimate is always a lower bound).
    pub fn operator_norm(&self) -> NormEstimate {
        self.entries.operator_norm(NORM_TOL, NORM_CAP)
    }

    pub fn apply(&self, x: &[Complex64]) -> CVec {
        self.entries.matvec(x)
    }

    pub fn apply_adjoint(&self, x: &[Complex64]) -> CVec {
        self.entries.adjoint_matvec(x)
    }

    /// Pointwise sum; linear combinations of intertwiners intertwine too.
    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch {
                left: self.truncation,
                right: other.truncation,
            });
        }
        Ok(OperatorMatrix::from_matrix(
            self.entries.add(&other.entries),
            self.valid_block.min(other.valid_block),
            format!("{}+{}", self.label, other.label),
        ))
    }

    /// CSV dump: `# label N valid_block` header, then rows of re/im
    /// interleaved, row-major.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# {} {} {}\n", self.label, self.truncation, self.valid_block);
        for i in 0..self.truncation {
            let row = self.entries.row(i);
            let mut fields = Vec::with_capacity(2 * row.len());
            for c in row {
                fields.push(format!("{:?}", c.re));
                fields.push(format!("{:?}", c.im));
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Lower-triangular Toeplitz matrix of T_φ: entry (j, k) = φ̂(j−k) for
/// j ≥ k. `valid_block = N − deg φ` for polynomial symbols (those columns
/// hold the complete image of zᵏ), 0 otherwise.
pub fn toeplitz_matrix(phi: &PowerSeries, n: usize) -> Result<OperatorMatrix> {
    if phi.truncation() < n {
        return Err(Error::Invalid(format!(
            "symbol series holds {} coefficients, need at least {}",
            phi.truncation(),
            n
        )));
    }
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        for j in k..n {
            m[(j, k)] = phi.coeff(j - k);
        }
    }
    let valid_block = toeplitz_valid_block(phi, n);
    Ok(OperatorMatrix::from_matrix(m, valid_block, "toeplitz"))
}

pub fn toeplitz_valid_block(phi: &PowerSeries, n: usize) -> usize {
    match phi.exact_degree() {
        ExactDegree::Poly(d) if d < n => n - d,
        _ => 0,
    }
}

/// T_φ x without materializing the matrix: (T_φ x)_j = Σ_{i ≤ j} φ̂(j−i)x_i.
pub fn toeplitz_apply(phi: &PowerSeries, x: &[Complex64]) -> CVec {
    let n = x.len();
    let top = match phi.exact_degree() {
        ExactDegree::Poly(d) => d.min(n.saturating_sub(1)),
        ExactDegree::Infinite => n - 1,
    };
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for d in 0..=top {
        let c = phi.coeff(d);
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        for i in 0..n - d {
            out[i + d] += c * x[i];
        }
    }
    out
}

/// T_φ* x: (T_φ* x)_j = Σ_{i ≥ j} conj(φ̂(i−j)) x_i.
pub fn toeplitz_apply_adjoint(phi: &PowerSeries, x: &[Complex64]) -> CVec {
    let n = x.len();
    let top = match phi.exact_degree() {
        ExactDegree::Poly(d) => d.min(n.saturating_sub(1)),
        ExactDegree::Infinite => n - 1,
    };
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for d in 0..=top {
        let c = phi.coeff(d).conj();
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        for j in 0..n - d {
            out[j] += c * x[j + d];
        }
    }
    out
}

/// A·T_φ restricted to the first `window` columns:
/// (A·T_φ) col k = Σ_d φ̂(d)·(A col k+d).
pub fn right_mul_toeplitz(a: &CMatrix, phi: &PowerSeries, window: usize) -> CMatrix {
    let n = a.rows();
    assert!(window <= n);
    let top = match phi.exact_degree() {
        ExactDegree::Poly(d) => d.min(n.saturating_sub(1)),
        ExactDegree::Infinite => n - 1,
    };
    let mut out = CMatrix::zeros(n, window);
    for d in 0..=top {
        let c = phi.coeff(d);
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        for k in 0..window {
            if k + d >= n {
                continue;
            }
            for i in 0..n {
                let v = a[(i, k + d)];
                out[(i, k)] += c * v;
            }
        }
    }
    out
}

/// T_ψ·A restricted to the first `window` columns (lower-triangular action
/// needs nothing beyond the stored rows).
pub fn left_mul_toeplitz(psi: &PowerSeries, a: &CMatrix, window: usize) -> CMatrix {
    let n = a.rows();
    assert!(window <= n);
    let top = match psi.exact_degree() {
        ExactDegree::Poly(d) => d.min(n.saturating_sub(1)),
        ExactDegree::Infinite => n - 1,
    };
    let mut out = CMatrix::zeros(n, window);
    for d in 0..=top {
        let c = psi.coeff(d);
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        for k in 0..window {
            for i in 0..n - d {
                let v = a[(i, k)];
                out[(i + d, k)] += c * v;
            }
        }
    }
    out
}

/// C_{ω,h}: column k holds the coefficients of h·ωᵏ, built by iterated
/// (prefix-exact) multiplication.
///
/// Preconditions: ω is a certified self-map (sup-norm estimate < 1) or
/// ω(0) = 0 for the formal case; h must not vanish identically (the
/// operator would be 0).
pub fn weighted_composition_matrix(
    omega: &PowerSeries,
    weight: &PowerSeries,
    n: usize,
) -> Result<OperatorMatrix> {
    if weight.is_zero() {
        return Err(Error::ZeroWeight);
    }
    if omega.coeff(0).norm() != 0.0 {
        let est = omega.sup_norm_estimate(2048, crate::symbol::BOUNDARY_EPS);
        if !est.certifies_self_map(0.0) {
            return Err(Error::NotSelfMap { estimate: est.value });
        }
    }
    let omega = omega.retruncate_checked(n)?;
    let weight = weight.retruncate_checked(n)?;

    let mut m = CMatrix::zeros(n, n);
    let mut col = weight.clone();
    m.set_column(0, col.coeffs());
    for k in 1..n {
        col = col.multiply(&omega)?;
        m.set_column(k, col.coeffs());
    }
    let valid_block = weighted_comp_valid_block(&omega, &weight, n);
    Ok(OperatorMatrix::from_matrix(m, valid_block, "weighted-composition"))
}

pub fn weighted_comp_valid_block(omega: &PowerSeries, weight: &PowerSeries, n: usize) -> usize {
    match (omega.exact_degree(), weight.exact_degree()) {
        (ExactDegree::Poly(dw), ExactDegree::Poly(dh)) => {
            if dw == 0 {
                // Constant ω: every column is h·ω(0)ᵏ, degree deg h.
                if dh < n {
                    n
                } else {
                    0
                }
            } else if dh >= n {
                0
            } else {
                (((n - 1 - dh) / dw) + 1).min(n)
            }
        }
        _ => 0,
    }
}

/// Reproducing-kernel coefficient vector K_a = (1, ā, ā², …, ā^{N−1}).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelVector {
    #[serde(with = "crate::report::cjson::complex")]
    pub a: Complex64,
    #[serde(with = "crate::report::cjson::complex_vec")]
    pub coords: Vec<Complex64>,
    pub truncation: usize,
}

impl KernelVector {
    pub fn norm_sqr(&self) -> f64 {
        let r2 = self.a.norm_sqr();
        if r2 == 0.0 {
            1.0
        } else {
            (1.0 - r2.powi(self.truncation as i32)) / (1.0 - r2)
        }
    }
}

/// K_a for |a| < 1.
pub fn kernel_vector(a: Complex64, n: usize) -> Result<KernelVector> {
    if a.norm() >= 1.0 {
        return Err(Error::OutsideDisc { modulus: a.norm() });
    }
    let ab = a.conj();
    let mut coords = Vec::with_capacity(n);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        coords.push(p);
        p *= ab;
    }
    Ok(KernelVector { a, coords, truncation: n })
}

/// Exact truncation defect of the kernel eigen-relation
/// T_φ*K_a = conj(φ(a))·K_a at window N:
/// the j-th entry of the difference is conj(a^j·(φ(a) − P_{N−j}(a))) with
/// P_k the k-term partial sum, so the defect norm is computable from the
/// closed form. The matrix-route residual must match this to rounding.
pub fn kernel_eigen_defect(phi: &SymbolSpec, series: &PowerSeries, a: Complex64, n: usize) -> f64 {
    let phi_a = phi.eval_unchecked(a);
    // partial[k] = Σ_{m<k} φ̂_m a^m
    let mut partial = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut ap = Complex64::new(1.0, 0.0);
    for m in 0..n {
        partial[m + 1] = partial[m] + series.coeff(m) * ap;
        ap *= a;
    }
    let mut sum = 0.0f64;
    let mut a2j = 1.0f64;
    let r2 = a.norm_sqr();
    for j in 0..n {
        let miss = phi_a - partial[n - j];
        sum += a2j * miss.norm_sqr();
        a2j *= r2;
    }
    sum.sqrt()
}

/// Desk-scale inner certificate: sup-norm estimate ≤ 1 and column-isometry
/// defect of T_ψ below tolerance on a leading block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InnerCertificate {
    pub sup_estimate: f64,
    /// 1 − min column norm over the checked block.
    pub isometry_defect: f64,
    pub checked_columns: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Certify ψ inner at truncation N: true a.e.-boundary-modulus-1 is not
/// decidable from finitely many coefficients, so this is an operational
/// stand-in with an explicit tolerance.
pub fn inner_certificate(psi: &SymbolSpec, series: &PowerSeries, n: usize) -> InnerCertificate {
    let est = psi.self_map_certificate();
    let checked = 8usize.min(n);
    let mut min_col: f64 = f64::INFINITY;
    for k in 0..checked {
        let col_norm_sqr: f64 = (0..n - k).map(|j| series.coeff(j).norm_sqr()).sum();
        min_col = min_col.min(col_norm_sqr.sqrt());
    }
    let defect = (1.0 - min_col).max(0.0);
    let tolerance = (4.0 / (n as f64).sqrt()).max(1e-9);
    let pass = est.value <= 1.0 + 1e-9 && defect <= tolerance;
    InnerCertificate {
        sup_estimate: est.value,
        isometry_defect: defect,
        checked_columns: checked,
        tolerance,
        pass,
    }
}

/// Factorial-shift coefficients c_{N,n} = (n+1)(n+2)…(n+N), exact.
pub fn wold_coefficient(order: usize, n: usize) -> u128 {
    let mut c: u128 = 1;
    for j in 1..=order {
        c = c.checked_mul((n + j) as u128).expect("wold coefficient overflow");
    }
    c
}

/// Shift data for S = T_ψ with ψ inner: an orthonormal slice of
/// W = ker S* and the kernel families K(λ,w), K_N(λ,w) truncated at a
/// power cutoff.
pub struct WoldData {
    pub symbol: SymbolSpec,
    pub series: PowerSeries,
    pub s: OperatorMatrix,
    /// Orthonormal columns spanning ker S* within the truncation.
    pub wbasis: Vec<CVec>,
    pub cutoff: usize,
    pub max_order: usize,
    pub certificate: InnerCertificate,
    /// powers[w][m] = Sᵐ w (built by repeated application of T_ψ).
    powers: Vec<Vec<CVec>>,
    /// defect_norms[w][m] = ‖S*(Sᵐw) − S^{m−1}w‖ (m = 0 term is ‖S*w‖),
    /// the per-step isometry leakage used in the computed tail bounds.
    defect_norms: Vec<Vec<f64>>,
}

impl WoldData {
    /// K(λ, w) = Σ_{n ≤ cutoff} (Sⁿw)·λⁿ.
    pub fn kernel(&self, lambda: Complex64, w_index: usize) -> CVec {
        self.kernel_deriv(0, lambda, w_index)
    }

    /// K_N(λ, w) = Σ_{n ≤ cutoff} c_{N,n}·(S^{N+n}w)·λⁿ.
    pub fn kernel_deriv(&self, order: usize, lambda: Complex64, w_index: usize) -> CVec {
        assert!(order <= self.max_order);
        let n = self.series.truncation();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut lam_pow = Complex64::new(1.0, 0.0);
        for k in 0..=self.cutoff {
            let c = wold_coefficient(order, k) as f64;
            let v = &self.powers[w_index][order + k];
            for (o, &vi) in out.iter_mut().zip(v) {
                *o += c * lam_pow * vi;
            }
            lam_pow *= lambda;
        }
        out
    }

    /// Residual and computed tail bound for the recursion
    /// (S* − λI)·K_N(λ,w) = N·K_{N−1}(λ,w)  (N ≥ 1), or
    /// (S* − λI)·K(λ,w) = 0                  (N = 0).
    ///
    /// The bound collects the per-term isometry defects plus the series
    /// cutoff term c_{N,cutoff}·|λ|^{cutoff+1}·‖S^{N+cutoff}w‖; the residual
    /// must sit below it whenever the coefficient identities hold.
    pub fn recursion_residual(
        &self,
        order: usize,
        lambda: Complex64,
        w_index: usize,
    ) -> WoldResidual {
        let kn = self.kernel_deriv(order, lambda, w_index);
        let mut lhs = toeplitz_apply_adjoint(&self.series, &kn);
        for (l, &k) in lhs.iter_mut().zip(&kn) {
            *l -= lambda * k;
        }
        if order >= 1 {
            let prev = self.kernel_deriv(order - 1, lambda, w_index);
            for (l, &p) in lhs.iter_mut().zip(&prev) {
                *l -= order as f64 * p;
            }
        }
        let residual = vec_norm(&lhs);

        let mut bound = 0.0f64;
        let mut lam_pow = 1.0f64;
        let lam_abs = lambda.norm();
        for k in 0..=self.cutoff {
            let c = wold_coefficient(order, k) as f64;
            bound += c * lam_pow * self.defect_norms[w_index][order + k];
            lam_pow *= lam_abs;
        }
        let tail_vec_norm = vec_norm(&self.powers[w_index][order + self.cutoff]);
        let cutoff_term =
            wold_coefficient(order, self.cutoff) as f64 * lam_pow * tail_vec_norm;
        bound += cutoff_term;

        WoldResidual { order, residual, bound, cutoff_term }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WoldResidual {
    pub order: usize,
    pub residual: f64,
    pub bound: f64,
    pub cutoff_term: f64,
}

/// Build Wold-shift data for ψ inner at truncation N.
///
/// `ker S*` is computed through I − SS* (valid because S is an isometry),
/// orthonormalized over the leading columns; `w_count` caps how many basis
/// vectors are kept.
pub fn wold_data(
    psi: &SymbolSpec,
    n: usize,
    cutoff: usize,
    max_order: usize,
    w_count: usize,
) -> Result<WoldData> {
    let series = psi.to_series(n)?;
    let certificate = inner_certificate(psi, &series, n);
    if !certificate.pass {
        return Err(Error::NotInner {
            defect: certificate.isometry_defect.max(certificate.sup_estimate - 1.0),
            tolerance: certificate.tolerance,
        });
    }
    // Polynomial symbols grow degree d per power: the chain S^m·w must fit
    // the window or the kernels silently truncate.
    if let ExactDegree::Poly(d) = series.exact_degree() {
        if (cutoff + max_order) * d.max(1) >= n {
            return Err(Error::Invalid(format!(
                "cutoff {cutoff} (+{max_order} orders) × degree {d} exceeds the window N = {n}"
            )));
        }
    }
    let s = toeplitz_matrix(&series, n)?;

    // Candidate kernel vectors: columns of P = I − SS* over a leading block,
    // orthonormalized with drop tolerance (modified Gram–Schmidt, two
    // passes).
    let scan = (4 * w_count).min(n / 2).max(1);
    let mut wbasis: Vec<CVec> = Vec::new();
    for k in 0..scan {
        if wbasis.len() >= w_count {
            break;
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        col[k] = Complex64::new(1.0, 0.0);
        let st = toeplitz_apply_adjoint(&series, &col);
        let sst = toeplitz_apply(&series, &st);
        let mut v: CVec = col.iter().zip(&sst).map(|(a, b)| a - b).collect();
        for _ in 0..2 {
            for w in &wbasis {
                let proj = dot(&v, w);
                for (vi, wi) in v.iter_mut().zip(w) {
                    *vi -= proj * wi;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            wbasis.push(v);
        }
    }
    if wbasis.is_empty() {
        return Err(Error::Invalid(
            "I − SS* vanished on the scanned block; symbol behaves like a unimodular constant".into(),
        ));
    }

    // Power chains Sᵐw and per-step isometry defects.
    let max_power = cutoff + max_order;
    let mut powers = Vec::with_capacity(wbasis.len());
    let mut defect_norms = Vec::with_capacity(wbasis.len());
    for w in &wbasis {
        let mut chain: Vec<CVec> = Vec::with_capacity(max_power + 1);
        chain.push(w.clone());
        for m in 1..=max_power {
            let next = toeplitz_apply(&series, &chain[m - 1]);
            chain.push(next);
        }
        let mut defects = Vec::with_capacity(max_power + 1);
        for (m, vm) in chain.iter().enumerate() {
            let star = toeplitz_apply_adjoint(&series, vm);
            let diff: CVec = if m == 0 {
                star
            } else {
                star.iter().zip(&chain[m - 1]).map(|(a, b)| a - b).collect()
            };
            defects.push(vec_norm(&diff));
        }
        powers.push(chain);
        defect_norms.push(defects);
    }

    Ok(WoldData {
        symbol: psi.clone(),
        series,
        s,
        wbasis,
        cutoff,
        max_order,
        certificate,
        powers,
        defect_norms,
    })
}

impl PowerSeries {
    /// Internal helper: retruncate that reports instead of panicking when an
    /// unknown tail would have to be invented.
    fn retruncate_checked(&self, n: usize) -> Result<PowerSeries> {
        if n <= self.truncation() || matches!(self.exact_degree(), ExactDegree::Poly(_)) {
            Ok(self.retruncate(n))
        } else {
            Err(Error::Invalid(format!(
                "series with unknown tail holds {} coefficients, need {}",
                self.truncation(),
                n
            )))
        }
    }
}
