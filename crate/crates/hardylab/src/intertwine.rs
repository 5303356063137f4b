//! Verification and construction of intertwining relations XT_φ = T_ψX.
//!
//! Residuals are measured as operator norms restricted to the leading
//! columns where truncation provably does not leak; for non-polynomial
//! symbols a soft window with a computed tail estimate is used instead.
//! Constructions implemented here: the rank-(cutoff+1) intertwiner between
//! T_φ (φ inner) and the shift T_z, pointwise recovery of (ω, h) from a
//! weighted composition intertwiner, finite-dimensional partners via a
//! planted common eigenvalue, and the Vandermonde consistency system for
//! sums of weighted composition operators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{dot, inverse_iteration, vec_norm, CMatrix, CVec, NormEstimate};
use crate::operators::{
    inner_certificate, kernel_vector, left_mul_toeplitz, right_mul_toeplitz, toeplitz_apply,
    toeplitz_apply_adjoint, toeplitz_valid_block, OperatorMatrix, NORM_CAP, NORM_TOL,
};
use crate::series::{ExactDegree, PowerSeries};
use crate::symbol::SymbolSpec;
use crate::{Error, Result};

/// Residual of XT_φ − T_ψX on the common valid block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntertwineReport {
    /// Operator norm of the difference restricted to the first
    /// `window` columns.
    pub residual: f64,
    /// residual / (‖X‖ · max(‖T_φ‖, ‖T_ψ‖)).
    pub relative_residual: f64,
    /// Columns on which the identity is asserted exactly; 0 when the
    /// symbols are not polynomial.
    pub valid_block: usize,
    /// Columns actually compared (= valid_block, or the soft window).
    pub window: usize,
    /// Truncation-leak estimate for the compared columns when the exact
    /// block is empty (requires a sup-norm bound for φ).
    pub tail_estimate: Option<f64>,
    pub norm_x: NormEstimate,
    pub norm_t_phi: NormEstimate,
    pub norm_t_psi: NormEstimate,
}

/// Extra inputs for the soft-window path of [`intertwine_residual_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ResidualOptions {
    /// Column window to compare when the exact block is empty.
    pub soft_window: Option<usize>,
    /// Upper bound for ‖φ‖_∞, needed to bound the truncation leak
    /// (1 for certified inner symbols, the coefficient ℓ¹ norm works too).
    pub phi_sup_bound: Option<f64>,
}

pub fn intertwine_residual(
    x: &OperatorMatrix,
    phi: &PowerSeries,
    psi: &PowerSeries,
) -> Result<IntertwineReport> {
    intertwine_residual_with(x, phi, psi, ResidualOptions::default())
}

pub fn intertwine_residual_with(
    x: &OperatorMatrix,
    phi: &PowerSeries,
    psi: &PowerSeries,
    opts: ResidualOptions,
) -> Result<IntertwineReport> {
    let n = x.truncation;
    if phi.truncation() < n || psi.truncation() < n {
        return Err(Error::TruncationMismatch {
            left: phi.truncation().min(psi.truncation()),
            right: n,
        });
    }
    // Columns where X·T_φ is the true product window: column k of T_φ must
    // be captured (k + deg φ < N). T_ψ·X is lower-triangular action and
    // never needs rows beyond the window.
    let valid_block = toeplitz_valid_block(&phi.retruncate(n), n);
    let (window, tail_estimate) = if valid_block > 0 {
        (valid_block, None)
    } else {
        let window = opts.soft_window.unwrap_or(0).min(n);
        if window == 0 {
            return Err(Error::EmptyValidBlock {
                hint: "symbol is not polynomial at this truncation; raise N or request a soft window with a sup-norm bound".into(),
            });
        }
        let bound = opts.phi_sup_bound.ok_or_else(|| Error::EmptyValidBlock {
            hint: "soft window needs a sup-norm bound for φ to compute the truncation-leak estimate".into(),
        })?;
        let norm_x_fro = x.entries.frobenius_norm();
        // Missing mass of column k of T_φ: ‖φzᵏ‖² beyond the window is at
        // most B² − Σ_{j ≤ N−1−k} |φ̂_j|² (‖φ‖₂ ≤ ‖φ‖_∞ ≤ B).
        let mut captured: Vec<f64> = Vec::with_capacity(n);
        let mut acc = 0.0;
        for j in 0..n {
            acc += phi.coeff(j).norm_sqr();
            captured.push(acc);
        }
        let mut leak2 = 0.0f64;
        for k in 0..window {
            let cap = captured[n - 1 - k];
            leak2 += (bound * bound - cap).max(0.0);
        }
        (window, Some(norm_x_fro * leak2.sqrt()))
    };

    let phi_n = phi.retruncate(n);
    let psi_n = psi.retruncate(n);
    let xt = right_mul_toeplitz(&x.entries, &phi_n, window);
    let tx = left_mul_toeplitz(&psi_n, &x.entries, window);
    let diff = xt.sub(&tx);
    let residual = diff.operator_norm(NORM_TOL, NORM_CAP);

    let norm_x = x.operator_norm();
    let norm_t_phi = toeplitz_norm(&phi_n, n);
    let norm_t_psi = toeplitz_norm(&psi_n, n);
    let scale = norm_x.value * norm_t_phi.value.max(norm_t_psi.value);
    let relative_residual = if scale > 0.0 { residual.value / scale } else { residual.value };

    Ok(IntertwineReport {
        residual: residual.value,
        relative_residual,
        valid_block,
        window,
        tail_estimate,
        norm_x,
        norm_t_phi,
        norm_t_psi,
    })
}

/// ‖T_φ‖ at truncation n by power iteration on the convolution action.
pub fn toeplitz_norm(phi: &PowerSeries, n: usize) -> NormEstimate {
    let phi = phi.retruncate(n);
    crate::linalg::power_iteration_norm(
        |x| toeplitz_apply(&phi, x),
        |x| toeplitz_apply_adjoint(&phi, x),
        n,
        NORM_TOL,
        NORM_CAP,
    )
}

/// One sample of the eigenvector field F(z) = X*K_z.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EigenFieldSample {
    #[serde(with = "crate::report::cjson::complex")]
    pub z: Complex64,
    pub f_norm: f64,
    /// ‖T_φ*F(z) − conj(ψ(z))·F(z)‖ / ‖F(z)‖, absent inside the zero set.
    pub relative_residual: Option<f64>,
    pub in_zero_set: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenFieldReport {
    pub samples: Vec<EigenFieldSample>,
    pub zero_threshold: f64,
    /// Every sample landed in Z(F): X is numerically zero on the kernel span.
    pub degenerate: bool,
}

/// Check that F(z) = X*K_z is a T_φ*-eigenvector field with eigenvalue
/// conj(ψ(z)), flagging the zero set Z(F).
pub fn eigen_field(
    x: &OperatorMatrix,
    phi: &SymbolSpec,
    psi: &SymbolSpec,
    samples: &[Complex64],
) -> Result<EigenFieldReport> {
    let n = x.truncation;
    let phi_series = phi.to_series(n)?;
    let zero_threshold = 1e-8 * x.entries.frobenius_norm().max(1e-300);
    let mut out = Vec::with_capacity(samples.len());
    let mut degenerate = true;
    for &z in samples {
        let k = kernel_vector(z, n)?;
        let f = x.apply_adjoint(&k.coords);
        let f_norm = vec_norm(&f);
        if f_norm <= zero_threshold {
            out.push(EigenFieldSample { z, f_norm, relative_residual: None, in_zero_set: true });
            continue;
        }
        degenerate = false;
        let lhs = toeplitz_apply_adjoint(&phi_series, &f);
        let lam = psi.eval_unchecked(z).conj();
        let resid: f64 = lhs
            .iter()
            .zip(&f)
            .map(|(a, b)| (a - lam * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        out.push(EigenFieldSample {
            z,
            f_norm,
            relative_residual: Some(resid / f_norm),
            in_zero_set: false,
        });
    }
    Ok(EigenFieldReport { samples: out, zero_threshold, degenerate })
}

/// Pointwise recovery of the weighted-composition data behind X:
/// h = X1 and ω = (Xz)/(X1), with the two consistency checks that expose
/// operators that are *not* weighted compositions: |ω(z)| ≤ 1 and the
/// higher-power test (Xz²)/h = ω².
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoverReport {
    pub samples: Vec<RecoverSample>,
    /// All non-degenerate samples satisfied both consistency checks.
    pub consistent: bool,
    pub h_zero_count: usize,
    pub self_map_violations: usize,
    pub power_violations: usize,
    pub tolerance: f64,
    /// n-th-root bound check: max over samples and n of
    /// |(Xzⁿ)(z)|·√(1−|z|²)/‖X‖_F, which stays ≤ 1 because zⁿ has unit
    /// norm — the mechanism that forces |ω| ≤ 1 in the n → ∞ limit.
    pub nth_root_bound_max: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RecoverSample {
    #[serde(with = "crate::report::cjson::complex")]
    pub z: Complex64,
    #[serde(with = "crate::report::cjson::complex_opt")]
    pub h: Option<Complex64>,
    #[serde(with = "crate::report::cjson::complex_opt")]
    pub omega: Option<Complex64>,
    /// |(Xz²)(z)/h − ω²|.
    pub power_defect: Option<f64>,
}

pub fn recover_weighted_comp(
    x: &OperatorMatrix,
    samples: &[Complex64],
) -> Result<RecoverReport> {
    let n = x.truncation;
    if n < 3 {
        return Err(Error::Invalid("recovery needs truncation ≥ 3".into()));
    }
    let col0 = PowerSeries::new(x.entries.column(0), ExactDegree::Infinite);
    let col1 = PowerSeries::new(x.entries.column(1), ExactDegree::Infinite);
    let col2 = PowerSeries::new(x.entries.column(2), ExactDegree::Infinite);
    let h_scale = vec_norm(x.entries.column(0).as_slice()).max(1e-300);
    let zero_threshold = 1e-8 * h_scale;
    let tolerance = 1e-6;
    let x_norm = x.entries.frobenius_norm().max(1e-300);

    let mut out = Vec::with_capacity(samples.len());
    let mut h_zero_count = 0usize;
    let mut self_map_violations = 0usize;
    let mut power_violations = 0usize;
    let mut nth_root_bound_max = 0.0f64;
    for &z in samples {
        // |(Xzⁿ)(z)| ≤ ‖X‖·‖K_z‖ with ‖zⁿ‖ = 1: the n-th-root source of
        // |ω| ≤ 1. Checked for a few powers within the window.
        for power in [4usize, 8, 16] {
            if power < n {
                let col = PowerSeries::new(x.entries.column(power), ExactDegree::Infinite);
                let ratio =
                    col.evaluate(z)?.norm() * (1.0 - z.norm_sqr()).sqrt() / x_norm;
                nth_root_bound_max = nth_root_bound_max.max(ratio);
            }
        }
        let h = col0.evaluate(z)?;
        if h.norm() <= zero_threshold {
            h_zero_count += 1;
            out.push(RecoverSample { z, h: None, omega: None, power_defect: None });
            continue;
        }
        let omega = col1.evaluate(z)? / h;
        let power_defect = (col2.evaluate(z)? / h - omega * omega).norm();
        if omega.norm() > 1.0 + tolerance {
            self_map_violations += 1;
        }
        if power_defect > tolerance * (1.0 + omega.norm_sqr()) {
            power_violations += 1;
        }
        out.push(RecoverSample { z, h: Some(h), omega: Some(omega), power_defect: Some(power_defect) });
    }
    if h_zero_count == samples.len() {
        return Err(Error::Invalid("recovered weight h vanishes on the entire sample grid".into()));
    }
    Ok(RecoverReport {
        samples: out,
        consistent: self_map_violations == 0 && power_violations == 0,
        h_zero_count,
        self_map_violations,
        power_violations,
        tolerance,
        nth_root_bound_max,
    })
}

/// Basis diagnostics for the inner-symbol intertwiner construction:
/// f spans the chosen line in ker T_φ*, fvecs holds f_n = φⁿ·f.
#[derive(Debug, Clone)]
pub struct DeddensBasis {
    pub f: CVec,
    /// f_n = φⁿ f for n = 0..=cutoff.
    pub fvecs: Vec<CVec>,
    /// max |⟨f_m, f_n⟩ − δ_{mn}|: truncation-explained orthonormality defect.
    pub gram_defect: f64,
    /// Per-n lost mass 1 − ‖truncated f_n‖².
    pub tail_energy: Vec<f64>,
}

/// Build the rank-(cutoff+1) intertwiner X with XT_φ = T_zX on the span of
/// {f_0..f_cutoff}, for φ a certified inner symbol: f is the normalized
/// projection of the constant 1 onto (φH²)^⊥ (a deterministic choice of
/// unit vector in ker T_φ*), X maps f_n ↦ e_n and vanishes on the
/// orthogonal complement.
pub fn deddens_inner_x(
    phi: &SymbolSpec,
    n: usize,
    cutoff: usize,
) -> Result<(OperatorMatrix, DeddensBasis)> {
    if cutoff > n / 8 {
        return Err(Error::Invalid(format!("cutoff {cutoff} exceeds N/8 = {}", n / 8)));
    }
    let series = phi.to_series(n)?;
    let cert = inner_certificate(phi, &series, n);
    if !cert.pass {
        return Err(Error::NotInner {
            defect: cert.isometry_defect.max(cert.sup_estimate - 1.0),
            tolerance: cert.tolerance,
        });
    }

    // f ∝ (I − T_φT_φ*)e₀ = 1 − conj(φ̂(0))·φ.
    let mut e0 = vec![Complex64::new(0.0, 0.0); n];
    e0[0] = Complex64::new(1.0, 0.0);
    let star = toeplitz_apply_adjoint(&series, &e0);
    let proj = toeplitz_apply(&series, &star);
    let mut f: CVec = e0.iter().zip(&proj).map(|(a, b)| a - b).collect();
    let f_norm = vec_norm(&f);
    if f_norm <= 1e-10 {
        return Err(Error::Invalid(
            "(I − T_φT_φ*)e₀ is numerically zero; symbol behaves like a unimodular constant".into(),
        ));
    }
    for c in f.iter_mut() {
        *c /= f_norm;
    }

    let mut fvecs = Vec::with_capacity(cutoff + 1);
    fvecs.push(f.clone());
    for m in 1..=cutoff {
        let next = toeplitz_apply(&series, &fvecs[m - 1]);
        fvecs.push(next);
    }

    let mut gram_defect = 0.0f64;
    for (m, fm) in fvecs.iter().enumerate() {
        for (k, fk) in fvecs.iter().enumerate() {
            let g = dot(fm, fk);
            let want = if m == k { 1.0 } else { 0.0 };
            gram_defect = gram_defect.max((g - want).norm());
        }
    }
    let tail_energy: Vec<f64> =
        fvecs.iter().map(|v| (1.0 - vec_norm(v).powi(2)).max(0.0)).collect();

    // X = Σ_{m ≤ cutoff} e_m (f_m)*: row m of X is conj(f_m).
    let mut xm = CMatrix::zeros(n, n);
    for (m, fm) in fvecs.iter().enumerate() {
        for (k, &c) in fm.iter().enumerate() {
            xm[(m, k)] = c.conj();
        }
    }
    // Every column of the finite-rank X is supported in rows ≤ cutoff, so
    // nothing leaks past the window.
    let x = OperatorMatrix::from_matrix(xm, n, format!("deddens-X cutoff={cutoff}"));
    Ok((x, DeddensBasis { f, fvecs, gram_defect, tail_energy }))
}

/// ‖XT_φ − T_zX‖ restricted to span{f_0..f_{cutoff−1}}: columns are
/// r_m = X f_{m+1} − T_z X f_m (σ_max of the column matrix; the basis is
/// orthonormal up to the reported gram defect).
pub fn deddens_restricted_residual(
    x: &OperatorMatrix,
    basis: &DeddensBasis,
    phi: &SymbolSpec,
) -> Result<f64> {
    let n = x.truncation;
    let _ = phi; // the chain f_{m+1} = T_φ f_m is already recorded in the basis
    let cutoff = basis.fvecs.len() - 1;
    if cutoff == 0 {
        return Ok(0.0);
    }
    let mut cols = CMatrix::zeros(n, cutoff);
    for m in 0..cutoff {
        let xf_next = x.apply(&basis.fvecs[m + 1]);
        let xf = x.apply(&basis.fvecs[m]);
        // T_z is the coefficient shift.
        let mut shifted = vec![Complex64::new(0.0, 0.0); n];
        shifted[1..n].copy_from_slice(&xf[..n - 1]);
        let col: CVec = xf_next.iter().zip(&shifted).map(|(a, b)| a - b).collect();
        cols.set_column(m, &col);
    }
    Ok(cols.operator_norm(NORM_TOL, NORM_CAP).value)
}

/// Finite-dimensional partner: given n×n matrices A, B with a common
/// eigenvalue λ, the rank-one Y = a·bᵀ (a an eigenvector of A for λ, b an
/// eigenvector of Bᵀ for λ) satisfies AY = λY = YB.
#[derive(Debug, Clone)]
pub struct FiniteDimPartner {
    pub y: CMatrix,
    pub residual_ay: f64,
    pub residual_yb: f64,
    /// Residual certificates ‖(A − λI)a‖ and ‖(Bᵀ − λI)b‖ from inverse
    /// iteration (upper bounds for the smallest singular values).
    pub eig_residual_a: f64,
    pub eig_residual_b: f64,
}

pub fn finite_dim_partner(
    a: &CMatrix,
    b: &CMatrix,
    lambda: Complex64,
) -> Result<FiniteDimPartner> {
    let scale_a = a.max_abs().max(1.0);
    let scale_b = b.max_abs().max(1.0);
    let (vec_a, resid_a) = inverse_iteration(a, lambda, 12);
    if resid_a > 1e-8 * scale_a {
        return Err(Error::Invalid(format!(
            "λ is not an eigenvalue of A to tolerance: residual {resid_a:.3e}"
        )));
    }
    let bt = b.transpose();
    let (vec_b, resid_b) = inverse_iteration(&bt, lambda, 12);
    if resid_b > 1e-8 * scale_b {
        return Err(Error::Invalid(format!(
            "λ is not an eigenvalue of B to tolerance: residual {resid_b:.3e}"
        )));
    }
    let n = a.rows();
    let mut y = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            y[(i, j)] = vec_a[i] * vec_b[j]; // a·bᵀ, no conjugation
        }
    }
    let ay = a.matmul(&y).sub(&y.scale(lambda));
    let yb = y.matmul(b).sub(&y.scale(lambda));
    Ok(FiniteDimPartner {
        residual_ay: ay.frobenius_norm(),
        residual_yb: yb.frobenius_norm(),
        eig_residual_a: resid_a,
        eig_residual_b: resid_b,
        y,
    })
}

/// Random matrix with a planted eigenvalue: A = R·D·R⁻¹ with D = diag(λ,
/// random well-separated values) and R a random matrix (resampled until
/// comfortably invertible). Deterministic for a fixed RNG state.
pub fn planted_eigenvalue_matrix(
    rng: &mut crate::linalg::SplitMix64,
    dim: usize,
    lambda: Complex64,
) -> CMatrix {
    loop {
        let mut r = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                r[(i, j)] = rng.complex();
            }
        }
        let mut d = vec![lambda];
        for k in 1..dim {
            // Spread the rest away from λ so inverse iteration locks on.
            d.push(lambda + Complex64::new(2.0 + k as f64, 1.0) + rng.complex() * 0.3);
        }
        // A·R = R·D, so solve Rᵀ·Aᵀ = (R·D)ᵀ column by column.
        let rd = {
            let mut m = r.clone();
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] = r[(i, j)] * d[j];
                }
            }
            m
        };
        let rt = r.transpose();
        let mut at = CMatrix::zeros(dim, dim);
        let mut singular = false;
        for col in 0..dim {
            let rhs: CVec = (0..dim).map(|row| rd[(col, row)]).collect();
            match crate::linalg::lu_solve(&rt, &rhs) {
                Some(x) => at.set_column(col, &x),
                None => {
                    singular = true;
                    break;
                }
            }
        }
        if singular {
            continue;
        }
        return at.transpose();
    }
}

/// Vandermonde consistency data for Y = Σ_j C_{ω_j,h_j}: at each sample z
/// the vector u(z) with entries h_j(z)(φ(ω_j(z)) − ψ(z)) must satisfy
/// V(z)·u(z) = 0 when Y intertwines T_φ and T_ψ, where V(z) is the
/// Vandermonde matrix generated by ω_1(z), …, ω_{k+1}(z).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VandermondeReport {
    pub samples: Vec<VandermondeSample>,
    pub max_system_residual: f64,
    pub max_u_norm: f64,
    /// Sample/branch pairs where two ω_j values collide (the mechanism that
    /// forces V(z) singular when some φ∘ω_j ≠ ψ).
    pub collisions: Vec<Collision>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VandermondeSample {
    #[serde(with = "crate::report::cjson::complex")]
    pub z: Complex64,
    pub u_norm: f64,
    pub vu_norm: f64,
    pub min_branch_gap: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Collision {
    #[serde(with = "crate::report::cjson::complex")]
    pub z: Complex64,
    pub j1: usize,
    pub j2: usize,
}

pub fn vandermonde_system_check(
    omegas: &[SymbolSpec],
    weights: &[SymbolSpec],
    phi: &SymbolSpec,
    psi: &SymbolSpec,
    samples: &[Complex64],
) -> Result<VandermondeReport> {
    if omegas.is_empty() || omegas.len() != weights.len() {
        return Err(Error::Invalid("need matching nonempty ω and h lists".into()));
    }
    for w in weights {
        if w.to_series(8)?.is_zero() {
            return Err(Error::ZeroWeight);
        }
    }
    for om in omegas {
        let est = om.self_map_certificate();
        if !est.certifies_self_map(0.0) {
            return Err(Error::NotSelfMap { estimate: est.value });
        }
    }

    let k1 = omegas.len();
    let mut out = Vec::with_capacity(samples.len());
    let mut max_vu = 0.0f64;
    let mut max_u = 0.0f64;
    let mut collisions = Vec::new();
    for &z in samples {
        let om: Vec<Complex64> = omegas.iter().map(|o| o.eval_unchecked(z)).collect();
        let u: Vec<Complex64> = omegas
            .iter()
            .zip(weights)
            .map(|(o, h)| {
                let w = o.eval_unchecked(z);
                h.eval_unchecked(z) * (phi.eval_unchecked(w) - psi.eval_unchecked(z))
            })
            .collect();
        let u_norm = vec_norm(&u);
        // V(z)u(z): row m is Σ_j ω_j(z)^m u_j.
        let mut vu = vec![Complex64::new(0.0, 0.0); k1];
        let mut pow: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); k1];
        for row in vu.iter_mut() {
            *row = pow.iter().zip(&u).map(|(p, uj)| p * uj).sum();
            for (p, o) in pow.iter_mut().zip(&om) {
                *p *= o;
            }
        }
        let vu_norm = vec_norm(&vu);
        let mut min_gap = f64::INFINITY;
        for i in 0..k1 {
            for j in i + 1..k1 {
                let gap = (om[i] - om[j]).norm();
                min_gap = min_gap.min(gap);
                if u_norm > 1e-10 && gap < 1e-8 {
                    collisions.push(Collision { z, j1: i, j2: j });
                }
            }
        }
        max_vu = max_vu.max(vu_norm);
        max_u = max_u.max(u_norm);
        out.push(VandermondeSample { z, u_norm, vu_norm, min_branch_gap: min_gap });
    }
    Ok(VandermondeReport {
        samples: out,
        max_system_residual: max_vu,
        max_u_norm: max_u,
        collisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::weighted_composition_matrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series_of(spec: &SymbolSpec, n: usize) -> PowerSeries {
        spec.to_series(n).unwrap()
    }

    /// Example 2.1 of the catalog: C_{z/2} T_{2z} = T_z C_{z/2} exactly.
    #[test]
    fn composition_intertwines_two_z_with_z() {
        let n = 64;
        let omega = series_of(&SymbolSpec::from_shorthand("z/2").unwrap(), n);
        let h = PowerSeries::one(n);
        let x = weighted_composition_matrix(&omega, &h, n).unwrap();
        let phi = series_of(&SymbolSpec::from_shorthand("2z").unwrap(), n);
        let psi = series_of(&SymbolSpec::identity(), n);
        let rep = intertwine_residual(&x, &phi, &psi).unwrap();
        assert_eq!(rep.valid_block, n - 1);
        assert!(rep.residual < 1e-13, "residual {}", rep.residual);
        assert!(rep.relative_residual <= 1.0 + 1e-12);
    }

    #[test]
    fn identity_intertwines_anything_with_itself() {
        let n = 32;
        let x = OperatorMatrix::identity(n);
        let phi = series_of(&SymbolSpec::cardioid(), n);
        let rep = intertwine_residual(&x, &phi, &phi).unwrap();
        assert!(rep.residual < 1e-14);
    }

    #[test]
    fn broken_identity_has_positive_floor() {
        // φ∘ω ≠ ψ by a polynomial discrepancy: the residual is at least the
        // largest coefficient of h·(φ∘ω − ψ) on the block (it shows up in
        // column 0 of the difference).
        let n = 64;
        let omega_spec = SymbolSpec::from_shorthand("z/2").unwrap();
        let omega = series_of(&omega_spec, n);
        let h = PowerSeries::one(n);
        let x = weighted_composition_matrix(&omega, &h, n).unwrap();
        let phi_spec = SymbolSpec::cardioid();
        let phi = series_of(&phi_spec, n);
        let psi_spec = SymbolSpec::identity(); // z ≠ φ∘ω = z/2 + z²/4
        let psi = series_of(&psi_spec, n);
        let rep = intertwine_residual(&x, &phi, &psi).unwrap();

        let discrepancy = phi_spec
            .compose_series(&omega, n)
            .unwrap()
            .sub(&psi)
            .unwrap()
            .multiply(&h)
            .unwrap();
        let floor = discrepancy
            .coeffs()
            .iter()
            .take(rep.window)
            .map(|c| c.norm())
            .filter(|&m| m > 0.0)
            .fold(f64::INFINITY, f64::min);
        assert!(floor.is_finite() && floor > 0.0);
        assert!(rep.residual >= floor * (1.0 - 1e-9), "residual {} under floor {floor}", rep.residual);
    }

    #[test]
    fn empty_block_requires_soft_window() {
        let n = 64;
        let x = OperatorMatrix::identity(n);
        let phi = series_of(&SymbolSpec::UnitSingular, n);
        assert!(matches!(
            intertwine_residual(&x, &phi, &phi),
            Err(Error::EmptyValidBlock { .. })
        ));
        let rep = intertwine_residual_with(
            &x,
            &phi,
            &phi,
            ResidualOptions { soft_window: Some(n / 2), phi_sup_bound: Some(1.0) },
        )
        .unwrap();
        assert!(rep.residual < 1e-13);
        assert!(rep.tail_estimate.is_some());
    }

    #[test]
    fn eigen_field_for_scaled_shift() {
        // X = C_{z/2}, φ = 2z, ψ = z: F(z) = X*K_z satisfies the eigen
        // relation up to kernel tail.
        let n = 128;
        let omega = series_of(&SymbolSpec::from_shorthand("z/2").unwrap(), n);
        let x = weighted_composition_matrix(&omega, &PowerSeries::one(n), n).unwrap();
        let rep = eigen_field(
            &x,
            &SymbolSpec::from_shorthand("2z").unwrap(),
            &SymbolSpec::identity(),
            &[c(0.3, 0.0), c(0.1, 0.4), c(-0.5, 0.2)],
        )
        .unwrap();
        assert!(!rep.degenerate);
        for s in &rep.samples {
            assert!(!s.in_zero_set);
            assert!(s.relative_residual.unwrap() < 1e-10, "residual {:?}", s.relative_residual);
        }
    }

    #[test]
    fn recover_round_trips_weighted_composition() {
        let n = 64;
        let omega = series_of(&SymbolSpec::from_shorthand("z/2").unwrap(), n);
        let h = series_of(&SymbolSpec::from_shorthand("1+z").unwrap(), n);
        let x = weighted_composition_matrix(&omega, &h, n).unwrap();
        let samples: Vec<Complex64> =
            (0..12).map(|k| Complex64::from_polar(0.6, 0.5 * k as f64)).collect();
        let rep = recover_weighted_comp(&x, &samples).unwrap();
        assert!(rep.consistent);
        for s in &rep.samples {
            let z = s.z;
            assert!((s.h.unwrap() - (c(1.0, 0.0) + z)).norm() < 1e-8);
            assert!((s.omega.unwrap() - z / 2.0).norm() < 1e-8);
        }
        assert!(rep.nth_root_bound_max <= 1.0 + 1e-9, "bound {}", rep.nth_root_bound_max);
    }

    #[test]
    fn recover_for_identity_operator() {
        let n = 16;
        let x = OperatorMatrix::identity(n);
        let samples = [c(0.2, 0.1), c(-0.4, 0.3)];
        let rep = recover_weighted_comp(&x, &samples).unwrap();
        assert!(rep.consistent);
        for s in &rep.samples {
            assert!((s.h.unwrap() - c(1.0, 0.0)).norm() < 1e-12);
            assert!((s.omega.unwrap() - s.z).norm() < 1e-12);
        }
    }

    #[test]
    fn recover_flags_sum_of_two_compositions() {
        // X = C_{ω1} + C_{ω2} with distinct self-maps: the higher-power test
        // must fail (the sum is not a weighted composition operator).
        let n = 64;
        let o1 = series_of(&SymbolSpec::from_shorthand("z/2").unwrap(), n);
        let o2 = series_of(&SymbolSpec::from_shorthand("z/4").unwrap(), n);
        let one = PowerSeries::one(n);
        let x1 = weighted_composition_matrix(&o1, &one, n).unwrap();
        let x2 = weighted_composition_matrix(&o2, &one, n).unwrap();
        let sum = x1.add(&x2).unwrap();
        let samples: Vec<Complex64> =
            (0..8).map(|k| Complex64::from_polar(0.5, 0.7 * k as f64)).collect();
        let rep = recover_weighted_comp(&sum, &samples).unwrap();
        assert!(!rep.consistent);
        assert!(rep.power_violations > 0);
    }

    #[test]
    fn deddens_shift_case_is_identity_block() {
        // φ = z: f = e₀, f_n = e_n, X = identity on the first cutoff+1
        // coordinates.
        let (x, basis) = deddens_inner_x(&SymbolSpec::identity(), 64, 6).unwrap();
        assert!((basis.f[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(basis.gram_defect < 1e-12);
        for m in 0..=6usize {
            for k in 0..64usize {
                let want = if k == m { 1.0 } else { 0.0 };
                assert!((x.entries[(m, k)] - c(want, 0.0)).norm() < 1e-12);
            }
        }
        let resid = deddens_restricted_residual(&x, &basis, &SymbolSpec::identity()).unwrap();
        assert!(resid < 1e-13);
    }

    #[test]
    fn deddens_double_shift_block_structure() {
        // φ = z²: f = e₀, f_n = e_{2n}, X maps e_{2m} ↦ e_m; the restricted
        // residual is exactly zero.
        let phi = SymbolSpec::polynomial_real(&[0.0, 0.0, 1.0]);
        let (x, basis) = deddens_inner_x(&phi, 128, 8).unwrap();
        assert!(basis.gram_defect < 1e-12);
        for m in 0..=8usize {
            assert!((x.entries[(m, 2 * m)] - c(1.0, 0.0)).norm() < 1e-12);
        }
        let resid = deddens_restricted_residual(&x, &basis, &phi).unwrap();
        assert!(resid < 1e-13, "restricted residual {resid}");
    }

    #[test]
    fn deddens_unit_singular_f_matches_projection_formula() {
        // f ∝ 1 − e^{−1}φ normalized by (1 − e^{−2})^{−1/2}, up to the
        // truncation tail of ‖φ‖.
        let n = 1024;
        let (_, basis) = deddens_inner_x(&SymbolSpec::UnitSingular, n, 4).unwrap();
        let series = SymbolSpec::UnitSingular.to_series(n).unwrap();
        let e1 = (-1.0f64).exp();
        let norm = (1.0 - e1 * e1).sqrt();
        // Compare a few leading coordinates against the closed form.
        for j in 0..8 {
            let want = if j == 0 {
                (c(1.0, 0.0) - e1 * series.coeff(0)) / norm
            } else {
                -e1 * series.coeff(j) / norm
            };
            assert!(
                (basis.f[j] - want).norm() < 2e-2 * (1.0 + want.norm()),
                "coordinate {j}: {} vs {}",
                basis.f[j],
                want
            );
        }
    }

    #[test]
    fn finite_dim_partner_diagonal_case() {
        // A = diag(1,2), B = diag(1,3), λ = 1 → Y = e₁e₁ᵀ.
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(1.0, 0.0);
        a[(1, 1)] = c(2.0, 0.0);
        let mut b = CMatrix::zeros(2, 2);
        b[(0, 0)] = c(1.0, 0.0);
        b[(1, 1)] = c(3.0, 0.0);
        let partner = finite_dim_partner(&a, &b, c(1.0, 0.0)).unwrap();
        assert!(partner.residual_ay < 1e-10);
        assert!(partner.residual_yb < 1e-10);
        assert!(partner.y.frobenius_norm() > 0.5);
        assert!(partner.y[(0, 0)].norm() > 0.9);
    }

    #[test]
    fn finite_dim_partner_rejects_non_eigenvalue() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(1.0, 0.0);
        a[(1, 1)] = c(2.0, 0.0);
        assert!(finite_dim_partner(&a, &a, c(7.0, 0.0)).is_err());
    }

    #[test]
    fn vandermonde_single_branch_base_case() {
        // k+1 = 1: u ≡ 0 iff φ∘ω = ψ.
        let samples: Vec<Complex64> =
            (0..16).map(|k| Complex64::from_polar(0.5, 0.4 * k as f64)).collect();
        let good = vandermonde_system_check(
            &[SymbolSpec::from_shorthand("z/2").unwrap()],
            &[SymbolSpec::polynomial_real(&[1.0])],
            &SymbolSpec::from_shorthand("2z").unwrap(),
            &SymbolSpec::identity(),
            &samples,
        )
        .unwrap();
        assert!(good.max_u_norm < 1e-12);

        let bad = vandermonde_system_check(
            &[SymbolSpec::from_shorthand("z/2").unwrap()],
            &[SymbolSpec::polynomial_real(&[1.0])],
            &SymbolSpec::from_shorthand("2z").unwrap(),
            &SymbolSpec::from_shorthand("z/2").unwrap(),
            &samples,
        )
        .unwrap();
        assert!(bad.max_u_norm > 1e-3);
    }

    #[test]
    fn vandermonde_rejects_zero_weight() {
        let r = vandermonde_system_check(
            &[SymbolSpec::from_shorthand("z/2").unwrap()],
            &[SymbolSpec::polynomial_real(&[0.0])],
            &SymbolSpec::identity(),
            &SymbolSpec::identity(),
            &[c(0.1, 0.0)],
        );
        assert!(matches!(r, Err(Error::ZeroWeight)));
    }
}
