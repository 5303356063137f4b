//! Closed-form symbol specifications for the functions φ, ψ, ω, h.
//!
//! A [`SymbolSpec`] is a structured description of an analytic function on
//! the unit disc that supports *exact* pointwise evaluation (no truncation
//! error), exact first derivatives, and Taylor expansion at any center
//! |c| < 1. Truncated series are derived from specs, never the other way
//! round, so closed-form recentring is always available for the symbols the
//! catalog actually uses (polynomials, Möbius maps, the unit singular
//! function, and their scales/shifts/compositions).
//!
//! JSON schema: `{"tag": "polynomial"|"moebius"|"unit_singular"|"scale"|
//! "shift"|"compose"|"raw", ...tag-specific fields}` with complex numbers as
//! `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::report::cjson;
use crate::series::{max_modulus_on_circle, ExactDegree, PowerSeries, SupNormEstimate};
use crate::{Error, Result};

/// Default sampling radius 1 − ε for boundary meshes. Sampling strictly
/// inside the disc avoids the essential singularity of the unit singular
/// function at z = 1.
pub const BOUNDARY_EPS: f64 = 1e-6;

/// Default mesh for sup-norm estimates and self-map certificates.
pub const SUP_NORM_MESH: usize = 4096;

/// Structured description of an analytic symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum SymbolSpec {
    /// c₀ + c₁z + … + c_d z^d.
    Polynomial {
        #[serde(with = "cjson::complex_vec")]
        coeffs: Vec<Complex64>,
    },
    /// The disc automorphism z ↦ (a − z)/(1 − ā z), |a| < 1.
    Moebius {
        #[serde(with = "cjson::complex")]
        a: Complex64,
    },
    /// exp((z+1)/(z−1)): inner, image 𝕌∖{0}, a covering map of the
    /// punctured disc.
    UnitSingular,
    /// λ·inner(z), λ ≠ 0.
    Scale {
        #[serde(with = "cjson::complex")]
        factor: Complex64,
        inner: Box<SymbolSpec>,
    },
    /// c + inner(z).
    Shift {
        #[serde(with = "cjson::complex")]
        offset: Complex64,
        inner: Box<SymbolSpec>,
    },
    /// outer ∘ inner.
    Compose {
        outer: Box<SymbolSpec>,
        inner: Box<SymbolSpec>,
    },
    /// A bare coefficient window with no closed form behind it.
    Raw {
        #[serde(with = "cjson::complex_vec")]
        coeffs: Vec<Complex64>,
        exact_degree: ExactDegree,
    },
}

impl SymbolSpec {
    pub fn polynomial_real(coeffs: &[f64]) -> Self {
        SymbolSpec::Polynomial {
            coeffs: coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    /// The identity symbol z.
    pub fn identity() -> Self {
        SymbolSpec::polynomial_real(&[0.0, 1.0])
    }

    /// z² + z, the cardioid symbol of the catalog.
    pub fn cardioid() -> Self {
        SymbolSpec::polynomial_real(&[0.0, 1.0, 1.0])
    }

    pub fn scale(factor: Complex64, inner: SymbolSpec) -> Self {
        SymbolSpec::Scale { factor, inner: Box::new(inner) }
    }

    pub fn shift(offset: Complex64, inner: SymbolSpec) -> Self {
        SymbolSpec::Shift { offset, inner: Box::new(inner) }
    }

    pub fn compose(outer: SymbolSpec, inner: SymbolSpec) -> Self {
        SymbolSpec::Compose { outer: Box::new(outer), inner: Box::new(inner) }
    }

    /// Named shorthands for the recurring catalog symbols.
    pub fn from_shorthand(name: &str) -> Option<Self> {
        match name.trim() {
            "z" => Some(Self::identity()),
            "z2z" | "z^2+z" | "z2+z" => Some(Self::cardioid()),
            "unit_singular" | "unit-singular" => Some(SymbolSpec::UnitSingular),
            "z+1" => Some(Self::polynomial_real(&[1.0, 1.0])),
            "z+2" => Some(Self::polynomial_real(&[2.0, 1.0])),
            "3+z" | "z+3" => Some(Self::polynomial_real(&[3.0, 1.0])),
            "2+z^2" | "2+z2" => Some(Self::polynomial_real(&[2.0, 0.0, 1.0])),
            "2z" => Some(Self::polynomial_real(&[0.0, 2.0])),
            "z/2" => Some(Self::polynomial_real(&[0.0, 0.5])),
            "z/4" => Some(Self::polynomial_real(&[0.0, 0.25])),
            "1" => Some(Self::polynomial_real(&[1.0])),
            "1+z" => Some(Self::polynomial_real(&[1.0, 1.0])),
            _ => None,
        }
    }

    /// Closed-form evaluation at a point of the open disc.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisc { modulus: z.norm() });
        }
        Ok(self.eval_unchecked(z))
    }

    /// Evaluation by formula, without the |z| < 1 gate. The formulas extend
    /// past the disc (except at poles); callers sampling at radius 1 − ε own
    /// the domain discipline.
    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        match self {
            SymbolSpec::Polynomial { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &c in coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                acc
            }
            SymbolSpec::Moebius { a } => (a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z),
            SymbolSpec::UnitSingular => {
                ((z + Complex64::new(1.0, 0.0)) / (z - Complex64::new(1.0, 0.0))).exp()
            }
            SymbolSpec::Scale { factor, inner } => factor * inner.eval_unchecked(z),
            SymbolSpec::Shift { offset, inner } => offset + inner.eval_unchecked(z),
            SymbolSpec::Compose { outer, inner } => outer.eval_unchecked(inner.eval_unchecked(z)),
            SymbolSpec::Raw { coeffs, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &c in coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                acc
            }
        }
    }

    /// Closed-form first derivative.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        match self {
            SymbolSpec::Polynomial { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in (1..coeffs.len()).rev() {
                    acc = acc * z + coeffs[k] * k as f64;
                }
                acc
            }
            SymbolSpec::Moebius { a } => {
                let den = Complex64::new(1.0, 0.0) - a.conj() * z;
                (a.norm_sqr() - 1.0) / (den * den)
            }
            SymbolSpec::UnitSingular => {
                // φ' = σ'·φ with σ(z) = (z+1)/(z−1), σ'(z) = −2/(z−1)².
                let d = z - Complex64::new(1.0, 0.0);
                -2.0 / (d * d) * self.eval_unchecked(z)
            }
            SymbolSpec::Scale { factor, inner } => factor * inner.eval_derivative(z),
            SymbolSpec::Shift { inner, .. } => inner.eval_derivative(z),
            SymbolSpec::Compose { outer, inner } => {
                outer.eval_derivative(inner.eval_unchecked(z)) * inner.eval_derivative(z)
            }
            SymbolSpec::Raw { coeffs, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in (1..coeffs.len()).rev() {
                    acc = acc * z + coeffs[k] * k as f64;
                }
                acc
            }
        }
    }

    /// First N Taylor coefficients at 0.
    pub fn to_series(&self, n: usize) -> Result<PowerSeries> {
        if n < 1 {
            return Err(Error::Invalid("truncation must be at least 1".into()));
        }
        self.taylor_at(Complex64::new(0.0, 0.0), n)
    }

    /// Taylor coefficients at an arbitrary center |c| < 1, computed from the
    /// closed form (exact recentring, no truncated-series recomposition).
    pub fn taylor_at(&self, center: Complex64, n: usize) -> Result<PowerSeries> {
        if center.norm() >= 1.0 {
            return Err(Error::OutsideDisc { modulus: center.norm() });
        }
        match self {
            SymbolSpec::Polynomial { coeffs } => {
                if center.norm() == 0.0 {
                    return Ok(PowerSeries::polynomial(coeffs, n));
                }
                Ok(taylor_shift(coeffs, center, n))
            }
            SymbolSpec::Moebius { a } => {
                if a.norm() >= 1.0 {
                    return Err(Error::Invalid(format!(
                        "moebius parameter |a| = {} must be < 1",
                        a.norm()
                    )));
                }
                // m(c+u) = (P − u)/(Q − ā u), P = a − c, Q = 1 − ā c:
                // geometric series in ρ·u with ρ = ā/Q, so
                // t₀ = P/Q and t_k = (P·ρ^k − ρ^{k−1})/Q.
                let p = a - center;
                let q = Complex64::new(1.0, 0.0) - a.conj() * center;
                let ratio = a.conj() / q;
                let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
                let mut pow = Complex64::new(1.0, 0.0); // ρ^k
                let mut pow_prev = Complex64::new(0.0, 0.0); // ρ^{k−1}, zeroed at k = 0
                for out in coeffs.iter_mut() {
                    *out = (p * pow - pow_prev) / q;
                    pow_prev = pow;
                    pow *= ratio;
                }
                Ok(PowerSeries::new(coeffs, ExactDegree::Infinite))
            }
            SymbolSpec::UnitSingular => {
                // σ(c+u) = σ(c) + Σ_{k≥1} (2/B)(−1/B)^k u^k with B = c − 1,
                // then exp(σ(c+u)) = e^{σ(c)} · exp(formal part).
                let b = center - Complex64::new(1.0, 0.0);
                let sigma_c = (center + Complex64::new(1.0, 0.0)) / b;
                let mut t = vec![Complex64::new(0.0, 0.0); n];
                let mut pow = Complex64::new(1.0, 0.0); // (−1/B)^k
                let lead = 2.0 / b;
                for tk in t.iter_mut().skip(1) {
                    pow *= -1.0 / b;
                    *tk = lead * pow;
                }
                let formal = PowerSeries::new(t, ExactDegree::Infinite).exp_formal()?;
                Ok(formal.scale(sigma_c.exp()))
            }
            SymbolSpec::Scale { factor, inner } => {
                if factor.norm() == 0.0 {
                    return Err(Error::Invalid("scale factor must be nonzero".into()));
                }
                Ok(inner.taylor_at(center, n)?.scale(*factor))
            }
            SymbolSpec::Shift { offset, inner } => {
                Ok(inner.taylor_at(center, n)?.add_constant(*offset))
            }
            SymbolSpec::Compose { outer, inner } => {
                let inner_series = inner.taylor_at(center, n)?;
                // Recentring through the outer closed form needs the inner
                // function to feed it disc values (checked, not assumed);
                // the purely formal case inner(center) = 0 needs nothing.
                if inner_series.coeff(0).norm() != 0.0 {
                    let est = inner.self_map_certificate();
                    if !est.certifies_self_map(0.0) {
                        return Err(Error::NotSelfMap { estimate: est.value });
                    }
                }
                outer.compose_series(&inner_series, n)
            }
            SymbolSpec::Raw { coeffs, exact_degree } => {
                if center.norm() == 0.0 {
                    let s = PowerSeries::new(coeffs.clone(), *exact_degree);
                    if n <= coeffs.len() || matches!(exact_degree, ExactDegree::Poly(_)) {
                        Ok(s.retruncate(n))
                    } else {
                        Err(Error::Invalid(format!(
                            "raw series holds {} coefficients, cannot extend to {}",
                            coeffs.len(),
                            n
                        )))
                    }
                } else {
                    Err(Error::NoRecentring)
                }
            }
        }
    }

    /// Series of self ∘ g for a series g, recentring through the closed form
    /// when g(0) ≠ 0. This is the compose path that keeps the dominant error
    /// source (noncentered composition of truncated series) out of the
    /// pipeline.
    pub fn compose_series(&self, g: &PowerSeries, n: usize) -> Result<PowerSeries> {
        let g = if g.truncation() == n { g.clone() } else { g.retruncate(n) };
        let g0 = g.coeff(0);
        if g0.norm() == 0.0 {
            return self.to_series(n)?.compose(&g);
        }
        if g0.norm() >= 1.0 {
            return Err(Error::OutsideDisc { modulus: g0.norm() });
        }
        let recentred = self.taylor_at(g0, n)?;
        let formal = g.add_constant(-g0);
        recentred.compose(&formal)
    }

    /// Sampled lower bound for ‖f‖_∞ over M points of the circle of radius
    /// 1 − ε. Doubles as the self-map certificate (estimate < 1 − margin).
    pub fn sup_norm_estimate(&self, mesh: usize, eps: f64) -> SupNormEstimate {
        let radius = 1.0 - eps;
        let value = max_modulus_on_circle(|z| self.eval_unchecked(z), mesh, radius);
        SupNormEstimate { value, mesh, radius }
    }

    /// Default-mesh self-map certificate.
    pub fn self_map_certificate(&self) -> SupNormEstimate {
        self.sup_norm_estimate(SUP_NORM_MESH, BOUNDARY_EPS)
    }

    /// Structural test for the cardioid symbol z² + z.
    pub fn is_cardioid_symbol(&self) -> bool {
        match self {
            SymbolSpec::Polynomial { coeffs } => {
                let want = [
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(1.0, 0.0),
                ];
                coeffs.len() >= 2
                    && coeffs
                        .iter()
                        .enumerate()
                        .all(|(k, &c)| c == *want.get(k).unwrap_or(&Complex64::new(0.0, 0.0)))
                    && coeffs.len() >= 3
                    && coeffs[2] == Complex64::new(1.0, 0.0)
            }
            _ => false,
        }
    }

    /// Structural match for a pure scale λ·(unit singular), returning λ.
    pub fn as_scaled_unit_singular(&self) -> Option<Complex64> {
        match self {
            SymbolSpec::UnitSingular => Some(Complex64::new(1.0, 0.0)),
            SymbolSpec::Scale { factor, inner } => {
                inner.as_scaled_unit_singular().map(|f| factor * f)
            }
            _ => None,
        }
    }

    /// Parse from shorthand, inline JSON, or an `@path` / `*.json` file.
    pub fn parse_arg(arg: &str) -> Result<Self> {
        if let Some(s) = Self::from_shorthand(arg) {
            return Ok(s);
        }
        let trimmed = arg.trim();
        if let Some(path) = trimmed.strip_prefix('@') {
            let text = std::fs::read_to_string(path)?;
            return Ok(serde_json::from_str(&text)?);
        }
        if trimmed.starts_with('{') {
            return Ok(serde_json::from_str(trimmed)?);
        }
        if trimmed.ends_with(".json") && std::path::Path::new(trimmed).exists() {
            let text = std::fs::read_to_string(trimmed)?;
            return Ok(serde_json::from_str(&text)?);
        }
        Err(Error::Invalid(format!(
            "unrecognized symbol '{arg}': expected a shorthand (z, z2z, unit_singular, z+1, z+2, 2+z^2, …), a .json path, or inline JSON matching {{\"tag\": \"polynomial\"|\"moebius\"|\"unit_singular\"|\"scale\"|\"shift\"|\"compose\"|\"raw\", …}} with complex numbers as [re, im]"
        )))
    }
}

/// Taylor shift p(z) → p(c + u) by repeated synthetic division (exact for
/// polynomial input, O(d²)).
fn taylor_shift(coeffs: &[Complex64], c: Complex64, n: usize) -> PowerSeries {
    let d = coeffs.len();
    let mut a = coeffs.to_vec();
    if d >= 2 {
        for k in 0..d - 1 {
            for j in (k..d - 1).rev() {
                let next = a[j + 1];
                a[j] += c * next;
            }
        }
    }
    PowerSeries::polynomial(&a, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_singular_value_at_zero() {
        let phi = SymbolSpec::UnitSingular;
        let v = phi.evaluate(c(0.0, 0.0)).unwrap();
        assert!((v - c((-1.0f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unit_singular_series_head() {
        // First coefficient must equal the value at 0 (e^{−1}); the series at
        // larger N must reproduce pointwise values inside the disc.
        let phi = SymbolSpec::UnitSingular;
        let s1 = phi.to_series(1).unwrap();
        assert!((s1.coeff(0) - c((-1.0f64).exp(), 0.0)).norm() < 1e-15);

        let s = phi.to_series(256).unwrap();
        for &z in &[c(0.3, 0.1), c(-0.4, 0.2), c(0.0, 0.5)] {
            let direct = phi.evaluate(z).unwrap();
            let via_series = s.evaluate(z).unwrap();
            assert!(
                (direct - via_series).norm() < 1e-10,
                "mismatch at {z}: {direct} vs {via_series}"
            );
        }
    }

    #[test]
    fn unit_singular_self_map_certificate() {
        let est = SymbolSpec::UnitSingular.self_map_certificate();
        assert!(est.value <= 1.0, "inner function must have sup ≤ 1, got {}", est.value);
        assert!(est.certifies_self_map(0.0));
    }

    #[test]
    fn scale_series_is_linear() {
        let s = SymbolSpec::scale(c(2.0, 0.0), SymbolSpec::identity());
        let ser = s.to_series(3).unwrap();
        assert_eq!(ser.coeffs(), &[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn moebius_series_matches_pointwise() {
        let m = SymbolSpec::Moebius { a: c(0.3, -0.2) };
        let s = m.to_series(64).unwrap();
        for &z in &[c(0.5, 0.0), c(-0.2, 0.4), c(0.0, 0.0)] {
            let direct = m.evaluate(z).unwrap();
            let via = s.evaluate(z).unwrap();
            assert!((direct - via).norm() < 1e-12);
        }
    }

    #[test]
    fn taylor_shift_of_square() {
        // p = z², center 0.5: (0.5+u)² = 0.25 + u + u².
        let p = SymbolSpec::polynomial_real(&[0.0, 0.0, 1.0]);
        let s = p.taylor_at(c(0.5, 0.0), 4).unwrap();
        assert!((s.coeff(0) - c(0.25, 0.0)).norm() < 1e-15);
        assert!((s.coeff(1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((s.coeff(2) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(s.coeff(3).norm() < 1e-15);
    }

    #[test]
    fn recentred_taylor_matches_pointwise_for_unit_singular() {
        let phi = SymbolSpec::UnitSingular;
        let center = c(0.2, -0.3);
        let s = phi.taylor_at(center, 128).unwrap();
        for &u in &[c(0.1, 0.0), c(-0.05, 0.2), c(0.0, 0.0)] {
            let direct = phi.evaluate(center + u).unwrap();
            let via = s.evaluate_unchecked(u);
            assert!((direct - via).norm() < 1e-10, "at u={u}: {direct} vs {via}");
        }
    }

    #[test]
    fn compose_series_recentres_through_closed_form() {
        // exp-free check: outer = moebius(0.4), inner series with inner(0) ≠ 0.
        let outer = SymbolSpec::Moebius { a: c(0.4, 0.0) };
        let inner = PowerSeries::polynomial(&[c(0.3, 0.0), c(0.2, 0.0)], 64);
        let composed = outer.compose_series(&inner, 64).unwrap();
        for &z in &[c(0.3, 0.0), c(-0.5, 0.1)] {
            let want = outer.evaluate(inner.evaluate(z).unwrap()).unwrap();
            let got = composed.evaluate(z).unwrap();
            assert!((want - got).norm() < 1e-12);
        }
    }

    #[test]
    fn series_convergence_is_geometric() {
        // |f(z) − S_N(z)| ≤ C·ρ^N at ρ = |z| for a bounded symbol: doubling N
        // must shrink the error by roughly ρ^N.
        let phi = SymbolSpec::UnitSingular;
        let z = c(0.5, 0.0);
        let exact = phi.evaluate(z).unwrap();
        let mut last = f64::INFINITY;
        for &n in &[16usize, 32, 64, 128] {
            let s = phi.to_series(n).unwrap();
            let err = (s.evaluate(z).unwrap() - exact).norm();
            assert!(err < last.max(1e-15), "error must not grow: {err} vs {last}");
            // Geometric in N until the float noise floor takes over.
            assert!(
                err <= 2.0 * 0.5f64.powi(n as i32 / 2) + 1e-14,
                "error {err} too large at N={n}"
            );
            last = err;
        }
    }

    #[test]
    fn json_round_trip_uses_re_im_pairs() {
        let spec = SymbolSpec::scale(
            c(2.0, 1.0),
            SymbolSpec::compose(SymbolSpec::UnitSingular, SymbolSpec::Moebius { a: c(0.1, 0.2) }),
        );
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"tag\":\"scale\""));
        assert!(text.contains("[2.0,1.0]"), "complex must serialize as [re,im]: {text}");
        let back: SymbolSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn shorthand_table_covers_catalog() {
        for name in ["z", "z2z", "unit_singular", "z+1", "z+2", "2+z^2", "z/2", "2z"] {
            assert!(SymbolSpec::from_shorthand(name).is_some(), "missing shorthand {name}");
        }
        let z2z = SymbolSpec::from_shorthand("z2z").unwrap();
        assert!(z2z.is_cardioid_symbol());
    }

    #[test]
    fn scaled_unit_singular_detection() {
        let s = SymbolSpec::scale(c(0.5, 0.0), SymbolSpec::UnitSingular);
        assert_eq!(s.as_scaled_unit_singular(), Some(c(0.5, 0.0)));
        assert_eq!(SymbolSpec::identity().as_scaled_unit_singular(), None);
    }
}
