//! Truncated power-series algebra for analytic symbols on the unit disc.
//!
//! A [`PowerSeries`] holds the first N Taylor coefficients of an analytic
//! function at 0 together with an [`ExactDegree`] marker: `Poly(d)` means the
//! function is a genuine polynomial of degree ≤ d (all later coefficients are
//! exactly zero), `Infinite` means the tail beyond the truncation is unknown.
//! Multiplication and formal composition are prefix-exact: coefficient k of
//! the result depends only on coefficients ≤ k of the inputs, so exact inputs
//! give exact outputs on the whole window.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Degree bookkeeping: either a certified polynomial degree or "infinite"
/// (not a polynomial / tail unknown beyond the truncation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactDegree {
    Poly(usize),
    Infinite,
}

impl ExactDegree {
    /// Degree arithmetic for products: d_s + d_t, absorbing `Infinite`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: ExactDegree) -> ExactDegree {
        match (self, other) {
            (ExactDegree::Poly(a), ExactDegree::Poly(b)) => ExactDegree::Poly(a + b),
            _ => ExactDegree::Infinite,
        }
    }

    pub fn as_poly(self) -> Option<usize> {
        match self {
            ExactDegree::Poly(d) => Some(d),
            ExactDegree::Infinite => None,
        }
    }
}

impl Serialize for ExactDegree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExactDegree::Poly(d) => s.serialize_u64(*d as u64),
            ExactDegree::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for ExactDegree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|d| ExactDegree::Poly(d as usize))
                .ok_or_else(|| DeError::custom("exact_degree must be a nonnegative integer")),
            serde_json::Value::String(s) if s == "infinite" => Ok(ExactDegree::Infinite),
            _ => Err(DeError::custom("exact_degree must be an integer or \"infinite\"")),
        }
    }
}

/// Truncated Taylor coefficients of an analytic function on 𝕌.
///
/// Invariants: `coeffs.len()` is the truncation N (≥ 1), and when
/// `exact_degree = Poly(d)` with d < N every stored coefficient above index d
/// is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    exact_degree: ExactDegree,
}

impl PowerSeries {
    /// Build from raw coefficients with an explicit exactness marker.
    /// Coefficients above a claimed polynomial degree are forced to zero.
    pub fn new(mut coeffs: Vec<Complex64>, exact_degree: ExactDegree) -> Self {
        assert!(!coeffs.is_empty(), "truncation must be at least 1");
        if let ExactDegree::Poly(d) = exact_degree {
            for c in coeffs.iter_mut().skip(d + 1) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        PowerSeries { coeffs, exact_degree }
    }

    /// Polynomial from its coefficient list, zero-padded or truncated to N.
    pub fn polynomial(poly: &[Complex64], n: usize) -> Self {
        assert!(n >= 1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        let mut degree = 0usize;
        for (k, &c) in poly.iter().enumerate() {
            if c != Complex64::new(0.0, 0.0) {
                degree = k;
            }
            if k < n {
                coeffs[k] = c;
            }
        }
        // A polynomial whose degree exceeds the window is no longer exactly
        // represented; keep the honest marker.
        let exact_degree = if degree < n {
            ExactDegree::Poly(degree)
        } else {
            ExactDegree::Infinite
        };
        PowerSeries { coeffs, exact_degree }
    }

    pub fn zero(n: usize) -> Self {
        Self::polynomial(&[], n)
    }

    pub fn one(n: usize) -> Self {
        Self::polynomial(&[Complex64::new(1.0, 0.0)], n)
    }

    /// The identity series z.
    pub fn identity(n: usize) -> Self {
        Self::polynomial(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], n)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn exact_degree(&self) -> ExactDegree {
        self.exact_degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Index of the highest coefficient that is numerically nonzero, or None
    /// for the zero series.
    pub fn numerical_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.numerical_degree().is_none()
    }

    /// ℓ² norm of the coefficient window (the truncated H² norm).
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ℓ¹ norm of the coefficient window. Dominates the sup norm on clos 𝕌
    /// for polynomials.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum::<f64>()
    }

    /// Re-truncate to a new window. Growing the window keeps exactness only
    /// for polynomials (their missing tail is exactly zero).
    pub fn retruncate(&self, n: usize) -> Self {
        assert!(n >= 1);
        let mut coeffs = self.coeffs.clone();
        if n <= coeffs.len() {
            coeffs.truncate(n);
            let exact_degree = match self.exact_degree {
                ExactDegree::Poly(d) if d < n => ExactDegree::Poly(d),
                _ => ExactDegree::Infinite,
            };
            PowerSeries { coeffs, exact_degree }
        } else {
            match self.exact_degree {
                ExactDegree::Poly(_) => {
                    coeffs.resize(n, Complex64::new(0.0, 0.0));
                    PowerSeries { coeffs, exact_degree: self.exact_degree }
                }
                ExactDegree::Infinite => {
                    // Unknown tail: padding with zeros would silently claim
                    // knowledge we do not have. Callers must rebuild from the
                    // symbol instead.
                    panic!("cannot grow a series with unknown tail; rebuild from its SymbolSpec")
                }
            }
        }
    }

    /// Horner evaluation at a point of the open disc.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisc { modulus: z.norm() });
        }
        Ok(self.evaluate_unchecked(z))
    }

    /// Horner evaluation without the domain check (for internal meshes that
    /// sample at radius 1 − ε by construction).
    pub fn evaluate_unchecked(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Evaluate together with a geometric tail bound, valid when `sup_bound`
    /// dominates |f| on 𝕌: the missing tail is at most M·|z|^N/(1−|z|)
    /// because every Taylor coefficient of such f is bounded by M.
    pub fn evaluate_with_tail(&self, z: Complex64, sup_bound: f64) -> Result<(Complex64, f64)> {
        let value = self.evaluate(z)?;
        let tail = match self.exact_degree {
            ExactDegree::Poly(d) if d < self.truncation() => 0.0,
            _ => {
                let r = z.norm();
                sup_bound * r.powi(self.truncation() as i32) / (1.0 - r)
            }
        };
        Ok((value, tail))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| factor * c).collect();
        let exact_degree = if factor == Complex64::new(0.0, 0.0) {
            ExactDegree::Poly(0)
        } else {
            self.exact_degree
        };
        PowerSeries { coeffs, exact_degree }
    }

    pub fn add(&self, other: &PowerSeries) -> Result<Self> {
        self.check_same_truncation(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        let exact_degree = match (self.exact_degree, other.exact_degree) {
            (ExactDegree::Poly(a), ExactDegree::Poly(b)) => ExactDegree::Poly(a.max(b)),
            _ => ExactDegree::Infinite,
        };
        Ok(PowerSeries { coeffs, exact_degree })
    }

    pub fn sub(&self, other: &PowerSeries) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Add a constant to the 0-th coefficient.
    pub fn add_constant(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Cauchy product truncated to the common window N. Coefficients 0..N−1
    /// are exact given exact inputs; the exactness degree propagates
    /// additively (d_s + d_t).
    pub fn multiply(&self, other: &PowerSeries) -> Result<Self> {
        self.check_same_truncation(other)?;
        let n = self.truncation();
        // Drive the outer loop with the lower-degree factor so that
        // multiplying by a sparse polynomial costs O(N·deg), not O(N²).
        let degree_bound = |s: &PowerSeries| match s.exact_degree {
            ExactDegree::Poly(d) => d.min(n - 1),
            ExactDegree::Infinite => n - 1,
        };
        let (outer, inner) = if degree_bound(self) <= degree_bound(other) {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..=degree_bound(outer) {
            let a = outer.coeffs[i];
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, &b) in inner.coeffs[..n - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let exact_degree = self.exact_degree.add(other.exact_degree);
        Ok(PowerSeries::new(coeffs, exact_degree))
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut acc = PowerSeries::one(self.truncation());
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Reciprocal 1/f for f with f(0) ≠ 0, by the standard triangular
    /// recurrence.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 {
            return Err(Error::Invalid(
                "cannot invert a series with zero constant term".into(),
            ));
        }
        let n = self.truncation();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = Complex64::new(1.0, 0.0) / a0;
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc / a0;
        }
        Ok(PowerSeries::new(out, ExactDegree::Infinite))
    }

    /// Termwise derivative (the window shrinks logically but is kept at N
    /// with a trailing zero).
    pub fn derivative(&self) -> Self {
        let n = self.truncation();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            coeffs[k - 1] = self.coeffs[k] * k as f64;
        }
        let exact_degree = match self.exact_degree {
            ExactDegree::Poly(d) if d > 0 => ExactDegree::Poly(d - 1),
            ExactDegree::Poly(_) => ExactDegree::Poly(0),
            ExactDegree::Infinite => ExactDegree::Infinite,
        };
        PowerSeries { coeffs, exact_degree }
    }

    /// Formal composition outer ∘ inner for inner with inner(0) = 0.
    ///
    /// Triangular dependence makes the result prefix-exact. Composition at a
    /// noncentered point (inner(0) ≠ 0) must go through
    /// [`crate::symbol::SymbolSpec::compose_series`], which recentres the
    /// outer function in closed form.
    pub fn compose(&self, inner: &PowerSeries) -> Result<Self> {
        self.check_same_truncation(inner)?;
        if inner.coeffs[0].norm() != 0.0 {
            return Err(Error::NotFormal { value: inner.coeffs[0] });
        }
        let n = self.truncation();
        // Horner over the outer coefficients, highest first.
        let top = match self.exact_degree {
            ExactDegree::Poly(d) => d.min(n - 1),
            ExactDegree::Infinite => n - 1,
        };
        let mut acc = PowerSeries::zero(n);
        for k in (0..=top).rev() {
            acc = acc.multiply(inner)?;
            acc.coeffs[0] += self.coeffs[k];
            if let ExactDegree::Poly(d) = acc.exact_degree {
                // multiply() may report a degree past the window; clamp.
                acc.exact_degree = ExactDegree::Poly(d.min(n - 1));
            }
        }
        // Composition of polynomials is a polynomial of degree d_outer·d_inner
        // when that fits the window.
        let exact_degree = match (self.exact_degree, inner.exact_degree) {
            (ExactDegree::Poly(a), ExactDegree::Poly(b)) if a * b < n => ExactDegree::Poly(a * b),
            _ => ExactDegree::Infinite,
        };
        acc.exact_degree = exact_degree;
        Ok(acc)
    }

    /// Formal compositional inverse: the series r with s(r(z)) = z (and
    /// r(s(z)) = z) to truncation, for s(0) = 0, s'(0) ≠ 0.
    ///
    /// Newton iteration on series, doubling the accurate window each step.
    /// Rejects s'(0) = 0: a critical point admits no single-valued local
    /// inverse.
    pub fn reversion(&self) -> Result<Self> {
        let n = self.truncation();
        if self.coeffs[0].norm() != 0.0 {
            return Err(Error::Invalid(
                "reversion requires s(0) = 0; shift the series first".into(),
            ));
        }
        let s1 = self.coeff(1);
        if s1.norm() == 0.0 {
            return Err(Error::CriticalPoint);
        }
        if n == 1 {
            return Ok(PowerSeries::zero(1));
        }
        // Linear seed r = z/s1, then Newton: r ← r − (s∘r − z)/(s'∘r).
        let deriv = self.derivative();
        let mut window = 2usize;
        let mut r = PowerSeries::polynomial(
            &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0) / s1],
            window,
        );
        while window < n {
            window = (window * 2).min(n);
            let r_grown = {
                let mut c = r.coeffs.clone();
                c.resize(window, Complex64::new(0.0, 0.0));
                PowerSeries::new(c, ExactDegree::Infinite)
            };
            let s_w = self.retruncate(window);
            let num = s_w.compose(&r_grown)?.sub(&PowerSeries::identity(window))?;
            let den = deriv.retruncate(window).compose(&r_grown)?;
            let correction = num.multiply(&den.reciprocal()?)?;
            r = r_grown.sub(&correction)?;
        }
        let exact_degree = match self.numerical_degree() {
            Some(1) => ExactDegree::Poly(1),
            _ => ExactDegree::Infinite,
        };
        Ok(PowerSeries::new(r.coeffs, exact_degree))
    }

    /// exp(t) for a formal series t with t(0) = 0, via the ODE recurrence
    /// g' = t'·g (linear cost per coefficient, no composition needed).
    pub fn exp_formal(&self) -> Result<Self> {
        if self.coeffs[0].norm() != 0.0 {
            return Err(Error::Invalid("exp_formal requires t(0) = 0".into()));
        }
        let n = self.truncation();
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        g[0] = Complex64::new(1.0, 0.0);
        for m in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=m {
                acc += self.coeffs[k] * k as f64 * g[m - k];
            }
            g[m] = acc / m as f64;
        }
        Ok(PowerSeries::new(g, ExactDegree::Infinite))
    }

    /// Taylor series of u ↦ √(c + u) at u = 0 for c ≠ 0, principal branch.
    pub fn sqrt_recentered(c: Complex64, n: usize) -> Result<Self> {
        if c.norm() == 0.0 {
            return Err(Error::CriticalPoint);
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        // t_k = √c · binom(1/2, k) / c^k via the term ratio
        // t_{k+1} = t_k · (1/2 − k) / ((k+1)·c); the ratio form avoids the
        // |c|^{2k} underflow of a naive division by c^k.
        let mut t = c.sqrt(); // principal branch
        for (k, out) in coeffs.iter_mut().enumerate() {
            *out = t;
            t *= Complex64::new(0.5 - k as f64, 0.0) / ((k as f64 + 1.0) * c);
        }
        Ok(PowerSeries::new(coeffs, ExactDegree::Infinite))
    }

    /// Max of |f| over M equispaced samples of the circle of radius
    /// `1 − eps`, a lower bound for the sup norm ‖f‖_∞.
    pub fn sup_norm_estimate(&self, mesh: usize, eps: f64) -> SupNormEstimate {
        let radius = 1.0 - eps;
        let value = max_modulus_on_circle(|z| self.evaluate_unchecked(z), mesh, radius);
        SupNormEstimate { value, mesh, radius }
    }

    fn check_same_truncation(&self, other: &PowerSeries) -> Result<()> {
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch {
                left: self.truncation(),
                right: other.truncation(),
            });
        }
        Ok(())
    }
}

/// Lower bound for ‖f‖_∞ from circle samples, with the mesh it came from.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SupNormEstimate {
    pub value: f64,
    pub mesh: usize,
    pub radius: f64,
}

impl SupNormEstimate {
    /// Self-map certificate at desk scale: the sampled maximum stays below
    /// 1 − margin. A true self-map satisfies |f| < 1 strictly inside 𝕌, so
    /// the default margin is 0.
    pub fn certifies_self_map(&self, margin: f64) -> bool {
        self.value < 1.0 - margin
    }
}

/// Shared mesh scan: max |f(r·e^{iθ_j})| over M equispaced angles.
pub fn max_modulus_on_circle<F: Fn(Complex64) -> Complex64>(
    f: F,
    mesh: usize,
    radius: f64,
) -> f64 {
    assert!(mesh >= 8, "need at least 8 boundary samples");
    let mut max = 0.0f64;
    for j in 0..mesh {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / mesh as f64;
        let z = Complex64::from_polar(radius, theta);
        let m = f(z).norm();
        if m > max {
            max = m;
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(re: &[f64], n: usize) -> PowerSeries {
        let coeffs: Vec<Complex64> = re.iter().map(|&x| c(x, 0.0)).collect();
        PowerSeries::polynomial(&coeffs, n)
    }

    #[test]
    fn polynomial_coefficients_are_literal() {
        let s = poly(&[0.0, 1.0, 1.0], 4);
        assert_eq!(s.coeffs(), &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.exact_degree(), ExactDegree::Poly(2));
    }

    #[test]
    fn evaluate_rejects_boundary() {
        let s = poly(&[0.0, 1.0, 1.0], 4);
        assert!((s.evaluate(c(0.5, 0.0)).unwrap() - c(0.75, 0.0)).norm() < 1e-15);
        assert!(s.evaluate(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn value_at_center_is_constant_coefficient() {
        let s = poly(&[0.3, -2.0, 5.0], 8);
        assert_eq!(s.evaluate(c(0.0, 0.0)).unwrap(), c(0.3, 0.0));
    }

    #[test]
    fn multiply_z_by_z() {
        let z = PowerSeries::identity(4);
        let z2 = z.multiply(&z).unwrap();
        assert_eq!(z2.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(z2.exact_degree(), ExactDegree::Poly(2));
    }

    #[test]
    fn multiply_conjugate_pair() {
        let a = poly(&[1.0, 1.0], 4);
        let b = poly(&[1.0, -1.0], 4);
        let p = a.multiply(&b).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn multiply_rejects_truncation_mismatch() {
        let a = poly(&[1.0], 4);
        let b = poly(&[1.0], 8);
        assert!(matches!(a.multiply(&b), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn compose_outer_square_inner_half_z() {
        let outer = poly(&[0.0, 0.0, 1.0], 4);
        let inner = poly(&[0.0, 0.5], 4);
        let got = outer.compose(&inner).unwrap();
        assert_eq!(got.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.25, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn compose_with_identity_is_identity_operation() {
        let outer = poly(&[0.4, -0.3, 0.2, 0.1], 8);
        let got = outer.compose(&PowerSeries::identity(8)).unwrap();
        for k in 0..8 {
            assert!((got.coeff(k) - outer.coeff(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn compose_rejects_noncentered_inner() {
        let outer = poly(&[0.0, 1.0], 4);
        let inner = poly(&[0.5, 0.5], 4);
        assert!(matches!(outer.compose(&inner), Err(Error::NotFormal { .. })));
    }

    #[test]
    fn reversion_of_identity_and_linear() {
        let z = PowerSeries::identity(6);
        let r = z.reversion().unwrap();
        for k in 0..6 {
            assert!((r.coeff(k) - z.coeff(k)).norm() < 1e-15);
        }
        let two_z = poly(&[0.0, 2.0], 6);
        let r = two_z.reversion().unwrap();
        assert!((r.coeff(1) - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(r.exact_degree(), ExactDegree::Poly(1));
    }

    #[test]
    fn reversion_catalan_signs() {
        // s = z + z² has inverse z − z² + 2z³ − 5z⁴ + 14z⁵ − …
        let s = poly(&[0.0, 1.0, 1.0], 8);
        let r = s.reversion().unwrap();
        let expected = [0.0, 1.0, -1.0, 2.0, -5.0, 14.0, -42.0, 132.0];
        for (k, &e) in expected.iter().enumerate() {
            assert!(
                (r.coeff(k) - c(e, 0.0)).norm() < 1e-10 * (1.0 + e.abs()),
                "coefficient {k}: got {}, want {}",
                r.coeff(k),
                e
            );
        }
        // Oracle: s(r(z)) = z coefficientwise.
        let back = s.compose(&r).unwrap();
        for k in 0..8 {
            let want = if k == 1 { 1.0 } else { 0.0 };
            assert!((back.coeff(k) - c(want, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn reversion_rejects_critical_point() {
        let s = poly(&[0.0, 0.0, 1.0], 6);
        assert!(matches!(s.reversion(), Err(Error::CriticalPoint)));
    }

    #[test]
    fn exp_formal_matches_scalar_exp() {
        // exp(0.3 z) coefficients are 0.3^k / k!
        let t = poly(&[0.0, 0.3], 10);
        let g = t.exp_formal().unwrap();
        let mut want = 1.0;
        for k in 0..10 {
            assert!((g.coeff(k) - c(want, 0.0)).norm() < 1e-14);
            want *= 0.3 / (k as f64 + 1.0);
        }
    }

    #[test]
    fn sqrt_recentered_squares_back() {
        // (√(c+u))² = c + u. The binomial coefficients grow like |c|^{−k},
        // so the cancellation error scales with Σ|s_j||s_{k−j}|.
        let n = 24;
        let cc = c(0.25, 0.1);
        let s = PowerSeries::sqrt_recentered(cc, n).unwrap();
        let sq = s.multiply(&s).unwrap();
        assert!((sq.coeff(0) - cc).norm() < 1e-13);
        assert!((sq.coeff(1) - c(1.0, 0.0)).norm() < 1e-13);
        for k in 2..n {
            let scale: f64 = (0..=k).map(|j| (s.coeff(j) * s.coeff(k - j)).norm()).sum();
            assert!(
                sq.coeff(k).norm() < 1e-13 * scale.max(1.0),
                "coefficient {k} = {} (scale {scale})",
                sq.coeff(k)
            );
        }
    }

    #[test]
    fn sup_norm_of_identity_is_radius() {
        let z = PowerSeries::identity(4);
        let est = z.sup_norm_estimate(64, 1e-6);
        assert!((est.value - (1.0 - 1e-6)).abs() < 1e-9);
        assert!(est.certifies_self_map(0.0));
    }

    #[test]
    fn sup_norm_of_cardioid_symbol_is_near_two() {
        let s = poly(&[0.0, 1.0, 1.0], 4);
        let est = s.sup_norm_estimate(4096, 1e-6);
        assert!(est.value > 1.99 && est.value <= 2.0, "estimate {}", est.value);
    }

    #[test]
    fn exact_degree_propagates_through_products() {
        let a = poly(&[0.0, 1.0, 1.0], 16);
        let b = poly(&[1.0, 2.0], 16);
        let p = a.multiply(&b).unwrap();
        assert_eq!(p.exact_degree(), ExactDegree::Poly(3));
    }
}
