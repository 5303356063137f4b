//! Report plumbing: the tolerance ledger embedded in every JSON report, and
//! serde helpers that render complex numbers as `[re, im]` pairs.

use serde::{Deserialize, Serialize};

/// Every numeric threshold the pipeline uses, spelled out so that reports
/// are self-describing and reruns are comparable.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for assertions that hold exactly up to rounding.
    pub exact_rel: f64,
    /// Convergence tolerance for the power iteration (operator norms).
    pub power_iter_tol: f64,
    /// Iteration cap for the power iteration.
    pub power_iter_cap: usize,
    /// Newton root-finding: convergence tolerance.
    pub newton_tol: f64,
    /// Newton root-finding: iteration cap.
    pub newton_iters: usize,
    /// Newton root-finding: grid of starts is newton_grid × newton_grid.
    pub newton_grid: usize,
    /// Boundary sampling radius is 1 − boundary_eps.
    pub boundary_eps: f64,
    /// Mesh for sup-norm estimates / self-map certificates.
    pub sup_norm_mesh: usize,
    /// Relative threshold below which h(z) or ‖F(z)‖ counts as zero.
    pub zero_threshold_rel: f64,
    /// Margin (relative to 1) required by the self-map certificate.
    pub self_map_margin: f64,
    /// Composition residual admitted for a constructive subordination lift.
    pub subordination_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact_rel: 1e-12,
            power_iter_tol: 1e-8,
            power_iter_cap: 10_000,
            newton_tol: 1e-12,
            newton_iters: 50,
            newton_grid: 32,
            boundary_eps: 1e-6,
            sup_norm_mesh: 4096,
            zero_threshold_rel: 1e-8,
            self_map_margin: 0.0,
            subordination_residual: 1e-8,
        }
    }
}

/// Serde adapters for `Complex64` ↔ `[re, im]`.
pub mod cjson {
    pub mod complex {
        use num_complex::Complex64;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
            [v.re, v.im].serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
            let [re, im] = <[f64; 2]>::deserialize(d)?;
            Ok(Complex64::new(re, im))
        }
    }

    pub mod complex_vec {
        use num_complex::Complex64;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
            let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
            pairs.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
            let pairs = Vec::<[f64; 2]>::deserialize(d)?;
            Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
        }
    }

    pub mod complex_opt {
        use num_complex::Complex64;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
            v.map(|c| [c.re, c.im]).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<Complex64>, D::Error> {
            let pair = Option::<[f64; 2]>::deserialize(d)?;
            Ok(pair.map(|[re, im]| Complex64::new(re, im)))
        }
    }
}
