//! Cross-module invariants: the transitivity chain through a composition
//! operator, agreement between the subordination solver and the matrix
//! residual, the off-center-image regression, covering-image bounds for the
//! cardioid symbol, and the branch-collision mechanism of the Vandermonde
//! system.

use hardylab::geometry::{valence, PointStatus, SamplingPlan};
use hardylab::intertwine::{
    deddens_inner_x, eigen_field, intertwine_residual_with, vandermonde_system_check,
    ResidualOptions,
};
use hardylab::operators::weighted_composition_matrix;
use hardylab::series::PowerSeries;
use hardylab::spectra::{
    ee_membership, ee_power_check, subordination_solve, EeOptions, EeStatus, SubordinationOutcome,
};
use hardylab::symbol::SymbolSpec;
use hardylab::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Transitivity device: a verified Y with YT_φ = T_zY (φ inner), composed
/// with C_ω for z∘ω = z/2, intertwines T_φ with T_{z/2}; the chained
/// residual is bounded by the sum of the constituent residuals plus tails.
#[test]
fn transitivity_through_composition() {
    let n = 512usize;
    let phi = SymbolSpec::UnitSingular;
    let (y, _basis) = deddens_inner_x(&phi, n, 16).unwrap();

    let omega = SymbolSpec::from_shorthand("z/2").unwrap().to_series(n).unwrap();
    let c_omega = weighted_composition_matrix(&omega, &PowerSeries::one(n), n).unwrap();
    let x = hardylab::operators::OperatorMatrix::from_matrix(
        c_omega.entries.matmul(&y.entries),
        n,
        "C_omega Y",
    );

    let phi_series = phi.to_series(n).unwrap();
    let g_series = SymbolSpec::from_shorthand("z/2").unwrap().to_series(n).unwrap();
    let psi_series = SymbolSpec::identity().to_series(n).unwrap();
    let opts = ResidualOptions { soft_window: Some(n / 4), phi_sup_bound: Some(1.0) };

    let chain = intertwine_residual_with(&x, &phi_series, &g_series, opts).unwrap();
    let leg_y = intertwine_residual_with(&y, &phi_series, &psi_series, opts).unwrap();
    let leg_c = intertwine_residual_with(&c_omega, &psi_series, &g_series, opts).unwrap();

    // ‖C_ω‖ and ‖Y‖ are at most ~1 here; allow the computed tails on top.
    let budget = leg_y.residual * leg_c.norm_x.value.max(1.0)
        + leg_c.residual * leg_y.norm_x.value.max(1.0)
        + chain.tail_estimate.unwrap_or(0.0)
        + leg_y.tail_estimate.unwrap_or(0.0)
        + leg_c.tail_estimate.unwrap_or(0.0)
        + 1e-10;
    assert!(
        chain.residual <= budget,
        "chain residual {} exceeds budget {budget}",
        chain.residual
    );
}

/// Constructive monotonicity: whenever the solver produces a lift ω for
/// (φ, φ/λ), the matrix residual of C_ω between T_φ and T_{φ/λ} sits below
/// 1e−8 on the valid block — the two modules must agree.
#[test]
fn solver_and_matrix_residual_agree() {
    let n = 128usize;
    for (phi, lambda) in [
        (SymbolSpec::identity(), c(2.0, 0.0)),
        (SymbolSpec::from_shorthand("z+1").unwrap(), c(1.5, 0.0)),
        (SymbolSpec::cardioid(), c(10.0, 0.0)),
        (SymbolSpec::cardioid(), c(-8.0, 3.0)),
    ] {
        let inv = c(1.0, 0.0) / lambda;
        let psi = SymbolSpec::scale(inv, phi.clone());
        let out = subordination_solve(&phi, &psi, n).unwrap();
        let lift = match out {
            SubordinationOutcome::Found(l) => l,
            SubordinationOutcome::Failed(f) => {
                panic!("lift should exist for {phi:?}, λ = {lambda}: {f:?}")
            }
        };
        let omega = lift.omega_series();
        let x = weighted_composition_matrix(&omega, &PowerSeries::one(n), n).unwrap();
        let rep = intertwine_residual_with(
            &x,
            &phi.to_series(n).unwrap(),
            &psi.to_series(n).unwrap(),
            ResidualOptions::default(),
        )
        .unwrap();
        assert!(
            rep.residual <= 1e-8,
            "φ={phi:?}, λ={lambda}: residual {} above 1e-8",
            rep.residual
        );
    }
}

/// Off-center circular image (the decidable stand-in for an annulus not
/// centered at the origin): the necessary test passes only at λ = 1.
#[test]
fn off_center_image_pins_lambda_to_one() {
    let phi = SymbolSpec::from_shorthand("3+z").unwrap();
    let opts = EeOptions::default();
    for (lam, expect_necessary) in [
        (c(1.0, 0.0), true),
        (c(1.05, 0.0), false),
        (c(0.95, 0.0), false),
        (c(2.0, 0.0), false),
        (c(0.0, 1.0), false),
        (c(-1.0, 0.0), false),
        (c(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2), false),
    ] {
        let verdict = ee_membership(&phi, lam, opts).unwrap();
        assert_eq!(
            verdict.necessary_pass, expect_necessary,
            "λ = {lam}: necessary test mismatch"
        );
    }
}

/// Covering bounds for the cardioid symbol: every sampled |w| ≤ 0.99 is
/// covered (valence ≥ 1) and every covered sample lies in 2𝕌.
#[test]
fn cardioid_image_between_unit_and_double_disc() {
    let phi = SymbolSpec::cardioid();
    // Samples of the alleged inner disc.
    for k in 0..48 {
        let w = Complex64::from_polar(
            0.99 * ((k % 6) as f64 + 1.0) / 6.0,
            2.0 * std::f64::consts::PI * (k / 6) as f64 / 8.0 + 0.05,
        );
        let v = valence(&phi, w, 4096).unwrap();
        assert_ne!(v.status, PointStatus::Outside, "w = {w} escaped φ(𝕌)");
    }
    // Covered points stay inside 2𝕌: sample φ itself.
    let plan = SamplingPlan { radii: 16, angles: 64, max_radius: 1.0 - 1e-4 };
    for z in plan.points() {
        let w = phi.eval_unchecked(z);
        assert!(w.norm() < 2.0, "φ({z}) = {w} left 2𝕌");
    }
}

/// Eigenvector field for the inner-symbol intertwiner: F(z) = X*K_z is a
/// T_φ*-eigenvector field with eigenvalue conj(z), up to the cutoff tail.
#[test]
fn eigen_field_of_deddens_intertwiner() {
    let n = 1024usize;
    let cutoff = 16usize;
    let (x, basis) = deddens_inner_x(&SymbolSpec::UnitSingular, n, cutoff).unwrap();
    let z = c(0.5, 0.0);
    let rep = eigen_field(&x, &SymbolSpec::UnitSingular, &SymbolSpec::identity(), &[z]).unwrap();
    let sample = &rep.samples[0];
    assert!(!sample.in_zero_set);
    // Tail estimate: the field truncates the geometric series Σ z̄ⁿf_n at
    // the cutoff, so the relative residual is a |z|^cutoff tail plus the
    // basis defects.
    let max_tail = basis.tail_energy.iter().copied().fold(0.0, f64::max);
    let tail_estimate = z.norm().powi(cutoff as i32) / (1.0 - z.norm()) + basis.gram_defect
        + max_tail.sqrt();
    assert!(
        sample.relative_residual.unwrap() <= 10.0 * tail_estimate,
        "relative residual {} above 10× tail estimate {tail_estimate}",
        sample.relative_residual.unwrap()
    );
}

/// Power rule at the catalog symbols: the lift for (φ, λ) certifies λⁿ for
/// φⁿ with the same ω.
#[test]
fn power_check_on_unit_singular() {
    let rep =
        ee_power_check(&SymbolSpec::UnitSingular, c(2.0, 0.0), 2, EeOptions::default()).unwrap();
    assert_eq!(rep.base.status, EeStatus::In);
    assert!(rep.certified, "power residual {:?}", rep.power_residual);

    let rep3 = ee_power_check(&SymbolSpec::identity(), c(1.3, 0.2), 3, EeOptions::default())
        .unwrap();
    assert!(rep3.certified);
}

/// Collision mechanism: with ω₁ = ω₂ and weights that cancel, the sum
/// Y = C_{ω,1} + C_{ω,−1} + C_{ω'} intertwines while u(z) ≠ 0 — the
/// Vandermonde product V·u still vanishes because two branches collide, and
/// the report locates the colliding pair.
#[test]
fn vandermonde_collision_mechanism() {
    let omega = SymbolSpec::from_shorthand("z/2").unwrap();
    let omega_prime = SymbolSpec::from_shorthand("z/4").unwrap();
    let phi = SymbolSpec::from_shorthand("2z").unwrap();
    let psi = SymbolSpec::from_shorthand("z/2").unwrap(); // = φ∘ω′, not φ∘ω
    let samples: Vec<Complex64> =
        (0..12).map(|k| Complex64::from_polar(0.5, 0.5 * k as f64 + 0.1)).collect();
    let rep = vandermonde_system_check(
        &[omega.clone(), omega, omega_prime],
        &[
            SymbolSpec::polynomial_real(&[1.0]),
            SymbolSpec::polynomial_real(&[-1.0]),
            SymbolSpec::polynomial_real(&[1.0]),
        ],
        &phi,
        &psi,
        &samples,
    )
    .unwrap();
    assert!(rep.max_u_norm > 1e-3, "u must be nonzero: {}", rep.max_u_norm);
    assert!(
        rep.max_system_residual < 1e-12,
        "V·u must vanish through the collision: {}",
        rep.max_system_residual
    );
    assert!(
        rep.collisions.iter().any(|col| (col.j1, col.j2) == (0, 1)),
        "colliding branch pair (0, 1) must be located"
    );
}

/// The point spectrum of T_φ* for inner φ fills the disc (constructive
/// side): kernel eigenvectors K_a realize every value φ(a), and the chosen
/// ker-T_φ* vector realizes the eigenvalue 0 that the image 𝕌∖{0} misses.
#[test]
fn adjoint_point_spectrum_of_inner_symbol_fills_disc() {
    use hardylab::operators::toeplitz_apply_adjoint;
    use hardylab::spectra::{eigenvector_for_value, EigenvectorOutcome};

    let n = 1024usize;
    let phi = SymbolSpec::UnitSingular;
    // Nonzero eigenvalues through preimages.
    for alpha in [c(0.3, 0.0), c(-0.2, 0.4), c(0.0, -0.6)] {
        match eigenvector_for_value(&phi, alpha, n).unwrap() {
            EigenvectorOutcome::Found { residual, tail_bound, .. } => {
                assert!(residual <= tail_bound, "α = {alpha}: {residual} > {tail_bound}");
            }
            EigenvectorOutcome::NotFound => panic!("α = {alpha} has preimages in 𝕌"),
        }
    }
    // Eigenvalue 0 via ker T_φ*: the normalized projection of 1.
    let (_, basis) = deddens_inner_x(&phi, n, 4).unwrap();
    let series = phi.to_series(n).unwrap();
    let image = toeplitz_apply_adjoint(&series, &basis.f);
    let norm: f64 = image.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let max_tail = basis.tail_energy.iter().copied().fold(0.0, f64::max);
    assert!(norm <= 10.0 * max_tail.sqrt() + 1e-10, "‖T*f‖ = {norm}");
}

/// A univalent reparametrization of the cardioid image stays inside it:
/// ψ = φ∘(Möbius automorphism) has ψ(𝕌) = φ(𝕌), so the containment scan
/// sees no violations.
#[test]
fn moebius_reparametrization_stays_inside_cardioid() {
    let phi = SymbolSpec::cardioid();
    let psi = SymbolSpec::compose(phi.clone(), SymbolSpec::Moebius { a: c(0.3, 0.1) });
    let plan = SamplingPlan { radii: 24, angles: 96, max_radius: 1.0 - 1e-3 };
    let report = hardylab::geometry::image_contained(&psi, &phi, &plan, 4096).unwrap();
    assert!(report.pass, "violations: {:?}", report.violations.first());
    assert!(report.fraction_inside > 0.95, "inside fraction {}", report.fraction_inside);
}

/// Catalog behavior one mil past the region boundary: λ = 1 + 10⁻³ is in
/// for T_z and T_{z+1} and must not be admitted for T_{z+2} (out or, at
/// worst, undetermined — the violation margin is at the sampling scale).
#[test]
fn ee_catalog_resolves_near_unity() {
    let opts = EeOptions::default();
    let lam = c(1.001, 0.0);
    let vz = ee_membership(&SymbolSpec::identity(), lam, opts).unwrap();
    assert_eq!(vz.status, EeStatus::In);
    let vz1 = ee_membership(&SymbolSpec::from_shorthand("z+1").unwrap(), lam, opts).unwrap();
    assert_eq!(vz1.status, EeStatus::In);
    let vz2 = ee_membership(&SymbolSpec::from_shorthand("z+2").unwrap(), lam, opts).unwrap();
    assert_ne!(vz2.status, EeStatus::In, "λ = 1.001 wrongly admitted for z+2");
}

/// ee(T_{2+z²}) = {1}: the invertible-symbol catalog entry.
#[test]
fn ee_catalog_two_plus_z_squared() {
    let phi = SymbolSpec::from_shorthand("2+z^2").unwrap();
    let opts = EeOptions::default();
    let v1 = ee_membership(&phi, c(1.0, 0.0), opts).unwrap();
    assert_eq!(v1.status, EeStatus::In);
    for lam in [c(1.05, 0.0), c(0.95, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)] {
        let v = ee_membership(&phi, lam, opts).unwrap();
        assert_ne!(v.status, EeStatus::In, "λ = {lam} wrongly admitted");
        // All of these lie off the region boundary and must resolve out.
        assert_eq!(v.status, EeStatus::Out, "λ = {lam} should resolve out");
    }
}
