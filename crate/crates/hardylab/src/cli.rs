//! Command-line front end: parse symbol specs, dispatch operations, emit
//! JSON/CSV reports and SVG plots.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, malformed specs),
//! 2 typed mathematical failure (precondition rejected, containment
//! violated, lift construction refused).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::geometry::{image_contained, valence_raster, PointStatus, SamplingPlan};
use crate::intertwine::{
    deddens_inner_x, deddens_restricted_residual, intertwine_residual_with,
    planted_eigenvalue_matrix, recover_weighted_comp, vandermonde_system_check, IntertwineReport,
    ResidualOptions,
};
use crate::linalg::SplitMix64;
use crate::operators::{
    toeplitz_matrix, weighted_composition_matrix, wold_data, OperatorMatrix,
};
use crate::report::Tolerances;
use crate::series::PowerSeries;
use crate::spectra::{ee_scan, EeOptions, EeStatus, EeVerdict, SubordinationOutcome};
use crate::symbol::SymbolSpec;
use crate::{Error, Result};

#[derive(Parser)]
#[command(name = "hardylab", version, about = "Toeplitz intertwining and extended-eigenvalue laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Taylor coefficients of a symbol.
    Series(SeriesArgs),
    /// Build a Toeplitz or weighted-composition matrix.
    BuildOperator(BuildOperatorArgs),
    /// Residual of XT_φ − T_ψX on the valid block.
    CheckIntertwine(CheckIntertwineArgs),
    /// Rank-(cutoff+1) intertwiner between T_φ (φ inner) and the shift.
    Deddens(DeddensArgs),
    /// Recover (ω, h) pointwise from an intertwiner X.
    Recover(RecoverArgs),
    /// Vandermonde consistency system for sums of weighted compositions.
    Vandermonde(VandermondeArgs),
    /// Containment scan ψ(𝕌) ⊂ clos φ(𝕌).
    ImageTest(ImageTestArgs),
    /// Extended-eigenvalue scan over a λ-grid.
    EeScan(EeScanArgs),
    /// Wold kernel recursion residuals for an inner symbol.
    WoldCheck(WoldCheckArgs),
    /// Finite-dimensional intertwining partners from a planted eigenvalue.
    FiniteDim(FiniteDimArgs),
}

#[derive(Args)]
struct SeriesArgs {
    /// Symbol: shorthand (z, z2z, unit_singular, …), inline JSON, or @file.
    #[arg(long)]
    symbol: String,
    #[arg(short = 'n', long, default_value_t = 256)]
    truncation: usize,
    /// Also dump the coefficients as CSV (re,im per line).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BuildOperatorArgs {
    /// toeplitz | weighted-comp
    #[arg(long, default_value = "toeplitz")]
    kind: String,
    /// Symbol for the Toeplitz case.
    #[arg(long)]
    symbol: Option<String>,
    /// Self-map ω for the weighted-composition case.
    #[arg(long)]
    omega: Option<String>,
    /// Weight h for the weighted-composition case.
    #[arg(long, default_value = "1")]
    weight: String,
    #[arg(short = 'n', long, default_value_t = 256)]
    truncation: usize,
    /// Dump the matrix in the CSV format (`# label N valid_block` header).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CheckIntertwineArgs {
    #[arg(long)]
    phi: String,
    #[arg(long)]
    psi: String,
    /// Intertwiner: `identity`, `c<symbol>` (composition), `wc:<ω>:<h>`
    /// (weighted, shorthand symbols), or a `;`-separated sum of those.
    #[arg(long)]
    x: String,
    #[arg(short = 'n', long, default_value_t = 256)]
    truncation: usize,
    /// Compare this many columns when the exact block is empty.
    #[arg(long)]
    soft_window: Option<usize>,
    /// Sup-norm bound for φ enabling the soft-window tail estimate.
    #[arg(long)]
    phi_sup_bound: Option<f64>,
}

#[derive(Args)]
struct DeddensArgs {
    #[arg(long, default_value = "unit_singular")]
    phi: String,
    #[arg(short = 'n', long, default_value_t = 1024)]
    truncation: usize,
    #[arg(long, default_value_t = 16)]
    cutoff: usize,
}

#[derive(Args)]
struct RecoverArgs {
    /// Intertwiner, same syntax as check-intertwine.
    #[arg(long)]
    x: String,
    #[arg(short = 'n', long, default_value_t = 256)]
    truncation: usize,
    #[arg(long, default_value_t = 4)]
    radii: usize,
    #[arg(long, default_value_t = 8)]
    angles: usize,
    #[arg(long, default_value_t = 0.7)]
    max_radius: f64,
}

#[derive(Args)]
struct VandermondeArgs {
    #[arg(long)]
    phi: String,
    #[arg(long)]
    psi: String,
    /// `;`-separated list of self-map symbols ω_j.
    #[arg(long)]
    omegas: String,
    /// `;`-separated list of weight symbols h_j.
    #[arg(long)]
    weights: String,
    #[arg(long, default_value_t = 32)]
    samples: usize,
}

#[derive(Args)]
struct ImageTestArgs {
    #[arg(long)]
    psi: String,
    #[arg(long)]
    phi: String,
    #[arg(long, default_value_t = 4096)]
    mesh: usize,
    #[arg(long, default_value_t = 64)]
    radii: usize,
    #[arg(long, default_value_t = 256)]
    angles: usize,
    #[arg(long, default_value_t = 0.999)]
    max_radius: f64,
    /// SVG plot: φ boundary curve with ψ-sample verdicts.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// CSV raster (x, y, valence, status) of the φ-image membership.
    #[arg(long)]
    raster_csv: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    raster_res: usize,
}

#[derive(Args)]
struct EeScanArgs {
    #[arg(long)]
    symbol: String,
    /// `default` (64×64 over [−6,6]²) or `x0,x1,y0,y1,n`.
    #[arg(long, default_value = "default")]
    grid: String,
    /// Explicit λ list `re,im;re,im;…` overriding the grid.
    #[arg(long)]
    lambdas: Option<String>,
    /// Lift series truncation.
    #[arg(short = 'n', long, default_value_t = 64)]
    truncation: usize,
    /// Boundary mesh for the φ-region.
    #[arg(long, default_value_t = 2048)]
    mesh: usize,
    #[arg(long, default_value_t = 8)]
    radii: usize,
    #[arg(long, default_value_t = 32)]
    angles: usize,
    /// SVG raster of the verdicts over the λ-grid.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct WoldCheckArgs {
    #[arg(long, default_value = "unit_singular")]
    psi: String,
    #[arg(short = 'n', long, default_value_t = 1024)]
    truncation: usize,
    #[arg(long, default_value_t = 40)]
    cutoff: usize,
    /// Highest derivative order N of the kernels K_N.
    #[arg(long, default_value_t = 4)]
    orders: usize,
    /// λ samples `re,im;re,im;…`.
    #[arg(long, default_value = "0,0;0.3,0;0,0.6")]
    lambdas: String,
}

#[derive(Args)]
struct FiniteDimArgs {
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Distinguishes flag/spec mistakes (exit 1) from typed mathematical
/// rejections (exit 2).
enum CliError {
    Usage(Error),
    Math(Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(r: Result<T>) -> CliResult<T> {
    r.map_err(CliError::Usage)
}

fn math<T>(r: Result<T>) -> CliResult<T> {
    r.map_err(CliError::Math)
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    command: String,
    tolerances: Tolerances,
    result: T,
}

fn emit<T: Serialize>(out: &Option<PathBuf>, command: &str, result: T) -> Result<()> {
    let envelope = Envelope {
        command: command.to_string(),
        tolerances: Tolerances::default(),
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn main_entry<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    if let Ok(threads) = std::env::var("HARDYLAB_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version go to stdout with success.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(e)) => {
            eprintln!("usage error: {e}");
            1
        }
        Err(CliError::Math(e)) => {
            eprintln!("rejected: {e}");
            2
        }
    }
}

fn validate_truncation(n: usize) -> Result<()> {
    if !(16..=8192).contains(&n) {
        return Err(Error::Invalid(format!("truncation N = {n} outside [16, 8192]")));
    }
    Ok(())
}

fn validate_mesh(m: usize) -> Result<()> {
    if !(64..=(1 << 20)).contains(&m) {
        return Err(Error::Invalid(format!("mesh M = {m} outside [64, 2^20]")));
    }
    Ok(())
}

fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Invalid(format!("expected re,im pair, got '{pair}'")));
            }
            let re: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad float '{}'", parts[0])))?;
            let im: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad float '{}'", parts[1])))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

fn parse_symbol_list(text: &str) -> Result<Vec<SymbolSpec>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(SymbolSpec::parse_arg)
        .collect()
}

/// Intertwiner shorthand: `identity`, `c<symbol>`, `wc:<ω>:<h>`, or a
/// `;`-separated sum.
fn parse_intertwiner(arg: &str, n: usize) -> Result<OperatorMatrix> {
    let mut acc: Option<OperatorMatrix> = None;
    for term in arg.split(';').filter(|s| !s.trim().is_empty()) {
        let term = term.trim();
        let m = if term == "I" || term == "id" || term == "identity" {
            OperatorMatrix::identity(n)
        } else if let Some(rest) = term.strip_prefix("wc:") {
            let parts: Vec<&str> = rest.splitn(2, ':').collect();
            if parts.len() != 2 {
                return Err(Error::Invalid(format!("expected wc:<omega>:<h>, got '{term}'")));
            }
            let omega = SymbolSpec::parse_arg(parts[0])?.to_series(n)?;
            let h = SymbolSpec::parse_arg(parts[1])?.to_series(n)?;
            weighted_composition_matrix(&omega, &h, n)?
        } else if let Some(rest) = term.strip_prefix('c') {
            let omega = SymbolSpec::parse_arg(rest)?.to_series(n)?;
            weighted_composition_matrix(&omega, &PowerSeries::one(n), n)?
        } else {
            return Err(Error::Invalid(format!(
                "unrecognized intertwiner term '{term}' (want identity, c<symbol>, or wc:<ω>:<h>)"
            )));
        };
        acc = Some(match acc {
            None => m,
            Some(prev) => prev.add(&m)?,
        });
    }
    acc.ok_or_else(|| Error::Invalid("empty intertwiner".into()))
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Series(args) => run_series(args, &cli.out),
        Command::BuildOperator(args) => run_build_operator(args, &cli.out),
        Command::CheckIntertwine(args) => run_check_intertwine(args, &cli.out),
        Command::Deddens(args) => run_deddens(args, &cli.out),
        Command::Recover(args) => run_recover(args, &cli.out),
        Command::Vandermonde(args) => run_vandermonde(args, &cli.out),
        Command::ImageTest(args) => run_image_test(args, &cli.out),
        Command::EeScan(args) => run_ee_scan(args, &cli.out),
        Command::WoldCheck(args) => run_wold_check(args, &cli.out),
        Command::FiniteDim(args) => run_finite_dim(args, &cli.out),
    }
}

#[derive(Serialize)]
struct SeriesReport {
    symbol: SymbolSpec,
    truncation: usize,
    #[serde(with = "crate::report::cjson::complex_vec")]
    coefficients: Vec<Complex64>,
    exact_degree: crate::series::ExactDegree,
    sup_norm_estimate: crate::series::SupNormEstimate,
    accuracy_note: String,
}

fn run_series(args: SeriesArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    usage(validate_truncation(args.truncation))?;
    let spec = usage(SymbolSpec::parse_arg(&args.symbol))?;
    let series = math(spec.to_series(args.truncation))?;
    let est = spec.sup_norm_estimate(crate::symbol::SUP_NORM_MESH, crate::symbol::BOUNDARY_EPS);
    let note = match series.exact_degree() {
        crate::series::ExactDegree::Poly(d) => {
            format!("polynomial of degree {d}: coefficients exact")
        }
        crate::series::ExactDegree::Infinite => format!(
            "coefficients from closed-form recentring; evaluation tail at |z| = ρ bounded by {:.3e}·ρ^{}/(1−ρ)",
            est.value,
            args.truncation
        ),
    };
    if let Some(path) = &args.csv {
        let mut text = String::new();
        for c in series.coeffs() {
            text.push_str(&format!("{:?},{:?}\n", c.re, c.im));
        }
        math(std::fs::write(path, text).map_err(Error::from))?;
    }
    let report = SeriesReport {
        symbol: spec,
        truncation: args.truncation,
        coefficients: series.coeffs().to_vec(),
        exact_degree: series.exact_degree(),
        sup_norm_estimate: est,
        accuracy_note: note,
    };
    math(emit(out, "series", report))?;
    Ok(0)
}

#[derive(Serialize)]
struct BuildOperatorReport {
    kind: String,
    label: String,
    truncation: usize,
    valid_block: usize,
    operator_norm: crate::linalg::NormEstimate,
}

fn run_build_operator(args: BuildOperatorArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    usage(validate_truncation(args.truncation))?;
    let n = args.truncation;
    let op = match args.kind.as_str() {
        "toeplitz" => {
            let sym = usage(
                args.symbol
                    .as_deref()
                    .ok_or_else(|| Error::Invalid("toeplitz needs --symbol".into()))
                    .and_then(SymbolSpec::parse_arg),
            )?;
            let series = math(sym.to_series(n))?;
            math(toeplitz_matrix(&series, n))?
        }
        "weighted-comp" => {
            let omega = usage(
                args.omega
                    .as_deref()
                    .ok_or_else(|| Error::Invalid("weighted-comp needs --omega".into()))
                    .and_then(SymbolSpec::parse_arg),
            )?;
            let weight = usage(SymbolSpec::parse_arg(&args.weight))?;
            let omega_series = math(omega.to_series(n))?;
            let weight_series = math(weight.to_series(n))?;
            math(weighted_composition_matrix(&omega_series, &weight_series, n))?
        }
        other => {
            return Err(CliError::Usage(Error::Invalid(format!(
                "unknown operator kind '{other}' (toeplitz | weighted-comp)"
            ))))
        }
    };
    if let Some(path) = &args.csv {
        math(std::fs::write(path, op.to_csv()).map_err(Error::from))?;
    }
    let report = BuildOperatorReport {
        kind: args.kind,
        label: op.label.clone(),
        truncation: op.truncation,
        valid_block: op.valid_block,
        operator_norm: op.operator_norm(),
    };
    math(emit(out, "build-operator", report))?;
    Ok(0)
}

#[derive(Serialize)]
struct CheckIntertwineReport {
    phi: SymbolSpec,
    psi: SymbolSpec,
    intertwiner: String,
    truncation: usize,
    report: IntertwineReport,
}

fn run_check_intertwine(args: CheckIntertwineArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    usage(validate_truncation(args.truncation))?;
    let n = args.truncation;
    let phi = usage(SymbolSpec::parse_arg(&args.phi))?;
    let psi = usage(SymbolSpec::parse_arg(&args.psi))?;
    let x = usage(parse_intertwiner(&args.x, n))?;
    let phi_series = math(phi.to_series(n))?;
    let psi_series = math(psi.to_series(n))?;
    let report = math(intertwine_residual_with(
        &x,
        &phi_series,
        &psi_series,
        ResidualOptions { soft_window: args.soft_window, phi_sup_bound: args.phi_sup_bound },
    ))?;
    let wrapped = CheckIntertwineReport {
        phi,
        psi,
        intertwiner: args.x,
        truncation: n,
        report,
    };
    math(emit(out, "check-intertwine", wrapped))?;
    Ok(0)
}

#[derive(Serialize)]
struct DeddensReport {
    phi: SymbolSpec,
    truncation: usize,
    cutoff: usize,
    gram_defect: f64,
    max_tail_energy: f64,
    tail_energy: Vec<f64>,
    restricted_residual: f64,
    x_norm: crate::linalg::NormEstimate,
}

fn run_deddens(args: DeddensArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    usage(validate_truncation(args.truncation))?;
    let phi = usage(SymbolSpec::parse_arg(&args.phi))?;
    let (x, basis) = math(deddens_inner_x(&phi, args.truncation, args.cutoff))?;
    let restricted = math(deddens_restricted_residual(&x, &basis, &phi))?;
    let report = DeddensReport {
        phi,
        truncation: args.truncation,
        cutoff: args.cutoff,
        gram_defect: basis.gram_defect,
        max_tail_energy: basis.tail_energy.iter().copied().fold(0.0, f64::max),
        tail_energy: basis.tail_energy.clone(),
        restricted_residual: restricted,
        x_norm: x.operator_norm(),
    };
    math(emit(out, "deddens", report))?;
    Ok(0)
}

fn sample_grid(radii: usize, angles: usize, max_radius: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(radii * angles);
    for i in 0..radii {
        let r = max_radius * (i as f64 + 1.0) / radii as f64;
        for j in 0..angles {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / angles as f64 + 0.1;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

fn run_recover(args: RecoverArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    usage(validate_truncation(args.truncation))?;
    let x = usage(parse_intertwiner(&args.x, args.truncation))?;
    let samples = sample_grid(args.radii, args.angles, args.max_radius);
    let report = math(recover_weighted_comp(&x, &samples))?;
    math(emit(out, "recover", report))?;
    Ok(0)
}

fn run_vandermonde(args: VandermondeArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    let phi = usage(SymbolSpec::parse_arg(&args.phi))?;
    let psi = usage(SymbolSpec::parse_arg(&args.psi))?;
    let omegas = usage(parse_symbol_list(&args.omegas))?;
    let weights = usage(parse_symbol_list(&args.weights))?;
    let samples: Vec<Complex64> = (0..args.samples)
        .map(|k| Complex64::from_polar(0.6, 2.0 * std::f64::consts::PI * k as f64 / args.samples as f64 + 0.05))
        .collect();
    let report = math(vandermonde_system_check(&omegas, &weights, &phi, &psi, &samples))?;
    math(emit(out, "vandermonde", report))?;
    Ok(0)
}

#[derive(Serialize)]
struct ImageTestReport {
    psi: SymbolSpec,
    phi: SymbolSpec,
    containment: crate::geometry::ContainmentReport,
}

fn run_image_test(args: ImageTestArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    usage(validate_mesh(args.mesh))?;
    let psi = usage(SymbolSpec::parse_arg(&args.psi))?;
    let phi = usage(SymbolSpec::parse_arg(&args.phi))?;
    let plan = SamplingPlan { radii: args.radii, angles: args.angles, max_radius: args.max_radius };
    let containment = math(image_contained(&psi, &phi, &plan, args.mesh))?;

    if args.svg.is_some() || args.raster_csv.is_some() {
        let curve = math(crate::geometry::boundary_curve(
            &phi,
            args.mesh,
            1.0 - crate::symbol::BOUNDARY_EPS,
        ))?;
        let (mut xmin, mut xmax, mut ymin, mut ymax) =
            (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for s in &curve.samples {
            xmin = xmin.min(s.re);
            xmax = xmax.max(s.re);
            ymin = ymin.min(s.im);
            ymax = ymax.max(s.im);
        }
        let pad = 0.15 * ((xmax - xmin).max(ymax - ymin)).max(1e-6);
        let bounds = (xmin - pad, xmax + pad, ymin - pad, ymax + pad);
        let raster = math(valence_raster(&phi, bounds, args.raster_res, args.raster_res, args.mesh))?;
        if let Some(path) = &args.raster_csv {
            let mut text = String::from("x,y,valence,status\n");
            for p in &raster {
                let status = match p.status {
                    PointStatus::Inside => "inside",
                    PointStatus::Outside => "outside",
                    PointStatus::BoundaryUnresolved => "boundary-unresolved",
                };
                text.push_str(&format!("{:?},{:?},{},{}\n", p.x, p.y, p.valence, status));
            }
            math(std::fs::write(path, text).map_err(Error::from))?;
        }
        if let Some(path) = &args.svg {
            let mut plot = crate::svg::SvgPlot::new(bounds.0, bounds.1, bounds.2, bounds.3);
            let cell_x = (bounds.1 - bounds.0) / args.raster_res as f64;
            let cell_y = (bounds.3 - bounds.2) / args.raster_res as f64;
            plot.add_point_raster(&raster, cell_x, cell_y);
            plot.add_curve(&curve.samples, "#222222");
            let psi_points: Vec<(Complex64, PointStatus)> = {
                let region = math(crate::geometry::ImageRegion::build(&phi, args.mesh))?;
                plan.points()
                    .iter()
                    .map(|&z| {
                        let v = psi.eval_unchecked(z);
                        (v, region.open_status(v))
                    })
                    .collect()
            };
            plot.add_samples(&psi_points, 1.5);
            plot.legend_entry(crate::svg::status_color(PointStatus::Inside), "inside");
            plot.legend_entry(crate::svg::status_color(PointStatus::Outside), "outside");
            plot.legend_entry(
                crate::svg::status_color(PointStatus::BoundaryUnresolved),
                "boundary-unresolved",
            );
            math(std::fs::write(path, plot.finish()).map_err(Error::from))?;
        }
    }

    let pass = containment.pass;
    let report = ImageTestReport { psi, phi, containment };
    math(emit(out, "image-test", report))?;
    Ok(if pass { 0 } else { 2 })
}

/// Compact per-λ verdict row matching the report schema
/// {lambda, necessary, constructive, status}.
#[derive(Serialize)]
struct EeScanRow {
    #[serde(with = "crate::report::cjson::complex")]
    lambda: Complex64,
    necessary: bool,
    constructive: bool,
    status: EeStatus,
    method: Option<crate::spectra::SubordinationMethod>,
    certificate: Option<f64>,
    residual: Option<f64>,
    failure: Option<crate::spectra::SubordinationFailure>,
}

impl From<&EeVerdict> for EeScanRow {
    fn from(v: &EeVerdict) -> Self {
        let (method, certificate, residual, failure) = match &v.constructive {
            SubordinationOutcome::Found(r) => (
                Some(r.method),
                Some(r.certificate.value),
                Some(r.composition_residual),
                None,
            ),
            SubordinationOutcome::Failed(f) => (None, None, None, Some(*f)),
        };
        EeScanRow {
            lambda: v.lambda,
            necessary: v.necessary_pass,
            constructive: v.constructive_pass,
            status: v.status,
            method,
            certificate,
            residual,
            failure,
        }
    }
}

#[derive(Serialize)]
struct EeScanReport {
    symbol: SymbolSpec,
    truncation: usize,
    grid: String,
    /// Meshes actually used by this scan (they override the global ledger
    /// defaults).
    boundary_mesh: usize,
    plan_radii: usize,
    plan_angles: usize,
    certificate_mesh: usize,
    residual_tolerance: f64,
    rows: Vec<EeScanRow>,
    in_count: usize,
    out_count: usize,
    undetermined_count: usize,
}

fn run_ee_scan(args: EeScanArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    usage(validate_truncation(args.truncation.max(16)))?;
    usage(validate_mesh(args.mesh))?;
    let spec = usage(SymbolSpec::parse_arg(&args.symbol))?;
    let (lambdas, cell) = if let Some(list) = &args.lambdas {
        (usage(parse_complex_list(list))?, 0.25)
    } else if args.grid == "default" {
        (square_grid(-6.0, 6.0, -6.0, 6.0, 64), 12.0 / 64.0)
    } else {
        let parts: Vec<&str> = args.grid.split(',').collect();
        if parts.len() != 5 {
            return Err(CliError::Usage(Error::Invalid(
                "grid must be 'default' or 'x0,x1,y0,y1,n'".into(),
            )));
        }
        let nums: Vec<f64> = usage(
            parts
                .iter()
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Invalid(format!("bad grid component '{p}'")))
                })
                .collect::<Result<Vec<f64>>>(),
        )?;
        let n = nums[4] as usize;
        (
            square_grid(nums[0], nums[1], nums[2], nums[3], n),
            (nums[1] - nums[0]) / n.max(1) as f64,
        )
    };
    let opts = EeOptions {
        n: args.truncation,
        mesh: args.mesh,
        plan: SamplingPlan { radii: args.radii, angles: args.angles, max_radius: 1.0 - 1e-3 },
        solve: crate::spectra::SolveOptions {
            cert_mesh: 512,
            curve_mesh: args.mesh.min(2048),
            residual_tol: 1e-8,
        },
    };
    let report = math(ee_scan(&spec, &lambdas, opts))?;
    let rows: Vec<EeScanRow> = report.verdicts.iter().map(EeScanRow::from).collect();
    let in_count = rows.iter().filter(|r| r.status == EeStatus::In).count();
    let out_count = rows.iter().filter(|r| r.status == EeStatus::Out).count();
    let undetermined_count = rows.len() - in_count - out_count;

    if let Some(path) = &args.svg {
        let (x0, x1, y0, y1) = lambdas.iter().fold(
            (f64::MAX, f64::MIN, f64::MAX, f64::MIN),
            |(a, b, c, d), l| (a.min(l.re), b.max(l.re), c.min(l.im), d.max(l.im)),
        );
        let pad = cell;
        let mut plot = crate::svg::SvgPlot::new(x0 - pad, x1 + pad, y0 - pad, y1 + pad);
        let statuses: Vec<EeStatus> = rows.iter().map(|r| r.status).collect();
        plot.add_ee_raster(&lambdas, &statuses, cell);
        plot.legend_entry(crate::svg::ee_color(EeStatus::In), "in ee(T)");
        plot.legend_entry(crate::svg::ee_color(EeStatus::Out), "out");
        plot.legend_entry(crate::svg::ee_color(EeStatus::Undetermined), "undetermined");
        math(std::fs::write(path, plot.finish()).map_err(Error::from))?;
    }

    let wrapped = EeScanReport {
        symbol: spec,
        truncation: args.truncation,
        grid: args.grid,
        boundary_mesh: opts.mesh,
        plan_radii: opts.plan.radii,
        plan_angles: opts.plan.angles,
        certificate_mesh: opts.solve.cert_mesh,
        residual_tolerance: opts.solve.residual_tol,
        rows,
        in_count,
        out_count,
        undetermined_count,
    };
    math(emit(out, "ee-scan", wrapped))?;
    Ok(0)
}

fn square_grid(x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n * n);
    for iy in 0..n {
        let im = y0 + (y1 - y0) * (iy as f64 + 0.5) / n as f64;
        for ix in 0..n {
            let re = x0 + (x1 - x0) * (ix as f64 + 0.5) / n as f64;
            out.push(Complex64::new(re, im));
        }
    }
    out
}

#[derive(Serialize)]
struct WoldCheckReport {
    psi: SymbolSpec,
    truncation: usize,
    cutoff: usize,
    certificate: crate::operators::InnerCertificate,
    wbasis_size: usize,
    rows: Vec<WoldRow>,
    coefficient_recursion_exact: bool,
}

#[derive(Serialize)]
struct WoldRow {
    #[serde(with = "crate::report::cjson::complex")]
    lambda: Complex64,
    order: usize,
    residual: f64,
    bound: f64,
    cutoff_term: f64,
    pass: bool,
}

fn run_wold_check(args: WoldCheckArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    usage(validate_truncation(args.truncation))?;
    let psi = usage(SymbolSpec::parse_arg(&args.psi))?;
    let lambdas = usage(parse_complex_list(&args.lambdas))?;
    let wd = math(wold_data(&psi, args.truncation, args.cutoff, args.orders, 2))?;
    let mut rows = Vec::new();
    let mut all_pass = true;
    for &lam in &lambdas {
        for order in 0..=args.orders {
            let r = wd.recursion_residual(order, lam, 0);
            let pass = r.residual <= r.bound * (1.0 + 1e-9) + 1e-9;
            all_pass &= pass;
            rows.push(WoldRow {
                lambda: lam,
                order,
                residual: r.residual,
                bound: r.bound,
                cutoff_term: r.cutoff_term,
                pass,
            });
        }
    }
    let mut recursion_exact = true;
    for order in 1..=20usize {
        for k in 1..=20usize {
            let lhs = crate::operators::wold_coefficient(order, k)
                - crate::operators::wold_coefficient(order, k - 1);
            let rhs = order as u128 * crate::operators::wold_coefficient(order - 1, k);
            recursion_exact &= lhs == rhs;
        }
    }
    let report = WoldCheckReport {
        psi,
        truncation: args.truncation,
        cutoff: args.cutoff,
        certificate: wd.certificate.clone(),
        wbasis_size: wd.wbasis.len(),
        rows,
        coefficient_recursion_exact: recursion_exact,
    };
    math(emit(out, "wold-check", report))?;
    Ok(if all_pass && recursion_exact { 0 } else { 2 })
}

#[derive(Serialize)]
struct FiniteDimReport {
    dim: usize,
    trials: usize,
    seed: u64,
    failures: usize,
    max_residual: f64,
}

fn run_finite_dim(args: FiniteDimArgs, out: &Option<PathBuf>) -> CliResult<i32> {
    if args.dim < 2 || args.dim > 32 {
        return Err(CliError::Usage(Error::Invalid("dim must be in [2, 32]".into())));
    }
    let mut rng = SplitMix64::new(args.seed);
    let mut failures = 0usize;
    let mut max_residual = 0.0f64;
    for _ in 0..args.trials {
        let lambda = rng.complex();
        let a = planted_eigenvalue_matrix(&mut rng, args.dim, lambda);
        let b = planted_eigenvalue_matrix(&mut rng, args.dim, lambda);
        match crate::intertwine::finite_dim_partner(&a, &b, lambda) {
            Ok(partner) => {
                let scale = a.max_abs().max(b.max_abs()).max(1.0);
                let r = partner.residual_ay.max(partner.residual_yb);
                max_residual = max_residual.max(r / scale);
                if r > 1e-8 * scale || partner.y.frobenius_norm() == 0.0 {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    let report = FiniteDimReport {
        dim: args.dim,
        trials: args.trials,
        seed: args.seed,
        failures,
        max_residual,
    };
    math(emit(out, "finite-dim", report))?;
    Ok(if failures == 0 { 0 } else { 2 })
}
