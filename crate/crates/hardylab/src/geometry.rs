//! Image geometry of symbols: sampled boundary curves φ(r·∂𝕌), valence via
//! the argument principle, containment scans ψ(𝕌) ⊂ clos φ(𝕌), and the
//! polar cardioid of the z²+z catalog entry.
//!
//! The winding number of the sampled closed polyline around w counts the
//! preimages of w in r𝕌 with multiplicity. Points too close to the curve
//! for the mesh to decide are reported as `boundary-unresolved`, never
//! silently classified; "too close" is 2× the longest polyline edge.
//! Classification is confirmed at a second radius (1+r)/2 — membership in
//! the open image must be stable as the sampling circle grows.
//!
//! Batch scans (rasters, λ-grids) go through a [`CurveIndex`]: a uniform
//! bucket grid storing the polyline edges per cell plus a precomputed
//! winding number for every curve-free cell, making a membership query O(1)
//! away from the curve.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::report::cjson;
use crate::symbol::{SymbolSpec, BOUNDARY_EPS};
use crate::{Error, Result};

/// Sampled image boundary φ(r·e^{iθ_j}) at M equispaced angles.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    pub samples: Vec<Complex64>,
    pub spec: SymbolSpec,
    pub mesh: usize,
    pub radius: f64,
}

pub fn boundary_curve(spec: &SymbolSpec, mesh: usize, radius: f64) -> Result<BoundaryCurve> {
    if mesh < 64 {
        return Err(Error::Invalid("boundary mesh must be at least 64".into()));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Invalid("sampling radius must satisfy 0 < r < 1".into()));
    }
    let samples = (0..mesh)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / mesh as f64;
            spec.eval_unchecked(Complex64::from_polar(radius, theta))
        })
        .collect();
    Ok(BoundaryCurve { samples, spec: spec.clone(), mesh, radius })
}

impl BoundaryCurve {
    /// Longest polyline edge; the resolution scale of this sampling.
    pub fn max_edge_len(&self) -> f64 {
        let m = self.samples.len();
        (0..m)
            .map(|i| (self.samples[(i + 1) % m] - self.samples[i]).norm())
            .fold(0.0, f64::max)
    }

    /// Measured deviation between this polyline and the doubly-refined
    /// curve: the sagitta of each chord against the true midpoint sample.
    /// Any point farther from the polyline than this deviation has the same
    /// winding number for the polyline and for the true curve (they are
    /// homotopic in its complement).
    pub fn deviation_estimate(&self) -> f64 {
        let m = self.samples.len();
        let mut worst = 0.0f64;
        for i in 0..m {
            let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / m as f64;
            let mid = self.spec.eval_unchecked(Complex64::from_polar(self.radius, theta));
            let d = segment_distance(self.samples[i], self.samples[(i + 1) % m], mid);
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Unresolved band: twice the measured polyline deviation plus a float
    /// floor on the curve scale.
    pub fn resolution_threshold(&self) -> f64 {
        let scale = self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max).max(1.0);
        2.0 * self.deviation_estimate() + 1e-13 * scale
    }

    /// Raw winding number around w by signed crossing counts (no trig).
    pub fn winding_number(&self, w: Complex64) -> i32 {
        winding_number(&self.samples, w)
    }

    /// Exact distance from w to the sampled polyline.
    pub fn distance_to(&self, w: Complex64) -> f64 {
        let m = self.samples.len();
        let mut best = f64::INFINITY;
        for i in 0..m {
            let d = segment_distance(self.samples[i], self.samples[(i + 1) % m], w);
            if d < best {
                best = d;
            }
        }
        best
    }
}

fn winding_number(samples: &[Complex64], w: Complex64) -> i32 {
    let m = samples.len();
    let mut wn = 0i32;
    for i in 0..m {
        let a = samples[i];
        let b = samples[(i + 1) % m];
        if a.im <= w.im {
            if b.im > w.im && is_left(a, b, w) > 0.0 {
                wn += 1;
            }
        } else if b.im <= w.im && is_left(a, b, w) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

#[inline]
fn is_left(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    (b.re - a.re) * (w.im - a.im) - (w.re - a.re) * (b.im - a.im)
}

fn segment_distance(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = ((w.re - a.re) * ab.re + (w.im - a.im) * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    let p = a + ab * t;
    (w - p).norm()
}

/// Per-point classification against a sampled image region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointStatus {
    /// Covered k-fold: winding number k ≥ 1 at both confirmation radii.
    Inside,
    Outside,
    /// Within the mesh threshold of the sampled curve, or unstable between
    /// the two confirmation radii.
    BoundaryUnresolved,
}

/// Verdict for one query point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegionVerdict {
    #[serde(with = "cjson::complex")]
    pub point: Complex64,
    /// Preimage count with multiplicity (0 when outside or unresolved).
    pub valence: u32,
    /// Distance from the point to the sampled curve (exact for single
    /// queries, a lower bound in batch scans).
    pub margin: f64,
    pub status: PointStatus,
}

/// Winding-number valence of w relative to φ(r𝕌), with the dual-radius
/// confirmation and the mesh-dependent unresolved band.
pub fn valence(spec: &SymbolSpec, w: Complex64, mesh: usize) -> Result<RegionVerdict> {
    let r = 1.0 - BOUNDARY_EPS;
    let curve = boundary_curve(spec, mesh, r)?;
    let confirm = boundary_curve(spec, mesh, 0.5 * (1.0 + r))?;
    // Each curve's winding is trustworthy only when w sits farther from it
    // than that curve's own polyline deviation.
    let margin = curve.distance_to(w);
    if margin < curve.resolution_threshold()
        || confirm.distance_to(w) < confirm.resolution_threshold()
    {
        return Ok(RegionVerdict { point: w, valence: 0, margin, status: PointStatus::BoundaryUnresolved });
    }
    let w1 = curve.winding_number(w);
    let w2 = confirm.winding_number(w);
    if w1 != w2 || w1 < 0 {
        return Ok(RegionVerdict { point: w, valence: 0, margin, status: PointStatus::BoundaryUnresolved });
    }
    if w1 == 0 {
        Ok(RegionVerdict { point: w, valence: 0, margin, status: PointStatus::Outside })
    } else {
        Ok(RegionVerdict { point: w, valence: w1 as u32, margin, status: PointStatus::Inside })
    }
}

/// Membership in the open cardioid image of z² + z, by the polar equation
/// r < 2·cos(θ/3), |θ| ≤ π.
pub fn cardioid_membership(w: Complex64) -> bool {
    let r = w.norm();
    let theta = w.im.atan2(w.re);
    r < 2.0 * (theta / 3.0).cos()
}

/// Uniform bucket grid over a boundary curve for O(1) membership queries.
pub struct CurveIndex {
    samples: Vec<Complex64>,
    x0: f64,
    y0: f64,
    cell: f64,
    grid: usize,
    /// Edge ids intersecting each cell (most cells are empty).
    cells: Vec<Vec<u32>>,
    /// Winding number at the center of each curve-free cell (constant over
    /// the whole cell since the curve does not enter it).
    cell_winding: Vec<i32>,
    /// Unresolved band: 2× the longest edge.
    pub threshold: f64,
    /// Neighborhood radius (in cells) that covers the threshold.
    reach: usize,
}

impl CurveIndex {
    pub fn build(curve: &BoundaryCurve, grid: usize) -> CurveIndex {
        let samples = curve.samples.clone();
        let m = samples.len();
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for s in &samples {
            xmin = xmin.min(s.re);
            xmax = xmax.max(s.re);
            ymin = ymin.min(s.im);
            ymax = ymax.max(s.im);
        }
        let span = ((xmax - xmin).max(ymax - ymin)).max(1e-12);
        let pad = 0.02 * span;
        let x0 = xmin - pad;
        let y0 = ymin - pad;
        let cell = (span + 2.0 * pad) / grid as f64;

        let mut cells = vec![Vec::new(); grid * grid];
        for e in 0..m {
            let a = samples[e];
            let b = samples[(e + 1) % m];
            let exmin = ((a.re.min(b.re) - x0) / cell).floor().max(0.0) as usize;
            let exmax = (((a.re.max(b.re) - x0) / cell).floor() as usize).min(grid - 1);
            let eymin = ((a.im.min(b.im) - y0) / cell).floor().max(0.0) as usize;
            let eymax = (((a.im.max(b.im) - y0) / cell).floor() as usize).min(grid - 1);
            for gy in eymin..=eymax {
                for gx in exmin..=exmax {
                    cells[gy * grid + gx].push(e as u32);
                }
            }
        }

        // Scanline pass: winding at every cell center of a row from the
        // sorted horizontal-line crossings of that row.
        let mut cell_winding = vec![0i32; grid * grid];
        for gy in 0..grid {
            let yc = y0 + (gy as f64 + 0.5) * cell;
            let mut crossings: Vec<(f64, i32)> = Vec::new();
            for e in 0..m {
                let a = samples[e];
                let b = samples[(e + 1) % m];
                if a.im <= yc && b.im > yc {
                    let x = a.re + (yc - a.im) * (b.re - a.re) / (b.im - a.im);
                    crossings.push((x, 1));
                } else if a.im > yc && b.im <= yc {
                    let x = a.re + (yc - a.im) * (b.re - a.re) / (b.im - a.im);
                    crossings.push((x, -1));
                }
            }
            crossings.sort_by(|p, q| p.0.total_cmp(&q.0));
            // Winding at x = Σ directions of crossings strictly to the right.
            let mut idx = 0usize;
            let total: i32 = crossings.iter().map(|c| c.1).sum();
            let mut consumed = 0i32;
            for gx in 0..grid {
                let xc = x0 + (gx as f64 + 0.5) * cell;
                while idx < crossings.len() && crossings[idx].0 <= xc {
                    consumed += crossings[idx].1;
                    idx += 1;
                }
                cell_winding[gy * grid + gx] = total - consumed;
            }
        }

        let threshold = curve.resolution_threshold();
        let reach = ((threshold / cell).ceil() as usize + 1).min(grid);
        CurveIndex { samples, x0, y0, cell, grid, cells, cell_winding, threshold, reach }
    }

    fn cell_of(&self, w: Complex64) -> Option<(usize, usize)> {
        let gx = (w.re - self.x0) / self.cell;
        let gy = (w.im - self.y0) / self.cell;
        if gx < 0.0 || gy < 0.0 {
            return None;
        }
        let (gx, gy) = (gx.floor() as usize, gy.floor() as usize);
        if gx >= self.grid || gy >= self.grid {
            None
        } else {
            Some((gx, gy))
        }
    }

    /// Distance from w to the curve edges within `reach` cells; None when no
    /// edge comes that close (then dist > reach·cell ≥ threshold).
    fn near_distance(&self, w: Complex64) -> Option<f64> {
        let (gx, gy) = match self.cell_of(w) {
            Some(c) => c,
            None => {
                // Outside the padded bbox: distance at least the padding.
                return None;
            }
        };
        let r = self.reach;
        let x_lo = gx.saturating_sub(r);
        let x_hi = (gx + r).min(self.grid - 1);
        let y_lo = gy.saturating_sub(r);
        let y_hi = (gy + r).min(self.grid - 1);
        let mut best = f64::INFINITY;
        let m = self.samples.len();
        for cy in y_lo..=y_hi {
            for cx in x_lo..=x_hi {
                for &e in &self.cells[cy * self.grid + cx] {
                    let a = self.samples[e as usize];
                    let b = self.samples[(e as usize + 1) % m];
                    let d = segment_distance(a, b, w);
                    if d < best {
                        best = d;
                    }
                }
            }
        }
        if best.is_finite() {
            Some(best)
        } else {
            None
        }
    }

    /// Winding number and a margin lower bound; O(1) away from the curve,
    /// O(edges nearby) in boundary cells.
    pub fn classify(&self, w: Complex64) -> (i32, f64) {
        match self.cell_of(w) {
            None => (0, bbox_distance(self, w)),
            Some((gx, gy)) => {
                let id = gy * self.grid + gx;
                let margin = match self.near_distance(w) {
                    Some(d) => d,
                    None => (self.reach as f64) * self.cell,
                };
                if self.cells[id].is_empty() {
                    (self.cell_winding[id], margin)
                } else {
                    (winding_number(&self.samples, w), margin)
                }
            }
        }
    }
}

fn bbox_distance(ix: &CurveIndex, w: Complex64) -> f64 {
    let span = ix.cell * ix.grid as f64;
    let dx = (ix.x0 - w.re).max(w.re - (ix.x0 + span)).max(0.0);
    let dy = (ix.y0 - w.im).max(w.im - (ix.y0 + span)).max(0.0);
    (dx * dx + dy * dy).sqrt().max(ix.cell)
}

/// Radial-angular sampling plan covering the disc.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub radii: usize,
    pub angles: usize,
    pub max_radius: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan { radii: 64, angles: 256, max_radius: 1.0 - 1e-3 }
    }
}

impl SamplingPlan {
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.radii * self.angles);
        for i in 0..self.radii {
            let r = self.max_radius * (i as f64 + 1.0) / self.radii as f64;
            for j in 0..self.angles {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / self.angles as f64;
                out.push(Complex64::from_polar(r, theta));
            }
        }
        out
    }
}

/// One containment violation (a ψ-sample resolved outside clos φ(𝕌)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Violation {
    #[serde(with = "cjson::complex")]
    pub z: Complex64,
    #[serde(with = "cjson::complex")]
    pub value: Complex64,
    pub margin: f64,
}

/// Result of an image-containment scan ψ(𝕌) ⊂ clos φ(𝕌).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub total: usize,
    pub inside: usize,
    pub unresolved: usize,
    pub violation_count: usize,
    /// First violations (capped) for diagnostics.
    pub violations: Vec<Violation>,
    pub fraction_inside: f64,
    /// Scan passes the closure test when nothing resolved strictly outside.
    pub pass: bool,
    pub mesh: usize,
    pub threshold: f64,
}

const VIOLATION_CAP: usize = 64;

/// Reusable membership tester for the image region of a symbol, built once
/// and queried many times (λ-grid scans query the same φ-region thousands
/// of times).
///
/// For the unit singular symbol the image is 𝕌∖{0} whose closure is clos 𝕌,
/// and the isolated boundary point 0 makes winding the wrong tool; the
/// closed form |w| ≶ 1 (with 0 excluded from the *open* image) is used
/// instead.
#[allow(clippy::large_enum_variant)]
pub enum ImageRegion {
    PuncturedDisc,
    Curves { index: CurveIndex, confirm: CurveIndex, mesh: usize },
}

impl ImageRegion {
    pub fn build(phi: &SymbolSpec, mesh: usize) -> Result<ImageRegion> {
        if phi.as_scaled_unit_singular() == Some(Complex64::new(1.0, 0.0)) {
            return Ok(ImageRegion::PuncturedDisc);
        }
        let r = 1.0 - BOUNDARY_EPS;
        let curve = boundary_curve(phi, mesh, r)?;
        let confirm_curve = boundary_curve(phi, mesh, 0.5 * (1.0 + r))?;
        let index = CurveIndex::build(&curve, 256);
        let confirm = CurveIndex::build(&confirm_curve, 256);
        Ok(ImageRegion::Curves { index, confirm, mesh })
    }

    /// Membership of w in the *open* image (valence ≥ 1, both radii).
    pub fn open_status(&self, w: Complex64) -> PointStatus {
        match self {
            ImageRegion::PuncturedDisc => {
                let m = w.norm();
                if (1e-12..=1.0 - 1e-9).contains(&m) {
                    PointStatus::Inside
                } else if (1.0 - 1e-9..=1.0 + 1e-9).contains(&m) {
                    PointStatus::BoundaryUnresolved
                } else {
                    // At 0 (the isolated boundary point) or beyond the
                    // closed disc.
                    PointStatus::Outside
                }
            }
            ImageRegion::Curves { index, confirm, .. } => {
                let (w1, margin) = index.classify(w);
                if margin < index.threshold {
                    return PointStatus::BoundaryUnresolved;
                }
                let (w2, margin2) = confirm.classify(w);
                if margin2 < confirm.threshold || w1 != w2 || w1 < 0 {
                    PointStatus::BoundaryUnresolved
                } else if w1 >= 1 {
                    PointStatus::Inside
                } else {
                    PointStatus::Outside
                }
            }
        }
    }

    /// Closure-containment scan: inside-or-unresolved passes, only samples
    /// resolved strictly outside count as violations.
    pub fn closure_scan(
        &self,
        points: &[Complex64],
        values: &[Complex64],
    ) -> ContainmentReport {
        let mut inside = 0usize;
        let mut unresolved = 0usize;
        let mut violation_count = 0usize;
        let mut violations = Vec::new();
        let (mesh, threshold) = match self {
            ImageRegion::PuncturedDisc => (0usize, 1e-9),
            ImageRegion::Curves { index, mesh, .. } => (*mesh, index.threshold),
        };
        for (&z, &v) in points.iter().zip(values) {
            match self {
                ImageRegion::PuncturedDisc => {
                    // clos(𝕌∖{0}) = clos 𝕌, so the isolated point 0 is
                    // inside the closure.
                    let m = v.norm();
                    if m <= 1.0 - threshold {
                        inside += 1;
                    } else if m <= 1.0 + threshold {
                        unresolved += 1;
                    } else {
                        violation_count += 1;
                        if violations.len() < VIOLATION_CAP {
                            violations.push(Violation { z, value: v, margin: m - 1.0 });
                        }
                    }
                }
                ImageRegion::Curves { index, .. } => match self.open_status(v) {
                    PointStatus::Inside => inside += 1,
                    PointStatus::BoundaryUnresolved => unresolved += 1,
                    PointStatus::Outside => {
                        violation_count += 1;
                        if violations.len() < VIOLATION_CAP {
                            let (_, margin) = index.classify(v);
                            violations.push(Violation { z, value: v, margin });
                        }
                    }
                },
            }
        }
        ContainmentReport {
            total: points.len(),
            inside,
            unresolved,
            violation_count,
            fraction_inside: inside as f64 / points.len().max(1) as f64,
            pass: violation_count == 0,
            violations,
            mesh,
            threshold,
        }
    }
}

/// Scan ψ-samples over the disc against clos φ(𝕌).
pub fn image_contained(
    psi: &SymbolSpec,
    phi: &SymbolSpec,
    plan: &SamplingPlan,
    mesh: usize,
) -> Result<ContainmentReport> {
    let region = ImageRegion::build(phi, mesh.max(64))?;
    let points = plan.points();
    let psi_vals: Vec<Complex64> = points.iter().map(|&z| psi.eval_unchecked(z)).collect();
    Ok(region.closure_scan(&points, &psi_vals))
}

/// Raster cell for CSV/SVG dumps and agreement statistics.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RasterPoint {
    pub x: f64,
    pub y: f64,
    pub valence: i32,
    pub status: PointStatus,
    pub margin: f64,
}

/// Classify an nx×ny raster over [x0,x1]×[y0,y1] against φ's image, using
/// the indexed curve at two radii.
pub fn valence_raster(
    phi: &SymbolSpec,
    bounds: (f64, f64, f64, f64),
    nx: usize,
    ny: usize,
    mesh: usize,
) -> Result<Vec<RasterPoint>> {
    let (x0, x1, y0, y1) = bounds;
    let r = 1.0 - BOUNDARY_EPS;
    let curve = boundary_curve(phi, mesh, r)?;
    let confirm = boundary_curve(phi, mesh, 0.5 * (1.0 + r))?;
    let index = CurveIndex::build(&curve, 384);
    let index2 = CurveIndex::build(&confirm, 384);

    let mut out = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        let y = y0 + (y1 - y0) * (iy as f64 + 0.5) / ny as f64;
        for ix in 0..nx {
            let x = x0 + (x1 - x0) * (ix as f64 + 0.5) / nx as f64;
            let w = Complex64::new(x, y);
            let (w1, margin) = index.classify(w);
            let (w2, _) = index2.classify(w);
            let (status, valence) = if margin < index.threshold || w1 != w2 || w1 < 0 {
                (PointStatus::BoundaryUnresolved, w1)
            } else if w1 == 0 {
                (PointStatus::Outside, 0)
            } else {
                (PointStatus::Inside, w1)
            };
            out.push(RasterPoint { x, y, valence, status, margin });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_curve_is_a_circle() {
        let curve = boundary_curve(&SymbolSpec::identity(), 256, 0.5).unwrap();
        for s in &curve.samples {
            assert!((s.norm() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_symbol_curve_is_shifted_circle() {
        let curve = boundary_curve(&SymbolSpec::from_shorthand("z+2").unwrap(), 256, 0.9).unwrap();
        for s in &curve.samples {
            assert!(((s - c(2.0, 0.0)).norm() - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn valence_counts_preimages_of_cardioid_symbol() {
        let phi = SymbolSpec::cardioid();
        // w = 0: preimages 0 and −1, only 0 strictly inside. The confirm
        // curve passes within ~5·10⁻⁷ of 0 (image of −1 ∈ ∂𝕌), so the mesh
        // must be fine enough for the deviation threshold to drop below
        // that.
        let v0 = valence(&phi, c(0.0, 0.0), 16384).unwrap();
        assert_eq!(v0.status, PointStatus::Inside);
        assert_eq!(v0.valence, 1);
        // w = −0.2: both roots −1/2 ± √0.05 inside (double cover).
        let v2 = valence(&phi, c(-0.2, 0.0), 4096).unwrap();
        assert_eq!(v2.status, PointStatus::Inside);
        assert_eq!(v2.valence, 2);
        // Far outside.
        let v_out = valence(&SymbolSpec::identity(), c(3.0, 0.0), 256).unwrap();
        assert_eq!(v_out.status, PointStatus::Outside);
    }

    #[test]
    fn double_cover_matches_quadratic_roots() {
        // Wherever valence = 2, both quadratic preimages −1/2 ± √(w+1/4) lie
        // in 𝕌 (the symmetry φ(−1−z) = φ(z)); valence = 1 means exactly one.
        let phi = SymbolSpec::cardioid();
        for &w in &[c(-0.2, 0.0), c(-0.3, 0.1), c(0.5, 0.2), c(-0.1, -0.2), c(1.2, 0.3)] {
            let verdict = valence(&phi, w, 4096).unwrap();
            if verdict.status == PointStatus::BoundaryUnresolved {
                continue;
            }
            let root = (w + c(0.25, 0.0)).sqrt();
            let z1 = c(-0.5, 0.0) + root;
            let z2 = c(-0.5, 0.0) - root;
            let inside = [z1, z2].iter().filter(|z| z.norm() < 1.0 - 1e-4).count() as u32;
            assert_eq!(verdict.valence, inside, "w = {w}");
        }
    }

    #[test]
    fn curve_index_agrees_with_direct_winding() {
        let phi = SymbolSpec::cardioid();
        let curve = boundary_curve(&phi, 2048, 1.0 - 1e-6).unwrap();
        let index = CurveIndex::build(&curve, 256);
        for &w in &[
            c(0.3, 0.2),
            c(-0.5, 0.0),
            c(1.5, 0.5),
            c(-1.5, 0.0),
            c(2.5, 2.5),
            c(0.0, 1.2),
            c(-0.8, 0.05),
        ] {
            let (wn, margin) = index.classify(w);
            assert_eq!(wn, curve.winding_number(w), "winding at {w}");
            let exact = curve.distance_to(w);
            assert!(margin <= exact + 1e-12, "margin bound at {w}: {margin} vs {exact}");
        }
    }

    #[test]
    fn cardioid_polar_anchor_points() {
        assert!(cardioid_membership(c(0.0, 0.0)));
        assert!(cardioid_membership(c(1.9, 0.0)));
        assert!(cardioid_membership(c(-0.9, 0.0)));
        assert!(!cardioid_membership(c(-1.1, 0.0)));
        assert!(!cardioid_membership(c(2.1, 0.0)));
    }

    #[test]
    fn containment_easy_directions() {
        let plan = SamplingPlan { radii: 16, angles: 64, max_radius: 1.0 - 1e-3 };
        // ψ = z/2 into φ = z: all inside.
        let rep = image_contained(
            &SymbolSpec::from_shorthand("z/2").unwrap(),
            &SymbolSpec::identity(),
            &plan,
            1024,
        )
        .unwrap();
        assert!(rep.pass, "violations: {:?}", rep.violations.first());
        assert_eq!(rep.violation_count, 0);

        // ψ = z into φ = z/2: samples with |ψ| > 1/2 escape.
        let rep = image_contained(
            &SymbolSpec::identity(),
            &SymbolSpec::from_shorthand("z/2").unwrap(),
            &plan,
            1024,
        )
        .unwrap();
        assert!(!rep.pass);
        assert!(rep.violation_count > rep.total / 3);
    }

    #[test]
    fn containment_against_unit_singular_uses_closure() {
        // ψ = z: image 𝕌 sits inside clos(𝕌∖{0}) = clos 𝕌, including ψ(0)=0.
        let plan = SamplingPlan { radii: 8, angles: 32, max_radius: 1.0 - 1e-3 };
        let rep =
            image_contained(&SymbolSpec::identity(), &SymbolSpec::UnitSingular, &plan, 0).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.unresolved, 0);
    }

    #[test]
    fn winding_is_mesh_stable() {
        // Doubling M changes no resolved verdict.
        let phi = SymbolSpec::cardioid();
        let points: Vec<Complex64> = (0..40)
            .map(|k| Complex64::from_polar(0.1 + 0.05 * k as f64, 0.37 * k as f64))
            .collect();
        for &w in &points {
            let v1 = valence(&phi, w, 2048).unwrap();
            let v2 = valence(&phi, w, 4096).unwrap();
            if v1.status != PointStatus::BoundaryUnresolved
                && v2.status != PointStatus::BoundaryUnresolved
            {
                assert_eq!(v1.status, v2.status, "at {w}");
                assert_eq!(v1.valence, v2.valence, "at {w}");
            }
        }
    }
}
