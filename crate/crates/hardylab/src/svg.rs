//! Small SVG emitter for boundary curves and membership rasters.
//! Fixed 1024×1024 canvas, curve strokes over a raster fill, legend with
//! verdict colors. Output is plain deterministic text.

use num_complex::Complex64;

use crate::geometry::{PointStatus, RasterPoint};
use crate::spectra::EeStatus;

pub const CANVAS: f64 = 1024.0;

pub struct SvgPlot {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    body: String,
    legend: Vec<(String, String)>,
}

impl SvgPlot {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> SvgPlot {
        SvgPlot { x0, x1, y0, y1, body: String::new(), legend: Vec::new() }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = (x - self.x0) / (self.x1 - self.x0) * CANVAS;
        // SVG y grows downward.
        let sy = (self.y1 - y) / (self.y1 - self.y0) * CANVAS;
        (sx, sy)
    }

    pub fn add_point_raster(&mut self, points: &[RasterPoint], cell_x: f64, cell_y: f64) {
        let w = cell_x / (self.x1 - self.x0) * CANVAS;
        let h = cell_y / (self.y1 - self.y0) * CANVAS;
        for p in points {
            let (sx, sy) = self.px(p.x, p.y);
            let color = status_color(p.status);
            self.body.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
                sx - w / 2.0,
                sy - h / 2.0,
                w,
                h,
                color
            ));
        }
    }

    pub fn add_ee_raster(&mut self, lambdas: &[Complex64], statuses: &[EeStatus], cell: f64) {
        let w = cell / (self.x1 - self.x0) * CANVAS;
        let h = cell / (self.y1 - self.y0) * CANVAS;
        for (l, s) in lambdas.iter().zip(statuses) {
            let (sx, sy) = self.px(l.re, l.im);
            self.body.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
                sx - w / 2.0,
                sy - h / 2.0,
                w,
                h,
                ee_color(*s)
            ));
        }
    }

    pub fn add_samples(&mut self, points: &[(Complex64, PointStatus)], radius: f64) {
        for (z, status) in points {
            let (sx, sy) = self.px(z.re, z.im);
            self.body.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"{}\"/>\n",
                sx,
                sy,
                radius,
                status_color(*status)
            ));
        }
    }

    pub fn add_curve(&mut self, samples: &[Complex64], color: &str) {
        if samples.is_empty() {
            return;
        }
        let mut d = String::new();
        for (i, s) in samples.iter().enumerate() {
            let (sx, sy) = self.px(s.re, s.im);
            d.push_str(if i == 0 { "M" } else { "L" });
            d.push_str(&format!("{sx:.2},{sy:.2} "));
        }
        d.push('Z');
        self.body.push_str(&format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
    }

    pub fn legend_entry(&mut self, color: &str, label: &str) {
        self.legend.push((color.to_string(), label.to_string()));
    }

    pub fn finish(self) -> String {
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n<rect width=\"{c}\" height=\"{c}\" fill=\"#ffffff\"/>\n",
            c = CANVAS as u32
        );
        out.push_str(&self.body);
        for (i, (color, label)) in self.legend.iter().enumerate() {
            let y = 24.0 + 22.0 * i as f64;
            out.push_str(&format!(
                "<rect x=\"16\" y=\"{:.0}\" width=\"14\" height=\"14\" fill=\"{}\" stroke=\"#333\"/>\n<text x=\"36\" y=\"{:.0}\" font-family=\"monospace\" font-size=\"14\">{}</text>\n",
                y,
                color,
                y + 12.0,
                label
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

pub fn status_color(status: PointStatus) -> &'static str {
    match status {
        PointStatus::Inside => "#2c7fb8",
        PointStatus::Outside => "#f0f0f0",
        PointStatus::BoundaryUnresolved => "#fdae61",
    }
}

pub fn ee_color(status: EeStatus) -> &'static str {
    match status {
        EeStatus::In => "#1a9850",
        EeStatus::Out => "#d73027",
        EeStatus::Undetermined => "#ffffbf",
    }
}
