//! Self-contained SVG renderings of the report distributions.

use std::f64::consts::PI;
use std::fmt::Write;

use pedeval_core::compare::{LongitudinalDistribution, Outcome, SceneReport};
use pedeval_core::dynamics::{FundamentalDiagram, Histogram2D, PolarHistogram};

const W: f64 = 480.0;
const H: f64 = 360.0;
const MARGIN: f64 = 48.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// White to dark blue.
fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(255.0, 8.0), lerp(255.0, 48.0), lerp(255.0, 107.0))
}

struct Doc {
    body: String,
}

impl Doc {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        let _ = write!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
        );
        let _ = write!(body, "\n<title>{}</title>", escape(title));
        let _ = write!(body, "\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
        let _ = write!(body, "\n<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">{}</text>", W / 2.0, escape(title));
        Self { body }
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = write!(self.body, "\n<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\">{}</text>", escape(s));
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = write!(self.body, "\n<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\"/>");
    }

    fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = write!(
            self.body,
            "\n<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>",
            coords.join(" ")
        );
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = write!(self.body, "\n<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r:.2}\" fill=\"{fill}\"/>");
    }

    fn path(&mut self, d: &str, fill: &str) {
        let _ = write!(self.body, "\n<path d=\"{d}\" fill=\"{fill}\" stroke=\"none\"/>");
    }

    /// Plot frame with axis labels and range annotations.
    fn axes(&mut self, xlabel: &str, ylabel: &str, x: (f64, f64), y: (f64, f64)) {
        let _ = write!(
            self.body,
            "\n<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            W - 2.0 * MARGIN,
            H - 2.0 * MARGIN
        );
        self.text(MARGIN, H - MARGIN + 14.0, "start", &format!("{:.2}", x.0));
        self.text(W - MARGIN, H - MARGIN + 14.0, "end", &format!("{:.2}", x.1));
        self.text(W / 2.0, H - 12.0, "middle", xlabel);
        self.text(MARGIN - 4.0, H - MARGIN, "end", &format!("{:.2}", y.0));
        self.text(MARGIN - 4.0, MARGIN + 10.0, "end", &format!("{:.2}", y.1));
        let _ = write!(
            self.body,
            "\n<text x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>",
            H / 2.0,
            H / 2.0,
            escape(ylabel)
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("\n</svg>\n");
        self.body
    }
}

/// Maps data ranges onto the plot area.
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(a, b): (f64, f64)| if b > a { (a, b) } else { (a - 0.5, a + 0.5) };
        Self { x: widen(x), y: widen(y) }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * MARGIN)
    }
}

fn unavailable<T>(title: &str, outcome: &Outcome<T>) -> Option<String> {
    let e = outcome.err()?;
    let mut doc = Doc::new(title);
    doc.text(W / 2.0, H / 2.0, "middle", &format!("not available: {}", e.kind));
    doc.text(W / 2.0, H / 2.0 + 16.0, "middle", &e.message);
    Some(doc.finish())
}

pub fn heatmap(report: &SceneReport) -> String {
    let title = format!("Position heatmap: {} / {}", report.scene_id, report.label);
    if let Some(s) = unavailable(&title, &report.position_heatmap) {
        return s;
    }
    let h: &Histogram2D = report.position_heatmap.ok().expect("checked");
    let (nx, ny) = (h.nx(), h.ny());
    let f = Frame::new((h.x_edges[0], h.x_edges[nx]), (h.y_edges[0], h.y_edges[ny]));
    let max = h.counts.iter().cloned().fold(0.0, f64::max);
    let mut doc = Doc::new(&title);
    for iy in 0..ny {
        for ix in 0..nx {
            let c = h.at(ix, iy);
            if c == 0.0 {
                continue;
            }
            let (x0, x1) = (f.px(h.x_edges[ix]), f.px(h.x_edges[ix + 1]));
            let (y0, y1) = (f.py(h.y_edges[iy + 1]), f.py(h.y_edges[iy]));
            doc.rect(x0, y0, x1 - x0, y1 - y0, &ramp(c / max));
        }
    }
    doc.axes("x (m)", "y (m)", f.x, f.y);
    doc.finish()
}

pub fn velocity(report: &SceneReport) -> String {
    let title = format!("Longitudinal velocity: {} / {}", report.scene_id, report.label);
    if let Some(s) = unavailable(&title, &report.longitudinal_velocity) {
        return s;
    }
    let LongitudinalDistribution { histogram, fit, .. } = report.longitudinal_velocity.ok().expect("checked");
    let density = match histogram.to_normalized() {
        Ok(d) => d,
        Err(e) => return unavailable(&title, &Outcome::<()>::from(Err(e))).expect("error outcome"),
    };
    let n = density.bins();
    let lo = density.edges[0];
    let hi = density.edges[n];
    let samples = 200;
    let curve: Vec<(f64, f64)> = (0..=samples)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / samples as f64;
            (x, fit.pdf(x))
        })
        .filter(|(_, y)| y.is_finite())
        .collect();
    let ymax = density
        .counts
        .iter()
        .cloned()
        .chain(curve.iter().map(|p| p.1))
        .fold(0.0, f64::max);
    let f = Frame::new((lo, hi), (0.0, ymax * 1.05));
    let mut doc = Doc::new(&title);
    for k in 0..n {
        let (x0, x1) = (f.px(density.edges[k]), f.px(density.edges[k + 1]));
        let y = f.py(density.counts[k]);
        doc.rect(x0, y, (x1 - x0 - 1.0).max(0.5), f.py(0.0) - y, "#6b8fbf");
    }
    let pts: Vec<(f64, f64)> = curve.iter().map(|&(x, y)| (f.px(x), f.py(y))).collect();
    doc.polyline(&pts, "#c0392b");
    doc.text(
        W - MARGIN - 4.0,
        MARGIN + 14.0,
        "end",
        &format!("fit: mean {:.3} m/s, std {:.3} m/s", fit.mean, fit.std),
    );
    doc.axes("velocity along primary axis (m/s)", "density", f.x, f.y);
    doc.finish()
}

pub fn fundamental(report: &SceneReport) -> String {
    let title = format!("Fundamental diagram: {} / {}", report.scene_id, report.label);
    if let Some(s) = unavailable(&title, &report.fundamental_diagram) {
        return s;
    }
    let fd: &FundamentalDiagram = report.fundamental_diagram.ok().expect("checked");
    let pts: Vec<(f64, f64)> = fd
        .density_centers
        .iter()
        .zip(&fd.mean_speed)
        .filter_map(|(&x, s)| s.map(|s| (x, s)))
        .collect();
    let n = fd.density_edges.len() - 1;
    let ymax = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let f = Frame::new((fd.density_edges[0], fd.density_edges[n]), (0.0, ymax * 1.1));
    let mut doc = Doc::new(&title);
    let line: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (f.px(x), f.py(y))).collect();
    doc.polyline(&line, "#2c3e50");
    for &(x, y) in &line {
        doc.circle(x, y, 3.0, "#2c3e50");
    }
    doc.axes("local density (1/m²)", "mean speed (m/s)", f.x, f.y);
    doc.finish()
}

fn sector(cx: f64, cy: f64, r0: f64, r1: f64, a0: f64, a1: f64) -> String {
    // screen y grows downward, so negate the sine; bearing 0 (ahead) points up
    let pt = |r: f64, a: f64| (cx - r * a.sin(), cy - r * a.cos());
    let (p0, p1, p2, p3) = (pt(r1, a0), pt(r1, a1), pt(r0, a1), pt(r0, a0));
    format!(
        "M{:.2} {:.2} A{r1:.2} {r1:.2} 0 0 0 {:.2} {:.2} L{:.2} {:.2} A{r0:.2} {r0:.2} 0 0 1 {:.2} {:.2} Z",
        p0.0, p0.1, p1.0, p1.1, p2.0, p2.1, p3.0, p3.1
    )
}

pub fn polar(report: &SceneReport) -> String {
    let title = format!("Nearest neighbor (heading frame): {} / {}", report.scene_id, report.label);
    if let Some(s) = unavailable(&title, &report.nearest_neighbor) {
        return s;
    }
    let h: &PolarHistogram = report.nearest_neighbor.ok().expect("checked");
    let (nr, nt) = (h.r_bins(), h.theta_bins());
    let r_max = h.r_edges[nr];
    let (cx, cy) = (W / 2.0, H / 2.0 + 10.0);
    let radius = H / 2.0 - 40.0;
    let max = h.counts.iter().cloned().fold(0.0, f64::max);
    let mut doc = Doc::new(&title);
    let dt = 2.0 * PI / nt as f64;
    for ir in 0..nr {
        for it in 0..nt {
            let c = h.at(ir, it);
            if c == 0.0 {
                continue;
            }
            let r0 = radius * h.r_edges[ir] / r_max;
            let r1 = radius * h.r_edges[ir + 1] / r_max;
            let a = h.theta_center(it);
            doc.path(&sector(cx, cy, r0, r1, a - 0.5 * dt, a + 0.5 * dt), &ramp(c / max));
        }
    }
    let _ = write!(
        doc.body,
        "\n<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{radius:.2}\" fill=\"none\" stroke=\"black\"/>"
    );
    doc.text(cx, cy - radius - 4.0, "middle", "ahead");
    doc.text(cx - radius - 4.0, cy + 4.0, "end", "left");
    doc.text(cx + radius + 4.0, cy + 4.0, "start", "right");
    doc.text(cx, cy + radius + 14.0, "middle", &format!("outer ring {r_max:.1} m"));
    doc.finish()
}

/// File name and document for each rendering.
pub fn render_all(report: &SceneReport) -> Vec<(&'static str, String)> {
    vec![
        ("heatmap.svg", heatmap(report)),
        ("velocity.svg", velocity(report)),
        ("fundamental.svg", fundamental(report)),
        ("polar.svg", polar(report)),
    ]
}
