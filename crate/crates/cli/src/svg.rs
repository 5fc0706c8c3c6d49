//! Standalone SVG figures: contour overlays and diverging heat maps.
//!
//! Output is plain text with fixed-precision coordinates, so identical
//! inputs give byte-identical files.

use std::fmt::Write;

use zonefit::zone::Contour;
use zonefit::{Extent, ProbabilityGrid, RulebookZone};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 110.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TICK: f64 = 0.5;

const LEVEL_COLORS: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];
const NEGATIVE: (f64, f64, f64) = (33.0, 102.0, 172.0);
const POSITIVE: (f64, f64, f64) = (178.0, 24.0, 43.0);

/// Maps feet to pixels with equal scale on both axes.
struct Frame {
    extent: Extent,
    scale: f64,
    left: f64,
    bottom: f64,
}

impl Frame {
    fn new(extent: Extent) -> Self {
        let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let scale = (pw / (extent.x_max - extent.x_min)).min(ph / (extent.y_max - extent.y_min));
        Frame {
            extent,
            scale,
            left: MARGIN_LEFT,
            bottom: MARGIN_TOP + (extent.y_max - extent.y_min) * scale,
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.extent.x_min) * self.scale
    }

    fn py(&self, y: f64) -> f64 {
        self.bottom - (y - self.extent.y_min) * self.scale
    }

    fn right(&self) -> f64 {
        self.px(self.extent.x_max)
    }

    fn top(&self) -> f64 {
        self.py(self.extent.y_max)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame) {
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        f.left,
        f.top(),
        f.right() - f.left,
        f.bottom - f.top()
    );
    let ticks = |lo: f64, hi: f64| {
        let first = (lo / TICK).ceil() as i64;
        let last = (hi / TICK).floor() as i64;
        (first..=last).map(|k| k as f64 * TICK)
    };
    for x in ticks(f.extent.x_min, f.extent.x_max) {
        let _ = writeln!(
            out,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle">{4:.1}</text>"#,
            f.px(x),
            f.bottom,
            f.bottom + 5.0,
            f.bottom + 18.0,
            x
        );
    }
    for y in ticks(f.extent.y_min, f.extent.y_max) {
        let _ = writeln!(
            out,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/><text x="{3:.2}" y="{4:.2}" text-anchor="end">{5:.1}</text>"#,
            f.left - 5.0,
            f.py(y),
            f.left,
            f.left - 8.0,
            f.py(y) + 4.0,
            y
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">x (ft)</text>"#,
        (f.left + f.right()) / 2.0,
        f.bottom + 38.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">y (ft)</text>"#,
        (f.top() + f.bottom) / 2.0
    );
}

fn rulebook(out: &mut String, f: &Frame, z: &RulebookZone) {
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="2" stroke-dasharray="6 3"/>"#,
        f.px(-z.x_half),
        f.py(z.y_high),
        f.px(z.x_half) - f.px(-z.x_half),
        f.py(z.y_low) - f.py(z.y_high)
    );
}

fn legend_entry(out: &mut String, f: &Frame, row: usize, color: &str, dashed: bool, label: &str) {
    let x = f.right() + 12.0;
    let y = f.top() + 10.0 + 20.0 * row as f64;
    let dash = if dashed {
        r#" stroke-dasharray="6 3""#
    } else {
        ""
    };
    let _ = writeln!(
        out,
        r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
        x + 24.0,
        x + 30.0,
        y + 4.0,
        escape(label)
    );
}

/// Smallest extent that holds the rule-book zone and every contour, padded
/// and snapped outward to the tick spacing.
pub fn contour_extent(contours: &[Contour], z: &RulebookZone) -> Extent {
    let (mut x_min, mut x_max, mut y_min, mut y_max) = (-z.x_half, z.x_half, z.y_low, z.y_high);
    for c in contours {
        for &(x, y) in &c.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    let pad = 0.25;
    Extent {
        x_min: ((x_min - pad) / TICK).floor() * TICK,
        x_max: ((x_max + pad) / TICK).ceil() * TICK,
        y_min: ((y_min - pad) / TICK).floor() * TICK,
        y_max: ((y_max + pad) / TICK).ceil() * TICK,
    }
}

/// Closed polylines for each contour level over the rule-book rectangle.
pub fn contour_plot(title: &str, contours: &[Contour], z: &RulebookZone) -> String {
    let f = Frame::new(contour_extent(contours, z));
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f);
    rulebook(&mut out, &f, z);
    for (i, c) in contours.iter().enumerate() {
        let color = LEVEL_COLORS[i % LEVEL_COLORS.len()];
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        legend_entry(&mut out, &f, i, color, false, &format!("P = {}", c.level));
    }
    legend_entry(&mut out, &f, contours.len(), "black", true, "rule book");
    out.push_str("</svg>\n");
    out
}

fn diverging(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let (r, g, b) = if t < 0.0 { NEGATIVE } else { POSITIVE };
    let a = t.abs();
    let mix = |c: f64| (255.0 + (c - 255.0) * a).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(r), mix(g), mix(b))
}

/// Heat map of a difference grid with a color scale symmetric about zero:
/// blue below, white at zero, red above.
pub fn difference_heatmap(title: &str, grid: &ProbabilityGrid, z: &RulebookZone) -> String {
    let f = Frame::new(grid.extent);
    let (lo, hi) = grid.min_max();
    let bound = lo.abs().max(hi.abs());
    let mut out = String::new();
    header(&mut out, title);
    let cell = grid.step * f.scale;
    for (i, row) in grid.rows().enumerate() {
        let y_top = f.py(grid.y_center(i) + grid.step / 2.0);
        for (j, &v) in row.iter().enumerate() {
            let t = if bound > 0.0 { v / bound } else { 0.0 };
            let x_left = f.px(grid.x_center(j) - grid.step / 2.0);
            let _ = writeln!(
                out,
                r#"<rect x="{x_left:.2}" y="{y_top:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                cell + 0.05,
                cell + 0.05,
                diverging(t)
            );
        }
    }
    axes(&mut out, &f);
    rulebook(&mut out, &f, z);

    // color bar
    let x = f.right() + 20.0;
    let (top, bottom) = (f.top() + 10.0, f.top() + 210.0);
    let steps = 40;
    let h = (bottom - top) / steps as f64;
    for k in 0..steps {
        let t = 1.0 - 2.0 * (k as f64 + 0.5) / steps as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{:.2}" width="18" height="{:.2}" fill="{}"/>"#,
            top + k as f64 * h,
            h + 0.05,
            diverging(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<rect x="{x:.2}" y="{top:.2}" width="18" height="{:.2}" fill="none" stroke="black"/>"#,
        bottom - top
    );
    for (label, y) in [(bound, top), (0.0, (top + bottom) / 2.0), (-bound, bottom)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{:+.3}</text>"#,
            x + 24.0,
            y + 4.0,
            label
        );
    }
    out.push_str("</svg>\n");
    out
}
