//! Minimal static SVG rendering of the flow phase portrait: axes, invariant
//! lines (tagged with their slopes), sampled field arrows, and trajectories.

use std::fmt::Write as _;

use flagvar_core::FlowState;

/// Drawing bounds in metric coordinates.
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub xmax: f64,
    pub ymax: f64,
}

const W: f64 = 640.0;
const H: f64 = 640.0;
const MARGIN: f64 = 40.0;

fn sx(b: &Bounds, x: f64) -> f64 {
    MARGIN + x / b.xmax * (W - 2.0 * MARGIN)
}

fn sy(b: &Bounds, y: f64) -> f64 {
    H - MARGIN - y / b.ymax * (H - 2.0 * MARGIN)
}

/// Render the portrait.
pub fn phase_portrait(
    n: usize,
    bounds: Bounds,
    field: &[(f64, f64, f64, f64)],
    trajectories: &[Vec<(f64, FlowState)>],
) -> String {
    let (steep, shallow) = flagvar_core::ricci::invariant_lines(n);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        out,
        r#"<metadata>{{"n":{n},"invariant_slopes":[{steep},{shallow}],"xmax":{},"ymax":{}}}</metadata>"#,
        bounds.xmax, bounds.ymax
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    // Axes.
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        sx(&bounds, 0.0),
        sy(&bounds, 0.0),
        sx(&bounds, bounds.xmax),
        sy(&bounds, 0.0)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        sx(&bounds, 0.0),
        sy(&bounds, 0.0),
        sx(&bounds, 0.0),
        sy(&bounds, bounds.ymax)
    );
    // Invariant lines, clipped to the box.
    for (slope, color) in [(steep, "#c02020"), (shallow, "#2040c0")] {
        let x_end = bounds.xmax.min(bounds.ymax / slope);
        let _ = writeln!(
            out,
            r##"<line data-slope="{slope}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.5"/>"##,
            sx(&bounds, 0.0),
            sy(&bounds, 0.0),
            sx(&bounds, x_end),
            sy(&bounds, slope * x_end)
        );
    }
    // Field arrows, normalized to a fixed pixel length.
    for &(x, y, dx, dy) in field {
        let norm = (dx * dx + dy * dy).sqrt();
        if norm == 0.0 {
            continue;
        }
        let scale = 9.0 / norm;
        let (x0, y0) = (sx(&bounds, x), sy(&bounds, y));
        let (x1, y1) = (x0 + dx * scale, y0 - dy * scale);
        let _ = writeln!(
            out,
            r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#808080" stroke-width="0.8"/>"##
        );
        let _ = writeln!(out, r##"<circle cx="{x1:.2}" cy="{y1:.2}" r="1.2" fill="#808080"/>"##);
    }
    // Trajectories.
    for samples in trajectories {
        let mut points = String::new();
        for (_, s) in samples {
            if s.x <= bounds.xmax && s.y <= bounds.ymax {
                let _ = write!(points, "{:.2},{:.2} ", sx(&bounds, s.x), sy(&bounds, s.y));
            }
        }
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#108040" stroke-width="1.5"/>"##,
            points.trim_end()
        );
    }
    out.push_str("</svg>\n");
    out
}
