//! Vector export: one `<polyline>` per pen-down run, millimetre user units.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::kinematics::SampledTrajectory;
use crate::render::{write_atomic, InkModel};

/// SVG document for `traj`. Coordinates are written unchanged; a group
/// transform flips the y axis so the page reads upright.
pub fn format_svg(traj: &SampledTrajectory, ink: &InkModel) -> String {
    let runs = traj.pen_down_runs();
    let pts = || runs.iter().flat_map(|r| traj.samples[r.clone()].iter());
    let margin = ink.nib_radius;
    let (x0, x1, y0, y1) = pts().fold(
        (f64::MAX, f64::MIN, f64::MAX, f64::MIN),
        |(a, b, c, d), s| (a.min(s.x), b.max(s.x), c.min(s.y), d.max(s.y)),
    );
    let (x0, x1, y0, y1) = if runs.is_empty() {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        (x0 - margin, x1 + margin, y0 - margin, y1 + margin)
    };
    let (w, h) = (x1 - x0, y1 - y0);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.4}mm" height="{h:.4}mm" viewBox="{:.4} {:.4} {w:.4} {h:.4}">"#,
        x0, -y1
    );
    let _ = writeln!(
        out,
        r#"<g transform="scale(1,-1)" fill="none" stroke="black" stroke-width="{:.4}" stroke-linecap="round" stroke-linejoin="round">"#,
        2.0 * ink.nib_radius
    );
    for run in &runs {
        out.push_str(r#"<polyline points=""#);
        for (i, s) in traj.samples[run.clone()].iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.4},{:.4}", s.x, s.y);
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn export_svg(traj: &SampledTrajectory, ink: &InkModel, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), format_svg(traj, ink).as_bytes())
}
