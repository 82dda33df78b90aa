//! Ink deposition: stamps a round nib along the pen-down trajectory.

use crate::kinematics::SampledTrajectory;
use crate::raster::Raster;

/// Round nib whose radius shrinks linearly with speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InkModel {
    /// Nib radius at rest, mm.
    pub nib_radius: f64,
    /// Fractional radius loss at the trajectory's maximum speed, in `[0, 1]`.
    pub speed_thinning: f64,
}

impl Default for InkModel {
    fn default() -> Self {
        Self {
            nib_radius: 0.2,
            speed_thinning: 0.3,
        }
    }
}

/// Default raster resolution, pixels per mm.
pub const DEFAULT_RESOLUTION: f64 = 10.0;

/// Renders the pen-down part of `traj` on a white canvas spanning its
/// bounding box plus one nib radius. Consecutive pen-down samples of the same
/// run are joined by sub-pixel stamping so fast strokes leave no gaps.
pub fn render_offline(traj: &SampledTrajectory, ink: &InkModel, resolution: f64) -> Raster {
    let down: Vec<_> = traj.samples.iter().filter(|s| s.pen_down).collect();
    if down.is_empty() || !(resolution > 0.0) || !(ink.nib_radius > 0.0) {
        return Raster::new(1, 1, resolution.max(f64::MIN_POSITIVE));
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for s in &down {
        x0 = x0.min(s.x);
        x1 = x1.max(s.x);
        y0 = y0.min(s.y);
        y1 = y1.max(s.y);
    }
    let margin = ink.nib_radius;
    let left = x0 - margin;
    let top = y1 + margin;
    let width = (((x1 - x0 + 2.0 * margin) * resolution).ceil() as usize).max(1);
    let height = (((y1 - y0 + 2.0 * margin) * resolution).ceil() as usize).max(1);
    let mut canvas = Raster::new(width, height, resolution);

    let max_speed = down.iter().map(|s| s.speed).fold(0.0, f64::max);
    let thinning = ink.speed_thinning.clamp(0.0, 1.0);
    let radius = |speed: f64| {
        let rel = if max_speed > 0.0 { speed / max_speed } else { 0.0 };
        ink.nib_radius * (1.0 - thinning * rel)
    };
    // Canvas pixel coordinates of a point in mm, y flipped.
    let to_px = |x: f64, y: f64| ((x - left) * resolution, (top - y) * resolution);

    for run in traj.pen_down_runs() {
        let run = &traj.samples[run];
        for (k, s) in run.iter().enumerate() {
            let (px, py) = to_px(s.x, s.y);
            let r = radius(s.speed) * resolution;
            stamp(&mut canvas, px, py, r);
            if let Some(next) = run.get(k + 1) {
                let (qx, qy) = to_px(next.x, next.y);
                let rq = radius(next.speed) * resolution;
                let steps = ((qx - px).hypot(qy - py) / 0.5).ceil() as usize;
                for i in 1..steps {
                    let f = i as f64 / steps as f64;
                    stamp(
                        &mut canvas,
                        px + f * (qx - px),
                        py + f * (qy - py),
                        r + f * (rq - r),
                    );
                }
            }
        }
    }
    canvas
}

/// Inks every pixel whose centre lies within `r` of `(cx, cy)`, and always
/// the pixel containing the centre.
fn stamp(canvas: &mut Raster, cx: f64, cy: f64, r: f64) {
    let (w, h) = (canvas.width() as isize, canvas.height() as isize);
    let cxi = (cx.floor() as isize).clamp(0, w - 1);
    let cyi = (cy.floor() as isize).clamp(0, h - 1);
    canvas.set(cxi as usize, cyi as usize, true);
    let xa = ((cx - r).floor() as isize).max(0);
    let xb = ((cx + r).ceil() as isize).min(w - 1);
    let ya = ((cy - r).floor() as isize).max(0);
    let yb = ((cy + r).ceil() as isize).min(h - 1);
    let r2 = r * r;
    for y in ya..=yb {
        for x in xa..=xb {
            let dx = x as f64 + 0.5 - cx;
            let dy = y as f64 + 0.5 - cy;
            if dx * dx + dy * dy <= r2 {
                canvas.set(x as usize, y as usize, true);
            }
        }
    }
}
