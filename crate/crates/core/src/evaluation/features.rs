//! Fuzzy feature vectors of offline word images.
//!
//! Layout (54 values, all in `[0, 1]`):
//! - 0..45: ink density of a 9-column by 5-row grid over the ink bounding
//!   box, row-major from the top, through a ramp saturating at density 0.5;
//! - 45..50: histogram of skeleton turning angles in 36° bins;
//! - 50..54: ascender presence, descender presence, width/height ratio
//!   (clamped to 3, scaled by 1/3) and the ink fraction of the bounding box.

use crate::error::{Error, Result};
use crate::evaluation::skeleton::turning_angles;
use crate::evaluation::strokes::{curvature_window, skeleton_chains};
use crate::plan::GuideLines;
use crate::raster::Raster;

pub const FEATURE_LEN: usize = 54;
pub const ZONE_COLS: usize = 9;
pub const ZONE_ROWS: usize = 5;
pub const CURVATURE_BINS: usize = 5;
/// Zone density at which membership saturates.
pub const DENSITY_SATURATION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn zeros() -> Self {
        Self {
            values: vec![0.0; FEATURE_LEN],
        }
    }

    /// Checks length and range.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() != FEATURE_LEN {
            return Err(Error::Dimension {
                expected: FEATURE_LEN,
                got: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Domain {
                name: "feature",
                value: v,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(Self { values })
    }

    pub fn zones(&self) -> &[f64] {
        &self.values[..45]
    }

    pub fn curvature(&self) -> &[f64] {
        &self.values[45..50]
    }

    pub fn shape(&self) -> &[f64] {
        &self.values[50..]
    }
}

/// Splits `[lo, lo + len)` into `parts` pieces; returns the piece bounds.
fn split(lo: usize, len: usize, parts: usize) -> Vec<(usize, usize)> {
    (0..parts)
        .map(|k| (lo + k * len / parts, lo + (k + 1) * len / parts))
        .collect()
}

pub fn extract_features(img: &Raster, layout: &GuideLines) -> FeatureVector {
    let Some((x0, y0, x1, y1)) = img.ink_bounds() else {
        return FeatureVector::zeros();
    };
    let (bw, bh) = (x1 - x0 + 1, y1 - y0 + 1);
    let mut values = Vec::with_capacity(FEATURE_LEN);

    for &(ra, rb) in &split(y0, bh, ZONE_ROWS) {
        for &(ca, cb) in &split(x0, bw, ZONE_COLS) {
            let density = if ra == rb || ca == cb {
                // Box narrower than the grid: sample the cell's centre pixel.
                let cx = (ca + cb.max(ca + 1)) / 2;
                let cy = (ra + rb.max(ra + 1)) / 2;
                f64::from(u8::from(img.get(cx.min(x1), cy.min(y1))))
            } else {
                let ink = (ra..rb)
                    .flat_map(|y| (ca..cb).map(move |x| (x, y)))
                    .filter(|&(x, y)| img.get(x, y))
                    .count();
                ink as f64 / ((rb - ra) * (cb - ca)) as f64
            };
            values.push((density / DENSITY_SATURATION).min(1.0));
        }
    }

    let w = curvature_window(img.px_per_mm());
    let mut hist = [0.0; CURVATURE_BINS];
    for chain in skeleton_chains(img) {
        for a in turning_angles(&chain.points, w) {
            let bin = ((a / 36.0) as usize).min(CURVATURE_BINS - 1);
            hist[bin] += 1.0;
        }
    }
    let total: f64 = hist.iter().sum();
    values.extend(hist.iter().map(|&c| if total > 0.0 { c / total } else { 0.0 }));

    let (asc, desc) = extenders(img, layout, (x0, y0, x1, y1));
    values.push(asc);
    values.push(desc);
    values.push((bw as f64 / bh as f64).min(3.0) / 3.0);
    let ink = img.ink_count() as f64;
    values.push(ink / (bw * bh) as f64);
    FeatureVector { values }
}

/// Ascender and descender presence. The corpus band is the window of
/// corpus height (taken from `layout`) holding the most ink; ink above or
/// below it is measured against the layout's ascender and descender room.
fn extenders(
    img: &Raster,
    layout: &GuideLines,
    (x0, y0, x1, y1): (usize, usize, usize, usize),
) -> (f64, f64) {
    let ppm = img.px_per_mm();
    let bh = y1 - y0 + 1;
    let band = (((layout.corpus_top - layout.baseline) * ppm).round() as usize).clamp(1, bh);
    let rows: Vec<usize> = (y0..=y1)
        .map(|y| (x0..=x1).filter(|&x| img.get(x, y)).count())
        .collect();
    let mut sum: usize = rows[..band].iter().sum();
    let (mut best, mut best_top) = (sum, 0);
    for top in 1..=bh - band {
        sum = sum + rows[top + band - 1] - rows[top - 1];
        if sum > best {
            best = sum;
            best_top = top;
        }
    }
    let above = best_top as f64 / ppm;
    let below = (bh - best_top - band) as f64 / ppm;
    let ramp = |ext: f64, room: f64| {
        if room > 0.0 {
            (ext / room).clamp(0.0, 1.0)
        } else {
            f64::from(u8::from(ext > 0.0))
        }
    };
    (
        ramp(above, layout.upper1 - layout.corpus_top),
        ramp(below, layout.baseline - layout.lower2),
    )
}
