//! Stroke counting on offline images.
//!
//! Small enclosed holes (slivers left where the pen retraced its own path)
//! are filled, the ink is thinned to a one-pixel skeleton and split into
//! chains between endpoints and junctions. Chains meeting at a junction are
//! rejoined when one continues the other in a nearly straight line, and each
//! resulting stroke is cut again wherever it bends faster than
//! [`CURVATURE_SPLIT`].

use std::collections::VecDeque;

use crate::evaluation::skeleton::{
    prune_spurs, skeletonize, trace_polylines, turning_angles, Polyline,
};
use crate::raster::Raster;

/// Curvature above which a chain is cut, degrees per mm.
pub const CURVATURE_SPLIT: f64 = 60.0;
/// Chains shorter than this (mm) are thinning debris.
pub const MIN_CHAIN_MM: f64 = 0.5;
/// Half-width of the chord window used to measure bending, mm.
pub const CURVATURE_WINDOW_MM: f64 = 0.5;
/// Enclosed background regions smaller than this (mm²) are filled.
pub const MAX_HOLE_MM2: f64 = 1.0;
/// Largest direction change (degrees) at which two branches meeting at a
/// junction are read as one stroke.
pub const MAX_CONTINUATION_DEG: f64 = 45.0;

/// Chord half-window in pixels at `px_per_mm`, at least two pixels.
pub fn curvature_window(px_per_mm: f64) -> usize {
    ((CURVATURE_WINDOW_MM * px_per_mm).round() as usize).max(2)
}

/// Fills 4-connected background components that do not touch the border and
/// have fewer than `max_area` pixels.
pub fn fill_small_holes(img: &Raster, max_area: usize) -> Raster {
    let (w, h) = (img.width(), img.height());
    let mut label = vec![usize::MAX; w * h];
    let mut out = img.clone();
    let mut queue = VecDeque::new();
    let mut members = Vec::new();
    for start in 0..w * h {
        let (sx, sy) = (start % w, start / w);
        if img.get(sx, sy) || label[start] != usize::MAX {
            continue;
        }
        members.clear();
        let mut open = false;
        label[start] = start;
        queue.push_back((sx, sy));
        while let Some((x, y)) = queue.pop_front() {
            members.push((x, y));
            open |= x == 0 || y == 0 || x + 1 == w || y + 1 == h;
            let cand = [
                (x.wrapping_sub(1), y),
                (x + 1, y),
                (x, y.wrapping_sub(1)),
                (x, y + 1),
            ];
            for (nx, ny) in cand {
                if nx < w && ny < h && !img.get(nx, ny) && label[ny * w + nx] == usize::MAX {
                    label[ny * w + nx] = start;
                    queue.push_back((nx, ny));
                }
            }
        }
        if !open && members.len() < max_area {
            for &(x, y) in &members {
                out.set(x, y, true);
            }
        }
    }
    out
}

/// A skeleton chain with the junctions (if any) at its two ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub points: Vec<(usize, usize)>,
    pub junctions: (Option<usize>, Option<usize>),
}

/// Skeleton chains of `img` after hole filling, spur pruning and the length
/// floor.
pub fn skeleton_chains(img: &Raster) -> Vec<Chain> {
    if img.is_blank() {
        return Vec::new();
    }
    let ppm = img.px_per_mm();
    let min_len = MIN_CHAIN_MM * ppm;
    let filled = fill_small_holes(img, (MAX_HOLE_MM2 * ppm * ppm).round() as usize);
    let mut sk = skeletonize(&filled);
    prune_spurs(&mut sk, min_len);
    let width = sk.width();
    let id = |p: (usize, usize)| p.1 * width + p.0;

    // Junction pixels joined by debris links form one junction.
    let mut junctions = UnionFind::new(width * sk.height());
    let mut kept: Vec<Polyline> = Vec::new();
    for p in trace_polylines(&sk) {
        if p.length() >= min_len {
            kept.push(p);
        } else if p.end_degrees.0 >= 3 && p.end_degrees.1 >= 3 {
            junctions.union(id(p.points[0]), id(*p.points.last().unwrap()));
        }
    }
    kept.into_iter()
        .map(|p| {
            let first = (p.end_degrees.0 >= 3).then(|| junctions.find(id(p.points[0])));
            let last = (p.end_degrees.1 >= 3).then(|| junctions.find(id(*p.points.last().unwrap())));
            Chain {
                points: p.points,
                junctions: (first, last),
            }
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Curvature along a chain in degrees per mm, one value per interior point
/// with a full window on both sides.
pub fn chain_curvature(chain: &[(usize, usize)], px_per_mm: f64) -> Vec<f64> {
    let w = curvature_window(px_per_mm);
    let arc_mm = 2.0 * w as f64 / px_per_mm;
    turning_angles(chain, w).into_iter().map(|a| a / arc_mm).collect()
}

/// Number of runs of `k` above [`CURVATURE_SPLIT`].
fn curvature_splits(k: &[f64]) -> usize {
    k.iter()
        .zip(std::iter::once(&0.0).chain(k.iter()))
        .filter(|&(&cur, &prev)| cur > CURVATURE_SPLIT && prev <= CURVATURE_SPLIT)
        .count()
}

/// Unit direction leaving a chain end, pointing into the chain.
fn end_direction(points: &[(usize, usize)], from_start: bool, reach: usize) -> (f64, f64) {
    let n = points.len();
    let k = reach.min(n - 1);
    let (a, b) = if from_start {
        (points[0], points[k])
    } else {
        (points[n - 1], points[n - 1 - k])
    };
    let (dx, dy) = (b.0 as f64 - a.0 as f64, b.1 as f64 - a.1 as f64);
    let len = dx.hypot(dy);
    if len > 0.0 {
        (dx / len, dy / len)
    } else {
        (0.0, 0.0)
    }
}

/// Number of strokes visible in a binary image. A blank image has none.
pub fn estimate_static_strokes(img: &Raster) -> usize {
    let ppm = img.px_per_mm();
    let chains = skeleton_chains(img);
    if chains.is_empty() {
        return 0;
    }
    let reach = 2 * curvature_window(ppm);

    // Branch ends grouped by junction.
    let mut ends: Vec<(usize, usize, (f64, f64))> = Vec::new();
    for (ci, c) in chains.iter().enumerate() {
        if let Some(j) = c.junctions.0 {
            ends.push((j, ci, end_direction(&c.points, true, reach)));
        }
        if let Some(j) = c.junctions.1 {
            ends.push((j, ci, end_direction(&c.points, false, reach)));
        }
    }
    ends.sort_by_key(|e| e.0);

    let mut strokes = UnionFind::new(chains.len());
    let mut components = chains.len();
    let min_cos = -(MAX_CONTINUATION_DEG.to_radians().cos());
    for group in ends.chunk_by(|a, b| a.0 == b.0) {
        // Candidate pairs, straightest continuation first.
        let mut pairs = Vec::new();
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                let (a, b) = (group[i].2, group[j].2);
                let cos = a.0 * b.0 + a.1 * b.1;
                if cos <= min_cos {
                    pairs.push((cos, i, j));
                }
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut used = vec![false; group.len()];
        for (_, i, j) in pairs {
            if used[i] || used[j] {
                continue;
            }
            used[i] = true;
            used[j] = true;
            let (ra, rb) = (strokes.find(group[i].1), strokes.find(group[j].1));
            if ra != rb {
                strokes.union(ra, rb);
                components -= 1;
            }
        }
    }

    let splits: usize = chains
        .iter()
        .map(|c| curvature_splits(&chain_curvature(&c.points, ppm)))
        .sum();
    components + splits
}
