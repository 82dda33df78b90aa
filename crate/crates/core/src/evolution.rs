//! Maturity-driven simplification of trajectory plans.
//!
//! A mature writer reaches a letter through fewer targets than a child. The
//! degree of evolution `E` is the percentage of plan points kept; selection
//! keeps the start (one of the first two points) and the end, draws one point
//! from each run of consecutive interior points, and insists that at least one
//! guide-line point per glyph survives. Glyphs may revisit a node, so a draw
//! that puts two coincident points next to each other is redrawn as well.

use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Result};
use crate::plan::TrajectoryPlan;
use crate::rng::seeded;

/// Minimum number of points a simplified glyph may keep.
pub const MIN_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    /// Percentage of plan points retained, in `[E_min, 100]`.
    pub e: f64,
    pub rng_seed: u64,
    pub max_legibility_retries: usize,
}

impl EvolutionConfig {
    pub fn new(e: f64, rng_seed: u64) -> Self {
        Self {
            e,
            rng_seed,
            max_legibility_retries: 1000,
        }
    }
}

/// Smallest feasible `E` for a glyph of `n_sl` points.
pub fn min_maturity(n_sl: usize) -> f64 {
    100.0 * MIN_POINTS as f64 / n_sl as f64
}

/// Number of points `L = round(n_sl · E / 100)` kept from a glyph of `n_sl`
/// points, clamped to `[5, n_sl]`.
pub fn target_count(n_sl: usize, e: f64) -> Result<usize> {
    if n_sl < MIN_POINTS {
        return Err(Error::InvalidInput(format!(
            "plan needs at least {MIN_POINTS} points, has {n_sl}"
        )));
    }
    if !e.is_finite() || e > 100.0 {
        return Err(Error::Domain {
            name: "E",
            value: e,
            reason: "must be a percentage no greater than 100",
        });
    }
    let min = min_maturity(n_sl);
    if e < min - 1e-9 {
        return Err(Error::InfeasibleMaturity { e, n_sl, min });
    }
    let l = (n_sl as f64 * e / 100.0).round() as usize;
    Ok(l.clamp(MIN_POINTS, n_sl))
}

/// Linear noise schedule: `(ε_D, ε_t)` fall from `(0.3, 0.02 s)` at `E = 100`
/// to zero at `E = 20`. `E` outside `[20, 100]` is clamped.
pub fn scale_noise(e: f64) -> (f64, f64) {
    let f = ((e - 20.0) / 80.0).clamp(0.0, 1.0);
    (0.3 * f, 0.02 * f)
}

/// Splits `len` consecutive items into `clusters` contiguous runs whose sizes
/// differ by at most one, larger runs first.
pub fn cluster_ranges(len: usize, clusters: usize) -> Vec<Range<usize>> {
    if clusters == 0 {
        return Vec::new();
    }
    let base = len / clusters;
    let extra = len % clusters;
    let mut out = Vec::with_capacity(clusters);
    let mut start = 0;
    for k in 0..clusters {
        let size = base + usize::from(k < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}

/// Simplifies every glyph of `plan` independently to `L` points.
///
/// The output is an order-preserving subsequence of the input. Pen-up moves
/// between letters are kept; within a glyph, the pen is down between two kept
/// points only if it was down along every original move between them.
pub fn evolve_plan(plan: &TrajectoryPlan, cfg: &EvolutionConfig) -> Result<TrajectoryPlan> {
    plan.validate()?;
    let mut rng = seeded(cfg.rng_seed);
    let mut keep: Vec<usize> = Vec::with_capacity(plan.n_sl());

    for (gi, range) in plan.glyph_ranges().into_iter().enumerate() {
        let n = range.len();
        let l = target_count(n, cfg.e)?;
        if l == n {
            keep.extend(range);
            continue;
        }
        let clusters = cluster_ranges(n - 3, l - 2);
        let point = |i: usize| &plan.points[range.start + i];
        let tagged = |i: usize| point(i).tag.is_some();
        let needs_tag = (0..n).any(tagged);
        let coincident = |a: usize, b: usize| {
            let (p, q) = (point(a), point(b));
            p.x == q.x && p.y == q.y
        };

        let mut picks = Vec::with_capacity(l);
        let mut attempt = 0;
        loop {
            picks.clear();
            picks.push(rng.random_range(0..2usize));
            for c in &clusters {
                picks.push(2 + rng.random_range(c.clone()));
            }
            picks.push(n - 1);
            let legible = !needs_tag || picks.iter().any(|&i| tagged(i));
            let distinct = picks.windows(2).all(|w| !coincident(w[0], w[1]));
            if legible && distinct {
                break;
            }
            attempt += 1;
            if attempt > cfg.max_legibility_retries {
                return Err(Error::Legibility {
                    glyph: gi,
                    letter: plan.letters.get(gi).copied().unwrap_or('?'),
                    retries: cfg.max_legibility_retries,
                });
            }
        }
        keep.extend(picks.iter().map(|&i| range.start + i));
    }

    let points = keep.iter().map(|&i| plan.points[i]).collect();
    let pen_down = keep
        .windows(2)
        .map(|w| plan.pen_down[w[0]..w[1]].iter().all(|&d| d))
        .collect();
    Ok(TrajectoryPlan {
        points,
        pen_down,
        letters: plan.letters.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::{GuideTag, PlanPoint};

    fn line_plan(n: usize) -> TrajectoryPlan {
        let pts: Vec<_> = (0..n).map(|i| (i as f64, (i % 3) as f64)).collect();
        TrajectoryPlan::from_points(&pts)
    }

    #[test]
    fn target_counts() {
        assert_eq!(target_count(25, 100.0).unwrap(), 25);
        assert_eq!(target_count(25, 20.0).unwrap(), 5);
        assert_eq!(target_count(30, 50.0).unwrap(), 15);
        assert!(matches!(
            target_count(25, 19.9),
            Err(Error::InfeasibleMaturity { .. })
        ));
        assert!(target_count(25, 101.0).is_err());
        assert!(target_count(4, 100.0).is_err());
    }

    #[test]
    fn noise_schedule() {
        assert_eq!(scale_noise(100.0), (0.3, 0.02));
        assert_eq!(scale_noise(20.0), (0.0, 0.0));
        let (d, t) = scale_noise(60.0);
        assert!((d - 0.15).abs() < 1e-15 && (t - 0.01).abs() < 1e-15);
        assert_eq!(scale_noise(5.0), (0.0, 0.0));
        assert_eq!(scale_noise(140.0), (0.3, 0.02));
    }

    #[test]
    fn clusters_cover_interior() {
        let c = cluster_ranges(22, 3);
        assert_eq!(c, vec![0..8, 8..15, 15..22]);
        let c = cluster_ranges(10, 10);
        assert!(c.iter().all(|r| r.len() == 1));
    }

    #[test]
    fn full_retention_keeps_plan() {
        let plan = line_plan(25);
        let out = evolve_plan(&plan, &EvolutionConfig::new(100.0, 3)).unwrap();
        assert_eq!(out, plan);
    }

    #[test]
    fn minimum_maturity_shape() {
        let plan = line_plan(25);
        for seed in 0..50 {
            let out = evolve_plan(&plan, &EvolutionConfig::new(20.0, seed)).unwrap();
            assert_eq!(out.n_sl(), 5);
            assert!(out.points[0] == plan.points[0] || out.points[0] == plan.points[1]);
            assert_eq!(out.points[4], plan.points[24]);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let plan = line_plan(40);
        let cfg = EvolutionConfig::new(35.0, 99);
        assert_eq!(evolve_plan(&plan, &cfg).unwrap(), evolve_plan(&plan, &cfg).unwrap());
    }

    #[test]
    fn unsatisfiable_legibility_is_reported() {
        // The only tagged point is index 0 and we allow no retries, so any
        // draw that starts at index 1 fails.
        let mut plan = line_plan(25);
        plan.points[0].tag = Some(GuideTag::Lower2);
        plan.letters = vec!['q'];
        let mut failures = 0;
        for seed in 0..40 {
            let cfg = EvolutionConfig {
                max_legibility_retries: 0,
                ..EvolutionConfig::new(20.0, seed)
            };
            match evolve_plan(&plan, &cfg) {
                Ok(out) => assert_eq!(out.points[0], plan.points[0]),
                Err(Error::Legibility { glyph, letter, .. }) => {
                    assert_eq!((glyph, letter), (0, 'q'));
                    failures += 1;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(failures > 0);
    }

    #[test]
    fn glyphs_evolve_independently_and_keep_pen_lifts() {
        let mut points = Vec::new();
        for g in 0..3 {
            for i in 0..25 {
                points.push(PlanPoint {
                    x: g as f64 * 100.0 + i as f64,
                    y: 0.0,
                    tag: None,
                    glyph: g,
                });
            }
        }
        let mut pen_down = vec![true; 74];
        pen_down[24] = false;
        pen_down[49] = false;
        let plan = TrajectoryPlan {
            points,
            pen_down,
            letters: vec!['a', 'b', 'c'],
        };
        let out = evolve_plan(&plan, &EvolutionConfig::new(20.0, 5)).unwrap();
        assert_eq!(out.n_sl(), 15);
        assert_eq!(out.pen_down_segments(), vec![0..5, 5..10, 10..15]);
    }
}
