//! Maturity sweep: synthesize a word repeatedly at several maturity levels
//! and summarise peaks, static strokes and within-level similarity.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::Result;
use crate::evaluation::features::{extract_features, FeatureVector};
use crate::evaluation::peaks::{count_velocity_peaks, DEFAULT_PROMINENCE};
use crate::evaluation::similarity::{similarity, SimilarityWeights};
use crate::evaluation::strokes::estimate_static_strokes;
use crate::evolution::{scale_noise, EvolutionConfig};
use crate::kinematics::{synthesize_word, WriterProfile};
use crate::plan::GlyphLibrary;
use crate::render::{render_offline, InkModel, DEFAULT_RESOLUTION};

pub const CURVE_HEADER: &str = "E,mean_peaks,mean_static_strokes,sim_q1,sim_q2,sim_q3,sim_min";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveOptions {
    pub ink: InkModel,
    pub resolution: f64,
    pub prominence: f64,
    pub weights: SimilarityWeights,
    /// Replace the profile's noise levels with the maturity schedule.
    pub scale_noise: bool,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self {
            ink: InkModel::default(),
            resolution: DEFAULT_RESOLUTION,
            prominence: DEFAULT_PROMINENCE,
            weights: SimilarityWeights::default(),
            scale_noise: true,
        }
    }
}

/// Raw measurements for one maturity level, in seed order.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub e: f64,
    pub peaks: Vec<usize>,
    pub static_strokes: Vec<usize>,
    /// Similarity of every unordered pair of samples, `(0,1), (0,2), …`.
    pub similarities: Vec<f64>,
}

fn mean(v: &[usize]) -> f64 {
    v.iter().sum::<usize>() as f64 / v.len().max(1) as f64
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl CurveRow {
    pub fn mean_peaks(&self) -> f64 {
        mean(&self.peaks)
    }

    pub fn mean_static_strokes(&self) -> f64 {
        mean(&self.static_strokes)
    }

    /// Quartiles of the pairwise similarities; `None` without pairs.
    pub fn similarity_quartiles(&self) -> Option<[f64; 3]> {
        if self.similarities.is_empty() {
            return None;
        }
        let mut s = self.similarities.clone();
        s.sort_by(f64::total_cmp);
        Some([quantile(&s, 0.25), quantile(&s, 0.5), quantile(&s, 0.75)])
    }

    pub fn min_similarity(&self) -> Option<f64> {
        self.similarities.iter().copied().reduce(f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaturityCurve {
    pub rows: Vec<CurveRow>,
}

impl MaturityCurve {
    /// Comma-separated table under [`CURVE_HEADER`]. Missing similarity
    /// statistics are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CURVE_HEADER);
        out.push('\n');
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        for r in &self.rows {
            let q = r.similarity_quartiles();
            let _ = writeln!(
                out,
                "{},{:.6},{:.6},{},{},{},{}",
                r.e,
                r.mean_peaks(),
                r.mean_static_strokes(),
                opt(q.map(|q| q[0])),
                opt(q.map(|q| q[1])),
                opt(q.map(|q| q[2])),
                opt(r.min_similarity()),
            );
        }
        out
    }
}

struct Cell {
    peaks: usize,
    strokes: usize,
    features: FeatureVector,
}

/// Synthesizes `word` `seeds` times for each maturity level. Sample `s` uses
/// seed `profile.rng_seed + s` for both the kinematic noise and the plan
/// simplification, so rows for different `E` share their seeds.
pub fn maturity_curve(
    word: &str,
    profile: &WriterProfile,
    e_values: &[f64],
    seeds: usize,
    library: &GlyphLibrary,
    opts: &CurveOptions,
) -> Result<MaturityCurve> {
    profile.validate()?;
    opts.weights.validate()?;
    let jobs: Vec<(usize, u64)> = (0..e_values.len())
        .flat_map(|ei| (0..seeds as u64).map(move |s| (ei, s)))
        .collect();
    let cells: Vec<Cell> = jobs
        .par_iter()
        .map(|&(ei, s)| {
            let e = e_values[ei];
            let seed = profile.rng_seed.wrapping_add(s);
            let mut p = WriterProfile {
                rng_seed: seed,
                ..*profile
            };
            if opts.scale_noise {
                (p.eps_d, p.eps_t) = scale_noise(e);
            }
            let traj = synthesize_word(word, &p, &EvolutionConfig::new(e, seed), library)?;
            let img = render_offline(&traj, &opts.ink, opts.resolution);
            Ok(Cell {
                peaks: count_velocity_peaks(&traj, opts.prominence),
                strokes: estimate_static_strokes(&img),
                features: extract_features(&img, &library.guides),
            })
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(e_values.len());
    for (ei, &e) in e_values.iter().enumerate() {
        let group = &cells[ei * seeds..(ei + 1) * seeds];
        let mut similarities = Vec::with_capacity(seeds * seeds.saturating_sub(1) / 2);
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                similarities.push(similarity(&group[i].features, &group[j].features, opts.weights)?);
            }
        }
        rows.push(CurveRow {
            e,
            peaks: group.iter().map(|c| c.peaks).collect(),
            static_strokes: group.iter().map(|c| c.strokes).collect(),
            similarities,
        });
    }
    Ok(MaturityCurve { rows })
}
