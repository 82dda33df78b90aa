//! Effector-dependent execution of a trajectory plan.
//!
//! Every move between consecutive pen-down targets becomes one lognormal
//! speed pulse. Pulses share a writer-wide shape (`μ = 0`, `σ = 0.01 + K_σ`);
//! onsets accumulate a constant lag plus an angle-dependent lag, and
//! amplitudes follow the target spacing. The superposed velocity is
//! integrated into pen positions on a uniform clock.

use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::evolution::{evolve_plan, EvolutionConfig};
use crate::lognormal::{delay_factor, LognormalStroke};
use crate::plan::{build_word_plan, GlyphLibrary, LetterSpacing, PlanPoint, TrajectoryPlan};
use crate::rng::{seeded, SimRng};

/// 200 Hz, the sampling rate of a typical digitizing tablet.
pub const DEFAULT_DT: f64 = 0.005;

/// A pulse is considered finished once it falls below this fraction of the
/// largest stroke amplitude.
pub const TAIL_CUTOFF: f64 = 1e-6;

/// Writer-specific motor parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WriterProfile {
    /// Added to the base log-time scale of 0.01; 0 for young children, 0.04
    /// for adults.
    pub k_sigma: f64,
    /// Constant inter-onset lag, seconds.
    pub k_t: f64,
    /// Largest angle-dependent lag (reached at a full reversal), seconds.
    pub k_alpha: f64,
    /// Amplitude gain; `None` uses the reference distance, giving unit gain.
    pub k_d: Option<f64>,
    /// Standard deviation of the onset jitter, seconds.
    pub eps_t: f64,
    /// Standard deviation of the amplitude error as a fraction of the
    /// reference distance.
    pub eps_d: f64,
    pub mu: f64,
    pub rng_seed: u64,
}

impl Default for WriterProfile {
    fn default() -> Self {
        Self {
            k_sigma: 0.04,
            k_t: 0.04,
            k_alpha: 0.2,
            k_d: None,
            eps_t: 0.0,
            eps_d: 0.0,
            mu: 0.0,
            rng_seed: 0,
        }
    }
}

impl WriterProfile {
    pub fn sigma(&self) -> f64 {
        0.01 + self.k_sigma
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name, value: f64, ok: bool, reason| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain {
                    name,
                    value,
                    reason,
                })
            }
        };
        check(
            "K_sigma",
            self.k_sigma,
            (0.0..=0.04).contains(&self.k_sigma),
            "must lie in [0, 0.04]",
        )?;
        check("K_t", self.k_t, self.k_t > 0.0, "must be > 0")?;
        check("K_alpha", self.k_alpha, self.k_alpha >= 0.0, "must be >= 0")?;
        if let Some(k_d) = self.k_d {
            check("K_D", k_d, k_d > 0.0, "must be > 0")?;
        }
        check("eps_t", self.eps_t, self.eps_t >= 0.0, "must be >= 0")?;
        check("eps_D", self.eps_d, self.eps_d >= 0.0, "must be >= 0")?;
        check("mu", self.mu, true, "must be finite")?;
        Ok(())
    }
}

/// One uniformly spaced trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub speed: f64,
    pub pen_down: bool,
}

/// Online handwriting: pen state and kinematics on a uniform clock.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrajectory {
    pub dt: f64,
    pub samples: Vec<Sample>,
}

impl SampledTrajectory {
    pub fn empty(dt: f64) -> Self {
        Self {
            dt,
            samples: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        }
    }

    pub fn speeds(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.speed).collect()
    }

    /// Index ranges of maximal pen-down runs.
    pub fn pen_down_runs(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, s) in self.samples.iter().enumerate() {
            match (s.pen_down, start) {
                (true, None) => start = Some(i),
                (false, Some(b)) => {
                    out.push(b..i);
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(b) = start {
            out.push(b..self.samples.len());
        }
        out
    }
}

/// Lognormal strokes for one pen-down run of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct StrokeSegment {
    /// First plan point of the run; the integration constant.
    pub start: (f64, f64),
    pub strokes: Vec<LognormalStroke>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrokePlan {
    pub segments: Vec<StrokeSegment>,
    /// Moves that produced no stroke: coincident targets, or an amplitude
    /// driven to zero by noise.
    pub dropped: usize,
}

impl StrokePlan {
    pub fn strokes(&self) -> impl Iterator<Item = &LognormalStroke> {
        self.segments.iter().flat_map(|s| s.strokes.iter())
    }
}

/// Interior angle at `vertex`, in degrees: 180 for a straight continuation,
/// 0 for a full reversal.
pub fn interior_angle(prev: (f64, f64), vertex: (f64, f64), next: (f64, f64)) -> Result<f64> {
    let a = (prev.0 - vertex.0, prev.1 - vertex.1);
    let b = (next.0 - vertex.0, next.1 - vertex.1);
    let na = a.0.hypot(a.1);
    let nb = b.0.hypot(b.1);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::DegenerateSegment);
    }
    let cos = ((a.0 * b.0 + a.1 * b.1) / (na * nb)).clamp(-1.0, 1.0);
    Ok(cos.acos().to_degrees())
}

/// Assigns lognormal parameters to every pen-down move of `plan`, drawing
/// noise from the profile's seed. `d_ref` is the nominal target spacing.
pub fn assign_parameters(
    plan: &TrajectoryPlan,
    profile: &WriterProfile,
    d_ref: f64,
) -> Result<StrokePlan> {
    let mut rng = seeded(profile.rng_seed);
    assign_parameters_with(plan, profile, d_ref, &mut rng)
}

pub fn assign_parameters_with(
    plan: &TrajectoryPlan,
    profile: &WriterProfile,
    d_ref: f64,
    rng: &mut SimRng,
) -> Result<StrokePlan> {
    profile.validate()?;
    if !(d_ref > 0.0) || !d_ref.is_finite() {
        return Err(Error::Domain {
            name: "d_ref",
            value: d_ref,
            reason: "must be finite and > 0",
        });
    }
    plan.validate()?;
    let mut out = StrokePlan {
        segments: Vec::new(),
        dropped: 0,
    };
    for range in plan.pen_down_segments() {
        let (segment, dropped) = assign_segment(&plan.points[range], profile, d_ref, rng)?;
        out.segments.push(segment);
        out.dropped += dropped;
    }
    Ok(out)
}

fn assign_segment(
    points: &[PlanPoint],
    profile: &WriterProfile,
    d_ref: f64,
    rng: &mut SimRng,
) -> Result<(StrokeSegment, usize)> {
    let sigma = profile.sigma();
    let k_d = profile.k_d.unwrap_or(d_ref);
    let jitter = Normal::new(0.0, profile.eps_t).map_err(|_| Error::Domain {
        name: "eps_t",
        value: profile.eps_t,
        reason: "invalid standard deviation",
    })?;
    let spread = Normal::new(0.0, profile.eps_d * d_ref).map_err(|_| Error::Domain {
        name: "eps_D",
        value: profile.eps_d,
        reason: "invalid standard deviation",
    })?;

    let pos = |p: &PlanPoint| (p.x, p.y);
    let mut strokes = Vec::with_capacity(points.len().saturating_sub(1));
    let mut dropped = 0;
    let mut onset = 0.0;
    let mut heading: Option<(f64, f64)> = None;
    for pair in points.windows(2) {
        let dx = pair[1].x - pair[0].x;
        let dy = pair[1].y - pair[0].y;
        let d_act = dx.hypot(dy);
        if d_act == 0.0 {
            dropped += 1;
            continue;
        }
        let alpha = match heading {
            None => 180.0,
            Some((hx, hy)) => interior_angle((-hx, -hy), (0.0, 0.0), (dx, dy))?,
        };
        heading = Some((dx, dy));

        let delta = jitter.sample(rng);
        onset += profile.k_t + delta + profile.k_alpha * delay_factor(alpha)?;
        let noise = spread.sample(rng);
        let amplitude = (k_d * (d_act + noise) / d_ref).max(0.0);
        if amplitude == 0.0 {
            dropped += 1;
            continue;
        }
        strokes.push(LognormalStroke::along(
            onset.max(0.0),
            profile.mu,
            sigma,
            amplitude,
            dx,
            dy,
        ));
    }
    let start = points.first().map(pos).unwrap_or((0.0, 0.0));
    Ok((StrokeSegment { start, strokes }, dropped))
}

/// Sums the velocity of all `strokes` on a uniform clock starting at 0 and
/// running until every pulse has faded. Positions are left at zero.
pub fn synthesize_velocity(strokes: &[LognormalStroke], dt: f64) -> Result<SampledTrajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain {
            name: "dt",
            value: dt,
            reason: "must be finite and > 0",
        });
    }
    for s in strokes {
        s.validate()?;
    }
    let max_d = strokes.iter().map(|s| s.amplitude).fold(0.0, f64::max);
    let end = if max_d > 0.0 {
        let thr = TAIL_CUTOFF * max_d;
        strokes
            .iter()
            .map(|s| s.fade_time(thr))
            .fold(0.0, f64::max)
    } else {
        strokes.iter().map(|s| s.t0).fold(0.0, f64::max)
    };
    let n = (end / dt).ceil() as usize + 1;
    let samples = (0..n)
        .map(|k| {
            let t = k as f64 * dt;
            let (vx, vy) = strokes.iter().fold((0.0, 0.0), |(ax, ay), s| {
                let (x, y) = s.velocity_unchecked(t);
                (ax + x, ay + y)
            });
            Sample {
                t,
                x: 0.0,
                y: 0.0,
                vx,
                vy,
                speed: vx.hypot(vy),
                pen_down: true,
            }
        })
        .collect();
    Ok(SampledTrajectory { dt, samples })
}

/// Cumulative trapezoidal integration of the velocity fields from `start`.
pub fn integrate_trajectory(vel: &SampledTrajectory, start: (f64, f64)) -> SampledTrajectory {
    let mut out = vel.clone();
    let half = 0.5 * vel.dt;
    let (mut x, mut y) = start;
    for k in 0..out.samples.len() {
        if k > 0 {
            let (a, b) = (vel.samples[k - 1], vel.samples[k]);
            x += half * (a.vx + b.vx);
            y += half * (a.vy + b.vy);
        }
        out.samples[k].x = x;
        out.samples[k].y = y;
    }
    out
}

/// Runs every pen-down segment of an already evolved plan through the
/// kinematic model and joins the results on one clock. A single pen-up sample
/// separates consecutive segments and carries the pen to the next start.
pub fn synthesize_plan(
    plan: &TrajectoryPlan,
    profile: &WriterProfile,
    d_ref: f64,
    dt: f64,
) -> Result<SampledTrajectory> {
    let strokes = assign_parameters(plan, profile, d_ref)?;
    let mut out = SampledTrajectory::empty(dt);
    for segment in &strokes.segments {
        let vel = synthesize_velocity(&segment.strokes, dt)?;
        let part = integrate_trajectory(&vel, segment.start);
        let offset = match out.samples.last() {
            None => 0.0,
            Some(last) => {
                let t = last.t + dt;
                out.samples.push(Sample {
                    t,
                    x: segment.start.0,
                    y: segment.start.1,
                    vx: 0.0,
                    vy: 0.0,
                    speed: 0.0,
                    pen_down: false,
                });
                t + dt
            }
        };
        out.samples.extend(part.samples.into_iter().map(|mut s| {
            s.t = offset + s.t;
            s
        }));
    }
    // Re-stamp the clock so spacing is exactly uniform.
    for (k, s) in out.samples.iter_mut().enumerate() {
        s.t = k as f64 * dt;
    }
    Ok(out)
}

/// Full pipeline: word plan, maturity simplification, kinematics.
pub fn synthesize_word(
    word: &str,
    profile: &WriterProfile,
    cfg: &EvolutionConfig,
    library: &GlyphLibrary,
) -> Result<SampledTrajectory> {
    let plan = build_word_plan(word, library, LetterSpacing::Proportional)?;
    let evolved = evolve_plan(&plan, cfg)?;
    synthesize_plan(&evolved, profile, library.grid.pitch, DEFAULT_DT)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adult() -> WriterProfile {
        WriterProfile::default()
    }

    #[test]
    fn interior_angles() {
        assert_eq!(interior_angle((0., 0.), (1., 0.), (2., 0.)).unwrap(), 180.0);
        assert!((interior_angle((0., 0.), (1., 0.), (1., 1.)).unwrap() - 90.0).abs() < 1e-12);
        assert_eq!(interior_angle((0., 0.), (1., 0.), (0., 0.)).unwrap(), 0.0);
        assert!(matches!(
            interior_angle((1., 0.), (1., 0.), (0., 0.)),
            Err(Error::DegenerateSegment)
        ));
    }

    #[test]
    fn collinear_onset_gap() {
        let plan = TrajectoryPlan::from_points(&[(0., 0.), (1., 0.), (2., 0.)]);
        let sp = assign_parameters(&plan, &adult(), 1.0).unwrap();
        let s = &sp.segments[0].strokes;
        let gap = s[1].t0 - s[0].t0;
        let expected = 0.04 + 0.2 / (1.0 + 6.9f64.exp());
        assert!((gap - expected).abs() < 1e-12);
        assert!((gap - 0.0402).abs() < 1e-4);
    }

    #[test]
    fn reversal_onset_gap() {
        let plan = TrajectoryPlan::from_points(&[(0., 0.), (1., 0.), (0., 0.)]);
        let sp = assign_parameters(&plan, &adult(), 1.0).unwrap();
        let s = &sp.segments[0].strokes;
        let gap = s[1].t0 - s[0].t0;
        assert!((gap - 0.236).abs() < 1e-3, "{gap}");
    }

    #[test]
    fn unit_amplitude_ratio() {
        let plan = TrajectoryPlan::from_points(&[(0., 0.), (2.5, 0.)]);
        let profile = WriterProfile {
            k_d: Some(2.5),
            ..adult()
        };
        let sp = assign_parameters(&plan, &profile, 2.5).unwrap();
        assert_eq!(sp.segments[0].strokes[0].amplitude, 2.5);
        assert!((sp.segments[0].strokes[0].sigma - 0.05).abs() < 1e-15);
    }

    #[test]
    fn heavy_amplitude_noise_drops_strokes() {
        let pts: Vec<_> = (0..200).map(|i| (i as f64 * 0.1, 0.0)).collect();
        let plan = TrajectoryPlan::from_points(&pts);
        let profile = WriterProfile {
            eps_d: 3.0,
            rng_seed: 4,
            ..adult()
        };
        let sp = assign_parameters(&plan, &profile, 0.1).unwrap();
        assert!(sp.dropped > 0);
        assert_eq!(sp.segments[0].strokes.len() + sp.dropped, 199);
        assert!(sp.strokes().all(|s| s.amplitude > 0.0));
    }

    #[test]
    fn coincident_targets_are_skipped() {
        let plan = TrajectoryPlan::from_points(&[(0., 0.), (1., 0.), (1., 0.), (1., 1.)]);
        let sp = assign_parameters(&plan, &adult(), 1.0).unwrap();
        assert_eq!(sp.dropped, 1);
        let s = &sp.segments[0].strokes;
        assert_eq!(s.len(), 2);
        // The turn is measured across the skipped move: a right angle.
        let gap = s[1].t0 - s[0].t0;
        let expected = 0.04 + 0.2 * delay_factor(90.0).unwrap();
        assert!((gap - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_profile() {
        let plan = TrajectoryPlan::from_points(&[(0., 0.), (1., 0.)]);
        for p in [
            WriterProfile { k_sigma: 0.05, ..adult() },
            WriterProfile { k_t: 0.0, ..adult() },
            WriterProfile { eps_d: -0.1, ..adult() },
        ] {
            assert!(assign_parameters(&plan, &p, 1.0).is_err());
        }
    }

    #[test]
    fn horizontal_stroke_has_no_vertical_velocity() {
        let s = LognormalStroke::along(0.1, 0.0, 0.05, 3.0, 1.0, 0.0);
        let v = synthesize_velocity(&[s], DEFAULT_DT).unwrap();
        assert!(v.samples.iter().all(|s| s.vy == 0.0));
    }

    #[test]
    fn single_stroke_peak_speed() {
        let s = LognormalStroke::along(0.05, 0.0, 0.05, 3.0, 1.0, 1.0);
        let v = synthesize_velocity(&[s], DEFAULT_DT).unwrap();
        let max = v.speeds().into_iter().fold(0.0, f64::max);
        let peak = s.speed_unchecked(s.peak_time());
        assert!((max - peak).abs() / peak < 0.01);
    }

    #[test]
    fn velocity_grid_covers_tail() {
        let s = LognormalStroke::along(0.0, 0.0, 0.05, 1.0, 1.0, 0.0);
        let v = synthesize_velocity(&[s], DEFAULT_DT).unwrap();
        let last = v.samples.last().unwrap();
        assert!(last.speed < 1e-6);
        assert!(last.t > s.peak_time());
        for w in v.samples.windows(2) {
            assert!((w[1].t - w[0].t - DEFAULT_DT).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_velocity_keeps_start() {
        let v = SampledTrajectory {
            dt: 0.01,
            samples: vec![
                Sample { t: 0.0, x: 0.0, y: 0.0, vx: 0.0, vy: 0.0, speed: 0.0, pen_down: true };
                20
            ],
        };
        let p = integrate_trajectory(&v, (3.0, -2.0));
        assert!(p.samples.iter().all(|s| s.x == 3.0 && s.y == -2.0));
    }

    #[test]
    fn single_stroke_displacement() {
        let s = LognormalStroke::along(0.0, 0.0, 0.05, 4.0, 1.0, 0.0);
        let v = synthesize_velocity(&[s], DEFAULT_DT).unwrap();
        let p = integrate_trajectory(&v, (1.0, 0.0));
        let dx = p.samples.last().unwrap().x - 1.0;
        assert!((dx - 4.0).abs() / 4.0 < 0.005, "{dx}");
    }

    #[test]
    fn word_is_deterministic() {
        let lib = GlyphLibrary::builtin();
        let profile = WriterProfile { eps_d: 0.3, eps_t: 0.02, rng_seed: 11, ..adult() };
        let cfg = EvolutionConfig::new(100.0, 11);
        let a = synthesize_word("a", &profile, &cfg, &lib).unwrap();
        let b = synthesize_word("a", &profile, &cfg, &lib).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pen_up_between_letters() {
        let lib = GlyphLibrary::builtin();
        let traj =
            synthesize_word("aeiou", &adult(), &EvolutionConfig::new(50.0, 1), &lib).unwrap();
        assert_eq!(traj.pen_down_runs().len(), 5);
        for w in traj.samples.windows(2) {
            assert!((w[1].t - w[0].t - DEFAULT_DT).abs() < 1e-9);
        }
    }
}
