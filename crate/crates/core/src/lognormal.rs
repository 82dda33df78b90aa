//! Closed-form lognormal speed pulses and the sigmoid delay law.
//!
//! A single ballistic stroke has a speed profile
//! `D / (σ √(2π) (t − t0)) · exp(−(ln(t − t0) − μ)² / 2σ²)` for `t > t0`
//! and zero before its onset. Angles are expressed in degrees.

use crate::error::{Error, Result};

/// Slope of the fitted delay sigmoid, per degree.
pub const DELAY_SLOPE: f64 = 0.06;
/// Centre of the fitted delay sigmoid, in degrees.
pub const DELAY_CENTER: f64 = 65.0;

const UNDERFLOW: f64 = 1e-300;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Parameters of one lognormal stroke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognormalStroke {
    /// Onset time in seconds.
    pub t0: f64,
    /// Log-time location.
    pub mu: f64,
    /// Log-time scale, strictly positive.
    pub sigma: f64,
    /// Amplitude: the commanded displacement along the stroke.
    pub amplitude: f64,
    /// Direction angle folded into `[0, π/2]`; the quadrant lives in the signs.
    pub phi: f64,
    pub sgn_x: f64,
    pub sgn_y: f64,
}

impl LognormalStroke {
    /// A stroke travelling along `(dx, dy)`.
    pub fn along(t0: f64, mu: f64, sigma: f64, amplitude: f64, dx: f64, dy: f64) -> Self {
        Self {
            t0,
            mu,
            sigma,
            amplitude,
            phi: dy.abs().atan2(dx.abs()),
            sgn_x: signum0(dx),
            sgn_y: signum0(dy),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::Domain {
                name: "sigma",
                value: self.sigma,
                reason: "must be finite and > 0",
            });
        }
        if !(self.amplitude >= 0.0) || !self.amplitude.is_finite() {
            return Err(Error::Domain {
                name: "amplitude",
                value: self.amplitude,
                reason: "must be finite and >= 0",
            });
        }
        if !(self.t0 >= 0.0) || !self.t0.is_finite() {
            return Err(Error::Domain {
                name: "t0",
                value: self.t0,
                reason: "must be finite and >= 0",
            });
        }
        if !self.mu.is_finite() {
            return Err(Error::Domain {
                name: "mu",
                value: self.mu,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Speed magnitude at time `t`. Assumes a validated stroke.
    #[inline]
    pub fn speed_unchecked(&self, t: f64) -> f64 {
        let tau = t - self.t0;
        if !(tau > 0.0) || self.amplitude == 0.0 {
            return 0.0;
        }
        let ln_tau = tau.ln();
        let z = (ln_tau - self.mu) / self.sigma;
        let log_v = self.amplitude.ln() - self.sigma.ln() - LN_SQRT_2PI - ln_tau - 0.5 * z * z;
        let v = log_v.exp();
        if v < UNDERFLOW || !v.is_finite() {
            0.0
        } else {
            v
        }
    }

    /// Velocity components `(vx, vy)` at time `t`.
    #[inline]
    pub fn velocity_unchecked(&self, t: f64) -> (f64, f64) {
        let v = self.speed_unchecked(t);
        (
            self.sgn_x * v * self.phi.cos(),
            self.sgn_y * v * self.phi.sin(),
        )
    }

    /// Time of maximum speed, `t0 + exp(μ − σ²)`.
    pub fn peak_time(&self) -> f64 {
        self.t0 + (self.mu - self.sigma * self.sigma).exp()
    }

    /// Smallest time after the peak at which the speed drops below `threshold`.
    pub fn fade_time(&self, threshold: f64) -> f64 {
        // Past the mode the pulse is decreasing, so solve in log-time on z.
        let peak = self.peak_time();
        if self.amplitude == 0.0 || self.speed_unchecked(peak) < threshold {
            return peak;
        }
        let mut lo = peak - self.t0;
        let mut hi = lo * 2.0;
        while self.speed_unchecked(self.t0 + hi) >= threshold {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.speed_unchecked(self.t0 + mid) >= threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.t0 + hi
    }
}

fn signum0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Speed of `stroke` at time `t`, validating the stroke first.
pub fn lognormal_speed(stroke: &LognormalStroke, t: f64) -> Result<f64> {
    stroke.validate()?;
    Ok(stroke.speed_unchecked(t))
}

/// Logistic `1 / (1 + e^{−b(α − c)})`.
pub fn sigmoid(alpha: f64, b: f64, c: f64) -> f64 {
    1.0 / (1.0 + (-b * (alpha - c)).exp())
}

/// Fraction of the maximum inter-stroke delay added at a vertex with interior
/// angle `alpha` (degrees). Sharp reversals approach 1, straight continuation
/// approaches 0.
pub fn delay_factor(alpha: f64) -> Result<f64> {
    if !(0.0..=180.0).contains(&alpha) {
        return Err(Error::Domain {
            name: "alpha",
            value: alpha,
            reason: "interior angle must lie in [0, 180] degrees",
        });
    }
    Ok(sigmoid(-alpha, DELAY_SLOPE, -DELAY_CENTER))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stroke(t0: f64, mu: f64, sigma: f64, d: f64) -> LognormalStroke {
        LognormalStroke::along(t0, mu, sigma, d, 1.0, 0.0)
    }

    #[test]
    fn zero_at_and_before_onset() {
        let s = stroke(0.3, 0.0, 0.05, 1.0);
        assert_eq!(lognormal_speed(&s, 0.3).unwrap(), 0.0);
        assert_eq!(lognormal_speed(&s, 0.0).unwrap(), 0.0);
        assert_eq!(lognormal_speed(&s, 0.3 + 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_sigma() {
        let s = stroke(0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            lognormal_speed(&s, 1.0),
            Err(Error::Domain { name: "sigma", .. })
        ));
        let s = stroke(0.0, 0.0, -0.1, 1.0);
        assert!(lognormal_speed(&s, 1.0).is_err());
    }

    #[test]
    fn mode_matches_dense_search() {
        let s = stroke(0.0, 0.0, 0.05, 1.0);
        let n = 3_000_000;
        let (mut best_t, mut best_v) = (0.0, 0.0);
        for k in 1..=n {
            let t = 3.0 * k as f64 / n as f64;
            let v = s.speed_unchecked(t);
            if v > best_v {
                best_v = v;
                best_t = t;
            }
        }
        assert!((best_t - 0.997_503_1).abs() < 2e-6, "{best_t}");
        assert!((s.peak_time() - best_t).abs() < 2e-6);
    }

    #[test]
    fn integrates_to_amplitude() {
        let s = stroke(0.0, 0.0, 0.05, 2.0);
        // Composite Simpson over (0, 10].
        let n = 200_000;
        let h = 10.0 / n as f64;
        let mut acc = s.speed_unchecked(0.0) + s.speed_unchecked(10.0);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * s.speed_unchecked(k as f64 * h);
        }
        let integral = acc * h / 3.0;
        assert!((integral - 2.0).abs() < 1e-6, "{integral}");
    }

    #[test]
    fn sigmoid_anchors() {
        assert_eq!(sigmoid(65.0, 0.06, 65.0), 0.5);
        assert_eq!(sigmoid(3.0, 17.0, 3.0), 0.5);
        assert!((sigmoid(0.0, 0.06, 65.0) - 0.019_840).abs() < 1e-5);
        assert!((sigmoid(180.0, 0.06, 65.0) - 0.998_994).abs() < 1e-5);
    }

    #[test]
    fn delay_factor_anchors() {
        assert_eq!(delay_factor(65.0).unwrap(), 0.5);
        assert!((delay_factor(0.0).unwrap() - 0.980_160).abs() < 1e-5);
        assert!((delay_factor(180.0).unwrap() - 0.001_007).abs() < 1e-5);
        assert!(delay_factor(-1.0).is_err());
        assert!(delay_factor(180.5).is_err());
        assert!(delay_factor(f64::NAN).is_err());
    }

    #[test]
    fn fade_time_brackets_threshold() {
        let s = stroke(0.2, 0.0, 0.05, 3.0);
        let thr = 1e-6 * 3.0;
        let tf = s.fade_time(thr);
        assert!(tf > s.peak_time());
        assert!(s.speed_unchecked(tf) < thr);
        assert!(s.speed_unchecked(tf - 1e-3) >= thr * 0.5);
    }

    #[test]
    fn direction_signs() {
        let s = LognormalStroke::along(0.0, 0.0, 0.1, 1.0, -3.0, 4.0);
        let (vx, vy) = s.velocity_unchecked(1.0);
        let v = s.speed_unchecked(1.0);
        assert!((vx + 0.6 * v).abs() < 1e-12);
        assert!((vy - 0.8 * v).abs() < 1e-12);
    }
}
