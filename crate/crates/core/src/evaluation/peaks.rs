//! Velocity-peak counting with a relative prominence floor.

use crate::kinematics::SampledTrajectory;

/// Default prominence threshold as a fraction of the maximum speed.
pub const DEFAULT_PROMINENCE: f64 = 0.05;

/// Local maxima of `signal`. A flat top counts once, at its left edge.
pub fn local_maxima(signal: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = signal.len();
    let mut i = 1;
    while i + 1 < n {
        if signal[i] > signal[i - 1] {
            let mut j = i;
            while j + 1 < n && signal[j + 1] == signal[i] {
                j += 1;
            }
            if j + 1 < n && signal[j + 1] < signal[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Topographic prominence of the peak at `idx`: its height above the higher
/// of the two lowest points reached before climbing to a taller sample (or
/// the signal boundary) on either side.
pub fn prominence(signal: &[f64], idx: usize) -> f64 {
    let h = signal[idx];
    let mut left_min = h;
    for &v in signal[..idx].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &signal[idx + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Indices of peaks of `signal` whose prominence exceeds
/// `rel_prominence · max(signal)`.
pub fn prominent_peaks(signal: &[f64], rel_prominence: f64) -> Vec<usize> {
    let max = signal.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Vec::new();
    }
    let floor = rel_prominence * max;
    local_maxima(signal)
        .into_iter()
        .filter(|&i| prominence(signal, i) > floor)
        .collect()
}

/// Number of prominent maxima of the pen speed.
pub fn count_velocity_peaks(traj: &SampledTrajectory, rel_prominence: f64) -> usize {
    if traj.len() < 3 {
        return 0;
    }
    prominent_peaks(&traj.speeds(), rel_prominence).len()
}
