//! `scriptogen-traj v1` trajectory files.
//!
//! ```text
//! scriptogen-traj v1
//! dt 0.005000
//! samples 3
//! t,x,y,vx,vy,pen_down
//! 0.000000,1.250000,4.330127,0.000000,0.000000,1
//! ...
//! ```
//!
//! Every number is written with six decimals. Speed is not stored; it is
//! recomputed from the velocity on import.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kinematics::{Sample, SampledTrajectory};
use crate::render::write_atomic;

pub const TRAJ_HEADER: &str = "scriptogen-traj v1";
const COLUMNS: &str = "t,x,y,vx,vy,pen_down";

pub fn format_trajectory(traj: &SampledTrajectory) -> String {
    let mut out = String::with_capacity(64 * (traj.len() + 4));
    let _ = writeln!(out, "{TRAJ_HEADER}");
    let _ = writeln!(out, "dt {:.6}", traj.dt);
    let _ = writeln!(out, "samples {}", traj.len());
    let _ = writeln!(out, "{COLUMNS}");
    for s in &traj.samples {
        let _ = writeln!(
            out,
            "{:.6},{:.6},{:.6},{:.6},{:.6},{}",
            s.t,
            s.x,
            s.y,
            s.vx,
            s.vy,
            u8::from(s.pen_down)
        );
    }
    out
}

pub fn parse_trajectory(text: &str) -> Result<SampledTrajectory> {
    let err = |line: usize, reason: String| Error::Parse {
        what: "trajectory",
        line,
        reason,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut next = |expect: &str| {
        lines
            .next()
            .ok_or_else(|| err(0, format!("missing {expect}")))
    };

    let (n, header) = next("header")?;
    if header != TRAJ_HEADER {
        return Err(err(n, format!("expected header {TRAJ_HEADER:?}")));
    }
    let (n, dt_line) = next("dt line")?;
    let dt: f64 = dt_line
        .strip_prefix("dt ")
        .and_then(|v| v.trim().parse().ok())
        .filter(|v: &f64| *v > 0.0 && v.is_finite())
        .ok_or_else(|| err(n, "expected `dt <seconds>`".into()))?;
    let (n, count_line) = next("sample count")?;
    let count: usize = count_line
        .strip_prefix("samples ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(n, "expected `samples <count>`".into()))?;
    let (n, cols) = next("column header")?;
    if cols != COLUMNS {
        return Err(err(n, format!("expected columns {COLUMNS:?}")));
    }

    let mut samples = Vec::with_capacity(count);
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(err(n, format!("expected 6 fields, found {}", fields.len())));
        }
        let mut num = [0.0; 5];
        for (slot, f) in num.iter_mut().zip(&fields) {
            *slot = f
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| err(n, format!("bad number {f:?}")))?;
        }
        let pen_down = match fields[5].trim() {
            "1" => true,
            "0" => false,
            other => return Err(err(n, format!("bad pen flag {other:?}"))),
        };
        let [t, x, y, vx, vy] = num;
        samples.push(Sample {
            t,
            x,
            y,
            vx,
            vy,
            speed: vx.hypot(vy),
            pen_down,
        });
    }
    if samples.len() != count {
        return Err(err(
            0,
            format!("header announces {count} samples, found {}", samples.len()),
        ));
    }
    Ok(SampledTrajectory { dt, samples })
}

pub fn export_trajectory(traj: &SampledTrajectory, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), format_trajectory(traj).as_bytes())
}

pub fn import_trajectory(path: impl AsRef<Path>) -> Result<SampledTrajectory> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trajectory(&text)
}
