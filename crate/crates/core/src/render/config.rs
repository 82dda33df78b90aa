//! Run configuration shared by the CLI flags and TOML config files.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::evolution::{scale_noise, EvolutionConfig};
use crate::kinematics::WriterProfile;
use crate::render::{InkModel, DEFAULT_RESOLUTION};

/// Output file kinds written by a synthesis run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Traj,
    Svg,
    Png,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Traj => "traj",
            OutputFormat::Svg => "svg",
            OutputFormat::Png => "png",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "traj" => Ok(Self::Traj),
            "svg" => Ok(Self::Svg),
            "png" => Ok(Self::Png),
            other => Err(Error::InvalidInput(format!("unknown output format {other:?}"))),
        }
    }
}

/// Every field is optional so that partial configurations can be layered:
/// flags first, then a config file on top. Unset fields fall back to the
/// defaults of the resolving accessors.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub word: Option<String>,
    #[serde(rename = "E")]
    pub e: Option<f64>,
    /// Maturity levels of a sweep.
    #[serde(rename = "E_values")]
    pub e_values: Option<Vec<f64>>,
    /// Samples per maturity level in a sweep.
    pub seeds: Option<usize>,
    pub seed: Option<u64>,
    pub k_sigma: Option<f64>,
    pub k_t: Option<f64>,
    pub k_alpha: Option<f64>,
    pub k_d: Option<f64>,
    pub eps_t: Option<f64>,
    pub eps_d: Option<f64>,
    pub max_legibility_retries: Option<usize>,
    pub glyphs: Option<PathBuf>,
    /// Output path without extension.
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<OutputFormat>>,
    /// Raster resolution, pixels per mm.
    pub resolution: Option<f64>,
    pub nib_radius: Option<f64>,
    pub speed_thinning: Option<f64>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            what: "run config",
            line: e
                .span()
                .map(|s| 1 + text[..s.start].matches('\n').count())
                .unwrap_or(0),
            reason: e.message().to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: &RunConfig) -> Self {
        overlay!(
            self, top, word, e, e_values, seeds, seed, k_sigma, k_t, k_alpha, k_d, eps_t, eps_d,
            max_legibility_retries, glyphs, out, formats, resolution, nib_radius,
            speed_thinning
        );
        self
    }

    pub fn maturity(&self) -> f64 {
        self.e.unwrap_or(100.0)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Whether the noise levels come from the maturity schedule rather than
    /// explicit settings.
    pub fn scheduled_noise(&self) -> bool {
        self.eps_d.is_none() && self.eps_t.is_none()
    }

    /// Writer profile; unset noise levels follow the maturity schedule.
    pub fn profile(&self) -> WriterProfile {
        let base = WriterProfile::default();
        let (eps_d, eps_t) = scale_noise(self.maturity());
        WriterProfile {
            k_sigma: self.k_sigma.unwrap_or(base.k_sigma),
            k_t: self.k_t.unwrap_or(base.k_t),
            k_alpha: self.k_alpha.unwrap_or(base.k_alpha),
            k_d: self.k_d.or(base.k_d),
            eps_t: self.eps_t.unwrap_or(eps_t),
            eps_d: self.eps_d.unwrap_or(eps_d),
            mu: base.mu,
            rng_seed: self.seed(),
        }
    }

    pub fn evolution(&self) -> EvolutionConfig {
        let mut cfg = EvolutionConfig::new(self.maturity(), self.seed());
        if let Some(r) = self.max_legibility_retries {
            cfg.max_legibility_retries = r;
        }
        cfg
    }

    pub fn ink(&self) -> InkModel {
        let base = InkModel::default();
        InkModel {
            nib_radius: self.nib_radius.unwrap_or(base.nib_radius),
            speed_thinning: self.speed_thinning.unwrap_or(base.speed_thinning),
        }
    }

    pub fn resolution(&self) -> f64 {
        self.resolution.unwrap_or(DEFAULT_RESOLUTION)
    }

    pub fn formats(&self) -> Vec<OutputFormat> {
        self.formats
            .clone()
            .unwrap_or_else(|| vec![OutputFormat::Traj, OutputFormat::Svg, OutputFormat::Png])
    }

    /// Output path for `format`: the `out` stem plus the format's extension.
    pub fn output_path(&self, format: OutputFormat) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from("synth"))
            .with_extension(format.extension())
    }

    /// Checks the fields that have no other validation downstream.
    pub fn validate(&self) -> Result<()> {
        let res = self.resolution();
        if !(res > 0.0) || !res.is_finite() {
            return Err(Error::Domain {
                name: "resolution",
                value: res,
                reason: "must be finite and > 0",
            });
        }
        let ink = self.ink();
        if !(ink.nib_radius > 0.0) || !ink.nib_radius.is_finite() {
            return Err(Error::Domain {
                name: "nib_radius",
                value: ink.nib_radius,
                reason: "must be finite and > 0",
            });
        }
        if !(0.0..=1.0).contains(&ink.speed_thinning) {
            return Err(Error::Domain {
                name: "speed_thinning",
                value: ink.speed_thinning,
                reason: "must lie in [0, 1]",
            });
        }
        self.profile().validate()
    }
}
