//! Deterministic handwriting synthesis at a controllable graphic maturity.
//!
//! The pipeline runs from a glyph library of hexagonal-grid target sequences
//! ([`plan`]), through maturity-dependent simplification ([`evolution`]), to
//! lognormal stroke kinematics ([`kinematics`]). [`render`] turns the online
//! trajectory into images and files, and [`evaluation`] holds the measurement
//! battery used to compare maturity levels.

pub mod error;
pub mod evaluation;
pub mod evolution;
pub mod kinematics;
pub mod lognormal;
pub mod plan;
pub mod raster;
pub mod render;
pub mod rng;

pub use error::{Error, Result};
pub use evolution::{evolve_plan, scale_noise, target_count, EvolutionConfig};
pub use kinematics::{
    assign_parameters, integrate_trajectory, interior_angle, synthesize_plan, synthesize_velocity,
    synthesize_word, Sample, SampledTrajectory, WriterProfile,
};
pub use lognormal::{delay_factor, lognormal_speed, sigmoid, LognormalStroke};
pub use plan::{
    build_word_plan, grid_node_position, GlyphLibrary, GlyphPlan, GuideLines, GuideTag, HexGrid,
    LetterSpacing, TrajectoryPlan,
};
