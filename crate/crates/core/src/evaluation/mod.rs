//! Measurement battery: velocity peaks, static stroke estimation, fuzzy
//! feature similarity, one-way ANOVA and the maturity sweep.

pub mod anova;
pub mod curve;
pub mod features;
pub mod peaks;
pub mod similarity;
pub mod skeleton;
pub mod strokes;

pub use anova::{anova_one_way, Anova};
pub use curve::{maturity_curve, CurveOptions, CurveRow, MaturityCurve, CURVE_HEADER};
pub use features::{extract_features, FeatureVector, FEATURE_LEN};
pub use peaks::{count_velocity_peaks, DEFAULT_PROMINENCE};
pub use similarity::{similarity, similarity_values, SimilarityWeights};
pub use strokes::estimate_static_strokes;
