//! Continuity-scaling causal inference for nonlinear time series.
//!
//! This crate detects and quantifies directional coupling between time
//! series measured from nonlinear dynamical systems. Both series are
//! reconstructed by delay-coordinate embedding; for every effect-side
//! neighborhood radius `epsilon` on a log-spaced grid, the average
//! cause-side neighborhood radius `delta` is estimated from one-step-back
//! neighbor statistics. The slope of the resulting `<delta>` vs
//! `ln(epsilon)` relation is the causal index: near zero when no coupling
//! exists, increasing with coupling strength. Significance is assessed by
//! recomputing the slope on segment-shuffled surrogates and converting the
//! original slope's z-score to a Gaussian p-value.
//!
//! Modules:
//! - [`series`]: validated scalar time series.
//! - [`embedding`]: delay embedding plus lag (mutual information) and
//!   dimension (false nearest neighbors) selection.
//! - [`scaling`]: the scaling curve and slope extraction.
//! - [`significance`]: segment-shuffle surrogate testing.
//! - [`inference`]: pairwise detection, all-pairs networks, ROC/AUROC.
//! - [`generators`]: coupled logistic maps and coupled Lorenz flows for
//!   benchmarking.

pub mod embedding;
pub mod error;
pub mod generators;
pub mod inference;
pub mod scaling;
pub mod seeding;
pub mod series;
pub mod significance;

pub use embedding::{
    default_mi_bins, delay_embed, select_dimension_fnn, select_lag_mutual_information,
    DimensionSelection, EmbeddedSeries, EmbeddingParams, LagSelection,
};
pub use error::CscaleError;
pub use generators::{
    generate_coupled_lorenz, generate_logistic_network, LogisticNetworkSpec, LorenzPairSpec,
};
pub use inference::{
    detect_pair, infer_network, roc_auroc, AutoEmbedConfig, CausalNetwork, CausalityResult,
    DetectionConfig, NetworkEntry, RocCurve,
};
pub use scaling::{
    build_epsilon_grid, delta_profile, diameter, estimate_slope, neighbor_index_set, EpsilonGrid,
    NeighborhoodSpec, ScalingCurve, SlopeEstimate,
};
pub use series::ScalarSeries;
pub use significance::{
    normal_cdf, segment_shuffle, surrogate_p_value, PValueResult, SurrogateConfig,
};
