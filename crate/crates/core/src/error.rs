//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by embedding, scaling, significance testing, inference
/// and the benchmark generators.
#[derive(Debug, Error)]
pub enum CscaleError {
    /// Input has too few samples or points for the requested operation.
    #[error("input too short: {0}")]
    InputSize(String),

    /// A series contains NaN or infinite samples. Non-finite samples are
    /// rejected rather than imputed; imputation would change the geometry
    /// the method measures.
    #[error("non-finite sample in series '{label}' at index {index}")]
    NonFiniteSample { label: String, index: usize },

    /// A parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The point set has zero extent (for example a constant series), so
    /// no epsilon grid can be built.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// The data admit no neighbor statistics (for example no time index
    /// has a neighbor even at the largest epsilon).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// A generated trajectory left its admissible region or became
    /// non-finite.
    #[error("trajectory divergence: {0}")]
    Divergence(String),

    /// ROC analysis is undefined for the given truth set.
    #[error("undefined ROC: {0}")]
    UndefinedRoc(String),

    /// An error that occurred while processing a labeled series.
    #[error("series '{label}': {source}")]
    InSeries {
        label: String,
        #[source]
        source: Box<CscaleError>,
    },
}

impl CscaleError {
    /// Wrap an error with the label of the series being processed.
    pub fn in_series(self, label: impl Into<String>) -> Self {
        CscaleError::InSeries {
            label: label.into(),
            source: Box::new(self),
        }
    }
}
