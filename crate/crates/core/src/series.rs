//! Validated scalar time series.

use serde::{Deserialize, Serialize};

use crate::error::CscaleError;

/// A uniformly sampled scalar time series.
///
/// Samples must be finite and there must be at least two of them. The
/// sample interval is 1.0 for maps; for flows it is the sampling interval
/// of the observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarSeries {
    values: Vec<f64>,
    sample_interval: f64,
    label: String,
}

impl ScalarSeries {
    /// Create a series, validating length, finiteness and the sample
    /// interval.
    pub fn new(
        label: impl Into<String>,
        values: Vec<f64>,
        sample_interval: f64,
    ) -> Result<Self, CscaleError> {
        let label = label.into();
        if values.len() < 2 {
            return Err(CscaleError::InputSize(format!(
                "series '{}' has {} samples, need at least 2",
                label,
                values.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(CscaleError::NonFiniteSample { label, index });
        }
        if !(sample_interval.is_finite() && sample_interval > 0.0) {
            return Err(CscaleError::InvalidParameter(format!(
                "sample interval must be positive and finite, got {sample_interval}"
            )));
        }
        Ok(Self {
            values,
            sample_interval,
            label,
        })
    }

    /// Create a map-sampled series (sample interval 1.0).
    pub fn from_values(label: impl Into<String>, values: Vec<f64>) -> Result<Self, CscaleError> {
        Self::new(label, values, 1.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sample_interval(&self) -> f64 {
        self.sample_interval
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same data under a new label.
    pub fn relabeled(&self, label: impl Into<String>) -> Self {
        Self {
            values: self.values.clone(),
            sample_interval: self.sample_interval,
            label: label.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_series() {
        let err = ScalarSeries::from_values("s", vec![1.0]).unwrap_err();
        assert!(matches!(err, CscaleError::InputSize(_)));
    }

    #[test]
    fn rejects_non_finite() {
        let err = ScalarSeries::from_values("s", vec![1.0, f64::NAN, 2.0]).unwrap_err();
        match err {
            CscaleError::NonFiniteSample { label, index } => {
                assert_eq!(label, "s");
                assert_eq!(index, 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_interval() {
        let err = ScalarSeries::new("s", vec![1.0, 2.0], 0.0).unwrap_err();
        assert!(matches!(err, CscaleError::InvalidParameter(_)));
    }
}
