//! Pairwise causal detection, all-pairs networks and ROC evaluation.
//!
//! Detection is bivariate: for a candidate direction "a causes b" the
//! effect series `b` supplies the epsilon neighborhoods and the cause
//! series `a` the delta distances. Each ordered direction gets its own
//! slope, surrogate p-value and significance verdict.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::embedding::{
    delay_embed, select_dimension_fnn, select_lag_mutual_information, EmbeddedSeries,
    EmbeddingParams,
};
use crate::error::CscaleError;
use crate::scaling::{
    build_epsilon_grid, delta_profile, diameter, estimate_slope, NeighborhoodSpec, ScalingCurve,
    SlopeEstimate,
};
use crate::seeding;
use crate::series::ScalarSeries;
use crate::significance::{surrogate_p_value_with_slope, PValueResult, SurrogateConfig};

/// Parameters for automatic embedding selection (used when no explicit
/// embedding is configured).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutoEmbedConfig {
    /// Largest lag scanned by the mutual-information criterion.
    pub max_lag: usize,
    /// Histogram bins for MI; `None` uses `floor(sqrt(T/5))`.
    pub bins: Option<usize>,
    /// Largest dimension scanned by the false-nearest-neighbor criterion.
    pub max_dim: usize,
    /// FNN stretch tolerance.
    pub rtol: f64,
    /// FNN attractor-size tolerance.
    pub atol: f64,
}

impl Default for AutoEmbedConfig {
    fn default() -> Self {
        Self {
            max_lag: 50,
            bins: None,
            max_dim: 10,
            rtol: 10.0,
            atol: 2.0,
        }
    }
}

/// Full configuration of a detection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Explicit embedding applied to every series; `None` selects
    /// automatically per series.
    pub embedding: Option<EmbeddingParams>,
    /// Per-label overrides; they win over `embedding`.
    #[serde(default)]
    pub per_series_embedding: BTreeMap<String, EmbeddingParams>,
    /// Shrink factor `e` of the epsilon grid.
    pub eps_shrink: f64,
    /// Number of grid radii.
    pub eps_count: usize,
    /// Theiler window; `None` uses one embedding window of the effect
    /// series, `(d-1)*lag + 1`.
    pub theiler_window: Option<usize>,
    /// Predecessor condition for directly measured dynamical variables.
    pub dd_condition: bool,
    /// Surrogate segments.
    pub n_segments: usize,
    /// Surrogate replicates.
    pub n_replicates: usize,
    /// Master seed for all derived streams.
    pub master_seed: u64,
    /// Significance level.
    pub alpha: f64,
    /// Automatic embedding selection parameters.
    pub auto_embed: AutoEmbedConfig,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            embedding: None,
            per_series_embedding: BTreeMap::new(),
            eps_shrink: 0.001,
            eps_count: 33,
            theiler_window: None,
            dd_condition: false,
            n_segments: 25,
            n_replicates: 20,
            master_seed: 0,
            alpha: 0.05,
            auto_embed: AutoEmbedConfig::default(),
        }
    }
}

impl DetectionConfig {
    fn validate(&self) -> Result<(), CscaleError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CscaleError::InvalidParameter(format!(
                "alpha must lie in (0,1), got {}",
                self.alpha
            )));
        }
        if !(self.eps_shrink > 0.0 && self.eps_shrink < 1.0) {
            return Err(CscaleError::InvalidParameter(format!(
                "eps_shrink must lie in (0,1), got {}",
                self.eps_shrink
            )));
        }
        if self.eps_count < 3 {
            return Err(CscaleError::InvalidParameter(
                "eps_count must be at least 3".into(),
            ));
        }
        if self.n_segments == 0 || self.n_replicates == 0 {
            return Err(CscaleError::InvalidParameter(
                "surrogate segments and replicates must be positive".into(),
            ));
        }
        Ok(())
    }

    fn embedding_for(&self, series: &ScalarSeries) -> Result<EmbeddingParams, CscaleError> {
        if let Some(params) = self.per_series_embedding.get(series.label()) {
            return Ok(*params);
        }
        if let Some(params) = self.embedding {
            return Ok(params);
        }
        let auto = &self.auto_embed;
        let max_lag = auto.max_lag.min(series.len() / 2 - 1).max(1);
        let bins = auto
            .bins
            .unwrap_or_else(|| crate::embedding::default_mi_bins(series.len()));
        let lag = select_lag_mutual_information(series, max_lag, bins)
            .map_err(|e| e.in_series(series.label()))?
            .lag;
        let dim = select_dimension_fnn(series, lag, auto.max_dim, auto.rtol, auto.atol)
            .map_err(|e| e.in_series(series.label()))?
            .dimension;
        EmbeddingParams::new(dim, lag)
    }
}

/// One directional detection outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalityResult {
    /// Candidate cause label.
    pub from: String,
    /// Candidate effect label.
    pub to: String,
    /// Fitted slope of the scaling relation; the causal index.
    pub slope: f64,
    /// Surrogate p-value.
    pub p_value: f64,
    /// `p_value < alpha`.
    pub significant: bool,
    /// Significance level the verdict used.
    pub alpha: f64,
    /// Slope fit details.
    pub fit: SlopeEstimate,
    /// Surrogate test details.
    pub surrogates: PValueResult,
    /// The scaling curve, retained for dumping.
    pub curve: ScalingCurve,
}

fn detect_direction(
    cause: &EmbeddedSeries,
    effect: &EmbeddedSeries,
    cfg: &DetectionConfig,
) -> Result<CausalityResult, CscaleError> {
    let effect_params = effect.params();
    let spec = NeighborhoodSpec {
        theiler_window: cfg
            .theiler_window
            .unwrap_or_else(|| effect_params.window()),
        dd_condition: cfg.dd_condition,
    };
    let d = diameter(effect)?;
    let grid = build_epsilon_grid(d, cfg.eps_shrink, cfg.eps_count)
        .map_err(|e| e.in_series(effect.label()))?;
    let curve = delta_profile(effect, cause, &grid, &spec)?;
    let fit = estimate_slope(&curve)?;
    let surrogate_cfg = SurrogateConfig {
        n_segments: cfg.n_segments,
        n_replicates: cfg.n_replicates,
        master_seed: seeding::direction_seed(cfg.master_seed, cause.label(), effect.label()),
    };
    let surrogates =
        surrogate_p_value_with_slope(effect, cause, &grid, &spec, &surrogate_cfg, &fit)?;
    Ok(CausalityResult {
        from: cause.label().to_string(),
        to: effect.label().to_string(),
        slope: fit.slope,
        p_value: surrogates.p_value,
        significant: surrogates.p_value < cfg.alpha,
        alpha: cfg.alpha,
        fit,
        surrogates: surrogates.clone(),
        curve,
    })
}

/// Detect causation in both directions between two series.
///
/// Returns `(a -> b, b -> a)`. Direction `a -> b` treats `a` as the
/// candidate cause: epsilon neighborhoods are built on the reconstruction
/// of `b` and delta distances measured on the reconstruction of `a`.
pub fn detect_pair(
    a: &ScalarSeries,
    b: &ScalarSeries,
    cfg: &DetectionConfig,
) -> Result<(CausalityResult, CausalityResult), CscaleError> {
    cfg.validate()?;
    let params_a = cfg.embedding_for(a)?;
    let params_b = cfg.embedding_for(b)?;
    let emb_a = delay_embed(a, params_a).map_err(|e| e.in_series(a.label()))?;
    let emb_b = delay_embed(b, params_b).map_err(|e| e.in_series(b.label()))?;
    let t0 = emb_a.len().min(emb_b.len());
    let emb_a = emb_a.truncated(t0);
    let emb_b = emb_b.truncated(t0);

    let a_to_b = detect_direction(&emb_a, &emb_b, cfg)?;
    let b_to_a = detect_direction(&emb_b, &emb_a, cfg)?;
    Ok((a_to_b, b_to_a))
}

/// One slot of an all-pairs network: a result or a recorded failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NetworkEntry {
    Ok(CausalityResult),
    Failed {
        from: String,
        to: String,
        message: String,
    },
}

impl NetworkEntry {
    pub fn direction(&self) -> (&str, &str) {
        match self {
            NetworkEntry::Ok(r) => (&r.from, &r.to),
            NetworkEntry::Failed { from, to, .. } => (from, to),
        }
    }

    pub fn as_result(&self) -> Option<&CausalityResult> {
        match self {
            NetworkEntry::Ok(r) => Some(r),
            NetworkEntry::Failed { .. } => None,
        }
    }
}

/// All ordered-pair results for a set of series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalNetwork {
    pub labels: Vec<String>,
    /// Exactly `N*(N-1)` entries, sorted by `(from, to)`.
    pub entries: Vec<NetworkEntry>,
}

impl CausalNetwork {
    pub fn get(&self, from: &str, to: &str) -> Option<&NetworkEntry> {
        self.entries
            .iter()
            .find(|e| e.direction() == (from, to))
    }

    /// Slope per ordered pair, for ranking-based evaluation. Failed
    /// entries are omitted.
    pub fn slope_scores(&self) -> BTreeMap<(String, String), f64> {
        self.entries
            .iter()
            .filter_map(|e| e.as_result())
            .map(|r| ((r.from.clone(), r.to.clone()), r.slope))
            .collect()
    }
}

/// Run pairwise detection over every ordered pair of series.
///
/// Series must share a common length and carry distinct labels. Failing
/// pairs are recorded as failed entries rather than silently dropped.
/// Results are deterministic for a given master seed regardless of
/// evaluation order, because per-direction seeds are keyed by the sorted
/// label pair.
pub fn infer_network(
    table: &[ScalarSeries],
    cfg: &DetectionConfig,
) -> Result<CausalNetwork, CscaleError> {
    cfg.validate()?;
    if table.len() < 2 {
        return Err(CscaleError::InputSize(
            "network inference needs at least 2 series".into(),
        ));
    }
    let len = table[0].len();
    if table.iter().any(|s| s.len() != len) {
        return Err(CscaleError::InvalidParameter(
            "all series must have equal length".into(),
        ));
    }
    let mut labels: Vec<String> = table.iter().map(|s| s.label().to_string()).collect();
    {
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(CscaleError::InvalidParameter(
                "series labels must be distinct".into(),
            ));
        }
    }
    labels.sort();

    let mut entries = Vec::with_capacity(table.len() * (table.len() - 1));
    for i in 0..table.len() {
        for j in i + 1..table.len() {
            match detect_pair(&table[i], &table[j], cfg) {
                Ok((ij, ji)) => {
                    entries.push(NetworkEntry::Ok(ij));
                    entries.push(NetworkEntry::Ok(ji));
                }
                Err(err) => {
                    let message = err.to_string();
                    entries.push(NetworkEntry::Failed {
                        from: table[i].label().to_string(),
                        to: table[j].label().to_string(),
                        message: message.clone(),
                    });
                    entries.push(NetworkEntry::Failed {
                        from: table[j].label().to_string(),
                        to: table[i].label().to_string(),
                        message,
                    });
                }
            }
        }
    }
    entries.sort_by(|a, b| {
        let da = a.direction();
        let db = b.direction();
        da.cmp(&db)
    });
    Ok(CausalNetwork { labels, entries })
}

/// A receiver operating characteristic over ranked edge scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// Distinct thresholds in descending order, one per curve step.
    pub thresholds: Vec<f64>,
    /// `(false positive rate, true positive rate)` points from (0,0) to
    /// (1,1).
    pub points: Vec<(f64, f64)>,
    /// Trapezoidal area; ties contribute diagonal segments, making this
    /// the Mann-Whitney statistic.
    pub auroc: f64,
}

/// Build the ROC curve of scored directed edges against a truth set.
///
/// Every truth edge must be scored; the truth set must be neither empty
/// nor the full score set.
pub fn roc_auroc(
    scores: &BTreeMap<(String, String), f64>,
    truth: &BTreeSet<(String, String)>,
) -> Result<RocCurve, CscaleError> {
    if truth.is_empty() {
        return Err(CscaleError::UndefinedRoc("truth set is empty".into()));
    }
    for edge in truth {
        if !scores.contains_key(edge) {
            return Err(CscaleError::InvalidParameter(format!(
                "truth edge {} -> {} has no score",
                edge.0, edge.1
            )));
        }
    }
    let positives = truth.len();
    let negatives = scores.len() - positives;
    if negatives == 0 {
        return Err(CscaleError::UndefinedRoc(
            "truth set covers every scored edge".into(),
        ));
    }

    // Descending sweep; edges tied on score advance TP and FP together,
    // which draws the tie as one diagonal segment.
    let mut ranked: Vec<(f64, bool)> = scores
        .iter()
        .map(|(edge, &s)| (s, truth.contains(edge)))
        .collect();
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut thresholds = Vec::new();
    let mut points = vec![(0.0, 0.0)];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < ranked.len() {
        let threshold = ranked[i].0;
        let mut j = i;
        while j < ranked.len() && ranked[j].0 == threshold {
            if ranked[j].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            j += 1;
        }
        thresholds.push(threshold);
        points.push((fp as f64 / negatives as f64, tp as f64 / positives as f64));
        i = j;
    }

    let mut auroc = 0.0;
    for w in points.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        auroc += (x2 - x1) * (y1 + y2) / 2.0;
    }
    Ok(RocCurve {
        thresholds,
        points,
        auroc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn score_map(entries: &[((&str, &str), f64)]) -> BTreeMap<(String, String), f64> {
        entries
            .iter()
            .map(|((a, b), s)| (((*a).to_string(), (*b).to_string()), *s))
            .collect()
    }

    fn truth_set(edges: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        edges
            .iter()
            .map(|(a, b)| ((*a).to_string(), (*b).to_string()))
            .collect()
    }

    #[test]
    fn roc_perfect_ranking() {
        let scores = score_map(&[
            (("a", "b"), 0.9),
            (("b", "a"), 0.8),
            (("a", "c"), 0.1),
            (("c", "a"), 0.05),
        ]);
        let truth = truth_set(&[("a", "b"), ("b", "a")]);
        let roc = roc_auroc(&scores, &truth).unwrap();
        assert_eq!(roc.auroc, 1.0);
        assert_eq!(*roc.points.first().unwrap(), (0.0, 0.0));
        assert_eq!(*roc.points.last().unwrap(), (1.0, 1.0));
    }

    #[test]
    fn roc_inverted_ranking() {
        let scores = score_map(&[
            (("a", "b"), 0.1),
            (("b", "a"), 0.2),
            (("a", "c"), 0.8),
            (("c", "a"), 0.9),
        ]);
        let truth = truth_set(&[("a", "b"), ("b", "a")]);
        let roc = roc_auroc(&scores, &truth).unwrap();
        assert_eq!(roc.auroc, 0.0);
    }

    #[test]
    fn roc_all_ties_is_half() {
        let scores = score_map(&[
            (("a", "b"), 0.5),
            (("b", "a"), 0.5),
            (("a", "c"), 0.5),
            (("c", "a"), 0.5),
        ]);
        let truth = truth_set(&[("a", "b")]);
        let roc = roc_auroc(&scores, &truth).unwrap();
        assert_eq!(roc.auroc, 0.5);
        assert_eq!(roc.points.len(), 2);
    }

    #[test]
    fn roc_rejects_empty_and_full_truth() {
        let scores = score_map(&[(("a", "b"), 0.5), (("b", "a"), 0.4)]);
        assert!(matches!(
            roc_auroc(&scores, &BTreeSet::new()).unwrap_err(),
            CscaleError::UndefinedRoc(_)
        ));
        let truth = truth_set(&[("a", "b"), ("b", "a")]);
        assert!(matches!(
            roc_auroc(&scores, &truth).unwrap_err(),
            CscaleError::UndefinedRoc(_)
        ));
    }

    #[test]
    fn roc_matches_mann_whitney_brute_force() {
        let scores = score_map(&[
            (("a", "b"), 0.9),
            (("b", "a"), 0.3),
            (("a", "c"), 0.3),
            (("c", "a"), 0.7),
            (("b", "c"), 0.1),
            (("c", "b"), 0.3),
        ]);
        let truth = truth_set(&[("a", "b"), ("c", "a"), ("c", "b")]);
        let roc = roc_auroc(&scores, &truth).unwrap();

        let mut stat = 0.0;
        let mut n = 0;
        for (et, &st) in scores.iter().filter(|(e, _)| truth.contains(*e)) {
            for (_ef, &sf) in scores.iter().filter(|(e, _)| !truth.contains(*e)) {
                let _ = et;
                n += 1;
                if st > sf {
                    stat += 1.0;
                } else if st == sf {
                    stat += 0.5;
                }
            }
        }
        let mann_whitney = stat / n as f64;
        assert!(
            (roc.auroc - mann_whitney).abs() < 1e-12,
            "{} vs {}",
            roc.auroc,
            mann_whitney
        );
    }

    #[test]
    fn config_rejects_bad_alpha() {
        let cfg = DetectionConfig {
            alpha: 1.5,
            ..Default::default()
        };
        assert!(matches!(
            cfg.validate().unwrap_err(),
            CscaleError::InvalidParameter(_)
        ));
    }
}
