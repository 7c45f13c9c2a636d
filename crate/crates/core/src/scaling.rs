//! The continuity-scaling curve and its slope.
//!
//! For a direction "v causes u", every effect-side radius `epsilon` on a
//! log-spaced grid is paired with the average cause-side radius `delta`:
//! for each anchor time `t`, the neighbors of `u(t+1)` within `epsilon`
//! are collected and the mean distance from `v(t)` to their one-step-back
//! partners `v(tau-1)` is recorded. The slope of `<delta>` against
//! `ln(epsilon)` is the causal index.
//!
//! Distances are Euclidean throughout. All summations run in a fixed
//! order (ascending `tau`, then ascending `t`) so results are
//! bit-reproducible for any parallel schedule and match the exhaustive
//! reference exactly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddedSeries;
use crate::error::CscaleError;

/// Log-spaced grid of effect-side neighborhood radii.
///
/// Built by [`build_epsilon_grid`] as a geometric progression from
/// `shrink * diameter` up to `diameter`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonGrid {
    values: Vec<f64>,
    shrink_factor: f64,
}

impl EpsilonGrid {
    /// Wrap explicit radii. Values must be positive and finite; ordering
    /// is not required here (slope fitting sorts internally), but
    /// [`delta_profile`] demands an ascending grid.
    pub fn from_values(values: Vec<f64>) -> Result<Self, CscaleError> {
        if values.len() < 2 {
            return Err(CscaleError::InvalidParameter(
                "epsilon grid needs at least 2 values".into(),
            ));
        }
        if values.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(CscaleError::InvalidParameter(
                "epsilon grid values must be positive and finite".into(),
            ));
        }
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(0.0_f64, f64::max);
        Ok(Self {
            values,
            shrink_factor: min / max,
        })
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

    pub fn shrink_factor(&self) -> f64 {
        self.shrink_factor
    }

    pub fn ln_values(&self) -> Vec<f64> {
        self.values.iter().map(|e| e.ln()).collect()
    }

    fn is_ascending(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }
}

/// Build the geometric radius grid: `n_eps` values equally spaced in
/// `ln(epsilon)` from `shrink * diameter` to `diameter`.
pub fn build_epsilon_grid(
    diameter: f64,
    shrink: f64,
    n_eps: usize,
) -> Result<EpsilonGrid, CscaleError> {
    if !diameter.is_finite() || diameter < 0.0 {
        return Err(CscaleError::InvalidParameter(format!(
            "diameter must be finite and nonnegative, got {diameter}"
        )));
    }
    if diameter == 0.0 {
        return Err(CscaleError::DegenerateGeometry(
            "diameter is zero (constant series); no epsilon grid exists".into(),
        ));
    }
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(CscaleError::InvalidParameter(format!(
            "shrink factor must lie in (0,1), got {shrink}"
        )));
    }
    if n_eps < 2 {
        return Err(CscaleError::InvalidParameter(
            "epsilon grid needs at least 2 values".into(),
        ));
    }
    let ln_min = (shrink * diameter).ln();
    let ln_max = diameter.ln();
    let step = (ln_max - ln_min) / (n_eps - 1) as f64;
    let mut values: Vec<f64> = (0..n_eps)
        .map(|j| (ln_min + step * j as f64).exp())
        .collect();
    // Pin the endpoints exactly.
    values[0] = shrink * diameter;
    values[n_eps - 1] = diameter;
    Ok(EpsilonGrid {
        values,
        shrink_factor: shrink,
    })
}

/// Neighbor admission rules beyond the distance threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodSpec {
    /// Theiler window `E`: neighbor `tau` is rejected when
    /// `|t+1 - tau| <= E`, excluding trivially close time-adjacent points.
    pub theiler_window: usize,
    /// Extra predecessor condition used for directly measured dynamical
    /// variables: `tau` must also satisfy `dist(u(t), u(tau-1)) < epsilon`.
    pub dd_condition: bool,
}

impl NeighborhoodSpec {
    pub fn new(theiler_window: usize, dd_condition: bool) -> Self {
        Self {
            theiler_window,
            dd_condition,
        }
    }
}

impl Default for NeighborhoodSpec {
    fn default() -> Self {
        Self {
            theiler_window: 0,
            dd_condition: false,
        }
    }
}

/// The scaling curve: mean cause-side radius per effect-side radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingCurve {
    grid: EpsilonGrid,
    deltas: Vec<f64>,
    /// Per grid index, the number of anchors whose neighborhood was
    /// nonempty at that radius (before the copy-down rule fills gaps).
    valid_counts: Vec<usize>,
    /// Number of anchor times included in the average. Anchors with no
    /// neighbor even at the largest radius are dropped at every radius,
    /// keeping the averaged population fixed across the grid.
    included_anchors: usize,
}

impl ScalingCurve {
    pub fn new(
        grid: EpsilonGrid,
        deltas: Vec<f64>,
        valid_counts: Vec<usize>,
        included_anchors: usize,
    ) -> Result<Self, CscaleError> {
        if deltas.len() != grid.len() || valid_counts.len() != grid.len() {
            return Err(CscaleError::InvalidParameter(
                "curve arrays must have one entry per grid value".into(),
            ));
        }
        Ok(Self {
            grid,
            deltas,
            valid_counts,
            included_anchors,
        })
    }

    pub fn grid(&self) -> &EpsilonGrid {
        &self.grid
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn valid_counts(&self) -> &[usize] {
        &self.valid_counts
    }

    pub fn included_anchors(&self) -> usize {
        self.included_anchors
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }
}

/// Slope of the scaling relation fitted over the steepest grid segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    /// Fitted slope of `<delta>` against `ln(epsilon)`; the causal index.
    pub slope: f64,
    /// Fitted intercept.
    pub intercept: f64,
    /// Grid indices used in the fit (ascending, at least 2).
    pub fit_indices: Vec<usize>,
    /// Root-mean-square residual over the fitted points.
    pub residual_rms: f64,
}

#[inline]
fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for k in 0..a.len() {
        let d = a[k] - b[k];
        s += d * d;
    }
    s
}

/// Maximum pairwise Euclidean distance over all state vectors.
pub fn diameter(emb: &EmbeddedSeries) -> Result<f64, CscaleError> {
    let n = emb.len();
    if n < 2 {
        return Err(CscaleError::InputSize(format!(
            "diameter needs at least 2 points, got {n}"
        )));
    }
    let max_sq = (0..n - 1)
        .into_par_iter()
        .map(|t| {
            let pt = emb.point(t);
            let mut best = 0.0_f64;
            for tau in t + 1..n {
                let d = dist_sq(pt, emb.point(tau));
                if d > best {
                    best = d;
                }
            }
            best
        })
        .reduce(|| 0.0_f64, f64::max);
    Ok(max_sq.sqrt())
}

/// Candidate neighbor times of anchor `t` at radius `epsilon`.
///
/// Returns all `tau` in `[1, T0-1]` (so `tau - 1` exists) with
/// `dist(u(t+1), u(tau)) < epsilon` and `|t+1 - tau| > theiler_window`;
/// with the predecessor condition enabled, additionally
/// `dist(u(t), u(tau-1)) < epsilon`. Distances are compared through their
/// squares. An empty result is valid.
pub fn neighbor_index_set(
    emb_u: &EmbeddedSeries,
    t: usize,
    epsilon: f64,
    spec: &NeighborhoodSpec,
) -> Vec<usize> {
    let t0 = emb_u.len();
    assert!(t + 1 < t0, "anchor t={t} needs a successor within T0={t0}");
    assert!(epsilon > 0.0, "epsilon must be positive");
    let eps_sq = epsilon * epsilon;
    let successor = emb_u.point(t + 1);
    let anchor = emb_u.point(t);
    let mut set = Vec::new();
    for tau in 1..t0 {
        if (t + 1).abs_diff(tau) <= spec.theiler_window {
            continue;
        }
        if dist_sq(successor, emb_u.point(tau)) >= eps_sq {
            continue;
        }
        if spec.dd_condition && dist_sq(anchor, emb_u.point(tau - 1)) >= eps_sq {
            continue;
        }
        set.push(tau);
    }
    set
}

/// Per-anchor scaling data: delta per grid index plus which radii had a
/// nonempty neighborhood. `None` when even the largest radius was empty.
fn anchor_deltas(
    emb_u: &EmbeddedSeries,
    emb_v: &EmbeddedSeries,
    eps_sq: &[f64],
    spec: &NeighborhoodSpec,
    t: usize,
) -> Option<(Vec<f64>, Vec<bool>)> {
    let n_eps = eps_sq.len();
    let t0 = emb_u.len();
    let successor = emb_u.point(t + 1);
    let anchor_u = emb_u.point(t);
    let anchor_v = emb_v.point(t);
    let mut sums = vec![0.0_f64; n_eps];
    let mut counts = vec![0usize; n_eps];
    let largest = eps_sq[n_eps - 1];

    for tau in 1..t0 {
        if (t + 1).abs_diff(tau) <= spec.theiler_window {
            continue;
        }
        // A neighbor qualifies at radius j iff its effective squared
        // distance is below eps_sq[j]; with the predecessor condition the
        // effective distance is the larger of the two tested distances.
        let mut d_eff = dist_sq(successor, emb_u.point(tau));
        if d_eff >= largest {
            continue;
        }
        if spec.dd_condition {
            let d_prev = dist_sq(anchor_u, emb_u.point(tau - 1));
            if d_prev > d_eff {
                if d_prev >= largest {
                    continue;
                }
                d_eff = d_prev;
            }
        }
        // Smallest grid index admitting this neighbor. The grid is
        // ascending; most neighbors live near the top, so scan from the
        // second-largest radius downward.
        let mut j_min = n_eps - 1;
        while j_min > 0 && d_eff < eps_sq[j_min - 1] {
            j_min -= 1;
        }
        let dv = dist_sq(anchor_v, emb_v.point(tau - 1)).sqrt();
        for j in j_min..n_eps {
            sums[j] += dv;
            counts[j] += 1;
        }
    }

    if counts[n_eps - 1] == 0 {
        return None;
    }
    let mut deltas = vec![0.0_f64; n_eps];
    let nonempty: Vec<bool> = counts.iter().map(|&c| c > 0).collect();
    for j in (0..n_eps).rev() {
        deltas[j] = if counts[j] > 0 {
            sums[j] / counts[j] as f64
        } else {
            // Empty neighborhood at an interior radius: copy the value
            // from the next larger radius.
            deltas[j + 1]
        };
    }
    Some((deltas, nonempty))
}

/// Compute the scaling curve between two reconstructions truncated to a
/// common length.
///
/// For each anchor `t` in `[0, T0-2]` and each grid radius (largest to
/// smallest), the anchor's delta is the mean distance from `v(t)` to
/// `v(tau-1)` over the neighbor set of `u(t+1)`; empty interior radii copy
/// the value from the next larger radius, and anchors empty even at the
/// largest radius are excluded from the average at every radius. Results
/// are bit-identical for any thread count.
pub fn delta_profile(
    emb_u: &EmbeddedSeries,
    emb_v: &EmbeddedSeries,
    grid: &EpsilonGrid,
    spec: &NeighborhoodSpec,
) -> Result<ScalingCurve, CscaleError> {
    if emb_u.len() != emb_v.len() {
        return Err(CscaleError::InvalidParameter(format!(
            "reconstructions must share a common length, got {} and {}",
            emb_u.len(),
            emb_v.len()
        )));
    }
    if emb_u.len() < 2 {
        return Err(CscaleError::InputSize(
            "delta profile needs at least 2 points".into(),
        ));
    }
    if !grid.is_ascending() {
        return Err(CscaleError::InvalidParameter(
            "delta profile requires a strictly ascending epsilon grid".into(),
        ));
    }
    let n_eps = grid.len();
    let eps_sq: Vec<f64> = grid.values().iter().map(|e| e * e).collect();
    let t0 = emb_u.len();

    let per_anchor: Vec<Option<(Vec<f64>, Vec<bool>)>> = (0..t0 - 1)
        .into_par_iter()
        .map(|t| anchor_deltas(emb_u, emb_v, &eps_sq, spec, t))
        .collect();

    // Sequential reduction in ascending anchor order keeps the average
    // independent of the parallel schedule.
    let mut sums = vec![0.0_f64; n_eps];
    let mut valid_counts = vec![0usize; n_eps];
    let mut included = 0usize;
    for entry in per_anchor.iter().flatten() {
        let (deltas, nonempty) = entry;
        included += 1;
        for j in 0..n_eps {
            sums[j] += deltas[j];
            if nonempty[j] {
                valid_counts[j] += 1;
            }
        }
    }
    if included == 0 {
        return Err(CscaleError::DegenerateData(
            "no anchor has a neighbor even at the largest epsilon".into(),
        ));
    }
    let deltas: Vec<f64> = sums.iter().map(|s| s / included as f64).collect();
    ScalingCurve::new(grid.clone(), deltas, valid_counts, included)
}

/// Fit the slope of the scaling relation.
///
/// Successive slopes `S_j` between adjacent grid points are ranked; the
/// `floor((N+1)/2)` largest (ties prefer smaller index) mark the steepest
/// region, and the union of their endpoints is fitted by least squares.
/// A flat curve yields slope zero; it is a valid result, not an error.
pub fn estimate_slope(curve: &ScalingCurve) -> Result<SlopeEstimate, CscaleError> {
    let n = curve.len();
    if n < 3 {
        return Err(CscaleError::InputSize(format!(
            "slope estimation needs at least 3 grid points, got {n}"
        )));
    }
    // Storage order is not part of the contract: work on indices sorted by
    // epsilon.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        curve.grid().values()[a]
            .partial_cmp(&curve.grid().values()[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let ln_eps: Vec<f64> = order
        .iter()
        .map(|&i| curve.grid().values()[i].ln())
        .collect();
    let deltas: Vec<f64> = order.iter().map(|&i| curve.deltas()[i]).collect();

    let successive: Vec<f64> = (0..n - 1)
        .map(|j| (deltas[j + 1] - deltas[j]) / (ln_eps[j + 1] - ln_eps[j]))
        .collect();
    let keep = (n + 1) / 2;
    let mut ranked: Vec<usize> = (0..n - 1).collect();
    ranked.sort_by(|&a, &b| {
        successive[b]
            .partial_cmp(&successive[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut in_fit = vec![false; n];
    for &j in ranked.iter().take(keep) {
        in_fit[j] = true;
        in_fit[j + 1] = true;
    }
    let fit_sorted: Vec<usize> = (0..n).filter(|&j| in_fit[j]).collect();

    let m = fit_sorted.len() as f64;
    // A perfectly flat selection short-circuits to slope zero; the
    // round-off of the general path would otherwise leak in.
    let first_delta = deltas[fit_sorted[0]];
    if fit_sorted.iter().all(|&j| deltas[j] == first_delta) {
        return Ok(SlopeEstimate {
            slope: 0.0,
            intercept: first_delta,
            fit_indices: {
                let mut idx: Vec<usize> = fit_sorted.iter().map(|&j| order[j]).collect();
                idx.sort_unstable();
                idx
            },
            residual_rms: 0.0,
        });
    }
    let mean_x = fit_sorted.iter().map(|&j| ln_eps[j]).sum::<f64>() / m;
    let mean_y = fit_sorted.iter().map(|&j| deltas[j]).sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &j in &fit_sorted {
        let dx = ln_eps[j] - mean_x;
        sxx += dx * dx;
        sxy += dx * (deltas[j] - mean_y);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = mean_y - slope * mean_x;
    let ss_res = fit_sorted
        .iter()
        .map(|&j| {
            let r = deltas[j] - (slope * ln_eps[j] + intercept);
            r * r
        })
        .sum::<f64>();
    let residual_rms = (ss_res / m).sqrt();

    // Report fit membership in terms of the curve's storage indices.
    let mut fit_indices: Vec<usize> = fit_sorted.iter().map(|&j| order[j]).collect();
    fit_indices.sort_unstable();
    Ok(SlopeEstimate {
        slope,
        intercept,
        fit_indices,
        residual_rms,
    })
}
