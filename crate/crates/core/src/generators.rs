//! Benchmark system generators: coupled logistic networks and coupled
//! Lorenz flows.
//!
//! Generation is deterministic: identical specs (and seeds) produce
//! bit-identical series.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CscaleError;
use crate::series::ScalarSeries;

/// Network of coupled logistic maps
/// `x_{i,t+1} = x_{i,t} (r_i - r_i x_{i,t} - sum_j mu_ij x_{j,t})`,
/// where `mu[i][j]` is the influence of node `j` on node `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticNetworkSpec {
    /// Per-node growth rates `r_i`.
    pub growth_rates: Vec<f64>,
    /// Coupling matrix; `coupling[i][j]` drives node `i` with node `j`.
    /// Diagonal entries must be zero.
    pub coupling: Vec<Vec<f64>>,
    /// Initial state, one value in (0,1) per node.
    pub initial_state: Vec<f64>,
    /// Number of samples returned per node.
    pub length: usize,
    /// Iterations discarded before recording.
    pub transient: usize,
}

impl LogisticNetworkSpec {
    /// The two-species benchmark: growth rates 3.8 and 3.7, couplings
    /// `mu12` (species 2 driving species 1) and `mu21` (species 1 driving
    /// species 2).
    pub fn pair(mu12: f64, mu21: f64, length: usize) -> Self {
        Self {
            growth_rates: vec![3.8, 3.7],
            coupling: vec![vec![0.0, mu12], vec![mu21, 0.0]],
            initial_state: vec![0.4, 0.2],
            length,
            transient: 1000,
        }
    }

    /// Five-species ring `x_i -> x_{i+1 mod 5}` with uniform coupling
    /// strength.
    pub fn ring(nodes: usize, strength: f64, length: usize) -> Self {
        let mut coupling = vec![vec![0.0; nodes]; nodes];
        for i in 0..nodes {
            coupling[(i + 1) % nodes][i] = strength;
        }
        Self {
            growth_rates: Self::spread_rates(nodes),
            coupling,
            initial_state: (0..nodes).map(|i| 0.3 + 0.05 * i as f64).collect(),
            length,
            transient: 1000,
        }
    }

    /// Five-species tree `x_j -> x_{j+1}, x_{j+3}` for `j = 1, 2`
    /// (1-based), with uniform coupling strength.
    pub fn tree(strength: f64, length: usize) -> Self {
        let nodes = 5;
        let mut coupling = vec![vec![0.0; nodes]; nodes];
        for j in 0..2 {
            coupling[j + 1][j] = strength;
            coupling[j + 3][j] = strength;
        }
        Self {
            growth_rates: Self::spread_rates(nodes),
            coupling,
            initial_state: (0..nodes).map(|i| 0.3 + 0.05 * i as f64).collect(),
            length,
            transient: 1000,
        }
    }

    /// Directed edges `(source, target)` implied by nonzero couplings,
    /// 0-based node indices.
    pub fn true_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (i, row) in self.coupling.iter().enumerate() {
            for (j, &mu) in row.iter().enumerate() {
                if mu != 0.0 {
                    edges.push((j, i));
                }
            }
        }
        edges
    }

    /// Growth rates spread over [3.7, 3.82] so the nodes stay chaotic but
    /// not identical, which would invite synchronization.
    fn spread_rates(nodes: usize) -> Vec<f64> {
        (0..nodes).map(|i| 3.7 + 0.03 * i as f64).collect()
    }

    fn validate(&self) -> Result<(), CscaleError> {
        let n = self.growth_rates.len();
        if n == 0 {
            return Err(CscaleError::InvalidParameter(
                "logistic network needs at least one node".into(),
            ));
        }
        if self.coupling.len() != n || self.coupling.iter().any(|row| row.len() != n) {
            return Err(CscaleError::InvalidParameter(format!(
                "coupling matrix must be {n}x{n}"
            )));
        }
        if (0..n).any(|i| self.coupling[i][i] != 0.0) {
            return Err(CscaleError::InvalidParameter(
                "coupling matrix diagonal must be zero".into(),
            ));
        }
        if self.initial_state.len() != n {
            return Err(CscaleError::InvalidParameter(format!(
                "initial state must have {n} entries"
            )));
        }
        if self
            .initial_state
            .iter()
            .any(|x| !(x.is_finite() && *x > 0.0 && *x < 1.0))
        {
            return Err(CscaleError::InvalidParameter(
                "initial state entries must lie in (0,1)".into(),
            ));
        }
        if self.length < 2 {
            return Err(CscaleError::InvalidParameter(
                "length must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// Iterate a coupled logistic network.
///
/// With `seed_for_initials` set, initial values are drawn uniformly from
/// (0.2, 0.8) instead of the spec's initial state. Fails with a divergence
/// error naming the step and node if the trajectory leaves `[0,1]^N`.
pub fn generate_logistic_network(
    spec: &LogisticNetworkSpec,
    seed_for_initials: Option<u64>,
) -> Result<Vec<ScalarSeries>, CscaleError> {
    spec.validate()?;
    let n = spec.growth_rates.len();
    let mut state: Vec<f64> = match seed_for_initials {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.gen_range(0.2..0.8)).collect()
        }
        None => spec.initial_state.clone(),
    };
    let mut next = vec![0.0_f64; n];
    let mut outputs: Vec<Vec<f64>> = vec![Vec::with_capacity(spec.length); n];

    let total = spec.transient + spec.length;
    for step in 0..total {
        for i in 0..n {
            let r = spec.growth_rates[i];
            let mut drive = r * state[i];
            for j in 0..n {
                let mu = spec.coupling[i][j];
                if mu != 0.0 {
                    drive += mu * state[j];
                }
            }
            let value = state[i] * (r - drive);
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(CscaleError::Divergence(format!(
                    "node {} left [0,1] at step {} (value {})",
                    i + 1,
                    step,
                    value
                )));
            }
            next[i] = value;
        }
        state.copy_from_slice(&next);
        if step >= spec.transient {
            for i in 0..n {
                outputs[i].push(state[i]);
            }
        }
    }

    outputs
        .into_iter()
        .enumerate()
        .map(|(i, values)| ScalarSeries::from_values(format!("x{}", i + 1), values))
        .collect()
}

/// Pair of unidirectionally or bidirectionally coupled Lorenz subsystems
/// observed through `y_1` and `y_2`:
/// `dx_i = sigma_i (y_i - x_i) + mu_ij x_j`,
/// `dy_i = x_i (rho_i - z_i) - y_i`,
/// `dz_i = x_i y_i - beta_i z_i`, with `i != j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzPairSpec {
    pub sigma: [f64; 2],
    pub rho: [f64; 2],
    pub beta: [f64; 2],
    /// Influence of subsystem 2 on subsystem 1 (enters the `dx_1`
    /// equation).
    pub mu12: f64,
    /// Influence of subsystem 1 on subsystem 2.
    pub mu21: f64,
    /// Integration step.
    pub dt: f64,
    /// Sampling interval; must be an integer multiple of `dt`.
    pub sampling_interval: f64,
    /// Time shift of the first sample after the transient; rounded to the
    /// nearest integration step.
    pub time_shift: f64,
    /// State layout `(x1, y1, z1, x2, y2, z2)`.
    pub initial_state: [f64; 6],
    /// Number of samples per observable.
    pub samples: usize,
    /// Time discarded before sampling.
    pub transient_time: f64,
}

impl Default for LorenzPairSpec {
    fn default() -> Self {
        Self {
            sigma: [10.0, 10.0],
            rho: [28.0, 28.0],
            beta: [8.0 / 3.0, 8.0 / 3.0],
            mu12: 0.0,
            mu21: 0.0,
            dt: 1e-3,
            sampling_interval: 0.05,
            time_shift: 0.0,
            initial_state: [1.0, 1.0, 1.0, -4.0, -6.0, 21.0],
            samples: 10_000,
            transient_time: 100.0,
        }
    }
}

impl LorenzPairSpec {
    fn validate(&self) -> Result<usize, CscaleError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(CscaleError::InvalidParameter(
                "integration step must be positive".into(),
            ));
        }
        if self.sampling_interval < self.dt {
            return Err(CscaleError::InvalidParameter(
                "sampling interval must be at least one integration step".into(),
            ));
        }
        let ratio = self.sampling_interval / self.dt;
        let stride = ratio.round();
        if (ratio - stride).abs() > 1e-9 * ratio {
            return Err(CscaleError::InvalidParameter(format!(
                "sampling interval must be an integer multiple of dt (ratio {ratio})"
            )));
        }
        if self.samples < 2 {
            return Err(CscaleError::InvalidParameter(
                "need at least 2 samples".into(),
            ));
        }
        if self.transient_time < 0.0 || self.time_shift < 0.0 {
            return Err(CscaleError::InvalidParameter(
                "transient time and time shift must be nonnegative".into(),
            ));
        }
        Ok(stride as usize)
    }
}

type State6 = [f64; 6];

fn lorenz_pair_derivative(spec: &LorenzPairSpec, s: &State6) -> State6 {
    let [x1, y1, z1, x2, y2, z2] = *s;
    [
        spec.sigma[0] * (y1 - x1) + spec.mu12 * x2,
        x1 * (spec.rho[0] - z1) - y1,
        x1 * y1 - spec.beta[0] * z1,
        spec.sigma[1] * (y2 - x2) + spec.mu21 * x1,
        x2 * (spec.rho[1] - z2) - y2,
        x2 * y2 - spec.beta[1] * z2,
    ]
}

/// One classical 4th-order Runge-Kutta step of an autonomous field.
pub(crate) fn rk4_step<F>(state: &State6, dt: f64, field: F) -> State6
where
    F: Fn(&State6) -> State6,
{
    let k1 = field(state);
    let mut mid = *state;
    for i in 0..6 {
        mid[i] = state[i] + 0.5 * dt * k1[i];
    }
    let k2 = field(&mid);
    for i in 0..6 {
        mid[i] = state[i] + 0.5 * dt * k2[i];
    }
    let k3 = field(&mid);
    for i in 0..6 {
        mid[i] = state[i] + dt * k3[i];
    }
    let k4 = field(&mid);
    let mut out = *state;
    for i in 0..6 {
        out[i] = state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate the coupled Lorenz pair and sample both `y` observables every
/// `sampling_interval`, starting `time_shift` after the transient.
pub fn generate_coupled_lorenz(
    spec: &LorenzPairSpec,
) -> Result<(ScalarSeries, ScalarSeries), CscaleError> {
    let stride = spec.validate()?;
    let transient_steps = (spec.transient_time / spec.dt).round() as usize;
    let shift_steps = (spec.time_shift / spec.dt).round() as usize;

    let field = |s: &State6| lorenz_pair_derivative(spec, s);
    let mut state = spec.initial_state;
    let advance = |state: &mut State6, steps: usize, t_base: usize| -> Result<(), CscaleError> {
        for k in 0..steps {
            *state = rk4_step(state, spec.dt, field);
            if state.iter().any(|v| !v.is_finite()) {
                return Err(CscaleError::Divergence(format!(
                    "non-finite state at t = {}",
                    (t_base + k + 1) as f64 * spec.dt
                )));
            }
        }
        Ok(())
    };

    advance(&mut state, transient_steps + shift_steps, 0)?;
    let mut y1 = Vec::with_capacity(spec.samples);
    let mut y2 = Vec::with_capacity(spec.samples);
    y1.push(state[1]);
    y2.push(state[4]);
    let mut elapsed = transient_steps + shift_steps;
    for _ in 1..spec.samples {
        advance(&mut state, stride, elapsed)?;
        elapsed += stride;
        y1.push(state[1]);
        y2.push(state[4]);
    }

    Ok((
        ScalarSeries::new("y1", y1, spec.sampling_interval)?,
        ScalarSeries::new("y2", y2, spec.sampling_interval)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn logistic_first_iterates_by_hand() {
        let spec = LogisticNetworkSpec {
            growth_rates: vec![3.8, 3.7],
            coupling: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            initial_state: vec![0.4, 0.2],
            length: 3,
            transient: 0,
        };
        let series = generate_logistic_network(&spec, None).unwrap();
        // x1' = 0.4 * (3.8 - 3.8*0.4) = 0.912; x2' = 0.2 * (3.7 - 3.7*0.2)
        // = 0.592.
        assert_abs_diff_eq!(series[0].values()[0], 0.912, epsilon = 1e-15);
        assert_abs_diff_eq!(series[1].values()[0], 0.592, epsilon = 1e-15);
    }

    #[test]
    fn logistic_fixed_point_is_constant() {
        // r = 2 makes both the fixed point 1 - 1/r = 0.5 and the map
        // arithmetic exact in binary floating point, so the orbit is
        // constant to the last bit.
        let r = 2.0;
        let fixed = 1.0 - 1.0 / r;
        let spec = LogisticNetworkSpec {
            growth_rates: vec![r],
            coupling: vec![vec![0.0]],
            initial_state: vec![fixed],
            length: 50,
            transient: 10,
        };
        let series = generate_logistic_network(&spec, None).unwrap();
        for &v in series[0].values() {
            assert_eq!(v, fixed);
        }
    }

    #[test]
    fn logistic_ring_stays_bounded() {
        let spec = LogisticNetworkSpec::ring(5, 0.2, 5000);
        let series = generate_logistic_network(&spec, Some(7)).unwrap();
        assert_eq!(series.len(), 5);
        for s in &series {
            assert_eq!(s.len(), 5000);
            assert!(s.values().iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn logistic_relabeling_permutes_outputs() {
        // Swapping the two nodes in the spec swaps the generated series.
        let spec = LogisticNetworkSpec {
            growth_rates: vec![3.8, 3.7],
            coupling: vec![vec![0.0, 0.1], vec![0.25, 0.0]],
            initial_state: vec![0.4, 0.2],
            length: 200,
            transient: 100,
        };
        let swapped = LogisticNetworkSpec {
            growth_rates: vec![3.7, 3.8],
            coupling: vec![vec![0.0, 0.25], vec![0.1, 0.0]],
            initial_state: vec![0.2, 0.4],
            length: 200,
            transient: 100,
        };
        let a = generate_logistic_network(&spec, None).unwrap();
        let b = generate_logistic_network(&swapped, None).unwrap();
        assert_eq!(a[0].values(), b[1].values());
        assert_eq!(a[1].values(), b[0].values());
    }

    #[test]
    fn logistic_determinism() {
        let spec = LogisticNetworkSpec::pair(0.0, 0.3, 500);
        let a = generate_logistic_network(&spec, Some(11)).unwrap();
        let b = generate_logistic_network(&spec, Some(11)).unwrap();
        for (sa, sb) in a.iter().zip(&b) {
            assert_eq!(sa.values(), sb.values());
        }
    }

    #[test]
    fn tree_edges_match_definition() {
        let spec = LogisticNetworkSpec::tree(0.2, 100);
        let mut edges = spec.true_edges();
        edges.sort_unstable();
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (1, 4)]);
    }

    #[test]
    fn lorenz_equilibrium_at_origin() {
        let spec = LorenzPairSpec {
            initial_state: [0.0; 6],
            samples: 100,
            transient_time: 1.0,
            ..Default::default()
        };
        let (y1, y2) = generate_coupled_lorenz(&spec).unwrap();
        assert!(y1.values().iter().all(|&v| v == 0.0));
        assert!(y2.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rk4_single_step_matches_fine_reference() {
        // One dt = 1e-3 step from (1,1,1) against 100 steps at dt = 1e-5.
        let spec = LorenzPairSpec {
            initial_state: [1.0, 1.0, 1.0, 0.0, 0.0, 0.0],
            ..Default::default()
        };
        let field = |s: &State6| lorenz_pair_derivative(&spec, s);
        let coarse = rk4_step(&spec.initial_state, 1e-3, field);
        let mut fine = spec.initial_state;
        for _ in 0..100 {
            fine = rk4_step(&fine, 1e-5, field);
        }
        for i in 0..3 {
            assert!(
                (coarse[i] - fine[i]).abs() <= 1e-9,
                "component {i}: {} vs {}",
                coarse[i],
                fine[i]
            );
        }
    }

    #[test]
    fn lorenz_driven_run_is_bounded_and_varied() {
        let spec = LorenzPairSpec {
            mu21: 1.0,
            samples: 10_000,
            ..Default::default()
        };
        let (y1, y2) = generate_coupled_lorenz(&spec).unwrap();
        for s in [&y1, &y2] {
            assert_eq!(s.len(), 10_000);
            let min = s.values().iter().cloned().fold(f64::INFINITY, f64::min);
            let max = s.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(min.is_finite() && max.is_finite());
            assert!(max - min > 1.0, "observable barely moves: {min}..{max}");
            assert!(max.abs() < 100.0 && min.abs() < 100.0);
        }
    }

    #[test]
    fn uncoupled_subsystem_ignores_partner() {
        // With both couplings zero, subsystem 1 must be bit-identical no
        // matter what subsystem 2 does.
        let base = LorenzPairSpec {
            samples: 500,
            transient_time: 2.0,
            ..Default::default()
        };
        let other = LorenzPairSpec {
            initial_state: [1.0, 1.0, 1.0, 9.0, -3.0, 30.0],
            ..base.clone()
        };
        let (y1_a, _) = generate_coupled_lorenz(&base).unwrap();
        let (y1_b, _) = generate_coupled_lorenz(&other).unwrap();
        assert_eq!(y1_a.values(), y1_b.values());
    }

    #[test]
    fn lorenz_rejects_non_multiple_sampling() {
        let spec = LorenzPairSpec {
            sampling_interval: 0.0025,
            dt: 0.001,
            ..Default::default()
        };
        assert!(matches!(
            generate_coupled_lorenz(&spec).unwrap_err(),
            CscaleError::InvalidParameter(_)
        ));
    }
}
