//! The `generate` subcommands: benchmark system generation to CSV.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use cscale_core::seeding;
use cscale_core::{
    generate_coupled_lorenz, generate_logistic_network, LogisticNetworkSpec, LorenzPairSpec,
    ScalarSeries,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::io;

#[derive(Debug, Subcommand)]
pub enum GenerateCommand {
    /// Two coupled logistic species (growth rates 3.8 and 3.7).
    LogisticPair(LogisticPairArgs),
    /// Ring of logistic species, each driving its successor.
    LogisticRing(LogisticRingArgs),
    /// Five logistic species on a tree: 1 -> {2,4}, 2 -> {3,5}.
    LogisticTree(LogisticTreeArgs),
    /// Coupled Lorenz subsystems observed through y1 and y2.
    LorenzPair(LorenzPairArgs),
}

#[derive(Debug, Args)]
pub struct CommonGenArgs {
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,

    /// Seed for randomized initial conditions; omit for the fixed
    /// defaults.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Standard deviation of additive Gaussian observation noise.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
}

#[derive(Debug, Args)]
pub struct LogisticPairArgs {
    #[command(flatten)]
    pub common: CommonGenArgs,
    /// Influence of species 2 on species 1.
    #[arg(long, default_value_t = 0.0)]
    pub mu12: f64,
    /// Influence of species 1 on species 2.
    #[arg(long, default_value_t = 0.0)]
    pub mu21: f64,
    /// Growth rate of species 1.
    #[arg(long, default_value_t = 3.8)]
    pub r1: f64,
    /// Growth rate of species 2.
    #[arg(long, default_value_t = 3.7)]
    pub r2: f64,
    /// Samples per series.
    #[arg(long, default_value_t = 5000)]
    pub length: usize,
    /// Iterations discarded before recording.
    #[arg(long, default_value_t = 1000)]
    pub transient: usize,
}

#[derive(Debug, Args)]
pub struct LogisticRingArgs {
    #[command(flatten)]
    pub common: CommonGenArgs,
    /// Number of species.
    #[arg(long, default_value_t = 5)]
    pub nodes: usize,
    /// Coupling strength along the ring.
    #[arg(long, default_value_t = 0.2)]
    pub coupling: f64,
    #[arg(long, default_value_t = 5000)]
    pub length: usize,
    #[arg(long, default_value_t = 1000)]
    pub transient: usize,
    /// Also write the true edge list here.
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LogisticTreeArgs {
    #[command(flatten)]
    pub common: CommonGenArgs,
    /// Coupling strength along the tree edges.
    #[arg(long, default_value_t = 0.2)]
    pub coupling: f64,
    #[arg(long, default_value_t = 5000)]
    pub length: usize,
    #[arg(long, default_value_t = 1000)]
    pub transient: usize,
    /// Also write the true edge list here.
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LorenzPairArgs {
    #[command(flatten)]
    pub common: CommonGenArgs,
    /// Influence of subsystem 2 on subsystem 1.
    #[arg(long, default_value_t = 0.0)]
    pub mu12: f64,
    /// Influence of subsystem 1 on subsystem 2.
    #[arg(long, default_value_t = 0.0)]
    pub mu21: f64,
    #[arg(long, default_value_t = 10.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 28.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 8.0 / 3.0)]
    pub beta: f64,
    /// Integration step.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Sampling interval (integer multiple of dt).
    #[arg(long, default_value_t = 0.05)]
    pub omega: f64,
    /// Time shift of the first sample after the transient.
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    /// Samples per observable.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Time discarded before sampling.
    #[arg(long, default_value_t = 100.0)]
    pub transient_time: f64,
}

/// Additive seeded Gaussian observation noise, one stream per series.
fn add_noise(series: &mut [ScalarSeries], stddev: f64, seed: u64) -> Result<()> {
    if stddev == 0.0 {
        return Ok(());
    }
    let normal = Normal::new(0.0, stddev).context("invalid noise level")?;
    for (k, s) in series.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seeding::mix(seed, &[0x6e6f6973, k as u64]));
        let noisy: Vec<f64> = s
            .values()
            .iter()
            .map(|v| v + normal.sample(&mut rng))
            .collect();
        *s = ScalarSeries::new(s.label(), noisy, s.sample_interval())?;
    }
    Ok(())
}

pub fn run(cmd: GenerateCommand) -> Result<()> {
    match cmd {
        GenerateCommand::LogisticPair(args) => {
            let spec = LogisticNetworkSpec {
                growth_rates: vec![args.r1, args.r2],
                coupling: vec![vec![0.0, args.mu12], vec![args.mu21, 0.0]],
                initial_state: vec![0.4, 0.2],
                length: args.length,
                transient: args.transient,
            };
            let mut series = generate_logistic_network(&spec, args.common.seed)?;
            add_noise(&mut series, args.common.noise, args.common.seed.unwrap_or(0))?;
            io::write_series_csv(&args.common.out, &series)?;
            println!(
                "wrote {} ({} samples per series)",
                args.common.out.display(),
                args.length
            );
        }
        GenerateCommand::LogisticRing(args) => {
            let spec = LogisticNetworkSpec::ring(args.nodes, args.coupling, args.length);
            let spec = LogisticNetworkSpec {
                transient: args.transient,
                ..spec
            };
            let mut series = generate_logistic_network(&spec, args.common.seed)?;
            add_noise(&mut series, args.common.noise, args.common.seed.unwrap_or(0))?;
            io::write_series_csv(&args.common.out, &series)?;
            if let Some(truth) = &args.truth_out {
                write_truth(truth, &spec, &series)?;
            }
            println!(
                "wrote {} ({} nodes, ring)",
                args.common.out.display(),
                args.nodes
            );
        }
        GenerateCommand::LogisticTree(args) => {
            let spec = LogisticNetworkSpec::tree(args.coupling, args.length);
            let spec = LogisticNetworkSpec {
                transient: args.transient,
                ..spec
            };
            let mut series = generate_logistic_network(&spec, args.common.seed)?;
            add_noise(&mut series, args.common.noise, args.common.seed.unwrap_or(0))?;
            io::write_series_csv(&args.common.out, &series)?;
            if let Some(truth) = &args.truth_out {
                write_truth(truth, &spec, &series)?;
            }
            println!("wrote {} (5 nodes, tree)", args.common.out.display());
        }
        GenerateCommand::LorenzPair(args) => {
            let mut initial = [1.0, 1.0, 1.0, -4.0, -6.0, 21.0];
            if let Some(seed) = args.common.seed {
                // Seeded runs perturb the canonical initial state; the
                // transient settles the trajectory onto the attractor.
                use rand::Rng;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for component in &mut initial {
                    *component += rng.gen_range(-1.0..1.0);
                }
            }
            let spec = LorenzPairSpec {
                sigma: [args.sigma, args.sigma],
                rho: [args.rho, args.rho],
                beta: [args.beta, args.beta],
                mu12: args.mu12,
                mu21: args.mu21,
                dt: args.dt,
                sampling_interval: args.omega,
                time_shift: args.nu,
                initial_state: initial,
                samples: args.samples,
                transient_time: args.transient_time,
            };
            let (y1, y2) = generate_coupled_lorenz(&spec)?;
            let mut series = vec![y1, y2];
            add_noise(&mut series, args.common.noise, args.common.seed.unwrap_or(0))?;
            io::write_series_csv(&args.common.out, &series)?;
            println!(
                "wrote {} ({} samples at interval {})",
                args.common.out.display(),
                args.samples,
                args.omega
            );
        }
    }
    Ok(())
}

fn write_truth(
    path: &std::path::Path,
    spec: &LogisticNetworkSpec,
    series: &[ScalarSeries],
) -> Result<()> {
    let edges: Vec<(String, String)> = spec
        .true_edges()
        .into_iter()
        .map(|(src, dst)| {
            (
                series[src].label().to_string(),
                series[dst].label().to_string(),
            )
        })
        .collect();
    io::write_edges(path, &edges)?;
    println!("wrote {}", path.display());
    Ok(())
}
