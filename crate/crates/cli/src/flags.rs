//! The shared flag namespace for detection commands, with config-file and
//! manifest overrides. Explicit flags win over the config file, which wins
//! over a loaded manifest, which wins over defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use cscale_core::{DetectionConfig, EmbeddingParams};

use crate::io::ReadOptions;

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input CSV file (columns are series; optional header row).
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Comma-separated columns to use, by header name or 0-based index.
    #[arg(long, value_delimiter = ',')]
    pub cols: Vec<String>,

    /// Column holding a time index, dropped from the data.
    #[arg(long)]
    pub index_col: Option<String>,

    /// Sample interval of the input series.
    #[arg(long)]
    pub sample_interval: Option<f64>,
}

impl InputArgs {
    pub fn read_options(&self) -> ReadOptions {
        ReadOptions {
            columns: self.cols.clone(),
            index_col: self.index_col.clone(),
            sample_interval: self.sample_interval.unwrap_or(1.0),
        }
    }
}

#[derive(Debug, Clone, Args, Default)]
pub struct DetectFlags {
    /// Embedding dimension for every series (omit for automatic
    /// selection).
    #[arg(long)]
    pub embed_dim: Option<usize>,

    /// Embedding lag in samples for every series.
    #[arg(long)]
    pub embed_lag: Option<usize>,

    /// Largest lag scanned by automatic lag selection.
    #[arg(long)]
    pub max_lag: Option<usize>,

    /// Largest dimension scanned by automatic dimension selection.
    #[arg(long)]
    pub max_dim: Option<usize>,

    /// Number of epsilon grid radii.
    #[arg(long)]
    pub eps_count: Option<usize>,

    /// Shrink factor of the smallest radius relative to the diameter.
    #[arg(long)]
    pub eps_shrink: Option<f64>,

    /// Theiler exclusion window in samples (default: one embedding
    /// window of the effect series).
    #[arg(long)]
    pub theiler: Option<usize>,

    /// Require the predecessor state to lie in the same epsilon ball
    /// (for directly measured dynamical variables).
    #[arg(long)]
    pub dd: bool,

    /// Segments for surrogate shuffling.
    #[arg(long)]
    pub segments: Option<usize>,

    /// Surrogate replicates.
    #[arg(long)]
    pub replicates: Option<usize>,

    /// Significance level.
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Master seed for all derived random streams.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Thread count for internal parallelism (default: all cores).
    /// Results are identical for any value.
    #[arg(long)]
    pub threads: Option<usize>,

    /// key=value file supplying any of the flags above; explicit flags
    /// win.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Load configuration from the manifest embedded in a previous
    /// results file; config file and flags still win.
    #[arg(long)]
    pub from_manifest: Option<PathBuf>,
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            bail!(
                "{}: line {} is not 'key=value': '{}'",
                path.display(),
                i + 1,
                trimmed
            );
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_as<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| anyhow::anyhow!("config key '{key}': cannot parse '{value}': {e}"))
}

impl DetectFlags {
    /// Resolve the effective detection configuration.
    pub fn resolve(&self, manifest_config: Option<DetectionConfig>) -> Result<DetectionConfig> {
        let mut cfg = manifest_config.unwrap_or_default();

        if let Some(path) = &self.config {
            let map = parse_config_file(path)?;
            for (key, value) in &map {
                match key.as_str() {
                    "embed-dim" => {
                        let dim: usize = parse_as(key, value)?;
                        let lag = cfg.embedding.map(|e| e.lag).unwrap_or(1);
                        cfg.embedding = Some(EmbeddingParams::new(dim, lag)?);
                    }
                    "embed-lag" => {
                        let lag: usize = parse_as(key, value)?;
                        let dim = cfg.embedding.map(|e| e.dimension).unwrap_or(1);
                        cfg.embedding = Some(EmbeddingParams::new(dim, lag)?);
                    }
                    "max-lag" => cfg.auto_embed.max_lag = parse_as(key, value)?,
                    "max-dim" => cfg.auto_embed.max_dim = parse_as(key, value)?,
                    "eps-count" => cfg.eps_count = parse_as(key, value)?,
                    "eps-shrink" => cfg.eps_shrink = parse_as(key, value)?,
                    "theiler" => cfg.theiler_window = Some(parse_as(key, value)?),
                    "dd" => cfg.dd_condition = parse_as(key, value)?,
                    "segments" => cfg.n_segments = parse_as(key, value)?,
                    "replicates" => cfg.n_replicates = parse_as(key, value)?,
                    "alpha" => cfg.alpha = parse_as(key, value)?,
                    "seed" => cfg.master_seed = parse_as(key, value)?,
                    other => bail!(
                        "{}: unknown config key '{}'",
                        path.display(),
                        other
                    ),
                }
            }
        }

        if self.embed_dim.is_some() || self.embed_lag.is_some() {
            let prev = cfg.embedding;
            let dim = self
                .embed_dim
                .or(prev.map(|e| e.dimension))
                .unwrap_or(1);
            let lag = self.embed_lag.or(prev.map(|e| e.lag)).unwrap_or(1);
            cfg.embedding = Some(EmbeddingParams::new(dim, lag)?);
        }
        if let Some(v) = self.max_lag {
            cfg.auto_embed.max_lag = v;
        }
        if let Some(v) = self.max_dim {
            cfg.auto_embed.max_dim = v;
        }
        if let Some(v) = self.eps_count {
            cfg.eps_count = v;
        }
        if let Some(v) = self.eps_shrink {
            cfg.eps_shrink = v;
        }
        if let Some(v) = self.theiler {
            cfg.theiler_window = Some(v);
        }
        if self.dd {
            cfg.dd_condition = true;
        }
        if let Some(v) = self.segments {
            cfg.n_segments = v;
        }
        if let Some(v) = self.replicates {
            cfg.n_replicates = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.seed {
            cfg.master_seed = v;
        }
        Ok(cfg)
    }

    /// Install a bounded rayon pool when `--threads` was given and run the
    /// job inside it. Results are schedule-independent by construction.
    pub fn with_thread_pool<T>(&self, job: impl FnOnce() -> Result<T> + Send) -> Result<T>
    where
        T: Send,
    {
        match self.threads {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .context("cannot build thread pool")?;
                pool.install(job)
            }
            None => job(),
        }
    }
}
