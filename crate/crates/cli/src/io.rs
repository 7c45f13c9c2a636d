//! CSV ingestion and emission, edge lists, and curve dumps.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use cscale_core::{CausalityResult, ScalarSeries};

/// Format a float with 17 significant digits so a read-back recovers the
/// exact bits.
pub fn fmt_g17(v: f64) -> String {
    format!("{:.16e}", v)
}

/// Column selection options for CSV ingestion.
#[derive(Debug, Clone, Default)]
pub struct ReadOptions {
    /// Columns to load, by header name or zero-based index. Empty loads
    /// every column except the index column.
    pub columns: Vec<String>,
    /// Column to drop (a time index), by header name or zero-based index.
    pub index_col: Option<String>,
    /// Sample interval attached to every series.
    pub sample_interval: f64,
}

impl ReadOptions {
    pub fn new() -> Self {
        Self {
            columns: Vec::new(),
            index_col: None,
            sample_interval: 1.0,
        }
    }
}

/// Read scalar series from a CSV file, one per selected column.
///
/// The header row is detected by attempting to parse the first row as
/// numbers. Ragged rows, non-numeric cells and non-finite values are
/// rejected with their file location; rows and columns in messages are
/// 1-based.
pub fn read_series_csv(path: &Path, options: &ReadOptions) -> Result<Vec<ScalarSeries>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut lines = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("{}: read error at line {}", path.display(), i + 1))?;
        if !line.trim().is_empty() {
            lines.push((i + 1, line));
        }
    }
    if lines.is_empty() {
        bail!("{}: file is empty", path.display());
    }

    let split = |s: &str| -> Vec<String> { s.split(',').map(|c| c.trim().to_string()).collect() };
    let first = split(&lines[0].1);
    let has_header = first.iter().any(|cell| cell.parse::<f64>().is_err());
    let (header, data_lines) = if has_header {
        (first.clone(), &lines[1..])
    } else {
        (
            (0..first.len()).map(|i| format!("col{i}")).collect(),
            &lines[..],
        )
    };
    if data_lines.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    let n_cols = header.len();

    // Resolve a column reference: header name first, then numeric index.
    let resolve = |name: &str| -> Result<usize> {
        if let Some(i) = header.iter().position(|h| h == name) {
            return Ok(i);
        }
        if let Ok(i) = name.parse::<usize>() {
            if i < n_cols {
                return Ok(i);
            }
        }
        bail!(
            "{}: no column '{}' (available: {})",
            path.display(),
            name,
            header.join(", ")
        );
    };

    let index_idx = options
        .index_col
        .as_deref()
        .map(resolve)
        .transpose()?;
    let selected: Vec<usize> = if options.columns.is_empty() {
        (0..n_cols).filter(|i| Some(*i) != index_idx).collect()
    } else {
        options
            .columns
            .iter()
            .map(|c| resolve(c))
            .collect::<Result<_>>()?
    };
    if selected.is_empty() {
        bail!("{}: no columns selected", path.display());
    }

    let mut values: Vec<Vec<f64>> = vec![Vec::with_capacity(data_lines.len()); selected.len()];
    for (line_no, line) in data_lines {
        let cells = split(line);
        if cells.len() != n_cols {
            bail!(
                "{}: row at line {} has {} cells, expected {}",
                path.display(),
                line_no,
                cells.len(),
                n_cols
            );
        }
        for (k, &col) in selected.iter().enumerate() {
            let parsed: f64 = cells[col].parse().with_context(|| {
                format!(
                    "{}: non-numeric cell at line {} column {} ('{}')",
                    path.display(),
                    line_no,
                    col + 1,
                    cells[col]
                )
            })?;
            if !parsed.is_finite() {
                bail!(
                    "{}: non-finite cell at line {} column {} ('{}')",
                    path.display(),
                    line_no,
                    col + 1,
                    cells[col]
                );
            }
            values[k].push(parsed);
        }
    }

    selected
        .iter()
        .zip(values)
        .map(|(&col, vals)| {
            ScalarSeries::new(header[col].clone(), vals, options.sample_interval)
                .map_err(anyhow::Error::from)
        })
        .collect()
}

/// Write series as CSV columns with a header row, 17 significant digits.
pub fn write_series_csv(path: &Path, series: &[ScalarSeries]) -> Result<()> {
    let mut out = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let header: Vec<&str> = series.iter().map(|s| s.label()).collect();
    writeln!(out, "{}", header.join(","))?;
    let rows = series[0].len();
    for t in 0..rows {
        let row: Vec<String> = series.iter().map(|s| fmt_g17(s.values()[t])).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Read a truth edge list: one `src->dst` per line, `#` comments allowed.
pub fn read_edges(path: &Path) -> Result<BTreeSet<(String, String)>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut edges = BTreeSet::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((src, dst)) = trimmed.split_once("->") else {
            bail!(
                "{}: line {} is not an edge ('src->dst'): '{}'",
                path.display(),
                i + 1,
                trimmed
            );
        };
        edges.insert((src.trim().to_string(), dst.trim().to_string()));
    }
    if edges.is_empty() {
        bail!("{}: no edges found", path.display());
    }
    Ok(edges)
}

/// Write a truth edge list.
pub fn write_edges(path: &Path, edges: &[(String, String)]) -> Result<()> {
    let mut out = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    for (src, dst) in edges {
        writeln!(out, "{src}->{dst}")?;
    }
    Ok(())
}

/// Dump one direction's scaling curve as a plotter-ready CSV: the fit
/// summary rides along as comment lines.
pub fn write_curve_csv(path: &Path, result: &CausalityResult) -> Result<()> {
    let mut out = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    writeln!(out, "# direction: {} -> {}", result.from, result.to)?;
    writeln!(out, "# slope: {}", fmt_g17(result.fit.slope))?;
    writeln!(out, "# intercept: {}", fmt_g17(result.fit.intercept))?;
    writeln!(out, "# p_value: {}", fmt_g17(result.p_value))?;
    writeln!(out, "j,epsilon,ln_epsilon,delta,valid_anchors,in_fit")?;
    let curve = &result.curve;
    for (j, (&eps, &delta)) in curve
        .grid()
        .values()
        .iter()
        .zip(curve.deltas())
        .enumerate()
    {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            j + 1,
            fmt_g17(eps),
            fmt_g17(eps.ln()),
            fmt_g17(delta),
            curve.valid_counts()[j],
            result.fit.fit_indices.contains(&j) as u8
        )?;
    }
    Ok(())
}

/// Read a scores CSV (`src,dst,score` rows, optional header).
pub fn read_scores_csv(path: &Path) -> Result<std::collections::BTreeMap<(String, String), f64>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut scores = std::collections::BTreeMap::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = trimmed.split(',').map(|c| c.trim()).collect();
        if cells.len() != 3 {
            bail!(
                "{}: line {} must be 'src,dst,score', got '{}'",
                path.display(),
                i + 1,
                trimmed
            );
        }
        match cells[2].parse::<f64>() {
            Ok(score) if score.is_finite() => {
                scores.insert((cells[0].to_string(), cells[1].to_string()), score);
            }
            _ if i == 0 => continue, // header row
            _ => bail!(
                "{}: non-numeric score at line {}: '{}'",
                path.display(),
                i + 1,
                cells[2]
            ),
        }
    }
    if scores.is_empty() {
        bail!("{}: no scores found", path.display());
    }
    Ok(scores)
}
